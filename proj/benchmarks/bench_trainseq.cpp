// Copyright 2026 The dccot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "dccot/trainseq.hpp"

namespace {

using namespace dccot;

const WhitespaceCounter kWs;
const TagConfig kTags;

Transcript make(std::size_t rounds, std::size_t k, std::size_t words) {
  std::string text;
  for (std::size_t i = 0; i < words; ++i) text += "t ";
  std::vector<std::string> directors(rounds + 1, text);
  std::vector<std::vector<std::string>> workers(rounds, std::vector<std::string>(k, text));
  return make_transcript("prompt here", directors, workers, Termination::Eos, kWs);
}

void BM_BuildSequence(benchmark::State& state) {
  const Transcript t = make(state.range(0), 4, state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(train::build_training_sequence(t, kTags, kWs));
}
BENCHMARK(BM_BuildSequence)->Args({1, 200})->Args({2, 500});

void BM_ExpandDense(benchmark::State& state) {
  const auto seq = train::build_training_sequence(make(2, 4, 100), kTags, kWs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(train::expand_dense(seq.mask, seq.layout, 1u << 14));
  }
}
BENCHMARK(BM_ExpandDense);

}  // namespace
