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

#include "dccot/transcript.hpp"

namespace {

using namespace dccot;

const WhitespaceCounter kWs;
const TagConfig kTags;

std::string filler(std::size_t n, const std::string& stem) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? " " : "") + stem + std::to_string(i);
  return out;
}

Transcript make(std::size_t rounds, std::size_t k, std::size_t words) {
  std::vector<std::string> directors(rounds + 1, filler(words, "d"));
  std::vector<std::vector<std::string>> workers(rounds, std::vector<std::string>(k));
  for (auto& r : workers)
    for (std::size_t i = 0; i < k; ++i) r[i] = filler(words * (i + 1), "w");
  return make_transcript("", directors, workers, Termination::Eos, kWs);
}

void BM_Render(benchmark::State& state) {
  const Transcript t = make(state.range(0), 5, 200);
  for (auto _ : state) benchmark::DoNotOptimize(render_transcript(t, kTags));
}
BENCHMARK(BM_Render)->Arg(1)->Arg(3);

void BM_Parse(benchmark::State& state) {
  const std::string text = render_transcript(make(state.range(0), 5, 200), kTags);
  for (auto _ : state) benchmark::DoNotOptimize(parse_transcript(text, kTags, kWs));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Parse)->Arg(1)->Arg(3);

void BM_Validate(benchmark::State& state) {
  const std::string text = render_transcript(make(3, 5, 200), kTags);
  for (auto _ : state) benchmark::DoNotOptimize(validate_format(text, kTags));
}
BENCHMARK(BM_Validate);

void BM_LongestPath(benchmark::State& state) {
  const Transcript t = make(state.range(0), 8, 10);
  for (auto _ : state) benchmark::DoNotOptimize(longest_path_length(t));
}
BENCHMARK(BM_LongestPath)->Arg(1)->Arg(16);

}  // namespace
