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

#include <random>

#include "dccot/eval.hpp"

namespace {

using namespace dccot::eval;

EvalRecord record(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ans(0, 4);
  std::uniform_int_distribution<std::size_t> len(100, 9000);
  EvalRecord r{"p", {}};
  for (std::size_t i = 0; i < n; ++i) {
    const int a = ans(rng);
    r.responses.push_back({std::to_string(a), a == 0, len(rng)});
  }
  return r;
}

void BM_Maj3ClosedForm(benchmark::State& state) {
  const EvalRecord r = record(state.range(0));
  const ExactMatchOracle oracle;
  for (auto _ : state) benchmark::DoNotOptimize(maj_at_3(r, oracle));
}
BENCHMARK(BM_Maj3ClosedForm)->Arg(16)->Arg(256);

void BM_MajKEnumerated(benchmark::State& state) {
  const EvalRecord r = record(16);
  const ExactMatchOracle oracle;
  for (auto _ : state) benchmark::DoNotOptimize(maj_at_k(r, oracle, state.range(0)));
}
BENCHMARK(BM_MajKEnumerated)->Arg(3)->Arg(5);

}  // namespace
