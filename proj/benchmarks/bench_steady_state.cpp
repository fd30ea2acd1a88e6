// Copyright 2026 The wgbragg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "wgbragg/steady_state.hpp"

namespace {

using namespace wgbragg;

void BM_LinearSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ModelParams p = make_chain(n, 1.0, 1.2, rates_from_beta(0.0707, 0.85));
  const SteadyStateSolver solver(p);
  for (auto _ : state) benchmark::DoNotOptimize(solver.right_rate(0.6435, 1.5));
}
BENCHMARK(BM_LinearSolve)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_CouplingMatrices(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ModelParams p = make_chain(n, 1.0, 1.2, rates_from_beta(0.0707, 0.85));
  for (auto _ : state) benchmark::DoNotOptimize(guided_coupling_matrices(p));
}
BENCHMARK(BM_CouplingMatrices)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
