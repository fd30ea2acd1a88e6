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

#include "wgbragg/closed_form.hpp"

namespace {

using namespace wgbragg;

const ModelParams& chain() {
  static const ModelParams p = make_chain(1, 1.0, 1.2, rates_from_beta(0.0707, 1.0));
  return p;
}

void BM_DirectSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(closed::rate_direct_sum(n, 0.6435, 1.5, chain()));
}
BENCHMARK(BM_DirectSum)->RangeMultiplier(4)->Range(16, 4096);

void BM_GeometricSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(closed::rate_geometric_sum(n, 0.6435, 1.5, chain()));
}
BENCHMARK(BM_GeometricSum)->RangeMultiplier(4)->Range(16, 4096);

void BM_MbEnvelope(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(closed::mb_envelope(n, 1.9, 0.0707, 0.01));
}
BENCHMARK(BM_MbEnvelope)->Arg(150);

}  // namespace
