// Copyright 2026 The qahsim Authors
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

#include "qahsim/liouville.hpp"
#include "qahsim/sse_engine.hpp"
#include "qahsim/topology.hpp"

namespace {

using namespace qahsim;

const QahParams kModel{1.0, 0.2, 1.2};
const NoiseStrengths kWeak{0.05, 0.0, 0.01};

void BM_Step(benchmark::State& state) {
  const BlochVector h = model::bloch_vector({1.2857, -1.8}, kModel);
  SpinState psi = sse::spin_down();
  std::uint64_t n = 0;
  for (auto _ : state) {
    psi = sse::step(psi, h, kWeak, noise_draw(1, 0, 0, n++), 0.1);
    benchmark::DoNotOptimize(psi);
  }
}
BENCHMARK(BM_Step);

void BM_EnsembleAverage(benchmark::State& state) {
  const EvolutionSchedule sched;
  for (auto _ : state) {
    auto avg = sse::ensemble_average({1.2857, -1.8}, kModel, kWeak, sched, 1,
                                     static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(avg);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EnsembleAverage)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Eigensystem(benchmark::State& state) {
  const Liouvillian L = liouville::build_liouvillian({0.4, -0.9}, kModel, kWeak);
  for (auto _ : state) {
    auto es = liouville::eigensystem(L);
    benchmark::DoNotOptimize(es);
  }
}
BENCHMARK(BM_Eigensystem);

void BM_OracleTexture(benchmark::State& state) {
  std::vector<double> axis;
  const int n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) axis.push_back(-2.0 + 4.0 * i / (n - 1));
  for (auto _ : state) {
    auto grid = topology::oracle_texture(kModel, kWeak, axis, axis);
    benchmark::DoNotOptimize(grid);
  }
}
BENCHMARK(BM_OracleTexture)->Arg(33)->Arg(101)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
