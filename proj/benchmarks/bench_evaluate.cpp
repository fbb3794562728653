// Copyright 2026 The roadside3d Authors
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

#include "roadside3d/eval.hpp"
#include "roadside3d/synth.hpp"

namespace
{

using namespace roadside3d;  // NOLINT(build/namespaces)

SyntheticDataset noisy_corpus(std::size_t frames)
{
  NoiseSpec noise;
  noise.drop_rate = 0.1;
  noise.fp_rate = 3.0;
  noise.center_sigma = 0.3;
  noise.dim_sigma = 0.1;
  noise.angle_sigma = 0.05;
  return generate_dataset(SceneConfig{}, noise, frames, 42);
}

void BM_Evaluate(benchmark::State & state)
{
  const auto ds = noisy_corpus(static_cast<std::size_t>(state.range(0)));
  EvalConfig cfg;
  cfg.jobs = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(ds.manifest, ds.detections, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["detections"] = static_cast<double>(ds.detections.size());
}
BENCHMARK(BM_Evaluate)->Args({100, 1})->Args({100, 4})->Args({1000, 1})
  ->Unit(benchmark::kMillisecond);

void BM_GenerateDataset(benchmark::State & state)
{
  for (auto _ : state) {
    benchmark::DoNotOptimize(noisy_corpus(static_cast<std::size_t>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateDataset)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
