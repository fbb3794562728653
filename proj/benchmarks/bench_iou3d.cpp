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

#include <vector>

#include <benchmark/benchmark.h>

#include "roadside3d/geometry.hpp"
#include "support/generators.hpp"

namespace
{

using namespace roadside3d;  // NOLINT(build/namespaces)

std::vector<std::pair<Box3D, Box3D>> make_pairs(double reach)
{
  Rng rng(1);
  std::vector<std::pair<Box3D, Box3D>> pairs;
  for (int i = 0; i < 1024; ++i) {
    pairs.push_back(testing::random_overlapping_pair(rng, 0.5, 5.0, reach));
  }
  return pairs;
}

void BM_Iou3dOverlapping(benchmark::State & state)
{
  const auto pairs = make_pairs(2.0);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto & [a, b] = pairs[i++ & 1023];
    benchmark::DoNotOptimize(iou3d(a, b));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Iou3dOverlapping);

void BM_Iou3dMostlyDisjoint(benchmark::State & state)
{
  const auto pairs = make_pairs(20.0);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto & [a, b] = pairs[i++ & 1023];
    benchmark::DoNotOptimize(iou3d(a, b));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Iou3dMostlyDisjoint);

void BM_RotationFromEuler(benchmark::State & state)
{
  Rng rng(2);
  std::vector<EulerOrientation> angles;
  for (int i = 0; i < 1024; ++i) {
    angles.push_back(testing::random_orientation(rng));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rotation_from_euler(angles[i++ & 1023]));
  }
}
BENCHMARK(BM_RotationFromEuler);

}  // namespace

BENCHMARK_MAIN();
