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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "roadside3d/formats.hpp"
#include "support/generators.hpp"

namespace
{

using namespace roadside3d;  // NOLINT(build/namespaces)

std::vector<AnnotationRecord> records(std::size_t n)
{
  Rng rng(3);
  std::vector<AnnotationRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(testing::random_record(rng, true, "frame"));
  }
  return out;
}

void BM_ParseKitti(benchmark::State & state)
{
  const std::string text = write_labels(records(10000), LabelFormat::kKittiExt);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_labels(text, LabelFormat::kKittiExt, "frame"));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseKitti)->Unit(benchmark::kMillisecond);

void BM_WriteKitti(benchmark::State & state)
{
  const auto rs = records(10000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(write_labels(rs, LabelFormat::kKittiExt));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_WriteKitti)->Unit(benchmark::kMillisecond);

void BM_ParseManifestJson(benchmark::State & state)
{
  const std::string text = write_labels(records(10000), LabelFormat::kManifestJson);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_labels(text, LabelFormat::kManifestJson));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseManifestJson)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
