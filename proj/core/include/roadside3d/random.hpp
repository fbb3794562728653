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

#ifndef ROADSIDE3D_RANDOM_HPP_
#define ROADSIDE3D_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace roadside3d
{

/// Portable deterministic random source.
///
/// The raw stream is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The standard's distributions are implementation-defined, so
/// every transform used for splits and scene generation lives here instead;
/// identical seeds therefore give identical results on every platform.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
  : engine_(seed) {}

  std::uint64_t next_u64() {return engine_();}

  /// Unbiased integer in [0, bound) by rejection. bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Double in [0, 1) with 53 random bits.
  double uniform01();

  double uniform(double lo, double hi) {return lo + (hi - lo) * uniform01();}

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal();

  double normal(double mean, double sigma) {return mean + sigma * normal();}

  bool bernoulli(double p) {return uniform01() < p;}

  /// Poisson variate; Knuth's product method below mean 30, normal
  /// approximation (rounded, clamped at 0) above.
  std::uint64_t poisson(double mean);

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent per-item seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace roadside3d

#endif  // ROADSIDE3D_RANDOM_HPP_
