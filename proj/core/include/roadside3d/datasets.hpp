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

/// \file
/// \brief Train/test splits, difficulty strata and transfer experiment plans.
#ifndef ROADSIDE3D_DATASETS_HPP_
#define ROADSIDE3D_DATASETS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadside3d/formats.hpp"

namespace roadside3d
{

enum class SplitSide
{
  kTrain,
  kTest,
};

struct SplitSpec
{
  double train_fraction = 0.6;
  std::uint64_t seed = 0;
  bool stratified = false;
  std::map<std::string, SplitSide> assignment;

  std::size_t count(SplitSide side) const;

  friend bool operator==(const SplitSpec &, const SplitSpec &) = default;
};

/// Frames are sorted by id, shuffled with Fisher-Yates driven by Rng(seed),
/// and the first round(fraction * N) go to Train. With `stratify_by_calibration`
/// each calibration_ref group is shuffled separately and the Train quota is
/// apportioned by largest remainder, so the total still equals round(f * N).
///
/// Throws EmptyInputError for an empty manifest and ValidationError unless
/// 0 < fraction < 1.
SplitSpec make_split(
  const DatasetManifest & manifest, double train_fraction, std::uint64_t seed,
  bool stratify_by_calibration = false);

/// {"assignment": {frame_id: "train"|"test"}, "fraction": f, "seed": s, "stratified": b}
std::string write_split(const SplitSpec & split);
SplitSpec parse_split(std::string_view text);

/// Frames of `manifest` assigned to `side`, in manifest order.
DatasetManifest select_frames(
  const DatasetManifest & manifest, const SplitSpec & split, SplitSide side);

enum class DifficultyLevel : int
{
  kEasy = 0,
  kModerate = 1,
  kHard = 2,
  kIgnored = 3,
};

inline constexpr std::array<DifficultyLevel, 3> kEvaluatedLevels{
  DifficultyLevel::kEasy, DifficultyLevel::kModerate, DifficultyLevel::kHard};

std::string_view to_string(DifficultyLevel level);

/// KITTI thresholds, indexed Easy / Moderate / Hard.
struct DifficultyThresholds
{
  std::array<double, 3> min_height{40.0, 25.0, 25.0};
  std::array<double, 3> max_truncation{0.15, 0.30, 0.50};
  std::array<int, 3> max_occlusion{0, 1, 2};
};

/// Lowest level whose three criteria the object meets, else Ignored.
DifficultyLevel assign_difficulty(
  const AnnotationRecord & record, double projected_height,
  const DifficultyThresholds & thresholds = {});

/// Levels are cumulative: an Easy object also counts at Moderate and Hard.
constexpr bool counts_at(DifficultyLevel object, DifficultyLevel evaluated)
{
  return object != DifficultyLevel::kIgnored &&
         static_cast<int>(object) <= static_cast<int>(evaluated);
}

struct DatasetRef
{
  std::string id;
  std::string manifest_path;
};

class DatasetRegistry
{
public:
  void add(DatasetRef ref);
  bool contains(std::string_view id) const;
  /// Throws RegistryError.
  const DatasetRef & get(std::string_view id) const;
  std::vector<std::string> ids() const;

  /// Train/test sets of the synthetic and real roadside datasets used by the
  /// transfer schedules (RoadSense3D, TUMTraf-A9, DAIR-V2X-I).
  static DatasetRegistry builtin();

  /// {"datasets": [{"id": ..., "manifest": ...}]}
  static DatasetRegistry from_json(std::string_view text);

private:
  std::map<std::string, DatasetRef, std::less<>> refs_;
};

enum class PlanKind
{
  /// No fine-tuning chain: trained directly on the pre-train set (or nothing).
  kScratch,
  kSingleStep,
  kMultiStep,
};

struct ExperimentPlan
{
  std::optional<std::string> pretrain;
  std::vector<std::string> finetune_chain;
  std::string eval_set;
  /// Carried verbatim (iterations, learning rate, backbone...).
  nlohmann::json training_metadata = nlohmann::json::object();

  PlanKind kind() const;

  friend bool operator==(const ExperimentPlan &, const ExperimentPlan &) = default;
};

/// Throws PlanError for an empty eval set or a repeated chain entry and
/// RegistryError for an unknown dataset id.
ExperimentPlan build_experiment_plan(
  const DatasetRegistry & registry, std::optional<std::string> pretrain,
  std::vector<std::string> finetune_chain, std::string eval_set,
  nlohmann::json training_metadata = nlohmann::json::object());

/// {"pretrain": id|null, "finetune_chain": [...], "eval": id, "training_metadata": {...}}
std::string write_plan(const ExperimentPlan & plan);
ExperimentPlan parse_plan(std::string_view text);

}  // namespace roadside3d

#endif  // ROADSIDE3D_DATASETS_HPP_
