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
/// \brief Detection matching, interpolated AP, mAP over difficulty levels,
/// error decomposition and result tables.
#ifndef ROADSIDE3D_EVAL_HPP_
#define ROADSIDE3D_EVAL_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadside3d/datasets.hpp"
#include "roadside3d/formats.hpp"

namespace roadside3d
{

struct MatchedPair
{
  std::size_t gt_index;
  std::size_t det_index;
  double iou;
};

/// Indices refer to the gt / detection spans handed to the matcher.
struct MatchResult
{
  std::vector<MatchedPair> pairs;
  /// Counted ground truth left unmatched (false negatives).
  std::vector<std::size_t> unmatched_gts;
  /// Detections of the evaluated class that matched nothing (false positives).
  std::vector<std::size_t> false_positives;
  /// Detections closest to don't-care ground truth; neither TP nor FP.
  std::vector<std::size_t> ignored_detections;
  /// Detection indices (evaluated class) in processing order.
  std::vector<std::size_t> ranked_detections;
};

/// Greedy matching for one class at one difficulty level.
///
/// Detections of `class_name` are visited by descending score (ties by input
/// order). Each takes the unmatched counted ground truth of the same class
/// with the highest IoU >= iou_threshold (ties by lower index). Ground truth
/// whose difficulty does not count at `level` is don't-care: it is never a
/// match target nor a false negative. A detection whose best IoU at or above
/// the threshold is with a don't-care box (strictly better than any free
/// counted box) is dropped instead of becoming a match or a false positive;
/// this keeps AP non-increasing in the threshold.
MatchResult match_frame(
  std::span<const AnnotationRecord> gts, std::span<const DifficultyLevel> gt_levels,
  std::span<const AnnotationRecord> dets, double iou_threshold, std::string_view class_name,
  DifficultyLevel level);

/// Class-agnostic greedy matching over every ground-truth box; used to pair
/// boxes for the error breakdown.
MatchResult match_frame_any_class(
  std::span<const AnnotationRecord> gts, std::span<const AnnotationRecord> dets,
  double iou_threshold);

struct PRPoint
{
  std::size_t tp = 0;
  std::size_t fp = 0;
};

/// Cumulative counts after each score-ranked detection.
struct PRCurve
{
  std::size_t num_gt = 0;
  std::vector<PRPoint> points;

  double recall(std::size_t i) const;
  double precision(std::size_t i) const;
};

/// Builds the curve from detection outcomes already in rank order.
PRCurve make_pr_curve(const std::vector<bool> & ranked_is_tp, std::size_t num_gt);

enum class Interpolation
{
  /// Recall samples k/40, k = 1..40.
  kR40,
  /// Recall samples k/10, k = 0..10.
  kR11,
};

std::string_view to_string(Interpolation interpolation);
Interpolation interpolation_from_string(std::string_view name);

/// Mean of the max-precision envelope at the sample recalls, in percent.
/// Recall comparisons are done on integer counts, so they are exact.
double average_precision(const PRCurve & curve, Interpolation interpolation = Interpolation::kR40);

struct EvalConfig
{
  double iou_threshold = 0.5;
  std::map<std::string, double> per_class_iou;
  Interpolation interpolation = Interpolation::kR40;
  DifficultyThresholds difficulty;
  /// Worker threads for per-frame matching; results do not depend on it.
  std::size_t jobs = 1;

  double threshold_for(std::string_view class_name) const;
};

struct EvalCell
{
  /// Percent; absent when the cell has no counted ground truth.
  std::optional<double> ap;
  std::size_t gt = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t ignored = 0;

  friend bool operator==(const EvalCell &, const EvalCell &) = default;
};

using LevelValues = std::array<std::optional<double>, 3>;

struct EvalReport
{
  double iou_threshold = 0.5;
  Interpolation interpolation = Interpolation::kR40;
  /// class -> Easy / Moderate / Hard.
  std::map<std::string, std::array<EvalCell, 3>> cells;
  /// Unweighted mean AP over classes with ground truth, per level.
  LevelValues map;

  /// A report holding only mAP values, e.g. numbers copied from a table.
  static EvalReport from_map_values(const std::array<double, 3> & values);

  friend bool operator==(const EvalReport &, const EvalReport &) = default;
};

/// Pools per-frame matches over the manifest (frames in frame-id order) and
/// computes AP per class and level.
///
/// Throws ReferenceError for detections naming an unknown frame,
/// TaxonomyError for classes outside the taxonomy and ValidationError for
/// unscored detections.
EvalReport evaluate(
  const DatasetManifest & gt, std::span<const AnnotationRecord> detections,
  const EvalConfig & config = {});

/// Difficulty of a ground-truth box from its box2d height; a missing box2d
/// passes the height criterion.
DifficultyLevel difficulty_of(const AnnotationRecord & gt, const DifficultyThresholds & thresholds);

nlohmann::json report_to_json(const EvalReport & report);
EvalReport report_from_json(const nlohmann::json & j);

struct GtDetPair
{
  AnnotationRecord gt;
  AnnotationRecord det;
};

/// Class-agnostic matches over the whole manifest.
std::vector<GtDetPair> collect_matched_pairs(
  const DatasetManifest & gt, std::span<const AnnotationRecord> detections,
  double iou_threshold);

struct ErrorBreakdown
{
  /// Fraction of matched pairs whose classes differ.
  double cls_error = 0.0;
  /// Mean centre distance (m).
  double pos_error = 0.0;
  /// Mean of (|dh| + |dw| + |dl|) / 3 (m).
  double dim_error = 0.0;
  /// Mean geodesic angle between orientations (rad).
  double ori_error = 0.0;
  std::size_t pairs = 0;
};

/// Throws EmptyInputError for an empty pair set.
ErrorBreakdown error_breakdown(std::span<const GtDetPair> pairs);

nlohmann::json breakdown_to_json(const ErrorBreakdown & breakdown);

/// (treatment - baseline) / baseline * 100, rounded to one decimal; empty
/// when the baseline is zero or either side is missing.
std::optional<double> percent_change(std::optional<double> baseline, std::optional<double> treatment);

struct ImprovementTable
{
  /// "mAP" row first, then one row per class.
  std::vector<std::pair<std::string, LevelValues>> rows;
};

/// Throws ValidationError when the class sets differ.
ImprovementTable compare_reports(const EvalReport & baseline, const EvalReport & treatment);

/// "+4,808%", "+215.8%", "undefined".
std::string format_percent(std::optional<double> value, int decimals = 1);

std::string render_improvements(const ImprovementTable & table);
nlohmann::json improvements_to_json(const ImprovementTable & table);

struct ReportRow
{
  std::string architecture;
  std::string pretrain_set;
  std::string finetune_set;
  std::string eval_set;
  LevelValues values;
};

/// Row labels for a plan: missing pre-train / empty chain render as "-",
/// chains join with " -> ".
ReportRow make_report_row(
  std::string architecture, const ExperimentPlan & plan, const EvalReport & report);

/// Architecture | Pre-Train Set | Fine-Tuning Set | Evaluation Set | Easy |
/// Moderate | Hard, values to 2 decimals.
std::string render_report(std::span<const ReportRow> rows);

}  // namespace roadside3d

#endif  // ROADSIDE3D_EVAL_HPP_
