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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "detail.hpp"
#include "roadside3d/errors.hpp"
#include "roadside3d/eval.hpp"

namespace roadside3d
{

namespace
{

// IoU between the class-filtered detections (rows) and ground truth (cols).
struct ClassView
{
  std::vector<std::size_t> gts;
  std::vector<std::size_t> ranked_dets;
  std::vector<double> iou;  // row-major, ranked_dets.size() x gts.size()

  double at(std::size_t d, std::size_t g) const {return iou[d * gts.size() + g];}
};

std::vector<std::size_t> rank_by_score(
  std::span<const AnnotationRecord> dets, std::vector<std::size_t> indices)
{
  std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return dets[a].score.value_or(0.0) > dets[b].score.value_or(0.0);
    });
  return indices;
}

ClassView make_view(
  std::span<const AnnotationRecord> gts, std::span<const AnnotationRecord> dets,
  std::string_view class_name)
{
  ClassView view;
  std::vector<std::size_t> det_idx;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    if (gts[i].class_name == class_name) {
      view.gts.push_back(i);
    }
  }
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].class_name == class_name) {
      det_idx.push_back(i);
    }
  }
  view.ranked_dets = rank_by_score(dets, std::move(det_idx));
  view.iou.resize(view.ranked_dets.size() * view.gts.size());
  for (std::size_t d = 0; d < view.ranked_dets.size(); ++d) {
    for (std::size_t g = 0; g < view.gts.size(); ++g) {
      view.iou[d * view.gts.size() + g] =
        iou3d(dets[view.ranked_dets[d]].box3d, gts[view.gts[g]].box3d);
    }
  }
  return view;
}

MatchResult match_view(
  const ClassView & view, std::span<const DifficultyLevel> gt_levels, double threshold,
  DifficultyLevel level)
{
  MatchResult out;
  out.ranked_detections = view.ranked_dets;
  std::vector<bool> counted(view.gts.size());
  std::vector<bool> taken(view.gts.size(), false);
  for (std::size_t g = 0; g < view.gts.size(); ++g) {
    counted[g] = counts_at(gt_levels[view.gts[g]], level);
  }
  for (std::size_t d = 0; d < view.ranked_dets.size(); ++d) {
    std::size_t best = view.gts.size();
    double best_iou = -1.0;
    double best_dont_care = -1.0;
    for (std::size_t g = 0; g < view.gts.size(); ++g) {
      const double iou = view.at(d, g);
      if (iou < threshold) {
        continue;
      }
      if (!counted[g]) {
        best_dont_care = std::max(best_dont_care, iou);
      } else if (!taken[g] && iou > best_iou) {
        best = g;
        best_iou = iou;
      }
    }
    const std::size_t det = view.ranked_dets[d];
    if (best_dont_care > best_iou) {
      // Closer to a box that does not count at this level than to any
      // available counted one: neither a hit nor a false alarm.
      out.ignored_detections.push_back(det);
    } else if (best < view.gts.size()) {
      taken[best] = true;
      out.pairs.push_back({view.gts[best], det, best_iou});
    } else {
      out.false_positives.push_back(det);
    }
  }
  for (std::size_t g = 0; g < view.gts.size(); ++g) {
    if (counted[g] && !taken[g]) {
      out.unmatched_gts.push_back(view.gts[g]);
    }
  }
  return out;
}

struct LevelOutcome
{
  std::vector<std::pair<double, bool>> ranked;  // (score, is_tp), ignored removed
  std::size_t gt = 0;
  std::size_t ignored = 0;
};

using FrameOutcome = std::map<std::string, std::array<LevelOutcome, 3>>;

FrameOutcome evaluate_frame(
  const FrameRecord & frame, std::span<const AnnotationRecord> dets,
  const std::vector<std::string> & classes, const EvalConfig & config)
{
  std::vector<DifficultyLevel> levels;
  levels.reserve(frame.annotations.size());
  for (const auto & gt : frame.annotations) {
    levels.push_back(difficulty_of(gt, config.difficulty));
  }
  FrameOutcome outcome;
  for (const auto & cls : classes) {
    const ClassView view = make_view(frame.annotations, dets, cls);
    if (view.gts.empty() && view.ranked_dets.empty()) {
      continue;
    }
    auto & per_level = outcome[cls];
    for (std::size_t li = 0; li < 3; ++li) {
      const MatchResult m = match_view(view, levels, config.threshold_for(cls), kEvaluatedLevels[li]);
      std::set<std::size_t> tps;
      for (const auto & p : m.pairs) {
        tps.insert(p.det_index);
      }
      std::set<std::size_t> ignored(m.ignored_detections.begin(), m.ignored_detections.end());
      LevelOutcome & lo = per_level[li];
      for (std::size_t det : m.ranked_detections) {
        if (ignored.contains(det)) {
          continue;
        }
        lo.ranked.emplace_back(*dets[det].score, tps.contains(det));
      }
      lo.gt = m.pairs.size() + m.unmatched_gts.size();
      lo.ignored = m.ignored_detections.size();
    }
  }
  return outcome;
}

}  // namespace

MatchResult match_frame(
  std::span<const AnnotationRecord> gts, std::span<const DifficultyLevel> gt_levels,
  std::span<const AnnotationRecord> dets, double iou_threshold, std::string_view class_name,
  DifficultyLevel level)
{
  if (gt_levels.size() != gts.size()) {
    throw ValidationError("one difficulty level is needed per ground-truth box");
  }
  return match_view(make_view(gts, dets, class_name), gt_levels, iou_threshold, level);
}

MatchResult match_frame_any_class(
  std::span<const AnnotationRecord> gts, std::span<const AnnotationRecord> dets,
  double iou_threshold)
{
  std::vector<std::size_t> all(dets.size());
  std::iota(all.begin(), all.end(), 0);
  MatchResult out;
  out.ranked_detections = rank_by_score(dets, std::move(all));
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t det : out.ranked_detections) {
    std::size_t best = gts.size();
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) {
        continue;
      }
      const double iou = iou3d(dets[det].box3d, gts[g].box3d);
      if (iou >= iou_threshold && iou > best_iou) {
        best = g;
        best_iou = iou;
      }
    }
    if (best < gts.size()) {
      taken[best] = true;
      out.pairs.push_back({best, det, best_iou});
    } else {
      out.false_positives.push_back(det);
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!taken[g]) {
      out.unmatched_gts.push_back(g);
    }
  }
  return out;
}

double PRCurve::recall(std::size_t i) const
{
  return num_gt == 0 ? 0.0 : static_cast<double>(points[i].tp) / static_cast<double>(num_gt);
}

double PRCurve::precision(std::size_t i) const
{
  const std::size_t n = points[i].tp + points[i].fp;
  return n == 0 ? 0.0 : static_cast<double>(points[i].tp) / static_cast<double>(n);
}

PRCurve make_pr_curve(const std::vector<bool> & ranked_is_tp, std::size_t num_gt)
{
  PRCurve curve;
  curve.num_gt = num_gt;
  curve.points.reserve(ranked_is_tp.size());
  PRPoint p;
  for (bool tp : ranked_is_tp) {
    if (tp) {
      ++p.tp;
    } else {
      ++p.fp;
    }
    curve.points.push_back(p);
  }
  return curve;
}

std::string_view to_string(Interpolation interpolation)
{
  return interpolation == Interpolation::kR40 ? "R40" : "R11";
}

Interpolation interpolation_from_string(std::string_view name)
{
  if (name == "R40" || name == "r40" || name == "40") {
    return Interpolation::kR40;
  }
  if (name == "R11" || name == "r11" || name == "11") {
    return Interpolation::kR11;
  }
  throw ValidationError("unknown interpolation \"" + std::string(name) + "\"");
}

double average_precision(const PRCurve & curve, Interpolation interpolation)
{
  if (curve.num_gt == 0 || curve.points.empty()) {
    return 0.0;
  }
  const std::size_t n = curve.points.size();
  // Precision envelope: best precision at or after each point.
  std::vector<double> envelope(n);
  double best = 0.0;
  for (std::size_t i = n; i-- > 0; ) {
    best = std::max(best, curve.precision(i));
    envelope[i] = best;
  }

  const std::size_t steps = interpolation == Interpolation::kR40 ? 40 : 10;
  const std::size_t first_k = interpolation == Interpolation::kR40 ? 1 : 0;
  double sum = 0.0;
  std::size_t i = 0;
  for (std::size_t k = first_k; k <= steps; ++k) {
    // recall_i >= k / steps  <=>  steps * tp_i >= k * num_gt
    while (i < n && steps * curve.points[i].tp < k * curve.num_gt) {
      ++i;
    }
    if (i < n) {
      sum += envelope[i];
    }
  }
  const double samples = static_cast<double>(steps + 1 - first_k);
  return sum / samples * 100.0;
}

double EvalConfig::threshold_for(std::string_view class_name) const
{
  auto it = per_class_iou.find(std::string(class_name));
  return it == per_class_iou.end() ? iou_threshold : it->second;
}

DifficultyLevel difficulty_of(const AnnotationRecord & gt, const DifficultyThresholds & thresholds)
{
  const double height =
    gt.box2d ? gt.box2d->height() : std::numeric_limits<double>::infinity();
  return assign_difficulty(gt, height, thresholds);
}

EvalReport evaluate(
  const DatasetManifest & gt, std::span<const AnnotationRecord> detections,
  const EvalConfig & config)
{
  validate(gt);
  if (!(config.iou_threshold > 0.0 && config.iou_threshold < 1.0)) {
    throw ValidationError("IoU threshold must be in (0, 1)");
  }
  for (const auto & [cls, thr] : config.per_class_iou) {
    if (!(thr > 0.0 && thr < 1.0)) {
      throw ValidationError("IoU threshold for \"" + cls + "\" must be in (0, 1)");
    }
  }

  std::vector<const FrameRecord *> frames;
  std::map<std::string_view, std::size_t> frame_index;
  for (const auto & f : gt.frames) {
    frames.push_back(&f);
  }
  std::sort(frames.begin(), frames.end(), [](const FrameRecord * a, const FrameRecord * b) {
      return a->frame_id < b->frame_id;
    });
  for (std::size_t i = 0; i < frames.size(); ++i) {
    frame_index.emplace(frames[i]->frame_id, i);
  }

  const std::set<std::string_view> taxonomy(gt.class_taxonomy.begin(), gt.class_taxonomy.end());
  std::vector<std::vector<AnnotationRecord>> per_frame(frames.size());
  for (const auto & d : detections) {
    auto it = frame_index.find(d.frame_id);
    if (it == frame_index.end()) {
      throw ReferenceError("detection refers to unknown frame \"" + d.frame_id + "\"");
    }
    if (!taxonomy.contains(d.class_name)) {
      throw TaxonomyError("detection class \"" + d.class_name + "\" is not in the taxonomy");
    }
    if (!d.score) {
      throw ValidationError("detection in frame \"" + d.frame_id + "\" has no score");
    }
    validate(d);
    per_frame[it->second].push_back(d);
  }

  std::vector<FrameOutcome> outcomes(frames.size());
  detail::parallel_for(frames.size(), config.jobs, [&](std::size_t i) {
      outcomes[i] = evaluate_frame(*frames[i], per_frame[i], gt.class_taxonomy, config);
    });

  EvalReport report;
  report.iou_threshold = config.iou_threshold;
  report.interpolation = config.interpolation;
  std::array<double, 3> ap_sum{};
  std::array<std::size_t, 3> ap_count{};
  for (const auto & cls : gt.class_taxonomy) {
    auto & cells = report.cells[cls];
    for (std::size_t li = 0; li < 3; ++li) {
      std::vector<std::pair<double, bool>> pooled;
      EvalCell & cell = cells[li];
      for (const auto & outcome : outcomes) {
        auto it = outcome.find(cls);
        if (it == outcome.end()) {
          continue;
        }
        const LevelOutcome & lo = it->second[li];
        pooled.insert(pooled.end(), lo.ranked.begin(), lo.ranked.end());
        cell.gt += lo.gt;
        cell.ignored += lo.ignored;
      }
      std::stable_sort(pooled.begin(), pooled.end(), [](const auto & a, const auto & b) {
          return a.first > b.first;
        });
      std::vector<bool> is_tp;
      is_tp.reserve(pooled.size());
      for (const auto & [score, tp] : pooled) {
        is_tp.push_back(tp);
        cell.tp += tp ? 1 : 0;
      }
      cell.fp = pooled.size() - cell.tp;
      cell.fn = cell.gt - cell.tp;
      if (cell.gt > 0) {
        cell.ap = average_precision(make_pr_curve(is_tp, cell.gt), config.interpolation);
        ap_sum[li] += *cell.ap;
        ++ap_count[li];
      }
    }
  }
  for (std::size_t li = 0; li < 3; ++li) {
    if (ap_count[li] > 0) {
      report.map[li] = ap_sum[li] / static_cast<double>(ap_count[li]);
    }
  }
  return report;
}

std::vector<GtDetPair> collect_matched_pairs(
  const DatasetManifest & gt, std::span<const AnnotationRecord> detections,
  double iou_threshold)
{
  std::map<std::string_view, std::vector<AnnotationRecord>> by_frame;
  for (const auto & d : detections) {
    if (gt.find_frame(d.frame_id) == nullptr) {
      throw ReferenceError("detection refers to unknown frame \"" + d.frame_id + "\"");
    }
    by_frame[d.frame_id].push_back(d);
  }
  std::vector<const FrameRecord *> frames;
  for (const auto & f : gt.frames) {
    frames.push_back(&f);
  }
  std::sort(frames.begin(), frames.end(), [](const FrameRecord * a, const FrameRecord * b) {
      return a->frame_id < b->frame_id;
    });
  std::vector<GtDetPair> out;
  for (const FrameRecord * f : frames) {
    auto it = by_frame.find(f->frame_id);
    if (it == by_frame.end()) {
      continue;
    }
    const MatchResult m = match_frame_any_class(f->annotations, it->second, iou_threshold);
    for (const auto & p : m.pairs) {
      out.push_back({f->annotations[p.gt_index], it->second[p.det_index]});
    }
  }
  return out;
}

ErrorBreakdown error_breakdown(std::span<const GtDetPair> pairs)
{
  if (pairs.empty()) {
    throw EmptyInputError("error breakdown needs at least one matched pair");
  }
  ErrorBreakdown e;
  std::size_t mismatched = 0;
  for (const auto & [gt, det] : pairs) {
    mismatched += gt.class_name != det.class_name ? 1 : 0;
    e.pos_error += (gt.box3d.center() - det.box3d.center()).norm();
    const auto & a = gt.box3d.dims();
    const auto & b = det.box3d.dims();
    e.dim_error += (std::abs(a.h - b.h) + std::abs(a.w - b.w) + std::abs(a.l - b.l)) / 3.0;
    e.ori_error += geodesic_angle(gt.box3d.rotation(), det.box3d.rotation());
  }
  const double n = static_cast<double>(pairs.size());
  e.pairs = pairs.size();
  e.cls_error = static_cast<double>(mismatched) / n;
  e.pos_error /= n;
  e.dim_error /= n;
  e.ori_error /= n;
  return e;
}

}  // namespace roadside3d
