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
/// \brief Label, calibration and manifest formats plus dataset statistics.
///
/// kitti_ext label lines are whitespace separated:
///
///     class trunc occl alpha x1 y1 x2 y2 h w l x y z yaw [pitch roll] [score]
///
/// 15 columns is plain KITTI, 16 adds a score, 17 adds pitch and roll, 18 adds
/// pitch, roll and score. (x, y, z) is the box centre in the camera frame.
#ifndef ROADSIDE3D_FORMATS_HPP_
#define ROADSIDE3D_FORMATS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadside3d/camera.hpp"
#include "roadside3d/geometry.hpp"

namespace roadside3d
{

enum class Occlusion : int
{
  kFullyVisible = 0,
  kPartly = 1,
  kHeavily = 2,
  kUnknown = 3,
};

/// One labelled object. When `score` is set the record is a detection.
struct AnnotationRecord
{
  std::string class_name;
  double truncation = 0.0;
  Occlusion occlusion = Occlusion::kFullyVisible;
  /// Observation angle; KITTI's -10 means "not provided".
  double alpha = -10.0;
  std::optional<Rect2D> box2d;
  Box3D box3d;
  std::string frame_id;
  std::optional<double> score;

  bool is_detection() const noexcept {return score.has_value();}

  friend bool operator==(const AnnotationRecord &, const AnnotationRecord &) = default;
};

/// A scored AnnotationRecord.
using DetectionRecord = AnnotationRecord;

/// Throws ValidationError when truncation, occlusion or score are out of range.
void validate(const AnnotationRecord & record);

struct FrameRecord
{
  std::string frame_id;
  std::string image_path;
  int image_width = 0;
  int image_height = 0;
  std::string calibration_ref;
  std::vector<AnnotationRecord> annotations;
  /// Free-form metadata (weather, time of day); never interpreted.
  std::map<std::string, std::string> tags;

  friend bool operator==(const FrameRecord &, const FrameRecord &) = default;
};

struct DatasetManifest
{
  std::string name;
  std::vector<std::string> class_taxonomy;
  std::vector<FrameRecord> frames;

  /// nullptr when absent.
  const FrameRecord * find_frame(std::string_view frame_id) const;

  friend bool operator==(const DatasetManifest &, const DatasetManifest &) = default;
};

/// Throws ValidationError on duplicate frame ids, TaxonomyError on classes
/// outside the taxonomy.
void validate(const DatasetManifest & manifest);

enum class LabelFormat
{
  kKittiExt,
  /// JSON array of annotation objects, the same schema as manifest frames.
  kManifestJson,
};

/// Accepts "kitti" / "kitti_ext" / "manifest" / "manifest_json"; throws
/// ValidationError otherwise.
LabelFormat label_format_from_string(std::string_view name);

/// `frame_id` is stamped on kitti_ext records, which do not carry one.
std::vector<AnnotationRecord> parse_labels(
  std::string_view text, LabelFormat format, std::string_view frame_id = {});

/// kitti_ext numbers are written with 6 significant digits. Throws
/// SerializationError for class names containing whitespace.
std::string write_labels(std::span<const AnnotationRecord> records, LabelFormat format);

Calibration parse_calibration(std::string_view text);
std::string write_calibration(const Calibration & calibration);

DatasetManifest parse_manifest(std::string_view text);
std::string write_manifest(const DatasetManifest & manifest);

nlohmann::json annotation_to_json(const AnnotationRecord & record);
AnnotationRecord annotation_from_json(const nlohmann::json & j);

/// Source class name -> target class name.
struct ClassMapping
{
  std::map<std::string, std::string> table;
};

/// JSON object {"source": "target", ...}.
ClassMapping parse_class_mapping(std::string_view text);

struct MappedRecords
{
  std::vector<AnnotationRecord> records;
  /// Records whose class had no mapping.
  std::size_t dropped = 0;
};

MappedRecords apply_class_mapping(std::span<const AnnotationRecord> records,
  const ClassMapping & mapping);

struct DatasetStats
{
  std::size_t frames = 0;
  std::size_t boxes = 0;
  std::map<std::string, std::size_t> per_class;
  /// Distinct (width, height).
  std::set<std::pair<int, int>> resolutions;

  DatasetStats & operator+=(const DatasetStats & rhs);
  friend DatasetStats operator+(DatasetStats lhs, const DatasetStats & rhs) {return lhs += rhs;}
  friend bool operator==(const DatasetStats &, const DatasetStats &) = default;
};

DatasetStats dataset_stats(const DatasetManifest & manifest);

/// 1000 -> "1k", 15000 -> "15k", 1400000 -> "1.4M".
std::string compact_count(std::size_t n);

/// "Dataset | Resolution | Images | 3D Boxes" table, one row per entry.
std::string render_stats_table(
  std::span<const std::pair<std::string, DatasetStats>> rows);

nlohmann::json stats_to_json(const DatasetStats & stats);

}  // namespace roadside3d

#endif  // ROADSIDE3D_FORMATS_HPP_
