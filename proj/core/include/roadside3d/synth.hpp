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
/// \brief Synthetic roadside scenes with exact ground truth and controlled
/// detection corruption.
///
/// The camera hangs `camera_height` metres above a flat ground plane and is
/// pitched down. Objects stand on the ground with yaw-only orientation in the
/// world, so their camera-frame pitch and roll come from the camera tilt.
#ifndef ROADSIDE3D_SYNTH_HPP_
#define ROADSIDE3D_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "roadside3d/camera.hpp"
#include "roadside3d/formats.hpp"

namespace roadside3d
{

struct ClassTemplate
{
  std::string name;
  double weight = 1.0;
  /// Mean size; each object scales every dimension by U(1 - jitter, 1 + jitter).
  Dimensions mean_dims;
  double jitter = 0.1;
};

struct SceneConfig
{
  int image_width = 1920;
  int image_height = 1080;
  double horizontal_fov_deg = 120.0;
  double max_range = 150.0;
  double min_range = 5.0;
  double pitch_min_deg = -45.0;
  double pitch_max_deg = -25.0;
  double camera_height = 8.0;
  int min_objects = 5;
  int max_objects = 30;
  std::vector<ClassTemplate> classes = default_classes();
  std::vector<std::string> weathers{"sunny", "cloudy", "foggy"};
  std::vector<std::string> times_of_day{"day", "night"};
  /// Placement attempts per requested object before giving up.
  int attempts_per_object = 200;

  static std::vector<ClassTemplate> default_classes();
};

/// Throws ValidationError for an out-of-range configuration.
void validate(const SceneConfig & config);

struct SceneFrame
{
  FrameRecord frame;
  Calibration calibration;
  /// Drawn camera pitch (radians, negative looks down).
  double camera_pitch = 0.0;
};

/// Deterministic in (config, seed, frame_index). The calibration holds the
/// world -> camera transform; annotations are in the camera frame and every
/// box has at least one corner inside the image.
///
/// Throws GenerationError when the objects cannot all be placed.
SceneFrame generate_scene(
  const SceneConfig & config, std::uint64_t seed, std::uint64_t frame_index = 0);

struct NoiseSpec
{
  double drop_rate = 0.0;
  /// Expected spurious detections per frame (Poisson).
  double fp_rate = 0.0;
  double center_sigma = 0.0;
  double dim_sigma = 0.0;
  double angle_sigma = 0.0;
  /// score = exp(-magnitude / score_scale) with magnitude = |d center| +
  /// |d dims| + |d angles|.
  double score_scale = 1.0;
  /// Magnitude charged to spurious boxes.
  double fp_magnitude = 2.0;
  double fp_min_depth = 5.0;
  double fp_max_depth = 150.0;
  /// Classes for spurious boxes; empty uses the frame's classes, then "Car".
  std::vector<std::string> fp_classes;
};

void validate(const NoiseSpec & noise);

double score_from_magnitude(double magnitude, double scale);

/// Drops, perturbs and pads the frame's ground truth into scored detections.
std::vector<AnnotationRecord> corrupt_detections(
  const FrameRecord & gt, const Intrinsics & intrinsics, const NoiseSpec & noise,
  std::uint64_t seed);

struct SyntheticDataset
{
  DatasetManifest manifest;
  /// Parallel to manifest.frames.
  std::vector<Calibration> calibrations;
  std::vector<AnnotationRecord> detections;
};

/// `frames` scenes named "000000", "000001", ... with calibration refs
/// "calib/<frame_id>.json", plus their corrupted detections.
/// Frames are generated independently on up to `jobs` threads; the result
/// does not depend on `jobs`.
SyntheticDataset generate_dataset(
  const SceneConfig & config, const NoiseSpec & noise, std::size_t frames, std::uint64_t seed,
  std::string name = "synthetic", std::size_t jobs = 1);

}  // namespace roadside3d

#endif  // ROADSIDE3D_SYNTH_HPP_
