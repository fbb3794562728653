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

#include "roadside3d/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "roadside3d/errors.hpp"
#include "roadside3d/parallel.hpp"
#include "roadside3d/random.hpp"

namespace roadside3d
{

namespace
{

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr std::uint64_t kDetectionStream = 0x6a09e667f3bcc909ULL;

const ClassTemplate & pick_class(const std::vector<ClassTemplate> & classes, Rng & rng)
{
  double total = 0.0;
  for (const auto & c : classes) {
    total += c.weight;
  }
  double x = rng.uniform01() * total;
  for (const auto & c : classes) {
    if (x < c.weight) {
      return c;
    }
    x -= c.weight;
  }
  return classes.back();
}

Dimensions default_dims_for(const std::string & name)
{
  for (const auto & c : SceneConfig::default_classes()) {
    if (c.name == name) {
      return c.mean_dims;
    }
  }
  return Dimensions{1.5, 1.8, 4.5};
}

}  // namespace

std::vector<ClassTemplate> SceneConfig::default_classes()
{
  return {
    {"Car", 0.55, Dimensions{1.5, 1.8, 4.5}, 0.1},
    {"Truck", 0.15, Dimensions{3.2, 2.5, 10.0}, 0.1},
    {"Pedestrian", 0.15, Dimensions{1.75, 0.6, 0.6}, 0.1},
    {"Bicycle", 0.15, Dimensions{1.6, 0.6, 1.8}, 0.1},
  };
}

void validate(const SceneConfig & c)
{
  if (c.image_width <= 0 || c.image_height <= 0) {
    throw ValidationError("image size must be positive");
  }
  if (!(c.horizontal_fov_deg > 0.0 && c.horizontal_fov_deg < 180.0)) {
    throw ValidationError("horizontal field of view must be in (0, 180) degrees");
  }
  if (!(c.max_range > 0.0) || !(c.min_range >= 0.0 && c.min_range < c.max_range)) {
    throw ValidationError("need 0 <= min_range < max_range");
  }
  if (!(c.pitch_min_deg > -90.0 && c.pitch_max_deg < 0.0 && c.pitch_min_deg <= c.pitch_max_deg)) {
    throw ValidationError("pitch range must lie within (-90, 0) degrees");
  }
  if (!(c.camera_height > 0.0 && c.camera_height < c.max_range)) {
    throw ValidationError("camera height must be positive and below max_range");
  }
  if (c.min_objects < 0 || c.max_objects < c.min_objects) {
    throw ValidationError("need 0 <= min_objects <= max_objects");
  }
  if (c.max_objects > 0 && c.classes.empty()) {
    throw ValidationError("class mix is empty");
  }
  for (const auto & t : c.classes) {
    if (t.name.empty() || !(t.weight > 0.0) || !(t.jitter >= 0.0 && t.jitter < 1.0) ||
      !(t.mean_dims.h > 0.0 && t.mean_dims.w > 0.0 && t.mean_dims.l > 0.0))
    {
      throw ValidationError("invalid class template \"" + t.name + "\"");
    }
  }
  if (c.weathers.empty() || c.times_of_day.empty()) {
    throw ValidationError("weather and time-of-day tag lists must be non-empty");
  }
  if (c.attempts_per_object <= 0) {
    throw ValidationError("attempts_per_object must be positive");
  }
}

SceneFrame generate_scene(const SceneConfig & config, std::uint64_t seed, std::uint64_t frame_index)
{
  validate(config);
  Rng rng(mix_seed(seed, frame_index));

  // World: x right, y down, z forward along the ground; ground plane y = 0.
  const double pitch = rng.uniform(config.pitch_min_deg, config.pitch_max_deg) * kDegToRad;
  const RotationMatrix camera_in_world = rotation_about_x(pitch);
  const Vec3 camera_center(0.0, -config.camera_height, 0.0);
  const RotationMatrix world_to_cam = camera_in_world.transpose();
  const RigidTransform world_to_camera(
    world_to_cam, -(world_to_cam * camera_center), "world", "camera");

  // LiDAR co-located with the camera: x forward, y left, z up.
  Mat3 lidar_axes;
  lidar_axes.col(0) = Vec3(0.0, 0.0, 1.0);
  lidar_axes.col(1) = Vec3(-1.0, 0.0, 0.0);
  lidar_axes.col(2) = Vec3(0.0, -1.0, 0.0);
  const RigidTransform lidar_to_world(
    RotationMatrix::unchecked(lidar_axes), camera_center, "lidar", "world");

  const Intrinsics intrinsics =
    Intrinsics::from_fov(config.image_width, config.image_height, config.horizontal_fov_deg);

  SceneFrame scene{
    FrameRecord{},
    Calibration{intrinsics, {world_to_camera, world_to_camera.after(lidar_to_world)}},
    pitch};
  FrameRecord & frame = scene.frame;
  frame.frame_id = fmt::format("{:06d}", frame_index);
  frame.image_path = "images/" + frame.frame_id + ".png";
  frame.image_width = config.image_width;
  frame.image_height = config.image_height;
  frame.calibration_ref = "calib/" + frame.frame_id + ".json";
  frame.tags["weather"] = config.weathers[rng.uniform_below(config.weathers.size())];
  frame.tags["time_of_day"] = config.times_of_day[rng.uniform_below(config.times_of_day.size())];

  const auto span = static_cast<std::uint64_t>(config.max_objects - config.min_objects) + 1;
  const int count = config.min_objects + static_cast<int>(rng.uniform_below(span));
  if (count == 0) {
    return scene;
  }

  // Reject densities that cannot fit even with the smallest footprints.
  const double half_fov = config.horizontal_fov_deg * kDegToRad / 2.0;
  const double ground_range = std::sqrt(
    config.max_range * config.max_range - config.camera_height * config.camera_height);
  const double sector_area =
    half_fov * (ground_range * ground_range - config.min_range * config.min_range);
  double min_footprint = std::numeric_limits<double>::infinity();
  for (const auto & t : config.classes) {
    const double shrink = 1.0 - t.jitter;
    min_footprint = std::min(min_footprint, t.mean_dims.w * t.mean_dims.l * shrink * shrink);
  }
  if (count * min_footprint > sector_area) {
    throw GenerationError(fmt::format(
        "{} objects cannot fit in {:.1f} m^2 of visible ground", count, sector_area));
  }

  std::vector<Box3D> placed;
  for (int n = 0; n < count; ++n) {
    bool ok = false;
    for (int attempt = 0; attempt < config.attempts_per_object && !ok; ++attempt) {
      const ClassTemplate & cls = pick_class(config.classes, rng);
      const Dimensions dims{
        cls.mean_dims.h * rng.uniform(1.0 - cls.jitter, 1.0 + cls.jitter),
        cls.mean_dims.w * rng.uniform(1.0 - cls.jitter, 1.0 + cls.jitter),
        cls.mean_dims.l * rng.uniform(1.0 - cls.jitter, 1.0 + cls.jitter)};
      const double bearing = rng.uniform(-half_fov, half_fov);
      const double lift = config.camera_height - dims.h / 2.0;
      const double reach = std::sqrt(std::max(0.0, config.max_range * config.max_range - lift * lift));
      if (reach <= config.min_range) {
        continue;
      }
      const double r = rng.uniform(config.min_range, reach);
      const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const Box3D world_box(
        Vec3(r * std::sin(bearing), -dims.h / 2.0, r * std::cos(bearing)), dims,
        EulerOrientation(yaw, 0.0, 0.0));

      const ProjectedBox proj = project_box(intrinsics, world_to_camera, world_box);
      if (!proj.any_corner_in_image) {
        continue;
      }
      const bool overlaps = std::any_of(placed.begin(), placed.end(), [&](const Box3D & other) {
            return intersection_volume(world_box, other) > 0.0;
          });
      if (overlaps) {
        continue;
      }

      const Box3D cam_box = transform_box(world_to_camera, world_box, "world");
      AnnotationRecord a;
      a.class_name = cls.name;
      a.truncation = proj.unclipped.area() > 0.0 ?
        std::clamp(1.0 - proj.rect.area() / proj.unclipped.area(), 0.0, 1.0) : 0.0;
      a.occlusion = Occlusion::kFullyVisible;
      a.alpha = normalize_angle(
        cam_box.orientation().yaw() - std::atan2(cam_box.center().x(), cam_box.center().z()));
      a.box2d = proj.rect;
      a.box3d = cam_box;
      a.frame_id = frame.frame_id;
      frame.annotations.push_back(std::move(a));
      placed.push_back(world_box);
      ok = true;
    }
    if (!ok) {
      throw GenerationError(fmt::format(
          "could not place object {} of {} after {} attempts", n + 1, count,
          config.attempts_per_object));
    }
  }
  return scene;
}

void validate(const NoiseSpec & n)
{
  if (!(n.drop_rate >= 0.0 && n.drop_rate <= 1.0)) {
    throw ValidationError("drop_rate must be in [0, 1]");
  }
  if (!(n.fp_rate >= 0.0) || !std::isfinite(n.fp_rate)) {
    throw ValidationError("fp_rate must be non-negative");
  }
  if (!(n.center_sigma >= 0.0 && n.dim_sigma >= 0.0 && n.angle_sigma >= 0.0)) {
    throw ValidationError("noise sigmas must be non-negative");
  }
  if (!(n.score_scale > 0.0) || !(n.fp_magnitude >= 0.0)) {
    throw ValidationError("score_scale must be positive and fp_magnitude non-negative");
  }
  if (!(n.fp_min_depth > 0.0 && n.fp_min_depth < n.fp_max_depth)) {
    throw ValidationError("need 0 < fp_min_depth < fp_max_depth");
  }
}

double score_from_magnitude(double magnitude, double scale)
{
  return std::exp(-magnitude / scale);
}

std::vector<AnnotationRecord> corrupt_detections(
  const FrameRecord & gt, const Intrinsics & intrinsics, const NoiseSpec & noise,
  std::uint64_t seed)
{
  validate(noise);
  Rng rng(seed);
  std::vector<AnnotationRecord> out;

  for (const auto & a : gt.annotations) {
    if (rng.bernoulli(noise.drop_rate)) {
      continue;
    }
    const Vec3 dc(
      rng.normal(0.0, noise.center_sigma), rng.normal(0.0, noise.center_sigma),
      rng.normal(0.0, noise.center_sigma));
    const Vec3 dd(
      rng.normal(0.0, noise.dim_sigma), rng.normal(0.0, noise.dim_sigma),
      rng.normal(0.0, noise.dim_sigma));
    const Vec3 da(
      rng.normal(0.0, noise.angle_sigma), rng.normal(0.0, noise.angle_sigma),
      rng.normal(0.0, noise.angle_sigma));

    const auto & b = a.box3d;
    const Dimensions dims{
      std::max(b.dims().h + dd.x(), 0.05 * b.dims().h),
      std::max(b.dims().w + dd.y(), 0.05 * b.dims().w),
      std::max(b.dims().l + dd.z(), 0.05 * b.dims().l)};
    const auto & o = b.orientation();

    AnnotationRecord det = a;
    det.box3d = Box3D(
      b.center() + dc, dims,
      EulerOrientation(o.yaw() + da.x(), o.pitch() + da.y(), o.roll() + da.z()));
    const double magnitude = dc.norm() + dd.norm() + da.norm();
    det.score = score_from_magnitude(magnitude, noise.score_scale);
    out.push_back(std::move(det));
  }

  std::vector<std::string> classes = noise.fp_classes;
  if (classes.empty()) {
    std::set<std::string> present;
    for (const auto & a : gt.annotations) {
      present.insert(a.class_name);
    }
    classes.assign(present.begin(), present.end());
  }
  if (classes.empty()) {
    classes.push_back("Car");
  }

  const std::uint64_t spurious = rng.poisson(noise.fp_rate);
  for (std::uint64_t i = 0; i < spurious; ++i) {
    const std::string & cls = classes[rng.uniform_below(classes.size())];
    const double z = rng.uniform(noise.fp_min_depth, noise.fp_max_depth);
    const double u = rng.uniform(0.0, intrinsics.image_width());
    const double v = rng.uniform(0.0, intrinsics.image_height());
    const double y = (v - intrinsics.cy()) * z / intrinsics.fy();
    const double x = ((u - intrinsics.cx()) * z - intrinsics.skew() * y) / intrinsics.fx();
    const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);

    AnnotationRecord det;
    det.class_name = cls;
    det.box3d = Box3D(Vec3(x, y, z), default_dims_for(cls), EulerOrientation(yaw, 0.0, 0.0));
    det.frame_id = gt.frame_id;
    det.score = score_from_magnitude(noise.fp_magnitude, noise.score_scale);
    out.push_back(std::move(det));
  }
  return out;
}

SyntheticDataset generate_dataset(
  const SceneConfig & config, const NoiseSpec & noise, std::size_t frames, std::uint64_t seed,
  std::string name, std::size_t jobs)
{
  validate(config);
  validate(noise);
  std::vector<std::optional<SceneFrame>> scenes(frames);
  std::vector<std::vector<AnnotationRecord>> dets(frames);
  parallel_for(frames, jobs, [&](std::size_t i) {
      SceneFrame scene = generate_scene(config, seed, i);
      dets[i] = corrupt_detections(
        scene.frame, scene.calibration.intrinsics, noise, mix_seed(seed ^ kDetectionStream, i));
      scenes[i].emplace(std::move(scene));
    });

  SyntheticDataset ds;
  ds.manifest.name = std::move(name);
  for (const auto & c : config.classes) {
    ds.manifest.class_taxonomy.push_back(c.name);
  }
  for (std::size_t i = 0; i < frames; ++i) {
    ds.detections.insert(ds.detections.end(), std::make_move_iterator(dets[i].begin()),
      std::make_move_iterator(dets[i].end()));
    ds.manifest.frames.push_back(std::move(scenes[i]->frame));
    ds.calibrations.push_back(std::move(scenes[i]->calibration));
  }
  return ds;
}

}  // namespace roadside3d
