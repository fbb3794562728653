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

#include "roadside3d/camera.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "roadside3d/errors.hpp"

namespace roadside3d
{

Intrinsics::Intrinsics(
  double fx, double fy, double cx, double cy, int image_width, int image_height, double skew)
: fx_(fx), fy_(fy), cx_(cx), cy_(cy), skew_(skew), width_(image_width), height_(image_height)
{
  if (!(std::isfinite(fx) && fx > 0.0) || !(std::isfinite(fy) && fy > 0.0)) {
    throw ValidationError("focal lengths must be positive");
  }
  if (image_width <= 0 || image_height <= 0) {
    throw ValidationError("image size must be positive");
  }
  if (!(cx >= 0.0 && cx < image_width) || !(cy >= 0.0 && cy < image_height)) {
    throw ValidationError("principal point must lie inside the image");
  }
  if (!std::isfinite(skew)) {
    throw ValidationError("skew must be finite");
  }
}

Mat3 Intrinsics::matrix() const
{
  Mat3 k;
  k << fx_, skew_, cx_,
    0.0, fy_, cy_,
    0.0, 0.0, 1.0;
  return k;
}

Intrinsics Intrinsics::scaled(double factor) const
{
  return Intrinsics(
    fx_ * factor, fy_ * factor, cx_ * factor, cy_ * factor,
    static_cast<int>(std::lround(width_ * factor)), static_cast<int>(std::lround(height_ * factor)),
    skew_ * factor);
}

Intrinsics Intrinsics::from_fov(int image_width, int image_height, double horizontal_fov_deg)
{
  const double half = horizontal_fov_deg * std::numbers::pi / 360.0;
  const double f = (image_width / 2.0) / std::tan(half);
  return Intrinsics(f, f, image_width / 2.0, image_height / 2.0, image_width, image_height);
}

RigidTransform::RigidTransform(
  const RotationMatrix & rotation, const Vec3 & translation, std::string source_frame,
  std::string target_frame)
: rotation_(rotation), translation_(translation), source_(std::move(source_frame)),
  target_(std::move(target_frame))
{
  if (source_.empty() || target_.empty()) {
    throw FrameError("frame labels must be non-empty");
  }
  if (source_ == target_) {
    throw FrameError("source and target frame are both \"" + source_ + "\"");
  }
  if (!translation_.allFinite()) {
    throw ValidationError("translation must be finite");
  }
}

RigidTransform RigidTransform::inverse() const
{
  const RotationMatrix rt = rotation_.transpose();
  return RigidTransform(rt, -(rt * translation_), target_, source_);
}

RigidTransform RigidTransform::after(const RigidTransform & first) const
{
  if (first.target_ != source_) {
    throw FrameError(
      "cannot chain " + first.source_ + "->" + first.target_ + " with " + source_ + "->" +
      target_);
  }
  return RigidTransform(
    rotation_ * first.rotation_, rotation_ * first.translation_ + translation_, first.source_,
    target_);
}

RigidTransform RigidTransform::relabeled(std::string source_frame, std::string target_frame) const
{
  return RigidTransform(rotation_, translation_, std::move(source_frame), std::move(target_frame));
}

ImagePoint project_point(const Intrinsics & k, const RigidTransform & t, const Vec3 & p)
{
  const Vec3 pc = t.apply(p);
  if (pc.z() <= kBehindCameraEpsilon) {
    throw BehindCameraError("point is at or behind the camera plane");
  }
  const Vec3 xyw = k.matrix() * pc;
  return {xyw.x() / xyw.z(), xyw.y() / xyw.z(), xyw.z()};
}

Vec3 unproject_point(const Intrinsics & k, const RigidTransform & t, const ImagePoint & ip)
{
  const double z = ip.w;
  const double y = (ip.v - k.cy()) * z / k.fy();
  const double x = ((ip.u - k.cx()) * z - k.skew() * y) / k.fx();
  return t.inverse().apply(Vec3(x, y, z));
}

Box3D move_box(const RotationMatrix & r, const Vec3 & translation, const Box3D & b)
{
  const RotationMatrix orientation = r * b.rotation();
  return Box3D(r * b.center() + translation, b.dims(), euler_from_rotation(orientation));
}

Box3D transform_box(const RigidTransform & t, const Box3D & b, std::string_view box_frame)
{
  if (box_frame != t.source_frame()) {
    throw FrameError(
      "box is in frame \"" + std::string(box_frame) + "\" but transform starts at \"" +
      t.source_frame() + "\"");
  }
  return move_box(t.rotation(), t.translation(), b);
}

ProjectedBox project_box(const Intrinsics & k, const RigidTransform & t, const Box3D & b)
{
  const auto corners = box_corners(b);
  std::array<Vec3, 8> cam;
  for (int i = 0; i < 8; ++i) {
    cam[i] = t.apply(corners[i]);
  }

  const Mat3 km = k.matrix();
  const double width = k.image_width();
  const double height = k.image_height();
  ProjectedBox out;
  double u_min = std::numeric_limits<double>::infinity();
  double v_min = u_min;
  double u_max = -u_min;
  double v_max = -u_min;
  bool any_front = false;
  auto add = [&](const Vec3 & pc, bool is_corner) {
      const Vec3 xyw = km * pc;
      const double u = xyw.x() / xyw.z();
      const double v = xyw.y() / xyw.z();
      u_min = std::min(u_min, u);
      u_max = std::max(u_max, u);
      v_min = std::min(v_min, v);
      v_max = std::max(v_max, v);
      any_front = true;
      if (is_corner && u >= 0.0 && u <= width && v >= 0.0 && v <= height) {
        out.any_corner_in_image = true;
      }
    };

  for (const auto & pc : cam) {
    if (pc.z() > kBehindCameraEpsilon) {
      add(pc, true);
    }
  }
  // Cut edges that cross the camera plane.
  for (int a = 0; a < 8; ++a) {
    for (int bit = 1; bit < 8; bit <<= 1) {
      if (a & bit) {
        continue;
      }
      const Vec3 & p = cam[a];
      const Vec3 & q = cam[a | bit];
      const bool p_front = p.z() > kBehindCameraEpsilon;
      const bool q_front = q.z() > kBehindCameraEpsilon;
      if (p_front != q_front) {
        const double s = (kBehindCameraEpsilon - p.z()) / (q.z() - p.z());
        Vec3 cut = p + s * (q - p);
        cut.z() = kBehindCameraEpsilon;
        add(cut, false);
      }
    }
  }
  if (!any_front) {
    return out;
  }

  out.unclipped = Rect2D{u_min, v_min, u_max, v_max};
  out.rect = Rect2D{
    std::clamp(u_min, 0.0, width), std::clamp(v_min, 0.0, height),
    std::clamp(u_max, 0.0, width), std::clamp(v_max, 0.0, height)};
  out.visible = out.rect.width() > 0.0 && out.rect.height() > 0.0;
  return out;
}

namespace
{

// Local box axes (x = width, y = height pointing down, z = length) expressed
// in a z-up frame for a heading about +z.
RotationMatrix zup_box_rotation(double heading)
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  Mat3 m;
  m.col(2) = Vec3(c, s, 0.0);
  m.col(1) = Vec3(0.0, 0.0, -1.0);
  m.col(0) = Vec3(s, -c, 0.0);
  return RotationMatrix::unchecked(m);
}

}  // namespace

Box3D box_from_zup_heading(const Vec3 & center, double length, double width, double height,
  double heading)
{
  if (!std::isfinite(heading)) {
    throw InvalidAngleError("heading must be finite");
  }
  return Box3D(
    center, Dimensions{height, width, length}, euler_from_rotation(zup_box_rotation(heading)));
}

Box3D transform_zup_box(
  const RigidTransform & t, const Vec3 & center, double length, double width, double height,
  double heading, std::string_view box_frame)
{
  if (box_frame != t.source_frame()) {
    throw FrameError(
      "box is in frame \"" + std::string(box_frame) + "\" but transform starts at \"" +
      t.source_frame() + "\"");
  }
  if (!std::isfinite(heading)) {
    throw InvalidAngleError("heading must be finite");
  }
  const RotationMatrix r = t.rotation() * zup_box_rotation(heading);
  return Box3D(t.apply(center), Dimensions{height, width, length}, euler_from_rotation(r));
}

RigidTransform Calibration::find(std::string_view from, std::string_view to) const
{
  for (const auto & t : transforms) {
    if (t.source_frame() == from && t.target_frame() == to) {
      return t;
    }
  }
  for (const auto & t : transforms) {
    if (t.source_frame() == to && t.target_frame() == from) {
      return t.inverse();
    }
  }
  throw FrameError(
    "calibration has no transform between \"" + std::string(from) + "\" and \"" +
    std::string(to) + "\"");
}

}  // namespace roadside3d
