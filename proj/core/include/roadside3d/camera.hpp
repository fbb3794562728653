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
/// \brief Pinhole intrinsics, labelled rigid transforms and box projection.
///
/// A point P in a source frame lands in the image as
///
///     [x y w]^T = K * [R | t] * [P 1]^T,   u = x / w,  v = y / w
///
/// where w is the camera-frame depth.
#ifndef ROADSIDE3D_CAMERA_HPP_
#define ROADSIDE3D_CAMERA_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "roadside3d/geometry.hpp"

namespace roadside3d
{

/// Points closer than this to the camera plane cannot be projected.
inline constexpr double kBehindCameraEpsilon = 1e-6;

class Intrinsics
{
public:
  /// Throws ValidationError unless fx, fy > 0 and the principal point lies
  /// inside the image.
  Intrinsics(
    double fx, double fy, double cx, double cy, int image_width, int image_height,
    double skew = 0.0);

  double fx() const noexcept {return fx_;}
  double fy() const noexcept {return fy_;}
  double cx() const noexcept {return cx_;}
  double cy() const noexcept {return cy_;}
  double skew() const noexcept {return skew_;}
  int image_width() const noexcept {return width_;}
  int image_height() const noexcept {return height_;}

  Mat3 matrix() const;

  /// Intrinsics for the image resized by `factor`.
  Intrinsics scaled(double factor) const;

  /// fx = fy chosen so the image width spans `horizontal_fov_deg`; principal
  /// point at the image centre.
  static Intrinsics from_fov(int image_width, int image_height, double horizontal_fov_deg);

  friend bool operator==(const Intrinsics &, const Intrinsics &) = default;

private:
  double fx_;
  double fy_;
  double cx_;
  double cy_;
  double skew_;
  int width_;
  int height_;
};

/// p_target = rotation * p_source + translation.
class RigidTransform
{
public:
  /// Throws FrameError if a label is empty or both labels are equal.
  RigidTransform(
    const RotationMatrix & rotation, const Vec3 & translation, std::string source_frame,
    std::string target_frame);

  const RotationMatrix & rotation() const noexcept {return rotation_;}
  const Vec3 & translation() const noexcept {return translation_;}
  const std::string & source_frame() const noexcept {return source_;}
  const std::string & target_frame() const noexcept {return target_;}

  Vec3 apply(const Vec3 & p) const {return rotation_ * p + translation_;}
  RigidTransform inverse() const;

  /// `this` after `first`; first.target must equal this->source.
  RigidTransform after(const RigidTransform & first) const;

  /// Same rotation and translation, new labels.
  RigidTransform relabeled(std::string source_frame, std::string target_frame) const;

private:
  RotationMatrix rotation_;
  Vec3 translation_;
  std::string source_;
  std::string target_;
};

struct ImagePoint
{
  double u;
  double v;
  double w;
};

/// Throws BehindCameraError when the camera-frame depth is <= 1e-6 m.
ImagePoint project_point(const Intrinsics & k, const RigidTransform & t, const Vec3 & p);

/// Inverse of project_point: pixel (u, v) at depth w back into t's source frame.
Vec3 unproject_point(const Intrinsics & k, const RigidTransform & t, const ImagePoint & ip);

/// Moves a box expressed in `box_frame` into t's target frame. Rotation is
/// applied to the full orientation, so a yaw-only box generally gains pitch
/// and roll. Throws FrameError when box_frame != t.source_frame().
Box3D transform_box(const RigidTransform & t, const Box3D & b, std::string_view box_frame);

/// Box applied to a rigid motion without frame bookkeeping.
Box3D move_box(const RotationMatrix & r, const Vec3 & translation, const Box3D & b);

struct Rect2D
{
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const noexcept {return x2 - x1;}
  double height() const noexcept {return y2 - y1;}
  double area() const noexcept {return width() * height();}

  friend bool operator==(const Rect2D &, const Rect2D &) = default;
};

struct ProjectedBox
{
  /// Clipped to the image rectangle.
  Rect2D rect;
  /// Before clipping; lets callers compute truncation.
  Rect2D unclipped;
  bool visible = false;
  /// At least one of the eight corners projects inside the image.
  bool any_corner_in_image = false;
};

/// Image-plane extent of a box. Edges crossing the camera plane are cut at
/// depth 1e-6 m so partially visible boxes still get an extent. `visible`
/// is false when the whole box is behind the camera or misses the image.
ProjectedBox project_box(const Intrinsics & k, const RigidTransform & t, const Box3D & b);

/// A 7-DOF box from a z-up sensor frame (x forward, y left, z up) whose
/// `heading` rotates about +z; converted to this library's box convention in
/// that same frame.
Box3D box_from_zup_heading(const Vec3 & center, double length, double width, double height,
  double heading);

/// Same import, moved straight into t's target frame without an intermediate
/// Euler decomposition. Throws FrameError when box_frame != t.source_frame().
Box3D transform_zup_box(
  const RigidTransform & t, const Vec3 & center, double length, double width, double height,
  double heading, std::string_view box_frame);

/// Intrinsics plus the named transforms of one sensor rig.
struct Calibration
{
  Intrinsics intrinsics;
  std::vector<RigidTransform> transforms;

  /// Transform from `from` to `to`, inverting a stored one if needed. Throws
  /// FrameError when neither direction is present.
  RigidTransform find(std::string_view from, std::string_view to) const;
};

}  // namespace roadside3d

#endif  // ROADSIDE3D_CAMERA_HPP_
