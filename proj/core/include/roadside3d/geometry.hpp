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
/// \brief 9-DOF oriented boxes, the Euler rotation convention, and exact 3D IoU.
///
/// All boxes live in a camera-style frame: x right, y down, z forward.
/// Orientation is the intrinsic composition
///
///     R = R_Y(yaw) * R_X(pitch) * R_Z(roll)
///
/// and a box's length runs along its local z axis, height along local y and
/// width along local x.
#ifndef ROADSIDE3D_GEOMETRY_HPP_
#define ROADSIDE3D_GEOMETRY_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace roadside3d
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

/// Yaw/pitch/roll in radians, each normalised into (-pi, pi] on construction.
class EulerOrientation
{
public:
  EulerOrientation() = default;
  /// Throws InvalidAngleError if any angle is not finite.
  EulerOrientation(double yaw, double pitch, double roll);

  double yaw() const noexcept {return yaw_;}
  double pitch() const noexcept {return pitch_;}
  double roll() const noexcept {return roll_;}

  friend bool operator==(const EulerOrientation &, const EulerOrientation &) = default;

private:
  double yaw_ = 0.0;
  double pitch_ = 0.0;
  double roll_ = 0.0;
};

/// A proper rotation (orthonormal, det +1).
class RotationMatrix
{
public:
  /// Identity.
  RotationMatrix();

  /// Validates orthonormality and det = +1 within `tolerance`; throws
  /// ValidationError otherwise.
  static RotationMatrix from_matrix(const Mat3 & m, double tolerance = 1e-9);

  /// Skips validation. For matrices that are rotations by construction.
  static RotationMatrix unchecked(const Mat3 & m);

  const Mat3 & matrix() const noexcept {return m_;}
  double operator()(int r, int c) const {return m_(r, c);}

  RotationMatrix transpose() const {return unchecked(m_.transpose());}
  RotationMatrix operator*(const RotationMatrix & rhs) const {return unchecked(m_ * rhs.m_);}
  Vec3 operator*(const Vec3 & v) const {return m_ * v;}

  /// max |(R^T R - I)_ij| and |det R - 1|.
  double orthonormality_error() const;
  double determinant_error() const;

private:
  explicit RotationMatrix(const Mat3 & m)
  : m_(m) {}

  Mat3 m_;
};

RotationMatrix rotation_about_x(double angle);
RotationMatrix rotation_about_y(double angle);
RotationMatrix rotation_about_z(double angle);

/// R_Y(yaw) * R_X(pitch) * R_Z(roll).
RotationMatrix rotation_from_euler(const EulerOrientation & o);

/// Validates finiteness first; throws InvalidAngleError.
RotationMatrix rotation_from_euler(double yaw, double pitch, double roll);

/// Inverse of rotation_from_euler with pitch in [-pi/2, pi/2]. When |pitch| is
/// within 1e-6 of pi/2 the roll is set to zero and the residual rotation is
/// folded into yaw.
EulerOrientation euler_from_rotation(const RotationMatrix & r);

/// Angle of the relative rotation a^T b, in [0, pi].
double geodesic_angle(const RotationMatrix & a, const RotationMatrix & b);

struct Dimensions
{
  double h = 1.0;
  double w = 1.0;
  double l = 1.0;

  friend bool operator==(const Dimensions &, const Dimensions &) = default;
};

/// 9-DOF oriented box: center (m), dims (m), orientation.
class Box3D
{
public:
  Box3D() = default;
  /// Throws InvalidBoxError for non-positive or non-finite fields.
  Box3D(const Vec3 & center, const Dimensions & dims, const EulerOrientation & orientation);

  const Vec3 & center() const noexcept {return center_;}
  const Dimensions & dims() const noexcept {return dims_;}
  const EulerOrientation & orientation() const noexcept {return orientation_;}

  RotationMatrix rotation() const {return rotation_from_euler(orientation_);}
  double volume() const noexcept {return dims_.h * dims_.w * dims_.l;}

  friend bool operator==(const Box3D &, const Box3D &) = default;

private:
  Vec3 center_ = Vec3::Zero();
  Dimensions dims_;
  EulerOrientation orientation_;
};

/// Corner k sits at center + R * (sx * w/2, sy * h/2, sz * l/2) where
/// sx = +1 iff (k & 1), sy = +1 iff (k & 2), sz = +1 iff (k & 4), else -1.
std::array<Vec3, 8> box_corners(const Box3D & b);

/// Closed half-space {p : normal . p <= offset}.
struct HalfSpace
{
  Vec3 normal;
  double offset;

  double signed_distance(const Vec3 & p) const {return normal.dot(p) - offset;}
};

/// The six outward face planes of a box.
std::array<HalfSpace, 6> box_half_spaces(const Box3D & b);

/// Convex polyhedron as shared vertices plus outward (counter-clockwise seen
/// from outside) face index cycles.
struct ConvexPolytope
{
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;

  bool empty() const noexcept {return faces.empty();}

  static ConvexPolytope from_box(const Box3D & b);
};

/// Vertices closer than this to a clipping plane count as lying on it.
inline constexpr double kClipEpsilon = 1e-9;

/// Intersection of `poly` with `h`.
ConvexPolytope clip(const ConvexPolytope & poly, const HalfSpace & h, double eps = kClipEpsilon);

/// Enclosed volume by the divergence theorem; 0 for an empty polytope.
double polytope_volume(const ConvexPolytope & poly);

/// Exact volume of a intersect b, by clipping one box against the other's
/// faces. Argument order does not change the result.
double intersection_volume(const Box3D & a, const Box3D & b);

/// Volume IoU in [0, 1].
double iou3d(const Box3D & a, const Box3D & b);

}  // namespace roadside3d

#endif  // ROADSIDE3D_GEOMETRY_HPP_
