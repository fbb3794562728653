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

#include "roadside3d/geometry.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "roadside3d/errors.hpp"

namespace roadside3d
{

namespace
{

constexpr double kGimbalEpsilon = 1e-6;

bool finite(double x) {return std::isfinite(x);}

}  // namespace

double normalize_angle(double radians)
{
  double a = std::remainder(radians, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) {
    a += 2.0 * std::numbers::pi;
  }
  return a;
}

EulerOrientation::EulerOrientation(double yaw, double pitch, double roll)
{
  if (!finite(yaw) || !finite(pitch) || !finite(roll)) {
    throw InvalidAngleError("orientation angles must be finite");
  }
  yaw_ = normalize_angle(yaw);
  pitch_ = normalize_angle(pitch);
  roll_ = normalize_angle(roll);
}

RotationMatrix::RotationMatrix()
: m_(Mat3::Identity()) {}

RotationMatrix RotationMatrix::from_matrix(const Mat3 & m, double tolerance)
{
  if (!m.allFinite()) {
    throw ValidationError("rotation matrix has non-finite entries");
  }
  RotationMatrix r(m);
  if (r.orthonormality_error() > tolerance) {
    throw ValidationError("rotation matrix is not orthonormal");
  }
  if (r.determinant_error() > tolerance) {
    throw ValidationError("rotation matrix determinant is not +1");
  }
  return r;
}

RotationMatrix RotationMatrix::unchecked(const Mat3 & m)
{
  return RotationMatrix(m);
}

double RotationMatrix::orthonormality_error() const
{
  return (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff();
}

double RotationMatrix::determinant_error() const
{
  return std::abs(m_.determinant() - 1.0);
}

RotationMatrix rotation_about_x(double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 m;
  m << 1.0, 0.0, 0.0,
    0.0, c, -s,
    0.0, s, c;
  return RotationMatrix::unchecked(m);
}

RotationMatrix rotation_about_y(double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 m;
  m << c, 0.0, s,
    0.0, 1.0, 0.0,
    -s, 0.0, c;
  return RotationMatrix::unchecked(m);
}

RotationMatrix rotation_about_z(double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 m;
  m << c, -s, 0.0,
    s, c, 0.0,
    0.0, 0.0, 1.0;
  return RotationMatrix::unchecked(m);
}

RotationMatrix rotation_from_euler(const EulerOrientation & o)
{
  // Closed form of R_Y(yaw) * R_X(pitch) * R_Z(roll).
  const double ca = std::cos(o.yaw()), sa = std::sin(o.yaw());
  const double cb = std::cos(o.pitch()), sb = std::sin(o.pitch());
  const double cc = std::cos(o.roll()), sc = std::sin(o.roll());
  Mat3 m;
  m << ca * cc + sa * sb * sc, -ca * sc + sa * sb * cc, sa * cb,
    cb * sc, cb * cc, -sb,
    -sa * cc + ca * sb * sc, sa * sc + ca * sb * cc, ca * cb;
  return RotationMatrix::unchecked(m);
}

RotationMatrix rotation_from_euler(double yaw, double pitch, double roll)
{
  return rotation_from_euler(EulerOrientation(yaw, pitch, roll));
}

EulerOrientation euler_from_rotation(const RotationMatrix & r)
{
  const double pitch = std::atan2(-r(1, 2), std::hypot(r(1, 0), r(1, 1)));
  if (std::abs(std::abs(pitch) - std::numbers::pi / 2.0) <= kGimbalEpsilon) {
    // Yaw and roll share an axis; keep roll at zero.
    const double yaw = pitch > 0.0 ? std::atan2(r(0, 1), r(0, 0)) : std::atan2(-r(0, 1), r(0, 0));
    return {yaw, pitch, 0.0};
  }
  const double yaw = std::atan2(r(0, 2), r(2, 2));
  const double roll = std::atan2(r(1, 0), r(1, 1));
  return {yaw, pitch, roll};
}

double geodesic_angle(const RotationMatrix & a, const RotationMatrix & b)
{
  const Mat3 rel = a.matrix().transpose() * b.matrix();
  const double cos_term = (rel.trace() - 1.0) / 2.0;
  const Vec3 axis(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1));
  return std::atan2(axis.norm() / 2.0, cos_term);
}

Box3D::Box3D(const Vec3 & center, const Dimensions & dims, const EulerOrientation & orientation)
: center_(center), dims_(dims), orientation_(orientation)
{
  if (!center.allFinite()) {
    throw InvalidBoxError("box center must be finite");
  }
  if (!finite(dims.h) || !finite(dims.w) || !finite(dims.l) ||
    dims.h <= 0.0 || dims.w <= 0.0 || dims.l <= 0.0)
  {
    throw InvalidBoxError("box dimensions must be finite and positive");
  }
}

std::array<Vec3, 8> box_corners(const Box3D & b)
{
  const Mat3 r = b.rotation().matrix();
  const Vec3 half(b.dims().w / 2.0, b.dims().h / 2.0, b.dims().l / 2.0);
  std::array<Vec3, 8> corners;
  for (int k = 0; k < 8; ++k) {
    const Vec3 local(
      (k & 1) ? half.x() : -half.x(),
      (k & 2) ? half.y() : -half.y(),
      (k & 4) ? half.z() : -half.z());
    corners[k] = b.center() + r * local;
  }
  return corners;
}

std::array<HalfSpace, 6> box_half_spaces(const Box3D & b)
{
  const Mat3 r = b.rotation().matrix();
  const std::array<double, 3> half{b.dims().w / 2.0, b.dims().h / 2.0, b.dims().l / 2.0};
  std::array<HalfSpace, 6> planes;
  for (int axis = 0; axis < 3; ++axis) {
    const Vec3 n = r.col(axis);
    const double c = n.dot(b.center());
    planes[2 * axis] = HalfSpace{n, c + half[axis]};
    planes[2 * axis + 1] = HalfSpace{-n, -c + half[axis]};
  }
  return planes;
}

}  // namespace roadside3d
