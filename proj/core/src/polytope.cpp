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
#include <map>
#include <numeric>
#include <tuple>
#include <utility>

#include "roadside3d/geometry.hpp"

namespace roadside3d
{

namespace
{

enum class Side {kIn, kOn, kOut};

// Outward, counter-clockwise cycles over the corner numbering of box_corners.
constexpr int kBoxFaces[6][4] = {
  {1, 3, 7, 5},  // +x
  {0, 4, 6, 2},  // -x
  {2, 6, 7, 3},  // +y
  {0, 1, 5, 4},  // -y
  {4, 5, 7, 6},  // +z
  {0, 2, 3, 1},  // -z
};

auto box_key(const Box3D & b)
{
  const auto & c = b.center();
  const auto & d = b.dims();
  const auto & o = b.orientation();
  return std::make_tuple(c.x(), c.y(), c.z(), d.h, d.w, d.l, o.yaw(), o.pitch(), o.roll());
}

Box3D translated(const Box3D & b, const Vec3 & offset)
{
  return Box3D(b.center() + offset, b.dims(), b.orientation());
}

// Orders cap vertices counter-clockwise about `normal`.
void order_around(std::vector<int> & cycle, const std::vector<Vec3> & vertices, const Vec3 & normal)
{
  Vec3 centroid = Vec3::Zero();
  for (int i : cycle) {
    centroid += vertices[i];
  }
  centroid /= static_cast<double>(cycle.size());

  const Vec3 helper = std::abs(normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 u = normal.cross(helper).normalized();
  const Vec3 v = normal.cross(u);

  std::vector<std::pair<double, int>> keyed;
  keyed.reserve(cycle.size());
  for (int i : cycle) {
    const Vec3 d = vertices[i] - centroid;
    keyed.emplace_back(std::atan2(d.dot(v), d.dot(u)), i);
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    cycle[k] = keyed[k].second;
  }
}

}  // namespace

ConvexPolytope ConvexPolytope::from_box(const Box3D & b)
{
  ConvexPolytope poly;
  const auto corners = box_corners(b);
  poly.vertices.assign(corners.begin(), corners.end());
  for (const auto & f : kBoxFaces) {
    poly.faces.emplace_back(std::begin(f), std::end(f));
  }
  return poly;
}

ConvexPolytope clip(const ConvexPolytope & poly, const HalfSpace & h, double eps)
{
  const std::size_t n = poly.vertices.size();
  std::vector<double> dist(n);
  std::vector<Side> side(n);
  bool any_in = false;
  bool any_out = false;
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = h.signed_distance(poly.vertices[i]);
    if (dist[i] > eps) {
      side[i] = Side::kOut;
      any_out = true;
    } else if (dist[i] < -eps) {
      side[i] = Side::kIn;
      any_in = true;
    } else {
      side[i] = Side::kOn;
    }
  }
  if (!any_out) {
    return poly;
  }
  if (!any_in) {
    return {};
  }

  ConvexPolytope out;
  std::vector<int> remap(n, -1);
  std::vector<bool> on_plane;
  auto keep = [&](int i) {
      if (remap[i] < 0) {
        remap[i] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(poly.vertices[i]);
        on_plane.push_back(side[i] == Side::kOn);
      }
      return remap[i];
    };

  std::map<std::pair<int, int>, int> crossings;
  auto crossing = [&](int p, int q) {
      const auto key = std::minmax(p, q);
      auto it = crossings.find(key);
      if (it != crossings.end()) {
        return it->second;
      }
      // Always interpolate from the lower index so shared edges agree bitwise.
      const int a = key.first;
      const int b = key.second;
      const double t = dist[a] / (dist[a] - dist[b]);
      const int idx = static_cast<int>(out.vertices.size());
      out.vertices.push_back(poly.vertices[a] + t * (poly.vertices[b] - poly.vertices[a]));
      on_plane.push_back(true);
      crossings.emplace(key, idx);
      return idx;
    };

  for (const auto & face : poly.faces) {
    std::vector<int> cycle;
    const std::size_t m = face.size();
    for (std::size_t k = 0; k < m; ++k) {
      const int p = face[k];
      const int q = face[(k + 1) % m];
      if (side[p] != Side::kOut) {
        cycle.push_back(keep(p));
      }
      const bool splits = (side[p] == Side::kIn && side[q] == Side::kOut) ||
        (side[p] == Side::kOut && side[q] == Side::kIn);
      if (splits) {
        cycle.push_back(crossing(p, q));
      }
    }
    cycle.erase(std::unique(cycle.begin(), cycle.end()), cycle.end());
    if (cycle.size() > 1 && cycle.front() == cycle.back()) {
      cycle.pop_back();
    }
    if (cycle.size() >= 3) {
      out.faces.push_back(std::move(cycle));
    }
  }

  // Cap face: every surviving vertex that lies on the plane.
  std::vector<bool> used(out.vertices.size(), false);
  for (const auto & face : out.faces) {
    for (int i : face) {
      used[i] = true;
    }
  }
  std::vector<int> cap;
  for (std::size_t i = 0; i < out.vertices.size(); ++i) {
    if (used[i] && on_plane[i]) {
      cap.push_back(static_cast<int>(i));
    }
  }
  if (cap.size() >= 3) {
    order_around(cap, out.vertices, h.normal);
    out.faces.push_back(std::move(cap));
  }

  if (out.faces.size() < 4) {
    return {};
  }

  // Drop unreferenced vertices.
  std::vector<int> compact(out.vertices.size(), -1);
  std::vector<Vec3> vertices;
  for (auto & face : out.faces) {
    for (int & i : face) {
      if (compact[i] < 0) {
        compact[i] = static_cast<int>(vertices.size());
        vertices.push_back(out.vertices[i]);
      }
      i = compact[i];
    }
  }
  out.vertices = std::move(vertices);
  return out;
}

double polytope_volume(const ConvexPolytope & poly)
{
  if (poly.empty()) {
    return 0.0;
  }
  const Vec3 & ref = poly.vertices.front();
  double six_volume = 0.0;
  for (const auto & face : poly.faces) {
    const Vec3 a = poly.vertices[face[0]] - ref;
    for (std::size_t k = 1; k + 1 < face.size(); ++k) {
      const Vec3 b = poly.vertices[face[k]] - ref;
      const Vec3 c = poly.vertices[face[k + 1]] - ref;
      six_volume += a.dot(b.cross(c));
    }
  }
  return std::max(0.0, six_volume / 6.0);
}

double intersection_volume(const Box3D & a, const Box3D & b)
{
  const bool swap = box_key(b) < box_key(a);
  const Box3D & first = swap ? b : a;
  const Box3D & second = swap ? a : b;

  const auto half_diagonal = [](const Box3D & x) {
      const auto & d = x.dims();
      return 0.5 * std::sqrt(d.h * d.h + d.w * d.w + d.l * d.l);
    };
  if ((first.center() - second.center()).norm() >= half_diagonal(first) + half_diagonal(second)) {
    return 0.0;
  }

  // Work relative to the first centre to keep coordinates small.
  const Vec3 origin = first.center();
  ConvexPolytope poly = ConvexPolytope::from_box(translated(first, -origin));
  for (const auto & plane : box_half_spaces(translated(second, -origin))) {
    poly = clip(poly, plane);
    if (poly.empty()) {
      return 0.0;
    }
  }
  return std::min({polytope_volume(poly), a.volume(), b.volume()});
}

double iou3d(const Box3D & a, const Box3D & b)
{
  const double inter = intersection_volume(a, b);
  if (inter <= 0.0) {
    return 0.0;
  }
  const double uni = a.volume() + b.volume() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace roadside3d
