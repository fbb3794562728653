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
#include <string>
#include <vector>

#include <fmt/format.h>

#include "roadside3d/formats.hpp"

namespace roadside3d
{

DatasetStats & DatasetStats::operator+=(const DatasetStats & rhs)
{
  frames += rhs.frames;
  boxes += rhs.boxes;
  for (const auto & [name, count] : rhs.per_class) {
    per_class[name] += count;
  }
  resolutions.insert(rhs.resolutions.begin(), rhs.resolutions.end());
  return *this;
}

DatasetStats dataset_stats(const DatasetManifest & manifest)
{
  DatasetStats s;
  s.frames = manifest.frames.size();
  for (const auto & f : manifest.frames) {
    s.boxes += f.annotations.size();
    s.resolutions.emplace(f.image_width, f.image_height);
    for (const auto & a : f.annotations) {
      ++s.per_class[a.class_name];
    }
  }
  return s;
}

std::string compact_count(std::size_t n)
{
  auto scaled = [](double value, const char * suffix) {
      std::string s = fmt::format("{:.1f}", value);
      if (s.ends_with(".0")) {
        s.resize(s.size() - 2);
      }
      return s + suffix;
    };
  if (n < 1000) {
    return std::to_string(n);
  }
  if (n < 1000000) {
    return scaled(static_cast<double>(n) / 1e3, "k");
  }
  return scaled(static_cast<double>(n) / 1e6, "M");
}

std::string render_stats_table(
  std::span<const std::pair<std::string, DatasetStats>> rows)
{
  std::vector<std::array<std::string, 4>> cells;
  cells.push_back({"Dataset", "Resolution", "Images", "3D Boxes"});
  for (const auto & [name, s] : rows) {
    std::string res;
    for (const auto & [w, h] : s.resolutions) {
      if (!res.empty()) {
        res += ", ";
      }
      res += fmt::format("{}x{}", w, h);
    }
    cells.push_back({name, res.empty() ? "-" : res, compact_count(s.frames),
        compact_count(s.boxes)});
  }
  std::array<std::size_t, 4> width{};
  for (const auto & row : cells) {
    for (std::size_t c = 0; c < 4; ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    out += fmt::format(
      "{:<{}} | {:<{}} | {:>{}} | {:>{}}\n", cells[r][0], width[0], cells[r][1], width[1],
      cells[r][2], width[2], cells[r][3], width[3]);
    if (r == 0) {
      out += fmt::format(
        "{:-<{}}-+-{:-<{}}-+-{:-<{}}-+-{:-<{}}\n", "", width[0], "", width[1], "", width[2], "",
        width[3]);
    }
  }
  return out;
}

nlohmann::json stats_to_json(const DatasetStats & stats)
{
  nlohmann::json resolutions = nlohmann::json::array();
  for (const auto & [w, h] : stats.resolutions) {
    resolutions.push_back({w, h});
  }
  return {
    {"frames", stats.frames},
    {"boxes", stats.boxes},
    {"per_class", stats.per_class},
    {"resolutions", std::move(resolutions)},
  };
}

}  // namespace roadside3d
