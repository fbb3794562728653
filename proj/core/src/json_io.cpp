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
#include <set>
#include <string>

#include "detail.hpp"
#include "roadside3d/errors.hpp"
#include "roadside3d/formats.hpp"

namespace roadside3d
{

using nlohmann::json;

namespace
{

const json & require(const json & j, const char * key, std::string_view context)
{
  if (!j.is_object()) {
    throw SchemaError(std::string(context) + " must be a JSON object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(std::string(context) + " is missing \"" + key + "\"");
  }
  return *it;
}

double number(const json & j, std::string_view context)
{
  if (!j.is_number()) {
    throw SchemaError(std::string(context) + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw SchemaError(std::string(context) + " must be finite");
  }
  return v;
}

std::string string(const json & j, std::string_view context)
{
  if (!j.is_string()) {
    throw SchemaError(std::string(context) + " must be a string");
  }
  return j.get<std::string>();
}

std::vector<double> numbers(const json & j, std::size_t count, std::string_view context)
{
  if (!j.is_array() || j.size() != count) {
    throw SchemaError(
      std::string(context) + " must be an array of " + std::to_string(count) + " numbers");
  }
  std::vector<double> out;
  out.reserve(count);
  for (const auto & v : j) {
    out.push_back(number(v, context));
  }
  return out;
}

std::pair<int, int> image_size(const json & j, std::string_view context)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw SchemaError(std::string(context) + " must be [width, height] integers");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

json rotation_to_json(const RotationMatrix & r)
{
  json out = json::array();
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      out.push_back(r(row, col));
    }
  }
  return out;
}

json annotation_json(const AnnotationRecord & r, bool with_frame)
{
  validate(r);
  const auto & b = r.box3d;
  json j = {
    {"class", r.class_name},
    {"truncation", r.truncation},
    {"occlusion", static_cast<int>(r.occlusion)},
    {"alpha", r.alpha},
    {"box2d", nullptr},
    {"center", {b.center().x(), b.center().y(), b.center().z()}},
    {"dims", {b.dims().h, b.dims().w, b.dims().l}},
    {"yaw", b.orientation().yaw()},
    {"pitch", b.orientation().pitch()},
    {"roll", b.orientation().roll()},
  };
  if (r.box2d) {
    j["box2d"] = {r.box2d->x1, r.box2d->y1, r.box2d->x2, r.box2d->y2};
  }
  if (r.score) {
    j["score"] = *r.score;
  }
  if (with_frame && !r.frame_id.empty()) {
    j["frame_id"] = r.frame_id;
  }
  return j;
}

}  // namespace

nlohmann::json annotation_to_json(const AnnotationRecord & record)
{
  return annotation_json(record, true);
}

AnnotationRecord annotation_from_json(const nlohmann::json & j)
{
  constexpr std::string_view ctx = "annotation";
  AnnotationRecord r;
  r.class_name = string(require(j, "class", ctx), "annotation.class");
  if (j.contains("truncation")) {
    r.truncation = number(j["truncation"], "annotation.truncation");
  }
  if (j.contains("occlusion")) {
    const auto & occ = j["occlusion"];
    if (!occ.is_number_integer()) {
      throw SchemaError("annotation.occlusion must be an integer");
    }
    const int v = occ.get<int>();
    if (v < 0 || v > 3) {
      throw ValidationError("annotation.occlusion must be 0, 1, 2 or 3");
    }
    r.occlusion = static_cast<Occlusion>(v);
  }
  if (j.contains("alpha")) {
    r.alpha = number(j["alpha"], "annotation.alpha");
  }
  if (j.contains("box2d") && !j["box2d"].is_null()) {
    const auto v = numbers(j["box2d"], 4, "annotation.box2d");
    r.box2d = Rect2D{v[0], v[1], v[2], v[3]};
  }
  const auto c = numbers(require(j, "center", ctx), 3, "annotation.center");
  const auto d = numbers(require(j, "dims", ctx), 3, "annotation.dims");
  const double yaw = j.contains("yaw") ? number(j["yaw"], "annotation.yaw") : 0.0;
  const double pitch = j.contains("pitch") ? number(j["pitch"], "annotation.pitch") : 0.0;
  const double roll = j.contains("roll") ? number(j["roll"], "annotation.roll") : 0.0;
  r.box3d = Box3D(Vec3(c[0], c[1], c[2]), Dimensions{d[0], d[1], d[2]},
      EulerOrientation(yaw, pitch, roll));
  if (j.contains("score") && !j["score"].is_null()) {
    r.score = number(j["score"], "annotation.score");
  }
  if (j.contains("frame_id")) {
    r.frame_id = string(j["frame_id"], "annotation.frame_id");
  }
  validate(r);
  return r;
}

namespace detail
{

nlohmann::json parse_json_text(std::string_view text, std::string_view what)
{
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error & e) {
    // e.byte is 1-based; recover the line and column for the message.
    const std::size_t offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("invalid JSON in " + std::string(what), SourcePosition{line, column, "json"});
  }
}

std::vector<AnnotationRecord> parse_json_labels(std::string_view text)
{
  const json j = parse_json_text(text, "labels");
  if (!j.is_array()) {
    throw SchemaError("label document must be a JSON array");
  }
  std::vector<AnnotationRecord> out;
  out.reserve(j.size());
  for (const auto & item : j) {
    out.push_back(annotation_from_json(item));
  }
  return out;
}

std::string write_json_labels(std::span<const AnnotationRecord> records)
{
  json j = json::array();
  for (const auto & r : records) {
    j.push_back(annotation_json(r, true));
  }
  return j.dump(2) + "\n";
}

}  // namespace detail

const FrameRecord * DatasetManifest::find_frame(std::string_view frame_id) const
{
  for (const auto & f : frames) {
    if (f.frame_id == frame_id) {
      return &f;
    }
  }
  return nullptr;
}

void validate(const DatasetManifest & manifest)
{
  std::set<std::string_view> ids;
  const std::set<std::string_view> taxonomy(
    manifest.class_taxonomy.begin(), manifest.class_taxonomy.end());
  for (const auto & f : manifest.frames) {
    if (!ids.insert(f.frame_id).second) {
      throw ValidationError("duplicate frame id \"" + f.frame_id + "\"");
    }
    for (const auto & a : f.annotations) {
      if (!taxonomy.contains(a.class_name)) {
        throw TaxonomyError(
          "class \"" + a.class_name + "\" in frame \"" + f.frame_id + "\" is not in the taxonomy");
      }
    }
  }
}

DatasetManifest parse_manifest(std::string_view text)
{
  const json j = detail::parse_json_text(text, "manifest");
  DatasetManifest m;
  m.name = string(require(j, "name", "manifest"), "manifest.name");
  const auto & taxonomy = require(j, "class_taxonomy", "manifest");
  if (!taxonomy.is_array()) {
    throw SchemaError("manifest.class_taxonomy must be an array");
  }
  for (const auto & c : taxonomy) {
    m.class_taxonomy.push_back(string(c, "manifest.class_taxonomy[]"));
  }
  const auto & frames = require(j, "frames", "manifest");
  if (!frames.is_array()) {
    throw SchemaError("manifest.frames must be an array");
  }
  for (const auto & fj : frames) {
    FrameRecord f;
    f.frame_id = string(require(fj, "frame_id", "frame"), "frame.frame_id");
    f.image_path = fj.contains("image_path") ? string(fj["image_path"], "frame.image_path") : "";
    if (fj.contains("image_size")) {
      std::tie(f.image_width, f.image_height) = image_size(fj["image_size"], "frame.image_size");
    }
    f.calibration_ref =
      fj.contains("calibration_ref") ? string(fj["calibration_ref"], "frame.calibration_ref") : "";
    if (fj.contains("tags")) {
      if (!fj["tags"].is_object()) {
        throw SchemaError("frame.tags must be an object");
      }
      for (const auto & [k, v] : fj["tags"].items()) {
        f.tags[k] = string(v, "frame.tags");
      }
    }
    const auto & anns = require(fj, "annotations", "frame");
    if (!anns.is_array()) {
      throw SchemaError("frame.annotations must be an array");
    }
    for (const auto & aj : anns) {
      AnnotationRecord a = annotation_from_json(aj);
      a.frame_id = f.frame_id;
      f.annotations.push_back(std::move(a));
    }
    m.frames.push_back(std::move(f));
  }
  validate(m);
  return m;
}

std::string write_manifest(const DatasetManifest & manifest)
{
  validate(manifest);
  json frames = json::array();
  for (const auto & f : manifest.frames) {
    json anns = json::array();
    for (const auto & a : f.annotations) {
      anns.push_back(annotation_json(a, false));
    }
    json fj = {
      {"frame_id", f.frame_id},
      {"image_path", f.image_path},
      {"image_size", {f.image_width, f.image_height}},
      {"calibration_ref", f.calibration_ref},
      {"annotations", std::move(anns)},
    };
    if (!f.tags.empty()) {
      fj["tags"] = f.tags;
    }
    frames.push_back(std::move(fj));
  }
  const json j = {
    {"name", manifest.name},
    {"class_taxonomy", manifest.class_taxonomy},
    {"frames", std::move(frames)},
  };
  return j.dump(2) + "\n";
}

Calibration parse_calibration(std::string_view text)
{
  const json j = detail::parse_json_text(text, "calibration");
  const auto k = numbers(require(j, "K", "calibration"), 9, "calibration.K");
  const auto [width, height] = image_size(require(j, "image_size", "calibration"),
      "calibration.image_size");
  if (k[3] != 0.0 || k[6] != 0.0 || k[7] != 0.0 || k[8] != 1.0) {
    throw CalibrationError("K must have the form [fx s cx; 0 fy cy; 0 0 1]");
  }
  Calibration calib{Intrinsics(k[0], k[4], k[2], k[5], width, height, k[1]), {}};

  if (j.contains("transforms")) {
    const auto & transforms = j["transforms"];
    if (!transforms.is_array()) {
      throw SchemaError("calibration.transforms must be an array");
    }
    for (const auto & tj : transforms) {
      const auto source = string(require(tj, "source", "transform"), "transform.source");
      const auto target = string(require(tj, "target", "transform"), "transform.target");
      const auto r = numbers(require(tj, "R", "transform"), 9, "transform.R");
      const auto t = numbers(require(tj, "t", "transform"), 3, "transform.t");
      Mat3 m;
      m << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
      RotationMatrix rotation;
      try {
        rotation = RotationMatrix::from_matrix(m, 1e-6);
      } catch (const ValidationError & e) {
        throw CalibrationError(source + "->" + target + ": " + e.what());
      }
      calib.transforms.emplace_back(rotation, Vec3(t[0], t[1], t[2]), source, target);
    }
  }
  return calib;
}

std::string write_calibration(const Calibration & calibration)
{
  const auto & k = calibration.intrinsics;
  json transforms = json::array();
  for (const auto & t : calibration.transforms) {
    transforms.push_back({
        {"source", t.source_frame()},
        {"target", t.target_frame()},
        {"R", rotation_to_json(t.rotation())},
        {"t", {t.translation().x(), t.translation().y(), t.translation().z()}},
      });
  }
  const json j = {
    {"K", {k.fx(), k.skew(), k.cx(), 0.0, k.fy(), k.cy(), 0.0, 0.0, 1.0}},
    {"image_size", {k.image_width(), k.image_height()}},
    {"transforms", std::move(transforms)},
  };
  return j.dump(2) + "\n";
}

ClassMapping parse_class_mapping(std::string_view text)
{
  const json j = detail::parse_json_text(text, "class mapping");
  if (!j.is_object()) {
    throw SchemaError("class mapping must be a JSON object of strings");
  }
  ClassMapping mapping;
  for (const auto & [k, v] : j.items()) {
    mapping.table[k] = string(v, "class mapping value");
  }
  return mapping;
}

MappedRecords apply_class_mapping(std::span<const AnnotationRecord> records,
  const ClassMapping & mapping)
{
  MappedRecords out;
  for (const auto & r : records) {
    auto it = mapping.table.find(r.class_name);
    if (it == mapping.table.end()) {
      ++out.dropped;
      continue;
    }
    AnnotationRecord copy = r;
    copy.class_name = it->second;
    out.records.push_back(std::move(copy));
  }
  return out;
}

}  // namespace roadside3d
