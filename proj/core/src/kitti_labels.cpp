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

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>
#include <vector>

#include <fmt/format.h>

#include "detail.hpp"
#include "roadside3d/errors.hpp"
#include "roadside3d/formats.hpp"

namespace roadside3d
{

namespace
{

constexpr std::array<const char *, 18> kFieldNames{
  "class", "truncation", "occlusion", "alpha", "x1", "y1", "x2", "y2",
  "h", "w", "l", "x", "y", "z", "yaw", "pitch", "roll", "score"};

// Column indices for the 18-column layout; 16-column lines put the score at 15.
enum Column : std::size_t
{
  kClass, kTruncation, kOcclusion, kAlpha, kX1, kY1, kX2, kY2,
  kH, kW, kL, kX, kY, kZ, kYaw, kPitch, kRoll, kScore
};

struct Token
{
  std::string_view text;
  std::size_t column;
};

bool is_space(char c)
{
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::vector<Token> tokenize(std::string_view line)
{
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) {
      ++i;
    }
    if (i > start) {
      tokens.push_back({line.substr(start, i - start), start + 1});
    }
  }
  return tokens;
}

class LineReader
{
public:
  LineReader(std::size_t line, const std::vector<Token> & tokens)
  : line_(line), tokens_(tokens) {}

  SourcePosition position(std::size_t token, Column field) const
  {
    const std::size_t column = token < tokens_.size() ? tokens_[token].column : 0;
    return {line_, column, kFieldNames[field]};
  }

  double number(std::size_t token, Column field) const
  {
    const std::string_view text = tokens_[token].text;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError("expected a number, got \"" + std::string(text) + "\"",
              position(token, field));
    }
    if (!std::isfinite(value)) {
      throw ParseError("value must be finite", position(token, field));
    }
    return value;
  }

  int integer(std::size_t token, Column field) const
  {
    const std::string_view text = tokens_[token].text;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError("expected an integer, got \"" + std::string(text) + "\"",
              position(token, field));
    }
    return value;
  }

private:
  std::size_t line_;
  const std::vector<Token> & tokens_;
};

AnnotationRecord parse_kitti_line(
  std::size_t line_no, const std::vector<Token> & tokens, std::string_view frame_id)
{
  const LineReader reader(line_no, tokens);
  const std::size_t n = tokens.size();
  if (n < 15 || n > 18) {
    const Column field = n < 15 ? static_cast<Column>(n) : kScore;
    throw ParseError(
      "expected 15 to 18 columns, found " + std::to_string(n),
      SourcePosition{
        line_no, n < 15 ? tokens.back().column + tokens.back().text.size() : tokens[18].column,
        kFieldNames[field]});
  }

  AnnotationRecord r;
  r.class_name = std::string(tokens[kClass].text);
  r.frame_id = std::string(frame_id);

  r.truncation = reader.number(kTruncation, kTruncation);
  if (r.truncation < 0.0 || r.truncation > 1.0) {
    throw FieldRangeError("truncation must be in [0, 1]", reader.position(kTruncation, kTruncation));
  }
  const int occlusion = reader.integer(kOcclusion, kOcclusion);
  if (occlusion < 0 || occlusion > 3) {
    throw FieldRangeError("occlusion must be 0, 1, 2 or 3", reader.position(kOcclusion, kOcclusion));
  }
  r.occlusion = static_cast<Occlusion>(occlusion);
  r.alpha = reader.number(kAlpha, kAlpha);

  const Rect2D rect{
    reader.number(kX1, kX1), reader.number(kY1, kY1),
    reader.number(kX2, kX2), reader.number(kY2, kY2)};
  if (!(rect.x1 == -1.0 && rect.y1 == -1.0 && rect.x2 == -1.0 && rect.y2 == -1.0)) {
    r.box2d = rect;
  }

  Dimensions dims;
  dims.h = reader.number(kH, kH);
  dims.w = reader.number(kW, kW);
  dims.l = reader.number(kL, kL);
  for (Column c : {kH, kW, kL}) {
    const double v = c == kH ? dims.h : c == kW ? dims.w : dims.l;
    if (v <= 0.0) {
      throw FieldRangeError("dimension must be positive", reader.position(c, c));
    }
  }
  const Vec3 center(reader.number(kX, kX), reader.number(kY, kY), reader.number(kZ, kZ));
  const double yaw = reader.number(kYaw, kYaw);
  double pitch = 0.0;
  double roll = 0.0;
  if (n >= 17) {
    pitch = reader.number(kPitch, kPitch);
    roll = reader.number(kRoll, kRoll);
  }
  if (n == 16 || n == 18) {
    const std::size_t token = n - 1;
    const double score = reader.number(token, kScore);
    if (score < 0.0 || score > 1.0) {
      throw FieldRangeError("score must be in [0, 1]", reader.position(token, kScore));
    }
    r.score = score;
  }
  r.box3d = Box3D(center, dims, EulerOrientation(yaw, pitch, roll));
  return r;
}

std::vector<AnnotationRecord> parse_kitti(std::string_view text, std::string_view frame_id)
{
  std::vector<AnnotationRecord> records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    ++line_no;
    const auto tokens = tokenize(text.substr(start, end - start));
    if (!tokens.empty()) {
      records.push_back(parse_kitti_line(line_no, tokens, frame_id));
    }
    start = end + 1;
  }
  return records;
}

std::string write_kitti(std::span<const AnnotationRecord> records)
{
  std::string out;
  for (const auto & r : records) {
    if (r.class_name.empty()) {
      throw SerializationError("class name is empty");
    }
    for (char c : r.class_name) {
      if (is_space(c) || c == '\n') {
        throw SerializationError("class name \"" + r.class_name + "\" contains whitespace");
      }
    }
    validate(r);
    const Rect2D rect = r.box2d.value_or(Rect2D{-1.0, -1.0, -1.0, -1.0});
    const auto & b = r.box3d;
    const auto & o = b.orientation();
    fmt::format_to(
      std::back_inserter(out),
      "{} {:.6g} {} {:.6g} {:.6g} {:.6g} {:.6g} {:.6g} {:.6g} {:.6g} {:.6g} {:.6g} {:.6g} {:.6g} "
      "{:.6g} {:.6g} {:.6g}",
      r.class_name, r.truncation, static_cast<int>(r.occlusion), r.alpha,
      rect.x1, rect.y1, rect.x2, rect.y2,
      b.dims().h, b.dims().w, b.dims().l,
      b.center().x(), b.center().y(), b.center().z(),
      o.yaw(), o.pitch(), o.roll());
    if (r.score) {
      fmt::format_to(std::back_inserter(out), " {:.6g}", *r.score);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

void validate(const AnnotationRecord & record)
{
  if (!(record.truncation >= 0.0 && record.truncation <= 1.0)) {
    throw ValidationError("truncation must be in [0, 1]");
  }
  const int occlusion = static_cast<int>(record.occlusion);
  if (occlusion < 0 || occlusion > 3) {
    throw ValidationError("occlusion must be 0, 1, 2 or 3");
  }
  if (record.score && !(*record.score >= 0.0 && *record.score <= 1.0)) {
    throw ValidationError("score must be in [0, 1]");
  }
}

LabelFormat label_format_from_string(std::string_view name)
{
  if (name == "kitti" || name == "kitti_ext") {
    return LabelFormat::kKittiExt;
  }
  if (name == "manifest" || name == "manifest_json" || name == "json") {
    return LabelFormat::kManifestJson;
  }
  throw ValidationError("unknown label format \"" + std::string(name) + "\"");
}

std::vector<AnnotationRecord> parse_labels(
  std::string_view text, LabelFormat format, std::string_view frame_id)
{
  if (format == LabelFormat::kKittiExt) {
    return parse_kitti(text, frame_id);
  }
  auto records = detail::parse_json_labels(text);
  if (!frame_id.empty()) {
    for (auto & r : records) {
      if (r.frame_id.empty()) {
        r.frame_id = std::string(frame_id);
      }
    }
  }
  return records;
}

std::string write_labels(std::span<const AnnotationRecord> records, LabelFormat format)
{
  if (format == LabelFormat::kKittiExt) {
    return write_kitti(records);
  }
  return detail::write_json_labels(records);
}

}  // namespace roadside3d
