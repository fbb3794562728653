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
#include <string>
#include <vector>

#include <fmt/format.h>

#include "roadside3d/errors.hpp"
#include "roadside3d/eval.hpp"

namespace roadside3d
{

using nlohmann::json;

namespace
{

constexpr std::array<const char *, 3> kLevelKeys{"easy", "moderate", "hard"};

json optional_number(const std::optional<double> & v)
{
  return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json & j, const char * key)
{
  if (!j.contains(key) || j[key].is_null()) {
    return std::nullopt;
  }
  if (!j[key].is_number()) {
    throw SchemaError(std::string("\"") + key + "\" must be a number or null");
  }
  return j[key].get<double>();
}

std::string join(const std::vector<std::string> & items, std::string_view sep)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) {
      out += sep;
    }
    out += items[i];
  }
  return out;
}

std::string with_thousands(std::string digits)
{
  for (int pos = static_cast<int>(digits.size()) - 3; pos > 0; pos -= 3) {
    digits.insert(static_cast<std::size_t>(pos), ",");
  }
  return digits;
}

std::string render_table(const std::vector<std::vector<std::string>> & rows, std::size_t left_cols)
{
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto & row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c > 0) {
        out += " | ";
      }
      out += c < left_cols ? fmt::format("{:<{}}", rows[r][c], width[c]) :
        fmt::format("{:>{}}", rows[r][c], width[c]);
    }
    out += '\n';
    if (r == 0) {
      for (std::size_t c = 0; c < width.size(); ++c) {
        if (c > 0) {
          out += "-+-";
        }
        out += std::string(width[c], '-');
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace

EvalReport EvalReport::from_map_values(const std::array<double, 3> & values)
{
  EvalReport r;
  for (std::size_t i = 0; i < 3; ++i) {
    r.map[i] = values[i];
  }
  return r;
}

nlohmann::json report_to_json(const EvalReport & report)
{
  json classes = json::object();
  for (const auto & [cls, cells] : report.cells) {
    json per_level = json::object();
    for (std::size_t i = 0; i < 3; ++i) {
      const EvalCell & c = cells[i];
      per_level[kLevelKeys[i]] = {
        {"ap", optional_number(c.ap)},
        {"gt", c.gt},
        {"tp", c.tp},
        {"fp", c.fp},
        {"fn", c.fn},
        {"ignored", c.ignored},
      };
    }
    classes[cls] = std::move(per_level);
  }
  json map = json::object();
  for (std::size_t i = 0; i < 3; ++i) {
    map[kLevelKeys[i]] = optional_number(report.map[i]);
  }
  return {
    {"iou_threshold", report.iou_threshold},
    {"interpolation", std::string(to_string(report.interpolation))},
    {"mAP", std::move(map)},
    {"classes", std::move(classes)},
  };
}

EvalReport report_from_json(const nlohmann::json & j)
{
  if (!j.is_object() || !j.contains("mAP") || !j["mAP"].is_object()) {
    throw SchemaError("report needs an \"mAP\" object");
  }
  EvalReport r;
  if (j.contains("iou_threshold")) {
    if (!j["iou_threshold"].is_number()) {
      throw SchemaError("report.iou_threshold must be a number");
    }
    r.iou_threshold = j["iou_threshold"].get<double>();
  }
  if (j.contains("interpolation")) {
    if (!j["interpolation"].is_string()) {
      throw SchemaError("report.interpolation must be a string");
    }
    r.interpolation = interpolation_from_string(j["interpolation"].get<std::string>());
  }
  for (std::size_t i = 0; i < 3; ++i) {
    r.map[i] = read_optional(j["mAP"], kLevelKeys[i]);
  }
  if (j.contains("classes")) {
    if (!j["classes"].is_object()) {
      throw SchemaError("report.classes must be an object");
    }
    for (const auto & [cls, per_level] : j["classes"].items()) {
      auto & cells = r.cells[cls];
      for (std::size_t i = 0; i < 3; ++i) {
        if (!per_level.contains(kLevelKeys[i])) {
          throw SchemaError("class \"" + cls + "\" lacks level \"" + kLevelKeys[i] + "\"");
        }
        const json & c = per_level[kLevelKeys[i]];
        EvalCell & cell = cells[i];
        cell.ap = read_optional(c, "ap");
        cell.gt = c.value("gt", std::size_t{0});
        cell.tp = c.value("tp", std::size_t{0});
        cell.fp = c.value("fp", std::size_t{0});
        cell.fn = c.value("fn", std::size_t{0});
        cell.ignored = c.value("ignored", std::size_t{0});
      }
    }
  }
  return r;
}

nlohmann::json breakdown_to_json(const ErrorBreakdown & b)
{
  return {
    {"pairs", b.pairs},
    {"cls_error", b.cls_error},
    {"pos_error", b.pos_error},
    {"dim_error", b.dim_error},
    {"ori_error", b.ori_error},
  };
}

std::optional<double> percent_change(std::optional<double> baseline, std::optional<double> treatment)
{
  if (!baseline || !treatment || *baseline == 0.0) {
    return std::nullopt;
  }
  const double change = (*treatment - *baseline) / *baseline * 100.0;
  return std::round(change * 10.0) / 10.0;
}

ImprovementTable compare_reports(const EvalReport & baseline, const EvalReport & treatment)
{
  std::vector<std::string> a;
  std::vector<std::string> b;
  for (const auto & [cls, cells] : baseline.cells) {
    a.push_back(cls);
  }
  for (const auto & [cls, cells] : treatment.cells) {
    b.push_back(cls);
  }
  if (a != b) {
    throw ValidationError("reports cover different classes");
  }
  ImprovementTable table;
  LevelValues map_row;
  for (std::size_t i = 0; i < 3; ++i) {
    map_row[i] = percent_change(baseline.map[i], treatment.map[i]);
  }
  table.rows.emplace_back("mAP", map_row);
  for (const auto & [cls, cells] : baseline.cells) {
    const auto & other = treatment.cells.at(cls);
    LevelValues row;
    for (std::size_t i = 0; i < 3; ++i) {
      row[i] = percent_change(cells[i].ap, other[i].ap);
    }
    table.rows.emplace_back(cls, row);
  }
  return table;
}

std::string format_percent(std::optional<double> value, int decimals)
{
  if (!value) {
    return "undefined";
  }
  const double v = *value;
  std::string digits = fmt::format("{:.{}f}", std::abs(v), decimals);
  const auto dot = digits.find('.');
  const std::string whole = with_thousands(digits.substr(0, dot));
  const std::string frac = dot == std::string::npos ? "" : digits.substr(dot);
  const bool zero = std::stod(digits) == 0.0;
  const char * sign = zero ? "" : (v > 0.0 ? "+" : "-");
  return sign + whole + frac + "%";
}

std::string render_improvements(const ImprovementTable & table)
{
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Class", "Easy", "Moderate", "Hard"});
  for (const auto & [name, values] : table.rows) {
    rows.push_back({name, format_percent(values[0]), format_percent(values[1]),
        format_percent(values[2])});
  }
  return render_table(rows, 1);
}

nlohmann::json improvements_to_json(const ImprovementTable & table)
{
  json out = json::object();
  for (const auto & [name, values] : table.rows) {
    json row = json::object();
    for (std::size_t i = 0; i < 3; ++i) {
      row[kLevelKeys[i]] = optional_number(values[i]);
    }
    out[name] = std::move(row);
  }
  return out;
}

ReportRow make_report_row(
  std::string architecture, const ExperimentPlan & plan, const EvalReport & report)
{
  return ReportRow{
    std::move(architecture),
    plan.pretrain.value_or("-"),
    plan.finetune_chain.empty() ? "-" : join(plan.finetune_chain, " -> "),
    plan.eval_set,
    report.map};
}

std::string render_report(std::span<const ReportRow> rows)
{
  std::vector<std::vector<std::string>> table;
  table.push_back({"Architecture", "Pre-Train Set", "Fine-Tuning Set", "Evaluation Set", "Easy",
      "Moderate", "Hard"});
  for (const auto & r : rows) {
    std::vector<std::string> row{r.architecture, r.pretrain_set, r.finetune_set, r.eval_set};
    for (const auto & v : r.values) {
      row.push_back(v ? fmt::format("{:.2f}", *v) : "-");
    }
    table.push_back(std::move(row));
  }
  return render_table(table, 4);
}

}  // namespace roadside3d
