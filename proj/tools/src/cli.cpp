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

#include "roadside3d_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "roadside3d/camera.hpp"
#include "roadside3d/datasets.hpp"
#include "roadside3d/errors.hpp"
#include "roadside3d/eval.hpp"
#include "roadside3d/formats.hpp"
#include "roadside3d/parallel.hpp"
#include "roadside3d/synth.hpp"

namespace roadside3d::cli
{

namespace fs = std::filesystem;

namespace
{

struct GlobalOptions
{
  std::size_t jobs = 0;
  bool verbose = false;
  std::uint64_t seed = 0;
};

class Logger
{
public:
  Logger(std::ostream & err, bool verbose)
  : err_(err), verbose_(verbose) {}

  template<typename ... Args>
  void info(fmt::format_string<Args...> f, Args && ... args) const
  {
    if (verbose_) {
      err_ << "[roadside3d] " << fmt::format(f, std::forward<Args>(args)...) << '\n';
    }
  }

private:
  std::ostream & err_;
  bool verbose_;
};

std::size_t effective_jobs(std::size_t jobs)
{
  if (jobs > 0) {
    return jobs;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string read_text(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError("error while reading " + path.string());
  }
  return ss.str();
}

void write_text(const fs::path & path, std::string_view content)
{
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("error while writing " + path.string());
  }
}

/// Writes to `path`, or to `out` when the path is empty.
void emit(const std::string & path, std::string_view content, std::ostream & out)
{
  if (path.empty()) {
    out << content;
  } else {
    write_text(path, content);
  }
}

std::string extension_for(LabelFormat format)
{
  return format == LabelFormat::kKittiExt ? ".txt" : ".json";
}

LabelFormat format_from_extension(const fs::path & path)
{
  const auto ext = path.extension().string();
  if (ext == ".txt") {
    return LabelFormat::kKittiExt;
  }
  if (ext == ".json") {
    return LabelFormat::kManifestJson;
  }
  throw ValidationError("cannot infer label format of " + path.string() + "; pass --from");
}

/// Label files of one format in a directory, sorted by name.
std::vector<fs::path> label_files(const fs::path & dir, LabelFormat format)
{
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == extension_for(format)) {
      files.push_back(entry.path());
    }
  }
  if (ec) {
    throw IoError("cannot list " + dir.string() + ": " + ec.message());
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Reads and parses every file on a worker pool; order follows `files`.
std::vector<std::vector<AnnotationRecord>> parse_label_files(
  const std::vector<fs::path> & files, LabelFormat format, std::size_t jobs)
{
  std::vector<std::vector<AnnotationRecord>> out(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
      try {
        out[i] = parse_labels(read_text(files[i]), format, files[i].stem().string());
      } catch (const IoError &) {
        throw;
      } catch (const Error & e) {
        throw ValidationError(files[i].string() + ": " + e.what());
      }
    });
  return out;
}

// ---------------------------------------------------------------- convert --

struct ConvertOptions
{
  std::string input;
  std::string output;
  std::string from;
  std::string to;
  std::string class_map;
  std::string frame_id;
};

int run_convert(const ConvertOptions & o, const GlobalOptions & g, const Logger & log)
{
  const LabelFormat to = label_format_from_string(o.to);
  std::optional<ClassMapping> mapping;
  if (!o.class_map.empty()) {
    mapping = parse_class_mapping(read_text(o.class_map));
  }

  auto convert = [&](const std::vector<AnnotationRecord> & records, const fs::path & dest) {
      std::vector<AnnotationRecord> kept = records;
      if (mapping) {
        auto mapped = apply_class_mapping(records, *mapping);
        if (mapped.dropped > 0) {
          log.info("{}: dropped {} record(s) with unmapped classes", dest.string(), mapped.dropped);
        }
        kept = std::move(mapped.records);
      }
      write_text(dest, write_labels(kept, to));
    };

  std::error_code ec;
  if (fs::is_directory(o.input, ec)) {
    const LabelFormat from = o.from.empty() ?
      LabelFormat::kKittiExt : label_format_from_string(o.from);
    const auto files = label_files(o.input, from);
    const auto parsed = parse_label_files(files, from, effective_jobs(g.jobs));
    for (std::size_t i = 0; i < files.size(); ++i) {
      convert(parsed[i], fs::path(o.output) / (files[i].stem().string() + extension_for(to)));
    }
    log.info("converted {} file(s) into {}", files.size(), o.output);
    return kExitOk;
  }

  const LabelFormat from = o.from.empty() ?
    format_from_extension(o.input) : label_format_from_string(o.from);
  const std::string frame_id = o.frame_id.empty() ? fs::path(o.input).stem().string() : o.frame_id;
  convert(parse_labels(read_text(o.input), from, frame_id), o.output);
  log.info("converted {} -> {}", o.input, o.output);
  return kExitOk;
}

// -------------------------------------------------------------- transform --

struct TransformOptions
{
  std::string calib;
  std::string from;
  std::string to;
  std::string labels;
  std::string output;
  std::string format = "kitti_ext";
  std::string camera_frame = "camera";
  bool zup = false;
};

int run_transform(const TransformOptions & o, const GlobalOptions & g, const Logger & log)
{
  const Calibration calib = parse_calibration(read_text(o.calib));
  const RigidTransform t = calib.find(o.from, o.to);
  const LabelFormat format = label_format_from_string(o.format);
  const bool to_camera = o.to == o.camera_frame;

  auto move_record = [&](AnnotationRecord r) {
      const Box3D & b = r.box3d;
      const Box3D source = o.zup ?
        box_from_zup_heading(b.center(), b.dims().l, b.dims().w, b.dims().h, b.orientation().yaw()) :
        b;
      r.box3d = transform_box(t, source, o.from);
      r.box2d.reset();
      r.alpha = -10.0;
      if (to_camera) {
        const ProjectedBox pb = project_box(calib.intrinsics, t, source);
        if (pb.visible) {
          r.box2d = pb.rect;
        }
        r.alpha = normalize_angle(
          r.box3d.orientation().yaw() - std::atan2(r.box3d.center().x(), r.box3d.center().z()));
      }
      return r;
    };

  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  std::error_code ec;
  if (fs::is_directory(o.labels, ec)) {
    inputs = label_files(o.labels, format);
    for (const auto & f : inputs) {
      outputs.push_back(fs::path(o.output) / f.filename());
    }
  } else {
    inputs.push_back(o.labels);
    outputs.push_back(o.output);
  }

  const auto parsed = parse_label_files(inputs, format, effective_jobs(g.jobs));
  std::size_t boxes = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::vector<AnnotationRecord> moved;
    moved.reserve(parsed[i].size());
    for (const auto & r : parsed[i]) {
      moved.push_back(move_record(r));
    }
    boxes += moved.size();
    write_text(outputs[i], write_labels(moved, format));
  }
  log.info("moved {} box(es) in {} file(s) from \"{}\" to \"{}\"", boxes, inputs.size(), o.from, o.to);
  return kExitOk;
}

// ------------------------------------------------------------------ split --

struct SplitOptions
{
  std::string manifest;
  double fraction = 0.6;
  bool stratify = false;
  std::string output;
  std::string train_manifest;
  std::string test_manifest;
};

int run_split(
  const SplitOptions & o, const GlobalOptions & g, const Logger & log, std::ostream & out)
{
  const DatasetManifest m = parse_manifest(read_text(o.manifest));
  const SplitSpec split = make_split(m, o.fraction, g.seed, o.stratify);
  emit(o.output, write_split(split), out);
  if (!o.train_manifest.empty()) {
    write_text(o.train_manifest, write_manifest(select_frames(m, split, SplitSide::kTrain)));
  }
  if (!o.test_manifest.empty()) {
    write_text(o.test_manifest, write_manifest(select_frames(m, split, SplitSide::kTest)));
  }
  log.info("split {} frame(s): {} train / {} test (seed {})", split.assignment.size(),
    split.count(SplitSide::kTrain), split.count(SplitSide::kTest), g.seed);
  return kExitOk;
}

// ------------------------------------------------------------------- eval --

struct EvalOptions
{
  std::string gt;
  std::string pred;
  double iou = 0.5;
  std::vector<std::string> class_iou;
  std::string interpolation = "r40";
  std::string output;
  std::string architecture = "-";
  std::string plan;
  bool breakdown = false;
};

std::string render_class_table(const EvalReport & report)
{
  std::string s = "| Class | Easy | Moderate | Hard | GT (Moderate) |\n|---|---|---|---|---|\n";
  for (const auto & [name, cells] : report.cells) {
    s += fmt::format("| {} |", name);
    for (const auto & c : cells) {
      s += c.ap ? fmt::format(" {:.2f} |", *c.ap) : std::string(" - |");
    }
    s += fmt::format(" {} |\n", cells[1].gt);
  }
  return s;
}

int run_eval(
  const EvalOptions & o, const GlobalOptions & g, const Logger & log, std::ostream & out)
{
  const DatasetManifest gt = parse_manifest(read_text(o.gt));
  EvalConfig config;
  config.iou_threshold = o.iou;
  config.interpolation = interpolation_from_string(o.interpolation);
  config.jobs = effective_jobs(g.jobs);
  for (const auto & entry : o.class_iou) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("--class-iou expects NAME=VALUE, got \"" + entry + "\"");
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(entry.substr(eq + 1), &used);
      if (used != entry.size() - eq - 1) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception &) {
      throw ValidationError("--class-iou value is not a number in \"" + entry + "\"");
    }
    if (!(v > 0.0 && v < 1.0)) {
      throw ValidationError("--class-iou threshold must be in (0, 1)");
    }
    config.per_class_iou[entry.substr(0, eq)] = v;
  }

  const auto files = label_files(o.pred, LabelFormat::kKittiExt);
  const auto parsed = parse_label_files(files, LabelFormat::kKittiExt, config.jobs);
  std::vector<AnnotationRecord> dets;
  for (const auto & p : parsed) {
    dets.insert(dets.end(), p.begin(), p.end());
  }
  log.info("{} frame(s), {} detection file(s), {} detection(s)", gt.frames.size(), files.size(),
    dets.size());

  const EvalReport report = evaluate(gt, dets, config);

  ExperimentPlan plan;
  plan.eval_set = gt.name;
  if (!o.plan.empty()) {
    plan = parse_plan(read_text(o.plan));
  }
  const ReportRow row = make_report_row(o.architecture, plan, report);
  out << render_report(std::span<const ReportRow>(&row, 1)) << '\n' << render_class_table(report);

  nlohmann::json j = report_to_json(report);
  if (o.breakdown) {
    const auto pairs = collect_matched_pairs(gt, dets, config.iou_threshold);
    if (pairs.empty()) {
      log.info("no matched pairs; error breakdown omitted");
    } else {
      const ErrorBreakdown b = error_breakdown(pairs);
      j["breakdown"] = breakdown_to_json(b);
      out << fmt::format(
        "\nError breakdown over {} pair(s): cls {:.4f}, pos {:.4f} m, dim {:.4f} m, ori {:.4f} rad\n",
        b.pairs, b.cls_error, b.pos_error, b.dim_error, b.ori_error);
    }
  }
  if (!o.output.empty()) {
    write_text(o.output, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- compare --

struct CompareOptions
{
  std::string baseline;
  std::string treatment;
  std::vector<double> baseline_values;
  std::vector<double> treatment_values;
  std::string output;
};

EvalReport load_report(
  const std::string & path, const std::vector<double> & values, std::string_view which)
{
  if (!path.empty() && !values.empty()) {
    throw ValidationError(fmt::format("give either --{} or --{}-values, not both", which, which));
  }
  if (!values.empty()) {
    if (values.size() != 3) {
      throw ValidationError(fmt::format("--{}-values needs Easy,Moderate,Hard", which));
    }
    return EvalReport::from_map_values({values[0], values[1], values[2]});
  }
  if (path.empty()) {
    throw ValidationError(fmt::format("missing --{} report", which));
  }
  return report_from_json(nlohmann::json::parse(read_text(path)));
}

int run_compare(const CompareOptions & o, std::ostream & out)
{
  const EvalReport base = load_report(o.baseline, o.baseline_values, "baseline");
  const EvalReport treat = load_report(o.treatment, o.treatment_values, "treatment");
  const ImprovementTable table = compare_reports(base, treat);
  out << render_improvements(table);
  if (!o.output.empty()) {
    write_text(o.output, improvements_to_json(table).dump(2) + "\n");
  }
  return kExitOk;
}

// ------------------------------------------------------------------ synth --

struct SynthOptions
{
  std::string output;
  std::size_t frames = 10;
  std::string config;
  std::string name = "synthetic";
  NoiseSpec noise;
  std::optional<int> min_objects;
  std::optional<int> max_objects;
  std::optional<double> camera_height;
};

SceneConfig scene_config_from_json(const nlohmann::json & j)
{
  if (!j.is_object()) {
    throw SchemaError("scene config must be a JSON object");
  }
  SceneConfig c;
  for (const auto & [key, value] : j.items()) {
    if (key == "image_width") {
      c.image_width = value.get<int>();
    } else if (key == "image_height") {
      c.image_height = value.get<int>();
    } else if (key == "horizontal_fov_deg") {
      c.horizontal_fov_deg = value.get<double>();
    } else if (key == "max_range") {
      c.max_range = value.get<double>();
    } else if (key == "min_range") {
      c.min_range = value.get<double>();
    } else if (key == "pitch_min_deg") {
      c.pitch_min_deg = value.get<double>();
    } else if (key == "pitch_max_deg") {
      c.pitch_max_deg = value.get<double>();
    } else if (key == "camera_height") {
      c.camera_height = value.get<double>();
    } else if (key == "min_objects") {
      c.min_objects = value.get<int>();
    } else if (key == "max_objects") {
      c.max_objects = value.get<int>();
    } else if (key == "attempts_per_object") {
      c.attempts_per_object = value.get<int>();
    } else if (key == "weathers") {
      c.weathers = value.get<std::vector<std::string>>();
    } else if (key == "times_of_day") {
      c.times_of_day = value.get<std::vector<std::string>>();
    } else if (key == "classes") {
      c.classes.clear();
      for (const auto & t : value) {
        const auto dims = t.at("dims").get<std::vector<double>>();
        if (dims.size() != 3) {
          throw SchemaError("class dims must be [h, w, l]");
        }
        c.classes.push_back(ClassTemplate{
            t.at("name").get<std::string>(), t.value("weight", 1.0),
            Dimensions{dims[0], dims[1], dims[2]}, t.value("jitter", 0.1)});
      }
    } else {
      throw SchemaError("unknown scene config key \"" + key + "\"");
    }
  }
  return c;
}

int run_synth(const SynthOptions & o, const GlobalOptions & g, const Logger & log)
{
  SceneConfig config;
  if (!o.config.empty()) {
    try {
      config = scene_config_from_json(nlohmann::json::parse(read_text(o.config)));
    } catch (const nlohmann::json::exception & e) {
      throw SchemaError(o.config + ": " + e.what());
    }
  }
  if (o.min_objects) {
    config.min_objects = *o.min_objects;
  }
  if (o.max_objects) {
    config.max_objects = *o.max_objects;
  }
  if (o.camera_height) {
    config.camera_height = *o.camera_height;
  }

  const SyntheticDataset ds =
    generate_dataset(config, o.noise, o.frames, g.seed, o.name, effective_jobs(g.jobs));

  const fs::path root(o.output);
  std::map<std::string, std::vector<AnnotationRecord>> per_frame;
  for (const auto & f : ds.manifest.frames) {
    per_frame[f.frame_id];
  }
  for (const auto & d : ds.detections) {
    per_frame[d.frame_id].push_back(d);
  }
  write_text(root / "manifest.json", write_manifest(ds.manifest));
  for (std::size_t i = 0; i < ds.manifest.frames.size(); ++i) {
    const FrameRecord & f = ds.manifest.frames[i];
    write_text(root / f.calibration_ref, write_calibration(ds.calibrations[i]));
    write_text(root / "labels" / (f.frame_id + ".txt"),
      write_labels(f.annotations, LabelFormat::kKittiExt));
    write_text(root / "detections" / (f.frame_id + ".txt"),
      write_labels(per_frame[f.frame_id], LabelFormat::kKittiExt));
  }
  std::size_t boxes = 0;
  for (const auto & f : ds.manifest.frames) {
    boxes += f.annotations.size();
  }
  log.info("wrote {} frame(s), {} box(es), {} detection(s) to {}", ds.manifest.frames.size(),
    boxes, ds.detections.size(), o.output);
  return kExitOk;
}

// ------------------------------------------------------------------ stats --

struct StatsOptions
{
  std::vector<std::string> manifests;
  bool json = false;
};

int run_stats(const StatsOptions & o, std::ostream & out)
{
  std::vector<std::pair<std::string, DatasetStats>> rows;
  for (const auto & path : o.manifests) {
    const DatasetManifest m = parse_manifest(read_text(path));
    rows.emplace_back(m.name, dataset_stats(m));
  }
  if (o.json) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto & [name, stats] : rows) {
      j[name] = stats_to_json(stats);
    }
    out << j.dump(2) << '\n';
  } else {
    out << render_stats_table(rows);
  }
  return kExitOk;
}

template<typename T>
CLI::Option * add_range_option(
  CLI::App * app, const std::string & name, T & value, const std::string & help, T lo, T hi)
{
  return app->add_option(name, value, help)->check(CLI::Range(lo, hi))->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Roadside 3D detection toolkit: geometry, formats, splits, evaluation, synthesis",
    "roadside3d"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--jobs", g.jobs, "Worker threads (0 = hardware concurrency)")
  ->capture_default_str();
  app.add_flag("--verbose", g.verbose, "Log progress to stderr");
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();

  ConvertOptions convert;
  auto * c = app.add_subcommand("convert", "Convert label files between formats");
  c->add_option("--in", convert.input, "Label file or directory")->required();
  c->add_option("--out", convert.output, "Output file or directory")->required();
  c->add_option("--from", convert.from, "Input format (kitti_ext | manifest_json)");
  c->add_option("--to", convert.to, "Output format (kitti_ext | manifest_json)")->required();
  c->add_option("--class-map", convert.class_map, "JSON class mapping {source: target}");
  c->add_option("--frame-id", convert.frame_id, "Frame id for single kitti files");

  TransformOptions transform;
  auto * t = app.add_subcommand("transform", "Move labels between sensor frames");
  t->add_option("--calib", transform.calib, "Calibration JSON")->required();
  t->add_option("--from", transform.from, "Source frame")->required();
  t->add_option("--to", transform.to, "Target frame")->required();
  t->add_option("--labels", transform.labels, "Label file or directory")->required();
  t->add_option("--out", transform.output, "Output file or directory")->required();
  t->add_option("--format", transform.format, "Label format")->capture_default_str();
  t->add_option("--camera-frame", transform.camera_frame,
    "Frame whose labels get 2D boxes from the intrinsics")->capture_default_str();
  t->add_flag("--zup", transform.zup,
    "Input boxes are z-up LiDAR boxes: yaw is the heading about +z");

  SplitOptions split;
  auto * s = app.add_subcommand("split", "Deterministic train/test split of a manifest");
  s->add_option("--manifest", split.manifest, "Manifest JSON")->required();
  add_range_option(s, "--fraction", split.fraction, "Train fraction", 0.0, 1.0);
  s->add_flag("--stratify", split.stratify, "Stratify by calibration_ref");
  s->add_option("--out", split.output, "Split file (default: stdout)");
  s->add_option("--train-manifest", split.train_manifest, "Write the train subset here");
  s->add_option("--test-manifest", split.test_manifest, "Write the test subset here");

  EvalOptions eval;
  auto * e = app.add_subcommand("eval", "Evaluate detections against a manifest");
  e->add_option("--gt", eval.gt, "Ground-truth manifest JSON")->required();
  e->add_option("--pred", eval.pred, "Directory of <frame_id>.txt detection files")->required();
  e->add_option("--iou", eval.iou, "IoU threshold")->check(CLI::Range(0.0, 1.0))
  ->capture_default_str();
  e->add_option("--class-iou", eval.class_iou, "Per-class threshold NAME=VALUE (repeatable)");
  e->add_option("--interp", eval.interpolation, "Recall sampling (r40 | r11)")
  ->capture_default_str();
  e->add_option("--out", eval.output, "JSON report path");
  e->add_option("--arch", eval.architecture, "Architecture column of the table")
  ->capture_default_str();
  e->add_option("--plan", eval.plan, "Experiment plan JSON for the table columns");
  e->add_flag("--breakdown", eval.breakdown, "Add the class/position/size/orientation breakdown");

  CompareOptions compare;
  auto * cm = app.add_subcommand("compare", "Percent improvements between two reports");
  cm->add_option("--baseline", compare.baseline, "Baseline JSON report");
  cm->add_option("--treatment", compare.treatment, "Treatment JSON report");
  cm->add_option("--baseline-values", compare.baseline_values, "Baseline mAP E,M,H")
  ->delimiter(',');
  cm->add_option("--treatment-values", compare.treatment_values, "Treatment mAP E,M,H")
  ->delimiter(',');
  cm->add_option("--out", compare.output, "JSON output path");

  SynthOptions synth;
  auto * sy = app.add_subcommand("synth", "Generate a synthetic roadside corpus");
  sy->add_option("--out", synth.output, "Output directory")->required();
  sy->add_option("--frames", synth.frames, "Number of frames")->capture_default_str();
  sy->add_option("--config", synth.config, "Scene config JSON");
  sy->add_option("--name", synth.name, "Dataset name")->capture_default_str();
  sy->add_option("--min-objects", synth.min_objects, "Fewest objects per frame");
  sy->add_option("--max-objects", synth.max_objects, "Most objects per frame");
  sy->add_option("--camera-height", synth.camera_height, "Mounting height (m)");
  add_range_option(sy, "--drop-rate", synth.noise.drop_rate, "Missed-detection rate", 0.0, 1.0);
  add_range_option(sy, "--fp-rate", synth.noise.fp_rate, "Spurious boxes per frame", 0.0, 1e6);
  add_range_option(sy, "--center-sigma", synth.noise.center_sigma, "Centre noise (m)", 0.0, 1e6);
  add_range_option(sy, "--dim-sigma", synth.noise.dim_sigma, "Size noise (m)", 0.0, 1e6);
  add_range_option(sy, "--angle-sigma", synth.noise.angle_sigma, "Angle noise (rad)", 0.0, 10.0);

  StatsOptions stats;
  auto * st = app.add_subcommand("stats", "Frame/box counts per manifest");
  st->add_option("--manifest", stats.manifests, "Manifest JSON (repeatable)")->required();
  st->add_flag("--json", stats.json, "Print JSON instead of a table");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError & ex) {
    err << "error: " << ex.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  const Logger log(err, g.verbose);
  try {
    if (*c) {
      return run_convert(convert, g, log);
    }
    if (*t) {
      return run_transform(transform, g, log);
    }
    if (*s) {
      return run_split(split, g, log, out);
    }
    if (*e) {
      return run_eval(eval, g, log, out);
    }
    if (*cm) {
      return run_compare(compare, out);
    }
    if (*sy) {
      return run_synth(synth, g, log);
    }
    if (*st) {
      return run_stats(stats, out);
    }
  } catch (const Error & ex) {
    err << "error: " << ex.what() << '\n';
    return ex.kind() == ErrorKind::kIo ? kExitIo : kExitValidation;
  } catch (const nlohmann::json::exception & ex) {
    err << "error: malformed JSON: " << ex.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error & ex) {
    err << "error: " << ex.what() << '\n';
    return kExitIo;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace roadside3d::cli
