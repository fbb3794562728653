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

// Acceptance runner: prints one PASS/FAIL line per criterion.
//
//   roadside3d_acceptance [N ...]    run the listed criteria (default 1-9)
//
// Exit status is 0 only when every requested criterion passes. Tolerances
// are fixed below and are not configurable.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "roadside3d/camera.hpp"
#include "roadside3d/datasets.hpp"
#include "roadside3d/eval.hpp"
#include "roadside3d/formats.hpp"
#include "roadside3d/geometry.hpp"
#include "roadside3d/synth.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace
{

using namespace roadside3d;  // NOLINT(build/namespaces)

constexpr double kPi = std::numbers::pi;

// Criterion 1
constexpr int kC1Pairs = 1000;
constexpr std::size_t kC1Grid = 1000;  // 10^6 sampled chords per pair
constexpr double kC1Tolerance = 0.01;
constexpr double kC1TimeLimitSeconds = 300.0;
// Criterion 2
constexpr double kC2VolumeTolerance = 1e-4;
constexpr double kC2IouTolerance = 1e-3;
// Criterion 3
constexpr int kC3Pairs = 1000;
constexpr double kC3Tolerance = 1e-7;
// Criterion 4
constexpr std::uint64_t kC4Seeds = 200;
// Criterion 5
constexpr std::size_t kC5MinGt = 1000;
constexpr double kC5RecallTolerance = 0.05;
// Criterion 7
constexpr double kC7RoundTripTolerance = 1e-6;
constexpr double kC7HeightTolerance = 0.5;
// Criterion 8
constexpr int kC8Records = 1000;

struct Outcome
{
  bool pass;
  std::string detail;
};

Outcome c1_iou_vs_sampling()
{
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20260101);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < kC1Pairs; ++i) {
    const auto [a, b] = testing::random_overlapping_pair(rng);
    const double v = oracle::chord_intersection_volume(a, b, kC1Grid, 7000 + i);
    const double sampled = v / (a.volume() + b.volume() - v);
    const double err = std::abs(iou3d(a, b) - sampled);
    worst = std::max(worst, err);
    failures += err > kC1Tolerance ? 1 : 0;
  }
  const double seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {failures == 0 && seconds < kC1TimeLimitSeconds,
    fmt::format("{} pairs, worst |dIoU| {:.5f} (tol {}), {} over tol, {:.1f} s (limit {:.0f} s)",
      kC1Pairs, worst, kC1Tolerance, failures, seconds, kC1TimeLimitSeconds)};
}

Outcome c2_rotated_cube()
{
  const Box3D a(Vec3::Zero(), Dimensions{1, 1, 1}, EulerOrientation());
  const Box3D b(Vec3::Zero(), Dimensions{1, 1, 1}, EulerOrientation(kPi / 4.0, 0, 0));
  const double expected_v = 2.0 * (std::sqrt(2.0) - 1.0);
  const double v = intersection_volume(a, b);
  const double iou = iou3d(a, b);
  const bool pass =
    std::abs(v - expected_v) <= kC2VolumeTolerance && std::abs(iou - 0.7071) <= kC2IouTolerance;
  return {pass, fmt::format("intersection {:.6f} vs {:.6f}, IoU {:.6f} vs 0.7071", v,
      expected_v, iou)};
}

Outcome c3_rigid_invariance()
{
  Rng rng(33);
  const Calibration calib = parse_calibration(testing::lidar_camera_calibration_json());
  const RigidTransform to_camera = calib.find("lidar", "camera");
  double worst_direct = 0.0;
  double worst_calib = 0.0;
  for (int i = 0; i < kC3Pairs; ++i) {
    const auto [a, b] = testing::random_overlapping_pair(rng);
    const double base = iou3d(a, b);
    const RotationMatrix r = testing::random_rotation(rng);
    const Vec3 t(rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-100, 100));
    worst_direct = std::max(worst_direct, std::abs(iou3d(move_box(r, t, a), move_box(r, t, b)) -
      base));
    worst_calib = std::max(worst_calib, std::abs(iou3d(transform_box(to_camera, a, "lidar"),
      transform_box(to_camera, b, "lidar")) - base));
  }
  return {worst_direct <= kC3Tolerance && worst_calib <= kC3Tolerance,
    fmt::format("{} pairs, worst |dIoU| direct {:.2e}, via LiDAR->camera {:.2e} (tol {:.0e})",
      kC3Pairs, worst_direct, worst_calib, kC3Tolerance)};
}

Outcome c4_evaluate_vs_brute_force()
{
  std::uint64_t mismatches = 0;
  std::size_t cells = 0;
  for (std::uint64_t seed = 0; seed < kC4Seeds; ++seed) {
    Rng rng(seed);
    const auto inst = testing::random_eval_instance(rng, 5, 20);
    EvalConfig cfg;
    cfg.iou_threshold = inst.iou_threshold;
    const EvalReport r = evaluate(inst.manifest, inst.detections, cfg);
    const auto bf = oracle::brute_force_evaluate(inst.manifest, inst.detections,
      inst.iou_threshold);
    bool same = r.map == bf.map;
    for (const auto & [cls, per_level] : bf.cells) {
      for (std::size_t li = 0; li < 3; ++li) {
        ++cells;
        same = same && r.cells.at(cls)[li].ap == per_level[li].ap;
      }
    }
    mismatches += same ? 0 : 1;
  }
  return {mismatches == 0, fmt::format("{} seeds, {} cells compared exactly, {} mismatching seeds",
      kC4Seeds, cells, mismatches)};
}

Outcome c5_synthetic_oracle()
{
  SceneConfig scene;
  scene.min_objects = 10;
  scene.max_objects = 20;

  auto all_aps = [](const EvalReport & r) {
      std::vector<std::string> out;
      for (const auto & [cls, cells] : r.cells) {
        for (const auto & c : cells) {
          if (c.ap) {
            out.push_back(fmt::format("{:.2f}", *c.ap));
          }
        }
      }
      for (const auto & m : r.map) {
        out.push_back(m ? fmt::format("{:.2f}", *m) : "none");
      }
      return out;
    };

  const auto perfect = generate_dataset(scene, NoiseSpec{}, 20, 5);
  bool perfect_ok = true;
  for (const auto & s : all_aps(evaluate(perfect.manifest, perfect.detections))) {
    perfect_ok = perfect_ok && s == "100.00";
  }

  NoiseSpec none;
  none.drop_rate = 1.0;
  const auto dropped = generate_dataset(scene, none, 20, 5);
  bool dropped_ok = dropped.detections.empty();
  for (const auto & s : all_aps(evaluate(dropped.manifest, dropped.detections))) {
    dropped_ok = dropped_ok && s == "0.00";
  }

  NoiseSpec half;
  half.drop_rate = 0.5;
  const auto ds = generate_dataset(scene, half, 100, 11);
  std::size_t gt = 0;
  for (const auto & f : ds.manifest.frames) {
    gt += f.annotations.size();
  }
  // Recall over every generated box: no height or truncation cut.
  EvalConfig pooled;
  pooled.difficulty.min_height = {0.0, 0.0, 0.0};
  pooled.difficulty.max_truncation = {1.0, 1.0, 1.0};
  const EvalReport r = evaluate(ds.manifest, ds.detections, pooled);
  std::size_t tp = 0;
  std::size_t counted = 0;
  for (const auto & [cls, cells] : r.cells) {
    tp += cells[2].tp;
    counted += cells[2].gt;
  }
  const double recall = counted ? static_cast<double>(tp) / static_cast<double>(counted) : 0.0;
  const bool recall_ok = counted >= kC5MinGt && counted == gt && std::abs(recall - 0.5) <= kC5RecallTolerance;
  return {perfect_ok && dropped_ok && recall_ok,
    fmt::format("zero noise all 100.00: {}; all dropped all 0.00: {}; drop 0.5 over {} GT "
      "({} counted) -> max recall {:.4f} (0.5 +/- {})", perfect_ok, dropped_ok, gt,
      counted, recall, kC5RecallTolerance)};
}

std::vector<std::vector<std::string>> table_cells(const std::string & text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto bar = line.find(" | ", start);
      std::string cell = line.substr(start, bar == std::string::npos ? bar : bar - start);
      const auto a = cell.find_first_not_of(' ');
      const auto b = cell.find_last_not_of(' ');
      cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
      if (bar == std::string::npos) {
        break;
      }
      start = bar + 3;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

Outcome c6_report_arithmetic()
{
  std::vector<std::string> problems;

  const auto single = compare_reports(EvalReport::from_map_values({0.26, 0.26, 0.26}),
    EvalReport::from_map_values({12.76, 12.76, 12.76}));
  for (const auto & v : single.rows[0].second) {
    if (format_percent(v, 0) != "+4,808%") {
      problems.push_back("0.26 -> 12.76 gave " + format_percent(v, 0));
    }
  }
  const auto dair = compare_reports(EvalReport::from_map_values({2.09, 2.62, 2.61}),
    EvalReport::from_map_values({6.60, 8.60, 8.65}));
  const std::array<const char *, 3> expected{"+215.8%", "+228.6%", "+231.4%"};
  std::string got_dair;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string got = format_percent(dair.rows[0].second[i]);
    got_dair += (i ? "/" : "") + got;
    if (got != expected[i]) {
      problems.push_back(fmt::format("level {}: expected {} got {}", i, expected[i], got));
    }
  }

  auto reg = DatasetRegistry::builtin();
  reg.add({"DAIR-V2X Train", ""});
  const std::string arch = "Cube R-CNN";
  struct Row
  {
    std::optional<std::string> pretrain;
    std::vector<std::string> chain;
    std::string eval;
    std::array<double, 3> values;
    std::vector<std::string> cells;
  };
  const std::vector<std::vector<Row>> tables{
    {
      {"TUMTraf-A9 Train", {}, "TUMTraf-A9 Test", {0.26, 0.26, 0.26},
        {arch, "TUMTraf-A9 Train", "-", "TUMTraf-A9 Test", "0.26", "0.26", "0.26"}},
      {"RoadSense3D Train", {"TUMTraf-A9 Train"}, "TUMTraf-A9 Test", {12.76, 12.76, 12.76},
        {arch, "RoadSense3D Train", "TUMTraf-A9 Train", "TUMTraf-A9 Test", "12.76", "12.76",
          "12.76"}},
    },
    {
      {"DAIR-V2X-I Train", {}, "DAIR-V2X-I Test", {2.09, 2.62, 2.61},
        {arch, "DAIR-V2X-I Train", "-", "DAIR-V2X-I Test", "2.09", "2.62", "2.61"}},
      {"RoadSense3D Train", {"DAIR-V2X-I Train"}, "DAIR-V2X-I Test", {6.60, 8.60, 8.65},
        {arch, "RoadSense3D Train", "DAIR-V2X-I Train", "DAIR-V2X-I Test", "6.60", "8.60",
          "8.65"}},
    },
    {
      {"TUMTraf-A9 Train", {}, "TUMTraf-A9 Test", {0.26, 0.26, 0.26},
        {arch, "TUMTraf-A9 Train", "-", "TUMTraf-A9 Test", "0.26", "0.26", "0.26"}},
      {"RoadSense3D Train", {"DAIR-V2X Train", "TUMTraf-A9 Train"}, "TUMTraf-A9 Test",
        {6.26, 6.26, 6.26},
        {arch, "RoadSense3D Train", "DAIR-V2X Train -> TUMTraf-A9 Train", "TUMTraf-A9 Test",
          "6.26", "6.26", "6.26"}},
    },
  };
  const std::vector<std::string> header{"Architecture", "Pre-Train Set", "Fine-Tuning Set",
    "Evaluation Set", "Easy", "Moderate", "Hard"};
  for (std::size_t t = 0; t < tables.size(); ++t) {
    std::vector<ReportRow> rows;
    for (const auto & r : tables[t]) {
      const auto plan = build_experiment_plan(reg, r.pretrain, r.chain, r.eval);
      rows.push_back(make_report_row(arch, plan, EvalReport::from_map_values(r.values)));
    }
    const auto cells = table_cells(render_report(rows));
    bool ok = cells.size() == tables[t].size() + 2 && cells[0] == header;
    for (std::size_t i = 0; ok && i < tables[t].size(); ++i) {
      ok = cells[i + 2] == tables[t][i].cells;
    }
    if (!ok) {
      problems.push_back(fmt::format("table {} rows differ", t + 1));
    }
  }

  std::string detail = fmt::format("0.26->12.76: {}; 2.09/2.62/2.61->6.60/8.60/8.65: {}; "
      "3 transfer tables rendered", format_percent(single.rows[0].second[0], 0), got_dair);
  for (const auto & p : problems) {
    detail += "; MISMATCH " + p;
  }
  return {problems.empty(), detail};
}

Outcome c7_projection()
{
  const Intrinsics k = testing::reference_intrinsics();
  const RigidTransform identity(RotationMatrix(), Vec3::Zero(), "object", "camera");
  bool principal_ok = true;
  for (double depth : {0.5, 1.0, 7.25, 50.0, 150.0}) {
    const ImagePoint ip = project_point(k, identity, Vec3(0, 0, depth));
    principal_ok = principal_ok && ip.u == k.cx() && ip.v == k.cy() && ip.w == depth;
  }

  Rng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const RigidTransform t(testing::random_rotation(rng),
      Vec3(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)), "world", "camera");
    Vec3 p;
    do {
      p = Vec3(rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-100, 100));
    } while (t.apply(p).z() <= 0.1);
    worst = std::max(worst, (unproject_point(k, t, project_point(k, t, p)) - p).norm());
  }

  // 2 m tall, 0.2 m deep slab centred 50 m ahead: near face at 49.9 m.
  const Box3D slab(Vec3(0, 0, 50), Dimensions{2.0, 1.0, 0.2}, EulerOrientation());
  const double height = project_box(k, identity, slab).rect.height();
  const bool pass = principal_ok && worst <= kC7RoundTripTolerance &&
    std::abs(height - 40.0) <= kC7HeightTolerance;
  return {pass, fmt::format("principal ray exact: {}; worst round trip {:.2e} m (tol {:.0e}); "
      "2 m at 50 m -> {:.3f} px (40 +/- {})", principal_ok, worst, kC7RoundTripTolerance, height,
      kC7HeightTolerance)};
}

Outcome c8_round_trips()
{
  Rng rng(88);
  std::vector<AnnotationRecord> records;
  for (int i = 0; i < kC8Records; ++i) {
    records.push_back(testing::random_record(rng, i % 2 == 0, "frame"));
  }
  const std::string kitti = write_labels(records, LabelFormat::kKittiExt);
  const auto kitti_back = parse_labels(kitti, LabelFormat::kKittiExt, "frame");
  const bool kitti_ok = write_labels(kitti_back, LabelFormat::kKittiExt) == kitti &&
    kitti_back.size() == records.size();
  // Values survive to the 6 significant digits the text format carries.
  double worst_rel = 0.0;
  for (std::size_t i = 0; i < records.size() && i < kitti_back.size(); ++i) {
    const Vec3 & a = records[i].box3d.center();
    const Vec3 & b = kitti_back[i].box3d.center();
    for (int c = 0; c < 3; ++c) {
      worst_rel = std::max(worst_rel, std::abs(a[c] - b[c]) / std::max(std::abs(a[c]), 1e-3));
    }
  }
  const bool digits_ok = worst_rel <= 5e-6;

  const auto json_back =
    parse_labels(write_labels(records, LabelFormat::kManifestJson), LabelFormat::kManifestJson);
  const bool json_ok = json_back == records;

  DatasetManifest m;
  m.name = "split";
  for (int i = 0; i < 500; ++i) {
    FrameRecord f;
    f.frame_id = fmt::format("{:06d}", i);
    m.frames.push_back(f);
  }
  const std::string s1 = write_split(make_split(m, 0.6, 1234));
  const std::string s2 = write_split(make_split(m, 0.6, 1234));
  const bool split_ok = s1 == s2 && parse_split(s1) == make_split(m, 0.6, 1234);

  return {kitti_ok && digits_ok && json_ok && split_ok,
    fmt::format("{} records: kitti_ext text fixed point {}, worst relative drift {:.1e}; "
      "manifest JSON identical {}; split byte-identical {}", kC8Records, kitti_ok, worst_rel,
      json_ok, split_ok)};
}

Outcome c9_occlusion_free_levels()
{
  // Occlusion-free scenes in which every object is also untruncated and at
  // least 40 px tall, so nothing separates the three levels.
  SceneConfig scene;
  scene.horizontal_fov_deg = 60.0;
  scene.max_range = 45.0;
  scene.min_objects = 5;
  scene.max_objects = 12;
  NoiseSpec noise;
  noise.drop_rate = 0.2;
  noise.fp_rate = 1.0;
  noise.center_sigma = 0.3;
  noise.angle_sigma = 0.05;

  DatasetManifest fixture;
  fixture.name = "occlusion-free";
  std::vector<AnnotationRecord> detections;
  std::size_t kept = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    SceneFrame s = generate_scene(scene, 99, i);
    auto & anns = s.frame.annotations;
    std::erase_if(anns, [](const AnnotationRecord & a) {
        return a.truncation > 0.0 || !a.box2d || a.box2d->height() < 40.0;
      });
    kept += anns.size();
    const auto d = corrupt_detections(s.frame, s.calibration.intrinsics, noise, 500 + i);
    detections.insert(detections.end(), d.begin(), d.end());
    fixture.frames.push_back(std::move(s.frame));
  }
  for (const auto & c : SceneConfig::default_classes()) {
    fixture.class_taxonomy.push_back(c.name);
  }
  const EvalReport r = evaluate(fixture, detections);
  const bool pass = r.map[0] && r.map[0] == r.map[1] && r.map[1] == r.map[2] && kept > 0;
  return {pass, fmt::format("{} boxes, mAP easy/moderate/hard = {:.4f}/{:.4f}/{:.4f}", kept,
      r.map[0].value_or(-1), r.map[1].value_or(-1), r.map[2].value_or(-1))};
}

}  // namespace

int main(int argc, char ** argv)
{
  const std::vector<std::function<Outcome()>> criteria{
    c1_iou_vs_sampling, c2_rotated_cube, c3_rigid_invariance, c4_evaluate_vs_brute_force,
    c5_synthetic_oracle, c6_report_arithmetic, c7_projection, c8_round_trips,
    c9_occlusion_free_levels};

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion \"" << argv[i] << "\"\n";
      return 2;
    }
    selected.push_back(n);
  }
  if (selected.empty()) {
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
      selected.push_back(n);
    }
  }

  bool all = true;
  for (int n : selected) {
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception & e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << n << " " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
