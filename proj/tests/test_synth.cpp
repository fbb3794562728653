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

#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "roadside3d/errors.hpp"
#include "roadside3d/eval.hpp"
#include "roadside3d/synth.hpp"

namespace roadside3d
{
namespace
{

constexpr double kDegToRad = std::numbers::pi / 180.0;

SceneConfig small_scene()
{
  SceneConfig c;
  c.min_objects = 5;
  c.max_objects = 15;
  return c;
}

TEST(GenerateScene, SameSeedSameFrame)
{
  const SceneConfig c;
  const SceneFrame a = generate_scene(c, 7);
  const SceneFrame b = generate_scene(c, 7);
  EXPECT_EQ(a.frame, b.frame);
  EXPECT_EQ(write_calibration(a.calibration), write_calibration(b.calibration));
  EXPECT_NE(generate_scene(c, 8).frame, a.frame);
  EXPECT_NE(generate_scene(c, 7, 1).frame, a.frame);
}

TEST(GenerateScene, PitchStaysWithinConfiguredRange)
{
  const SceneConfig c;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const double p = generate_scene(c, 11, i).camera_pitch;
    EXPECT_GE(p, -45.0 * kDegToRad);
    EXPECT_LE(p, -25.0 * kDegToRad);
  }
}

TEST(GenerateScene, ZeroObjectsGivesEmptyFrame)
{
  SceneConfig c;
  c.min_objects = 0;
  c.max_objects = 0;
  const SceneFrame s = generate_scene(c, 1);
  EXPECT_TRUE(s.frame.annotations.empty());
  EXPECT_EQ(s.frame.image_width, 1920);
  EXPECT_EQ(s.frame.image_height, 1080);
}

TEST(GenerateScene, BoxesAreVisibleInRangeAndDisjoint)
{
  const SceneConfig c = small_scene();
  const RigidTransform kIdentity(RotationMatrix(), Vec3::Zero(), "boxes", "camera");
  for (std::uint64_t i = 0; i < 20; ++i) {
    const SceneFrame s = generate_scene(c, 5, i);
    const auto & anns = s.frame.annotations;
    ASSERT_GE(anns.size(), 5u);
    ASSERT_LE(anns.size(), 15u);
    const Intrinsics k = s.calibration.intrinsics;
    for (std::size_t a = 0; a < anns.size(); ++a) {
      const Box3D & b = anns[a].box3d;
      EXPECT_LE(b.center().norm(), c.max_range);
      EXPECT_TRUE(project_box(k, kIdentity, b).any_corner_in_image);
      ASSERT_TRUE(anns[a].box2d.has_value());
      EXPECT_GE(anns[a].truncation, 0.0);
      EXPECT_LE(anns[a].truncation, 1.0);
      EXPECT_EQ(anns[a].occlusion, Occlusion::kFullyVisible);
      EXPECT_EQ(anns[a].frame_id, s.frame.frame_id);
      for (std::size_t o = a + 1; o < anns.size(); ++o) {
        EXPECT_EQ(intersection_volume(b, anns[o].box3d), 0.0);
      }
    }
  }
}

TEST(GenerateScene, CameraTiltShowsUpAsBoxPitch)
{
  SceneConfig c = small_scene();
  c.pitch_min_deg = -30.0;
  c.pitch_max_deg = -30.0;
  const SceneFrame s = generate_scene(c, 2);
  for (const auto & a : s.frame.annotations) {
    // World yaw-only boxes seen by a camera pitched down by 30 degrees have
    // their up axis tilted by the same amount.
    const Vec3 up = a.box3d.rotation() * Vec3(0, -1, 0);
    EXPECT_NEAR(std::acos(-up.y()), 30.0 * kDegToRad, 1e-9);
  }
}

TEST(GenerateScene, TagsComeFromConfiguredLists)
{
  const SceneConfig c;
  const std::set<std::string> weathers(c.weathers.begin(), c.weathers.end());
  for (std::uint64_t i = 0; i < 20; ++i) {
    const SceneFrame s = generate_scene(c, 3, i);
    EXPECT_TRUE(weathers.contains(s.frame.tags.at("weather")));
    EXPECT_TRUE(s.frame.tags.contains("time_of_day"));
  }
}

TEST(GenerateScene, InfeasibleCountIsAGenerationError)
{
  SceneConfig c;
  c.max_range = 12.0;
  c.min_range = 10.0;
  c.min_objects = 500;
  c.max_objects = 500;
  EXPECT_THROW(generate_scene(c, 1), GenerationError);
}

TEST(SceneConfigValidation, RejectsOutOfRangeFields)
{
  SceneConfig c;
  c.horizontal_fov_deg = 180.0;
  EXPECT_THROW(validate(c), ValidationError);
  c = SceneConfig{};
  c.pitch_max_deg = 5.0;
  EXPECT_THROW(validate(c), ValidationError);
  c = SceneConfig{};
  c.min_objects = 10;
  c.max_objects = 3;
  EXPECT_THROW(validate(c), ValidationError);
  c = SceneConfig{};
  c.classes.clear();
  EXPECT_THROW(validate(c), ValidationError);
  NoiseSpec n;
  n.drop_rate = 1.5;
  EXPECT_THROW(validate(n), ValidationError);
  n = NoiseSpec{};
  n.center_sigma = -1.0;
  EXPECT_THROW(validate(n), ValidationError);
}

TEST(CorruptDetections, ZeroNoiseIsIdentityWithUnitScore)
{
  const SceneFrame s = generate_scene(small_scene(), 4);
  const auto dets = corrupt_detections(s.frame, s.calibration.intrinsics, NoiseSpec{}, 9);
  ASSERT_EQ(dets.size(), s.frame.annotations.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    AnnotationRecord expected = s.frame.annotations[i];
    expected.score = 1.0;
    EXPECT_EQ(dets[i], expected);
  }
}

TEST(CorruptDetections, DropRateHalfKeepsAboutHalf)
{
  const SceneConfig c = small_scene();
  NoiseSpec n;
  n.drop_rate = 0.5;
  std::size_t gt = 0;
  std::size_t kept = 0;
  for (std::uint64_t i = 0; gt < 1000; ++i) {
    const SceneFrame s = generate_scene(c, 21, i);
    gt += s.frame.annotations.size();
    kept += corrupt_detections(s.frame, s.calibration.intrinsics, n, i).size();
  }
  EXPECT_NEAR(static_cast<double>(kept) / static_cast<double>(gt), 0.5, 0.05);
}

TEST(CorruptDetections, SpuriousCountFollowsPoisson)
{
  const SceneConfig c = small_scene();
  NoiseSpec n;
  n.drop_rate = 1.0;
  n.fp_rate = 2.0;
  std::size_t total = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const SceneFrame s = generate_scene(c, 31, i);
    const auto dets = corrupt_detections(s.frame, s.calibration.intrinsics, n, 1000 + i);
    total += dets.size();
    for (const auto & d : dets) {
      EXPECT_NEAR(*d.score, score_from_magnitude(n.fp_magnitude, n.score_scale), 1e-15);
      EXPECT_GE(d.box3d.center().z(), 0.0);
    }
  }
  // 3 sigma of Poisson(200) is 3 * sqrt(200) ~ 42.4.
  EXPECT_NEAR(static_cast<double>(total), 200.0, 3.0 * std::sqrt(200.0));
}

TEST(CorruptDetections, ScoreFallsWithPerturbation)
{
  EXPECT_DOUBLE_EQ(score_from_magnitude(0.0, 1.0), 1.0);
  EXPECT_GT(score_from_magnitude(0.1, 1.0), score_from_magnitude(0.2, 1.0));
  EXPECT_NEAR(score_from_magnitude(1.0, 2.0), std::exp(-0.5), 1e-15);
}

TEST(GenerateDataset, PerfectDetectionsScoreHundred)
{
  const auto ds = generate_dataset(small_scene(), NoiseSpec{}, 10, 77);
  ASSERT_EQ(ds.manifest.frames.size(), 10u);
  EXPECT_EQ(ds.calibrations.size(), 10u);
  EXPECT_EQ(ds.manifest.frames[3].frame_id, "000003");
  EXPECT_EQ(ds.manifest.frames[3].calibration_ref, "calib/000003.json");
  const EvalReport r = evaluate(ds.manifest, ds.detections);
  for (const auto & [cls, cells] : r.cells) {
    for (const auto & cell : cells) {
      if (cell.gt > 0) {
        EXPECT_DOUBLE_EQ(*cell.ap, 100.0) << cls;
      }
    }
  }
}

TEST(GenerateDataset, IndependentOfWorkerCount)
{
  NoiseSpec n;
  n.drop_rate = 0.2;
  n.fp_rate = 1.0;
  n.center_sigma = 0.3;
  const auto a = generate_dataset(small_scene(), n, 6, 5, "x", 1);
  const auto b = generate_dataset(small_scene(), n, 6, 5, "x", 3);
  EXPECT_EQ(a.manifest, b.manifest);
  EXPECT_EQ(a.detections, b.detections);
}

}  // namespace
}  // namespace roadside3d
