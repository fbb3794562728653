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

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "roadside3d/errors.hpp"
#include "roadside3d/formats.hpp"
#include "support/generators.hpp"

namespace roadside3d
{
namespace
{

constexpr const char * kLine =
  "Car 0.00 0 -1.57 500.0 150.0 600.0 250.0 1.50 1.80 4.20 2.0 1.5 30.0 1.57 -0.44 0.00";
constexpr const char * kPlainLine =
  "Car 0.00 0 -1.57 500.0 150.0 600.0 250.0 1.50 1.80 4.20 2.0 1.5 30.0 1.57";

TEST(ParseLabels, ExtendedKittiLineMapsFieldsDirectly)
{
  const auto records = parse_labels(kLine, LabelFormat::kKittiExt, "000001");
  ASSERT_EQ(records.size(), 1u);
  const auto & r = records[0];
  EXPECT_EQ(r.class_name, "Car");
  EXPECT_EQ(r.frame_id, "000001");
  EXPECT_EQ(r.truncation, 0.0);
  EXPECT_EQ(r.occlusion, Occlusion::kFullyVisible);
  EXPECT_EQ(r.alpha, -1.57);
  ASSERT_TRUE(r.box2d.has_value());
  EXPECT_EQ(*r.box2d, (Rect2D{500.0, 150.0, 600.0, 250.0}));
  EXPECT_EQ(r.box3d.center(), Vec3(2.0, 1.5, 30.0));
  EXPECT_EQ(r.box3d.dims(), (Dimensions{1.50, 1.80, 4.20}));
  EXPECT_EQ(r.box3d.orientation().yaw(), 1.57);
  EXPECT_EQ(r.box3d.orientation().pitch(), -0.44);
  EXPECT_EQ(r.box3d.orientation().roll(), 0.0);
  EXPECT_FALSE(r.score.has_value());
}

TEST(ParseLabels, PlainKittiDefaultsPitchAndRollToZero)
{
  const auto records = parse_labels(kPlainLine, LabelFormat::kKittiExt);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].box3d.orientation().pitch(), 0.0);
  EXPECT_EQ(records[0].box3d.orientation().roll(), 0.0);
}

TEST(ParseLabels, ScoreColumnMakesADetection)
{
  const auto plain = parse_labels(std::string(kPlainLine) + " 0.75", LabelFormat::kKittiExt);
  ASSERT_TRUE(plain[0].score.has_value());
  EXPECT_EQ(*plain[0].score, 0.75);
  const auto ext = parse_labels(std::string(kLine) + " 0.5", LabelFormat::kKittiExt);
  EXPECT_EQ(*ext[0].score, 0.5);
  EXPECT_EQ(ext[0].box3d.orientation().pitch(), -0.44);
}

TEST(ParseLabels, BlankLinesAreSkippedAndLinesCounted)
{
  const std::string text = std::string("\n") + kLine + "\n\n   \n" + kPlainLine + "\n";
  EXPECT_EQ(parse_labels(text, LabelFormat::kKittiExt).size(), 2u);
}

TEST(ParseLabels, MinusOneBox2dMeansAbsent)
{
  const auto r = parse_labels(
    "Car 0 0 -10 -1 -1 -1 -1 1.5 1.8 4.2 0 0 20 0", LabelFormat::kKittiExt);
  EXPECT_FALSE(r[0].box2d.has_value());
}

TEST(ParseLabels, GarbageInDimsNamesLineAndField)
{
  const std::string bad =
    "Car 0.00 0 -1.57 500.0 150.0 600.0 250.0 abc 1.80 4.20 2.0 1.5 30.0 1.57";
  try {
    parse_labels(bad, LabelFormat::kKittiExt);
    FAIL() << "expected a parse error";
  } catch (const ParseError & e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.field(), "h");
    EXPECT_EQ(e.column(), bad.find("abc") + 1);
  }
}

TEST(ParseLabels, ErrorsReportTheirLine)
{
  const std::string text = std::string(kLine) + "\n" + "Car 0 0 0 1 2 3\n";
  try {
    parse_labels(text, LabelFormat::kKittiExt);
    FAIL() << "expected a parse error";
  } catch (const ParseError & e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseLabels, RangeViolationsAreValidationErrors)
{
  EXPECT_THROW(
    parse_labels("Car 0 5 0 1 2 3 4 1 1 1 0 0 10 0", LabelFormat::kKittiExt), FieldRangeError);
  EXPECT_THROW(
    parse_labels("Car 1.5 0 0 1 2 3 4 1 1 1 0 0 10 0", LabelFormat::kKittiExt), FieldRangeError);
  EXPECT_THROW(
    parse_labels("Car 0 0 0 1 2 3 4 1 0 1 0 0 10 0", LabelFormat::kKittiExt), FieldRangeError);
  EXPECT_THROW(
    parse_labels("Car 0 0 0 1 2 3 4 1 1 1 0 0 10 0 1.5", LabelFormat::kKittiExt), FieldRangeError);
  try {
    parse_labels("Car 0 7 0 1 2 3 4 1 1 1 0 0 10 0", LabelFormat::kKittiExt);
  } catch (const FieldRangeError & e) {
    EXPECT_EQ(e.position().field, "occlusion");
    EXPECT_EQ(e.position().column, 7u);
  }
}

TEST(ParseLabels, NonFiniteAndTrailingJunkRejected)
{
  EXPECT_THROW(
    parse_labels("Car 0 0 0 1 2 3 4 1 1 1 nan 0 10 0", LabelFormat::kKittiExt), ParseError);
  EXPECT_THROW(
    parse_labels("Car 0 0 0 1 2 3 4 1 1 1 0 0 10x 0", LabelFormat::kKittiExt), ParseError);
  EXPECT_THROW(
    parse_labels("Car 0 0.5 0 1 2 3 4 1 1 1 0 0 10 0", LabelFormat::kKittiExt), ParseError);
}

TEST(WriteLabels, EmptyListIsEmptyText)
{
  EXPECT_EQ(write_labels({}, LabelFormat::kKittiExt), "");
  EXPECT_EQ(parse_labels(write_labels({}, LabelFormat::kManifestJson), LabelFormat::kManifestJson)
    .size(), 0u);
}

TEST(WriteLabels, SingleRecordRoundTrips)
{
  const auto records = parse_labels(kLine, LabelFormat::kKittiExt);
  for (auto format : {LabelFormat::kKittiExt, LabelFormat::kManifestJson}) {
    const auto back = parse_labels(write_labels(records, format), format);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], records[0]);
  }
}

TEST(WriteLabels, KittiUsesSixSignificantDigits)
{
  AnnotationRecord r;
  r.class_name = "Car";
  r.box3d = Box3D(Vec3(1.23456789, -0.5, 123.456789), Dimensions{1.5, 1.8, 4.2}, {});
  const std::string text = write_labels(std::vector{r}, LabelFormat::kKittiExt);
  EXPECT_EQ(text, "Car 0 0 -10 -1 -1 -1 -1 1.5 1.8 4.2 1.23457 -0.5 123.457 0 0 0\n");
}

TEST(WriteLabels, WhitespaceInClassNameIsRejected)
{
  AnnotationRecord r;
  r.class_name = "Big Truck";
  EXPECT_THROW(write_labels(std::vector{r}, LabelFormat::kKittiExt), SerializationError);
}

TEST(LabelFormat, NamesAreRecognised)
{
  EXPECT_EQ(label_format_from_string("kitti_ext"), LabelFormat::kKittiExt);
  EXPECT_EQ(label_format_from_string("manifest_json"), LabelFormat::kManifestJson);
  EXPECT_THROW(label_format_from_string("coco"), ValidationError);
}

TEST(ParseCalibration, IdentityTransform)
{
  const Calibration c = parse_calibration(R"({
    "K": [1000, 0, 960, 0, 1000, 540, 0, 0, 1], "image_size": [1920, 1080],
    "transforms": [{"source": "lidar", "target": "camera",
                    "R": [1, 0, 0, 0, 1, 0, 0, 0, 1], "t": [0, 0, 0]}]})");
  EXPECT_EQ(c.intrinsics.fx(), 1000.0);
  ASSERT_EQ(c.transforms.size(), 1u);
  EXPECT_TRUE(c.transforms[0].rotation().matrix().isIdentity(0.0));
  EXPECT_TRUE(c.transforms[0].translation().isZero(0.0));
  EXPECT_EQ(c.transforms[0].source_frame(), "lidar");
}

TEST(ParseCalibration, NonPositiveFocalLengthIsValidationError)
{
  EXPECT_THROW(parse_calibration(R"({"K": [0, 0, 960, 0, 1000, 540, 0, 0, 1],
    "image_size": [1920, 1080]})"), ValidationError);
}

TEST(ParseCalibration, ReflectionIsCalibrationError)
{
  EXPECT_THROW(parse_calibration(R"({
    "K": [1000, 0, 960, 0, 1000, 540, 0, 0, 1], "image_size": [1920, 1080],
    "transforms": [{"source": "lidar", "target": "camera",
                    "R": [-1, 0, 0, 0, 1, 0, 0, 0, 1], "t": [0, 0, 0]}]})"), CalibrationError);
  EXPECT_THROW(parse_calibration(R"({
    "K": [1000, 0, 960, 0, 1000, 540, 0, 0, 1], "image_size": [1920, 1080],
    "transforms": [{"source": "lidar", "target": "camera",
                    "R": [1.01, 0, 0, 0, 1, 0, 0, 0, 1], "t": [0, 0, 0]}]})"), CalibrationError);
}

TEST(ParseCalibration, MissingKIsSchemaError)
{
  EXPECT_THROW(parse_calibration(R"({"image_size": [1920, 1080]})"), SchemaError);
  EXPECT_THROW(parse_calibration("{not json"), ParseError);
}

TEST(ParseCalibration, RoundTrip)
{
  const Calibration c = parse_calibration(testing::lidar_camera_calibration_json());
  const Calibration back = parse_calibration(write_calibration(c));
  EXPECT_EQ(back.intrinsics, c.intrinsics);
  ASSERT_EQ(back.transforms.size(), 1u);
  EXPECT_EQ(back.transforms[0].rotation().matrix(), c.transforms[0].rotation().matrix());
  EXPECT_EQ(back.transforms[0].translation(), c.transforms[0].translation());
}

DatasetManifest small_manifest(const std::vector<std::size_t> & boxes_per_frame)
{
  DatasetManifest m;
  m.name = "fixture";
  m.class_taxonomy = {"Car", "Pedestrian"};
  for (std::size_t f = 0; f < boxes_per_frame.size(); ++f) {
    FrameRecord frame;
    frame.frame_id = "f" + std::to_string(f);
    frame.image_width = f % 2 == 0 ? 1920 : 1280;
    frame.image_height = f % 2 == 0 ? 1080 : 720;
    for (std::size_t i = 0; i < boxes_per_frame[f]; ++i) {
      AnnotationRecord a;
      a.class_name = i % 3 == 0 ? "Pedestrian" : "Car";
      a.frame_id = frame.frame_id;
      frame.annotations.push_back(a);
    }
    m.frames.push_back(frame);
  }
  return m;
}

TEST(Manifest, RoundTripIsExact)
{
  Rng rng(77);
  DatasetManifest m;
  m.name = "random";
  m.class_taxonomy = {"Car", "Pedestrian", "Truck"};
  for (int f = 0; f < 5; ++f) {
    FrameRecord frame;
    frame.frame_id = "frame_" + std::to_string(f);
    frame.image_path = "images/" + frame.frame_id + ".png";
    frame.image_width = 1920;
    frame.image_height = 1080;
    frame.calibration_ref = "calib/" + std::to_string(f % 2) + ".json";
    frame.tags = {{"weather", "foggy"}, {"time_of_day", "night"}};
    for (int i = 0; i < 4; ++i) {
      frame.annotations.push_back(testing::random_record(rng, false, frame.frame_id));
    }
    m.frames.push_back(frame);
  }
  EXPECT_EQ(parse_manifest(write_manifest(m)), m);
}

TEST(Manifest, ValidationCatchesDuplicatesAndForeignClasses)
{
  DatasetManifest m = small_manifest({1, 1});
  m.frames[1].frame_id = m.frames[0].frame_id;
  EXPECT_THROW(validate(m), ValidationError);
  m = small_manifest({1});
  m.frames[0].annotations[0].class_name = "Tram";
  EXPECT_THROW(validate(m), TaxonomyError);
}

TEST(ClassMapping, DropsUnmappedRecordsAndCountsThem)
{
  const ClassMapping map = parse_class_mapping(R"({"Car": "Vehicle", "Van": "Vehicle"})");
  auto records = parse_labels(std::string(kLine) + "\n" + kPlainLine, LabelFormat::kKittiExt);
  records[1].class_name = "Bicycle";
  const MappedRecords out = apply_class_mapping(records, map);
  ASSERT_EQ(out.records.size(), 1u);
  EXPECT_EQ(out.records[0].class_name, "Vehicle");
  EXPECT_EQ(out.dropped, 1u);
}

TEST(DatasetStats, EmptyManifestIsAllZero)
{
  const DatasetStats s = dataset_stats(DatasetManifest{});
  EXPECT_EQ(s.frames, 0u);
  EXPECT_EQ(s.boxes, 0u);
  EXPECT_TRUE(s.per_class.empty());
  EXPECT_TRUE(s.resolutions.empty());
}

TEST(DatasetStats, CountsFramesBoxesClassesResolutions)
{
  const DatasetStats s = dataset_stats(small_manifest({2, 0, 5}));
  EXPECT_EQ(s.frames, 3u);
  EXPECT_EQ(s.boxes, 7u);
  EXPECT_EQ(s.per_class.at("Pedestrian"), 3u);
  EXPECT_EQ(s.per_class.at("Car"), 4u);
  EXPECT_EQ(s.resolutions.size(), 2u);
}

TEST(DatasetStats, TumTrafShapedFixtureRendersAsOneKAndFifteenK)
{
  const DatasetStats s = dataset_stats(small_manifest(std::vector<std::size_t>(1000, 15)));
  EXPECT_EQ(compact_count(s.frames), "1k");
  EXPECT_EQ(compact_count(s.boxes), "15k");
  const std::vector<std::pair<std::string, DatasetStats>> rows{{"TUMTraf-A9", s}};
  const std::string table = render_stats_table(rows);
  EXPECT_NE(table.find("TUMTraf-A9"), std::string::npos);
  EXPECT_NE(table.find("1k"), std::string::npos);
  EXPECT_NE(table.find("15k"), std::string::npos);
}

TEST(DatasetStats, CompactCounts)
{
  EXPECT_EQ(compact_count(0), "0");
  EXPECT_EQ(compact_count(999), "999");
  EXPECT_EQ(compact_count(71000), "71k");
  EXPECT_EQ(compact_count(1200000), "1.2M");
  EXPECT_EQ(compact_count(1500), "1.5k");
}

}  // namespace
}  // namespace roadside3d
