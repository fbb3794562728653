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

#include "roadside3d/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "detail.hpp"
#include "roadside3d/errors.hpp"
#include "roadside3d/random.hpp"

namespace roadside3d
{

using nlohmann::json;

namespace
{

void shuffle(std::vector<std::string> & items, Rng & rng)
{
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_below(i);
    std::swap(items[i - 1], items[j]);
  }
}

std::size_t rounded_share(double fraction, std::size_t n)
{
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

}  // namespace

std::size_t SplitSpec::count(SplitSide side) const
{
  return static_cast<std::size_t>(std::count_if(
    assignment.begin(), assignment.end(), [side](const auto & kv) {return kv.second == side;}));
}

SplitSpec make_split(
  const DatasetManifest & manifest, double train_fraction, std::uint64_t seed,
  bool stratify_by_calibration)
{
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must be strictly between 0 and 1");
  }
  if (manifest.frames.empty()) {
    throw EmptyInputError("cannot split an empty manifest");
  }

  SplitSpec split;
  split.train_fraction = train_fraction;
  split.seed = seed;
  split.stratified = stratify_by_calibration;
  Rng rng(seed);

  std::map<std::string, std::vector<std::string>> groups;
  for (const auto & f : manifest.frames) {
    groups[stratify_by_calibration ? f.calibration_ref : std::string()].push_back(f.frame_id);
  }
  for (auto & [key, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw ValidationError("manifest has duplicate frame ids");
    }
  }

  // Largest-remainder apportionment of the global Train quota.
  const std::size_t total_train = rounded_share(train_fraction, manifest.frames.size());
  std::map<std::string, std::size_t> quota;
  std::vector<std::pair<double, std::string>> remainders;
  std::size_t assigned = 0;
  for (const auto & [key, ids] : groups) {
    const double exact = train_fraction * static_cast<double>(ids.size());
    quota[key] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[key];
    remainders.emplace_back(exact - std::floor(exact), key);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto & a, const auto & b) {
      return a.first > b.first;
    });
  for (std::size_t i = 0; assigned < total_train && i < remainders.size(); ++i, ++assigned) {
    ++quota[remainders[i].second];
  }

  for (auto & [key, ids] : groups) {
    shuffle(ids, rng);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      split.assignment[ids[i]] = i < quota[key] ? SplitSide::kTrain : SplitSide::kTest;
    }
  }
  return split;
}

std::string write_split(const SplitSpec & split)
{
  json assignment = json::object();
  for (const auto & [id, side] : split.assignment) {
    assignment[id] = side == SplitSide::kTrain ? "train" : "test";
  }
  const json j = {
    {"assignment", std::move(assignment)},
    {"fraction", split.train_fraction},
    {"seed", split.seed},
    {"stratified", split.stratified},
  };
  return j.dump(2) + "\n";
}

SplitSpec parse_split(std::string_view text)
{
  const json j = detail::parse_json_text(text, "split");
  if (!j.is_object() || !j.contains("assignment") || !j["assignment"].is_object()) {
    throw SchemaError("split file needs an \"assignment\" object");
  }
  SplitSpec split;
  if (!j.contains("fraction") || !j["fraction"].is_number()) {
    throw SchemaError("split file needs a numeric \"fraction\"");
  }
  split.train_fraction = j["fraction"].get<double>();
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
    throw SchemaError("split file needs an unsigned \"seed\"");
  }
  split.seed = j["seed"].get<std::uint64_t>();
  split.stratified = j.value("stratified", false);
  for (const auto & [id, side] : j["assignment"].items()) {
    if (side == "train") {
      split.assignment[id] = SplitSide::kTrain;
    } else if (side == "test") {
      split.assignment[id] = SplitSide::kTest;
    } else {
      throw SchemaError("split side for \"" + id + "\" must be \"train\" or \"test\"");
    }
  }
  return split;
}

DatasetManifest select_frames(
  const DatasetManifest & manifest, const SplitSpec & split, SplitSide side)
{
  DatasetManifest out;
  out.name = manifest.name;
  out.class_taxonomy = manifest.class_taxonomy;
  for (const auto & f : manifest.frames) {
    auto it = split.assignment.find(f.frame_id);
    if (it == split.assignment.end()) {
      throw ReferenceError("frame \"" + f.frame_id + "\" is not covered by the split");
    }
    if (it->second == side) {
      out.frames.push_back(f);
    }
  }
  return out;
}

std::string_view to_string(DifficultyLevel level)
{
  switch (level) {
    case DifficultyLevel::kEasy: return "easy";
    case DifficultyLevel::kModerate: return "moderate";
    case DifficultyLevel::kHard: return "hard";
    case DifficultyLevel::kIgnored: return "ignored";
  }
  return "ignored";
}

DifficultyLevel assign_difficulty(
  const AnnotationRecord & record, double projected_height, const DifficultyThresholds & thresholds)
{
  const int occlusion = static_cast<int>(record.occlusion);
  for (std::size_t i = 0; i < 3; ++i) {
    if (occlusion <= thresholds.max_occlusion[i] &&
      record.truncation <= thresholds.max_truncation[i] &&
      projected_height >= thresholds.min_height[i])
    {
      return static_cast<DifficultyLevel>(i);
    }
  }
  return DifficultyLevel::kIgnored;
}

void DatasetRegistry::add(DatasetRef ref)
{
  if (ref.id.empty()) {
    throw RegistryError("dataset id must be non-empty");
  }
  std::string id = ref.id;
  refs_.insert_or_assign(std::move(id), std::move(ref));
}

bool DatasetRegistry::contains(std::string_view id) const
{
  return refs_.find(id) != refs_.end();
}

const DatasetRef & DatasetRegistry::get(std::string_view id) const
{
  auto it = refs_.find(id);
  if (it == refs_.end()) {
    throw RegistryError("unknown dataset \"" + std::string(id) + "\"");
  }
  return it->second;
}

std::vector<std::string> DatasetRegistry::ids() const
{
  std::vector<std::string> out;
  for (const auto & [id, ref] : refs_) {
    out.push_back(id);
  }
  return out;
}

DatasetRegistry DatasetRegistry::builtin()
{
  DatasetRegistry r;
  for (const char * id : {
      "RoadSense3D Train", "TUMTraf-A9 Train", "TUMTraf-A9 Test", "DAIR-V2X-I Train",
      "DAIR-V2X-I Test"})
  {
    r.add({id, ""});
  }
  return r;
}

DatasetRegistry DatasetRegistry::from_json(std::string_view text)
{
  const json j = detail::parse_json_text(text, "registry");
  if (!j.is_object() || !j.contains("datasets") || !j["datasets"].is_array()) {
    throw SchemaError("registry needs a \"datasets\" array");
  }
  DatasetRegistry r;
  for (const auto & d : j["datasets"]) {
    if (!d.is_object() || !d.contains("id") || !d["id"].is_string()) {
      throw SchemaError("registry entries need a string \"id\"");
    }
    r.add({d["id"].get<std::string>(), d.value("manifest", std::string())});
  }
  return r;
}

PlanKind ExperimentPlan::kind() const
{
  const std::size_t stages = finetune_chain.size() + (pretrain ? 1 : 0);
  if (stages <= 1) {
    return PlanKind::kScratch;
  }
  return stages == 2 ? PlanKind::kSingleStep : PlanKind::kMultiStep;
}

ExperimentPlan build_experiment_plan(
  const DatasetRegistry & registry, std::optional<std::string> pretrain,
  std::vector<std::string> finetune_chain, std::string eval_set, nlohmann::json training_metadata)
{
  if (eval_set.empty()) {
    throw PlanError("evaluation set must be non-empty");
  }
  std::set<std::string> seen;
  for (const auto & id : finetune_chain) {
    if (!seen.insert(id).second) {
      throw PlanError("fine-tuning chain repeats \"" + id + "\"");
    }
  }
  if (pretrain) {
    registry.get(*pretrain);
  }
  for (const auto & id : finetune_chain) {
    registry.get(id);
  }
  registry.get(eval_set);
  if (!training_metadata.is_object()) {
    throw PlanError("training metadata must be a JSON object");
  }
  return ExperimentPlan{
    std::move(pretrain), std::move(finetune_chain), std::move(eval_set),
    std::move(training_metadata)};
}

std::string write_plan(const ExperimentPlan & plan)
{
  const json j = {
    {"pretrain", plan.pretrain ? json(*plan.pretrain) : json(nullptr)},
    {"finetune_chain", plan.finetune_chain},
    {"eval", plan.eval_set},
    {"training_metadata", plan.training_metadata},
  };
  return j.dump(2) + "\n";
}

ExperimentPlan parse_plan(std::string_view text)
{
  const json j = detail::parse_json_text(text, "plan");
  if (!j.is_object()) {
    throw SchemaError("plan must be a JSON object");
  }
  ExperimentPlan plan;
  if (j.contains("pretrain") && !j["pretrain"].is_null()) {
    if (!j["pretrain"].is_string()) {
      throw SchemaError("plan.pretrain must be a string or null");
    }
    plan.pretrain = j["pretrain"].get<std::string>();
  }
  if (j.contains("finetune_chain")) {
    if (!j["finetune_chain"].is_array()) {
      throw SchemaError("plan.finetune_chain must be an array");
    }
    for (const auto & id : j["finetune_chain"]) {
      if (!id.is_string()) {
        throw SchemaError("plan.finetune_chain entries must be strings");
      }
      plan.finetune_chain.push_back(id.get<std::string>());
    }
  }
  if (!j.contains("eval") || !j["eval"].is_string()) {
    throw SchemaError("plan needs a string \"eval\"");
  }
  plan.eval_set = j["eval"].get<std::string>();
  if (j.contains("training_metadata")) {
    plan.training_metadata = j["training_metadata"];
  }
  if (plan.eval_set.empty()) {
    throw PlanError("evaluation set must be non-empty");
  }
  std::set<std::string> seen;
  for (const auto & id : plan.finetune_chain) {
    if (!seen.insert(id).second) {
      throw PlanError("fine-tuning chain repeats \"" + id + "\"");
    }
  }
  return plan;
}

}  // namespace roadside3d
