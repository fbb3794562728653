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

// Internal helpers shared between translation units; not installed.
#ifndef ROADSIDE3D_SRC_DETAIL_HPP_
#define ROADSIDE3D_SRC_DETAIL_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadside3d/formats.hpp"
#include "roadside3d/parallel.hpp"

namespace roadside3d::detail
{

std::vector<AnnotationRecord> parse_json_labels(std::string_view text);
std::string write_json_labels(std::span<const AnnotationRecord> records);

/// Parses JSON text, turning syntax errors into ParseError with a line and
/// column.
nlohmann::json parse_json_text(std::string_view text, std::string_view what);

/// Runs body(i) for i in [0, n) on up to `jobs` threads. The first exception
/// thrown by any worker is rethrown on the caller.
using roadside3d::parallel_for;

}  // namespace roadside3d::detail

#endif  // ROADSIDE3D_SRC_DETAIL_HPP_
