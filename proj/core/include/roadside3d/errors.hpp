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

#ifndef ROADSIDE3D_ERRORS_HPP_
#define ROADSIDE3D_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace roadside3d
{

/// Coarse classification used by the CLI to pick an exit status.
enum class ErrorKind
{
  kValidation,
  kIo,
};

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string & what, ErrorKind kind = ErrorKind::kValidation)
  : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept {return kind_;}

private:
  ErrorKind kind_;
};

#define ROADSIDE3D_DEFINE_ERROR(Name) \
  class Name : public Error \
  { \
public: \
    using Error::Error; \
  }

ROADSIDE3D_DEFINE_ERROR(InvalidAngleError);
ROADSIDE3D_DEFINE_ERROR(InvalidBoxError);
ROADSIDE3D_DEFINE_ERROR(BehindCameraError);
ROADSIDE3D_DEFINE_ERROR(FrameError);
ROADSIDE3D_DEFINE_ERROR(ValidationError);
ROADSIDE3D_DEFINE_ERROR(CalibrationError);
ROADSIDE3D_DEFINE_ERROR(SchemaError);
ROADSIDE3D_DEFINE_ERROR(SerializationError);
ROADSIDE3D_DEFINE_ERROR(EmptyInputError);
ROADSIDE3D_DEFINE_ERROR(PlanError);
ROADSIDE3D_DEFINE_ERROR(RegistryError);
ROADSIDE3D_DEFINE_ERROR(ReferenceError);
ROADSIDE3D_DEFINE_ERROR(TaxonomyError);
ROADSIDE3D_DEFINE_ERROR(GenerationError);

#undef ROADSIDE3D_DEFINE_ERROR

/// Raised for file-system failures; maps to exit status 2 in the CLI.
class IoError : public Error
{
public:
  explicit IoError(const std::string & what)
  : Error(what, ErrorKind::kIo) {}
};

/// 1-based location of a token in text input.
struct SourcePosition
{
  std::size_t line = 0;
  std::size_t column = 0;
  std::string field;

  std::string describe() const
  {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) +
           " (field \"" + field + "\")";
  }
};

/// Malformed text input.
class ParseError : public Error
{
public:
  ParseError(const std::string & message, SourcePosition position)
  : Error(position.describe() + ": " + message), position_(std::move(position)) {}

  const SourcePosition & position() const noexcept {return position_;}
  std::size_t line() const noexcept {return position_.line;}
  std::size_t column() const noexcept {return position_.column;}
  const std::string & field() const noexcept {return position_.field;}

private:
  SourcePosition position_;
};

/// Well-formed token whose value breaks a field invariant.
class FieldRangeError : public ValidationError
{
public:
  FieldRangeError(const std::string & message, SourcePosition position)
  : ValidationError(position.describe() + ": " + message), position_(std::move(position)) {}

  const SourcePosition & position() const noexcept {return position_;}

private:
  SourcePosition position_;
};

}  // namespace roadside3d

#endif  // ROADSIDE3D_ERRORS_HPP_
