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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace speechframe {

// Every failure raised by the library carries one of these codes so callers
// (and the CLI) can branch on the category without parsing messages.
enum class ErrorCode {
  InvalidArgument,
  // reference books
  UnknownBook,
  UnknownCode,
  DuplicateTitle,
  ReservedCode,
  // alphabet
  InconsistentContext,
  NonPositiveRate,
  DuplicateSymbol,
  ClassInvalid,
  UnknownSymbol,
  // store
  ParseError,
  MissingManifest,
  SchemaVersionMismatch,
  IntegrityViolations,
  UnknownTable,
  DuplicateKey,
  DanglingForeignKey,
  TypeMismatch,
  NotFound,
  Restricted,
  KeyCollision,
  IoError,
  // corpus
  NegativeInterval,
  UnknownSignal,
  InvalidSegmentation,
  NoSegments,
  MissingVariant,
  // query
  UnknownAttribute,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised while reading line-delimited input; line is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(ErrorCode::ParseError,
              source + (line ? ":" + std::to_string(line) : std::string()) +
                  ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace speechframe
