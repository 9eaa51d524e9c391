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

#include "speechframe/error.hpp"

namespace speechframe {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::UnknownBook: return "unknown-book";
    case ErrorCode::UnknownCode: return "unknown-code";
    case ErrorCode::DuplicateTitle: return "duplicate-title";
    case ErrorCode::ReservedCode: return "reserved-code";
    case ErrorCode::InconsistentContext: return "inconsistent-context";
    case ErrorCode::NonPositiveRate: return "non-positive-rate";
    case ErrorCode::DuplicateSymbol: return "duplicate-symbol";
    case ErrorCode::ClassInvalid: return "class-invalid";
    case ErrorCode::UnknownSymbol: return "unknown-symbol";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::MissingManifest: return "missing-manifest";
    case ErrorCode::SchemaVersionMismatch: return "schema-version-mismatch";
    case ErrorCode::IntegrityViolations: return "integrity-violations";
    case ErrorCode::UnknownTable: return "unknown-table";
    case ErrorCode::DuplicateKey: return "duplicate-key";
    case ErrorCode::DanglingForeignKey: return "dangling-fk";
    case ErrorCode::TypeMismatch: return "type-mismatch";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::Restricted: return "restricted";
    case ErrorCode::KeyCollision: return "key-collision";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::NegativeInterval: return "negative-interval";
    case ErrorCode::UnknownSignal: return "unknown-signal";
    case ErrorCode::InvalidSegmentation: return "invalid-segmentation";
    case ErrorCode::NoSegments: return "no-segments";
    case ErrorCode::MissingVariant: return "missing-variant";
    case ErrorCode::UnknownAttribute: return "unknown-attribute";
  }
  return "unknown";
}

}  // namespace speechframe
