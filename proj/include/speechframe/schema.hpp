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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace speechframe::store {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kFormatName = "speechframe-corpus";

enum class FieldType {
  Integer,
  Real,
  Text,
  Date,      // ISO-8601 calendar date
  Duration,  // non-negative seconds
  Boolean,
};

std::string_view to_string(FieldType type);

struct FieldSpec {
  std::string name;
  FieldType type;
  bool nullable = false;
};

// What happens to referring rows when the referenced row is deleted. Key
// updates always propagate regardless of policy.
enum class CascadePolicy { Cascade, Restrict };

struct ForeignKey {
  std::string field;
  std::string target_table;
  std::string target_field;  // must be the target's single key field
  CascadePolicy policy = CascadePolicy::Restrict;
};

struct TableSchema {
  std::string name;
  std::vector<FieldSpec> fields;
  std::vector<std::string> key_fields;
  std::vector<ForeignKey> foreign_keys;
  // Each entry is a set of fields whose combined values must be unique.
  std::vector<std::vector<std::string>> unique_constraints;

  const FieldSpec* find_field(std::string_view field_name) const;
  const ForeignKey* find_foreign_key(std::string_view field_name) const;
  bool is_key_field(std::string_view field_name) const;
};

// An incoming foreign-key edge: `table.fk.field -> fk.target_table`.
struct EdgeRef {
  const TableSchema* table;
  const ForeignKey* fk;
};

std::string describe_edge(const TableSchema& table, const ForeignKey& fk);

class Schema {
 public:
  Schema() = default;

  // Throws Error(InvalidArgument) if the table set is not self-consistent:
  // duplicate names, empty keys, unknown fields, or dangling FK targets.
  explicit Schema(std::vector<TableSchema> tables,
                  std::map<std::string, std::string> field_aliases = {});

  // EdgeRef holds pointers into tables_, which survive a move but not a copy.
  Schema(const Schema&) = delete;
  Schema& operator=(const Schema&) = delete;
  Schema(Schema&&) noexcept = default;
  Schema& operator=(Schema&&) noexcept = default;

  const std::vector<TableSchema>& tables() const { return tables_; }
  std::size_t size() const { return tables_.size(); }

  const TableSchema* find(std::string_view name) const;
  // Throws Error(UnknownTable).
  const TableSchema& table(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  // Every foreign key pointing at `target`.
  const std::vector<EdgeRef>& referrers(std::string_view target) const;

  // "TABLE.FIELD" -> original attribute name for fields whose historical
  // names are not usable as identifiers.
  const std::map<std::string, std::string>& field_aliases() const {
    return field_aliases_;
  }

 private:
  std::vector<TableSchema> tables_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<EdgeRef>> referrers_;
  std::map<std::string, std::string> field_aliases_;
};

namespace tables {
inline constexpr std::string_view kAcousticEnvironment = "ACOUSTIC_ENVIRONMENT";
inline constexpr std::string_view kDefects = "BOOK_DEFECTS";
inline constexpr std::string_view kDialects = "BOOK_DIALECTS";
inline constexpr std::string_view kEmotions = "BOOK_EMOTIONS";
inline constexpr std::string_view kLabialization = "BOOK_LABIALIZATION";
inline constexpr std::string_view kLocation = "BOOK_LOCATION";
inline constexpr std::string_view kRise = "BOOK_RISE";
inline constexpr std::string_view kRow = "BOOK_ROW";
inline constexpr std::string_view kSex = "BOOK_SEX";
inline constexpr std::string_view kSoft = "BOOK_SOFT";
inline constexpr std::string_view kSpeechTemps = "BOOK_SPEECH_TEMPS";
inline constexpr std::string_view kSpeechTypes = "BOOK_SPEECH_TYPES";
inline constexpr std::string_view kStressed = "BOOK_STRESSED";
inline constexpr std::string_view kUnitTypes = "BOOK_UNIT_TYPES";
inline constexpr std::string_view kVoiced = "BOOK_VOICED";
inline constexpr std::string_view kVoiceTypes = "BOOK_VOICE_TYPES";
inline constexpr std::string_view kWayOfOrigin = "BOOK_WAY_OF_ORIGIN";
inline constexpr std::string_view kClass = "CLASS";
// Spelled as in the original entity glossary.
inline constexpr std::string_view kChannel = "COMMUNICATION_CHANEL";
inline constexpr std::string_view kFileFormat = "FILE_FORMAT";
inline constexpr std::string_view kNoise = "NOISE";
inline constexpr std::string_view kRecordingDevice = "RECORDING_DEVICE";
inline constexpr std::string_view kSegmentation = "SEGMENTATION";
inline constexpr std::string_view kSickness = "SICKNESS";
inline constexpr std::string_view kSpeaker = "SPEAKER";
inline constexpr std::string_view kSpeechSignal = "SPEECH_SIGNAL";
inline constexpr std::string_view kSpeechUnit = "SPEECH_UNIT";
}  // namespace tables

// The 27-table speech corpus schema.
std::shared_ptr<const Schema> default_schema();

}  // namespace speechframe::store
