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

// In-memory relational store with key enforcement, cascading deletes and key
// updates, and a directory-of-JSONL persistence format:
//
//   <root>/corpus.manifest      format, schema version, tables, field aliases
//   <root>/<TABLE_NAME>.jsonl   one JSON object per line, trailing newline
//
// A handle is single-writer / multi-reader. Nothing here locks across
// processes.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "speechframe/error.hpp"
#include "speechframe/schema.hpp"
#include "speechframe/value.hpp"

namespace speechframe::store {

inline constexpr std::string_view kManifestFile = "corpus.manifest";
inline constexpr std::string_view kTableSuffix = ".jsonl";

using TableRows = std::map<Key, Record>;

// Rows removed per table by delete_cascade. Tables with no removals are absent.
using DeletionCounts = std::map<std::string, std::size_t>;

struct IntegrityViolation {
  std::string table;
  std::string row_key;  // display form, e.g. "FILE_NAME=a.wav"
  std::string edge;     // e.g. "SPEECH_SIGNAL.SPEAKER_ID -> SPEAKER.ID"; may be empty
  std::string message;

  std::string to_string() const;
  friend bool operator==(const IntegrityViolation&,
                         const IntegrityViolation&) = default;
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(std::vector<IntegrityViolation> violations);
  const std::vector<IntegrityViolation>& violations() const {
    return violations_;
  }

 private:
  std::vector<IntegrityViolation> violations_;
};

struct OpenOptions {
  // Load a corpus even when integrity_check reports violations, so it can be
  // inspected and fixed. Duplicate or incomplete keys are still dropped.
  bool repair = false;
};

class CorpusHandle {
 public:
  explicit CorpusHandle(std::shared_ptr<const Schema> schema = default_schema());

  // Throws Error(MissingManifest | SchemaVersionMismatch | IoError),
  // ParseError, or IntegrityError (unless options.repair).
  static CorpusHandle open(const std::filesystem::path& root,
                           OpenOptions options = {});

  const Schema& schema() const { return *schema_; }
  const std::optional<std::filesystem::path>& root() const { return root_; }
  bool dirty() const { return dirty_; }

  // Validates types, nullability, key uniqueness, unique constraints and
  // foreign keys. Integer values are widened for Real/Duration fields.
  // Throws Error(UnknownTable | TypeMismatch | DuplicateKey |
  // DanglingForeignKey).
  Key insert(std::string_view table, Record record);

  // Rewrites non-key fields of an existing row. Key changes go through
  // update_key_cascade. Same checks as insert.
  void update(std::string_view table, const Key& key, const Record& changes);

  // Removes the row and every row reachable along cascade edges. A restrict
  // edge anywhere in that closure aborts with Error(Restricted) and leaves the
  // handle untouched.
  DeletionCounts delete_cascade(std::string_view table, const Key& key);

  // Replaces a primary key and rewrites every foreign key that referenced it,
  // returning the number of rewritten references.
  // Throws Error(NotFound | KeyCollision | TypeMismatch).
  std::size_t update_key_cascade(std::string_view table, const Key& old_key,
                                 const Key& new_key);

  std::vector<IntegrityViolation> integrity_check() const;

  // Writes every table (temp file then rename) and the manifest under root().
  void save();
  // Same as save(), but to a new root which becomes this handle's root.
  void save_as(const std::filesystem::path& root);

  const TableRows& rows(std::string_view table) const;
  const Record* find(std::string_view table, const Key& key) const;
  std::size_t size(std::string_view table) const { return rows(table).size(); }

  // Builds the key of `record` for `table`.
  Key key_of(std::string_view table, const Record& record) const;

 private:
  TableRows& mutable_rows(std::string_view table);
  Record normalize(const TableSchema& table, Record record) const;
  void check_unique(const TableSchema& table, const TableRows& rows,
                    const Record& record, const Key* ignore) const;
  void check_foreign_keys(const TableSchema& table, const Record& record) const;
  void write_to(const std::filesystem::path& root) const;

  std::shared_ptr<const Schema> schema_;
  std::vector<TableRows> tables_;
  std::optional<std::filesystem::path> root_;
  bool dirty_ = false;
};

// Line-level record codec shared by table files, imports, and the CLI's
// machine-readable output. Field names are written in sorted order.
std::string format_record(const TableSchema& table, const Record& record);
// Returns a record holding every schema field (absent optional fields become
// null). Throws ParseError for malformed JSON, unknown fields, missing
// required fields, and wrongly typed values; `source`/`line_no` label it.
Record parse_record(const TableSchema& table, std::string_view line,
                    const std::string& source = "<input>", std::size_t line_no = 0);

// Reads a whole line-delimited file; blank lines are skipped.
std::vector<Record> read_records(const TableSchema& table,
                                 const std::filesystem::path& file);

namespace testing {
// Called with each temp file path just before it is written during save.
// Throwing from the hook simulates an interrupted save.
void set_save_fault_hook(std::function<void(const std::filesystem::path&)> hook);
}  // namespace testing

}  // namespace speechframe::store
