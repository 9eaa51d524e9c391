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

#include "speechframe/store.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace speechframe::store {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::function<void(const fs::path&)>& save_fault_hook() {
  static std::function<void(const fs::path&)> hook;
  return hook;
}

std::string display_key(const TableSchema& t, const Key& key) {
  std::string out;
  for (std::size_t i = 0; i < t.key_fields.size() && i < key.size(); ++i) {
    if (i) out += ',';
    out += t.key_fields[i] + "=" + to_display(key[i]);
  }
  return out;
}

// Checks one value against its field spec, widening integers for real-valued
// fields. Returns an error message, or empty on success.
std::string coerce(const FieldSpec& f, Value& v) {
  if (is_null(v)) return f.nullable ? "" : "field " + f.name + " is required";
  switch (f.type) {
    case FieldType::Integer:
      if (std::holds_alternative<std::int64_t>(v)) return "";
      break;
    case FieldType::Real:
    case FieldType::Duration: {
      if (const auto* i = std::get_if<std::int64_t>(&v)) v = static_cast<double>(*i);
      const auto* d = std::get_if<double>(&v);
      if (!d) break;
      if (!std::isfinite(*d)) return "field " + f.name + " is not finite";
      if (f.type == FieldType::Duration && *d < 0) {
        return "field " + f.name + " is a negative duration";
      }
      return "";
    }
    case FieldType::Text:
      if (std::holds_alternative<std::string>(v)) return "";
      break;
    case FieldType::Date:
      if (std::holds_alternative<Date>(v)) return "";
      break;
    case FieldType::Boolean:
      if (std::holds_alternative<bool>(v)) return "";
      break;
  }
  return "field " + f.name + " expects " + std::string(to_string(f.type)) + ", got " +
         to_display(v);
}

// Returns the record with exactly the schema's fields, or an error message.
std::string normalize_into(const TableSchema& t, Record in, Record& out) {
  for (const auto& [name, value] : in) {
    if (!t.find_field(name)) return "unknown field " + name + " for " + t.name;
  }
  out.clear();
  for (const auto& f : t.fields) {
    Value v;
    if (auto it = in.find(f.name); it != in.end()) v = std::move(it->second);
    if (auto err = coerce(f, v); !err.empty()) return err;
    out.emplace(f.name, std::move(v));
  }
  return "";
}

json value_to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, Date>) {
          return format_date(x);
        } else {
          return x;
        }
      },
      v);
}

// Interprets a JSON value as the given field type; no nullability check.
std::optional<Value> value_from_json(const FieldSpec& f, const json& j) {
  if (j.is_null()) return Value{};
  switch (f.type) {
    case FieldType::Integer:
      if (j.is_number_integer()) return Value{j.get<std::int64_t>()};
      break;
    case FieldType::Real:
    case FieldType::Duration:
      if (j.is_number()) return Value{j.get<double>()};
      break;
    case FieldType::Text:
      if (j.is_string()) return Value{j.get<std::string>()};
      break;
    case FieldType::Date:
      if (j.is_string()) {
        if (auto d = parse_date(j.get<std::string>())) return Value{*d};
      }
      break;
    case FieldType::Boolean:
      if (j.is_boolean()) return Value{j.get<bool>()};
      if (j.is_number_integer()) {
        auto i = j.get<std::int64_t>();
        if (i == 0 || i == 1) return Value{i == 1};
      }
      break;
  }
  return std::nullopt;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string manifest_text(const Schema& schema) {
  json m;
  m["format"] = kFormatName;
  m["schema_version"] = kSchemaVersion;
  json names = json::array();
  for (const auto& t : schema.tables()) names.push_back(t.name);
  m["tables"] = names;
  m["field_aliases"] = schema.field_aliases();
  m["alphabet"] = std::string(tables::kClass) + std::string(kTableSuffix);
  return m.dump(2) + "\n";
}

}  // namespace

std::string IntegrityViolation::to_string() const {
  std::string out = table;
  if (!row_key.empty()) out += " [" + row_key + "]";
  if (!edge.empty()) out += " (" + edge + ")";
  return out + ": " + message;
}

IntegrityError::IntegrityError(std::vector<IntegrityViolation> violations)
    : Error(ErrorCode::IntegrityViolations,
            [&] {
              std::string msg = std::to_string(violations.size()) + " integrity violation(s)";
              for (const auto& v : violations) msg += "\n  " + v.to_string();
              return msg;
            }()),
      violations_(std::move(violations)) {}

std::string format_record(const TableSchema& table, const Record& record) {
  json j = json::object();
  for (const auto& f : table.fields) j[f.name] = value_to_json(field(record, f.name));
  try {
    return j.dump();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, table.name + ": " + e.what());
  }
}

Record parse_record(const TableSchema& table, std::string_view line,
                    const std::string& source, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line_no, e.what());
  }
  if (!j.is_object()) throw ParseError(source, line_no, "record is not a JSON object");
  Record raw;
  for (const auto& [name, value] : j.items()) {
    const FieldSpec* f = table.find_field(name);
    if (!f) throw ParseError(source, line_no, "unknown field " + name + " for " + table.name);
    auto v = value_from_json(*f, value);
    if (!v) {
      throw ParseError(source, line_no,
                       "field " + name + " expects " + std::string(to_string(f->type)) +
                           ", got " + value.dump());
    }
    raw.emplace(name, std::move(*v));
  }
  Record out;
  if (auto err = normalize_into(table, std::move(raw), out); !err.empty()) {
    throw ParseError(source, line_no, err);
  }
  return out;
}

std::vector<Record> read_records(const TableSchema& table, const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
  std::vector<Record> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(table, line, file.string(), line_no));
  }
  return out;
}

namespace testing {
void set_save_fault_hook(std::function<void(const fs::path&)> hook) {
  save_fault_hook() = std::move(hook);
}
}  // namespace testing

CorpusHandle::CorpusHandle(std::shared_ptr<const Schema> schema)
    : schema_(std::move(schema)), tables_(schema_->size()) {}

const TableRows& CorpusHandle::rows(std::string_view table) const {
  return tables_[schema_->index_of(table)];
}

TableRows& CorpusHandle::mutable_rows(std::string_view table) {
  return tables_[schema_->index_of(table)];
}

const Record* CorpusHandle::find(std::string_view table, const Key& key) const {
  const auto& r = rows(table);
  auto it = r.find(key);
  return it == r.end() ? nullptr : &it->second;
}

Key CorpusHandle::key_of(std::string_view table, const Record& record) const {
  const TableSchema& t = schema_->table(table);
  Key key;
  key.reserve(t.key_fields.size());
  for (const auto& k : t.key_fields) key.push_back(field(record, k));
  return key;
}

Record CorpusHandle::normalize(const TableSchema& table, Record record) const {
  Record out;
  if (auto err = normalize_into(table, std::move(record), out); !err.empty()) {
    throw Error(ErrorCode::TypeMismatch, table.name + ": " + err);
  }
  return out;
}

void CorpusHandle::check_unique(const TableSchema& table, const TableRows& rows,
                                const Record& record, const Key* ignore) const {
  for (const auto& fields : table.unique_constraints) {
    bool has_null = false;
    for (const auto& f : fields) has_null = has_null || is_null(field(record, f));
    if (has_null) continue;
    for (const auto& [key, other] : rows) {
      if (ignore && key == *ignore) continue;
      bool same = std::all_of(fields.begin(), fields.end(), [&](const std::string& f) {
        return field(other, f) == field(record, f);
      });
      if (same) {
        std::string names;
        for (const auto& f : fields) names += (names.empty() ? "" : ",") + f;
        throw Error(ErrorCode::DuplicateKey, table.name + ": (" + names +
                                                 ") already used by row " +
                                                 display_key(table, key));
      }
    }
  }
}

void CorpusHandle::check_foreign_keys(const TableSchema& table, const Record& record) const {
  for (const auto& fk : table.foreign_keys) {
    const Value& v = field(record, fk.field);
    if (is_null(v)) continue;
    if (!find(fk.target_table, Key{v})) {
      throw Error(ErrorCode::DanglingForeignKey,
                  "dangling foreign key " + describe_edge(table, fk) + ": no row with " +
                      fk.target_field + "=" + to_display(v));
    }
  }
}

Key CorpusHandle::insert(std::string_view table, Record record) {
  const TableSchema& t = schema_->table(table);
  Record rec = normalize(t, std::move(record));
  Key key = key_of(table, rec);
  TableRows& rows = mutable_rows(table);
  if (rows.count(key)) {
    throw Error(ErrorCode::DuplicateKey,
                t.name + ": duplicate key " + display_key(t, key));
  }
  check_unique(t, rows, rec, nullptr);
  check_foreign_keys(t, rec);
  rows.emplace(key, std::move(rec));
  dirty_ = true;
  return key;
}

void CorpusHandle::update(std::string_view table, const Key& key, const Record& changes) {
  const TableSchema& t = schema_->table(table);
  const Record* existing = find(table, key);
  if (!existing) throw Error(ErrorCode::NotFound, t.name + ": no row " + display_key(t, key));
  Record merged = *existing;
  for (const auto& [name, value] : changes) {
    if (t.is_key_field(name) && !(field(merged, name) == value)) {
      throw Error(ErrorCode::InvalidArgument,
                  t.name + ": key field " + name + " changes through update_key_cascade");
    }
    merged[name] = value;
  }
  Record rec = normalize(t, std::move(merged));
  TableRows& rows = mutable_rows(table);
  check_unique(t, rows, rec, &key);
  check_foreign_keys(t, rec);
  rows[key] = std::move(rec);
  dirty_ = true;
}

DeletionCounts CorpusHandle::delete_cascade(std::string_view table, const Key& key) {
  const TableSchema& root_table = schema_->table(table);
  if (!find(table, key)) {
    throw Error(ErrorCode::NotFound,
                root_table.name + ": no row " + display_key(root_table, key));
  }

  using RowRef = std::pair<std::size_t, Key>;
  std::set<RowRef> doomed;
  std::deque<RowRef> pending;
  struct Blocker {
    RowRef row;
    std::string message;
  };
  std::vector<Blocker> blockers;

  // Referring rows grouped by FK value, built on first use per edge.
  std::map<const ForeignKey*, std::multimap<Value, Key>> edge_index;
  auto referring = [&](const EdgeRef& e) -> const std::multimap<Value, Key>& {
    auto [it, fresh] = edge_index.try_emplace(e.fk);
    if (fresh) {
      for (const auto& [k, r] : rows(e.table->name)) {
        const Value& v = field(r, e.fk->field);
        if (!is_null(v)) it->second.emplace(v, k);
      }
    }
    return it->second;
  };

  RowRef start{schema_->index_of(table), key};
  doomed.insert(start);
  pending.push_back(start);
  while (!pending.empty()) {
    RowRef current = pending.front();
    pending.pop_front();
    const TableSchema& t = schema_->tables()[current.first];
    const Record& rec = tables_[current.first].at(current.second);
    for (const EdgeRef& e : schema_->referrers(t.name)) {
      const Value& target_value = field(rec, e.fk->target_field);
      auto [lo, hi] = referring(e).equal_range(target_value);
      for (auto it = lo; it != hi; ++it) {
        RowRef ref{schema_->index_of(e.table->name), it->second};
        if (e.fk->policy == CascadePolicy::Restrict) {
          blockers.push_back({ref, t.name + " row " + display_key(t, current.second) +
                                       " is referenced by " + e.table->name + " row " +
                                       display_key(*e.table, it->second) + " via " +
                                       describe_edge(*e.table, *e.fk)});
        } else if (doomed.insert(ref).second) {
          pending.push_back(ref);
        }
      }
    }
  }

  for (const auto& b : blockers) {
    if (!doomed.count(b.row)) throw Error(ErrorCode::Restricted, "cannot delete: " + b.message);
  }

  DeletionCounts counts;
  for (const auto& [ti, k] : doomed) {
    tables_[ti].erase(k);
    ++counts[schema_->tables()[ti].name];
  }
  dirty_ = true;
  return counts;
}

std::size_t CorpusHandle::update_key_cascade(std::string_view table, const Key& old_key,
                                             const Key& new_key) {
  const TableSchema& t = schema_->table(table);
  TableRows& rows = mutable_rows(table);
  auto old_it = rows.find(old_key);
  if (old_it == rows.end()) {
    throw Error(ErrorCode::NotFound, t.name + ": no row " + display_key(t, old_key));
  }
  if (new_key.size() != t.key_fields.size()) {
    throw Error(ErrorCode::TypeMismatch, t.name + ": key needs " +
                                             std::to_string(t.key_fields.size()) + " value(s)");
  }
  Record moved = old_it->second;
  for (std::size_t i = 0; i < new_key.size(); ++i) moved[t.key_fields[i]] = new_key[i];
  moved = normalize(t, std::move(moved));
  Key target = key_of(table, moved);
  if (target == old_key) return 0;
  if (rows.count(target)) {
    throw Error(ErrorCode::KeyCollision, t.name + ": key " + display_key(t, target) +
                                             " is already in use");
  }
  check_unique(t, rows, moved, &old_key);
  check_foreign_keys(t, moved);

  const Value old_value = old_key.size() == 1 ? old_key.front() : Value{};
  rows.erase(old_it);
  rows.emplace(target, std::move(moved));

  std::size_t rewritten = 0;
  if (t.key_fields.size() == 1) {
    const Value& new_value = target.front();
    for (const EdgeRef& e : schema_->referrers(t.name)) {
      TableRows& ref_rows = mutable_rows(e.table->name);
      std::vector<Key> hits;
      for (const auto& [k, r] : ref_rows) {
        if (field(r, e.fk->field) == old_value) hits.push_back(k);
      }
      for (const Key& k : hits) {
        auto node = ref_rows.extract(k);
        node.mapped()[e.fk->field] = new_value;
        if (e.table->is_key_field(e.fk->field)) node.key() = key_of(e.table->name, node.mapped());
        ref_rows.insert(std::move(node));
        ++rewritten;
      }
    }
  }
  dirty_ = true;
  return rewritten;
}

std::vector<IntegrityViolation> CorpusHandle::integrity_check() const {
  std::vector<IntegrityViolation> out;
  for (std::size_t ti = 0; ti < schema_->size(); ++ti) {
    const TableSchema& t = schema_->tables()[ti];
    const TableRows& table_rows = tables_[ti];
    for (const auto& [key, rec] : table_rows) {
      std::string row_key = display_key(t, key);
      for (std::size_t i = 0; i < t.key_fields.size(); ++i) {
        if (i >= key.size() || is_null(key[i])) {
          out.push_back({t.name, row_key, "", "incomplete key: " + t.key_fields[i] + " is null"});
        }
      }
      if (key != key_of(t.name, rec)) {
        out.push_back({t.name, row_key, "", "stored key disagrees with record fields"});
      }
      for (const auto& fk : t.foreign_keys) {
        const Value& v = field(rec, fk.field);
        if (is_null(v)) continue;
        if (!find(fk.target_table, Key{v})) {
          out.push_back({t.name, row_key, describe_edge(t, fk),
                         "dangling reference " + fk.field + "=" + to_display(v)});
        }
      }
    }
    for (const auto& fields : t.unique_constraints) {
      std::map<std::vector<Value>, Key> seen;
      for (const auto& [key, rec] : table_rows) {
        std::vector<Value> tuple;
        bool has_null = false;
        for (const auto& f : fields) {
          tuple.push_back(field(rec, f));
          has_null = has_null || is_null(tuple.back());
        }
        if (has_null) continue;
        auto [it, fresh] = seen.emplace(tuple, key);
        if (!fresh) {
          out.push_back({t.name, display_key(t, key), "",
                         "duplicates unique value of row " + display_key(t, it->second)});
        }
      }
    }
  }
  return out;
}

void CorpusHandle::write_to(const fs::path& root) const {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + root.string() + ": " + ec.message());

  // Every temp file is complete before any live file is replaced, so a failure
  // while writing leaves the previous state loadable.
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto stage = [&](const fs::path& live, const std::string& content) {
    fs::path tmp = live;
    tmp += ".tmp";
    if (auto& hook = save_fault_hook()) hook(tmp);
    write_file(tmp, content);
    staged.emplace_back(tmp, live);
  };
  for (std::size_t ti = 0; ti < schema_->size(); ++ti) {
    const TableSchema& t = schema_->tables()[ti];
    std::string content;
    for (const auto& [key, rec] : tables_[ti]) {
      content += format_record(t, rec);
      content += '\n';
    }
    stage(root / (t.name + std::string(kTableSuffix)), content);
  }
  stage(root / kManifestFile, manifest_text(*schema_));
  for (const auto& [tmp, live] : staged) {
    fs::rename(tmp, live, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot replace " + live.string() + ": " + ec.message());
  }
}

void CorpusHandle::save() {
  if (!root_) throw Error(ErrorCode::IoError, "corpus has no root directory; use save_as");
  write_to(*root_);
  dirty_ = false;
}

void CorpusHandle::save_as(const fs::path& root) {
  write_to(root);
  root_ = root;
  dirty_ = false;
}

CorpusHandle CorpusHandle::open(const fs::path& root, OpenOptions options) {
  const fs::path manifest_path = root / kManifestFile;
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorCode::MissingManifest, "no " + std::string(kManifestFile) + " in " + root.string());
  }
  json manifest;
  {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + manifest_path.string());
    try {
      manifest = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(manifest_path.string(), 0, e.what());
    }
  }
  if (!manifest.is_object() || manifest.value("format", "") != kFormatName) {
    throw Error(ErrorCode::SchemaVersionMismatch, manifest_path.string() + " is not a " +
                                                      std::string(kFormatName) + " manifest");
  }
  if (!manifest.contains("schema_version") || !manifest["schema_version"].is_number_integer() ||
      manifest["schema_version"].get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                "schema version " +
                    (manifest.contains("schema_version") ? manifest["schema_version"].dump()
                                                         : std::string("(missing)")) +
                    " does not match supported version " + std::to_string(kSchemaVersion));
  }

  CorpusHandle h(default_schema());
  std::set<std::string> listed;
  if (manifest.contains("tables") && manifest["tables"].is_array()) {
    for (const auto& n : manifest["tables"]) {
      if (n.is_string()) listed.insert(n.get<std::string>());
    }
  }
  std::set<std::string> expected;
  for (const auto& t : h.schema().tables()) expected.insert(t.name);
  if (listed != expected) {
    throw Error(ErrorCode::SchemaVersionMismatch, "manifest table list does not match the schema");
  }

  std::vector<IntegrityViolation> load_violations;
  for (std::size_t ti = 0; ti < h.schema().size(); ++ti) {
    const TableSchema& t = h.schema().tables()[ti];
    const fs::path file = root / (t.name + std::string(kTableSuffix));
    if (!fs::exists(file)) throw Error(ErrorCode::IoError, "missing table file " + file.string());
    for (auto& rec : read_records(t, file)) {
      Key key = h.key_of(t.name, rec);
      if (!h.tables_[ti].emplace(key, std::move(rec)).second) {
        load_violations.push_back({t.name, display_key(t, key), "", "duplicate key in file"});
      }
    }
  }
  if (!options.repair) {
    auto violations = h.integrity_check();
    load_violations.insert(load_violations.end(), violations.begin(), violations.end());
    if (!load_violations.empty()) throw IntegrityError(std::move(load_violations));
  }
  h.root_ = root;
  h.dirty_ = false;
  return h;
}

}  // namespace speechframe::store
