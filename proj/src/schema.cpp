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

#include "speechframe/schema.hpp"

#include <algorithm>
#include <set>

#include "speechframe/error.hpp"

namespace speechframe::store {

std::string_view to_string(FieldType type) {
  switch (type) {
    case FieldType::Integer: return "integer";
    case FieldType::Real: return "real";
    case FieldType::Text: return "text";
    case FieldType::Date: return "date";
    case FieldType::Duration: return "duration";
    case FieldType::Boolean: return "boolean";
  }
  return "?";
}

const FieldSpec* TableSchema::find_field(std::string_view field_name) const {
  for (const auto& f : fields) {
    if (f.name == field_name) return &f;
  }
  return nullptr;
}

const ForeignKey* TableSchema::find_foreign_key(std::string_view field_name) const {
  for (const auto& fk : foreign_keys) {
    if (fk.field == field_name) return &fk;
  }
  return nullptr;
}

bool TableSchema::is_key_field(std::string_view field_name) const {
  return std::find(key_fields.begin(), key_fields.end(), field_name) != key_fields.end();
}

std::string describe_edge(const TableSchema& table, const ForeignKey& fk) {
  return table.name + "." + fk.field + " -> " + fk.target_table + "." + fk.target_field;
}

Schema::Schema(std::vector<TableSchema> tables,
               std::map<std::string, std::string> field_aliases)
    : tables_(std::move(tables)), field_aliases_(std::move(field_aliases)) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "schema: " + what);
  };
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    const auto& t = tables_[i];
    if (!index_.emplace(t.name, i).second) fail("duplicate table " + t.name);
    if (t.key_fields.empty()) fail(t.name + " has no key fields");
    std::set<std::string> names;
    for (const auto& f : t.fields) {
      if (!names.insert(f.name).second) fail(t.name + " repeats field " + f.name);
    }
    for (const auto& k : t.key_fields) {
      const FieldSpec* f = t.find_field(k);
      if (!f) fail(t.name + " key field " + k + " is not a field");
      if (f->nullable) fail(t.name + " key field " + k + " is nullable");
    }
    for (const auto& u : t.unique_constraints) {
      for (const auto& k : u) {
        if (!t.find_field(k)) fail(t.name + " unique field " + k + " is not a field");
      }
    }
  }
  referrers_.resize(tables_.size());
  for (const auto& t : tables_) {
    for (const auto& fk : t.foreign_keys) {
      if (!t.find_field(fk.field)) fail(t.name + " foreign key on unknown field " + fk.field);
      auto it = index_.find(fk.target_table);
      if (it == index_.end()) fail(describe_edge(t, fk) + " targets an unknown table");
      const auto& target = tables_[it->second];
      if (target.key_fields.size() != 1 || target.key_fields.front() != fk.target_field) {
        fail(describe_edge(t, fk) + " must target the single key field of " + target.name);
      }
      if (target.find_field(fk.target_field)->type != t.find_field(fk.field)->type) {
        fail(describe_edge(t, fk) + " joins fields of different types");
      }
      referrers_[it->second].push_back(EdgeRef{&t, &fk});
    }
  }
}

const TableSchema* Schema::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &tables_[it->second];
}

const TableSchema& Schema::table(std::string_view name) const {
  const TableSchema* t = find(name);
  if (!t) throw Error(ErrorCode::UnknownTable, "unknown table " + std::string(name));
  return *t;
}

std::size_t Schema::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error(ErrorCode::UnknownTable, "unknown table " + std::string(name));
  return it->second;
}

const std::vector<EdgeRef>& Schema::referrers(std::string_view target) const {
  return referrers_[index_of(target)];
}

namespace {

using FT = FieldType;

FieldSpec req(std::string name, FT type) { return {std::move(name), type, false}; }
FieldSpec opt(std::string name, FT type) { return {std::move(name), type, true}; }

ForeignKey restrict_fk(std::string field, std::string_view table, std::string target_field) {
  return {std::move(field), std::string(table), std::move(target_field), CascadePolicy::Restrict};
}

ForeignKey cascade_fk(std::string field, std::string_view table, std::string target_field) {
  return {std::move(field), std::string(table), std::move(target_field), CascadePolicy::Cascade};
}

// Code + TITLE vocabulary.
TableSchema simple_book(std::string_view name, std::string id_field) {
  TableSchema t;
  t.name = std::string(name);
  t.fields = {req(id_field, FT::Integer), req("TITLE", FT::Text)};
  t.key_fields = {id_field};
  t.unique_constraints = {{"TITLE"}};
  return t;
}

Schema build_default_schema() {
  std::vector<TableSchema> ts;

  {
    TableSchema t;
    t.name = std::string(tables::kAcousticEnvironment);
    t.fields = {req("ENVIRONMENT_ID", FT::Integer), req("NOISE_LEVEL_DB", FT::Real),
                req("TITLE", FT::Text)};
    t.key_fields = {"ENVIRONMENT_ID"};
    t.unique_constraints = {{"TITLE"}};
    ts.push_back(std::move(t));
  }
  ts.push_back(simple_book(tables::kDefects, "ID_DEFECT"));
  {
    TableSchema t;
    t.name = std::string(tables::kDialects);
    t.fields = {req("ID_DIALECT", FT::Integer), req("TITLE", FT::Text),
                req("LANGUAGE", FT::Text)};
    t.key_fields = {"ID_DIALECT"};
    t.unique_constraints = {{"TITLE", "LANGUAGE"}};
    ts.push_back(std::move(t));
  }
  ts.push_back(simple_book(tables::kEmotions, "ID_EMOTION"));
  ts.push_back(simple_book(tables::kLabialization, "ID"));
  ts.push_back(simple_book(tables::kLocation, "ID"));
  ts.push_back(simple_book(tables::kRise, "ID"));
  ts.push_back(simple_book(tables::kRow, "ID"));
  ts.push_back(simple_book(tables::kSex, "ID"));
  ts.push_back(simple_book(tables::kSoft, "SOFT_ID"));
  {
    // A null SOUNDS_PER_SECOND is the open-ended top band.
    TableSchema t;
    t.name = std::string(tables::kSpeechTemps);
    t.fields = {req("ID", FT::Integer), req("SPEED", FT::Text),
                opt("SOUNDS_PER_SECOND", FT::Integer)};
    t.key_fields = {"ID"};
    t.unique_constraints = {{"SPEED"}};
    ts.push_back(std::move(t));
  }
  ts.push_back(simple_book(tables::kSpeechTypes, "ID"));
  ts.push_back(simple_book(tables::kStressed, "ID_STRESSED"));
  ts.push_back(simple_book(tables::kUnitTypes, "TYPE_ID"));
  ts.push_back(simple_book(tables::kVoiced, "VOICED_ID"));
  ts.push_back(simple_book(tables::kVoiceTypes, "ID"));
  ts.push_back(simple_book(tables::kWayOfOrigin, "ID"));
  {
    TableSchema t;
    t.name = std::string(tables::kClass);
    t.fields = {req("SYMBOL", FT::Text),        req("STRESSED", FT::Integer),
                req("VOCALIZED", FT::Boolean),  opt("SOFT", FT::Integer),
                opt("VOICED", FT::Integer),     opt("LOCATION", FT::Integer),
                opt("WAY_OF_ORIGIN", FT::Integer), opt("LABIALIZATION", FT::Integer),
                opt("RISE", FT::Integer),       opt("ROW", FT::Integer)};
    t.key_fields = {"SYMBOL"};
    t.foreign_keys = {restrict_fk("STRESSED", tables::kStressed, "ID_STRESSED"),
                      restrict_fk("SOFT", tables::kSoft, "SOFT_ID"),
                      restrict_fk("VOICED", tables::kVoiced, "VOICED_ID"),
                      restrict_fk("LOCATION", tables::kLocation, "ID"),
                      restrict_fk("WAY_OF_ORIGIN", tables::kWayOfOrigin, "ID"),
                      restrict_fk("LABIALIZATION", tables::kLabialization, "ID"),
                      restrict_fk("RISE", tables::kRise, "ID"),
                      restrict_fk("ROW", tables::kRow, "ID")};
    ts.push_back(std::move(t));
  }
  ts.push_back(simple_book(tables::kChannel, "ID"));
  {
    TableSchema t;
    t.name = std::string(tables::kFileFormat);
    t.fields = {req("ID", FT::Integer), req("DISCRETIZATION_FREQUENCY", FT::Real),
                req("BITRATE", FT::Integer), req("FILE_TYPE", FT::Text),
                req("NUMBER_OF_CHANNELS", FT::Integer)};
    t.key_fields = {"ID"};
    ts.push_back(std::move(t));
  }
  {
    TableSchema t;
    t.name = std::string(tables::kNoise);
    t.fields = {req("ID_NOISE", FT::Integer), req("NOISE_TYPE", FT::Text),
                opt("SNR_DB", FT::Real)};
    t.key_fields = {"ID_NOISE"};
    t.unique_constraints = {{"NOISE_TYPE"}};
    ts.push_back(std::move(t));
  }
  {
    TableSchema t;
    t.name = std::string(tables::kRecordingDevice);
    t.fields = {req("DEVICE_ID", FT::Integer), req("TYPE", FT::Text),
                req("BANDWIDTH", FT::Real)};
    t.key_fields = {"DEVICE_ID"};
    ts.push_back(std::move(t));
  }
  {
    // SOURCE distinguishes manual from automatic segmentation of one signal.
    TableSchema t;
    t.name = std::string(tables::kSegmentation);
    t.fields = {req("POSITION", FT::Integer), req("FILENAME", FT::Text),
                req("START_AUDIO", FT::Real),  req("TYPE_ID", FT::Text),
                req("SOURCE", FT::Text),       opt("EXPERT_COUNT", FT::Integer)};
    t.key_fields = {"POSITION", "FILENAME", "SOURCE"};
    t.foreign_keys = {cascade_fk("FILENAME", tables::kSpeechSignal, "FILE_NAME"),
                      restrict_fk("TYPE_ID", tables::kClass, "SYMBOL")};
    ts.push_back(std::move(t));
  }
  ts.push_back(simple_book(tables::kSickness, "ID_SICKNESS"));
  {
    TableSchema t;
    t.name = std::string(tables::kSpeaker);
    t.fields = {req("ID", FT::Integer),      req("SEX", FT::Integer),
                req("NAME", FT::Text),       req("SURNAME", FT::Text),
                req("FAMILY_NAME", FT::Text), req("BIRTH_DATE", FT::Date)};
    t.key_fields = {"ID"};
    t.foreign_keys = {restrict_fk("SEX", tables::kSex, "ID")};
    ts.push_back(std::move(t));
  }
  {
    TableSchema t;
    t.name = std::string(tables::kSpeechSignal);
    t.fields = {req("FILE_NAME", FT::Text),
                req("SPEECH_UNIT_ID", FT::Integer),
                req("LENGTH", FT::Duration),
                req("RECORD_DATE", FT::Date),
                req("FILE_FORMAT", FT::Integer),
                req("SYNTHETIC_NOISE_TYPE", FT::Integer),
                req("RECORDING_DEVICE", FT::Integer),
                req("DIALECT_ID", FT::Integer),
                req("ACOUSTIC_ENVIRONMENT", FT::Integer),
                opt("SPEECH_TYPE_ID", FT::Integer),
                req("VOICE_TYPE_ID", FT::Integer),
                req("SPEECH_TEMP_ID", FT::Integer),
                opt("CHANNEL", FT::Integer),
                opt("SPEECH_SICKNESS", FT::Integer),
                req("ACIENT", FT::Boolean),
                opt("SPEECH_DEFECT", FT::Integer),
                req("EMOTIONAL_STATE", FT::Integer),
                req("SPEAKER_ID", FT::Integer)};
    t.key_fields = {"FILE_NAME"};
    t.foreign_keys = {
        cascade_fk("SPEECH_UNIT_ID", tables::kSpeechUnit, "ID"),
        restrict_fk("FILE_FORMAT", tables::kFileFormat, "ID"),
        restrict_fk("SYNTHETIC_NOISE_TYPE", tables::kNoise, "ID_NOISE"),
        restrict_fk("RECORDING_DEVICE", tables::kRecordingDevice, "DEVICE_ID"),
        restrict_fk("DIALECT_ID", tables::kDialects, "ID_DIALECT"),
        restrict_fk("ACOUSTIC_ENVIRONMENT", tables::kAcousticEnvironment, "ENVIRONMENT_ID"),
        restrict_fk("SPEECH_TYPE_ID", tables::kSpeechTypes, "ID"),
        restrict_fk("VOICE_TYPE_ID", tables::kVoiceTypes, "ID"),
        restrict_fk("SPEECH_TEMP_ID", tables::kSpeechTemps, "ID"),
        restrict_fk("CHANNEL", tables::kChannel, "ID"),
        restrict_fk("SPEECH_SICKNESS", tables::kSickness, "ID_SICKNESS"),
        restrict_fk("SPEECH_DEFECT", tables::kDefects, "ID_DEFECT"),
        restrict_fk("EMOTIONAL_STATE", tables::kEmotions, "ID_EMOTION"),
        cascade_fk("SPEAKER_ID", tables::kSpeaker, "ID")};
    ts.push_back(std::move(t));
  }
  {
    TableSchema t;
    t.name = std::string(tables::kSpeechUnit);
    t.fields = {req("ID", FT::Integer), req("SPELLING_RECORD", FT::Text),
                req("TRANSCRIPTION", FT::Text), req("UNIT_TYPE", FT::Integer)};
    t.key_fields = {"ID"};
    t.foreign_keys = {restrict_fk("UNIT_TYPE", tables::kUnitTypes, "TYPE_ID")};
    ts.push_back(std::move(t));
  }

  return Schema(std::move(ts),
                {{"ACOUSTIC_ENVIRONMENT.NOISE_LEVEL_DB", "NOISE_LEVEL(DB)"},
                 {"NOISE.SNR_DB", "SIGNAL/NOISE_RATIO(DB)"}});
}

}  // namespace

std::shared_ptr<const Schema> default_schema() {
  static const auto schema = std::make_shared<const Schema>(build_default_schema());
  return schema;
}

}  // namespace speechframe::store
