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

#include "speechframe/refbooks.hpp"

#include <algorithm>
#include <cmath>

#include "speechframe/error.hpp"
#include "speechframe/store.hpp"

namespace speechframe::refbooks {

namespace {

namespace tn = store::tables;

constexpr std::string_view kSimpleBooks[] = {
    tn::kDefects,    tn::kEmotions,   tn::kLabialization, tn::kLocation,
    tn::kRise,       tn::kRow,        tn::kSex,           tn::kSoft,
    tn::kSpeechTypes, tn::kStressed,  tn::kUnitTypes,     tn::kVoiced,
    tn::kVoiceTypes, tn::kWayOfOrigin, tn::kChannel,      tn::kSickness,
};

constexpr std::string_view kTypedBooks[] = {
    tn::kAcousticEnvironment, tn::kDialects, tn::kSpeechTemps,
    tn::kFileFormat,          tn::kNoise,    tn::kRecordingDevice,
};

[[noreturn]] void invalid(std::string_view book, const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, std::string(book) + ": " + what);
}

template <typename Entry>
void insert_sorted(std::vector<Entry>& book, Entry e) {
  auto pos = std::upper_bound(book.begin(), book.end(), e.code,
                              [](std::int64_t c, const Entry& x) { return c < x.code; });
  book.insert(pos, std::move(e));
}

// Validates or assigns the code of a new entry.
template <typename Entry>
std::int64_t resolve_code(std::string_view book, const std::vector<Entry>& entries,
                          std::int64_t requested) {
  if (book == tn::kNoise && requested == kNoNoise) {
    throw Error(ErrorCode::ReservedCode,
                "NOISE code 0 is reserved for the no-noise profile");
  }
  if (requested == kAssignCode) {
    std::int64_t next = 1;
    for (const auto& e : entries) next = std::max(next, e.code + 1);
    return next;
  }
  if (requested < 0) invalid(book, "negative code " + std::to_string(requested));
  for (const auto& e : entries) {
    if (e.code == requested) {
      throw Error(ErrorCode::DuplicateKey,
                  std::string(book) + ": code " + std::to_string(requested) + " already used");
    }
  }
  return requested;
}

void duplicate_title(std::string_view book, const std::string& title) {
  throw Error(ErrorCode::DuplicateTitle,
              std::string(book) + ": title \"" + title + "\" already present");
}

std::string title_of(const AcousticEnvironment& e) { return e.title; }
std::string title_of(const Dialect& d) { return d.title; }
std::string title_of(const SpeechTempo& t) { return t.name; }
std::string title_of(const FileFormat& f) { return f.file_type; }
std::string title_of(const NoiseProfile& n) { return n.description; }
std::string title_of(const RecordingDevice& d) { return d.device_type; }

template <typename Entry>
std::vector<RefEntry> project(const std::vector<Entry>& entries) {
  std::vector<RefEntry> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back({e.code, title_of(e)});
  return out;
}

const std::string& id_field(std::string_view book) {
  return store::default_schema()->table(book).key_fields.front();
}

}  // namespace

ReferenceRegistry::ReferenceRegistry() {
  for (auto book : kSimpleBooks) simple_.emplace(std::string(book), std::vector<RefEntry>{});
  noises_.push_back({kNoNoise, "no noise", std::nullopt});
}

std::vector<std::string> ReferenceRegistry::book_names() const {
  std::vector<std::string> out;
  for (auto b : kSimpleBooks) out.emplace_back(b);
  for (auto b : kTypedBooks) out.emplace_back(b);
  std::sort(out.begin(), out.end());
  return out;
}

bool ReferenceRegistry::has_book(std::string_view book) const {
  return simple_.count(book) ||
         std::find(std::begin(kTypedBooks), std::end(kTypedBooks), book) != std::end(kTypedBooks);
}

std::vector<RefEntry> ReferenceRegistry::entries(std::string_view book) const {
  if (auto it = simple_.find(book); it != simple_.end()) return it->second;
  if (book == tn::kAcousticEnvironment) return project(environments_);
  if (book == tn::kDialects) return project(dialects_);
  if (book == tn::kSpeechTemps) return project(tempos_);
  if (book == tn::kFileFormat) return project(file_formats_);
  if (book == tn::kNoise) return project(noises_);
  if (book == tn::kRecordingDevice) return project(devices_);
  throw Error(ErrorCode::UnknownBook, "unknown reference book " + std::string(book));
}

RefEntry ReferenceRegistry::lookup(std::string_view book, std::int64_t code) const {
  for (auto& e : entries(book)) {
    if (e.code == code) return e;
  }
  throw Error(ErrorCode::UnknownCode,
              std::string(book) + " has no entry with code " + std::to_string(code));
}

bool ReferenceRegistry::contains(std::string_view book, std::int64_t code) const {
  auto all = entries(book);
  return std::any_of(all.begin(), all.end(), [&](const RefEntry& e) { return e.code == code; });
}

std::optional<std::int64_t> ReferenceRegistry::find_code(std::string_view book,
                                                         std::string_view title) const {
  for (auto& e : entries(book)) {
    if (e.title == title) return e.code;
  }
  return std::nullopt;
}

std::int64_t ReferenceRegistry::add_entry(std::string_view book, RefEntry entry) {
  if (book == tn::kNoise) return add_noise({entry.code, entry.title, std::nullopt});
  auto it = simple_.find(book);
  if (it == simple_.end()) {
    if (has_book(book)) invalid(book, "entries carry extra attributes; use the typed adder");
    throw Error(ErrorCode::UnknownBook, "unknown reference book " + std::string(book));
  }
  if (entry.title.empty()) invalid(book, "empty title");
  for (const auto& e : it->second) {
    if (e.title == entry.title) duplicate_title(book, entry.title);
  }
  entry.code = resolve_code(book, it->second, entry.code);
  insert_sorted(it->second, entry);
  return entry.code;
}

std::int64_t ReferenceRegistry::add_environment(AcousticEnvironment e) {
  const auto book = tn::kAcousticEnvironment;
  if (e.title.empty()) invalid(book, "empty title");
  if (!std::isfinite(e.noise_level_db) || e.noise_level_db < 0) {
    invalid(book, "noise level must be a non-negative number of decibels");
  }
  for (const auto& x : environments_) {
    if (x.title == e.title) duplicate_title(book, e.title);
  }
  e.code = resolve_code(book, environments_, e.code);
  insert_sorted(environments_, e);
  return e.code;
}

std::int64_t ReferenceRegistry::add_dialect(Dialect d) {
  const auto book = tn::kDialects;
  if (d.title.empty() || d.language.empty()) invalid(book, "title and language are required");
  for (const auto& x : dialects_) {
    if (x.title == d.title && x.language == d.language) duplicate_title(book, d.title);
  }
  d.code = resolve_code(book, dialects_, d.code);
  insert_sorted(dialects_, d);
  return d.code;
}

std::int64_t ReferenceRegistry::add_tempo(SpeechTempo t) {
  const auto book = tn::kSpeechTemps;
  if (t.name.empty()) invalid(book, "empty name");
  if (t.sounds_per_second_ceiling && *t.sounds_per_second_ceiling <= 0) {
    invalid(book, "ceiling must be positive");
  }
  for (const auto& x : tempos_) {
    if (x.name == t.name) duplicate_title(book, t.name);
    if (x.sounds_per_second_ceiling == t.sounds_per_second_ceiling) {
      invalid(book, t.sounds_per_second_ceiling
                        ? "ceiling " + std::to_string(*t.sounds_per_second_ceiling) + " already used"
                        : std::string("only one open-ended band is allowed"));
    }
  }
  t.code = resolve_code(book, tempos_, t.code);
  insert_sorted(tempos_, t);
  return t.code;
}

std::int64_t ReferenceRegistry::add_file_format(FileFormat f) {
  const auto book = tn::kFileFormat;
  if (f.file_type.empty()) invalid(book, "empty file type");
  if (!(f.sampling_frequency_hz > 0) || !std::isfinite(f.sampling_frequency_hz)) {
    invalid(book, "sampling frequency must be positive");
  }
  if (f.bit_depth <= 0) invalid(book, "bit depth must be positive");
  if (f.channel_count < 1) invalid(book, "at least one channel is required");
  f.code = resolve_code(book, file_formats_, f.code);
  insert_sorted(file_formats_, f);
  return f.code;
}

std::int64_t ReferenceRegistry::add_noise(NoiseProfile n) {
  const auto book = tn::kNoise;
  if (n.description.empty()) invalid(book, "empty description");
  if (n.snr_db && !std::isfinite(*n.snr_db)) invalid(book, "signal-to-noise ratio must be finite");
  n.code = resolve_code(book, noises_, n.code);
  for (const auto& x : noises_) {
    if (x.description == n.description) duplicate_title(book, n.description);
  }
  insert_sorted(noises_, n);
  return n.code;
}

std::int64_t ReferenceRegistry::add_device(RecordingDevice d) {
  const auto book = tn::kRecordingDevice;
  if (d.device_type.empty()) invalid(book, "empty device type");
  if (!(d.bandwidth_hz > 0) || !std::isfinite(d.bandwidth_hz)) {
    invalid(book, "bandwidth must be positive");
  }
  d.code = resolve_code(book, devices_, d.code);
  insert_sorted(devices_, d);
  return d.code;
}

std::vector<Dialect> ReferenceRegistry::dialects(std::string_view language) const {
  std::vector<Dialect> out;
  for (const auto& d : dialects_) {
    if (d.language == language) out.push_back(d);
  }
  return out;
}

std::vector<SpeechTempo> ReferenceRegistry::tempos() const {
  auto out = tempos_;
  std::stable_sort(out.begin(), out.end(), [](const SpeechTempo& a, const SpeechTempo& b) {
    if (!a.sounds_per_second_ceiling) return false;
    if (!b.sounds_per_second_ceiling) return true;
    return *a.sounds_per_second_ceiling < *b.sounds_per_second_ceiling;
  });
  return out;
}

ReferenceRegistry seed_default_registry() {
  ReferenceRegistry r;
  auto seed = [&r](std::string_view book, std::initializer_list<const char*> titles) {
    std::int64_t c = 1;
    for (const char* t : titles) r.add_entry(book, {c++, t});
  };

  seed(tn::kSex, {"male", "female"});
  seed(tn::kSoft, {"hard consonant", "soft consonant", "sonorant"});
  seed(tn::kVoiced, {"voiceless consonant", "voiced consonant", "vowel"});
  seed(tn::kVoiceTypes, {"talking", "singing", "whispering", "esophageal"});
  seed(tn::kUnitTypes, {"syllable", "phrase", "text", "sound"});
  seed(tn::kWayOfOrigin,
       {"occlusive plosive", "occlusive affricate", "occlusive nasal", "slotted"});
  seed(tn::kRise, {"upper", "middle", "lower"});
  seed(tn::kLabialization, {"labialized", "non-labialized"});
  seed(tn::kLocation, {"labial", "dental", "palatal", "velar"});
  seed(tn::kRow, {"front", "central", "back"});
  seed(tn::kEmotions, {"neutral"});
  seed(tn::kStressed, {
                          "stressed, between hard",
                          "stressed, between hard and soft",
                          "stressed, between soft and hard",
                          "stressed, between soft",
                          "unstressed, strength 2 after hard",
                          "unstressed, strength 1 after hard",
                          "unstressed, strength 2 after soft",
                          "unstressed, strength 1 after soft",
                          "unstressed, reserved",
                          "no stress (consonant)",
                          "pause",
                      });

  std::int64_t c = 1;
  for (const char* d : {"Moscow and St. Petersburg", "South of Russia", "North of Russia",
                        "Urals, Siberia and the Far East", "Central part of Russia"}) {
    r.add_dialect({c++, d, std::string(kRussian)});
  }

  r.add_tempo({code(TempoBand::Normal), "normal", 8});
  r.add_tempo({code(TempoBand::Accelerated), "accelerated", 12});
  r.add_tempo({code(TempoBand::Fast), "fast", std::nullopt});

  r.add_environment({kOfficeEnvironment, 20.0, "office"});
  r.add_environment({kCarEnvironment, 40.0, "car interior"});
  return r;
}

void write_registry(const ReferenceRegistry& registry, store::CorpusHandle& h) {
  using store::Record;
  using store::Value;
  for (auto book : kSimpleBooks) {
    const std::string& id = id_field(book);
    for (const auto& e : registry.entries(book)) {
      h.insert(book, Record{{id, Value{e.code}}, {"TITLE", Value{e.title}}});
    }
  }
  for (const auto& e : registry.environments()) {
    h.insert(tn::kAcousticEnvironment, Record{{"ENVIRONMENT_ID", Value{e.code}},
                                              {"NOISE_LEVEL_DB", Value{e.noise_level_db}},
                                              {"TITLE", Value{e.title}}});
  }
  for (const auto& d : registry.dialects()) {
    h.insert(tn::kDialects, Record{{"ID_DIALECT", Value{d.code}},
                                   {"TITLE", Value{d.title}},
                                   {"LANGUAGE", Value{d.language}}});
  }
  for (const auto& t : registry.tempos()) {
    h.insert(tn::kSpeechTemps, Record{{"ID", Value{t.code}},
                                      {"SPEED", Value{t.name}},
                                      {"SOUNDS_PER_SECOND",
                                       store::optional_value(t.sounds_per_second_ceiling)}});
  }
  for (const auto& f : registry.file_formats()) {
    h.insert(tn::kFileFormat, Record{{"ID", Value{f.code}},
                                     {"DISCRETIZATION_FREQUENCY", Value{f.sampling_frequency_hz}},
                                     {"BITRATE", Value{f.bit_depth}},
                                     {"FILE_TYPE", Value{f.file_type}},
                                     {"NUMBER_OF_CHANNELS", Value{f.channel_count}}});
  }
  for (const auto& n : registry.noises()) {
    h.insert(tn::kNoise, Record{{"ID_NOISE", Value{n.code}},
                                {"NOISE_TYPE", Value{n.description}},
                                {"SNR_DB", store::optional_value(n.snr_db)}});
  }
  for (const auto& d : registry.devices()) {
    h.insert(tn::kRecordingDevice, Record{{"DEVICE_ID", Value{d.code}},
                                          {"TYPE", Value{d.device_type}},
                                          {"BANDWIDTH", Value{d.bandwidth_hz}}});
  }
}

ReferenceRegistry read_registry(const store::CorpusHandle& h) {
  using namespace store;
  ReferenceRegistry r;
  for (auto book : kSimpleBooks) {
    const std::string& id = id_field(book);
    for (const auto& [key, rec] : h.rows(book)) r.add_entry(book, {get_int(rec, id), get_text(rec, "TITLE")});
  }
  for (const auto& [key, rec] : h.rows(tn::kAcousticEnvironment)) {
    r.add_environment({get_int(rec, "ENVIRONMENT_ID"), get_real(rec, "NOISE_LEVEL_DB"),
                       get_text(rec, "TITLE")});
  }
  for (const auto& [key, rec] : h.rows(tn::kDialects)) {
    r.add_dialect({get_int(rec, "ID_DIALECT"), get_text(rec, "TITLE"), get_text(rec, "LANGUAGE")});
  }
  for (const auto& [key, rec] : h.rows(tn::kSpeechTemps)) {
    r.add_tempo({get_int(rec, "ID"), get_text(rec, "SPEED"), get_opt_int(rec, "SOUNDS_PER_SECOND")});
  }
  for (const auto& [key, rec] : h.rows(tn::kFileFormat)) {
    r.add_file_format({get_int(rec, "ID"), get_real(rec, "DISCRETIZATION_FREQUENCY"),
                       get_int(rec, "BITRATE"), get_text(rec, "FILE_TYPE"),
                       get_int(rec, "NUMBER_OF_CHANNELS")});
  }
  for (const auto& [key, rec] : h.rows(tn::kNoise)) {
    if (get_int(rec, "ID_NOISE") == kNoNoise) continue;  // always present
    r.add_noise({get_int(rec, "ID_NOISE"), get_text(rec, "NOISE_TYPE"), get_opt_real(rec, "SNR_DB")});
  }
  for (const auto& [key, rec] : h.rows(tn::kRecordingDevice)) {
    r.add_device({get_int(rec, "DEVICE_ID"), get_text(rec, "TYPE"), get_real(rec, "BANDWIDTH")});
  }
  return r;
}

}  // namespace speechframe::refbooks
