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

#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace sftest {

namespace fs = std::filesystem;
namespace sf = speechframe;
namespace tn = sf::store::tables;
using sf::corpus::SegmentationRecord;
using sf::corpus::SegmentationSource;
using sf::corpus::Speaker;
using sf::corpus::SpeechSignal;
using sf::corpus::SpeechUnit;
using sf::query::Attribute;
using sf::refbooks::kAssignCode;
using sf::store::Key;
using sf::store::Record;
using sf::store::Value;

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  for (;;) {
    path_ = fs::temp_directory_path() /
            ("sftest-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
             std::to_string(rd() % 100000));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<std::int64_t> codes(const sf::refbooks::ReferenceRegistry& reg, std::string_view book) {
  std::vector<std::int64_t> out;
  for (const auto& e : reg.entries(book)) out.push_back(e.code);
  return out;
}

CorpusHandle seeded_handle(const sf::refbooks::ReferenceRegistry& reg) {
  CorpusHandle h;
  sf::refbooks::write_registry(reg, h);
  for (const auto& unit : sf::alphabet::russian_alphabet(reg)) h.insert(tn::kClass, sf::alphabet::to_record(unit));
  return h;
}

Date add_years(Date d, int years) {
  Date out{d.year() + std::chrono::years{years}, d.month(), d.day()};
  if (!out.ok()) out = Date{out.year(), out.month(), std::chrono::day{28}};
  return out;
}

}  // namespace

sf::refbooks::ReferenceRegistry extended_registry() {
  auto reg = sf::refbooks::seed_default_registry();
  for (const char* t : {"read", "spontaneous"}) reg.add_entry(tn::kSpeechTypes, {.title = t});
  for (const char* t : {"cold", "laryngitis"}) reg.add_entry(tn::kSickness, {.title = t});
  for (const char* t : {"stutter", "lisp"}) reg.add_entry(tn::kDefects, {.title = t});
  for (const char* t : {"telephone", "radio"}) reg.add_entry(tn::kChannel, {.title = t});
  for (const char* t : {"joy", "anger"}) reg.add_entry(tn::kEmotions, {.title = t});
  reg.add_file_format({kAssignCode, 16000.0, 16, "wav", 1});
  reg.add_file_format({kAssignCode, 44100.0, 24, "wav", 2});
  reg.add_device({kAssignCode, "dynamic microphone", 8000.0});
  reg.add_device({kAssignCode, "condenser microphone", 20000.0});
  reg.add_noise({kAssignCode, "white", 10.0});
  return reg;
}

CorpusHandle random_corpus(std::mt19937_64& rng, const RandomCorpusOptions& options) {
  const auto reg = extended_registry();
  CorpusHandle h = seeded_handle(reg);

  std::vector<std::string> symbols, sounding;
  for (const auto& u : sf::alphabet::russian_alphabet(reg)) {
    symbols.push_back(u.symbol);
    if (u.symbol != "_") sounding.push_back(u.symbol);
  }

  std::vector<Speaker> speakers;
  for (std::size_t i = 1; i <= options.speakers; ++i) {
    Speaker s;
    s.id = static_cast<std::int64_t>(i);
    s.sex = chance(rng, 0.5) ? 1 : 2;
    s.name = "Name" + std::to_string(i);
    s.surname = "Surname" + std::to_string(i);
    s.patronymic = "Patronymic" + std::to_string(i);
    s.birth_date = ymd(uniform(rng, 1940, 2000), uniform(rng, 1, 12), uniform(rng, 1, 28));
    sf::corpus::add_speaker(h, s);
    speakers.push_back(s);
  }

  const auto unit_types = codes(reg, tn::kUnitTypes);
  for (std::size_t i = 1; i <= options.units; ++i) {
    SpeechUnit u;
    u.id = static_cast<std::int64_t>(i);
    u.spelling = "word" + std::to_string(i);
    const int n = uniform(rng, 1, 6);
    for (int k = 0; k < n; ++k) u.transcription.push_back(pick(rng, sounding));
    u.unit_type = pick(rng, unit_types);
    sf::corpus::add_speech_unit(h, u);
  }

  const auto formats = codes(reg, tn::kFileFormat);
  const auto noises = codes(reg, tn::kNoise);
  const auto devices = codes(reg, tn::kRecordingDevice);
  const auto dialects = codes(reg, tn::kDialects);
  const auto environments = codes(reg, tn::kAcousticEnvironment);
  const auto speech_types = codes(reg, tn::kSpeechTypes);
  const auto voice_types = codes(reg, tn::kVoiceTypes);
  const auto tempos = codes(reg, tn::kSpeechTemps);
  const auto channels = codes(reg, tn::kChannel);
  const auto sicknesses = codes(reg, tn::kSickness);
  const auto defects = codes(reg, tn::kDefects);
  const auto emotions = codes(reg, tn::kEmotions);
  auto maybe = [&](const std::vector<std::int64_t>& v) -> std::optional<std::int64_t> {
    if (chance(rng, 0.3)) return std::nullopt;
    return pick(rng, v);
  };

  for (std::size_t i = 0; i < options.signals; ++i) {
    SpeechSignal s;
    char name[32];
    std::snprintf(name, sizeof name, "sig%05zu.wav", i);
    s.file_name = name;
    const Speaker& sp = pick(rng, speakers);
    s.speaker = sp.id;
    s.speech_unit = options.units ? uniform(rng, 1, static_cast<int>(options.units)) : 0;
    s.length_s = uniform(rng, 50, 2000) / 100.0;
    s.record_date = add_years(sp.birth_date, uniform(rng, 5, 60));
    s.record_date = Date{s.record_date.year(), s.record_date.month(),
                         std::chrono::day{static_cast<unsigned>(uniform(rng, 1, 28))}};
    s.file_format = pick(rng, formats);
    s.noise = pick(rng, noises);
    s.recording_device = pick(rng, devices);
    s.dialect = pick(rng, dialects);
    s.acoustic_environment = pick(rng, environments);
    s.speech_type = maybe(speech_types);
    s.voice_type = pick(rng, voice_types);
    s.speech_tempo = pick(rng, tempos);
    s.channel = maybe(channels);
    s.sickness = maybe(sicknesses);
    s.speech_defect = maybe(defects);
    s.emotional_state = pick(rng, emotions);
    s.accent = chance(rng, 0.3);
    if (options.units == 0) continue;
    sf::corpus::add_signal(h, s);

    auto segment = [&](SegmentationSource source) {
      const int len_cs = static_cast<int>(std::lround(s.length_s * 100));
      const int k = std::min(uniform(rng, 1, static_cast<int>(std::max<std::size_t>(1, options.max_segments))),
                             len_cs);
      std::set<int> starts;
      if (chance(rng, 0.7)) starts.insert(0);
      while (static_cast<int>(starts.size()) < k) starts.insert(uniform(rng, 0, len_cs - 1));
      const std::int64_t experts = chance(rng, 0.85) ? uniform(rng, 2, 4) : uniform(rng, 0, 1);
      std::int64_t pos = 1;
      for (int cs : starts) {
        SegmentationRecord r;
        r.position = pos++;
        r.file_name = s.file_name;
        r.start_time = cs / 100.0;
        r.symbol = pick(rng, symbols);
        r.source = source;
        if (source == SegmentationSource::Manual) r.expert_count = experts;
        sf::corpus::add_segment(h, r);
      }
    };
    if (chance(rng, options.segmented_fraction)) {
      segment(SegmentationSource::Manual);
      if (chance(rng, 0.3)) segment(SegmentationSource::Automatic);
    }
  }
  return h;
}

CorpusHandle stats_fixture_corpus() {
  const auto reg = extended_registry();
  CorpusHandle h = seeded_handle(reg);
  const auto alphabet = sf::alphabet::russian_alphabet(reg);
  std::vector<std::string> symbols;
  for (const auto& u : alphabet) symbols.push_back(u.symbol);

  for (std::int64_t i = 1; i <= 193; ++i) {
    Speaker s;
    s.id = i;
    s.sex = i <= 49 ? 1 : 2;
    s.name = "Name" + std::to_string(i);
    s.surname = "Surname" + std::to_string(i);
    s.patronymic = "Patronymic" + std::to_string(i);
    s.birth_date = ymd(1950 + static_cast<int>(i % 40), 1 + static_cast<unsigned>(i % 12), 15);
    sf::corpus::add_speaker(h, s);
  }
  for (std::int64_t i = 1; i <= 77; ++i) {
    SpeechUnit u;
    u.id = i;
    u.spelling = "unit" + std::to_string(i);
    u.transcription = {symbols[static_cast<std::size_t>(i - 1)]};
    u.unit_type = sf::refbooks::code(sf::refbooks::UnitType::Sound);
    sf::corpus::add_speech_unit(h, u);
  }
  // 84200 cs over 124 signals: 679 cs each, four of them one centisecond longer.
  std::size_t symbol = 0;
  for (int i = 0; i < 124; ++i) {
    SpeechSignal s;
    char name[32];
    std::snprintf(name, sizeof name, "fix%03d.wav", i);
    s.file_name = name;
    s.speaker = 1 + (i * 7) % 193;
    s.speech_unit = 1 + i % 77;
    s.length_s = (679 + (i < 4 ? 1 : 0)) / 100.0;
    s.record_date = ymd(2019 + i % 3, 1 + static_cast<unsigned>(i % 12), 10);
    s.file_format = 1;
    s.noise = sf::refbooks::kNoNoise;
    s.recording_device = 1;
    s.dialect = 1 + i % 5;
    s.acoustic_environment = i % 4 == 0 ? sf::refbooks::kCarEnvironment : sf::refbooks::kOfficeEnvironment;
    s.voice_type = sf::refbooks::code(sf::refbooks::VoiceType::Talking);
    s.speech_tempo = 1 + i % 3;
    s.emotional_state = sf::refbooks::kNeutralEmotion;
    s.accent = i % 10 == 0;
    sf::corpus::add_signal(h, s);
    if (i < 103) {
      for (std::int64_t pos = 1; pos <= 3; ++pos) {
        SegmentationRecord r;
        r.position = pos;
        r.file_name = s.file_name;
        r.start_time = static_cast<double>(pos - 1) * 2.0;
        r.symbol = symbols[symbol++ % symbols.size()];
        r.source = SegmentationSource::Manual;
        r.expert_count = 2;
        sf::corpus::add_segment(h, r);
      }
    }
  }
  return h;
}

sf::query::FilterCriterion random_criterion(std::mt19937_64& rng,
                                            const sf::refbooks::ReferenceRegistry& registry,
                                            std::int64_t speaker_count, std::int64_t unit_count) {
  const auto all = sf::query::searchable_attributes();
  const Attribute a = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
  sf::query::FilterCriterion c{a, std::int64_t{0}};
  switch (sf::query::shape_of(a)) {
    case sf::query::ValueShape::Code: {
      if (a == Attribute::Speaker) {
        c.value = std::int64_t{uniform(rng, 1, static_cast<int>(speaker_count) + 2)};
      } else if (a == Attribute::Unit) {
        c.value = std::int64_t{uniform(rng, 1, static_cast<int>(unit_count) + 2)};
      } else {
        const auto book = *sf::query::book_of(a);
        const auto present = codes(registry, book);
        if (present.empty() || chance(rng, 0.1)) {
          c.value = std::int64_t{uniform(rng, 0, 6)};
        } else {
          c.value = pick(rng, present);
        }
      }
      break;
    }
    case sf::query::ValueShape::Flag: c.value = chance(rng, 0.5); break;
    case sf::query::ValueShape::DateRange: {
      sf::query::DateRange r;
      if (chance(rng, 0.9)) r.lo = ymd(uniform(rng, 1950, 2040), uniform(rng, 1, 12), uniform(rng, 1, 28));
      const Date base = r.lo.year() == std::chrono::year::min() ? ymd(1990, 1, 1) : r.lo;
      if (chance(rng, 0.9)) r.hi = add_years(base, uniform(rng, 0, 40));
      c.value = r;
      break;
    }
    case sf::query::ValueShape::LengthRange: {
      sf::query::LengthRange r;
      r.lo = uniform(rng, 0, 1500) / 100.0;
      if (chance(rng, 0.9)) r.hi = r.lo + uniform(rng, 0, 1500) / 100.0;
      c.value = r;
      break;
    }
    case sf::query::ValueShape::AgeRange: {
      sf::query::AgeRange r;
      r.lo = uniform(rng, 0, 60);
      if (chance(rng, 0.9)) r.hi = r.lo + uniform(rng, 0, 40);
      c.value = r;
      break;
    }
  }
  return c;
}

std::set<std::string> file_names(const std::vector<SpeechSignal>& signals) {
  std::set<std::string> out;
  for (const auto& s : signals) out.insert(s.file_name);
  return out;
}

namespace {

std::string_view signal_field(Attribute a) {
  switch (a) {
    case Attribute::Dialect: return "DIALECT_ID";
    case Attribute::Emotion: return "EMOTIONAL_STATE";
    case Attribute::VoiceType: return "VOICE_TYPE_ID";
    case Attribute::SpeechType: return "SPEECH_TYPE_ID";
    case Attribute::Tempo: return "SPEECH_TEMP_ID";
    case Attribute::Sickness: return "SPEECH_SICKNESS";
    case Attribute::Defect: return "SPEECH_DEFECT";
    case Attribute::Accent: return "ACIENT";
    case Attribute::Environment: return "ACOUSTIC_ENVIRONMENT";
    case Attribute::Channel: return "CHANNEL";
    case Attribute::Device: return "RECORDING_DEVICE";
    case Attribute::Noise: return "SYNTHETIC_NOISE_TYPE";
    case Attribute::Format: return "FILE_FORMAT";
    case Attribute::RecordDate: return "RECORD_DATE";
    case Attribute::Length: return "LENGTH";
    case Attribute::Speaker: return "SPEAKER_ID";
    case Attribute::Unit: return "SPEECH_UNIT_ID";
    default: return "";
  }
}

int years_between(Date birth, Date at) {
  int years = int(at.year()) - int(birth.year());
  if (unsigned(at.month()) < unsigned(birth.month()) ||
      (at.month() == birth.month() && unsigned(at.day()) < unsigned(birth.day()))) {
    --years;
  }
  return years;
}

bool satisfies(const CorpusHandle& h, const Record& signal, const sf::query::FilterCriterion& c) {
  const Record* speaker = h.find(tn::kSpeaker, Key{signal.at("SPEAKER_ID")});
  if (c.attribute == Attribute::Sex) {
    return speaker && speaker->at("SEX") == Value{std::get<std::int64_t>(c.value)};
  }
  if (c.attribute == Attribute::SpeakerAge) {
    if (!speaker) return false;
    const Date birth = std::get<Date>(speaker->at("BIRTH_DATE"));
    const Date at = std::get<Date>(signal.at("RECORD_DATE"));
    if (at < birth) return false;
    const int age = years_between(birth, at);
    const auto& r = std::get<sf::query::AgeRange>(c.value);
    return r.lo <= age && age <= r.hi;
  }
  const Value& v = signal.at(std::string(signal_field(c.attribute)));
  if (auto* code = std::get_if<std::int64_t>(&c.value)) return v == Value{*code};
  if (auto* flag = std::get_if<bool>(&c.value)) return v == Value{*flag};
  if (auto* r = std::get_if<sf::query::DateRange>(&c.value)) {
    const Date d = std::get<Date>(v);
    return !(d < r->lo) && !(r->hi < d);
  }
  if (auto* r = std::get_if<sf::query::LengthRange>(&c.value)) {
    const double d = std::get<double>(v);
    return d >= r->lo && d <= r->hi;
  }
  return false;
}

}  // namespace

std::set<std::string> oracle_conjunction(const CorpusHandle& h,
                                         std::span<const sf::query::FilterCriterion> criteria) {
  std::set<std::string> out;
  for (const auto& [key, rec] : h.rows(tn::kSpeechSignal)) {
    bool all = true;
    for (const auto& c : criteria) all = all && satisfies(h, rec, c);
    if (all) out.insert(std::get<std::string>(rec.at("FILE_NAME")));
  }
  return out;
}

sf::query::CorpusStatistics oracle_stats(const CorpusHandle& h) {
  sf::query::CorpusStatistics st;
  st.sound_unit_count = h.rows(tn::kClass).size();
  st.speech_unit_count = h.rows(tn::kSpeechUnit).size();
  for (const auto& [key, rec] : h.rows(tn::kSpeaker)) {
    ++st.speaker_count;
    ++st.speaker_count_by_sex[std::get<std::int64_t>(rec.at("SEX"))];
  }
  for (const auto& [key, rec] : h.rows(tn::kSpeechSignal)) {
    ++st.signal_count;
    st.total_duration_s += std::get<double>(rec.at("LENGTH"));
  }
  std::set<Value> manual;
  for (const auto& [key, rec] : h.rows(tn::kSegmentation)) {
    if (rec.at("SOURCE") == Value{std::string("manual")}) manual.insert(rec.at("FILENAME"));
  }
  st.manually_segmented_signal_count = manual.size();
  return st;
}

std::map<std::string, std::size_t> oracle_manual_counts(const CorpusHandle& h) {
  std::map<std::string, std::size_t> out;
  for (const auto& [key, rec] : h.rows(tn::kSegmentation)) {
    if (rec.at("SOURCE") == Value{std::string("manual")}) ++out[std::get<std::string>(rec.at("TYPE_ID"))];
  }
  return out;
}

CascadeOutcome oracle_cascade(const CorpusHandle& h, const std::string& table, const Key& key) {
  using Row = std::pair<std::string, Key>;
  std::set<Row> doomed{{table, key}};
  const auto& schema = h.schema();
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : schema.tables()) {
      for (const auto& fk : t.foreign_keys) {
        if (fk.policy != sf::store::CascadePolicy::Cascade) continue;
        for (const auto& [k, rec] : h.rows(t.name)) {
          const Value& v = rec.at(fk.field);
          if (sf::store::is_null(v) || doomed.count({t.name, k})) continue;
          if (doomed.count({fk.target_table, Key{v}})) {
            doomed.insert({t.name, k});
            changed = true;
          }
        }
      }
    }
  }
  CascadeOutcome out;
  for (const auto& t : schema.tables()) {
    for (const auto& fk : t.foreign_keys) {
      if (fk.policy != sf::store::CascadePolicy::Restrict) continue;
      for (const auto& [k, rec] : h.rows(t.name)) {
        const Value& v = rec.at(fk.field);
        if (sf::store::is_null(v) || doomed.count({t.name, k})) continue;
        if (doomed.count({fk.target_table, Key{v}})) out.restricted = true;
      }
    }
  }
  for (const auto& [t, k] : doomed) ++out.removed[t];
  return out;
}

std::optional<Key> Mutator::random_key(std::string_view table) {
  const auto& rows = h_.rows(table);
  if (rows.empty()) return std::nullopt;
  auto it = rows.begin();
  std::advance(it, std::uniform_int_distribution<std::size_t>(0, rows.size() - 1)(rng_));
  return it->first;
}

std::optional<Value> Mutator::random_code(std::string_view table) {
  auto k = random_key(table);
  if (!k) return std::nullopt;
  return k->front();
}

Mutator::Step Mutator::step() {
  const int roll = uniform(rng_, 0, 99);
  if (roll < 50) return insert();
  if (roll < 78) return remove();
  return update_key();
}

Mutator::Step Mutator::insert() {
  Step st;
  st.kind = Kind::Insert;
  const std::int64_t id = next_id_++;
  auto int_value = [](std::int64_t v) { return Value{v}; };
  auto text_value = [](std::string v) { return Value{std::move(v)}; };

  auto insert_speaker = [&] {
    auto sex = random_code(tn::kSex);
    if (!sex) {
      st.table = tn::kSex;
      st.key = h_.insert(tn::kSex, Record{{"ID", int_value(id)}, {"TITLE", text_value("sex" + std::to_string(id))}});
      return;
    }
    st.table = tn::kSpeaker;
    st.key = h_.insert(tn::kSpeaker, Record{{"ID", int_value(id)},
                                            {"SEX", *sex},
                                            {"NAME", text_value("N")},
                                            {"SURNAME", text_value("S")},
                                            {"FAMILY_NAME", text_value("F")},
                                            {"BIRTH_DATE", Value{ymd(1970 + uniform(rng_, 0, 30), 1, 1)}}});
  };

  const int what = uniform(rng_, 0, 9);
  if (what <= 1) {
    insert_speaker();
  } else if (what == 2) {
    auto type = random_code(tn::kUnitTypes);
    if (!type) return insert_speaker(), st;
    st.table = tn::kSpeechUnit;
    st.key = h_.insert(tn::kSpeechUnit, Record{{"ID", int_value(id)},
                                               {"SPELLING_RECORD", text_value("w")},
                                               {"TRANSCRIPTION", text_value("a1")},
                                               {"UNIT_TYPE", *type}});
  } else if (what <= 6) {
    Record r{{"FILE_NAME", text_value("m" + std::to_string(id) + ".wav")},
             {"LENGTH", Value{uniform(rng_, 100, 900) / 100.0}},
             {"RECORD_DATE", Value{ymd(2010 + uniform(rng_, 0, 10), 3, 3)}},
             {"ACIENT", Value{chance(rng_, 0.5)}},
             {"SPEECH_TYPE_ID", Value{}},
             {"CHANNEL", Value{}},
             {"SPEECH_SICKNESS", Value{}},
             {"SPEECH_DEFECT", Value{}}};
    const std::pair<const char*, std::string_view> refs[] = {
        {"SPEECH_UNIT_ID", tn::kSpeechUnit}, {"SPEAKER_ID", tn::kSpeaker},
        {"FILE_FORMAT", tn::kFileFormat},    {"SYNTHETIC_NOISE_TYPE", tn::kNoise},
        {"RECORDING_DEVICE", tn::kRecordingDevice}, {"DIALECT_ID", tn::kDialects},
        {"ACOUSTIC_ENVIRONMENT", tn::kAcousticEnvironment}, {"VOICE_TYPE_ID", tn::kVoiceTypes},
        {"SPEECH_TEMP_ID", tn::kSpeechTemps}, {"EMOTIONAL_STATE", tn::kEmotions}};
    for (const auto& [field, table] : refs) {
      auto code = random_code(table);
      if (!code) return insert_speaker(), st;
      r[field] = *code;
    }
    if (chance(rng_, 0.5)) {
      if (auto c = random_code(tn::kSickness)) r["SPEECH_SICKNESS"] = *c;
    }
    st.table = tn::kSpeechSignal;
    st.key = h_.insert(tn::kSpeechSignal, std::move(r));
  } else if (what <= 8) {
    auto signal = random_key(tn::kSpeechSignal);
    auto symbol = random_code(tn::kClass);
    if (!signal || !symbol) return insert_speaker(), st;
    std::int64_t position = 1;
    double start = 0.0;
    for (const auto& [k, rec] : h_.rows(tn::kSegmentation)) {
      if (rec.at("FILENAME") == signal->front() && rec.at("SOURCE") == Value{std::string("manual")}) {
        position = std::max(position, std::get<std::int64_t>(rec.at("POSITION")) + 1);
        start = std::max(start, std::get<double>(rec.at("START_AUDIO")) + 0.01);
      }
    }
    st.table = tn::kSegmentation;
    st.key = h_.insert(tn::kSegmentation, Record{{"POSITION", int_value(position)},
                                                 {"FILENAME", signal->front()},
                                                 {"START_AUDIO", Value{start}},
                                                 {"TYPE_ID", *symbol},
                                                 {"SOURCE", text_value("manual")},
                                                 {"EXPERT_COUNT", int_value(2)}});
  } else {
    st.table = tn::kEmotions;
    st.key = h_.insert(tn::kEmotions, Record{{"ID_EMOTION", int_value(id)},
                                             {"TITLE", text_value("emotion" + std::to_string(id))}});
  }
  return st;
}

Mutator::Step Mutator::remove() {
  static const std::string_view tables[] = {tn::kSpeaker,  tn::kSpeechUnit, tn::kSpeechSignal,
                                            tn::kSegmentation, tn::kEmotions, tn::kSex,
                                            tn::kClass,    tn::kDialects,   tn::kFileFormat};
  Step st;
  st.kind = Kind::Delete;
  st.table = tables[uniform(rng_, 0, static_cast<int>(std::size(tables)) - 1)];
  auto key = random_key(st.table);
  if (!key) return insert();
  st.key = *key;
  st.expected = oracle_cascade(h_, st.table, st.key);
  try {
    st.counts = h_.delete_cascade(st.table, st.key);
  } catch (const sf::Error& e) {
    if (e.code() != sf::ErrorCode::Restricted) throw;
    st.restricted = true;
  }
  return st;
}

Mutator::Step Mutator::update_key() {
  static const std::string_view tables[] = {tn::kSpeaker, tn::kSpeechUnit, tn::kSpeechSignal,
                                            tn::kEmotions, tn::kClass, tn::kSex};
  Step st;
  st.kind = Kind::UpdateKey;
  st.table = tables[uniform(rng_, 0, static_cast<int>(std::size(tables)) - 1)];
  auto key = random_key(st.table);
  if (!key) return insert();
  st.key = *key;
  const std::int64_t id = next_id_++;
  Key replacement;
  if (std::holds_alternative<std::string>(key->front())) {
    replacement = Key{Value{std::get<std::string>(key->front()) + "~" + std::to_string(id)}};
  } else {
    replacement = Key{Value{id}};
  }
  for (const auto& t : h_.schema().tables())
    for (const auto& fk : t.foreign_keys)
      if (fk.target_table == st.table)
        for (const auto& [k, rec] : h_.rows(t.name))
          if (rec.at(fk.field) == key->front()) ++st.expected_rewritten;
  st.rewritten = h_.update_key_cascade(st.table, *key, replacement);
  st.key = replacement;
  return st;
}

std::map<std::string, std::string> snapshot_files(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(root)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[entry.path().filename().string()] = ss.str();
  }
  return out;
}

std::map<std::string, std::multiset<std::string>> table_sets(const CorpusHandle& h) {
  std::map<std::string, std::multiset<std::string>> out;
  for (const auto& t : h.schema().tables()) {
    auto& rows = out[t.name];
    for (const auto& [k, rec] : h.rows(t.name)) rows.insert(sf::store::format_record(t, rec));
  }
  return out;
}

}  // namespace sftest
