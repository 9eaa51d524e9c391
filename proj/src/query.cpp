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

#include "speechframe/query.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "speechframe/segmentation.hpp"

namespace speechframe::query {

namespace tn = store::tables;

namespace {

struct AttributeInfo {
  Attribute attribute;
  std::string_view name;
  ValueShape shape;
  std::string_view book;  // empty when codes are not titled
};

constexpr std::array<AttributeInfo, 19> kAttributes{{
    {Attribute::Sex, "sex", ValueShape::Code, tn::kSex},
    {Attribute::Dialect, "dialect", ValueShape::Code, tn::kDialects},
    {Attribute::Emotion, "emotion", ValueShape::Code, tn::kEmotions},
    {Attribute::VoiceType, "voice-type", ValueShape::Code, tn::kVoiceTypes},
    {Attribute::SpeechType, "speech-type", ValueShape::Code, tn::kSpeechTypes},
    {Attribute::Tempo, "tempo", ValueShape::Code, tn::kSpeechTemps},
    {Attribute::Sickness, "sickness", ValueShape::Code, tn::kSickness},
    {Attribute::Defect, "defect", ValueShape::Code, tn::kDefects},
    {Attribute::Accent, "accent", ValueShape::Flag, ""},
    {Attribute::Environment, "environment", ValueShape::Code, tn::kAcousticEnvironment},
    {Attribute::Channel, "channel", ValueShape::Code, tn::kChannel},
    {Attribute::Device, "device", ValueShape::Code, tn::kRecordingDevice},
    {Attribute::Noise, "noise", ValueShape::Code, tn::kNoise},
    {Attribute::Format, "format", ValueShape::Code, tn::kFileFormat},
    {Attribute::RecordDate, "record-date", ValueShape::DateRange, ""},
    {Attribute::Length, "length", ValueShape::LengthRange, ""},
    {Attribute::Speaker, "speaker", ValueShape::Code, ""},
    {Attribute::SpeakerAge, "age", ValueShape::AgeRange, ""},
    {Attribute::Unit, "unit", ValueShape::Code, ""},
}};

const AttributeInfo& info(Attribute a) {
  for (const auto& i : kAttributes)
    if (i.attribute == a) return i;
  throw Error(ErrorCode::UnknownAttribute, "unknown attribute");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string buf(s);
  std::istringstream in(buf);
  in.imbue(std::locale::classic());
  double v = 0;
  in >> v;
  if (in.fail() || !in.eof() || !std::isfinite(v)) return std::nullopt;
  return v;
}

[[noreturn]] void mismatch(Attribute a, std::string_view value, std::string_view expected) {
  throw Error(ErrorCode::TypeMismatch, std::string(name_of(a)) + ": \"" + std::string(value) +
                                           "\" is not " + std::string(expected));
}

// Code-valued attribute of a row, nullopt for null descriptors.
std::optional<std::int64_t> code_of(const SignalRow& row, Attribute a) {
  const SpeechSignal& s = row.signal;
  switch (a) {
    case Attribute::Sex: return row.speaker_sex;
    case Attribute::Dialect: return s.dialect;
    case Attribute::Emotion: return s.emotional_state;
    case Attribute::VoiceType: return s.voice_type;
    case Attribute::SpeechType: return s.speech_type;
    case Attribute::Tempo: return s.speech_tempo;
    case Attribute::Sickness: return s.sickness;
    case Attribute::Defect: return s.speech_defect;
    case Attribute::Environment: return s.acoustic_environment;
    case Attribute::Channel: return s.channel;
    case Attribute::Device: return s.recording_device;
    case Attribute::Noise: return s.noise;
    case Attribute::Format: return s.file_format;
    case Attribute::Speaker: return s.speaker;
    case Attribute::Unit: return s.speech_unit;
    default: return std::nullopt;
  }
}

std::optional<int> age_of(const SignalRow& row) {
  if (!row.speaker_birth_date || row.signal.record_date < *row.speaker_birth_date) return std::nullopt;
  return corpus::speaker_age(*row.speaker_birth_date, row.signal.record_date);
}

// Histogram key of a row, see count_by.
std::optional<std::int64_t> bucket_of(const SignalRow& row, Attribute a) {
  switch (shape_of(a)) {
    case ValueShape::Code: return code_of(row, a);
    case ValueShape::Flag: return row.signal.accent ? 1 : 0;
    case ValueShape::DateRange: return static_cast<int>(row.signal.record_date.year());
    case ValueShape::LengthRange:
      return static_cast<std::int64_t>(std::floor(row.signal.length_s));
    case ValueShape::AgeRange: {
      auto age = age_of(row);
      if (!age) return std::nullopt;
      return *age;
    }
  }
  return std::nullopt;
}

}  // namespace

std::span<const Attribute> searchable_attributes() {
  static const std::vector<Attribute> all = [] {
    std::vector<Attribute> v;
    for (const auto& i : kAttributes) v.push_back(i.attribute);
    return v;
  }();
  return all;
}

std::string_view name_of(Attribute a) { return info(a).name; }

std::string attribute_list() {
  std::string out;
  for (const auto& i : kAttributes) {
    if (!out.empty()) out += ", ";
    out += i.name;
  }
  return out;
}

Attribute parse_attribute(std::string_view name) {
  for (const auto& i : kAttributes)
    if (i.name == name) return i.attribute;
  throw Error(ErrorCode::UnknownAttribute, "unknown attribute \"" + std::string(name) +
                                               "\"; searchable attributes: " + attribute_list());
}

ValueShape shape_of(Attribute a) { return info(a).shape; }

std::optional<std::string_view> book_of(Attribute a) {
  const auto& i = info(a);
  if (i.book.empty()) return std::nullopt;
  return i.book;
}

void check_criterion(const FilterCriterion& c) {
  const ValueShape shape = shape_of(c.attribute);
  const bool ok = std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) return shape == ValueShape::Code;
        if constexpr (std::is_same_v<T, bool>) return shape == ValueShape::Flag;
        if constexpr (std::is_same_v<T, DateRange>) return shape == ValueShape::DateRange;
        if constexpr (std::is_same_v<T, LengthRange>) return shape == ValueShape::LengthRange;
        if constexpr (std::is_same_v<T, AgeRange>) return shape == ValueShape::AgeRange;
      },
      c.value);
  if (!ok) {
    throw Error(ErrorCode::TypeMismatch,
                "value of the wrong kind for attribute " + std::string(name_of(c.attribute)));
  }
  bool empty = false;
  if (auto* r = std::get_if<DateRange>(&c.value)) empty = r->hi < r->lo;
  if (auto* r = std::get_if<LengthRange>(&c.value)) empty = !(r->lo <= r->hi);
  if (auto* r = std::get_if<AgeRange>(&c.value)) empty = r->hi < r->lo;
  if (empty) {
    throw Error(ErrorCode::InvalidArgument,
                "empty range for attribute " + std::string(name_of(c.attribute)));
  }
}

FilterCriterion parse_criterion(std::string_view expr, const refbooks::ReferenceRegistry& registry) {
  const auto eq = expr.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument,
                "expected attribute=value, got \"" + std::string(expr) + "\"");
  }
  const Attribute a = parse_attribute(trim(expr.substr(0, eq)));
  const std::string_view value = trim(expr.substr(eq + 1));
  const ValueShape shape = shape_of(a);

  std::string_view lo = value, hi = value;
  const auto dots = value.find("..");
  const bool is_range = dots != std::string_view::npos;
  if (is_range) {
    lo = trim(value.substr(0, dots));
    hi = trim(value.substr(dots + 2));
  }

  FilterCriterion c{a, std::int64_t{0}};
  switch (shape) {
    case ValueShape::Code: {
      if (is_range) mismatch(a, value, "a single code");
      auto book = book_of(a);
      if (auto n = parse_int(value)) {
        if (book && !registry.contains(*book, *n)) {
          throw Error(ErrorCode::UnknownCode,
                      std::string(name_of(a)) + ": code " + std::to_string(*n) + " is not in " +
                          std::string(*book));
        }
        c.value = *n;
      } else if (book) {
        auto code = registry.find_code(*book, value);
        if (!code) {
          throw Error(ErrorCode::UnknownCode, std::string(name_of(a)) + ": no entry titled \"" +
                                                  std::string(value) + "\" in " + std::string(*book));
        }
        c.value = *code;
      } else {
        mismatch(a, value, "an integer id");
      }
      break;
    }
    case ValueShape::Flag: {
      if (value == "true" || value == "yes" || value == "1") {
        c.value = true;
      } else if (value == "false" || value == "no" || value == "0") {
        c.value = false;
      } else {
        mismatch(a, value, "a flag (true/false)");
      }
      break;
    }
    case ValueShape::DateRange: {
      DateRange r;
      if (!lo.empty()) {
        auto d = parse_date(lo);
        if (!d) mismatch(a, value, "a date or date range (YYYY-MM-DD..YYYY-MM-DD)");
        r.lo = *d;
      }
      if (!hi.empty()) {
        auto d = parse_date(hi);
        if (!d) mismatch(a, value, "a date or date range (YYYY-MM-DD..YYYY-MM-DD)");
        r.hi = *d;
      }
      if (!is_range && value.empty()) mismatch(a, value, "a date");
      c.value = r;
      break;
    }
    case ValueShape::LengthRange: {
      LengthRange r;
      if (!lo.empty()) {
        auto d = parse_double(lo);
        if (!d) mismatch(a, value, "a length or length range in seconds");
        r.lo = *d;
      }
      if (!hi.empty()) {
        auto d = parse_double(hi);
        if (!d) mismatch(a, value, "a length or length range in seconds");
        r.hi = *d;
      }
      if (!is_range && value.empty()) mismatch(a, value, "a length");
      c.value = r;
      break;
    }
    case ValueShape::AgeRange: {
      AgeRange r;
      if (!lo.empty()) {
        auto n = parse_int(lo);
        if (!n || *n < 0 || *n > std::numeric_limits<int>::max()) mismatch(a, value, "an age range");
        r.lo = static_cast<int>(*n);
      }
      if (!hi.empty()) {
        auto n = parse_int(hi);
        if (!n || *n < 0 || *n > std::numeric_limits<int>::max()) mismatch(a, value, "an age range");
        r.hi = static_cast<int>(*n);
      }
      if (!is_range && value.empty()) mismatch(a, value, "an age");
      c.value = r;
      break;
    }
  }
  check_criterion(c);
  return c;
}

std::string format_criterion(const FilterCriterion& c) {
  std::string out(name_of(c.attribute));
  out += '=';
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          out += std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          out += v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, DateRange>) {
          const DateRange open;
          if (v.lo != open.lo) out += format_date(v.lo);
          out += "..";
          if (v.hi != open.hi) out += format_date(v.hi);
        } else if constexpr (std::is_same_v<T, LengthRange>) {
          out += store::to_display(store::Value{v.lo}) + "..";
          if (std::isfinite(v.hi)) out += store::to_display(store::Value{v.hi});
        } else {
          out += std::to_string(v.lo) + "..";
          if (v.hi != std::numeric_limits<int>::max()) out += std::to_string(v.hi);
        }
      },
      c.value);
  return out;
}

SignalTable::SignalTable(const CorpusHandle& h) {
  std::map<std::int64_t, corpus::Speaker> by_id;
  for (auto& s : corpus::speakers(h)) by_id.emplace(s.id, s);
  for (auto& s : corpus::signals(h)) {
    SignalRow row{std::move(s), std::nullopt, std::nullopt};
    if (auto it = by_id.find(row.signal.speaker); it != by_id.end()) {
      row.speaker_sex = it->second.sex;
      row.speaker_birth_date = it->second.birth_date;
    }
    rows_.push_back(std::move(row));
  }
}

bool matches(const SignalRow& row, const FilterCriterion& c) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          auto code = code_of(row, c.attribute);
          return code && *code == v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return row.signal.accent == v;
        } else if constexpr (std::is_same_v<T, DateRange>) {
          return v.lo <= row.signal.record_date && row.signal.record_date <= v.hi;
        } else if constexpr (std::is_same_v<T, LengthRange>) {
          return v.lo <= row.signal.length_s && row.signal.length_s <= v.hi;
        } else {
          auto age = age_of(row);
          return age && v.lo <= *age && *age <= v.hi;
        }
      },
      c.value);
}

StagedResult staged_search_traced(const SignalTable& table, std::span<const FilterCriterion> criteria) {
  for (const auto& c : criteria) check_criterion(c);

  std::vector<const SignalRow*> sample;
  sample.reserve(table.rows().size());
  for (const auto& row : table.rows()) sample.push_back(&row);

  StagedResult result;
  for (const auto& c : criteria) {
    std::vector<const SignalRow*> next;
    for (const SignalRow* row : sample)
      if (matches(*row, c)) next.push_back(row);
    sample = std::move(next);
    result.stage_sizes.push_back(sample.size());
  }

  result.signals.reserve(sample.size());
  for (const SignalRow* row : sample) result.signals.push_back(row->signal);
  std::sort(result.signals.begin(), result.signals.end(),
            [](const SpeechSignal& a, const SpeechSignal& b) { return a.file_name < b.file_name; });
  return result;
}

std::vector<SpeechSignal> staged_search(const SignalTable& table,
                                        std::span<const FilterCriterion> criteria) {
  return staged_search_traced(table, criteria).signals;
}

std::vector<SpeechSignal> staged_search(const CorpusHandle& h,
                                        std::span<const FilterCriterion> criteria) {
  return staged_search(SignalTable(h), criteria);
}

CorpusStatistics corpus_stats(const CorpusHandle& h) {
  CorpusStatistics st;
  st.sound_unit_count = h.size(tn::kClass);
  st.speech_unit_count = h.size(tn::kSpeechUnit);
  st.speaker_count = h.size(tn::kSpeaker);
  for (const auto& [key, rec] : h.rows(tn::kSpeaker)) ++st.speaker_count_by_sex[store::get_int(rec, "SEX")];
  st.signal_count = h.size(tn::kSpeechSignal);
  for (const auto& [key, rec] : h.rows(tn::kSpeechSignal)) st.total_duration_s += store::get_real(rec, "LENGTH");

  const std::string manual(corpus::to_string(corpus::SegmentationSource::Manual));
  std::set<std::string> segmented;
  for (const auto& [key, rec] : h.rows(tn::kSegmentation)) {
    if (store::get_text(rec, "SOURCE") == manual) segmented.insert(store::get_text(rec, "FILENAME"));
  }
  st.manually_segmented_signal_count = segmented.size();
  return st;
}

Histogram count_by(const SignalTable& table, Attribute a) {
  Histogram out;
  for (const auto& row : table.rows()) {
    if (auto b = bucket_of(row, a)) ++out[*b];
  }
  return out;
}

Histogram count_by(const CorpusHandle& h, Attribute a, CountScope scope) {
  if (scope == CountScope::Speakers) {
    if (a != Attribute::Sex) {
      throw Error(ErrorCode::InvalidArgument,
                  "speaker counts support the sex attribute only, not " + std::string(name_of(a)));
    }
    Histogram out;
    for (const auto& [key, rec] : h.rows(tn::kSpeaker)) ++out[store::get_int(rec, "SEX")];
    return out;
  }
  return count_by(SignalTable(h), a);
}

}  // namespace speechframe::query
