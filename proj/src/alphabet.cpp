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

#include "speechframe/alphabet.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "speechframe/schema.hpp"
#include "speechframe/store.hpp"

namespace speechframe::alphabet {

namespace tn = store::tables;
using refbooks::StressVariant;

std::string_view to_string(UnitKind kind) {
  switch (kind) {
    case UnitKind::Consonant: return "consonant";
    case UnitKind::Vowel: return "vowel";
    case UnitKind::Pause: return "pause";
  }
  return "?";
}

UnitKind kind_of(const SoundUnitClass& c) {
  if (c.stressed == refbooks::code(StressVariant::Pause)) return UnitKind::Pause;
  if (c.voiced == refbooks::code(refbooks::Voicing::Vowel)) return UnitKind::Vowel;
  return UnitKind::Consonant;
}

namespace {

struct FeatureSlot {
  const char* field;
  std::string_view book;
  const std::optional<std::int64_t>& value;
};

bool is_vowel_variant(std::int64_t stressed) {
  return stressed >= refbooks::code(StressVariant::StressedHardHard) &&
         stressed <= refbooks::code(StressVariant::UnstressedReserved);
}

}  // namespace

std::vector<ClassViolation> validate_class(const SoundUnitClass& c,
                                           const refbooks::ReferenceRegistry& registry) {
  std::vector<ClassViolation> out;
  auto add = [&out](ViolationKind k, std::string field, std::string msg) {
    out.push_back({k, std::move(field), std::move(msg)});
  };
  if (c.symbol.empty()) add(ViolationKind::EmptySymbol, "SYMBOL", "empty symbol");

  const FeatureSlot consonant_only[] = {
      {"LOCATION", tn::kLocation, c.location},
      {"WAY_OF_ORIGIN", tn::kWayOfOrigin, c.way_of_origin},
  };
  const FeatureSlot vowel_only[] = {
      {"LABIALIZATION", tn::kLabialization, c.labialization},
      {"RISE", tn::kRise, c.rise},
      {"ROW", tn::kRow, c.row},
  };
  const FeatureSlot shared[] = {
      {"SOFT", tn::kSoft, c.soft},
      {"VOICED", tn::kVoiced, c.voiced},
  };

  switch (kind_of(c)) {
    case UnitKind::Pause:
      for (const auto& slots : {std::span<const FeatureSlot>(consonant_only),
                                std::span<const FeatureSlot>(vowel_only),
                                std::span<const FeatureSlot>(shared)}) {
        for (const auto& s : slots) {
          if (s.value) add(ViolationKind::FeatureOnPause, s.field, std::string("phonetic feature on pause: ") + s.field);
        }
      }
      if (c.vocalized) add(ViolationKind::VocalizedMismatch, "VOCALIZED", "pause marked vocalized");
      break;

    case UnitKind::Vowel:
      for (const auto& s : consonant_only) {
        if (s.value) add(ViolationKind::ConsonantFeatureOnVowel, s.field, std::string("consonant-only feature on vowel: ") + s.field);
      }
      for (const auto& s : vowel_only) {
        if (!s.value) add(ViolationKind::MissingFeature, s.field, std::string("vowel lacks ") + s.field);
      }
      if (c.soft == refbooks::code(refbooks::Softness::Sonorant)) {
        add(ViolationKind::SonorantVowel, "SOFT", "sonorant softness on vowel");
      }
      if (!c.vocalized) add(ViolationKind::VocalizedMismatch, "VOCALIZED", "vowel not marked vocalized");
      if (!is_vowel_variant(c.stressed)) {
        add(ViolationKind::StressMismatch, "STRESSED", "vowel carries a non-vowel stress variant");
      }
      break;

    case UnitKind::Consonant:
      for (const auto& s : vowel_only) {
        if (s.value) add(ViolationKind::VowelFeatureOnConsonant, s.field, std::string("vowel-only feature on consonant: ") + s.field);
      }
      for (const auto& s : consonant_only) {
        if (!s.value) add(ViolationKind::MissingFeature, s.field, std::string("consonant lacks ") + s.field);
      }
      for (const auto& s : shared) {
        if (!s.value) add(ViolationKind::MissingFeature, s.field, std::string("consonant lacks ") + s.field);
      }
      if (c.vocalized) add(ViolationKind::VocalizedMismatch, "VOCALIZED", "consonant marked vocalized");
      if (c.stressed != refbooks::code(StressVariant::Consonant)) {
        add(ViolationKind::StressMismatch, "STRESSED", "consonant carries a vowel or pause stress variant");
      }
      break;
  }

  auto check_code = [&](const char* field, std::string_view book, std::optional<std::int64_t> v) {
    if (v && !registry.contains(book, *v)) {
      add(ViolationKind::DanglingCode, field,
          std::string(field) + " code " + std::to_string(*v) + " is not in " + std::string(book));
    }
  };
  check_code("STRESSED", tn::kStressed, c.stressed);
  for (const auto& slots : {std::span<const FeatureSlot>(consonant_only),
                            std::span<const FeatureSlot>(vowel_only),
                            std::span<const FeatureSlot>(shared)}) {
    for (const auto& s : slots) check_code(s.field, s.book, s.value);
  }
  return out;
}

ClassInvalidError::ClassInvalidError(std::string symbol, std::vector<ClassViolation> report)
    : Error(ErrorCode::ClassInvalid,
            [&] {
              std::string msg = "sound unit \"" + symbol + "\" is invalid";
              for (const auto& v : report) msg += "; " + v.message;
              return msg;
            }()),
      symbol_(std::move(symbol)),
      report_(std::move(report)) {}

void Alphabet::add(SoundUnitClass c) {
  if (index_.count(c.symbol)) {
    throw Error(ErrorCode::DuplicateSymbol, "duplicate symbol \"" + c.symbol + "\"");
  }
  index_.emplace(c.symbol, units_.size());
  units_.push_back(std::move(c));
}

const SoundUnitClass* Alphabet::find(std::string_view symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? nullptr : &units_[it->second];
}

store::Record to_record(const SoundUnitClass& c) {
  using store::Value;
  using store::optional_value;
  return {{"SYMBOL", Value{c.symbol}},
          {"STRESSED", Value{c.stressed}},
          {"VOCALIZED", Value{c.vocalized}},
          {"SOFT", optional_value(c.soft)},
          {"VOICED", optional_value(c.voiced)},
          {"LOCATION", optional_value(c.location)},
          {"WAY_OF_ORIGIN", optional_value(c.way_of_origin)},
          {"LABIALIZATION", optional_value(c.labialization)},
          {"RISE", optional_value(c.rise)},
          {"ROW", optional_value(c.row)}};
}

SoundUnitClass class_from_record(const store::Record& r) {
  using namespace store;
  SoundUnitClass c;
  c.symbol = get_text(r, "SYMBOL");
  c.stressed = get_int(r, "STRESSED");
  c.vocalized = get_bool(r, "VOCALIZED");
  c.soft = get_opt_int(r, "SOFT");
  c.voiced = get_opt_int(r, "VOICED");
  c.location = get_opt_int(r, "LOCATION");
  c.way_of_origin = get_opt_int(r, "WAY_OF_ORIGIN");
  c.labialization = get_opt_int(r, "LABIALIZATION");
  c.rise = get_opt_int(r, "RISE");
  c.row = get_opt_int(r, "ROW");
  return c;
}

Alphabet load_alphabet(std::string_view source_text, const refbooks::ReferenceRegistry& registry,
                       std::string name, std::string language, const std::string& source_label) {
  const auto& schema = store::default_schema()->table(tn::kClass);
  Alphabet alphabet(std::move(name), std::move(language));
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < source_text.size()) {
    std::size_t eol = source_text.find('\n', pos);
    if (eol == std::string_view::npos) eol = source_text.size();
    std::string_view line = source_text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    SoundUnitClass c = class_from_record(store::parse_record(schema, line, source_label, line_no));
    if (alphabet.contains(c.symbol)) {
      throw Error(ErrorCode::DuplicateSymbol, source_label + ":" + std::to_string(line_no) +
                                                  ": duplicate symbol \"" + c.symbol + "\"");
    }
    if (auto report = validate_class(c, registry); !report.empty()) {
      throw ClassInvalidError(c.symbol, std::move(report));
    }
    alphabet.add(std::move(c));
  }
  return alphabet;
}

Alphabet load_alphabet_file(const std::filesystem::path& file,
                            const refbooks::ReferenceRegistry& registry) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_alphabet(buf.str(), registry, file.stem().string(), "", file.string());
}

Alphabet russian_alphabet(const refbooks::ReferenceRegistry& registry) {
  return load_alphabet(russian_seed_alphabet(), registry, "russian",
                       std::string(refbooks::kRussian), "russian_alphabet.jsonl");
}

int potebnya_strength(SyllablePosition position) {
  switch (position) {
    case SyllablePosition::Stressed: return 3;
    case SyllablePosition::FirstPreStressed: return 2;
    case SyllablePosition::SecondPreStressedOrEarlier: return 1;
    case SyllablePosition::PostStressed: return 1;
  }
  return 1;
}

StressVariant stress_variant(const StressContext& ctx) {
  auto inconsistent = [](const char* what) -> StressVariant {
    throw Error(ErrorCode::InconsistentContext, what);
  };
  switch (ctx.kind) {
    case StressKind::Consonant:
    case StressKind::Pause:
      if (ctx.left_soft || ctx.right_soft || ctx.syllable_position) {
        return inconsistent("consonant and pause contexts take no neighbour or position data");
      }
      return ctx.kind == StressKind::Consonant ? StressVariant::Consonant : StressVariant::Pause;

    case StressKind::StressedVowel:
      if (!ctx.left_soft || !ctx.right_soft) {
        return inconsistent("stressed vowel needs the softness of both neighbours");
      }
      if (ctx.syllable_position) return inconsistent("syllable position applies to unstressed vowels only");
      if (!*ctx.left_soft) {
        return *ctx.right_soft ? StressVariant::StressedHardSoft : StressVariant::StressedHardHard;
      }
      return *ctx.right_soft ? StressVariant::StressedSoftSoft : StressVariant::StressedSoftHard;

    case StressKind::UnstressedVowel: {
      if (!ctx.left_soft) return inconsistent("unstressed vowel needs the softness of the preceding consonant");
      if (ctx.right_soft) return inconsistent("right neighbour applies to stressed vowels only");
      if (!ctx.syllable_position || *ctx.syllable_position == SyllablePosition::Stressed) {
        return inconsistent("unstressed vowel needs a pre- or post-stressed position");
      }
      const bool strong = potebnya_strength(*ctx.syllable_position) == 2;
      if (*ctx.left_soft) {
        return strong ? StressVariant::UnstressedStrength2AfterSoft
                      : StressVariant::UnstressedStrength1AfterSoft;
      }
      return strong ? StressVariant::UnstressedStrength2AfterHard
                    : StressVariant::UnstressedStrength1AfterHard;
    }
  }
  return inconsistent("unknown stress kind");
}

refbooks::SpeechTempo classify_tempo(double sounds_per_second,
                                     const refbooks::ReferenceRegistry& registry) {
  if (!(sounds_per_second > 0) || std::isnan(sounds_per_second)) {
    throw Error(ErrorCode::NonPositiveRate, "speech rate must be positive");
  }
  for (const auto& band : registry.tempos()) {
    if (!band.sounds_per_second_ceiling ||
        sounds_per_second <= static_cast<double>(*band.sounds_per_second_ceiling)) {
      return band;
    }
  }
  throw Error(ErrorCode::NotFound, "no tempo band covers the rate");
}

UnknownSymbolError::UnknownSymbolError(std::string token, std::size_t index)
    : Error(ErrorCode::UnknownSymbol,
            "unknown symbol \"" + token + "\" at index " + std::to_string(index)),
      token_(std::move(token)),
      index_(index) {}

std::vector<std::string> tokenize_transcription(std::string_view text, const Alphabet& alphabet) {
  constexpr std::string_view kSpace = " \t\r\n";
  std::vector<std::string> out;
  std::size_t pos = text.find_first_not_of(kSpace);
  while (pos != std::string_view::npos) {
    std::size_t end = text.find_first_of(kSpace, pos);
    std::string token(text.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (!alphabet.contains(token)) throw UnknownSymbolError(token, out.size());
    out.push_back(std::move(token));
    pos = end == std::string_view::npos ? end : text.find_first_not_of(kSpace, end);
  }
  return out;
}

std::string render_transcription(std::span<const std::string> symbols) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ' ';
    out += symbols[i];
  }
  return out;
}

}  // namespace speechframe::alphabet
