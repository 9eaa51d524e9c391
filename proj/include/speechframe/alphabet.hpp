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

// The sound-unit alphabet (CLASS table), its feature-exclusivity rules, and
// the stress, strength and tempo classifiers.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speechframe/error.hpp"
#include "speechframe/refbooks.hpp"
#include "speechframe/value.hpp"

namespace speechframe::alphabet {

enum class UnitKind { Consonant, Vowel, Pause };

std::string_view to_string(UnitKind kind);

// One row of the CLASS table. Feature fields hold reference-book codes.
struct SoundUnitClass {
  std::string symbol;
  std::int64_t stressed = 0;
  bool vocalized = false;
  std::optional<std::int64_t> soft;
  std::optional<std::int64_t> voiced;
  std::optional<std::int64_t> location;       // consonants only
  std::optional<std::int64_t> way_of_origin;  // consonants only
  std::optional<std::int64_t> labialization;  // vowels only
  std::optional<std::int64_t> rise;           // vowels only
  std::optional<std::int64_t> row;            // vowels only

  friend bool operator==(const SoundUnitClass&, const SoundUnitClass&) = default;
};

// Pause if it carries the pause stress variant, vowel if its voicing is
// "vowel", consonant otherwise.
UnitKind kind_of(const SoundUnitClass& c);

enum class ViolationKind {
  ConsonantFeatureOnVowel,
  VowelFeatureOnConsonant,
  FeatureOnPause,
  MissingFeature,
  SonorantVowel,
  VocalizedMismatch,
  StressMismatch,
  DanglingCode,
  EmptySymbol,
};

struct ClassViolation {
  ViolationKind kind;
  std::string field;
  std::string message;
};

std::vector<ClassViolation> validate_class(const SoundUnitClass& c,
                                           const refbooks::ReferenceRegistry& registry);

class ClassInvalidError : public Error {
 public:
  ClassInvalidError(std::string symbol, std::vector<ClassViolation> report);
  const std::string& symbol() const { return symbol_; }
  const std::vector<ClassViolation>& report() const { return report_; }

 private:
  std::string symbol_;
  std::vector<ClassViolation> report_;
};

class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::string name, std::string language) : name_(std::move(name)), language_(std::move(language)) {}

  const std::string& name() const { return name_; }
  const std::string& language() const { return language_; }

  // Throws Error(DuplicateSymbol). Does not validate features.
  void add(SoundUnitClass c);

  const SoundUnitClass* find(std::string_view symbol) const;
  bool contains(std::string_view symbol) const { return find(symbol) != nullptr; }
  std::size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }
  const std::vector<SoundUnitClass>& units() const { return units_; }
  auto begin() const { return units_.begin(); }
  auto end() const { return units_.end(); }

 private:
  std::string name_;
  std::string language_;
  std::vector<SoundUnitClass> units_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

store::Record to_record(const SoundUnitClass& c);
SoundUnitClass class_from_record(const store::Record& r);

// Parses the line-delimited alphabet format (one CLASS record per line) and
// validates every unit. An empty source yields an empty alphabet.
// Throws ParseError, Error(DuplicateSymbol), or ClassInvalidError.
Alphabet load_alphabet(std::string_view source_text, const refbooks::ReferenceRegistry& registry,
                       std::string name = "", std::string language = "",
                       const std::string& source_label = "<alphabet>");
Alphabet load_alphabet_file(const std::filesystem::path& file,
                            const refbooks::ReferenceRegistry& registry);

// The shipped 77-unit Russian alphabet in the line-delimited format.
std::string_view russian_seed_alphabet();
Alphabet russian_alphabet(const refbooks::ReferenceRegistry& registry);

// Syllable position of an unstressed (or stressed) vowel relative to stress.
// Positions before the second pre-stressed syllable fold into it.
enum class SyllablePosition {
  Stressed,
  FirstPreStressed,
  SecondPreStressedOrEarlier,
  PostStressed,
};

// Vowel strength units: 3 in the stressed syllable, 2 in the first
// pre-stressed, 1 elsewhere.
int potebnya_strength(SyllablePosition position);

enum class StressKind { StressedVowel, UnstressedVowel, Consonant, Pause };

// left_soft/right_soft describe the neighbouring consonants. Stressed vowels
// need both; unstressed vowels need left_soft and a non-stressed
// syllable_position; consonants and pauses take neither.
struct StressContext {
  StressKind kind = StressKind::Consonant;
  std::optional<bool> left_soft;
  std::optional<bool> right_soft;
  std::optional<SyllablePosition> syllable_position;
};

// Throws Error(InconsistentContext).
refbooks::StressVariant stress_variant(const StressContext& ctx);

// Band whose inclusive ceiling is the smallest one >= the rate, or the open
// band. Throws Error(NonPositiveRate) for rates <= 0 (or NaN) and
// Error(NotFound) if the registry defines no band covering the rate.
refbooks::SpeechTempo classify_tempo(double sounds_per_second,
                                     const refbooks::ReferenceRegistry& registry);

// Whitespace-separated symbols, each of which must be in the alphabet.
class UnknownSymbolError : public Error {
 public:
  UnknownSymbolError(std::string token, std::size_t index);
  const std::string& token() const { return token_; }
  std::size_t index() const { return index_; }

 private:
  std::string token_;
  std::size_t index_;
};

std::vector<std::string> tokenize_transcription(std::string_view text, const Alphabet& alphabet);
std::string render_transcription(std::span<const std::string> symbols);

}  // namespace speechframe::alphabet
