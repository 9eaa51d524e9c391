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

// Multi-parameter search over speech-signal descriptions and corpus
// statistics.
//
// A search runs in stages: the first criterion samples the whole signal
// table, each following criterion filters the previous stage's sample, and
// the final sample is returned. Results are sets (ordered by file name), so
// the order of criteria never changes the outcome.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "speechframe/corpus.hpp"

namespace speechframe::query {

using corpus::CorpusHandle;
using corpus::SpeechSignal;

enum class Attribute {
  Sex,
  Dialect,
  Emotion,
  VoiceType,
  SpeechType,
  Tempo,
  Sickness,
  Defect,
  Accent,
  Environment,
  Channel,
  Device,
  Noise,
  Format,
  RecordDate,
  Length,
  Speaker,
  SpeakerAge,
  Unit,
};

std::span<const Attribute> searchable_attributes();
std::string_view name_of(Attribute a);
// Throws Error(UnknownAttribute); the message lists the valid names.
Attribute parse_attribute(std::string_view name);
std::string attribute_list();

enum class ValueShape { Code, Flag, DateRange, LengthRange, AgeRange };
ValueShape shape_of(Attribute a);
// Reference book whose titles name the codes of a Code attribute, if any.
std::optional<std::string_view> book_of(Attribute a);

// Inclusive ranges.
struct DateRange {
  Date lo{std::chrono::year::min(), std::chrono::January, std::chrono::day{1}};
  Date hi{std::chrono::year::max(), std::chrono::December, std::chrono::day{31}};
  friend bool operator==(const DateRange&, const DateRange&) = default;
};
struct LengthRange {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  friend bool operator==(const LengthRange&, const LengthRange&) = default;
};
struct AgeRange {
  int lo = 0;
  int hi = std::numeric_limits<int>::max();
  friend bool operator==(const AgeRange&, const AgeRange&) = default;
};

using CriterionValue = std::variant<std::int64_t, bool, DateRange, LengthRange, AgeRange>;

struct FilterCriterion {
  Attribute attribute;
  CriterionValue value;
  friend bool operator==(const FilterCriterion&, const FilterCriterion&) = default;
};

// Throws Error(TypeMismatch) when the value shape does not fit the attribute
// and Error(InvalidArgument) for empty ranges.
void check_criterion(const FilterCriterion& c);

// Parses "attribute=value". Codes may be given as integers or as exact
// reference-book titles; ranges are "lo..hi" with either bound optional.
// Throws Error(UnknownAttribute | TypeMismatch | UnknownCode | InvalidArgument).
FilterCriterion parse_criterion(std::string_view expr, const refbooks::ReferenceRegistry& registry);
std::string format_criterion(const FilterCriterion& c);

// A signal joined with the speaker fields that criteria can reference.
struct SignalRow {
  SpeechSignal signal;
  std::optional<std::int64_t> speaker_sex;
  std::optional<Date> speaker_birth_date;
};

// The signal table materialized once so repeated searches skip record
// decoding.
class SignalTable {
 public:
  explicit SignalTable(const CorpusHandle& h);
  const std::vector<SignalRow>& rows() const { return rows_; }

 private:
  std::vector<SignalRow> rows_;
};

// Speaker age criteria are evaluated at the signal's record date.
bool matches(const SignalRow& row, const FilterCriterion& c);

struct StagedResult {
  std::vector<SpeechSignal> signals;      // ordered by file name
  std::vector<std::size_t> stage_sizes;  // sample size after each stage
};

StagedResult staged_search_traced(const SignalTable& table, std::span<const FilterCriterion> criteria);
std::vector<SpeechSignal> staged_search(const SignalTable& table,
                                        std::span<const FilterCriterion> criteria);
std::vector<SpeechSignal> staged_search(const CorpusHandle& h,
                                        std::span<const FilterCriterion> criteria);

struct CorpusStatistics {
  std::size_t sound_unit_count = 0;   // CLASS rows
  std::size_t speech_unit_count = 0;  // SPEECH_UNIT rows
  std::size_t speaker_count = 0;
  std::map<std::int64_t, std::size_t> speaker_count_by_sex;
  std::size_t signal_count = 0;
  double total_duration_s = 0.0;
  std::size_t manually_segmented_signal_count = 0;
  friend bool operator==(const CorpusStatistics&, const CorpusStatistics&) = default;
};

CorpusStatistics corpus_stats(const CorpusHandle& h);

using Histogram = std::map<std::int64_t, std::size_t>;

enum class CountScope { Signals, Speakers };

// Signal histogram keyed by code (Accent: 0/1, SpeakerAge: years at record
// date, RecordDate: year, Length: whole seconds). Null values are skipped.
// The Speakers scope counts speakers instead and supports Sex only.
// Throws Error(InvalidArgument) for unsupported scope/attribute pairs.
Histogram count_by(const CorpusHandle& h, Attribute a, CountScope scope = CountScope::Signals);
Histogram count_by(const SignalTable& table, Attribute a);

// Canned queries: named presets that reduce to staged_search or count_by.
enum class QueryKind { Search, Count };

struct CannedQuery {
  std::string name;
  std::string description;
  QueryKind kind = QueryKind::Search;
  // Search parameters in stage order, with default values.
  std::vector<FilterCriterion> parameters;
  Attribute count_attribute = Attribute::Sex;  // Count queries only
  CountScope scope = CountScope::Signals;
};

inline constexpr std::size_t kCannedQueryCount = 37;

const std::vector<CannedQuery>& list_canned_queries();
// Throws Error(NotFound).
const CannedQuery& find_canned_query(std::string_view name);

using QueryResult = std::variant<std::vector<SpeechSignal>, Histogram>;

// `arguments[i]` replaces the default of parameter i; fewer arguments keep
// the remaining defaults. Throws Error(InvalidArgument | TypeMismatch).
QueryResult run_canned_query(const CorpusHandle& h, const CannedQuery& q,
                             std::span<const CriterionValue> arguments = {});

}  // namespace speechframe::query
