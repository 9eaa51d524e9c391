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
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "speechframe/corpus.hpp"

namespace speechframe::corpus {

// Quality thresholds for manual segmentation.
inline constexpr std::size_t kMinSymbolOccurrences = 3;
inline constexpr std::int64_t kMinExperts = 2;

enum class SegmentationIssue {
  PositionStart,      // first position is not 1
  PositionGap,        // positions skip a value
  NegativeStart,
  NonMonotonicStart,  // start_time does not strictly increase
  StartOutOfRange,    // start_time >= signal length
  UnknownSymbol,
};

struct SegmentationViolation {
  SegmentationIssue issue;
  std::int64_t position;
  std::string message;
};

// Empty when positions run 1..N, starts strictly increase from >= 0, every
// start lies inside the signal, and every symbol is in CLASS. An unsegmented
// signal is valid. Throws Error(UnknownSignal).
std::vector<SegmentationViolation> validate_segmentation(const CorpusHandle& h,
                                                         std::string_view file_name,
                                                         SegmentationSource source);

class InvalidSegmentationError : public Error {
 public:
  InvalidSegmentationError(std::string file_name, std::vector<SegmentationViolation> report);
  const std::vector<SegmentationViolation>& report() const { return report_; }

 private:
  std::vector<SegmentationViolation> report_;
};

struct SegmentInterval {
  std::string symbol;
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const SegmentInterval&, const SegmentInterval&) = default;
};

// Each segment ends where the next begins; the last ends at the signal length.
// Throws InvalidSegmentationError or Error(UnknownSignal).
std::vector<SegmentInterval> segment_intervals(const CorpusHandle& h, std::string_view file_name,
                                               SegmentationSource source);

struct CoverageReport {
  std::map<std::string, std::size_t> counts;  // every alphabet symbol, zero included
  std::vector<std::string> under_covered;     // count < kMinSymbolOccurrences, alphabet order
};

CoverageReport symbol_coverage(const CorpusHandle& h, const alphabet::Alphabet& alphabet,
                               SegmentationSource source = SegmentationSource::Manual);

struct ExpertCheckEntry {
  std::string file_name;
  std::int64_t expert_count;  // smallest count among the signal's rows; null counts as 0
  friend bool operator==(const ExpertCheckEntry&, const ExpertCheckEntry&) = default;
};

// Manually segmented signals checked by fewer than kMinExperts experts.
std::vector<ExpertCheckEntry> expert_check_report(const CorpusHandle& h);

struct TempoEstimate {
  double sounds_per_second = 0.0;
  refbooks::SpeechTempo tempo;
};

// Non-pause segments per second of signal, classified into a tempo band.
// Throws InvalidSegmentationError, Error(NoSegments), Error(UnknownSignal).
TempoEstimate estimate_tempo(const CorpusHandle& h, std::string_view file_name,
                             SegmentationSource source);

struct BoundaryComparison {
  std::int64_t position;
  std::string manual_symbol;
  std::string automatic_symbol;
  bool symbol_match;
  double delta;  // automatic start minus manual start, seconds
};

struct AgreementReport {
  std::vector<BoundaryComparison> pairs;
  std::size_t manual_count = 0;
  std::size_t automatic_count = 0;
  bool count_mismatch = false;
  double symbol_agreement = 0.0;  // fraction of pairs with equal symbols
  double max_abs_delta = 0.0;
  double mean_abs_delta = 0.0;
  double within_tolerance = 0.0;  // fraction of pairs with |delta| <= tolerance
};

// Pairs manual and automatic segments by order, up to the shorter sequence.
// Throws Error(MissingVariant) if either segmentation is absent, plus
// InvalidSegmentationError or Error(UnknownSignal | InvalidArgument).
AgreementReport compare_segmentations(const CorpusHandle& h, std::string_view file_name,
                                      double tolerance_s);

}  // namespace speechframe::corpus
