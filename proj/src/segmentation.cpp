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

#include "speechframe/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace speechframe::corpus {

namespace tn = store::tables;

namespace {

SpeechSignal require_signal(const CorpusHandle& h, std::string_view file_name) {
  auto s = find_signal(h, file_name);
  if (!s) throw Error(ErrorCode::UnknownSignal, "no signal named " + std::string(file_name));
  return *s;
}

std::string seconds(double s) { return store::to_display(store::Value{s}) + " s"; }

}  // namespace

std::vector<SegmentationViolation> validate_segmentation(const CorpusHandle& h,
                                                         std::string_view file_name,
                                                         SegmentationSource source) {
  const SpeechSignal signal = require_signal(h, file_name);
  const auto segs = segmentation(h, file_name, source);
  std::vector<SegmentationViolation> out;
  if (segs.empty()) return out;

  if (segs.front().position != 1) {
    out.push_back({SegmentationIssue::PositionStart, segs.front().position,
                   "positions start at " + std::to_string(segs.front().position) + ", expected 1"});
  }
  if (segs.front().start_time < 0) {
    out.push_back({SegmentationIssue::NegativeStart, segs.front().position,
                   "negative start at position " + std::to_string(segs.front().position)});
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    if (i > 0) {
      const auto& prev = segs[i - 1];
      if (s.position != prev.position + 1) {
        out.push_back({SegmentationIssue::PositionGap, s.position,
                       "position gap after " + std::to_string(prev.position)});
      }
      if (!(s.start_time > prev.start_time)) {
        out.push_back({SegmentationIssue::NonMonotonicStart, s.position,
                       "non-monotonic start at position " + std::to_string(s.position)});
      }
    }
    if (!(s.start_time < signal.length_s)) {
      out.push_back({SegmentationIssue::StartOutOfRange, s.position,
                     "start " + seconds(s.start_time) + " at position " + std::to_string(s.position) +
                         " is outside the " + seconds(signal.length_s) + " signal"});
    }
    if (!h.find(tn::kClass, store::Key{store::Value{s.symbol}})) {
      out.push_back({SegmentationIssue::UnknownSymbol, s.position,
                     "unknown symbol \"" + s.symbol + "\" at position " + std::to_string(s.position)});
    }
  }
  return out;
}

InvalidSegmentationError::InvalidSegmentationError(std::string file_name,
                                                   std::vector<SegmentationViolation> report)
    : Error(ErrorCode::InvalidSegmentation,
            [&] {
              std::string msg = "invalid segmentation of " + file_name;
              for (const auto& v : report) msg += "; " + v.message;
              return msg;
            }()),
      report_(std::move(report)) {}

namespace {

std::vector<SegmentationRecord> validated(const CorpusHandle& h, std::string_view file_name,
                                          SegmentationSource source) {
  if (auto report = validate_segmentation(h, file_name, source); !report.empty()) {
    throw InvalidSegmentationError(std::string(file_name), std::move(report));
  }
  return segmentation(h, file_name, source);
}

}  // namespace

std::vector<SegmentInterval> segment_intervals(const CorpusHandle& h, std::string_view file_name,
                                               SegmentationSource source) {
  const auto segs = validated(h, file_name, source);
  const double length = require_signal(h, file_name).length_s;
  std::vector<SegmentInterval> out;
  out.reserve(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double end = i + 1 < segs.size() ? segs[i + 1].start_time : length;
    out.push_back({segs[i].symbol, segs[i].start_time, end});
  }
  return out;
}

CoverageReport symbol_coverage(const CorpusHandle& h, const alphabet::Alphabet& alphabet,
                               SegmentationSource source) {
  CoverageReport report;
  for (const auto& unit : alphabet) report.counts[unit.symbol] = 0;
  const std::string source_text(to_string(source));
  for (const auto& [key, rec] : h.rows(tn::kSegmentation)) {
    if (store::get_text(rec, "SOURCE") != source_text) continue;
    auto it = report.counts.find(store::get_text(rec, "TYPE_ID"));
    if (it != report.counts.end()) ++it->second;
  }
  for (const auto& unit : alphabet) {
    if (report.counts[unit.symbol] < kMinSymbolOccurrences) report.under_covered.push_back(unit.symbol);
  }
  return report;
}

std::vector<ExpertCheckEntry> expert_check_report(const CorpusHandle& h) {
  const std::string manual(to_string(SegmentationSource::Manual));
  std::map<std::string, std::int64_t> least;
  for (const auto& [key, rec] : h.rows(tn::kSegmentation)) {
    if (store::get_text(rec, "SOURCE") != manual) continue;
    const std::int64_t n = store::get_opt_int(rec, "EXPERT_COUNT").value_or(0);
    auto [it, fresh] = least.try_emplace(store::get_text(rec, "FILENAME"), n);
    if (!fresh) it->second = std::min(it->second, n);
  }
  std::vector<ExpertCheckEntry> out;
  for (const auto& [file, n] : least) {
    if (n < kMinExperts) out.push_back({file, n});
  }
  return out;
}

TempoEstimate estimate_tempo(const CorpusHandle& h, std::string_view file_name,
                             SegmentationSource source) {
  const auto segs = validated(h, file_name, source);
  const double length = require_signal(h, file_name).length_s;
  std::size_t sounds = 0;
  for (const auto& s : segs) {
    const store::Record* cls = h.find(tn::kClass, store::Key{store::Value{s.symbol}});
    if (cls && alphabet::kind_of(alphabet::class_from_record(*cls)) != alphabet::UnitKind::Pause) {
      ++sounds;
    }
  }
  if (sounds == 0) {
    throw Error(ErrorCode::NoSegments, "signal " + std::string(file_name) + " has no sound segments");
  }
  TempoEstimate est;
  est.sounds_per_second = static_cast<double>(sounds) / length;
  est.tempo = alphabet::classify_tempo(est.sounds_per_second, registry_of(h));
  return est;
}

AgreementReport compare_segmentations(const CorpusHandle& h, std::string_view file_name,
                                      double tolerance_s) {
  if (!(tolerance_s >= 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be non-negative");
  require_signal(h, file_name);
  const bool has_manual = !segmentation(h, file_name, SegmentationSource::Manual).empty();
  const bool has_auto = !segmentation(h, file_name, SegmentationSource::Automatic).empty();
  if (!has_manual || !has_auto) {
    throw Error(ErrorCode::MissingVariant,
                std::string(file_name) + " lacks " + (has_manual ? "automatic" : "manual") +
                    " segmentation");
  }
  const auto manual = validated(h, file_name, SegmentationSource::Manual);
  const auto automatic = validated(h, file_name, SegmentationSource::Automatic);

  AgreementReport r;
  r.manual_count = manual.size();
  r.automatic_count = automatic.size();
  r.count_mismatch = manual.size() != automatic.size();
  const std::size_t n = std::min(manual.size(), automatic.size());
  std::size_t matches = 0, within = 0;
  double sum_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    BoundaryComparison c{manual[i].position, manual[i].symbol, automatic[i].symbol,
                         manual[i].symbol == automatic[i].symbol,
                         automatic[i].start_time - manual[i].start_time};
    const double abs_delta = std::abs(c.delta);
    matches += c.symbol_match;
    within += abs_delta <= tolerance_s;
    sum_abs += abs_delta;
    r.max_abs_delta = std::max(r.max_abs_delta, abs_delta);
    r.pairs.push_back(std::move(c));
  }
  if (n > 0) {
    r.symbol_agreement = static_cast<double>(matches) / static_cast<double>(n);
    r.mean_abs_delta = sum_abs / static_cast<double>(n);
    r.within_tolerance = static_cast<double>(within) / static_cast<double>(n);
  }
  return r;
}

}  // namespace speechframe::corpus
