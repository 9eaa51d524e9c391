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

// Shared fixtures for the test binaries: corpus generators, a fixed-shape
// statistics corpus, and brute-force oracles that read the store's raw
// records instead of going through the query layer.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "speechframe/corpus.hpp"
#include "speechframe/query.hpp"

namespace sftest {

using speechframe::Date;
using speechframe::corpus::CorpusHandle;

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

Date ymd(int y, unsigned m, unsigned d);

struct RandomCorpusOptions {
  std::size_t speakers = 20;
  std::size_t units = 12;
  std::size_t signals = 60;
  // Fraction of signals with a manual (and, less often, automatic) segmentation.
  double segmented_fraction = 0.5;
  std::size_t max_segments = 8;
};

// Seeded books plus a few entries in the books the seed leaves empty, the
// 77-unit alphabet, and random speakers, units, signals and segmentation.
CorpusHandle random_corpus(std::mt19937_64& rng, const RandomCorpusOptions& options = {});

// The registry random_corpus writes.
speechframe::refbooks::ReferenceRegistry extended_registry();

// 193 speakers (49 male, 144 female), 77 speech units, 124 signals totalling
// 842.0 s, 103 of them manually segmented by two experts.
CorpusHandle stats_fixture_corpus();

// A random well-typed criterion, mostly over codes present in `registry`.
speechframe::query::FilterCriterion random_criterion(
    std::mt19937_64& rng, const speechframe::refbooks::ReferenceRegistry& registry,
    std::int64_t speaker_count, std::int64_t unit_count);

std::set<std::string> file_names(const std::vector<speechframe::corpus::SpeechSignal>& signals);

// One pass over SPEECH_SIGNAL keeping rows that satisfy every criterion.
std::set<std::string> oracle_conjunction(const CorpusHandle& h,
                                         std::span<const speechframe::query::FilterCriterion> criteria);

speechframe::query::CorpusStatistics oracle_stats(const CorpusHandle& h);

// Manual occurrences of every symbol seen in SEGMENTATION.
std::map<std::string, std::size_t> oracle_manual_counts(const CorpusHandle& h);

// Rows removed by deleting (table, key), found as a fixpoint over cascade
// edges. `restricted` is set when a restrict edge from a surviving row blocks it.
struct CascadeOutcome {
  bool restricted = false;
  std::map<std::string, std::size_t> removed;
};
CascadeOutcome oracle_cascade(const CorpusHandle& h, const std::string& table,
                              const speechframe::store::Key& key);

// Drives random insert / delete_cascade / update_key_cascade operations at
// the store level. Each step records what happened and what the oracles
// predicted so callers can assert on both.
class Mutator {
 public:
  enum class Kind { Insert, Delete, UpdateKey };

  struct Step {
    Kind kind = Kind::Insert;
    std::string table;
    speechframe::store::Key key;
    bool restricted = false;  // delete refused with Error(Restricted)
    CascadeOutcome expected;  // delete only
    speechframe::store::DeletionCounts counts;
    std::size_t rewritten = 0;           // update only
    std::size_t expected_rewritten = 0;  // update only
  };

  Mutator(std::mt19937_64& rng, CorpusHandle& h) : rng_(rng), h_(h) {}
  Step step();

 private:
  Step insert();
  Step remove();
  Step update_key();
  std::optional<speechframe::store::Key> random_key(std::string_view table);
  std::optional<speechframe::store::Value> random_code(std::string_view table);

  std::mt19937_64& rng_;
  CorpusHandle& h_;
  std::int64_t next_id_ = 1000;
};

// Every table file of a saved corpus, by file name.
std::map<std::string, std::string> snapshot_files(const std::filesystem::path& root);

// Table contents as sets of formatted records.
std::map<std::string, std::multiset<std::string>> table_sets(const CorpusHandle& h);

}  // namespace sftest
