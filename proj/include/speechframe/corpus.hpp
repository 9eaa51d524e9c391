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

// Typed records for speakers, speech units, signals and segmentation, and the
// domain checks layered on top of the store's key discipline.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "speechframe/alphabet.hpp"
#include "speechframe/date.hpp"
#include "speechframe/refbooks.hpp"
#include "speechframe/store.hpp"

namespace speechframe::corpus {

using store::CorpusHandle;

struct Speaker {
  std::int64_t id = 0;
  std::int64_t sex = 0;
  std::string name;
  std::string surname;
  std::string patronymic;  // FAMILY_NAME
  Date birth_date{};

  friend bool operator==(const Speaker&, const Speaker&) = default;
};

struct SpeechUnit {
  std::int64_t id = 0;
  std::string spelling;
  std::vector<std::string> transcription;
  std::int64_t unit_type = 0;

  friend bool operator==(const SpeechUnit&, const SpeechUnit&) = default;
};

struct SpeechSignal {
  std::string file_name;
  std::int64_t speech_unit = 0;
  double length_s = 0.0;
  Date record_date{};
  std::int64_t file_format = 0;
  std::int64_t noise = refbooks::kNoNoise;
  std::int64_t recording_device = 0;
  std::int64_t dialect = 0;
  std::int64_t acoustic_environment = 0;
  std::optional<std::int64_t> speech_type;
  std::int64_t voice_type = 0;
  std::int64_t speech_tempo = 0;
  std::optional<std::int64_t> channel;
  std::optional<std::int64_t> sickness;
  std::optional<std::int64_t> speech_defect;
  std::int64_t emotional_state = refbooks::kNeutralEmotion;
  std::int64_t speaker = 0;
  bool accent = false;  // ACIENT

  friend bool operator==(const SpeechSignal&, const SpeechSignal&) = default;
};

enum class SegmentationSource { Manual, Automatic };

std::string_view to_string(SegmentationSource source);
// Throws Error(InvalidArgument).
SegmentationSource parse_source(std::string_view text);

struct SegmentationRecord {
  std::int64_t position = 1;  // 1-based
  std::string file_name;
  double start_time = 0.0;  // seconds
  std::string symbol;
  SegmentationSource source = SegmentationSource::Manual;
  std::optional<std::int64_t> expert_count;  // manual segmentation only

  friend bool operator==(const SegmentationRecord&, const SegmentationRecord&) = default;
};

store::Record to_record(const Speaker& s);
store::Record to_record(const SpeechUnit& u);
store::Record to_record(const SpeechSignal& s);
store::Record to_record(const SegmentationRecord& s);

// Transcriptions are stored in rendered form and split on whitespace here;
// alphabet membership is checked on insert, not on read.
Speaker speaker_from_record(const store::Record& r);
SpeechUnit speech_unit_from_record(const store::Record& r);
SpeechSignal signal_from_record(const store::Record& r);
SegmentationRecord segment_from_record(const store::Record& r);

// Completed calendar years from birth_date to as_of.
// Throws Error(NegativeInterval) if as_of precedes birth_date.
int speaker_age(Date birth_date, Date as_of);

// An in-memory corpus with seeded reference books and, optionally, the
// shipped 77-unit Russian alphabet in CLASS.
CorpusHandle create_corpus(bool with_seed_alphabet);

// Materializes create_corpus(...) under `root`, which must be absent or an
// empty directory. Throws Error(InvalidArgument) otherwise.
CorpusHandle init_corpus(const std::filesystem::path& root, bool with_seed_alphabet);

refbooks::ReferenceRegistry registry_of(const CorpusHandle& h);
// The CLASS table as an alphabet, rows in symbol order.
alphabet::Alphabet alphabet_of(const CorpusHandle& h);

// Domain-checked inserts. Each validates what the store cannot express and
// then defers to CorpusHandle::insert for key and reference checks.
// Throws Error(InvalidArgument) for domain violations, UnknownSymbolError for
// transcriptions outside the alphabet, Error(UnknownSignal) for segmentation
// of an absent signal, plus any store error.
void add_speaker(CorpusHandle& h, const Speaker& s, Date as_of = today());
void add_speech_unit(CorpusHandle& h, const SpeechUnit& u);
void add_signal(CorpusHandle& h, const SpeechSignal& s);
void add_segment(CorpusHandle& h, const SegmentationRecord& s);

// Runs the domain checks for `table` on a raw record, then inserts it.
// Reference-book rows are validated against the registry invariants, CLASS
// rows against validate_class.
store::Key insert_checked(CorpusHandle& h, std::string_view table, store::Record record);

// Reads, in key order.
std::vector<Speaker> speakers(const CorpusHandle& h);
std::vector<SpeechUnit> speech_units(const CorpusHandle& h);
std::vector<SpeechSignal> signals(const CorpusHandle& h);
std::optional<SpeechSignal> find_signal(const CorpusHandle& h, std::string_view file_name);
// Segmentation of one signal and source, ordered by position.
std::vector<SegmentationRecord> segmentation(const CorpusHandle& h, std::string_view file_name,
                                             SegmentationSource source);

}  // namespace speechframe::corpus
