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

// Controlled vocabularies ("reference books") behind every foreign key of the
// corpus. Book names are the table names of the store schema.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "speechframe/schema.hpp"

namespace speechframe::store {
class CorpusHandle;
}

namespace speechframe::refbooks {

// Pass as an entry code to have add_* pick the next free code.
inline constexpr std::int64_t kAssignCode = -1;

// Seeded codes. The seed assigns these exact values, and classification code
// elsewhere relies on them.
enum class Sex : std::int64_t { Male = 1, Female = 2 };
enum class Softness : std::int64_t { Hard = 1, Soft = 2, Sonorant = 3 };
enum class Voicing : std::int64_t { Voiceless = 1, Voiced = 2, Vowel = 3 };
enum class Labialization : std::int64_t { Labialized = 1, NonLabialized = 2 };
enum class Rise : std::int64_t { Upper = 1, Middle = 2, Lower = 3 };
enum class Row : std::int64_t { Front = 1, Central = 2, Back = 3 };
enum class Location : std::int64_t { Labial = 1, Dental = 2, Palatal = 3, Velar = 4 };
enum class Manner : std::int64_t {
  OcclusivePlosive = 1,
  OcclusiveAffricate = 2,
  OcclusiveNasal = 3,
  Slotted = 4,
};
enum class VoiceType : std::int64_t { Talking = 1, Singing = 2, Whispering = 3, Esophageal = 4 };
enum class UnitType : std::int64_t { Syllable = 1, Phrase = 2, Text = 3, Sound = 4 };
enum class TempoBand : std::int64_t { Normal = 1, Accelerated = 2, Fast = 3 };

// The eleven stress variants: four stressed-vowel contexts, five unstressed
// slots (the fifth is reserved and never produced by classification), one
// for consonants and one for pauses.
enum class StressVariant : std::int64_t {
  StressedHardHard = 1,
  StressedHardSoft = 2,
  StressedSoftHard = 3,
  StressedSoftSoft = 4,
  UnstressedStrength2AfterHard = 5,
  UnstressedStrength1AfterHard = 6,
  UnstressedStrength2AfterSoft = 7,
  UnstressedStrength1AfterSoft = 8,
  UnstressedReserved = 9,
  Consonant = 10,
  Pause = 11,
};

inline constexpr std::int64_t kNoNoise = 0;
inline constexpr std::int64_t kNeutralEmotion = 1;
inline constexpr std::int64_t kOfficeEnvironment = 1;
inline constexpr std::int64_t kCarEnvironment = 2;
inline constexpr std::string_view kRussian = "Russian";

template <typename E>
constexpr std::int64_t code(E e) {
  return static_cast<std::int64_t>(e);
}

struct RefEntry {
  std::int64_t code = kAssignCode;
  std::string title;
  friend bool operator==(const RefEntry&, const RefEntry&) = default;
};

struct AcousticEnvironment {
  std::int64_t code = kAssignCode;
  double noise_level_db = 0.0;
  std::string title;
  friend bool operator==(const AcousticEnvironment&, const AcousticEnvironment&) = default;
};

struct Dialect {
  std::int64_t code = kAssignCode;
  std::string title;
  std::string language;
  friend bool operator==(const Dialect&, const Dialect&) = default;
};

struct SpeechTempo {
  std::int64_t code = kAssignCode;
  std::string name;
  // Inclusive upper bound in sounds per second; nullopt is the open top band.
  std::optional<std::int64_t> sounds_per_second_ceiling;
  friend bool operator==(const SpeechTempo&, const SpeechTempo&) = default;
};

struct FileFormat {
  std::int64_t code = kAssignCode;
  double sampling_frequency_hz = 0.0;
  std::int64_t bit_depth = 0;
  std::string file_type;
  std::int64_t channel_count = 1;
  friend bool operator==(const FileFormat&, const FileFormat&) = default;
};

struct NoiseProfile {
  std::int64_t code = kAssignCode;
  std::string description;
  std::optional<double> snr_db;  // absent for the no-noise profile
  friend bool operator==(const NoiseProfile&, const NoiseProfile&) = default;
};

struct RecordingDevice {
  std::int64_t code = kAssignCode;
  std::string device_type;
  double bandwidth_hz = 0.0;
  friend bool operator==(const RecordingDevice&, const RecordingDevice&) = default;
};

class ReferenceRegistry {
 public:
  // An empty registry: every book exists but holds no entries (the reserved
  // no-noise profile is always present).
  ReferenceRegistry();

  std::vector<std::string> book_names() const;
  bool has_book(std::string_view book) const;

  // Code and display title of an entry in any book. Throws
  // Error(UnknownBook | UnknownCode).
  RefEntry lookup(std::string_view book, std::int64_t code) const;
  bool contains(std::string_view book, std::int64_t code) const;
  // Exact title match.
  std::optional<std::int64_t> find_code(std::string_view book, std::string_view title) const;
  // All entries of a book in code order, projected to code + title.
  std::vector<RefEntry> entries(std::string_view book) const;
  std::size_t size(std::string_view book) const { return entries(book).size(); }

  // Adds a code + title entry. Books whose rows carry more than a title
  // (dialects, tempos, environments, formats, devices) need the typed adders;
  // NOISE accepts a title-only entry with no SNR.
  // Throws Error(UnknownBook | DuplicateTitle | ReservedCode | DuplicateKey |
  // InvalidArgument).
  std::int64_t add_entry(std::string_view book, RefEntry entry);

  std::int64_t add_environment(AcousticEnvironment e);
  std::int64_t add_dialect(Dialect d);
  std::int64_t add_tempo(SpeechTempo t);
  std::int64_t add_file_format(FileFormat f);
  std::int64_t add_noise(NoiseProfile n);
  std::int64_t add_device(RecordingDevice d);

  const std::vector<AcousticEnvironment>& environments() const { return environments_; }
  const std::vector<Dialect>& dialects() const { return dialects_; }
  std::vector<Dialect> dialects(std::string_view language) const;
  // Ordered by ceiling, open band last.
  std::vector<SpeechTempo> tempos() const;
  const std::vector<FileFormat>& file_formats() const { return file_formats_; }
  const std::vector<NoiseProfile>& noises() const { return noises_; }
  const std::vector<RecordingDevice>& devices() const { return devices_; }

  friend bool operator==(const ReferenceRegistry&, const ReferenceRegistry&) = default;

 private:
  std::map<std::string, std::vector<RefEntry>, std::less<>> simple_;
  std::vector<AcousticEnvironment> environments_;
  std::vector<Dialect> dialects_;
  std::vector<SpeechTempo> tempos_;
  std::vector<FileFormat> file_formats_;
  std::vector<NoiseProfile> noises_;
  std::vector<RecordingDevice> devices_;
};

// Every vocabulary with a known enumeration, populated with fixed codes.
ReferenceRegistry seed_default_registry();

// Inserts every entry of every book into the corresponding store table.
void write_registry(const ReferenceRegistry& registry, store::CorpusHandle& h);

// Rebuilds a registry from the book tables of a corpus. Throws whatever the
// typed adders throw if the stored books violate registry invariants.
ReferenceRegistry read_registry(const store::CorpusHandle& h);

}  // namespace speechframe::refbooks
