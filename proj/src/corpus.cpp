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

#include "speechframe/corpus.hpp"

#include <algorithm>

namespace speechframe::corpus {

namespace tn = store::tables;
using store::Record;
using store::Value;

std::string_view to_string(SegmentationSource source) {
  return source == SegmentationSource::Manual ? "manual" : "automatic";
}

SegmentationSource parse_source(std::string_view text) {
  if (text == "manual") return SegmentationSource::Manual;
  if (text == "automatic") return SegmentationSource::Automatic;
  throw Error(ErrorCode::InvalidArgument,
              "segmentation source must be manual or automatic, got \"" + std::string(text) + "\"");
}

Record to_record(const Speaker& s) {
  return {{"ID", Value{s.id}},
          {"SEX", Value{s.sex}},
          {"NAME", Value{s.name}},
          {"SURNAME", Value{s.surname}},
          {"FAMILY_NAME", Value{s.patronymic}},
          {"BIRTH_DATE", Value{s.birth_date}}};
}

Record to_record(const SpeechUnit& u) {
  return {{"ID", Value{u.id}},
          {"SPELLING_RECORD", Value{u.spelling}},
          {"TRANSCRIPTION", Value{alphabet::render_transcription(u.transcription)}},
          {"UNIT_TYPE", Value{u.unit_type}}};
}

Record to_record(const SpeechSignal& s) {
  using store::optional_value;
  return {{"FILE_NAME", Value{s.file_name}},
          {"SPEECH_UNIT_ID", Value{s.speech_unit}},
          {"LENGTH", Value{s.length_s}},
          {"RECORD_DATE", Value{s.record_date}},
          {"FILE_FORMAT", Value{s.file_format}},
          {"SYNTHETIC_NOISE_TYPE", Value{s.noise}},
          {"RECORDING_DEVICE", Value{s.recording_device}},
          {"DIALECT_ID", Value{s.dialect}},
          {"ACOUSTIC_ENVIRONMENT", Value{s.acoustic_environment}},
          {"SPEECH_TYPE_ID", optional_value(s.speech_type)},
          {"VOICE_TYPE_ID", Value{s.voice_type}},
          {"SPEECH_TEMP_ID", Value{s.speech_tempo}},
          {"CHANNEL", optional_value(s.channel)},
          {"SPEECH_SICKNESS", optional_value(s.sickness)},
          {"ACIENT", Value{s.accent}},
          {"SPEECH_DEFECT", optional_value(s.speech_defect)},
          {"EMOTIONAL_STATE", Value{s.emotional_state}},
          {"SPEAKER_ID", Value{s.speaker}}};
}

Record to_record(const SegmentationRecord& s) {
  return {{"POSITION", Value{s.position}},
          {"FILENAME", Value{s.file_name}},
          {"START_AUDIO", Value{s.start_time}},
          {"TYPE_ID", Value{s.symbol}},
          {"SOURCE", Value{std::string(to_string(s.source))}},
          {"EXPERT_COUNT", store::optional_value(s.expert_count)}};
}

Speaker speaker_from_record(const Record& r) {
  using namespace store;
  return {get_int(r, "ID"),           get_int(r, "SEX"),         get_text(r, "NAME"),
          get_text(r, "SURNAME"),     get_text(r, "FAMILY_NAME"), get_date(r, "BIRTH_DATE")};
}

SpeechUnit speech_unit_from_record(const Record& r) {
  using namespace store;
  SpeechUnit u;
  u.id = get_int(r, "ID");
  u.spelling = get_text(r, "SPELLING_RECORD");
  const std::string& t = get_text(r, "TRANSCRIPTION");
  constexpr std::string_view kSpace = " \t\r\n";
  for (std::size_t pos = t.find_first_not_of(kSpace); pos != std::string::npos;) {
    std::size_t end = t.find_first_of(kSpace, pos);
    u.transcription.push_back(t.substr(pos, end == std::string::npos ? end : end - pos));
    pos = end == std::string::npos ? end : t.find_first_not_of(kSpace, end);
  }
  u.unit_type = get_int(r, "UNIT_TYPE");
  return u;
}

SpeechSignal signal_from_record(const Record& r) {
  using namespace store;
  SpeechSignal s;
  s.file_name = get_text(r, "FILE_NAME");
  s.speech_unit = get_int(r, "SPEECH_UNIT_ID");
  s.length_s = get_real(r, "LENGTH");
  s.record_date = get_date(r, "RECORD_DATE");
  s.file_format = get_int(r, "FILE_FORMAT");
  s.noise = get_int(r, "SYNTHETIC_NOISE_TYPE");
  s.recording_device = get_int(r, "RECORDING_DEVICE");
  s.dialect = get_int(r, "DIALECT_ID");
  s.acoustic_environment = get_int(r, "ACOUSTIC_ENVIRONMENT");
  s.speech_type = get_opt_int(r, "SPEECH_TYPE_ID");
  s.voice_type = get_int(r, "VOICE_TYPE_ID");
  s.speech_tempo = get_int(r, "SPEECH_TEMP_ID");
  s.channel = get_opt_int(r, "CHANNEL");
  s.sickness = get_opt_int(r, "SPEECH_SICKNESS");
  s.accent = get_bool(r, "ACIENT");
  s.speech_defect = get_opt_int(r, "SPEECH_DEFECT");
  s.emotional_state = get_int(r, "EMOTIONAL_STATE");
  s.speaker = get_int(r, "SPEAKER_ID");
  return s;
}

SegmentationRecord segment_from_record(const Record& r) {
  using namespace store;
  return {get_int(r, "POSITION"),   get_text(r, "FILENAME"),
          get_real(r, "START_AUDIO"), get_text(r, "TYPE_ID"),
          parse_source(get_text(r, "SOURCE")), get_opt_int(r, "EXPERT_COUNT")};
}

int speaker_age(Date birth_date, Date as_of) {
  if (as_of < birth_date) {
    throw Error(ErrorCode::NegativeInterval,
                format_date(as_of) + " precedes birth date " + format_date(birth_date));
  }
  int years = static_cast<int>(as_of.year()) - static_cast<int>(birth_date.year());
  auto birthday_md = std::chrono::month_day{birth_date.month(), birth_date.day()};
  auto as_of_md = std::chrono::month_day{as_of.month(), as_of.day()};
  if (as_of_md < birthday_md) --years;
  return years;
}

CorpusHandle create_corpus(bool with_seed_alphabet) {
  CorpusHandle h;
  auto registry = refbooks::seed_default_registry();
  refbooks::write_registry(registry, h);
  if (with_seed_alphabet) {
    for (const auto& unit : alphabet::russian_alphabet(registry)) {
      h.insert(tn::kClass, alphabet::to_record(unit));
    }
  }
  return h;
}

CorpusHandle init_corpus(const std::filesystem::path& root, bool with_seed_alphabet) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(root, ec) && (!fs::is_directory(root, ec) || !fs::is_empty(root, ec))) {
    throw Error(ErrorCode::InvalidArgument, root.string() + " exists and is not an empty directory");
  }
  CorpusHandle h = create_corpus(with_seed_alphabet);
  h.save_as(root);
  return h;
}

refbooks::ReferenceRegistry registry_of(const CorpusHandle& h) { return refbooks::read_registry(h); }

alphabet::Alphabet alphabet_of(const CorpusHandle& h) {
  alphabet::Alphabet a("corpus", "");
  for (const auto& [key, rec] : h.rows(tn::kClass)) a.add(alphabet::class_from_record(rec));
  return a;
}

namespace {

[[noreturn]] void domain_error(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

void check_speaker(const Speaker& s, Date as_of) {
  if (as_of < s.birth_date) {
    domain_error("speaker " + std::to_string(s.id) + " has a birth date in the future (" +
                 format_date(s.birth_date) + ")");
  }
}

void check_speech_unit(const CorpusHandle& h, const SpeechUnit& u) {
  // Throws UnknownSymbolError with the offending token.
  alphabet::tokenize_transcription(alphabet::render_transcription(u.transcription), alphabet_of(h));
}

void check_signal(const SpeechSignal& s) {
  if (s.file_name.empty()) domain_error("signal file name is empty");
  if (!(s.length_s > 0)) domain_error("signal " + s.file_name + " must have a positive length");
}

void check_segment(const CorpusHandle& h, const SegmentationRecord& s) {
  if (s.position < 1) domain_error("segmentation positions start at 1");
  auto signal = find_signal(h, s.file_name);
  if (!signal) throw Error(ErrorCode::UnknownSignal, "no signal named " + s.file_name);
  if (!(s.start_time >= 0)) domain_error("segment start must be non-negative");
  if (!(s.start_time < signal->length_s)) {
    domain_error("segment start " + store::to_display(Value{s.start_time}) +
                 " s is not inside signal " + s.file_name);
  }
  if (s.expert_count) {
    if (s.source != SegmentationSource::Manual) domain_error("expert counts apply to manual segmentation only");
    if (*s.expert_count < 0) domain_error("expert count must be non-negative");
  }
}

}  // namespace

void add_speaker(CorpusHandle& h, const Speaker& s, Date as_of) {
  check_speaker(s, as_of);
  h.insert(tn::kSpeaker, to_record(s));
}

void add_speech_unit(CorpusHandle& h, const SpeechUnit& u) {
  check_speech_unit(h, u);
  h.insert(tn::kSpeechUnit, to_record(u));
}

void add_signal(CorpusHandle& h, const SpeechSignal& s) {
  check_signal(s);
  h.insert(tn::kSpeechSignal, to_record(s));
}

void add_segment(CorpusHandle& h, const SegmentationRecord& s) {
  check_segment(h, s);
  h.insert(tn::kSegmentation, to_record(s));
}

store::Key insert_checked(CorpusHandle& h, std::string_view table, Record record) {
  using namespace store;
  const TableSchema& schema = h.schema().table(table);
  if (table == tn::kSpeaker) {
    check_speaker(speaker_from_record(record), today());
  } else if (table == tn::kSpeechUnit) {
    check_speech_unit(h, speech_unit_from_record(record));
  } else if (table == tn::kSpeechSignal) {
    check_signal(signal_from_record(record));
  } else if (table == tn::kSegmentation) {
    check_segment(h, segment_from_record(record));
  } else if (table == tn::kClass) {
    auto unit = alphabet::class_from_record(record);
    if (auto report = alphabet::validate_class(unit, registry_of(h)); !report.empty()) {
      throw alphabet::ClassInvalidError(unit.symbol, std::move(report));
    }
  } else {
    auto registry = registry_of(h);
    if (table == tn::kAcousticEnvironment) {
      registry.add_environment({get_int(record, "ENVIRONMENT_ID"),
                                get_real(record, "NOISE_LEVEL_DB"), get_text(record, "TITLE")});
    } else if (table == tn::kDialects) {
      registry.add_dialect({get_int(record, "ID_DIALECT"), get_text(record, "TITLE"),
                            get_text(record, "LANGUAGE")});
    } else if (table == tn::kSpeechTemps) {
      registry.add_tempo({get_int(record, "ID"), get_text(record, "SPEED"),
                          get_opt_int(record, "SOUNDS_PER_SECOND")});
    } else if (table == tn::kFileFormat) {
      registry.add_file_format({get_int(record, "ID"), get_real(record, "DISCRETIZATION_FREQUENCY"),
                                get_int(record, "BITRATE"), get_text(record, "FILE_TYPE"),
                                get_int(record, "NUMBER_OF_CHANNELS")});
    } else if (table == tn::kNoise) {
      registry.add_noise({get_int(record, "ID_NOISE"), get_text(record, "NOISE_TYPE"),
                          get_opt_real(record, "SNR_DB")});
    } else if (table == tn::kRecordingDevice) {
      registry.add_device({get_int(record, "DEVICE_ID"), get_text(record, "TYPE"),
                           get_real(record, "BANDWIDTH")});
    } else {
      registry.add_entry(table, {get_int(record, schema.key_fields.front()),
                                 get_text(record, "TITLE")});
    }
  }
  return h.insert(table, std::move(record));
}

std::vector<Speaker> speakers(const CorpusHandle& h) {
  std::vector<Speaker> out;
  for (const auto& [key, rec] : h.rows(tn::kSpeaker)) out.push_back(speaker_from_record(rec));
  return out;
}

std::vector<SpeechUnit> speech_units(const CorpusHandle& h) {
  std::vector<SpeechUnit> out;
  for (const auto& [key, rec] : h.rows(tn::kSpeechUnit)) out.push_back(speech_unit_from_record(rec));
  return out;
}

std::vector<SpeechSignal> signals(const CorpusHandle& h) {
  std::vector<SpeechSignal> out;
  for (const auto& [key, rec] : h.rows(tn::kSpeechSignal)) out.push_back(signal_from_record(rec));
  return out;
}

std::optional<SpeechSignal> find_signal(const CorpusHandle& h, std::string_view file_name) {
  const Record* rec = h.find(tn::kSpeechSignal, store::Key{Value{std::string(file_name)}});
  if (!rec) return std::nullopt;
  return signal_from_record(*rec);
}

std::vector<SegmentationRecord> segmentation(const CorpusHandle& h, std::string_view file_name,
                                             SegmentationSource source) {
  const std::string source_text(to_string(source));
  std::vector<SegmentationRecord> out;
  for (const auto& [key, rec] : h.rows(tn::kSegmentation)) {
    if (store::get_text(rec, "FILENAME") == file_name &&
        store::get_text(rec, "SOURCE") == source_text) {
      out.push_back(segment_from_record(rec));
    }
  }
  // Keys lead with POSITION, so rows already arrive in position order.
  return out;
}

}  // namespace speechframe::corpus
