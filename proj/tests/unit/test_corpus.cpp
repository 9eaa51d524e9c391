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

#include <doctest.h>

#include <random>

#include "speechframe/corpus.hpp"
#include "support.hpp"

using namespace speechframe;
using namespace speechframe::corpus;
using sftest::ymd;

namespace {

namespace tn = store::tables;

ErrorCode error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

SpeechSignal signal(const std::string& name, double length = 2.0) {
  SpeechSignal s;
  s.file_name = name;
  s.speech_unit = 1;
  s.length_s = length;
  s.record_date = ymd(2021, 5, 5);
  s.file_format = 1;
  s.recording_device = 1;
  s.dialect = 1;
  s.acoustic_environment = 1;
  s.voice_type = 1;
  s.speech_tempo = 1;
  s.speaker = 1;
  return s;
}

CorpusHandle base() {
  CorpusHandle h;
  const auto reg = sftest::extended_registry();
  refbooks::write_registry(reg, h);
  for (const auto& u : alphabet::russian_alphabet(reg)) h.insert(tn::kClass, alphabet::to_record(u));
  add_speaker(h, {1, 1, "Ivan", "Petrov", "Ivanovich", ymd(1980, 1, 1)});
  add_speech_unit(h, {1, "da", {"d", "a1"}, 1});
  return h;
}

}  // namespace

TEST_CASE("speaker_age") {
  CHECK(speaker_age(ymd(2000, 3, 1), ymd(2020, 2, 29)) == 19);
  CHECK(speaker_age(ymd(2000, 3, 1), ymd(2020, 3, 1)) == 20);
  CHECK(speaker_age(ymd(2000, 3, 1), ymd(2000, 3, 1)) == 0);
  CHECK(speaker_age(ymd(2000, 2, 29), ymd(2001, 2, 28)) == 0);
  CHECK(speaker_age(ymd(2000, 2, 29), ymd(2001, 3, 1)) == 1);
  CHECK(error_code([] { speaker_age(ymd(2000, 3, 1), ymd(1999, 1, 1)); }) == ErrorCode::NegativeInterval);
}

TEST_CASE("speaker_age is monotone and steps once per birthday") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> year(1930, 2010), month(1, 12), day(1, 28), span(0, 20000);
  for (int i = 0; i < 300; ++i) {
    const Date birth = ymd(year(rng), month(rng), day(rng));
    const auto start = std::chrono::sys_days{birth};
    const int n = span(rng);
    int previous = 0;
    for (int d = 0; d <= n; d += 37) {
      const Date at{start + std::chrono::days{d}};
      const int age = speaker_age(birth, at);
      CHECK(age >= previous);
      CHECK(age - previous <= 1);
      previous = age;
    }
    // One day before the k-th birthday vs. on it.
    for (int k : {1, 18, 40}) {
      const Date bday{birth.year() + std::chrono::years{k}, birth.month(), birth.day()};
      const Date eve{std::chrono::sys_days{bday} - std::chrono::days{1}};
      CHECK(speaker_age(birth, bday) == k);
      CHECK(speaker_age(birth, eve) == k - 1);
    }
  }
}

TEST_CASE("create_corpus seeds books and optionally the alphabet") {
  const auto with = create_corpus(true);
  const auto without = create_corpus(false);
  CHECK(with.size(tn::kClass) == 77);
  CHECK(without.size(tn::kClass) == 0);
  CHECK(with.size(tn::kSex) == 2);
  CHECK(with.integrity_check().empty());
  CHECK(registry_of(with) == refbooks::seed_default_registry());
  CHECK(alphabet_of(with).size() == 77);
}

TEST_CASE("init_corpus refuses non-empty directories") {
  sftest::TempDir dir;
  const auto h = init_corpus(dir / "c", true);
  CHECK(store::CorpusHandle::open(dir / "c").size(tn::kClass) == 77);
  CHECK(error_code([&] { init_corpus(dir / "c", true); }) == ErrorCode::InvalidArgument);
  std::filesystem::create_directory(dir / "empty");
  CHECK_NOTHROW(init_corpus(dir / "empty", false));
}

TEST_CASE("domain checks on typed inserts") {
  auto h = base();
  CHECK(error_code([&] { add_speaker(h, {2, 1, "A", "B", "C", ymd(2030, 1, 1)}, ymd(2025, 1, 1)); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code([&] { add_signal(h, signal("zero.wav", 0.0)); }) == ErrorCode::InvalidArgument);
  try {
    add_speech_unit(h, {2, "x", {"d", "zz"}, 1});
    FAIL("expected UnknownSymbolError");
  } catch (const alphabet::UnknownSymbolError& e) {
    CHECK(e.token() == "zz");
    CHECK(e.index() == 1);
  }

  add_signal(h, signal("a.wav"));
  SegmentationRecord seg{1, "a.wav", 0.0, "d", SegmentationSource::Manual, 2};
  CHECK_NOTHROW(add_segment(h, seg));
  CHECK(error_code([&] { add_segment(h, {2, "missing.wav", 0.1, "d", SegmentationSource::Manual, 2}); }) ==
        ErrorCode::UnknownSignal);
  CHECK(error_code([&] { add_segment(h, {2, "a.wav", 2.0, "d", SegmentationSource::Manual, 2}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code([&] { add_segment(h, {0, "a.wav", 0.1, "d", SegmentationSource::Manual, 2}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code([&] { add_segment(h, {1, "a.wav", 0.1, "d", SegmentationSource::Automatic, 2}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code([&] { add_segment(h, {2, "a.wav", 0.1, "zz", SegmentationSource::Manual, 2}); }) ==
        ErrorCode::DanglingForeignKey);
}

TEST_CASE("typed records round trip through store records") {
  auto h = base();
  auto s = signal("b.wav", 1.25);
  s.channel = 1;
  s.sickness = 2;
  s.accent = true;
  add_signal(h, s);
  CHECK(find_signal(h, "b.wav") == s);
  CHECK_FALSE(find_signal(h, "nope.wav").has_value());
  CHECK(speakers(h).front().patronymic == "Ivanovich");
  CHECK(speech_units(h).front().transcription == std::vector<std::string>{"d", "a1"});
  CHECK(segment_from_record(to_record(SegmentationRecord{3, "b.wav", 0.25, "d", SegmentationSource::Automatic, {}})) ==
        SegmentationRecord{3, "b.wav", 0.25, "d", SegmentationSource::Automatic, {}});
  CHECK(parse_source("automatic") == SegmentationSource::Automatic);
  CHECK(error_code([] { parse_source("guess"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("insert_checked runs book and class rules") {
  auto h = base();
  using store::Record;
  using store::Value;
  CHECK(error_code([&] {
          insert_checked(h, tn::kNoise, Record{{"ID_NOISE", Value{std::int64_t{0}}},
                                               {"NOISE_TYPE", Value{std::string("hum")}},
                                               {"SNR_DB", Value{}}});
        }) == ErrorCode::ReservedCode);
  CHECK(error_code([&] {
          insert_checked(h, tn::kEmotions, Record{{"ID_EMOTION", Value{std::int64_t{9}}},
                                                  {"TITLE", Value{std::string("neutral")}}});
        }) == ErrorCode::DuplicateTitle);
  insert_checked(h, tn::kEmotions, Record{{"ID_EMOTION", Value{std::int64_t{9}}},
                                          {"TITLE", Value{std::string("surprise")}}});
  CHECK(registry_of(h).find_code(tn::kEmotions, "surprise") == 9);

  Record bad_class{{"SYMBOL", Value{std::string("q")}},   {"STRESSED", Value{std::int64_t{10}}},
                   {"VOCALIZED", Value{false}},           {"SOFT", Value{std::int64_t{1}}},
                   {"VOICED", Value{std::int64_t{1}}},    {"LOCATION", Value{std::int64_t{1}}},
                   {"WAY_OF_ORIGIN", Value{}},            {"LABIALIZATION", Value{}},
                   {"RISE", Value{}},                     {"ROW", Value{}}};
  CHECK(error_code([&] { insert_checked(h, tn::kClass, bad_class); }) == ErrorCode::ClassInvalid);
  bad_class["WAY_OF_ORIGIN"] = Value{std::int64_t{1}};
  CHECK_NOTHROW(insert_checked(h, tn::kClass, bad_class));
  CHECK(h.integrity_check().empty());
}
