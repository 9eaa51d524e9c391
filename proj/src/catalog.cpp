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

#include <string>

#include "speechframe/query.hpp"

namespace speechframe::query {

namespace {

using refbooks::code;

CriterionValue default_value(Attribute a) {
  switch (a) {
    case Attribute::Sex: return code(refbooks::Sex::Female);
    case Attribute::Emotion: return refbooks::kNeutralEmotion;
    case Attribute::VoiceType: return code(refbooks::VoiceType::Talking);
    case Attribute::Tempo: return code(refbooks::TempoBand::Normal);
    case Attribute::Environment: return refbooks::kOfficeEnvironment;
    case Attribute::Noise: return refbooks::kNoNoise;
    case Attribute::Accent: return true;
    case Attribute::RecordDate: return DateRange{};
    case Attribute::Length: return LengthRange{};
    case Attribute::SpeakerAge: return AgeRange{18, 60};
    default: return std::int64_t{1};
  }
}

FilterCriterion param(Attribute a) { return {a, default_value(a)}; }

FilterCriterion param(Attribute a, CriterionValue v) { return {a, std::move(v)}; }

CannedQuery search(std::string name, std::string description, std::vector<FilterCriterion> params) {
  CannedQuery q;
  q.name = std::move(name);
  q.description = std::move(description);
  q.kind = QueryKind::Search;
  q.parameters = std::move(params);
  return q;
}

CannedQuery count(std::string name, std::string description, Attribute a,
                  CountScope scope = CountScope::Signals) {
  CannedQuery q;
  q.name = std::move(name);
  q.description = std::move(description);
  q.kind = QueryKind::Count;
  q.count_attribute = a;
  q.scope = scope;
  return q;
}

std::vector<CannedQuery> build_catalog() {
  std::vector<CannedQuery> c;
  for (Attribute a : searchable_attributes()) {
    const std::string n(name_of(a));
    c.push_back(search("signals-by-" + n, "signals whose " + n + " matches the argument", {param(a)}));
  }
  c.push_back(search("all-signals", "every signal in the corpus", {}));

  for (Attribute a : {Attribute::Sex, Attribute::Dialect, Attribute::Emotion, Attribute::VoiceType,
                      Attribute::SpeechType, Attribute::Tempo, Attribute::Sickness, Attribute::Defect,
                      Attribute::Accent, Attribute::Environment, Attribute::Device,
                      Attribute::SpeakerAge}) {
    const std::string n(name_of(a));
    c.push_back(count("signals-count-by-" + n, "number of signals per " + n, a));
  }
  c.push_back(count("speakers-by-sex", "number of speakers per sex", Attribute::Sex, CountScope::Speakers));

  c.push_back(search("female-speakers-by-dialect", "signals of female speakers in a dialect",
                     {param(Attribute::Sex), param(Attribute::Dialect)}));
  c.push_back(search("emotion-by-sex", "signals of one sex in an emotional state",
                     {param(Attribute::Sex), param(Attribute::Emotion)}));
  c.push_back(search("age-group-by-sex", "signals of one sex within an age range",
                     {param(Attribute::Sex), param(Attribute::SpeakerAge)}));
  c.push_back(search("clean-office-speech", "noise-free office recordings within a length range",
                     {param(Attribute::Environment), param(Attribute::Noise),
                      param(Attribute::Length, LengthRange{0.0, 60.0})}));
  return c;
}

}  // namespace

const std::vector<CannedQuery>& list_canned_queries() {
  static const std::vector<CannedQuery> catalog = build_catalog();
  return catalog;
}

const CannedQuery& find_canned_query(std::string_view name) {
  for (const auto& q : list_canned_queries())
    if (q.name == name) return q;
  throw Error(ErrorCode::NotFound, "no canned query named \"" + std::string(name) + "\"");
}

QueryResult run_canned_query(const CorpusHandle& h, const CannedQuery& q,
                             std::span<const CriterionValue> arguments) {
  if (arguments.size() > q.parameters.size()) {
    throw Error(ErrorCode::InvalidArgument,
                q.name + " takes " + std::to_string(q.parameters.size()) + " argument(s), got " +
                    std::to_string(arguments.size()));
  }
  if (q.kind == QueryKind::Count) return count_by(h, q.count_attribute, q.scope);

  std::vector<FilterCriterion> criteria = q.parameters;
  for (std::size_t i = 0; i < arguments.size(); ++i) criteria[i].value = arguments[i];
  return staged_search(h, criteria);
}

}  // namespace speechframe::query
