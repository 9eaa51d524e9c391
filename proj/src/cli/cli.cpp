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

#include "speechframe/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>

#include "speechframe/corpus.hpp"
#include "speechframe/query.hpp"
#include "speechframe/segmentation.hpp"
#include "speechframe/store.hpp"

namespace speechframe::cli {

namespace {

namespace tn = store::tables;
using corpus::CorpusHandle;
using corpus::SegmentationSource;
using nlohmann::json;

enum class OutputMode { Text, Records };

struct Context {
  std::filesystem::path corpus;
  OutputMode mode = OutputMode::Text;
  std::ostream& out;
  std::ostream& err;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Display title of a code, or the bare code when the book has no such entry.
std::string title_of(const refbooks::ReferenceRegistry& reg, std::string_view book,
                     std::optional<std::int64_t> code) {
  if (!code) return "-";
  if (reg.contains(book, *code)) return reg.lookup(book, *code).title;
  return std::to_string(*code);
}

CorpusHandle open_corpus(const Context& ctx, bool repair = false) {
  return CorpusHandle::open(ctx.corpus, store::OpenOptions{repair});
}

int cmd_init(const Context& ctx, bool seed) {
  const CorpusHandle h = corpus::init_corpus(ctx.corpus, seed);
  ctx.out << "initialized " << ctx.corpus.string() << " (" << h.schema().tables().size()
          << " tables, " << h.size(tn::kClass) << " sound units)\n";
  return kOk;
}

int cmd_import(const Context& ctx, const std::string& table, const std::filesystem::path& file) {
  CorpusHandle h = open_corpus(ctx);
  const store::TableSchema& schema = h.schema().table(table);
  const auto records = store::read_records(schema, file);

  CorpusHandle staged = h;
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      corpus::insert_checked(staged, table, records[i]);
    } catch (const Error& e) {
      ctx.err << "error: record " << (i + 1) << " of " << file.string() << ": " << e.what()
              << " [" << to_string(e.code()) << "]\n";
      ctx.err << "nothing imported\n";
      return kFailure;
    }
  }
  staged.save();
  ctx.out << "imported " << records.size() << " record(s) into " << table << "\n";
  return kOk;
}

int cmd_validate(const Context& ctx) {
  CorpusHandle h = open_corpus(ctx, true);
  std::size_t violations = 0;

  const auto integrity = h.integrity_check();
  ctx.out << "integrity: " << integrity.size() << " violation(s)\n";
  for (const auto& v : integrity) ctx.out << "  " << v.to_string() << "\n";
  violations += integrity.size();

  std::size_t seg_count = 0;
  std::ostringstream seg_lines;
  for (const auto& s : corpus::signals(h)) {
    for (auto source : {SegmentationSource::Manual, SegmentationSource::Automatic}) {
      for (const auto& v : corpus::validate_segmentation(h, s.file_name, source)) {
        seg_lines << "  " << s.file_name << " (" << corpus::to_string(source) << "): " << v.message << "\n";
        ++seg_count;
      }
    }
  }
  ctx.out << "segmentation: " << seg_count << " violation(s)\n" << seg_lines.str();
  violations += seg_count;

  const auto experts = corpus::expert_check_report(h);
  ctx.out << "expert check: " << experts.size() << " violation(s)\n";
  for (const auto& e : experts) {
    ctx.out << "  " << e.file_name << ": checked by " << e.expert_count << " expert(s), at least "
            << corpus::kMinExperts << " required\n";
  }
  violations += experts.size();

  const auto alphabet = corpus::alphabet_of(h);
  const auto coverage = corpus::symbol_coverage(h, alphabet);
  ctx.out << "coverage: " << coverage.under_covered.size() << " symbol(s) with fewer than "
          << corpus::kMinSymbolOccurrences << " manual occurrences (warning)\n";
  for (const auto& sym : coverage.under_covered) {
    ctx.out << "  warning: symbol \"" << sym << "\" occurs " << coverage.counts.at(sym)
            << " time(s)\n";
  }

  if (violations == 0) {
    ctx.out << "result: ok\n";
    return kOk;
  }
  ctx.out << "result: " << violations << " violation(s)\n";
  return kFailure;
}

void print_signals(const Context& ctx, const CorpusHandle& h,
                   const std::vector<corpus::SpeechSignal>& result) {
  if (ctx.mode == OutputMode::Records) {
    const auto& schema = h.schema().table(tn::kSpeechSignal);
    for (const auto& s : result) ctx.out << store::format_record(schema, corpus::to_record(s)) << "\n";
    return;
  }
  const auto reg = corpus::registry_of(h);
  std::map<std::int64_t, std::int64_t> sex_of;
  for (const auto& sp : corpus::speakers(h)) sex_of[sp.id] = sp.sex;

  std::size_t width = 9;
  for (const auto& s : result) width = std::max(width, s.file_name.size());
  ctx.out << std::left << std::setw(static_cast<int>(width)) << "FILE_NAME" << "  " << std::setw(8)
          << "SPEAKER" << "  " << std::setw(7) << "SEX" << "  " << std::setw(12) << "DIALECT"
          << "  " << std::setw(10) << "EMOTION" << "  " << "LENGTH_S\n";
  for (const auto& s : result) {
    std::optional<std::int64_t> sex;
    if (auto it = sex_of.find(s.speaker); it != sex_of.end()) sex = it->second;
    ctx.out << std::setw(static_cast<int>(width)) << s.file_name << "  " << std::setw(8) << s.speaker
            << "  " << std::setw(7) << title_of(reg, tn::kSex, sex) << "  " << std::setw(12)
            << title_of(reg, tn::kDialects, s.dialect) << "  " << std::setw(10)
            << title_of(reg, tn::kEmotions, s.emotional_state) << "  " << fixed(s.length_s, 3)
            << "\n";
  }
  ctx.out << std::right << result.size() << " signal(s)\n";
}

void print_histogram(const Context& ctx, const CorpusHandle& h, query::Attribute a,
                     const query::Histogram& hist) {
  if (ctx.mode == OutputMode::Records) {
    for (const auto& [key, n] : hist) {
      json j;
      j["attribute"] = std::string(query::name_of(a));
      j["value"] = key;
      j["count"] = n;
      ctx.out << j.dump() << "\n";
    }
    return;
  }
  const auto reg = corpus::registry_of(h);
  const auto book = query::book_of(a);
  std::size_t total = 0;
  ctx.out << std::left << std::setw(8) << "VALUE" << "  " << std::setw(24) << "TITLE" << "  COUNT\n";
  for (const auto& [key, n] : hist) {
    const std::string label = book ? title_of(reg, *book, key) : std::string();
    ctx.out << std::setw(8) << key << "  " << std::setw(24) << label << "  " << n << "\n";
    total += n;
  }
  ctx.out << std::right << "total " << total << "\n";
}

std::vector<query::FilterCriterion> parse_where(const std::vector<std::string>& where,
                                                const refbooks::ReferenceRegistry& reg) {
  std::vector<query::FilterCriterion> criteria;
  for (const auto& w : where) criteria.push_back(query::parse_criterion(w, reg));
  return criteria;
}

int cmd_search(const Context& ctx, const std::vector<std::string>& where) {
  CorpusHandle h = open_corpus(ctx);
  const auto criteria = parse_where(where, corpus::registry_of(h));
  print_signals(ctx, h, query::staged_search(h, criteria));
  return kOk;
}

int cmd_count(const Context& ctx, const std::string& by, bool speakers) {
  CorpusHandle h = open_corpus(ctx);
  const auto a = query::parse_attribute(by);
  const auto scope = speakers ? query::CountScope::Speakers : query::CountScope::Signals;
  print_histogram(ctx, h, a, query::count_by(h, a, scope));
  return kOk;
}

int cmd_stats(const Context& ctx) {
  CorpusHandle h = open_corpus(ctx);
  const auto st = query::corpus_stats(h);
  if (ctx.mode == OutputMode::Records) {
    json j;
    j["sound_unit_count"] = st.sound_unit_count;
    j["speech_unit_count"] = st.speech_unit_count;
    j["speaker_count"] = st.speaker_count;
    json by_sex = json::object();
    for (const auto& [code, n] : st.speaker_count_by_sex) by_sex[std::to_string(code)] = n;
    j["speaker_count_by_sex"] = by_sex;
    j["signal_count"] = st.signal_count;
    j["total_duration_s"] = st.total_duration_s;
    j["manually_segmented_signal_count"] = st.manually_segmented_signal_count;
    ctx.out << j.dump() << "\n";
    return kOk;
  }
  const auto reg = corpus::registry_of(h);
  auto line = [&](const std::string& label, const std::string& value) {
    ctx.out << std::left << std::setw(28) << label << std::right << std::setw(12) << value << "\n";
  };
  line("sound units", std::to_string(st.sound_unit_count));
  line("speech units", std::to_string(st.speech_unit_count));
  line("speakers", std::to_string(st.speaker_count));
  for (const auto& [code, n] : st.speaker_count_by_sex)
    line("  " + title_of(reg, tn::kSex, code), std::to_string(n));
  line("signals", std::to_string(st.signal_count));
  line("total duration (s)", fixed(st.total_duration_s, 2));
  line("manually segmented signals", std::to_string(st.manually_segmented_signal_count));
  return kOk;
}

int cmd_export_segmentation(const Context& ctx, const std::string& signal,
                            const std::string& source_name, const std::string& file) {
  CorpusHandle h = open_corpus(ctx);
  if (!corpus::find_signal(h, signal)) {
    throw Error(ErrorCode::UnknownSignal, "no signal named " + signal);
  }
  std::vector<SegmentationSource> sources{SegmentationSource::Manual, SegmentationSource::Automatic};
  if (!source_name.empty()) sources = {corpus::parse_source(source_name)};

  std::ostringstream tsv;
  tsv << "POSITION\tSTART_AUDIO\tSYMBOL\tSOURCE\n";
  std::size_t rows = 0;
  for (auto source : sources) {
    for (const auto& s : corpus::segmentation(h, signal, source)) {
      tsv << s.position << '\t' << store::to_display(store::Value{s.start_time}) << '\t' << s.symbol
          << '\t' << corpus::to_string(s.source) << '\n';
      ++rows;
    }
  }
  if (file.empty() || file == "-") {
    ctx.out << tsv.str();
    return kOk;
  }
  std::ofstream f(file, std::ios::binary | std::ios::trunc);
  f << tsv.str();
  f.close();
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + file);
  ctx.out << "wrote " << rows << " segment(s) to " << file << "\n";
  return kOk;
}

int cmd_queries(const Context& ctx) {
  for (const auto& q : query::list_canned_queries()) {
    ctx.out << q.name << "\t";
    if (q.kind == query::QueryKind::Count) {
      ctx.out << "count " << query::name_of(q.count_attribute)
              << (q.scope == query::CountScope::Speakers ? " over speakers" : " over signals");
    } else {
      ctx.out << "search";
      for (const auto& p : q.parameters) ctx.out << " " << query::format_criterion(p);
    }
    ctx.out << "\t" << q.description << "\n";
  }
  return kOk;
}

int cmd_query(const Context& ctx, const std::string& name, const std::vector<std::string>& args) {
  const auto& q = query::find_canned_query(name);
  CorpusHandle h = open_corpus(ctx);
  if (args.size() > q.parameters.size()) {
    throw Error(ErrorCode::InvalidArgument, q.name + " takes " + std::to_string(q.parameters.size()) +
                                                " argument(s)");
  }
  const auto reg = corpus::registry_of(h);
  std::vector<query::CriterionValue> values;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string expr = std::string(query::name_of(q.parameters[i].attribute)) + "=" + args[i];
    values.push_back(query::parse_criterion(expr, reg).value);
  }
  const auto result = query::run_canned_query(h, q, values);
  if (const auto* signals = std::get_if<std::vector<corpus::SpeechSignal>>(&result)) {
    print_signals(ctx, h, *signals);
  } else {
    print_histogram(ctx, h, q.count_attribute, std::get<query::Histogram>(result));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Speech corpus database tool", "speechframe"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string corpus_path;
  std::string output = "text";
  app.add_option("--corpus", corpus_path, "Corpus directory")->required();
  app.add_option("--output", output, "Output format")
      ->check(CLI::IsMember({"text", "records"}));

  bool seed = false;
  auto* init = app.add_subcommand("init", "Create an empty corpus with seeded reference books");
  init->add_flag("--seed", seed, "Also load the 77-unit Russian alphabet");

  std::string table, file;
  auto* import = app.add_subcommand("import", "Insert records from a line-delimited file (all or nothing)");
  import->add_option("--table", table, "Target table")->required();
  import->add_option("--file", file, "Record file")->required();

  auto* validate = app.add_subcommand("validate", "Check integrity, segmentation and coverage rules");

  std::vector<std::string> where;
  auto* search = app.add_subcommand("search", "Staged multi-parameter search over signals");
  search->add_option("--where", where, "attribute=value or attribute=lo..hi (repeatable)")
      ->take_all();

  auto* stats = app.add_subcommand("stats", "Corpus statistics");

  std::string by;
  bool over_speakers = false;
  auto* count = app.add_subcommand("count", "Histogram of signals by an attribute");
  count->add_option("--by", by, "Attribute")->required();
  count->add_flag("--speakers", over_speakers, "Count speakers instead of signals (sex only)");

  std::string signal, source, out_file;
  auto* export_seg = app.add_subcommand("export-segmentation", "Write a signal's segmentation as TSV");
  export_seg->add_option("--signal", signal, "Signal file name")->required();
  export_seg->add_option("--source", source, "manual or automatic (default both)");
  export_seg->add_option("--file", out_file, "Output file (default stdout)");

  auto* queries = app.add_subcommand("queries", "List the canned queries");

  std::string query_name;
  std::vector<std::string> query_args;
  auto* run_query = app.add_subcommand("query", "Run a canned query");
  run_query->add_option("name", query_name, "Query name")->required();
  run_query->add_option("args", query_args, "Parameter values, in order");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kOk : kUsage;
  }

  Context ctx{corpus_path, output == "records" ? OutputMode::Records : OutputMode::Text, out, err};
  try {
    if (init->parsed()) return cmd_init(ctx, seed);
    if (import->parsed()) return cmd_import(ctx, table, file);
    if (validate->parsed()) return cmd_validate(ctx);
    if (search->parsed()) return cmd_search(ctx, where);
    if (stats->parsed()) return cmd_stats(ctx);
    if (count->parsed()) return cmd_count(ctx, by, over_speakers);
    if (export_seg->parsed()) return cmd_export_segmentation(ctx, signal, source, out_file);
    if (queries->parsed()) return cmd_queries(ctx);
    if (run_query->parsed()) return cmd_query(ctx, query_name, query_args);
  } catch (const store::IntegrityError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& v : e.violations()) err << "  " << v.to_string() << "\n";
    return kFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace speechframe::cli
