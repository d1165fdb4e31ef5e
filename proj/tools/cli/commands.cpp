#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "chorale/corrupt.hpp"
#include "chorale/errors.hpp"
#include "chorale/grader.hpp"
#include "chorale/ingest.hpp"
#include "chorale/profile.hpp"
#include "parallel.hpp"

namespace chorale::cli {

namespace {

using nlohmann::json;

std::optional<CorpusProfile> load_profile(const fs::path& path, std::ostream& err) {
  try {
    return parse_profile_json(read_file(path));
  } catch (const Error& e) {
    err << "error: cannot load profile " << path.string() << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

bool write_text(const fs::path& path, const std::string& text, std::ostream& err) {
  std::ofstream out(path, std::ios::binary);
  if (out) out << text;
  if (!out) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

struct GradedSet {
  std::vector<GradeReport> reports;
  std::vector<std::string> warnings;
  std::vector<std::size_t> indices;  // chorale index of each report
};

GradedSet grade_all(const std::vector<Chorale>& chorales, const CorpusProfile& profile) {
  std::vector<std::optional<GradeReport>> slots(chorales.size());
  std::vector<std::string> errors(chorales.size());
  parallel_for(chorales.size(), worker_count(), [&](std::size_t i) {
    try {
      slots[i] = grade(chorales[i], profile);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  GradedSet out;
  for (std::size_t i = 0; i < chorales.size(); ++i) {
    if (slots[i]) {
      out.reports.push_back(std::move(*slots[i]));
      out.indices.push_back(i);
    } else {
      out.warnings.push_back(errors[i]);
    }
  }
  return out;
}

std::optional<LoadedSet> load_dir(const fs::path& dir, std::ostream& err) {
  if (!fs::is_directory(dir)) {
    err << "error: " << dir.string() << " is not a directory\n";
    return std::nullopt;
  }
  LoadedSet set = load_chorales(list_chorale_files(dir), err);
  if (set.chorales.size() < 2) {
    err << "error: " << dir.string() << " holds " << set.chorales.size() << " parseable chorales, at least 2 needed\n";
    return std::nullopt;
  }
  return set;
}

json stats_json(const SummaryStats& s) { return json{{"median", s.median}, {"stddev", s.stddev}}; }

json set_json(const SetSummary& s) {
  json features = json::object();
  for (auto id : kFeatureIds) features[std::string(to_string(id))] = stats_json(s.features[static_cast<std::size_t>(id)]);
  return json{{"count", s.reports.size()},
              {"failures", s.warnings.size()},
              {"features", std::move(features)},
              {"overall", stats_json(s.overall)},
              {"grades", s.overall_grades()}};
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("CHORALE_GRADER_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<fs::path> list_chorale_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    if (ext == ".xml" || ext == ".musicxml" || ext == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

LoadedSet load_chorales(const std::vector<fs::path>& files, std::ostream& err) {
  std::vector<std::optional<Chorale>> slots(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), worker_count(), [&](std::size_t i) {
    try {
      slots[i] = load_chorale_file(files[i]);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  LoadedSet set;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (slots[i]) {
      set.chorales.push_back(std::move(*slots[i]));
      set.paths.push_back(files[i]);
    } else {
      err << "warning: skipping " << files[i].string() << ": " << errors[i] << "\n";
      ++set.failures;
    }
  }
  return set;
}

int cmd_profile(const fs::path& dir, const fs::path& out_path, Streams io) {
  auto set = load_dir(dir, io.err);
  if (!set) return kExitUnusableInput;
  CorpusProfile profile;
  try {
    profile = build_profile(set->chorales);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUnusableInput;
  }
  if (!write_text(out_path, write_profile_json(profile), io.err)) return kExitUnusableInput;
  io.out << "corpus_size " << profile.corpus_size << "\n";
  io.out << fmt::format("corpus_error_note_ratio {:.6g}\n", profile.corpus_error_note_ratio);
  io.out << "content_hash " << profile.content_hash << "\n";
  if (!profile.has_parallel_reference()) {
    io.err << "warning: corpus has no parallel errors; chorales with parallel errors cannot be graded against it\n";
  }
  return set->failures == 0 ? kExitSuccess : kExitPartialFailure;
}

int cmd_grade(const std::vector<fs::path>& files, const fs::path& profile_path, OutputFormat format, Streams io) {
  auto profile = load_profile(profile_path, io.err);
  if (!profile) return kExitUnusableInput;
  LoadedSet set = load_chorales(files, io.err);
  GradedSet graded = grade_all(set.chorales, *profile);
  for (const auto& w : graded.warnings) io.err << "error: " << w << "\n";

  if (format == OutputFormat::json) {
    io.out << reports_to_json(graded.reports);
  } else {
    for (std::size_t i = 0; i < graded.reports.size(); ++i) {
      if (i > 0) io.out << "\n";
      io.out << render_report_table(graded.reports[i]);
    }
  }
  return set.failures + graded.warnings.size() == 0 ? kExitSuccess : kExitPartialFailure;
}

int cmd_evaluate(const fs::path& dir_a, const fs::path& dir_b, const fs::path& profile_path, OutputFormat format,
                 Streams io) {
  auto profile = load_profile(profile_path, io.err);
  if (!profile) return kExitUnusableInput;
  auto set_a = load_dir(dir_a, io.err);
  auto set_b = load_dir(dir_b, io.err);
  if (!set_a || !set_b) return kExitUnusableInput;

  EvaluationSummary summary;
  std::size_t failures = set_a->failures + set_b->failures;
  try {
    auto graded_a = grade_all(set_a->chorales, *profile);
    auto graded_b = grade_all(set_b->chorales, *profile);
    for (const auto& w : graded_a.warnings) io.err << "warning: " << w << "\n";
    for (const auto& w : graded_b.warnings) io.err << "warning: " << w << "\n";
    failures += graded_a.warnings.size() + graded_b.warnings.size();
    summary = evaluate_sets(summarize_reports(std::move(graded_a.reports), std::move(graded_a.warnings)),
                            summarize_reports(std::move(graded_b.reports), std::move(graded_b.warnings)));
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUnusableInput;
  }

  if (format == OutputFormat::json) {
    json doc{{"set_a", set_json(summary.set_a)},
             {"set_b", set_json(summary.set_b)},
             {"ks",
              {{"statistic", summary.ks.statistic},
               {"p_value", summary.ks.p_value},
               {"n_a", summary.ks.n_a},
               {"n_b", summary.ks.n_b},
               {"approximate", summary.ks.approximate}}}};
    io.out << doc.dump(2) << "\n";
  } else {
    io.out << render_evaluation_table(summary, dir_a.filename().string().empty() ? "A" : dir_a.filename().string(),
                                      dir_b.filename().string().empty() ? "B" : dir_b.filename().string());
  }
  return failures == 0 ? kExitSuccess : kExitPartialFailure;
}

std::vector<PairRow> read_pairs_manifest(const fs::path& manifest, std::ostream& err, std::size_t& skipped) {
  std::ifstream in(manifest);
  if (!in) throw Error("cannot open " + manifest.string());
  const fs::path base = manifest.parent_path();
  std::vector<PairRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  skipped = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto comma = line.find(',');
    std::string first = trim(line.substr(0, comma));
    std::string second = comma == std::string::npos ? "" : trim(line.substr(comma + 1));
    if (!header_seen) {
      header_seen = true;
      if (first == "real" && second == "other") continue;
      throw Error(manifest.string() + ": first line must be the header 'real,other'");
    }
    if (comma == std::string::npos || first.empty() || second.empty() || second.find(',') != std::string::npos) {
      err << "warning: " << manifest.string() << ":" << lineno << ": malformed row skipped\n";
      ++skipped;
      continue;
    }
    fs::path real(first);
    fs::path other(second);
    rows.push_back(PairRow{real.is_absolute() ? real : base / real, other.is_absolute() ? other : base / other, lineno});
  }
  return rows;
}

int cmd_discriminate(const fs::path& pairs_manifest, const fs::path& profile_path, Streams io) {
  auto profile = load_profile(profile_path, io.err);
  if (!profile) return kExitUnusableInput;
  std::vector<PairRow> rows;
  std::size_t skipped = 0;
  try {
    rows = read_pairs_manifest(pairs_manifest, io.err, skipped);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUnusableInput;
  }
  if (rows.empty()) {
    io.err << "error: " << pairs_manifest.string() << " lists no pairs\n";
    return kExitUnusableInput;
  }

  std::vector<PairOutcome> outcomes(rows.size());
  std::vector<std::string> errors(rows.size());
  parallel_for(rows.size(), worker_count(), [&](std::size_t i) {
    try {
      const double real = grade(load_chorale_file(rows[i].real), *profile).overall_grade;
      const double other = grade(load_chorale_file(rows[i].other), *profile).overall_grade;
      outcomes[i] = judge_pair(real, other);
    } catch (const Error& e) {
      outcomes[i] = PairOutcome{std::nullopt, std::nullopt, true, false};
      errors[i] = e.what();
    }
  });

  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.voided) {
      io.err << "warning: row " << rows[i].line << " voided: " << errors[i] << "\n";
      warnings.push_back(errors[i]);
      io.out << fmt::format("{:>4}  {}  {}  voided\n", i + 1, rows[i].real.filename().string(),
                            rows[i].other.filename().string());
      continue;
    }
    io.out << fmt::format("{:>4}  {} ({:.2f})  {} ({:.2f})  pick={}  {}\n", i + 1, rows[i].real.filename().string(),
                          *o.real_grade, rows[i].other.filename().string(), *o.other_grade,
                          *o.real_grade < *o.other_grade ? "real" : "other", o.correct ? "correct" : "incorrect");
  }
  DiscriminationResult result;
  try {
    result = tally(std::move(outcomes), std::move(warnings));
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUnusableInput;
  }
  io.out << fmt::format("accuracy {:.4f} ({}/{})\n", result.accuracy, result.correct, result.scored);
  return skipped + result.warnings.size() == 0 ? kExitSuccess : kExitPartialFailure;
}

int cmd_corrupt(const fs::path& file, double rate, std::uint64_t seed, const fs::path& out_path, Streams io) {
  try {
    const Chorale corrupted = corrupt(load_chorale_file(file), rate, seed);
    return write_text(out_path, write_canonical_json(corrupted), io.err) ? kExitSuccess : kExitUnusableInput;
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUnusableInput;
  }
}

int cmd_convert(const fs::path& file, const fs::path& out_path, Streams io) {
  try {
    return write_text(out_path, write_canonical_json(load_chorale_file(file)), io.err) ? kExitSuccess
                                                                                       : kExitUnusableInput;
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitUnusableInput;
  }
}

int run(int argc, const char* const* argv, Streams io) {
  CLI::App app{"Grade four-part chorales against a reference corpus profile"};
  app.require_subcommand(1);

  const std::map<std::string, OutputFormat> formats{{"table", OutputFormat::table}, {"json", OutputFormat::json}};

  auto* profile_cmd = app.add_subcommand("profile", "Corpus profiles");
  profile_cmd->require_subcommand(1);
  auto* build_cmd = profile_cmd->add_subcommand("build", "Build a profile from a directory of chorales");
  std::string build_dir;
  std::string build_out;
  build_cmd->add_option("dir", build_dir, "Directory of .xml/.musicxml/.json chorales")->required();
  build_cmd->add_option("-o,--output", build_out, "Profile file to write")->required();

  auto* grade_cmd = app.add_subcommand("grade", "Grade chorales against a profile");
  std::vector<std::string> grade_files;
  std::string grade_profile;
  OutputFormat grade_format = OutputFormat::table;
  grade_cmd->add_option("files", grade_files, "Chorale files")->required();
  grade_cmd->add_option("--profile", grade_profile, "Profile file")->required();
  grade_cmd->add_option("--format", grade_format, "table or json")->transform(CLI::CheckedTransformer(formats));

  auto* eval_cmd = app.add_subcommand("evaluate", "Compare two sets of chorales");
  std::string set_a;
  std::string set_b;
  std::string eval_profile;
  OutputFormat eval_format = OutputFormat::table;
  eval_cmd->add_option("--set-a", set_a, "Reference set directory")->required();
  eval_cmd->add_option("--set-b", set_b, "Comparison set directory")->required();
  eval_cmd->add_option("--profile", eval_profile, "Profile file")->required();
  eval_cmd->add_option("--format", eval_format, "table or json")->transform(CLI::CheckedTransformer(formats));

  auto* disc_cmd = app.add_subcommand("discriminate", "Paired real-vs-other discrimination");
  std::string pairs;
  std::string disc_profile;
  disc_cmd->add_option("--pairs", pairs, "CSV manifest with header real,other")->required();
  disc_cmd->add_option("--profile", disc_profile, "Profile file")->required();

  auto* corrupt_cmd = app.add_subcommand("corrupt", "Write a pitch-corrupted copy of a chorale");
  std::string corrupt_in;
  std::string corrupt_out;
  double rate = 0;
  std::uint64_t seed = 0;
  corrupt_cmd->add_option("file", corrupt_in, "Chorale file")->required();
  corrupt_cmd->add_option("--rate", rate, "Per-note corruption probability in (0, 1]")->required();
  corrupt_cmd->add_option("--seed", seed, "Random seed")->required();
  corrupt_cmd->add_option("-o,--output", corrupt_out, "Canonical JSON to write")->required();

  auto* convert_cmd = app.add_subcommand("convert", "Write a chorale as canonical JSON");
  std::string convert_in;
  std::string convert_out;
  convert_cmd->add_option("file", convert_in, "Chorale file")->required();
  convert_cmd->add_option("-o,--output", convert_out, "Canonical JSON to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, io.out, io.err);
    return code == 0 ? kExitSuccess : kExitUnusableInput;
  }

  if (*build_cmd) return cmd_profile(build_dir, build_out, io);
  if (*grade_cmd) {
    return cmd_grade(std::vector<fs::path>(grade_files.begin(), grade_files.end()), grade_profile, grade_format, io);
  }
  if (*eval_cmd) return cmd_evaluate(set_a, set_b, eval_profile, eval_format, io);
  if (*disc_cmd) return cmd_discriminate(pairs, disc_profile, io);
  if (*corrupt_cmd) return cmd_corrupt(corrupt_in, rate, seed, corrupt_out, io);
  if (*convert_cmd) return cmd_convert(convert_in, convert_out, io);
  return kExitUnusableInput;
}

}  // namespace chorale::cli
