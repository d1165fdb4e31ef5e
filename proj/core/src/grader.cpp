#include "chorale/grader.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "chorale/errors.hpp"

namespace chorale {

namespace {

using nlohmann::json;

constexpr double kSumTolerance = 1e-9;

json report_json(const GradeReport& r) {
  json features = json::object();
  for (auto id : kFeatureIds) {
    const auto& s = r.score(id);
    features[std::string(to_string(id))] = {
        {"distance", s.distance}, {"weight", s.weight}, {"contribution", s.contribution}};
  }
  return json{{"chorale_id", r.chorale_id}, {"features", std::move(features)}, {"overall_grade", r.overall_grade}};
}

// Adds context to the active exception without losing its type.
[[noreturn]] void rethrow_prefixed(const std::string& prefix) {
  try {
    throw;
  } catch (const DegenerateProfileError& e) {
    throw DegenerateProfileError(prefix + e.what());
  } catch (const SupportMismatchError& e) {
    throw SupportMismatchError(prefix + e.what());
  } catch (const FeatureUndefinedError& e) {
    throw FeatureUndefinedError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

}  // namespace

double parallel_weight(std::int64_t error_count, std::int64_t note_count, const CorpusProfile& profile) {
  if (!profile.has_parallel_reference()) {
    throw DegenerateProfileError("profile has no parallel errors, so the parallel-error weight is undefined");
  }
  const double ratio = static_cast<double>(error_count) / static_cast<double>(note_count);
  return ratio / profile.corpus_error_note_ratio;
}

double parallel_weight(const Chorale& chorale, const CorpusProfile& profile) {
  return parallel_weight(parallel_errors(chorale).error_count, static_cast<std::int64_t>(chorale.note_count()), profile);
}

GradeReport grade(std::string chorale_id, const FeatureObservations& obs, const CorpusProfile& profile) {
  GradeReport report;
  report.chorale_id = std::move(chorale_id);
  for (auto id : kFeatureIds) {
    auto& s = report.per_feature[static_cast<std::size_t>(id)];
    try {
      if (id == FeatureId::parallel_errors) {
        if (obs.parallel_error_count == 0) {
          s = FeatureScore{0, 0, 0};
          continue;
        }
        s.weight = parallel_weight(obs.parallel_error_count, obs.note_count, profile);
        s.distance = wasserstein(obs.distribution(id), profile.feature(id));
      } else if (id == FeatureId::repeated_sequence && obs.numeric[static_cast<std::size_t>(id)].empty()) {
        s.distance = profile.repeated_sequence_fallback;
      } else {
        s.distance = wasserstein(obs.distribution(id), profile.feature(id));
      }
    } catch (const Error&) {
      rethrow_prefixed(std::string(to_string(id)) + ": ");
    }
    s.contribution = s.weight * s.distance;
  }
  report.overall_grade = 0;
  for (const auto& s : report.per_feature) report.overall_grade += s.contribution;
  return report;
}

GradeReport grade(const Chorale& chorale, const CorpusProfile& profile) {
  FeatureObservations obs;
  try {
    obs = extract_observations(chorale);
  } catch (const Error&) {
    rethrow_prefixed("chorale '" + chorale.id() + "': ");
  }
  return grade(chorale.id(), obs, profile);
}

std::string report_to_json(const GradeReport& report) { return report_json(report).dump(2) + "\n"; }

std::string reports_to_json(std::span<const GradeReport> reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return arr.dump(2) + "\n";
}

GradeReport report_from_json(std::string_view document) {
  GradeReport r;
  try {
    const json doc = json::parse(document);
    r.chorale_id = doc.at("chorale_id").get<std::string>();
    r.overall_grade = doc.at("overall_grade").get<double>();
    const json& features = doc.at("features");
    if (features.size() != kFeatureIds.size()) throw ParseError("report must list all nine features");
    for (auto id : kFeatureIds) {
      const json& f = features.at(std::string(to_string(id)));
      auto& s = r.per_feature[static_cast<std::size_t>(id)];
      s.distance = f.at("distance").get<double>();
      s.weight = f.at("weight").get<double>();
      s.contribution = f.at("contribution").get<double>();
      if (s.distance < 0 || s.weight < 0 || s.contribution < 0) throw ParseError("negative value in report");
      if (std::abs(s.contribution - s.weight * s.distance) > kSumTolerance) {
        throw ParseError("contribution of '" + std::string(to_string(id)) + "' is not weight * distance");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  double sum = 0;
  for (const auto& s : r.per_feature) sum += s.contribution;
  if (std::abs(sum - r.overall_grade) > kSumTolerance) throw ParseError("overall grade is not the sum of contributions");
  return r;
}

std::string render_report_table(const GradeReport& report) {
  std::array<FeatureId, 9> order = kFeatureIds;
  std::stable_sort(order.begin(), order.end(), [&](FeatureId a, FeatureId b) {
    return report.score(a).contribution > report.score(b).contribution;
  });
  std::string out = fmt::format("{}  overall grade {:.2f}\n", report.chorale_id, report.overall_grade);
  out += fmt::format("  {:<18} {:>9} {:>7} {:>13}\n", "feature", "distance", "weight", "contribution");
  for (auto id : order) {
    const auto& s = report.score(id);
    out += fmt::format("  {:<18} {:>9.2f} {:>7.2f} {:>13.2f}\n", to_string(id), s.distance, s.weight, s.contribution);
  }
  return out;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw InsufficientSamplesError("no values to summarize");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  SummaryStats s;
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  if (n > 1) {
    // shifted by the first value so a constant sample gives exactly 0
    double shift = 0;
    for (double x : v) shift += x - v[0];
    shift /= static_cast<double>(n);
    double ss = 0;
    for (double x : v) ss += (x - v[0] - shift) * (x - v[0] - shift);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

std::vector<double> SetSummary::overall_grades() const {
  std::vector<double> out;
  for (const auto& r : reports) out.push_back(r.overall_grade);
  return out;
}

std::vector<double> SetSummary::contributions(FeatureId id) const {
  std::vector<double> out;
  for (const auto& r : reports) out.push_back(r.score(id).contribution);
  return out;
}

SetSummary summarize_reports(std::vector<GradeReport> reports, std::vector<std::string> warnings) {
  if (reports.empty()) throw InsufficientSamplesError("no chorale in the set could be graded");
  SetSummary s;
  s.reports = std::move(reports);
  s.warnings = std::move(warnings);
  for (auto id : kFeatureIds) s.features[static_cast<std::size_t>(id)] = summarize(s.contributions(id));
  s.overall = summarize(s.overall_grades());
  return s;
}

SetSummary grade_set(std::span<const Chorale> chorales, const CorpusProfile& profile) {
  if (chorales.size() < 2) throw InsufficientSamplesError("grading a set needs at least 2 chorales");
  std::vector<GradeReport> reports;
  std::vector<std::string> warnings;
  for (const auto& c : chorales) {
    try {
      reports.push_back(grade(c, profile));
    } catch (const Error& e) {
      warnings.emplace_back(e.what());
    }
  }
  return summarize_reports(std::move(reports), std::move(warnings));
}

PairOutcome judge_pair(double real_grade, double other_grade) noexcept {
  return PairOutcome{real_grade, other_grade, false, real_grade < other_grade};
}

DiscriminationResult tally(std::vector<PairOutcome> pairs, std::vector<std::string> warnings) {
  DiscriminationResult r;
  r.pairs = std::move(pairs);
  r.warnings = std::move(warnings);
  for (const auto& p : r.pairs) {
    if (p.voided) continue;
    ++r.scored;
    if (p.correct) ++r.correct;
  }
  if (r.scored == 0) throw InsufficientSamplesError("no pair could be graded");
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.scored);
  return r;
}

DiscriminationResult discriminate(std::span<const std::pair<Chorale, Chorale>> pairs, const CorpusProfile& profile) {
  if (pairs.empty()) throw InsufficientSamplesError("discrimination needs at least one pair");
  std::vector<PairOutcome> outcomes;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      outcomes.push_back(judge_pair(grade(pairs[i].first, profile).overall_grade,
                                    grade(pairs[i].second, profile).overall_grade));
    } catch (const Error& e) {
      outcomes.push_back(PairOutcome{std::nullopt, std::nullopt, true, false});
      warnings.push_back("pair " + std::to_string(i + 1) + " voided: " + e.what());
    }
  }
  return tally(std::move(outcomes), std::move(warnings));
}

EvaluationSummary evaluate_sets(SetSummary set_a, SetSummary set_b) {
  EvaluationSummary s;
  s.ks = ks_two_sample(set_a.overall_grades(), set_b.overall_grades());
  s.set_a = std::move(set_a);
  s.set_b = std::move(set_b);
  return s;
}

std::string render_evaluation_table(const EvaluationSummary& summary, std::string_view label_a,
                                    std::string_view label_b) {
  const std::size_t label_width = std::max<std::size_t>({3, label_a.size(), label_b.size()});
  std::string out = fmt::format("{:<{}} {:>5}", "set", label_width, "n");
  for (auto id : kFeatureIds) out += fmt::format(" {:>17}", to_string(id));
  out += fmt::format(" {:>17}\n", "overall");
  auto row = [&](std::string_view label, const SetSummary& s) {
    std::string line = fmt::format("{:<{}} {:>5}", label, label_width, s.reports.size());
    for (const auto& st : s.features) line += fmt::format(" {:>17}", fmt::format("{:.2f} ({:.2f})", st.median, st.stddev));
    line += fmt::format(" {:>17}\n", fmt::format("{:.2f} ({:.2f})", s.overall.median, s.overall.stddev));
    return line;
  };
  out += row(label_a, summary.set_a);
  out += row(label_b, summary.set_b);
  out += fmt::format("KS D = {:.4f}, p = {:.3e} (n_a = {}, n_b = {}{})\n", summary.ks.statistic, summary.ks.p_value,
                     summary.ks.n_a, summary.ks.n_b, summary.ks.approximate ? ", approximate" : "");
  if (summary.discrimination_accuracy) {
    out += fmt::format("discrimination accuracy = {:.4f}\n", *summary.discrimination_accuracy);
  }
  return out;
}

}  // namespace chorale
