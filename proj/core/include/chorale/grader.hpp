#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chorale/features.hpp"
#include "chorale/metrics.hpp"
#include "chorale/profile.hpp"

namespace chorale {

struct FeatureScore {
  double distance = 0;
  double weight = 1;
  double contribution = 0;  // weight * distance
};

/// Per-feature breakdown of a grade. Lower is better; the largest
/// contributions point at the weakest aspects of the chorale.
struct GradeReport {
  std::string chorale_id;
  std::array<FeatureScore, 9> per_feature;  // indexed by FeatureId
  double overall_grade = 0;

  const FeatureScore& score(FeatureId id) const noexcept { return per_feature[static_cast<std::size_t>(id)]; }
};

/// (errors / notes of the chorale) / (errors / notes of the corpus).
/// Throws DegenerateProfileError when the corpus ratio is 0.
double parallel_weight(std::int64_t error_count, std::int64_t note_count, const CorpusProfile& profile);
double parallel_weight(const Chorale& chorale, const CorpusProfile& profile);

/// Weighted sum of per-feature distances to the profile. All weights are 1
/// except parallel errors, which use parallel_weight(); a chorale without
/// parallel errors contributes 0 there, and one without repeated sequences
/// is charged the profile's fallback distance. Feature failures are
/// rethrown with the feature id in the message.
GradeReport grade(const Chorale& chorale, const CorpusProfile& profile);

/// Grades from already-extracted observations.
GradeReport grade(std::string chorale_id, const FeatureObservations& observations, const CorpusProfile& profile);

std::string report_to_json(const GradeReport& report);
std::string reports_to_json(std::span<const GradeReport> reports);
/// Inverse of report_to_json; checks the summation invariant. Throws ParseError.
GradeReport report_from_json(std::string_view document);

/// Aligned text table, features sorted by contribution (largest first),
/// values to two decimals.
std::string render_report_table(const GradeReport& report);

struct SummaryStats {
  double median = 0;
  double stddev = 0;  // sample standard deviation, 0 for a single value
};

SummaryStats summarize(std::span<const double> values);

/// Median and spread of every feature contribution and of the overall grade
/// over one set of chorales.
struct SetSummary {
  std::vector<GradeReport> reports;      // successfully graded, input order
  std::vector<std::string> warnings;     // one per chorale that failed
  std::array<SummaryStats, 9> features;  // indexed by FeatureId
  SummaryStats overall;

  std::vector<double> overall_grades() const;
  std::vector<double> contributions(FeatureId id) const;
};

/// Requires at least two chorales; failing chorales become warnings and the
/// statistics cover the rest. Throws InsufficientSamplesError if none grade.
SetSummary grade_set(std::span<const Chorale> chorales, const CorpusProfile& profile);

/// Summary over reports that were graded elsewhere (e.g. in parallel).
SetSummary summarize_reports(std::vector<GradeReport> reports, std::vector<std::string> warnings);

struct PairOutcome {
  std::optional<double> real_grade;
  std::optional<double> other_grade;
  bool voided = false;  // grading failed on either side
  bool correct = false;
};

struct DiscriminationResult {
  std::vector<PairOutcome> pairs;
  std::vector<std::string> warnings;
  std::size_t scored = 0;
  std::size_t correct = 0;
  double accuracy = 0;
};

/// Picks the better-graded chorale of each (real, other) pair; correct iff
/// grade(real) < grade(other), so ties count against. Voided pairs are
/// excluded from the accuracy. Throws InsufficientSamplesError when no pair
/// can be scored.
DiscriminationResult discriminate(std::span<const std::pair<Chorale, Chorale>> pairs, const CorpusProfile& profile);

/// Scores a pair from precomputed grades.
PairOutcome judge_pair(double real_grade, double other_grade) noexcept;
DiscriminationResult tally(std::vector<PairOutcome> pairs, std::vector<std::string> warnings);

struct EvaluationSummary {
  SetSummary set_a;
  SetSummary set_b;
  KSResult ks;  // over overall grades
  std::optional<double> discrimination_accuracy;
};

EvaluationSummary evaluate_sets(SetSummary set_a, SetSummary set_b);

/// Results-table layout: one row per set, nine feature columns plus the
/// overall grade, each "median (stddev)" to two decimals, then the KS line.
std::string render_evaluation_table(const EvaluationSummary& summary, std::string_view label_a,
                                    std::string_view label_b);

}  // namespace chorale
