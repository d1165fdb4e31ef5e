#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chorale/distribution.hpp"
#include "chorale/features.hpp"
#include "chorale/score.hpp"

namespace chorale {

/// Names the ground metrics a profile was built for. Grades computed under
/// different conventions are not comparable, so loading refuses a mismatch.
inline constexpr std::string_view kMetricConvention = "numeric:w1-cdf;categorical:discrete-total-variation";
inline constexpr int kProfileVersion = 1;

/// Pooled reference distributions for every feature plus the corpus
/// error-to-note ratio.
struct CorpusProfile {
  std::array<Distribution, 9> features;  // indexed by FeatureId
  double corpus_error_note_ratio = 0;
  std::int64_t corpus_size = 0;
  std::string metric_convention{kMetricConvention};
  /// Largest repeated-sequence distance of any corpus chorale; charged to a
  /// graded chorale that has no repeated sequence at all.
  double repeated_sequence_fallback = 0;
  std::vector<std::string> corpus_ids;
  std::string content_hash;

  const Distribution& feature(FeatureId id) const noexcept { return features[static_cast<std::size_t>(id)]; }

  /// False when the corpus had no parallel errors; such a profile cannot
  /// weight the parallel-error feature of a chorale that has errors.
  bool has_parallel_reference() const noexcept { return corpus_error_note_ratio > 0; }
};

/// Pools raw observations of every chorale and normalizes once. Throws
/// ProfileBuildError (naming the chorale) when a chorale's features are
/// undefined, for fewer than two chorales, or when the corpus has no
/// repeated sequences.
CorpusProfile build_profile(std::span<const Chorale> corpus);

/// SHA-256 over the serialized profile without its hash field.
std::string compute_content_hash(const CorpusProfile& profile);

std::string write_profile_json(const CorpusProfile& profile);

/// Throws ProfileFormatError on schema problems, a foreign metric convention
/// or a content hash that does not match.
CorpusProfile parse_profile_json(std::string_view document);

}  // namespace chorale
