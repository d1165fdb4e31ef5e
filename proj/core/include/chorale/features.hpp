#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "chorale/distribution.hpp"
#include "chorale/score.hpp"

namespace chorale {

/// The nine graded features, in the column order of the usual results table.
enum class FeatureId : std::uint8_t {
  pitch,
  rhythm,
  parallel_errors,
  harmonic_quality,
  intervals_soprano,
  intervals_alto,
  intervals_tenor,
  intervals_bass,
  repeated_sequence,
};

inline constexpr std::array<FeatureId, 9> kFeatureIds = {
    FeatureId::pitch,           FeatureId::rhythm,         FeatureId::parallel_errors,
    FeatureId::harmonic_quality, FeatureId::intervals_soprano, FeatureId::intervals_alto,
    FeatureId::intervals_tenor, FeatureId::intervals_bass,  FeatureId::repeated_sequence};

std::string_view to_string(FeatureId id) noexcept;
std::optional<FeatureId> feature_id_from_string(std::string_view name) noexcept;
SupportKind feature_kind(FeatureId id) noexcept;
FeatureId interval_feature(VoiceLabel label) noexcept;

// ---------------------------------------------------------------------------
// Chord qualities

enum class HarmonicQuality : std::uint8_t {
  major,
  minor,
  diminished,
  augmented,
  dominant_seventh,
  major_seventh,
  minor_seventh,
  half_diminished_seventh,
  diminished_seventh,
  other,
};

std::string_view to_string(HarmonicQuality q) noexcept;

/// Exact pitch-class-set template match; octave, inversion and doubling
/// invariant. Dyads and unmatched sets are `other`.
HarmonicQuality classify_quality(std::span<const SpelledPitch> pitches) noexcept;

// ---------------------------------------------------------------------------
// Vertical slices

struct HarmonicSlice {
  Rational onset;
  std::array<SpelledPitch, 4> pitches;  // indexed by VoiceLabel
};

/// One slice per distinct onset in any voice, holding the pitch each voice
/// sounds there. Onsets where some voice is silent are skipped.
std::vector<HarmonicSlice> harmonic_slices(const Chorale& chorale);

// ---------------------------------------------------------------------------
// Parallel fifths and octaves

enum class ParallelErrorKind : std::uint8_t { p1_similar, p5_similar, p5_contrary, p8_similar, p8_contrary };

std::string_view to_string(ParallelErrorKind kind) noexcept;

struct ParallelError {
  ParallelErrorKind kind;
  VoiceLabel upper;
  VoiceLabel lower;
  Rational from_onset;
  Rational to_onset;
};

/// Errors between one voice pair across consecutive slices. Symmetric in
/// the order of `a` and `b`.
std::vector<ParallelErrorKind> parallel_errors_between(std::span<const HarmonicSlice> slices, VoiceLabel a,
                                                       VoiceLabel b);

/// All errors over the six voice pairs, ordered by slice then pair.
std::vector<ParallelError> find_parallel_errors(const Chorale& chorale);

struct ParallelErrorSummary {
  Distribution distribution{SupportKind::categorical};  // empty when error_count == 0
  std::int64_t error_count = 0;
};

ParallelErrorSummary parallel_errors(const Chorale& chorale);

// ---------------------------------------------------------------------------
// Repeated patterns

/// A maximal repeated substring of a token sequence. `occurrence_starts`
/// are the non-overlapping, leftmost-greedy occurrences (at least two).
struct RepeatMatch {
  std::size_t length = 0;
  std::vector<std::size_t> occurrence_starts;

  friend bool operator==(const RepeatMatch&, const RepeatMatch&) = default;
  friend auto operator<=>(const RepeatMatch&, const RepeatMatch&) = default;
};

/// Correlative-matrix repeat discovery over integer tokens. Reports every
/// substring of length >= 2 with >= 2 non-overlapping occurrences, except
/// those contained in a longer reported substring with the same count.
/// Sorted by (length, occurrence_starts).
std::vector<RepeatMatch> find_repeats(std::span<const int> tokens);

struct RepeatedPattern {
  VoiceLabel voice = VoiceLabel::soprano;
  std::size_t token_length = 0;
  Rational quarter_length;
  std::size_t occurrence_count = 0;
  std::vector<Rational> occurrence_onsets;
};

/// Tokens are (octave-free spelled pitch, duration).
std::vector<RepeatedPattern> find_repeated_patterns(const Voice& voice);

// ---------------------------------------------------------------------------
// Per-feature observation counts and distributions

CategoricalCounts pitch_counts(const Chorale& chorale);
NumericCounts rhythm_counts(const Chorale& chorale);
/// Throws FeatureUndefinedError for fewer than two events.
NumericCounts interval_counts(const Voice& voice);
CategoricalCounts harmonic_quality_counts(const Chorale& chorale);
/// Each pattern adds its quarter length once per occurrence.
NumericCounts repeated_sequence_counts(const Chorale& chorale);

Distribution pitch_distribution(const Chorale& chorale);
Distribution rhythm_distribution(const Chorale& chorale);
Distribution interval_distribution(const Voice& voice);
Distribution harmonic_quality_distribution(const Chorale& chorale);
/// Throws FeatureUndefinedError when no voice has a repeated pattern.
Distribution repeated_sequence_distribution(const Chorale& chorale);

/// Everything the grader needs from one chorale, as raw counts so corpora
/// can pool before normalizing.
struct FeatureObservations {
  std::array<NumericCounts, 9> numeric;          // used for numeric features
  std::array<CategoricalCounts, 9> categorical;  // used for categorical features
  std::int64_t parallel_error_count = 0;
  std::int64_t note_count = 0;

  Distribution distribution(FeatureId id) const;
};

/// Throws FeatureUndefinedError naming the feature on failure (a voice
/// with fewer than two notes). An absent repeated-pattern set is not an
/// error here; its distribution is simply empty.
FeatureObservations extract_observations(const Chorale& chorale);

}  // namespace chorale
