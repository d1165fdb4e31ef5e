#include "chorale/features.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "chorale/errors.hpp"

namespace chorale {

namespace {

constexpr std::array<std::string_view, 9> kFeatureNames = {
    "pitch",       "rhythm",      "parallel-errors", "harmonic-quality", "intervals-S",
    "intervals-A", "intervals-T", "intervals-B",     "repeated-sequence"};

int pitch_class(const SpelledPitch& p) noexcept { return ((midi(p) % 12) + 12) % 12; }

using PcMask = std::uint16_t;

PcMask mask_of(std::initializer_list<int> pcs) {
  PcMask m = 0;
  for (int pc : pcs) m |= static_cast<PcMask>(1u << pc);
  return m;
}

PcMask rotate(PcMask m, int by) {
  unsigned wide = m;
  return static_cast<PcMask>(((wide << by) | (wide >> (12 - by))) & 0xFFFu);
}

struct Template {
  HarmonicQuality quality;
  PcMask root_position;
};

const std::array<Template, 9>& templates() {
  static const std::array<Template, 9> kTemplates = {{
      {HarmonicQuality::major, mask_of({0, 4, 7})},
      {HarmonicQuality::minor, mask_of({0, 3, 7})},
      {HarmonicQuality::diminished, mask_of({0, 3, 6})},
      {HarmonicQuality::augmented, mask_of({0, 4, 8})},
      {HarmonicQuality::dominant_seventh, mask_of({0, 4, 7, 10})},
      {HarmonicQuality::major_seventh, mask_of({0, 4, 7, 11})},
      {HarmonicQuality::minor_seventh, mask_of({0, 3, 7, 10})},
      {HarmonicQuality::half_diminished_seventh, mask_of({0, 3, 6, 10})},
      {HarmonicQuality::diminished_seventh, mask_of({0, 3, 6, 9})},
  }};
  return kTemplates;
}

int sign(int v) noexcept { return (v > 0) - (v < 0); }

}  // namespace

std::string_view to_string(FeatureId id) noexcept { return kFeatureNames[static_cast<std::size_t>(id)]; }

std::optional<FeatureId> feature_id_from_string(std::string_view name) noexcept {
  for (auto id : kFeatureIds) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

SupportKind feature_kind(FeatureId id) noexcept {
  switch (id) {
    case FeatureId::pitch:
    case FeatureId::harmonic_quality:
    case FeatureId::parallel_errors:
      return SupportKind::categorical;
    default:
      return SupportKind::numeric;
  }
}

FeatureId interval_feature(VoiceLabel label) noexcept {
  return static_cast<FeatureId>(static_cast<int>(FeatureId::intervals_soprano) + static_cast<int>(label));
}

std::string_view to_string(HarmonicQuality q) noexcept {
  switch (q) {
    case HarmonicQuality::major: return "major";
    case HarmonicQuality::minor: return "minor";
    case HarmonicQuality::diminished: return "diminished";
    case HarmonicQuality::augmented: return "augmented";
    case HarmonicQuality::dominant_seventh: return "dominant-seventh";
    case HarmonicQuality::major_seventh: return "major-seventh";
    case HarmonicQuality::minor_seventh: return "minor-seventh";
    case HarmonicQuality::half_diminished_seventh: return "half-diminished-seventh";
    case HarmonicQuality::diminished_seventh: return "diminished-seventh";
    case HarmonicQuality::other: return "other";
  }
  return "other";
}

HarmonicQuality classify_quality(std::span<const SpelledPitch> pitches) noexcept {
  PcMask set = 0;
  for (const auto& p : pitches) set |= static_cast<PcMask>(1u << pitch_class(p));
  for (const auto& t : templates()) {
    for (int root = 0; root < 12; ++root) {
      if (rotate(t.root_position, root) == set) return t.quality;
    }
  }
  return HarmonicQuality::other;
}

std::vector<HarmonicSlice> harmonic_slices(const Chorale& chorale) {
  std::set<Rational> onsets;
  for (const auto& v : chorale.voices()) {
    for (const auto& e : v.events) onsets.insert(e.onset);
  }
  std::array<std::size_t, 4> cursor{};
  std::vector<HarmonicSlice> slices;
  slices.reserve(onsets.size());
  for (const auto& t : onsets) {
    HarmonicSlice slice{t, {}};
    bool complete = true;
    for (std::size_t vi = 0; vi < 4; ++vi) {
      const auto& events = chorale.voices()[vi].events;
      auto& i = cursor[vi];
      while (i < events.size() && events[i].end() <= t) ++i;
      if (i < events.size() && events[i].onset <= t) {
        slice.pitches[vi] = events[i].pitch;
      } else {
        complete = false;
      }
    }
    if (complete) slices.push_back(slice);
  }
  return slices;
}

std::string_view to_string(ParallelErrorKind kind) noexcept {
  switch (kind) {
    case ParallelErrorKind::p1_similar: return "P1-similar";
    case ParallelErrorKind::p5_similar: return "P5-similar";
    case ParallelErrorKind::p5_contrary: return "P5-contrary";
    case ParallelErrorKind::p8_similar: return "P8-similar";
    case ParallelErrorKind::p8_contrary: return "P8-contrary";
  }
  return "?";
}

namespace {

std::optional<ParallelErrorKind> classify_motion(const HarmonicSlice& from, const HarmonicSlice& to, VoiceLabel a,
                                                 VoiceLabel b) {
  const int a1 = midi(from.pitches[static_cast<std::size_t>(a)]);
  const int b1 = midi(from.pitches[static_cast<std::size_t>(b)]);
  const int a2 = midi(to.pitches[static_cast<std::size_t>(a)]);
  const int b2 = midi(to.pitches[static_cast<std::size_t>(b)]);
  if (a1 == a2 || b1 == b2) return std::nullopt;
  const int i1 = std::abs(a1 - b1);
  const int i2 = std::abs(a2 - b2);
  const int residue = i1 % 12;
  if (residue != i2 % 12 || (residue != 0 && residue != 7)) return std::nullopt;
  const bool similar = sign(a2 - a1) == sign(b2 - b1);
  if (i1 == 0 && i2 == 0) return ParallelErrorKind::p1_similar;
  if (residue == 0) return similar ? ParallelErrorKind::p8_similar : ParallelErrorKind::p8_contrary;
  return similar ? ParallelErrorKind::p5_similar : ParallelErrorKind::p5_contrary;
}

}  // namespace

std::vector<ParallelErrorKind> parallel_errors_between(std::span<const HarmonicSlice> slices, VoiceLabel a,
                                                       VoiceLabel b) {
  std::vector<ParallelErrorKind> out;
  for (std::size_t k = 0; k + 1 < slices.size(); ++k) {
    if (auto kind = classify_motion(slices[k], slices[k + 1], a, b)) out.push_back(*kind);
  }
  return out;
}

std::vector<ParallelError> find_parallel_errors(const Chorale& chorale) {
  const auto slices = harmonic_slices(chorale);
  std::vector<ParallelError> out;
  for (std::size_t k = 0; k + 1 < slices.size(); ++k) {
    for (std::size_t u = 0; u < 4; ++u) {
      for (std::size_t l = u + 1; l < 4; ++l) {
        auto upper = static_cast<VoiceLabel>(u);
        auto lower = static_cast<VoiceLabel>(l);
        if (auto kind = classify_motion(slices[k], slices[k + 1], upper, lower)) {
          out.push_back(ParallelError{*kind, upper, lower, slices[k].onset, slices[k + 1].onset});
        }
      }
    }
  }
  return out;
}

ParallelErrorSummary parallel_errors(const Chorale& chorale) {
  CategoricalCounts counts;
  const auto errors = find_parallel_errors(chorale);
  for (const auto& e : errors) ++counts[std::string(to_string(e.kind))];
  return ParallelErrorSummary{Distribution::from_counts(counts), static_cast<std::int64_t>(errors.size())};
}

CategoricalCounts pitch_counts(const Chorale& chorale) {
  CategoricalCounts counts;
  for (const auto& v : chorale.voices()) {
    for (const auto& e : v.events) ++counts[scale_degree(e.pitch, chorale.key()).str()];
  }
  return counts;
}

NumericCounts rhythm_counts(const Chorale& chorale) {
  NumericCounts counts;
  for (const auto& v : chorale.voices()) {
    for (const auto& e : v.events) ++counts[e.duration];
  }
  return counts;
}

NumericCounts interval_counts(const Voice& voice) {
  if (voice.events.size() < 2) {
    throw FeatureUndefinedError(std::string(to_string(voice.label)) + " has fewer than two notes");
  }
  NumericCounts counts;
  for (std::size_t i = 0; i + 1 < voice.events.size(); ++i) {
    ++counts[Rational(directed_interval(voice.events[i].pitch, voice.events[i + 1].pitch))];
  }
  return counts;
}

CategoricalCounts harmonic_quality_counts(const Chorale& chorale) {
  CategoricalCounts counts;
  for (const auto& s : harmonic_slices(chorale)) {
    ++counts[std::string(to_string(classify_quality(s.pitches)))];
  }
  return counts;
}

NumericCounts repeated_sequence_counts(const Chorale& chorale) {
  NumericCounts counts;
  for (const auto& v : chorale.voices()) {
    if (v.events.size() < 2) continue;
    for (const auto& p : find_repeated_patterns(v)) {
      counts[p.quarter_length] += static_cast<std::int64_t>(p.occurrence_count);
    }
  }
  return counts;
}

Distribution pitch_distribution(const Chorale& chorale) { return Distribution::from_counts(pitch_counts(chorale)); }

Distribution rhythm_distribution(const Chorale& chorale) { return Distribution::from_counts(rhythm_counts(chorale)); }

Distribution interval_distribution(const Voice& voice) { return Distribution::from_counts(interval_counts(voice)); }

Distribution harmonic_quality_distribution(const Chorale& chorale) {
  return Distribution::from_counts(harmonic_quality_counts(chorale));
}

Distribution repeated_sequence_distribution(const Chorale& chorale) {
  auto counts = repeated_sequence_counts(chorale);
  if (counts.empty()) throw FeatureUndefinedError("chorale '" + chorale.id() + "' has no repeated sequences");
  return Distribution::from_counts(counts);
}

Distribution FeatureObservations::distribution(FeatureId id) const {
  const auto slot = static_cast<std::size_t>(id);
  return feature_kind(id) == SupportKind::numeric ? Distribution::from_counts(numeric[slot])
                                                  : Distribution::from_counts(categorical[slot]);
}

FeatureObservations extract_observations(const Chorale& chorale) {
  FeatureObservations obs;
  auto slot = [](FeatureId id) { return static_cast<std::size_t>(id); };
  obs.categorical[slot(FeatureId::pitch)] = pitch_counts(chorale);
  obs.numeric[slot(FeatureId::rhythm)] = rhythm_counts(chorale);
  for (const auto& v : chorale.voices()) {
    const FeatureId id = interval_feature(v.label);
    try {
      obs.numeric[slot(id)] = interval_counts(v);
    } catch (const FeatureUndefinedError& e) {
      throw FeatureUndefinedError(std::string(to_string(id)) + ": " + e.what());
    }
  }
  obs.categorical[slot(FeatureId::harmonic_quality)] = harmonic_quality_counts(chorale);
  for (const auto& e : find_parallel_errors(chorale)) {
    ++obs.categorical[slot(FeatureId::parallel_errors)][std::string(to_string(e.kind))];
    ++obs.parallel_error_count;
  }
  obs.numeric[slot(FeatureId::repeated_sequence)] = repeated_sequence_counts(chorale);
  obs.note_count = static_cast<std::int64_t>(chorale.note_count());
  return obs;
}

}  // namespace chorale
