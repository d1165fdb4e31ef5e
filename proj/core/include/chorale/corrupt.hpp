#pragma once

#include <cstdint>

#include "chorale/score.hpp"

namespace chorale {

/// Stand-in for model output: each note is, with probability `rate`,
/// transposed by one of {-2, -1, +1, +2} semitones (uniformly) and respelled
/// with the fewest accidentals, sharps in sharp keys and flats in flat keys.
/// Rhythm is untouched. The key is re-detected afterwards. The result
/// depends only on (canonical bytes of `chorale`, rate, seed).
///
/// Throws Error unless 0 < rate <= 1.
Chorale corrupt(const Chorale& chorale, double rate, std::uint64_t seed);

}  // namespace chorale
