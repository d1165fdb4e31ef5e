#include "chorale/corrupt.hpp"

#include <array>
#include <random>

#include "chorale/errors.hpp"
#include "chorale/ingest.hpp"
#include "sha256.hpp"

namespace chorale {

namespace {

constexpr std::array<int, 4> kShifts = {-2, -1, 1, 2};

std::uint64_t content_seed(const Chorale& chorale, std::uint64_t seed) {
  const auto digest = detail::sha256(write_canonical_json(chorale));
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < 8; ++i) h = (h << 8) | digest[i];
  return h ^ seed;
}

// mt19937_64 output is fixed by the standard; the distributions in <random>
// are not, so uniforms are derived from the raw bits.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Chorale corrupt(const Chorale& chorale, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) throw Error("corruption rate must be in (0, 1]");
  std::mt19937_64 rng(content_seed(chorale, seed));
  const bool sharps = chorale.key().fifths() >= 0;

  std::vector<Voice> voices(chorale.voices().begin(), chorale.voices().end());
  for (auto& v : voices) {
    for (auto& e : v.events) {
      // Both draws happen for every note so a note's fate does not depend on
      // earlier outcomes.
      const double u = unit_uniform(rng);
      const int shift = kShifts[rng() % kShifts.size()];
      if (u < rate) e.pitch = spell_midi(midi(e.pitch) + shift, sharps);
    }
  }
  const Key key = detect_key(voices, chorale.key().fifths());
  return Chorale(chorale.id(), std::move(voices), key);
}

}  // namespace chorale
