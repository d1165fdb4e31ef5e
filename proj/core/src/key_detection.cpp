#include <array>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "chorale/errors.hpp"
#include "chorale/ingest.hpp"

namespace chorale {

namespace {

// Krumhansl-Kessler probe-tone ratings, scaled by 100 so the correlation
// numerators below stay integral.
constexpr std::array<std::int64_t, 12> kMajorProfile = {635, 223, 348, 233, 438, 409, 252, 519, 239, 366, 229, 288};
constexpr std::array<std::int64_t, 12> kMinorProfile = {633, 268, 352, 538, 260, 353, 254, 475, 398, 269, 334, 317};

__extension__ typedef __int128 Wide;

struct Candidate {
  Mode mode;
  int tonic_pc;
  Wide numerator;  // 12*sum(xy) - sum(x)*sum(y)
  Wide profile_spread;  // 12*sum(y^2) - sum(y)^2
};

Wide spread(const std::array<std::int64_t, 12>& v) {
  Wide s = 0;
  Wide s2 = 0;
  for (auto x : v) {
    s += x;
    s2 += static_cast<Wide>(x) * x;
  }
  return 12 * s2 - s * s;
}

// a.numerator/sqrt(a.spread) > b.numerator/sqrt(b.spread), exactly.
bool correlates_better(const Candidate& a, const Candidate& b) {
  bool a_neg = a.numerator < 0;
  bool b_neg = b.numerator < 0;
  if (a_neg != b_neg) return b_neg;
  Wide lhs = a.numerator * a.numerator;
  Wide rhs = b.numerator * b.numerator;
  // Numerators are bounded well below 2^53 (see weight_vector), so the
  // squared products fit comfortably in 128 bits.
  Wide left = lhs * b.profile_spread;
  Wide right = rhs * a.profile_spread;
  return a_neg ? left < right : left > right;
}

// Duration-weighted pitch-class histogram as integers with gcd 1. The
// scaling is uniform, so correlation argmax is unchanged.
std::array<std::int64_t, 12> weight_vector(std::span<const Voice> voices) {
  std::array<Rational, 12> weights{};
  for (const auto& v : voices) {
    for (const auto& e : v.events) {
      int pc = ((midi(e.pitch) % 12) + 12) % 12;
      weights[static_cast<std::size_t>(pc)] += e.duration;
    }
  }
  std::int64_t lcm = 1;
  for (const auto& w : weights) lcm = std::lcm(lcm, w.den());
  std::array<std::int64_t, 12> out{};
  std::int64_t g = 0;
  for (std::size_t i = 0; i < 12; ++i) {
    out[i] = (weights[i] * Rational(lcm)).num();
    g = std::gcd(g, out[i]);
  }
  if (g > 1) {
    for (auto& x : out) x /= g;
  }
  for (auto x : out) {
    if (x > (std::int64_t{1} << 31)) throw Error("pitch-class weights too large for exact key detection");
  }
  return out;
}

Key spell_tonic(int tonic_pc, Mode mode, std::optional<int> signature) {
  std::optional<Key> best;
  int best_cost = std::numeric_limits<int>::max();
  // Sharps before flats so an exact enharmonic tie resolves to the sharp spelling.
  for (int alter : {0, 1, -1}) {
    for (int l = 0; l < 7; ++l) {
      Key k{static_cast<Letter>(l), alter, mode};
      if (k.tonic_pitch_class() != tonic_pc) continue;
      int cost = std::abs(k.fifths() - signature.value_or(0));
      if (cost < best_cost) {
        best = k;
        best_cost = cost;
      }
    }
  }
  return *best;
}

}  // namespace

Key detect_key(std::span<const Voice> voices, std::optional<int> key_signature_fifths) {
  const auto x = weight_vector(voices);
  Wide sum_x = 0;
  for (auto v : x) sum_x += v;

  std::optional<Candidate> best;
  for (Mode mode : {Mode::major, Mode::minor}) {
    const auto& profile = mode == Mode::major ? kMajorProfile : kMinorProfile;
    Wide sum_y = std::accumulate(profile.begin(), profile.end(), Wide{0});
    Wide profile_spread = spread(profile);
    for (int tonic = 0; tonic < 12; ++tonic) {
      Wide sum_xy = 0;
      for (int pc = 0; pc < 12; ++pc) {
        sum_xy += static_cast<Wide>(x[static_cast<std::size_t>(pc)]) *
                  profile[static_cast<std::size_t>((pc - tonic + 12) % 12)];
      }
      Candidate c{mode, tonic, 12 * sum_xy - sum_x * sum_y, profile_spread};
      if (!best || correlates_better(c, *best)) best = c;
    }
  }
  return spell_tonic(best->tonic_pc, best->mode, key_signature_fifths);
}

Key detect_key(const Chorale& chorale, std::optional<int> key_signature_fifths) {
  return detect_key(std::span<const Voice>(chorale.voices()), key_signature_fifths);
}

}  // namespace chorale
