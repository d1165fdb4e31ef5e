#include <doctest.h>

#include <filesystem>
#include <random>

#include "chorale/ingest.hpp"
#include "fixtures.hpp"
#include "key_oracle.hpp"

using namespace chorale;
using chorale::testing::make_chorale;
using chorale::testing::transpose;

namespace {

const char* kScale = "C4 D4 E4 F4 G4 A4 B4 C5";

Chorale scale_chorale() { return make_chorale(kScale, kScale, kScale, kScale); }

Chorale scaled_durations(const Chorale& c, Rational factor) {
  std::vector<Voice> voices;
  for (const auto& v : c.voices()) {
    Voice out{v.label, {}};
    for (auto e : v.events) out.events.push_back(NoteEvent{e.onset * factor, e.duration * factor, e.pitch});
    voices.push_back(out);
  }
  return Chorale(c.id(), voices, c.key());
}

}  // namespace

TEST_CASE("C major scale is C major") {
  Chorale c = scale_chorale();
  auto oracle = oracle::best_key(c);
  CHECK(oracle.tonic == 0);
  CHECK(oracle.mode == Mode::major);
  CHECK(detect_key(c) == Key{});
}

TEST_CASE("transposing up seven semitones moves the key up a fifth") {
  Chorale c = scale_chorale();
  CHECK(detect_key(transpose(c, 7)) == Key::make(Letter::G, 0, Mode::major));
  for (int k = 0; k < 12; ++k) {
    Key up = detect_key(transpose(c, k));
    CHECK(up.tonic_pitch_class() == k);
    CHECK(up.mode == Mode::major);
  }
}

TEST_CASE("scaling all durations does not change the key") {
  Chorale c = make_chorale("A4 B4 C5 D5 E5:2 G#4 A4", "C5 D5 E5 F5 C5:2 B4 C5", "A3 G#3 A3 A3 A3:2 E3 E3",
                           "A2 G#2 A2 D3 A2:2 E3 A2");
  Key k = detect_key(c);
  CHECK(k == Key::make(Letter::A, 0, Mode::minor));
  for (Rational f : {Rational(1, 3), Rational(2), Rational(5, 7)}) CHECK(detect_key(scaled_durations(c, f)) == k);
}

TEST_CASE("exact tie prefers major then the lower tonic") {
  // Every pitch class once with equal duration: all 24 correlations are 0.
  const char* chromatic = "C4 C#4 D4 D#4 E4 F4 F#4 G4 G#4 A4 A#4 B4";
  Chorale c = make_chorale(chromatic, chromatic, chromatic, chromatic);
  CHECK(detect_key(c) == Key{});
  CHECK(detect_key(transpose(c, 5)) == Key{});
}

TEST_CASE("tonic spelling follows the signature") {
  Chorale c = transpose(scale_chorale(), 8, false);
  CHECK(detect_key(c, -4) == Key::make(Letter::A, -1, Mode::major));
  CHECK(detect_key(c, 4) == Key::make(Letter::G, 1, Mode::major));
  CHECK(detect_key(transpose(scale_chorale(), 6), 6) == Key::make(Letter::F, 1, Mode::major));
  CHECK(detect_key(transpose(scale_chorale(), 6), -6) == Key::make(Letter::G, -1, Mode::major));
}

TEST_CASE("agrees with a floating-point correlation on random material") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pitch(48, 72);
  std::uniform_int_distribution<int> dur(1, 4);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Voice> voices;
    for (auto label : kVoiceLabels) {
      Voice v{label, {}};
      Rational t = 0;
      for (int i = 0; i < 6; ++i) {
        Rational d(dur(rng), 2);
        v.events.push_back(NoteEvent{t, d, spell_midi(pitch(rng), true)});
        t += d;
      }
      voices.push_back(v);
    }
    Chorale c("r", voices, Key{});
    auto expected = oracle::best_key(c);
    if (expected.margin < 1e-9) continue;
    ++compared;
    Key got = detect_key(c);
    CHECK(got.tonic_pitch_class() == expected.tonic);
    CHECK(got.mode == expected.mode);
  }
  CHECK(compared > 250);
}

TEST_CASE("agrees with a floating-point correlation on the Bach corpus") {
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(CHORALE_TEST_DATA) / "bach")) {
    Chorale c = load_chorale_file(entry.path());
    auto expected = oracle::best_key(c);
    if (expected.margin < 1e-9) continue;
    CAPTURE(c.id());
    CHECK(c.key().tonic_pitch_class() == expected.tonic);
    CHECK(c.key().mode == expected.mode);
  }
}
