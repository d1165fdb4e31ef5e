#pragma once

#include <array>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chorale/score.hpp"

namespace chorale::testing {

// "C4:1 D4:1/2 r:1 E4:2" -> consecutive events; "r" is a rest (time passes).
inline Voice voice(VoiceLabel label, std::string_view notes) {
  Voice v{label, {}};
  std::istringstream in{std::string(notes)};
  std::string tok;
  Rational t = 0;
  while (in >> tok) {
    auto colon = tok.find(':');
    std::string pitch = tok.substr(0, colon);
    Rational dur = colon == std::string::npos ? Rational(1) : Rational::parse(tok.substr(colon + 1));
    if (pitch != "r") v.events.push_back(NoteEvent{t, dur, SpelledPitch::parse(pitch)});
    t += dur;
  }
  return v;
}

inline Chorale make_chorale(std::string_view s, std::string_view a, std::string_view t, std::string_view b,
                       Key key = Key{}, std::string id = "test") {
  return Chorale(std::move(id),
                 {voice(VoiceLabel::soprano, s), voice(VoiceLabel::alto, a), voice(VoiceLabel::tenor, t),
                  voice(VoiceLabel::bass, b)},
                 key);
}

// "C4 C4 C4" style filler.
inline std::string repeat_token(std::string_view token, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += token;
  }
  return out;
}

// Plain homophonic progression used by several suites: I IV V7 I twice.
inline Chorale cadence_chorale(std::string id = "cadence") {
  return make_chorale("E5 F5 F5 E5 E5 F5 F5 E5:2",
                 "C5 C5 B4 C5 C5 C5 B4 C5:2",
                 "G4 A4 G4 G4 G4 A4 G4 G4:2",
                 "C3 F3 G3 C3 C3 F3 G3 C3:2", Key{}, std::move(id));
}

inline Chorale transpose(const Chorale& c, int semitones, bool prefer_sharps = true) {
  std::vector<Voice> voices;
  for (const auto& v : c.voices()) {
    Voice out{v.label, {}};
    for (auto e : v.events) {
      e.pitch = spell_midi(midi(e.pitch) + semitones, prefer_sharps);
      out.events.push_back(e);
    }
    voices.push_back(std::move(out));
  }
  return Chorale(c.id(), std::move(voices), c.key());
}

// Diatonic transposition that keeps spelling: move every letter by
// `steps` and the sounding pitch by `semitones`.
inline SpelledPitch transpose_spelled(const SpelledPitch& p, int steps, int semitones) {
  int li = letter_index(p.letter) + steps;
  int octave = p.octave + (li >= 0 ? li / 7 : -((6 - li) / 7));
  li = ((li % 7) + 7) % 7;
  auto letter = static_cast<Letter>(li);
  int natural = (octave + 1) * 12 + letter_pitch_class(letter);
  return SpelledPitch{letter, midi(p) + semitones - natural, octave};
}

inline Chorale transpose_diatonic(const Chorale& c, int steps, int semitones, Key key) {
  std::vector<Voice> voices;
  for (const auto& v : c.voices()) {
    Voice out{v.label, {}};
    for (auto e : v.events) {
      e.pitch = transpose_spelled(e.pitch, steps, semitones);
      out.events.push_back(e);
    }
    voices.push_back(std::move(out));
  }
  return Chorale(c.id(), std::move(voices), key);
}

// `b` placed after the end of `a`, voice by voice.
inline Chorale concatenate(const Chorale& a, const Chorale& b) {
  std::vector<Voice> voices;
  const Rational shift = a.total_quarters();
  for (auto label : kVoiceLabels) {
    Voice v = a.voice(label);
    for (auto e : b.voice(label).events) {
      e.onset += shift;
      v.events.push_back(e);
    }
    voices.push_back(std::move(v));
  }
  return Chorale(a.id(), std::move(voices), a.key());
}

inline Voice reversed(const Voice& v) {
  Voice out{v.label, {}};
  Rational t = 0;
  for (auto it = v.events.rbegin(); it != v.events.rend(); ++it) {
    out.events.push_back(NoteEvent{t, it->duration, it->pitch});
    t += it->duration;
  }
  return out;
}

}  // namespace chorale::testing
