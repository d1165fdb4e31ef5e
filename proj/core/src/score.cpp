#include "chorale/score.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "chorale/errors.hpp"

namespace chorale {

namespace {

constexpr std::array<int, 7> kLetterPitchClass = {0, 2, 4, 5, 7, 9, 11};
constexpr std::array<char, 7> kLetterChars = {'C', 'D', 'E', 'F', 'G', 'A', 'B'};
// Circle-of-fifths position of each natural letter as a major tonic.
constexpr std::array<int, 7> kLetterFifths = {0, 2, 4, -1, 1, 3, 5};

constexpr std::array<int, 7> kMajorSteps = {0, 2, 4, 5, 7, 9, 11};
constexpr std::array<int, 7> kNaturalMinorSteps = {0, 2, 3, 5, 7, 8, 10};

int floor_mod(int a, int m) noexcept { return ((a % m) + m) % m; }

std::optional<Letter> letter_from_char(char c) noexcept {
  c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kLetterChars.size(); ++i) {
    if (kLetterChars[i] == c) return static_cast<Letter>(i);
  }
  return std::nullopt;
}

std::string accidental_str(int alter) {
  return alter >= 0 ? std::string(static_cast<std::size_t>(alter), '#')
                    : std::string(static_cast<std::size_t>(-alter), 'b');
}

// Parses a run of '#' or 'b' starting at `pos`; returns the alteration.
int parse_accidentals(std::string_view text, std::size_t& pos) {
  int alter = 0;
  while (pos < text.size() && (text[pos] == '#' || text[pos] == 'b')) {
    alter += text[pos] == '#' ? 1 : -1;
    ++pos;
  }
  return alter;
}

}  // namespace

int letter_index(Letter letter) noexcept { return static_cast<int>(letter); }
int letter_pitch_class(Letter letter) noexcept { return kLetterPitchClass[static_cast<std::size_t>(letter)]; }
char letter_char(Letter letter) noexcept { return kLetterChars[static_cast<std::size_t>(letter)]; }

SpelledPitch SpelledPitch::make(Letter letter, int alter, int octave) {
  if (alter < -2 || alter > 2) {
    throw InvalidChoraleError("accidental " + std::to_string(alter) + " outside [-2, +2]");
  }
  return SpelledPitch{letter, alter, octave};
}

SpelledPitch SpelledPitch::parse(std::string_view text) {
  auto fail = [&] { return ParseError("malformed pitch '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  auto letter = letter_from_char(text[0]);
  if (!letter || !std::isupper(static_cast<unsigned char>(text[0]))) throw fail();
  std::size_t pos = 1;
  int alter = parse_accidentals(text, pos);
  int octave = 0;
  auto rest = text.substr(pos);
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), octave);
  if (rest.empty() || ec != std::errc{} || ptr != rest.data() + rest.size()) throw fail();
  if (alter < -2 || alter > 2) throw fail();
  return SpelledPitch{*letter, alter, octave};
}

std::string SpelledPitch::str() const {
  return std::string(1, letter_char(letter)) + accidental_str(alter) + std::to_string(octave);
}

Key Key::make(Letter letter, int alter, Mode mode) {
  if (alter < -1 || alter > 1) {
    throw InvalidChoraleError("key tonic alteration " + std::to_string(alter) + " outside [-1, +1]");
  }
  return Key{letter, alter, mode};
}

int Key::fifths() const noexcept {
  int major = kLetterFifths[static_cast<std::size_t>(tonic_letter)] + 7 * tonic_alter;
  return mode == Mode::major ? major : major - 3;
}

int Key::tonic_pitch_class() const noexcept { return floor_mod(letter_pitch_class(tonic_letter) + tonic_alter, 12); }

std::string Key::tonic_str() const { return std::string(1, letter_char(tonic_letter)) + accidental_str(tonic_alter); }

Key Key::parse(std::string_view tonic, std::string_view mode) {
  auto fail = [&] { return ParseError("malformed key '" + std::string(tonic) + " " + std::string(mode) + "'"); };
  if (tonic.empty() || !std::isupper(static_cast<unsigned char>(tonic[0]))) throw fail();
  auto letter = letter_from_char(tonic[0]);
  if (!letter) throw fail();
  std::size_t pos = 1;
  int alter = parse_accidentals(tonic, pos);
  if (pos != tonic.size() || alter < -1 || alter > 1) throw fail();
  Mode m;
  if (mode == "major") {
    m = Mode::major;
  } else if (mode == "minor") {
    m = Mode::minor;
  } else {
    throw fail();
  }
  return Key{*letter, alter, m};
}

std::string ScaleDegree::str() const { return accidental_str(accidental) + std::to_string(degree); }

std::string_view to_string(VoiceLabel label) noexcept {
  switch (label) {
    case VoiceLabel::soprano: return "soprano";
    case VoiceLabel::alto: return "alto";
    case VoiceLabel::tenor: return "tenor";
    case VoiceLabel::bass: return "bass";
  }
  return "?";
}

std::optional<VoiceLabel> voice_label_from_string(std::string_view name) noexcept {
  std::string lowered;
  for (char c : name) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (auto label : kVoiceLabels) {
    if (lowered == to_string(label)) return label;
  }
  return std::nullopt;
}

int midi(const SpelledPitch& p) noexcept {
  return letter_pitch_class(p.letter) + p.alter + 12 * (p.octave + 1);
}

int directed_interval(const SpelledPitch& a, const SpelledPitch& b) noexcept { return midi(b) - midi(a); }

ScaleDegree scale_degree(const SpelledPitch& p, const Key& key) noexcept {
  int step = floor_mod(letter_index(p.letter) - letter_index(key.tonic_letter), 7);
  const auto& steps = key.mode == Mode::major ? kMajorSteps : kNaturalMinorSteps;
  int diatonic_pc = key.tonic_pitch_class() + steps[static_cast<std::size_t>(step)];
  int pc = letter_pitch_class(p.letter) + p.alter;
  // Centered residue in [-5, +6]; only double accidentals in accidental-tonic
  // keys can leave [-2, +2].
  int offset = floor_mod(pc - diatonic_pc + 5, 12) - 5;
  return ScaleDegree{step + 1, offset};
}

SpelledPitch spell_midi(int midi_number, bool prefer_sharps) {
  int pc = floor_mod(midi_number, 12);
  int octave = (midi_number - pc) / 12 - 1;
  for (std::size_t i = 0; i < kLetterPitchClass.size(); ++i) {
    if (kLetterPitchClass[i] == pc) return SpelledPitch{static_cast<Letter>(i), 0, octave};
  }
  // Black key: pc - 1 and pc + 1 are always natural letters (E/F and B/C
  // boundaries only border white keys).
  if (prefer_sharps) {
    for (std::size_t i = 0; i < kLetterPitchClass.size(); ++i) {
      if (kLetterPitchClass[i] == pc - 1) return SpelledPitch{static_cast<Letter>(i), 1, octave};
    }
  }
  for (std::size_t i = 0; i < kLetterPitchClass.size(); ++i) {
    if (kLetterPitchClass[i] == pc + 1) return SpelledPitch{static_cast<Letter>(i), -1, octave};
  }
  return SpelledPitch{};  // unreachable
}

void validate_voice(const Voice& voice) {
  const auto name = std::string(to_string(voice.label));
  for (std::size_t i = 0; i < voice.events.size(); ++i) {
    const auto& e = voice.events[i];
    if (e.duration <= Rational(0)) {
      throw InvalidChoraleError(name + " event " + std::to_string(i) + " has non-positive duration " +
                                e.duration.str());
    }
    if (e.onset < Rational(0)) {
      throw InvalidChoraleError(name + " event " + std::to_string(i) + " has negative onset");
    }
    if (e.pitch.alter < -2 || e.pitch.alter > 2) {
      throw InvalidChoraleError(name + " event " + std::to_string(i) + " accidental outside [-2, +2]");
    }
    if (i > 0 && e.onset < voice.events[i - 1].end()) {
      throw InvalidChoraleError(name + " event " + std::to_string(i) + " overlaps its predecessor");
    }
  }
}

Chorale::Chorale(std::string id, std::vector<Voice> voices, Key key) : id_(std::move(id)), key_(key) {
  if (voices.size() != 4) {
    throw VoiceCountError("chorale '" + id_ + "' has " + std::to_string(voices.size()) + " voices, expected 4");
  }
  std::array<bool, 4> seen{};
  for (auto& v : voices) {
    auto slot = static_cast<std::size_t>(v.label);
    if (seen[slot]) throw VoiceCountError("chorale '" + id_ + "' repeats voice " + std::string(to_string(v.label)));
    seen[slot] = true;
    validate_voice(v);
    voices_[slot] = std::move(v);
  }
  if (key_.tonic_alter < -1 || key_.tonic_alter > 1) throw InvalidChoraleError("key tonic alteration outside [-1, +1]");
  if (note_count() < kMinNotes) {
    throw InvalidChoraleError("chorale '" + id_ + "' has " + std::to_string(note_count()) + " notes, at least " +
                              std::to_string(kMinNotes) + " required");
  }
  for (const auto& v : voices_) {
    if (!v.events.empty()) total_quarters_ = std::max(total_quarters_, v.events.back().end());
  }
}

std::size_t Chorale::note_count() const noexcept {
  std::size_t n = 0;
  for (const auto& v : voices_) n += v.events.size();
  return n;
}

Chorale Chorale::with_key(Key key) const {
  Chorale copy = *this;
  copy.key_ = key;
  return copy;
}

Chorale Chorale::with_id(std::string id) const {
  Chorale copy = *this;
  copy.id_ = std::move(id);
  return copy;
}

}  // namespace chorale
