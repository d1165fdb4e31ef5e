#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chorale/rational.hpp"

namespace chorale {

enum class Letter : std::uint8_t { C, D, E, F, G, A, B };

/// Letter name plus semitone alteration and octave (scientific pitch
/// notation, C4 = middle C). F#4 and Gb4 are different values.
struct SpelledPitch {
  Letter letter = Letter::C;
  int alter = 0;   // [-2, +2]
  int octave = 4;

  friend bool operator==(const SpelledPitch&, const SpelledPitch&) = default;
  friend auto operator<=>(const SpelledPitch&, const SpelledPitch&) = default;

  /// Validating constructor; throws InvalidChoraleError outside the accidental range.
  static SpelledPitch make(Letter letter, int alter, int octave);

  /// Parses "C4", "F#4", "Bb3", "Ebb5", "C-1". Throws ParseError.
  static SpelledPitch parse(std::string_view text);
  std::string str() const;
};

enum class Mode : std::uint8_t { major, minor };

struct Key {
  Letter tonic_letter = Letter::C;
  int tonic_alter = 0;  // [-1, +1]
  Mode mode = Mode::major;

  friend bool operator==(const Key&, const Key&) = default;

  static Key make(Letter letter, int alter, Mode mode);

  /// Position of the key signature on the circle of fifths (C major = 0,
  /// A minor = 0, Bb major = -2, F# minor = +3).
  int fifths() const noexcept;
  int tonic_pitch_class() const noexcept;

  /// "C", "F#", "Bb".
  std::string tonic_str() const;
  static Key parse(std::string_view tonic, std::string_view mode);
};

struct ScaleDegree {
  int degree = 1;      // 1..7
  int accidental = 0;  // [-2, +2] relative to the diatonic scale of the key

  friend bool operator==(const ScaleDegree&, const ScaleDegree&) = default;
  friend auto operator<=>(const ScaleDegree&, const ScaleDegree&) = default;

  /// "1", "#4", "b5", "bb7".
  std::string str() const;
};

struct NoteEvent {
  Rational onset;
  Rational duration;
  SpelledPitch pitch;

  Rational end() const { return onset + duration; }
  friend bool operator==(const NoteEvent&, const NoteEvent&) = default;
};

enum class VoiceLabel : std::uint8_t { soprano, alto, tenor, bass };

inline constexpr std::array<VoiceLabel, 4> kVoiceLabels = {VoiceLabel::soprano, VoiceLabel::alto,
                                                          VoiceLabel::tenor, VoiceLabel::bass};

std::string_view to_string(VoiceLabel label) noexcept;
std::optional<VoiceLabel> voice_label_from_string(std::string_view name) noexcept;

struct Voice {
  VoiceLabel label = VoiceLabel::soprano;
  std::vector<NoteEvent> events;

  friend bool operator==(const Voice&, const Voice&) = default;
};

/// Four SATB voices with an analyzed key. Construction validates every
/// invariant, so a Chorale in hand is always well formed.
class Chorale {
 public:
  static constexpr std::size_t kMinNotes = 8;

  /// `voices` may be given in any order but must carry each label exactly once.
  /// Throws VoiceCountError or InvalidChoraleError.
  Chorale(std::string id, std::vector<Voice> voices, Key key);

  const std::string& id() const noexcept { return id_; }
  const Key& key() const noexcept { return key_; }
  const std::array<Voice, 4>& voices() const noexcept { return voices_; }
  const Voice& voice(VoiceLabel label) const noexcept { return voices_[static_cast<std::size_t>(label)]; }
  const Rational& total_quarters() const noexcept { return total_quarters_; }
  std::size_t note_count() const noexcept;

  Chorale with_key(Key key) const;
  Chorale with_id(std::string id) const;

  friend bool operator==(const Chorale&, const Chorale&) = default;

 private:
  std::string id_;
  std::array<Voice, 4> voices_;
  Key key_;
  Rational total_quarters_;
};

/// Checks ordering/overlap/duration invariants of one voice; throws InvalidChoraleError.
void validate_voice(const Voice& voice);

int letter_index(Letter letter) noexcept;
int letter_pitch_class(Letter letter) noexcept;
char letter_char(Letter letter) noexcept;

int midi(const SpelledPitch& p) noexcept;

/// midi(b) - midi(a).
int directed_interval(const SpelledPitch& a, const SpelledPitch& b) noexcept;

ScaleDegree scale_degree(const SpelledPitch& p, const Key& key) noexcept;

/// Spelling of a MIDI number with the fewest accidentals; black keys are
/// spelled with sharps when `prefer_sharps`, flats otherwise.
SpelledPitch spell_midi(int midi_number, bool prefer_sharps);

}  // namespace chorale
