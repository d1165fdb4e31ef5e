#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chorale/score.hpp"

namespace chorale {

/// One <note> of a MusicXML part, in absolute quarter-note time. Rests have
/// no pitch.
struct RawNote {
  Rational onset;
  Rational duration;
  std::optional<SpelledPitch> pitch;
  std::string voice = "1";
  bool tie_start = false;
  bool tie_stop = false;
};

struct RawPart {
  std::string id;
  std::string name;
  std::vector<RawNote> notes;
};

/// Parts as written, before tie merging and SATB assignment.
struct RawScore {
  std::vector<RawPart> parts;
  std::optional<int> key_signature_fifths;
};

/// Reads the supported score-partwise subset. Throws ParseError on malformed
/// XML and UnsupportedFeatureError on grace notes, cue notes, chords,
/// unpitched notes, tuplets other than 3:2, score-timewise, or any element
/// outside the subset that is not purely presentational.
RawScore parse_musicxml_raw(std::string_view document);

/// Merges ties, drops rests, maps streams onto SATB and rebases onsets so
/// the first sounding event starts at 0. Throws VoiceCountError unless
/// exactly four pitched streams remain (four parts, or two parts with two
/// voices each).
std::vector<Voice> assemble_voices(const RawScore& raw);

/// Full MusicXML ingestion; the key is always re-detected, with the written
/// key signature used only to spell the tonic.
Chorale parse_musicxml(std::string_view document, std::string id);

/// Canonical JSON ingestion. A present "key" is taken as given; an absent one
/// is detected. Schema violations raise ParseError carrying a JSON path.
Chorale parse_canonical_json(std::string_view document);

/// Sorted keys, two-space indent, LF endings, rationals as "n" or "n/d".
std::string write_canonical_json(const Chorale& chorale);

/// Krumhansl-Schmuckler key finding on the duration-weighted pitch-class
/// histogram. Ties prefer major, then the lower tonic pitch class. The tonic
/// is spelled closest to `key_signature_fifths` when given, else with the
/// fewest accidentals.
Key detect_key(std::span<const Voice> voices, std::optional<int> key_signature_fifths = std::nullopt);
Key detect_key(const Chorale& chorale, std::optional<int> key_signature_fifths = std::nullopt);

/// Dispatches on extension (.json, .xml, .musicxml); the id of a MusicXML
/// file is its stem.
Chorale load_chorale_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace chorale
