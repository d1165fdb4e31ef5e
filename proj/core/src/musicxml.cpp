#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "chorale/errors.hpp"
#include "chorale/ingest.hpp"

namespace chorale {

namespace {

namespace pt = boost::property_tree;

// Measure and note children that carry no pitch or timing information.
const std::set<std::string, std::less<>> kIgnoredMeasureChildren = {
    "<xmlattr>", "<xmlcomment>", "print", "barline", "direction", "sound", "harmony",
    "figured-bass", "bookmark", "grouping", "link", "listening"};
const std::set<std::string, std::less<>> kIgnoredNoteChildren = {
    "<xmlattr>", "<xmlcomment>", "type", "dot", "stem", "beam", "accidental", "notations", "lyric", "staff",
    "notehead", "notehead-text", "instrument", "play", "listen", "footnote", "level"};

std::string trimmed(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string text_of(const pt::ptree& node) { return trimmed(node.get_value<std::string>()); }

long long parse_integer(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(std::string("malformed <") + what + "> '" + text + "'");
  }
}

// Reads <duration> as a positive integer count of divisions.
long long required_duration(const pt::ptree& node, const char* context) {
  auto d = node.get_child_optional("duration");
  if (!d) throw ParseError(std::string("<") + context + "> without <duration>");
  long long v = parse_integer(text_of(*d), "duration");
  if (v < 0) throw ParseError(std::string("negative duration in <") + context + ">");
  return v;
}

SpelledPitch read_pitch(const pt::ptree& pitch) {
  auto step = pitch.get_optional<std::string>("step");
  auto octave = pitch.get_optional<std::string>("octave");
  if (!step || !octave) throw ParseError("<pitch> requires <step> and <octave>");
  std::string s = trimmed(*step);
  static const std::string kLetters = "CDEFGAB";
  if (s.size() != 1 || kLetters.find(s[0]) == std::string::npos) throw ParseError("bad <step> '" + s + "'");
  int alter = 0;
  if (auto a = pitch.get_optional<std::string>("alter")) {
    std::string text = trimmed(*a);
    double value = 0;
    try {
      value = std::stod(text);
    } catch (const std::logic_error&) {
      throw ParseError("malformed <alter> '" + text + "'");
    }
    if (value != std::floor(value)) throw UnsupportedFeatureError("alter " + text + " (microtone)");
    alter = static_cast<int>(value);
    if (alter < -2 || alter > 2) throw UnsupportedFeatureError("alter " + text);
  }
  auto letter = static_cast<Letter>(kLetters.find(s[0]));
  return SpelledPitch{letter, alter, static_cast<int>(parse_integer(trimmed(*octave), "octave"))};
}

void check_time_modification(const pt::ptree& tm) {
  auto actual = parse_integer(trimmed(tm.get<std::string>("actual-notes", "0")), "actual-notes");
  auto normal = parse_integer(trimmed(tm.get<std::string>("normal-notes", "0")), "normal-notes");
  if (!(actual == 3 && normal == 2)) {
    throw UnsupportedFeatureError("time-modification " + std::to_string(actual) + ":" + std::to_string(normal));
  }
}

struct PartCursor {
  Rational time;
  std::optional<long long> divisions;

  Rational quarters(long long divs) const {
    if (!divisions) throw ParseError("timed element before <divisions>");
    return Rational(divs, *divisions);
  }
};

RawPart read_part(const pt::ptree& part, RawPart meta, std::optional<int>& key_fifths) {
  PartCursor cursor;
  for (const auto& [mname, measure] : part) {
    if (mname == "<xmlattr>" || mname == "<xmlcomment>") continue;
    if (mname != "measure") throw UnsupportedFeatureError(mname);
    for (const auto& [name, child] : measure) {
      if (name == "attributes") {
        if (auto d = child.get_optional<std::string>("divisions")) {
          long long divs = parse_integer(trimmed(*d), "divisions");
          if (divs <= 0) throw ParseError("<divisions> must be positive");
          cursor.divisions = divs;
        }
        if (auto f = child.get_optional<std::string>("key.fifths"); f && !key_fifths) {
          auto v = parse_integer(trimmed(*f), "fifths");
          if (v < -7 || v > 7) throw ParseError("<fifths> outside [-7, 7]");
          key_fifths = static_cast<int>(v);
        }
      } else if (name == "note") {
        RawNote note;
        long long divs = 0;
        bool has_pitch = false;
        bool is_rest = false;
        for (const auto& [nname, nchild] : child) {
          if (nname == "grace" || nname == "cue" || nname == "chord" || nname == "unpitched") {
            throw UnsupportedFeatureError(nname);
          } else if (nname == "pitch") {
            note.pitch = read_pitch(nchild);
            has_pitch = true;
          } else if (nname == "rest") {
            is_rest = true;
          } else if (nname == "duration") {
            divs = parse_integer(text_of(nchild), "duration");
          } else if (nname == "voice") {
            note.voice = text_of(nchild);
          } else if (nname == "tie") {
            auto type = nchild.get<std::string>("<xmlattr>.type", "");
            if (type == "start") note.tie_start = true;
            if (type == "stop") note.tie_stop = true;
          } else if (nname == "time-modification") {
            check_time_modification(nchild);
          } else if (!kIgnoredNoteChildren.contains(nname)) {
            throw UnsupportedFeatureError(nname);
          }
        }
        if (has_pitch == is_rest) throw ParseError("<note> must hold exactly one of <pitch> or <rest>");
        if (divs <= 0) throw ParseError("<note> requires a positive <duration>");
        note.onset = cursor.time;
        note.duration = cursor.quarters(divs);
        cursor.time += note.duration;
        meta.notes.push_back(std::move(note));
      } else if (name == "backup") {
        cursor.time -= cursor.quarters(required_duration(child, "backup"));
        if (cursor.time < Rational(0)) throw ParseError("<backup> before the start of the part");
      } else if (name == "forward") {
        cursor.time += cursor.quarters(required_duration(child, "forward"));
      } else if (!kIgnoredMeasureChildren.contains(name)) {
        throw UnsupportedFeatureError(name);
      }
    }
  }
  return meta;
}

// Numeric voice ids sort numerically, others lexically.
bool voice_less(const std::string& a, const std::string& b) {
  auto numeric = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (numeric(a) && numeric(b) && a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct Stream {
  std::string part_name;
  std::vector<NoteEvent> events;
};

}  // namespace

RawScore parse_musicxml_raw(std::string_view document) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(document)};
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(std::string("malformed XML: ") + e.what());
  }
  if (tree.get_child_optional("score-timewise")) throw UnsupportedFeatureError("score-timewise");
  auto root = tree.get_child_optional("score-partwise");
  if (!root) throw ParseError("document root is not <score-partwise>");

  std::map<std::string, std::string> part_names;
  if (auto list = root->get_child_optional("part-list")) {
    for (const auto& [name, sp] : *list) {
      if (name != "score-part") continue;
      part_names[sp.get<std::string>("<xmlattr>.id", "")] = trimmed(sp.get<std::string>("part-name", ""));
    }
  }

  RawScore raw;
  for (const auto& [name, part] : *root) {
    if (name != "part") continue;
    RawPart meta;
    meta.id = part.get<std::string>("<xmlattr>.id", "");
    if (auto it = part_names.find(meta.id); it != part_names.end()) meta.name = it->second;
    raw.parts.push_back(read_part(part, std::move(meta), raw.key_signature_fifths));
  }
  return raw;
}

std::vector<Voice> assemble_voices(const RawScore& raw) {
  std::vector<Stream> streams;
  for (const auto& part : raw.parts) {
    std::map<std::string, std::vector<const RawNote*>, decltype(&voice_less)> by_voice(&voice_less);
    for (const auto& n : part.notes) by_voice[n.voice].push_back(&n);
    for (auto& [voice_id, notes] : by_voice) {
      std::stable_sort(notes.begin(), notes.end(), [](const RawNote* a, const RawNote* b) { return a->onset < b->onset; });
      Stream stream{part.name, {}};
      bool pending_tie = false;
      for (const RawNote* n : notes) {
        if (!n->pitch) {
          pending_tie = false;
          continue;
        }
        auto& events = stream.events;
        bool continues = n->tie_stop && pending_tie && !events.empty() && events.back().end() == n->onset &&
                         midi(events.back().pitch) == midi(*n->pitch);
        if (continues) {
          events.back().duration += n->duration;
        } else {
          events.push_back(NoteEvent{n->onset, n->duration, *n->pitch});
        }
        pending_tie = n->tie_start;
      }
      if (!stream.events.empty()) streams.push_back(std::move(stream));
    }
  }
  if (streams.size() != 4) {
    throw VoiceCountError("found " + std::to_string(streams.size()) + " pitched voices, expected 4");
  }

  // Name-based SATB mapping applies only when all four names are distinct labels.
  std::array<VoiceLabel, 4> labels = kVoiceLabels;
  std::set<VoiceLabel> named;
  std::array<std::optional<VoiceLabel>, 4> by_name;
  for (std::size_t i = 0; i < 4; ++i) {
    by_name[i] = voice_label_from_string(streams[i].part_name);
    if (by_name[i]) named.insert(*by_name[i]);
  }
  if (named.size() == 4) {
    for (std::size_t i = 0; i < 4; ++i) labels[i] = *by_name[i];
  }

  Rational start;
  bool first = true;
  for (const auto& s : streams) {
    if (first || s.events.front().onset < start) start = s.events.front().onset;
    first = false;
  }

  std::vector<Voice> voices;
  for (std::size_t i = 0; i < 4; ++i) {
    Voice v{labels[i], std::move(streams[i].events)};
    for (auto& e : v.events) e.onset -= start;
    voices.push_back(std::move(v));
  }
  std::sort(voices.begin(), voices.end(), [](const Voice& a, const Voice& b) { return a.label < b.label; });
  return voices;
}

Chorale parse_musicxml(std::string_view document, std::string id) {
  RawScore raw = parse_musicxml_raw(document);
  std::vector<Voice> voices = assemble_voices(raw);
  for (const auto& v : voices) validate_voice(v);
  Key key = detect_key(voices, raw.key_signature_fifths);
  return Chorale(std::move(id), std::move(voices), key);
}

}  // namespace chorale
