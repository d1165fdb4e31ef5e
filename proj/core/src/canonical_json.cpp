#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chorale/errors.hpp"
#include "chorale/ingest.hpp"

namespace chorale {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const std::string& string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get_ref<const std::string&>();
}

void expect_only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [k, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) fail(path + "." + k, "unexpected key");
  }
}

const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

Voice read_voice(const json& arr, VoiceLabel label, const std::string& path) {
  if (!arr.is_array()) fail(path, "expected an array");
  Voice voice{label, {}};
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const json& ev = arr[i];
    if (!ev.is_object()) fail(at, "expected an object");
    expect_only_keys(ev, {"on", "dur", "pitch"}, at);
    NoteEvent e;
    try {
      e.onset = Rational::parse(string_at(member(ev, "on", at), at + ".on"));
    } catch (const ParseError& err) {
      fail(at + ".on", err.what());
    }
    try {
      e.duration = Rational::parse(string_at(member(ev, "dur", at), at + ".dur"));
    } catch (const ParseError& err) {
      fail(at + ".dur", err.what());
    }
    try {
      e.pitch = SpelledPitch::parse(string_at(member(ev, "pitch", at), at + ".pitch"));
    } catch (const ParseError& err) {
      fail(at + ".pitch", err.what());
    }
    if (e.duration <= Rational(0)) fail(at + ".dur", "duration must be positive");
    if (e.onset < Rational(0)) fail(at + ".on", "onset must be non-negative");
    if (!voice.events.empty() && e.onset < voice.events.back().end()) fail(at + ".on", "overlaps the previous event");
    voice.events.push_back(e);
  }
  return voice;
}

}  // namespace

Chorale parse_canonical_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("$: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected an object");
  expect_only_keys(doc, {"id", "key", "voices"}, "$");
  std::string id = string_at(member(doc, "id", "$"), "$.id");

  const json& voices_obj = member(doc, "voices", "$");
  if (!voices_obj.is_object()) fail("$.voices", "expected an object");
  expect_only_keys(voices_obj, {"soprano", "alto", "tenor", "bass"}, "$.voices");
  std::vector<Voice> voices;
  for (auto label : kVoiceLabels) {
    const std::string name(to_string(label));
    voices.push_back(read_voice(member(voices_obj, name.c_str(), "$.voices"), label, "$.voices." + name));
  }

  Key key;
  if (auto it = doc.find("key"); it != doc.end()) {
    if (!it->is_object()) fail("$.key", "expected an object");
    expect_only_keys(*it, {"tonic", "mode"}, "$.key");
    try {
      key = Key::parse(string_at(member(*it, "tonic", "$.key"), "$.key.tonic"),
                       string_at(member(*it, "mode", "$.key"), "$.key.mode"));
    } catch (const ParseError& err) {
      fail("$.key", err.what());
    }
  } else {
    key = detect_key(voices);
  }
  return Chorale(std::move(id), std::move(voices), key);
}

std::string write_canonical_json(const Chorale& chorale) {
  json doc = json::object();
  doc["id"] = chorale.id();
  doc["key"] = {{"tonic", chorale.key().tonic_str()},
                {"mode", chorale.key().mode == Mode::major ? "major" : "minor"}};
  json voices = json::object();
  for (const auto& v : chorale.voices()) {
    json arr = json::array();
    for (const auto& e : v.events) {
      arr.push_back({{"on", e.onset.str()}, {"dur", e.duration.str()}, {"pitch", e.pitch.str()}});
    }
    voices[std::string(to_string(v.label))] = std::move(arr);
  }
  doc["voices"] = std::move(voices);
  return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Chorale load_chorale_file(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".json") return parse_canonical_json(read_file(path));
  if (ext == ".xml" || ext == ".musicxml") return parse_musicxml(read_file(path), path.stem().string());
  if (ext == ".mxl") throw ParseError(path.string() + ": compressed MusicXML is not supported");
  throw ParseError(path.string() + ": unrecognized extension '" + ext + "'");
}

}  // namespace chorale
