#include <doctest.h>

#include <filesystem>

#include "chorale/errors.hpp"
#include "chorale/ingest.hpp"
#include "fixtures.hpp"

using namespace chorale;

namespace {

std::string data(const std::string& rel) { return read_file(std::filesystem::path(CHORALE_TEST_DATA) / rel); }

}  // namespace

TEST_CASE("minimal document assembles to four whole notes") {
  auto raw = parse_musicxml_raw(data("musicxml/minimal.musicxml"));
  REQUIRE(raw.parts.size() == 4);
  CHECK(raw.key_signature_fifths == 0);
  auto voices = assemble_voices(raw);
  REQUIRE(voices.size() == 4);
  const char* expected[] = {"C5", "G4", "E4", "C4"};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(voices[i].label == kVoiceLabels[i]);
    REQUIRE(voices[i].events.size() == 1);
    CHECK(voices[i].events[0].duration == Rational(4));
    CHECK(voices[i].events[0].pitch.str() == expected[i]);
  }
  // Four notes is below the chorale minimum.
  CHECK_THROWS_AS(parse_musicxml(data("musicxml/minimal.musicxml"), "minimal"), InvalidChoraleError);
}

TEST_CASE("tied half and quarter merge into one event") {
  Chorale c = parse_musicxml(data("musicxml/tie.musicxml"), "tie");
  const auto& s = c.voice(VoiceLabel::soprano).events;
  REQUIRE(s.size() == 6);
  CHECK(s[0].pitch.str() == "C5");
  CHECK(s[0].duration == Rational(3));
  CHECK(s[1].onset == Rational(3));
  CHECK(c.voice(VoiceLabel::alto).events.size() == 8);
  CHECK(c.key() == Key{});
}

TEST_CASE("part count and unsupported elements") {
  CHECK_THROWS_AS(parse_musicxml(data("musicxml/five_parts.musicxml"), "x"), VoiceCountError);
  try {
    parse_musicxml(data("musicxml/grace.musicxml"), "x");
    FAIL("grace note accepted");
  } catch (const UnsupportedFeatureError& e) {
    CHECK(e.element() == "grace");
  }
  try {
    parse_musicxml(data("musicxml/tuplet_5_4.musicxml"), "x");
    FAIL("5:4 tuplet accepted");
  } catch (const UnsupportedFeatureError& e) {
    CHECK(e.element().find("time-modification") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_musicxml(data("musicxml/chord.musicxml"), "x"), UnsupportedFeatureError);
  CHECK_THROWS_AS(parse_musicxml("<score-partwise><part", "x"), ParseError);
  CHECK_THROWS_AS(parse_musicxml("<score-timewise/>", "x"), UnsupportedFeatureError);
}

TEST_CASE("triplets keep exact thirds") {
  Chorale c = parse_musicxml(data("musicxml/triplet.musicxml"), "triplet");
  const auto& a = c.voice(VoiceLabel::alto).events;
  REQUIRE(a.size() >= 4);
  CHECK(a[0].duration == Rational(1, 3));
  CHECK(a[1].onset == Rational(1, 3));
  CHECK(a[2].onset == Rational(2, 3));
  CHECK(a[3].onset == Rational(1));
}

TEST_CASE("two staves with two voices each") {
  Chorale c = parse_musicxml(data("musicxml/two_staves.musicxml"), "staves");
  CHECK(c.voice(VoiceLabel::soprano).events.front().pitch.str() == "E5");
  CHECK(c.voice(VoiceLabel::alto).events.front().pitch.str() == "C5");
  CHECK(c.voice(VoiceLabel::tenor).events.front().pitch.str() == "G4");
  CHECK(c.voice(VoiceLabel::bass).events.front().pitch.str() == "C3");
  for (auto label : kVoiceLabels) CHECK(c.voice(label).events.size() == 8);
  CHECK(c.voice(VoiceLabel::alto).events[4].onset == Rational(4));
}

TEST_CASE("canonical JSON schema example") {
  const std::string doc = R"({"id":"x","key":{"tonic":"C","mode":"major"},"voices":{
    "soprano":[{"on":"0","dur":"1","pitch":"C5"},{"on":"1","dur":"1","pitch":"D5"}],
    "alto":[{"on":"0","dur":"1","pitch":"G4"},{"on":"1","dur":"1","pitch":"G4"}],
    "tenor":[{"on":"0","dur":"1","pitch":"E4"},{"on":"1","dur":"1","pitch":"F4"}],
    "bass":[{"on":"0","dur":"1","pitch":"C3"},{"on":"1","dur":"1","pitch":"B2"}]}})";
  Chorale c = parse_canonical_json(doc);
  CHECK(c.id() == "x");
  CHECK(c.note_count() == 8);
  CHECK(c.key() == Key{});
}

TEST_CASE("canonical JSON errors carry a path") {
  auto with_event = [](const std::string& ev) {
    return R"({"id":"x","voices":{"soprano":[)" + ev +
           R"(,{"on":"1","dur":"1","pitch":"D5"}],
      "alto":[{"on":"0","dur":"1","pitch":"G4"},{"on":"1","dur":"1","pitch":"G4"}],
      "tenor":[{"on":"0","dur":"1","pitch":"E4"},{"on":"1","dur":"1","pitch":"F4"}],
      "bass":[{"on":"0","dur":"1","pitch":"C3"},{"on":"1","dur":"1","pitch":"B2"}]}})";
  };
  auto message = [](const std::string& doc) -> std::string {
    try {
      parse_canonical_json(doc);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(with_event(R"({"on":"0","dur":"0","pitch":"C5"})")).find("$.voices.soprano[0].dur") == 0);
  CHECK(message(with_event(R"({"on":"0","dur":"0.5","pitch":"C5"})")).find("$.voices.soprano[0].dur") == 0);
  CHECK(message(with_event(R"({"on":"0","dur":"2","pitch":"C5"})")).find("$.voices.soprano[1].on") == 0);
  CHECK(message(with_event(R"({"on":"0","dur":"1","pitch":"H5"})")).find("$.voices.soprano[0].pitch") == 0);
  CHECK(message(with_event(R"({"on":"0","dur":"1","pitch":"C5","x":1})")).find("$.voices.soprano[0].x") == 0);
  CHECK(message(with_event(R"({"on":0,"dur":"1","pitch":"C5"})")).find("$.voices.soprano[0].on") == 0);
  CHECK(message("[1,2]").find("$") == 0);
  CHECK(message("{").find("$") == 0);
  CHECK_FALSE(message(with_event(R"({"on":"0","dur":"1","pitch":"C5"})")).size());
}

TEST_CASE("canonical JSON writing") {
  Chorale c = chorale::testing::make_chorale("C5:1/3 D5:2/3 E5", "G4 G4", "E4 F4", "C3 B2");
  const std::string text = write_canonical_json(c);
  CHECK(text.find("\"1/3\"") != std::string::npos);
  CHECK(text.find("0.33") == std::string::npos);
  CHECK(text.back() == '\n');
  CHECK(text.find('\r') == std::string::npos);
  // keys come out sorted
  CHECK(text.find("\"id\"") < text.find("\"key\""));
  CHECK(text.find("\"key\"") < text.find("\"voices\""));
  CHECK(text.find("\"alto\"") < text.find("\"bass\""));

  Chorale back = parse_canonical_json(text);
  CHECK(back == c);
  CHECK(write_canonical_json(back) == text);
  CHECK(write_canonical_json(chorale::testing::make_chorale("C5:1/3 D5:2/3 E5", "G4 G4", "E4 F4", "C3 B2")) == text);
}

TEST_CASE("MusicXML and canonical JSON agree") {
  Chorale c = parse_musicxml(data("musicxml/tie.musicxml"), "tie");
  CHECK(parse_canonical_json(write_canonical_json(c)) == c);
}

TEST_CASE("load_chorale_file dispatches on extension") {
  auto root = std::filesystem::path(CHORALE_TEST_DATA);
  CHECK(load_chorale_file(root / "musicxml/tie.musicxml").id() == "tie");
  Chorale j = load_chorale_file(root / "json/cadence.json");
  CHECK(j.id() == "cadence");
  CHECK(j.key() == Key{});
  CHECK_THROWS_AS(load_chorale_file(root / "missing.json"), Error);
  CHECK_THROWS_AS(load_chorale_file(root / "musicxml/none.mxl"), ParseError);
}

TEST_CASE("the bundled Bach corpus ingests") {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(CHORALE_TEST_DATA) / "bach")) {
    CAPTURE(entry.path().string());
    Chorale c = load_chorale_file(entry.path());
    CHECK(c.note_count() >= 8);
    CHECK(parse_canonical_json(write_canonical_json(c)) == c);
    ++n;
  }
  CHECK(n == 40);
}
