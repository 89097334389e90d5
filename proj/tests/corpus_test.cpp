#include "doctest.h"

#include "segeval/corpus.hpp"
#include "test_util.hpp"

using namespace segeval;
using segtest::TempDir;
using segtest::write_file;

TEST_SUITE_BEGIN("corpus");

TEST_CASE("ingest filters whitespace-only messages and reindexes") {
  TempDir dir("corpus");
  write_file(dir.file("c.jsonl"),
             R"({"id":"d1","messages":[{"speaker":"A","text":"hello"},{"speaker":"B","text":"   "},{"speaker":"A","text":"bye"}]})"
             "\n");
  auto dialogues = ingest(dir.file("c.jsonl"));
  REQUIRE(dialogues.size() == 1);
  CHECK(dialogues[0].num_messages() == 2);
  CHECK(dialogues[0].messages[0].text == "hello");
  CHECK(dialogues[0].messages[1].text == "bye");
}

TEST_CASE("ingest of an empty file yields an empty list") {
  TempDir dir("corpus");
  write_file(dir.file("empty.jsonl"), "");
  CHECK(ingest(dir.file("empty.jsonl")).empty());
}

TEST_CASE("ingest names the line on malformed records") {
  TempDir dir("corpus");
  write_file(dir.file("bad.jsonl"),
             R"({"id":"ok","messages":[{"speaker":"A","text":"x"}]})"
             "\n"
             R"({"id":"broken"})"
             "\n");
  CHECK_THROWS_WITH_AS(ingest(dir.file("bad.jsonl")),
                       doctest::Contains("line 2"), InputError);
}

TEST_CASE("ingest rejects dialogues that filter to zero messages") {
  TempDir dir("corpus");
  write_file(dir.file("z.jsonl"), R"({"id":"ghost","messages":[{"speaker":"A","text":" "}]})"
                                  "\n");
  CHECK_THROWS_WITH_AS(ingest(dir.file("z.jsonl")), doctest::Contains("ghost"), InputError);
}

TEST_CASE("ingest skips comment and blank lines") {
  TempDir dir("corpus");
  write_file(dir.file("c.jsonl"),
             "# header\n\n"
             R"({"id":"d1","messages":[{"speaker":"A","text":"x"}]})"
             "\n");
  CHECK(ingest(dir.file("c.jsonl")).size() == 1);
}

TEST_CASE("group_speaker_turns merges consecutive same-speaker messages") {
  Dialogue d;
  d.id = "d";
  d.messages = {{"A", "one", {}, {}, {}}, {"A", "two", {}, {}, {}}, {"B", "three", {}, {}, {}}};
  Dialogue merged = group_speaker_turns(d);
  REQUIRE(merged.num_messages() == 2);
  CHECK(merged.messages[0].text == "one two");
  CHECK(merged.messages[0].speaker == "A");
  CHECK(merged.messages[1].speaker == "B");
}

TEST_CASE("group_speaker_turns leaves alternating speakers unchanged") {
  Dialogue d;
  d.id = "d";
  d.messages = {{"A", "1", {}, {}, {}}, {"B", "2", {}, {}, {}}, {"A", "3", {}, {}, {}}};
  CHECK(group_speaker_turns(d).num_messages() == 3);
}

TEST_CASE("group_speaker_turns rejects conflicting supervision inside a turn") {
  Dialogue d;
  d.id = "d";
  d.messages = {{"A", "1", {}, 1, {}}, {"A", "2", {}, 2, {}}};
  CHECK_THROWS_AS(group_speaker_turns(d), InputError);

  Dialogue lbl;
  lbl.id = "d2";
  lbl.messages = {{"A", "1", std::string("x"), {}, {}}, {"A", "2", std::string("y"), {}, {}}};
  CHECK_THROWS_AS(group_speaker_turns(lbl), InputError);

  // A boundary marker on a non-leading merged message straddles a turn.
  Dialogue marker;
  marker.id = "d3";
  marker.messages = {{"A", "1", {}, {}, false}, {"A", "2", {}, {}, true}};
  CHECK_THROWS_AS(group_speaker_turns(marker), InputError);
}

TEST_CASE("derive_gold from segment id changes") {
  Dialogue d;
  d.id = "d";
  for (long sid : {1, 1, 2, 2, 3}) d.messages.push_back({"A", "m", {}, sid, {}});
  Dialogue out = derive_gold(d, {Unit::Utterance, Derivation::SegmentIdChange});
  CHECK(out.gold.indices == std::vector<int>{2, 4});
}

TEST_CASE("derive_gold from boundary markers ignores the first message") {
  Dialogue d;
  d.id = "d";
  for (bool b : {true, false, false, true}) d.messages.push_back({"A", "m", {}, {}, b});
  Dialogue out = derive_gold(d, {Unit::Utterance, Derivation::BoundaryMarker});
  CHECK(out.gold.indices == std::vector<int>{3});
}

TEST_CASE("derive_gold with identical labels yields no boundaries") {
  Dialogue d;
  d.id = "d";
  for (int i = 0; i < 4; ++i) d.messages.push_back({"A", "m", std::string("same"), {}, {}});
  Dialogue out = derive_gold(d, {Unit::Utterance, Derivation::LabelChange});
  CHECK(out.gold.empty());
}

TEST_CASE("derive_gold names the message missing a required field") {
  Dialogue d;
  d.id = "d";
  d.messages = {{"A", "1", {}, 1, {}}, {"B", "2", {}, {}, {}}};
  CHECK_THROWS_WITH_AS(derive_gold(d, {Unit::Utterance, Derivation::SegmentIdChange}),
                       doctest::Contains("message 2"), InputError);
}

TEST_CASE("derive_gold with speaker-turn unit groups first") {
  Dialogue d;
  d.id = "d";
  d.messages = {{"A", "1", {}, 1, {}}, {"A", "2", {}, 1, {}}, {"B", "3", {}, 2, {}}};
  Dialogue out = derive_gold(d, {Unit::SpeakerTurn, Derivation::SegmentIdChange});
  CHECK(out.num_messages() == 2);
  CHECK(out.gold.indices == std::vector<int>{1});
}

TEST_CASE("segments_of splits the dialogue at boundaries") {
  CHECK(segments_of(5, BoundarySet{{2, 4}}) ==
        std::vector<Span>{{1, 2}, {3, 4}, {5, 5}});
  CHECK(segments_of(5, BoundarySet{}) == std::vector<Span>{{1, 5}});
  CHECK(segments_of(1, BoundarySet{}) == std::vector<Span>{{1, 1}});
}

TEST_CASE("segment lengths always sum to the message count") {
  SplitMix rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    int t = 1 + static_cast<int>(rng.next_below(14));
    auto b = segtest::random_boundaries(rng, t, 5);
    int total = 0;
    for (const auto& s : segments_of(t, b)) total += s.length();
    CHECK(total == t);
  }
}

TEST_CASE("derive_gold is idempotent and order-independent") {
  Dialogue d;
  d.id = "d";
  for (long sid : {7, 7, 8, 9, 9, 9, 10}) d.messages.push_back({"A", "m", {}, sid, {}});
  CanonRule rule{Unit::Utterance, Derivation::SegmentIdChange};
  Dialogue once = derive_gold(d, rule);
  Dialogue twice = derive_gold(once, rule);
  CHECK(once.gold == twice.gold);

  // Segment count equals the number of maximal equal-id runs.
  CHECK(segments_of(once, once.gold).size() == 4);
}

TEST_CASE("validated_boundaries rejects range and duplicate violations") {
  CHECK_THROWS_AS(validated_boundaries({0}, 5, "x"), InputError);
  CHECK_THROWS_AS(validated_boundaries({5}, 5, "x"), InputError);
  CHECK_THROWS_AS(validated_boundaries({2, 2}, 5, "x"), InputError);
  CHECK(validated_boundaries({4, 1}, 5, "x").indices == std::vector<int>{1, 4});
}

TEST_CASE("gold file round trip and attachment") {
  TempDir dir("corpus");
  Dialogue d = segtest::make_dialogue("d1", 5);
  d.gold = BoundarySet{{2, 4}};
  std::vector<Dialogue> dialogues{d};
  std::vector<std::string> headers{"config: {}"};
  write_gold_file(dir.file("gold.jsonl"), dialogues, headers);

  auto records = read_gold_file(dir.file("gold.jsonl"));
  REQUIRE(records.size() == 1);
  CHECK(records[0].gold.indices == std::vector<int>{2, 4});

  std::vector<Dialogue> fresh{segtest::make_dialogue("d1", 5)};
  attach_gold(fresh, records);
  CHECK(fresh[0].gold.indices == std::vector<int>{2, 4});

  std::vector<Dialogue> wrong{segtest::make_dialogue("d1", 7)};
  CHECK_THROWS_AS(attach_gold(wrong, records), InputError);
}

TEST_SUITE_END();
