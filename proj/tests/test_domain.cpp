#include <doctest.h>

#include "humanoid/domain.hpp"
#include "humanoid/text.hpp"

using namespace humanoid;

TEST_CASE("closeness bands") {
  CHECK(closeness_label(0) == ClosenessLabel::Distant);
  CHECK(closeness_label(4) == ClosenessLabel::Distant);
  CHECK(closeness_label(5) == ClosenessLabel::RatherClose);
  CHECK(closeness_label(9) == ClosenessLabel::RatherClose);
  CHECK(closeness_label(10) == ClosenessLabel::Close);
  CHECK(closeness_label(14) == ClosenessLabel::Close);
  CHECK(closeness_label(15) == ClosenessLabel::VeryClose);
  CHECK(closeness_label(30) == ClosenessLabel::VeryClose);
  CHECK_THROWS_AS(closeness_label(-1), DomainError);
  CHECK_THROWS_AS(closeness_label(31), DomainError);
  CHECK(to_string(ClosenessLabel::RatherClose) == "rather close");
}

TEST_CASE("closeness bands are monotone over the whole range") {
  for (int c = 1; c <= kClosenessMax; ++c) {
    CHECK(static_cast<int>(closeness_label(c - 1)) <= static_cast<int>(closeness_label(c)));
  }
}

TEST_CASE("emotion labels round-trip and reject unknown labels") {
  for (Emotion e : kAllEmotions) CHECK(parse_emotion(to_string(e)) == e);
  CHECK(parse_emotion("Surprise") == Emotion::Surprised);
  CHECK(parse_emotion(" HAPPY ") == Emotion::Happy);
  CHECK_THROWS_AS(parse_emotion("bored"), DomainError);
  CHECK_FALSE(try_parse_emotion("").has_value());
}

TEST_CASE("need names round-trip") {
  for (Need n : kAllNeeds) CHECK(parse_need(to_string(n)) == n);
  CHECK_THROWS_AS(parse_need("thirst"), DomainError);
}

TEST_CASE("default needs are mid level with full energy") {
  const BasicNeeds n;
  CHECK(n.fullness == 5);
  CHECK(n.fun == 5);
  CHECK(n.health == 5);
  CHECK(n.social == 5);
  CHECK(n.energy == 10);
}

TEST_CASE("need setters clamp and validate rejects out-of-range meters") {
  BasicNeeds n;
  n.set(Need::Fun, 14);
  CHECK(n.fun == 10);
  n.set(Need::Fun, -3);
  CHECK(n.fun == 0);
  n.health = 11;
  CHECK_THROWS_AS(n.validate(), DomainError);
}

TEST_CASE("closeness setter clamps to [0, 30]") {
  AgentState a;
  a.profile.name = "A";
  CHECK(a.closeness_to("B") == kDefaultCloseness);
  a.set_closeness("B", 40);
  CHECK(a.closeness_to("B") == 30);
  a.set_closeness("B", -2);
  CHECK(a.closeness_to("B") == 0);
}

TEST_CASE("time of day parsing and formatting") {
  CHECK(TimeOfDay::parse("06:15").minutes() == 375);
  CHECK(TimeOfDay::parse("24:00").minutes() == 1440);
  CHECK(TimeOfDay::hm(9, 5).str() == "09:05");
  CHECK_FALSE(TimeOfDay::try_parse("24:15").has_value());
  CHECK_FALSE(TimeOfDay::try_parse("7:60").has_value());
  CHECK_FALSE(TimeOfDay::try_parse("noon").has_value());
}

TEST_CASE("tiles_exactly") {
  const auto t = [](int h, int m) { return TimeOfDay::hm(h, m); };
  std::vector<PlanSlot> slots = {{t(6, 0), t(6, 15), "a"}, {t(6, 15), t(6, 30), "b"}};
  CHECK(tiles_exactly(slots, t(6, 0), t(6, 30), 15));
  CHECK_FALSE(tiles_exactly(slots, t(6, 0), t(6, 45), 15));
  slots[1].start = t(6, 20);
  CHECK_FALSE(tiles_exactly(slots, t(6, 0), t(6, 30)));
}

TEST_CASE("conversation transcript is one speaker line per turn") {
  Conversation c;
  c.participants = {"A", "B"};
  c.turns = {{"A", "hi", std::nullopt}, {"B", "hello", std::nullopt}};
  CHECK(c.transcript() == "A: hi\nB: hello\n");
}

TEST_CASE("keyword matching") {
  const auto w = text::words("Eddy was frustrated, then went to the gym.");
  CHECK(text::contains_keyword(w, "frustrat*"));
  CHECK(text::contains_keyword(w, "the gym"));
  CHECK_FALSE(text::contains_keyword(w, "gymnastics"));
  CHECK(text::first_word("  \"Yes.\" ") == "yes");
}
