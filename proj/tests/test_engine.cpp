#include <doctest.h>

#include <algorithm>
#include <vector>

#include "vfa/agents.hpp"
#include "vfa/engine.hpp"
#include "vfa/errors.hpp"
#include "vfa/random.hpp"

using namespace vfa;

namespace {

// Brute force: try every 1/11 assignment of the Aces.
HandValue brute_force_value(const std::vector<Rank>& cards) {
  std::vector<int> fixed;
  int aces = 0;
  for (Rank r : cards) {
    if (r == Rank::Ace) {
      ++aces;
    } else {
      fixed.push_back(point_value(r));
    }
  }
  int base = 0;
  for (int v : fixed) base += v;
  bool found_legal = false;
  HandValue best{0, false};
  HandValue lowest{1 << 20, false};
  for (int mask = 0; mask < (1 << aces); ++mask) {
    int total = base;
    int elevens = 0;
    for (int a = 0; a < aces; ++a) {
      const bool eleven = (mask >> a) & 1;
      total += eleven ? 11 : 1;
      elevens += eleven;
    }
    if (total <= 21 && (!found_legal || total > best.total)) {
      best = {total, elevens > 0};
      found_legal = true;
    }
    if (total < lowest.total) lowest = {total, elevens > 0};
  }
  return found_legal ? best : lowest;
}

}  // namespace

TEST_CASE("hand_value examples") {
  CHECK(hand_value(std::vector{Rank::Ace, Rank::King}) == HandValue{21, true});
  CHECK(hand_value(std::vector{Rank::Ace, Rank::Ace}) == HandValue{12, true});
  CHECK(hand_value(std::vector{Rank::Ten, Rank::Nine, Rank::Five}) == HandValue{24, false});
  CHECK(hand_value(std::vector{Rank::Ace, Rank::Six, Rank::Ten}) == HandValue{17, false});
  CHECK_THROWS_AS(hand_value(std::vector<Rank>{}), UsageError);
}

TEST_CASE("hand_value matches brute-force Ace assignment on every hand up to 4 cards") {
  std::vector<Rank> hand;
  std::size_t checked = 0;
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (!hand.empty()) {
      CHECK(hand_value(hand) == brute_force_value(hand));
      ++checked;
    }
    if (depth == 4) return;
    for (Rank r : kAllRanks) {
      hand.push_back(r);
      self(self, depth + 1);
      hand.pop_back();
    }
  };
  recurse(recurse, 0);
  CHECK(checked == 13 + 169 + 2197 + 28561);
}

TEST_CASE("hand_value matches brute force on random hands of 5 and 6 cards") {
  Rng rng(2024);
  for (int i = 0; i < 20000; ++i) {
    std::vector<Rank> hand(5 + rng.uniform_index(2));
    // Bias toward Aces so multi-Ace hands are common.
    for (auto& r : hand) r = rng.uniform_index(3) == 0 ? Rank::Ace : rank_from_index(rng.uniform_index(13));
    REQUIRE(hand_value(hand) == brute_force_value(hand));
  }
}

TEST_CASE("dealer rules") {
  CHECK(dealer_should_hit(std::vector{Rank::Ten, Rank::Six}));
  CHECK(dealer_should_hit(std::vector{Rank::Ace, Rank::Six}));
  CHECK_FALSE(dealer_should_hit(std::vector{Rank::Ten, Rank::Seven}));
  CHECK_FALSE(dealer_should_hit(std::vector{Rank::Ace, Rank::Seven}));  // soft 18
  CHECK_FALSE(dealer_should_hit(std::vector{Rank::Ace, Rank::Six, Rank::Ten}));  // hard 17
  CHECK(dealer_should_hit(std::vector{Rank::Ace, Rank::Ace, Rank::Five}));  // soft 17
}

TEST_CASE("player strategy examples") {
  CHECK(player_should_hit(16, Rank::Ten));
  CHECK_FALSE(player_should_hit(12, Rank::Four));
  CHECK(player_should_hit(11, Rank::Five));
  CHECK_FALSE(player_should_hit(17, Rank::King));
  CHECK(player_should_hit(16, Rank::Ace));  // Ace upcard is a strong card
  CHECK_FALSE(player_should_hit(17, Rank::Ace));
  CHECK(upcard_value(Rank::Ace) == 11);
  CHECK(upcard_value(Rank::Queen) == 10);
}

TEST_CASE("resolve_outcome branches") {
  CHECK(resolve_outcome(18, 23, false, true) == Outcome::PlayerWin);
  CHECK(resolve_outcome(20, 20, false, false) == Outcome::Tie);
  CHECK(resolve_outcome(24, 17, true, false) == Outcome::DealerWin);
  CHECK(resolve_outcome(19, 18, false, false) == Outcome::PlayerWin);
  CHECK(resolve_outcome(17, 21, false, false) == Outcome::DealerWin);
  CHECK_THROWS_AS(resolve_outcome(24, 23, true, true), UsageError);
  CHECK_THROWS_AS(resolve_outcome(20, 18, true, false), UsageError);
}

TEST_CASE("play_hand: player stands on 19 against a 5, dealer soft 16 draws to 18") {
  // Deal order: player, dealer, player, dealer, then hits.
  ScriptedSource source{std::vector<Rank>{Rank::Ten, Rank::Five, Rank::Nine, Rank::Ace, Rank::Two}};
  const auto rec = play_hand(source, 3);
  CHECK(rec.trial_index == 3);
  CHECK(rec.player_cards == std::vector{Rank::Ten, Rank::Nine});
  CHECK(rec.dealer_cards == std::vector{Rank::Five, Rank::Ace, Rank::Two});
  CHECK(rec.player_final == 19);
  CHECK(rec.dealer_final == 18);
  CHECK(rec.outcome == Outcome::PlayerWin);
  CHECK(rec.draws.size() == 5);
  CHECK(rec.draws[1] == Draw{Actor::Dealer, Rank::Five});
  CHECK(source.consumed() == 5);
}

TEST_CASE("play_hand: player bust ends the hand before the dealer draws") {
  ScriptedSource source{std::vector<Rank>{Rank::Ten, Rank::Ten, Rank::Six, Rank::Two, Rank::King}};
  const auto rec = play_hand(source, 0);
  CHECK(rec.player_final == 26);
  CHECK(rec.dealer_cards.size() == 2);
  CHECK(rec.dealer_final == 12);
  CHECK(rec.outcome == Outcome::DealerWin);
}

TEST_CASE("play_hand surfaces draw failures") {
  ScriptedSource source{std::vector<Rank>{Rank::Ten, Rank::Ten}};
  CHECK_THROWS_AS(play_hand(source, 0), DrawFailure);
}

TEST_CASE("play_hand passes the requesting actor and phase to the source") {
  struct Recorder final : DrawSource {
    std::vector<GameState> seen;
    Rank draw(const GameState& s) override {
      seen.push_back(s);
      return Rank::Ten;
    }
    void reset() override {}
    std::string agent_id() const override { return "recorder"; }
  } rec;
  const auto hand = play_hand(rec, 0);
  CHECK(hand.outcome == Outcome::Tie);
  REQUIRE(rec.seen.size() == 4);
  CHECK(rec.seen[0].next_draw == Actor::Player);
  CHECK(rec.seen[1].next_draw == Actor::Dealer);
  CHECK(rec.seen[3].phase == Phase::Deal);
  CHECK(rec.seen[3].player.size() == 2);
  CHECK(rec.seen[3].dealer.size() == 1);
}

TEST_CASE("property: determinism, bust closure and replay over random decks") {
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    DeckControlSource a(seed), b(seed);
    const auto ra = play_hand(a, static_cast<std::int64_t>(seed));
    const auto rb = play_hand(b, static_cast<std::int64_t>(seed));
    REQUIRE(ra == rb);
    REQUIRE(replay_hand(ra) == ra);
    REQUIRE(ra.draws.size() == ra.player_cards.size() + ra.dealer_cards.size());
    REQUIRE(hand_value(ra.player_cards).total == ra.player_final);
    REQUIRE(hand_value(ra.dealer_cards).total == ra.dealer_final);
    if (ra.player_busted()) {
      REQUIRE(ra.dealer_cards.size() == 2);
    }
    // No card after a bust: every prefix before the last card is not bust.
    const std::vector<Rank> p_prefix(ra.player_cards.begin(), ra.player_cards.end() - 1);
    REQUIRE_FALSE(hand_value(p_prefix).bust());
    const std::vector<Rank> d_prefix(ra.dealer_cards.begin(), ra.dealer_cards.end() - 1);
    REQUIRE_FALSE(hand_value(d_prefix).bust());
    REQUIRE(ra.player_final >= 4);
    REQUIRE(ra.player_final <= 26);
    REQUIRE(ra.dealer_final >= 4);
    REQUIRE(ra.dealer_final <= 26);
  }
}

TEST_CASE("replay rejects a draw log with the wrong actor order") {
  HandRecord rec;
  {
    ScriptedSource s{std::vector<Rank>{Rank::Ten, Rank::Nine, Rank::Eight, Rank::Eight}};
    rec = play_hand(s, 0);
  }
  std::swap(rec.draws[0].actor, rec.draws[1].actor);
  CHECK_THROWS_AS(replay_hand(rec), DrawFailure);
}
