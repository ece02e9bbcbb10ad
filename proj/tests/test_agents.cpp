#include <doctest.h>

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "vfa/agents.hpp"
#include "vfa/errors.hpp"

using namespace vfa;

namespace {

std::string read_asset(const std::string& name) {
  std::ifstream in(std::string(VFA_ASSET_DIR) + "/prompts/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("control deck: seeded determinism") {
  DeckControlSource a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.draw() == b.draw());
}

TEST_CASE("control deck: without replacement within a hand, refilled by reset") {
  DeckControlSource deck(1);
  for (int i = 0; i < 4; ++i) deck.remove(Rank::King);
  CHECK(deck.remaining(Rank::King) == 0);
  CHECK_THROWS_AS(deck.remove(Rank::King), UsageError);
  for (int i = 0; i < 48; ++i) CHECK(deck.draw() != Rank::King);
  CHECK(deck.remaining() == 0);
  CHECK_THROWS_AS(deck.draw(), Error);
  deck.reset();
  CHECK(deck.remaining() == 52);
  for (Rank r : kAllRanks) CHECK(deck.remaining(r) == 4);

  // Drawing the whole deck yields exactly four of each rank.
  std::array<int, kRankCount> counts{};
  for (int i = 0; i < 52; ++i) ++counts[rank_index(deck.draw())];
  for (int c : counts) CHECK(c == 4);
}

TEST_CASE("control deck: fresh-deck first draw is uniform over ranks") {
  std::array<int, kRankCount> counts{};
  const int n = 130000;
  for (int i = 0; i < n; ++i) {
    DeckControlSource deck(derive_seed(99, static_cast<std::uint64_t>(i)));
    ++counts[rank_index(deck.draw())];
  }
  for (int c : counts) CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 13.0) <= 0.005);
}

TEST_CASE("biased source") {
  SUBCASE("one-hot") {
    BiasedSource s(one_hot_weights(Rank::Ace), 5);
    for (int i = 0; i < 1000; ++i) CHECK(s.draw() == Rank::Ace);
  }
  SUBCASE("zero face-card mass never yields a face card") {
    BiasedSource s(no_face_card_weights(), 5);
    for (int i = 0; i < 20000; ++i) CHECK_FALSE(is_face(s.draw()));
  }
  SUBCASE("uniform weights stay within 3 sigma multinomial bounds") {
    BiasedSource s(uniform_weights(), 11);
    const int n = 10000;
    std::array<int, kRankCount> counts{};
    for (int i = 0; i < n; ++i) ++counts[rank_index(s.draw())];
    const double p = 1.0 / 13.0;
    const double sigma = std::sqrt(n * p * (1 - p));
    for (int c : counts) CHECK(std::abs(c - n * p) <= 3 * sigma);
  }
  SUBCASE("weights are normalized") {
    RankWeights w{};
    w[rank_index(Rank::Two)] = 3;
    w[rank_index(Rank::Three)] = 1;
    BiasedSource s(w, 0);
    CHECK(s.probabilities()[0] == doctest::Approx(0.75));
    CHECK(s.probabilities()[1] == doctest::Approx(0.25));
  }
  SUBCASE("invalid weights") {
    CHECK_THROWS_AS(BiasedSource(RankWeights{}, 0), ConfigError);
    RankWeights neg = uniform_weights();
    neg[3] = -0.1;
    CHECK_THROWS_AS(BiasedSource(neg, 0), ConfigError);
    RankWeights nan = uniform_weights();
    nan[0] = std::nan("");
    CHECK_THROWS_AS(BiasedSource(nan, 0), ConfigError);
  }
}

TEST_CASE("prompt templates are byte-identical to the text assets") {
  CHECK(prompt_template(ShotMode::Zero).text == read_asset("zero_shot.txt"));
  CHECK(prompt_template(ShotMode::Few).text == read_asset("few_shot.txt"));
  for (auto mode : {ShotMode::Zero, ShotMode::Few}) {
    const auto text = prompt_template(mode).text;
    CHECK(text.find(kGameStatePlaceholder) != std::string_view::npos);
    CHECK(text.find(kGameStatePlaceholder) == text.rfind(kGameStatePlaceholder));
  }
}

TEST_CASE("render_game_state") {
  GameState empty;
  CHECK(render_game_state(empty) ==
        "Game state:\nPlayer cards: none\nDealer cards showing: none\nCard requested for: player (initial deal)");

  GameState s;
  s.player = {Rank::Ten, Rank::Six};
  s.dealer = {Rank::Nine, Rank::Queen};
  s.phase = Phase::PlayerTurn;
  s.next_draw = Actor::Player;
  const auto text = render_game_state(s);
  CHECK(text == "Game state:\nPlayer cards: 10, 6\nDealer cards showing: 9\nCard requested for: player");
  CHECK(text.find("Queen") == std::string::npos);  // hole card stays hidden
  GameState copy = s;
  CHECK(render_game_state(copy) == text);

  s.phase = Phase::DealerTurn;
  s.next_draw = Actor::Dealer;
  CHECK(render_game_state(s) ==
        "Game state:\nPlayer cards: 10, 6\nDealer cards showing: 9, Queen\nCard requested for: dealer");
}

TEST_CASE("render_prompt") {
  GameState s;
  s.player = {Rank::Ace};
  const auto zero = render_prompt(prompt_template(ShotMode::Zero), s);
  CHECK(zero.rfind("You are a blackjack dealer at a casino.", 0) == 0);
  CHECK(zero.ends_with("Your drawn card is"));
  CHECK(zero.find("{game_state}") == std::string::npos);
  CHECK(zero.find(render_game_state(s)) != std::string::npos);

  const auto few = render_prompt(prompt_template(ShotMode::Few), s);
  CHECK(few.find("A: Ace") != std::string::npos);
  CHECK(few.find("A: 4") != std::string::npos);
  CHECK(few.find("A: King") != std::string::npos);
  CHECK(few.ends_with("Your drawn card is"));
  CHECK(render_prompt(prompt_template(ShotMode::Few), s) == few);

  // Exact assembly: template prefix, rendered state, template suffix.
  const std::string expected =
      "You are a blackjack dealer at a casino.\n"
      "You will be responsible for drawing cards randomly for both the player and dealer. You will respond with "
      "the card that you draw as the dealer. Possible cards you can draw are [2, 3, 4, 5, 6, 7, 8, 9, 10, Jack, "
      "Queen, King, Ace].\n"
      "You will be provided the game state.\n"
      "You will now randomly draw your cards from the deck to deal.\n"
      "\n"
      "Game state:\nPlayer cards: Ace\nDealer cards showing: none\nCard requested for: player (initial deal)\n"
      "\n"
      "Do not give any additional details.\n"
      "Your drawn card is";
  CHECK(zero == expected);
}

TEST_CASE("parse_rank") {
  CHECK(parse_rank("Ace") == Rank::Ace);
  CHECK(parse_rank("  king\n") == Rank::King);
  CHECK_THROWS_AS(parse_rank("11"), ParseError);
  CHECK(parse_rank("I draw the 7 of hearts") == Rank::Seven);
  CHECK(parse_rank("A") == Rank::Ace);
  CHECK(parse_rank("q") == Rank::Queen);
  CHECK(parse_rank("J.") == Rank::Jack);
  CHECK(parse_rank("10 of spades") == Rank::Ten);
  CHECK(parse_rank("**Queen**") == Rank::Queen);
  CHECK(parse_rank("seven") == Rank::Seven);
  CHECK(parse_rank("Your drawn card is: 4") == Rank::Four);
  CHECK(parse_rank("I draw a 9") == Rank::Nine);  // lower-case "a" is an article, not an Ace
  CHECK_THROWS_AS(parse_rank(""), ParseError);
  CHECK_THROWS_AS(parse_rank("the joker"), ParseError);
  CHECK_THROWS_AS(parse_rank("1"), ParseError);
  try {
    parse_rank("banana");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.raw() == "banana");
  }
}

TEST_CASE("parse_rank round-trips every rank name") {
  for (Rank r : kAllRanks) {
    CHECK(parse_rank(rank_display(r)) == r);
    CHECK(parse_rank(rank_key(r)) == r);
    CHECK(rank_from_key(rank_key(r)) == r);
  }
}
