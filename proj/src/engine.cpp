#include "vfa/engine.hpp"

#include "vfa/errors.hpp"

namespace vfa {

std::string_view actor_key(Actor a) noexcept { return a == Actor::Player ? "player" : "dealer"; }

std::string_view outcome_key(Outcome o) noexcept {
  switch (o) {
    case Outcome::PlayerWin: return "player_win";
    case Outcome::DealerWin: return "dealer_win";
    case Outcome::Tie: return "tie";
  }
  return "tie";
}

Actor actor_from_key(std::string_view key) {
  if (key == "player") return Actor::Player;
  if (key == "dealer") return Actor::Dealer;
  throw UsageError("unknown actor \"" + std::string(key) + "\"");
}

Outcome outcome_from_key(std::string_view key) {
  if (key == "player_win") return Outcome::PlayerWin;
  if (key == "dealer_win") return Outcome::DealerWin;
  if (key == "tie") return Outcome::Tie;
  throw UsageError("unknown outcome \"" + std::string(key) + "\"");
}

HandValue hand_value(std::span<const Rank> cards) {
  if (cards.empty()) throw UsageError("hand_value: empty hand");
  int hard = 0;
  bool has_ace = false;
  for (Rank r : cards) {
    hard += point_value(r);
    has_ace = has_ace || r == Rank::Ace;
  }
  // At most one Ace can ever count as 11.
  if (has_ace && hard + 10 <= kBlackjack) return {hard + 10, true};
  return {hard, false};
}

bool dealer_should_hit(HandValue value) noexcept {
  return value.total <= 16 || (value.total == 17 && value.soft);
}

bool dealer_should_hit(std::span<const Rank> cards) { return dealer_should_hit(hand_value(cards)); }

int upcard_value(Rank upcard) noexcept { return upcard == Rank::Ace ? 11 : point_value(upcard); }

bool player_should_hit(int player_total, Rank dealer_upcard) noexcept {
  const int up = upcard_value(dealer_upcard);
  if (up >= 7 && player_total < 17) return true;
  if (up <= 6 && player_total < 12) return true;
  return false;
}

Outcome resolve_outcome(int player_total, int dealer_total, bool player_busted, bool dealer_busted) {
  if (player_busted != (player_total > kBlackjack) || dealer_busted != (dealer_total > kBlackjack)) {
    throw UsageError("resolve_outcome: bust flag inconsistent with total");
  }
  if (player_busted && dealer_busted) {
    throw UsageError("resolve_outcome: both hands bust (dealer never plays after a player bust)");
  }
  if (player_busted) return Outcome::DealerWin;
  if (dealer_busted) return Outcome::PlayerWin;
  if (player_total > dealer_total) return Outcome::PlayerWin;
  if (dealer_total > player_total) return Outcome::DealerWin;
  return Outcome::Tie;
}

namespace {

void deal(DrawSource& source, GameState& state, HandRecord& record, Actor to) {
  state.next_draw = to;
  const Rank r = source.draw(state);
  (to == Actor::Player ? state.player : state.dealer).push_back(r);
  record.draws.push_back({to, r});
}

}  // namespace

HandRecord play_hand(DrawSource& source, std::int64_t trial_index) {
  source.reset();
  HandRecord record;
  record.trial_index = trial_index;
  record.agent_id = source.agent_id();

  GameState state;
  deal(source, state, record, Actor::Player);
  deal(source, state, record, Actor::Dealer);
  deal(source, state, record, Actor::Player);
  deal(source, state, record, Actor::Dealer);

  state.phase = Phase::PlayerTurn;
  while (player_should_hit(hand_value(state.player).total, state.upcard())) {
    deal(source, state, record, Actor::Player);
  }
  const HandValue player = hand_value(state.player);

  if (!player.bust()) {
    state.phase = Phase::DealerTurn;
    while (dealer_should_hit(hand_value(state.dealer))) {
      deal(source, state, record, Actor::Dealer);
    }
  }
  const HandValue dealer = hand_value(state.dealer);
  state.phase = Phase::Resolved;

  record.player_cards = std::move(state.player);
  record.dealer_cards = std::move(state.dealer);
  record.player_final = player.total;
  record.dealer_final = dealer.total;
  record.outcome = resolve_outcome(player.total, dealer.total, player.bust(), dealer.bust());
  record.raw_responses = source.take_responses();
  return record;
}

ScriptedSource::ScriptedSource(std::vector<Rank> cards, std::string id)
    : cards_(std::move(cards)), id_(std::move(id)) {}

ScriptedSource::ScriptedSource(std::vector<Draw> draws, std::string id) : id_(std::move(id)) {
  cards_.reserve(draws.size());
  actors_.reserve(draws.size());
  for (const auto& d : draws) {
    cards_.push_back(d.rank);
    actors_.push_back(d.actor);
  }
}

Rank ScriptedSource::draw(const GameState& state) {
  if (pos_ >= cards_.size()) {
    throw DrawFailure("scripted source exhausted after " + std::to_string(cards_.size()) + " cards", {});
  }
  if (!actors_.empty() && actors_[pos_] != state.next_draw) {
    throw DrawFailure("scripted draw " + std::to_string(pos_) + " recorded for " +
                          std::string(actor_key(actors_[pos_])) + " but requested for " +
                          std::string(actor_key(state.next_draw)),
                      {});
  }
  return cards_[pos_++];
}

HandRecord replay_hand(const HandRecord& record) {
  ScriptedSource source(record.draws, record.agent_id);
  HandRecord replayed = play_hand(source, record.trial_index);
  if (source.consumed() != source.size()) {
    throw UsageError("replay of trial " + std::to_string(record.trial_index) + " left " +
                     std::to_string(source.size() - source.consumed()) + " recorded draws unused");
  }
  replayed.raw_responses = record.raw_responses;
  return replayed;
}

}  // namespace vfa
