#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vfa/rank.hpp"

namespace vfa {

enum class Actor : std::uint8_t { Player, Dealer };
enum class Outcome : std::uint8_t { PlayerWin, DealerWin, Tie };

/// Monotone: Deal -> PlayerTurn -> DealerTurn -> Resolved.
/// A player bust goes straight from PlayerTurn to Resolved.
enum class Phase : std::uint8_t { Deal, PlayerTurn, DealerTurn, Resolved };

std::string_view actor_key(Actor a) noexcept;    // "player" / "dealer"
std::string_view outcome_key(Outcome o) noexcept;  // "player_win" / "dealer_win" / "tie"
Actor actor_from_key(std::string_view key);
Outcome outcome_from_key(std::string_view key);

inline constexpr int kBlackjack = 21;

struct HandValue {
  int total = 0;
  bool soft = false;  // an Ace is currently counted as 11

  bool bust() const noexcept { return total > kBlackjack; }
  friend bool operator==(const HandValue&, const HandValue&) = default;
};

/// Best total not exceeding 21 if one exists, else the (busting) minimum.
/// Throws UsageError on an empty hand.
HandValue hand_value(std::span<const Rank> cards);

/// Hits on 16 or below and on soft 17.
bool dealer_should_hit(HandValue value) noexcept;
bool dealer_should_hit(std::span<const Rank> cards);

/// Point value the player strategy assigns to the dealer upcard (Ace = 11).
int upcard_value(Rank upcard) noexcept;

/// Fixed player strategy: versus a strong upcard (>= 7) hit below 17,
/// versus a weak upcard (<= 6) hit below 12, otherwise stand.
bool player_should_hit(int player_total, Rank dealer_upcard) noexcept;

/// Player bust loses outright; then dealer bust wins; then higher total.
/// Throws UsageError when both hands are bust or a flag disagrees with its total.
Outcome resolve_outcome(int player_total, int dealer_total, bool player_busted, bool dealer_busted);

struct GameState {
  std::vector<Rank> player;
  std::vector<Rank> dealer;  // dealer[0] is the face-up card
  Phase phase = Phase::Deal;
  Actor next_draw = Actor::Player;  // who the pending card is for

  bool has_upcard() const noexcept { return !dealer.empty(); }
  Rank upcard() const { return dealer.front(); }
  friend bool operator==(const GameState&, const GameState&) = default;
};

/// Supplies cards to the game loop. One instance per in-flight hand.
class DrawSource {
 public:
  virtual ~DrawSource() = default;

  /// Next card for state.next_draw. Throws DrawFailure when no card can be produced.
  virtual Rank draw(const GameState& state) = 0;

  /// Restore the hand-start condition (e.g. a full deck).
  virtual void reset() = 0;

  virtual std::string agent_id() const = 0;

  /// Raw agent responses collected since the last reset, if any.
  virtual std::vector<std::string> take_responses() { return {}; }
};

struct Draw {
  Actor actor = Actor::Player;
  Rank rank = Rank::Two;
  friend bool operator==(const Draw&, const Draw&) = default;
};

struct HandRecord {
  std::int64_t trial_index = 0;
  std::vector<Rank> player_cards;
  std::vector<Rank> dealer_cards;
  int player_final = 0;
  int dealer_final = 0;
  Outcome outcome = Outcome::Tie;
  std::vector<Draw> draws;
  std::string agent_id;
  std::vector<std::string> raw_responses;

  bool dealer_busted() const noexcept { return dealer_final > kBlackjack; }
  bool player_busted() const noexcept { return player_final > kBlackjack; }
  friend bool operator==(const HandRecord&, const HandRecord&) = default;
};

/// Deals player, dealer, player, dealer; runs the player strategy, then the
/// dealer (skipped on player bust). Calls source.reset() first.
/// DrawFailure from the source propagates to the caller.
HandRecord play_hand(DrawSource& source, std::int64_t trial_index);

/// Replays a fixed card sequence; fails if the game asks for more cards than
/// scripted or for a different actor than recorded.
class ScriptedSource final : public DrawSource {
 public:
  explicit ScriptedSource(std::vector<Rank> cards, std::string id = "scripted");
  explicit ScriptedSource(std::vector<Draw> draws, std::string id = "replay");

  Rank draw(const GameState& state) override;
  void reset() override { pos_ = 0; }
  std::string agent_id() const override { return id_; }
  std::size_t consumed() const noexcept { return pos_; }
  std::size_t size() const noexcept { return cards_.size(); }

 private:
  std::vector<Rank> cards_;
  std::vector<Actor> actors_;  // empty when actors are not checked
  std::size_t pos_ = 0;
  std::string id_;
};

/// Re-runs the policies against the record's draw log. The result equals the
/// record (agent metadata copied) when the record is consistent.
HandRecord replay_hand(const HandRecord& record);

}  // namespace vfa
