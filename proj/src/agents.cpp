#include "vfa/agents.hpp"

#include <cmath>

#include "vfa/errors.hpp"

namespace vfa {

// ---- control deck ----------------------------------------------------------

DeckControlSource::DeckControlSource(std::uint64_t seed) : rng_(seed) { reset(); }

void DeckControlSource::reset() {
  counts_.fill(4);
  total_ = 52;
}

Rank DeckControlSource::draw(const GameState&) { return draw(); }

Rank DeckControlSource::draw() {
  if (total_ <= 0) throw Error("control deck exhausted; reset() was not called between hands");
  auto pick = static_cast<int>(rng_.uniform_index(static_cast<std::uint64_t>(total_)));
  for (std::size_t i = 0; i < kRankCount; ++i) {
    if (pick < counts_[i]) {
      --counts_[i];
      --total_;
      return kAllRanks[i];
    }
    pick -= counts_[i];
  }
  throw Error("control deck bookkeeping corrupted");
}

void DeckControlSource::remove(Rank r) {
  auto& c = counts_[rank_index(r)];
  if (c == 0) throw UsageError("no " + std::string(rank_display(r)) + " left in the deck");
  --c;
  --total_;
}

// ---- biased ----------------------------------------------------------------

RankWeights normalize_weights(const RankWeights& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ConfigError("rank weights must be finite and nonnegative");
    sum += w;
  }
  if (sum <= 0.0) throw ConfigError("rank weights are all zero");
  RankWeights out{};
  for (std::size_t i = 0; i < kRankCount; ++i) out[i] = weights[i] / sum;
  return out;
}

RankWeights uniform_weights() {
  RankWeights w{};
  w.fill(1.0 / kRankCount);
  return w;
}

RankWeights one_hot_weights(Rank r) {
  RankWeights w{};
  w[rank_index(r)] = 1.0;
  return w;
}

RankWeights no_face_card_weights() {
  RankWeights w{};
  for (Rank r : kAllRanks) w[rank_index(r)] = is_face(r) ? 0.0 : 0.1;
  return w;
}

BiasedSource::BiasedSource(const RankWeights& weights, std::uint64_t seed, std::string id)
    : probs_(normalize_weights(weights)), rng_(seed), id_(std::move(id)) {
  double acc = 0.0;
  for (std::size_t i = 0; i < kRankCount; ++i) {
    acc += probs_[i];
    cumulative_[i] = acc;
  }
}

Rank BiasedSource::draw(const GameState&) { return draw(); }

Rank BiasedSource::draw() {
  const double u = rng_.uniform01();
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < kRankCount; ++i) {
    if (probs_[i] <= 0.0) continue;
    last_nonzero = i;
    if (u < cumulative_[i]) return kAllRanks[i];
  }
  // u landed in the rounding gap above the final cumulative sum.
  return kAllRanks[last_nonzero];
}

// ---- prompts ---------------------------------------------------------------

namespace {

constexpr std::string_view kZeroShot =
    R"(You are a blackjack dealer at a casino.
You will be responsible for drawing cards randomly for both the player and dealer. You will respond with the card that you draw as the dealer. Possible cards you can draw are [2, 3, 4, 5, 6, 7, 8, 9, 10, Jack, Queen, King, Ace].
You will be provided the game state.
You will now randomly draw your cards from the deck to deal.

{game_state}

Do not give any additional details.
Your drawn card is)";

constexpr std::string_view kFewShot =
    R"(You are a blackjack dealer at a casino.
You will be responsible for drawing cards randomly for both the player and dealer. You will respond with the card that you draw as the dealer. Possible cards you can draw are [2, 3, 4, 5, 6, 7, 8, 9, 10, Jack, Queen, King, Ace].
You will be provided the game state.
You will now randomly draw your cards from the deck to deal.

Here are some examples of responses:

Q: Your drawn card is
A: Ace

Q: Your drawn card is
A: 4

Q: Your drawn card is
A: King

{game_state}

Do not give any additional details.
Your drawn card is)";

constexpr PromptTemplate kZeroShotTemplate{ShotMode::Zero, kZeroShot};
constexpr PromptTemplate kFewShotTemplate{ShotMode::Few, kFewShot};

std::string join_cards(std::span<const Rank> cards) {
  if (cards.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    if (i) out += ", ";
    out += rank_display(cards[i]);
  }
  return out;
}

}  // namespace

std::string_view shot_mode_key(ShotMode m) noexcept { return m == ShotMode::Zero ? "zero" : "few"; }

ShotMode shot_mode_from_key(std::string_view key) {
  if (key == "zero") return ShotMode::Zero;
  if (key == "few") return ShotMode::Few;
  throw ConfigError("shot mode must be \"zero\" or \"few\", got \"" + std::string(key) + "\"");
}

const PromptTemplate& prompt_template(ShotMode mode) noexcept {
  return mode == ShotMode::Zero ? kZeroShotTemplate : kFewShotTemplate;
}

std::string render_game_state(const GameState& state) {
  std::span<const Rank> dealer_visible(state.dealer);
  if (state.phase == Phase::Deal || state.phase == Phase::PlayerTurn) {
    dealer_visible = dealer_visible.first(std::min<std::size_t>(1, state.dealer.size()));
  }
  std::string out = "Game state:\n";
  out += "Player cards: " + join_cards(state.player) + "\n";
  out += "Dealer cards showing: " + join_cards(dealer_visible) + "\n";
  out += "Card requested for: ";
  out += actor_key(state.next_draw);
  if (state.phase == Phase::Deal) out += " (initial deal)";
  return out;
}

std::string render_prompt(const PromptTemplate& tmpl, const GameState& state) {
  std::string out(tmpl.text);
  const auto pos = out.find(kGameStatePlaceholder);
  if (pos != std::string::npos) out.replace(pos, kGameStatePlaceholder.size(), render_game_state(state));
  return out;
}

}  // namespace vfa
