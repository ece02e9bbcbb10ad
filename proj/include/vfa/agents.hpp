#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "vfa/engine.hpp"
#include "vfa/random.hpp"

namespace vfa {

/// Control group: a full 52-card deck, shuffled per hand, dealt without
/// replacement.
class DeckControlSource final : public DrawSource {
 public:
  explicit DeckControlSource(std::uint64_t seed);

  Rank draw(const GameState& state) override;
  void reset() override;
  std::string agent_id() const override { return "control"; }

  Rank draw();
  /// Takes one specific card out of the deck. Throws UsageError if none remain.
  void remove(Rank r);
  int remaining(Rank r) const noexcept { return counts_[rank_index(r)]; }
  int remaining() const noexcept { return total_; }

 private:
  Rng rng_;
  std::array<int, kRankCount> counts_{};
  int total_ = 0;
};

using RankWeights = std::array<double, kRankCount>;

/// Synthetic agent: independent draws (with replacement) from a fixed
/// weight vector over the 13 ranks.
class BiasedSource final : public DrawSource {
 public:
  /// Weights are normalized; negative, non-finite or all-zero weights throw ConfigError.
  BiasedSource(const RankWeights& weights, std::uint64_t seed, std::string id = "biased");

  Rank draw(const GameState& state) override;
  void reset() override {}
  std::string agent_id() const override { return id_; }

  Rank draw();
  const RankWeights& probabilities() const noexcept { return probs_; }

 private:
  RankWeights probs_{};
  RankWeights cumulative_{};
  Rng rng_;
  std::string id_;
};

/// Validates and normalizes a weight vector (ConfigError on failure).
RankWeights normalize_weights(const RankWeights& weights);

/// Weights for common synthetic biases.
RankWeights uniform_weights();
RankWeights one_hot_weights(Rank r);
RankWeights no_face_card_weights();

enum class ShotMode : std::uint8_t { Zero, Few };

std::string_view shot_mode_key(ShotMode m) noexcept;  // "zero" / "few"
ShotMode shot_mode_from_key(std::string_view key);

inline constexpr std::string_view kGameStatePlaceholder = "{game_state}";

struct PromptTemplate {
  ShotMode mode;
  std::string_view text;  // contains kGameStatePlaceholder exactly once
};

const PromptTemplate& prompt_template(ShotMode mode) noexcept;

/// Player cards, visible dealer cards (the upcard until the dealer's turn,
/// then the whole hand) and the actor the next card is for. ASCII only,
/// locale independent.
std::string render_game_state(const GameState& state);

std::string render_prompt(const PromptTemplate& tmpl, const GameState& state);

}  // namespace vfa
