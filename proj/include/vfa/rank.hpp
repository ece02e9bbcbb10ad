#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vfa {

/// The 13 blackjack ranks, ordered as offered to the dealer agent:
/// 2..10, Jack, Queen, King, Ace.
enum class Rank : std::uint8_t {
  Two, Three, Four, Five, Six, Seven, Eight, Nine, Ten, Jack, Queen, King, Ace
};

inline constexpr std::size_t kRankCount = 13;

inline constexpr std::array<Rank, kRankCount> kAllRanks = {
    Rank::Two,  Rank::Three, Rank::Four,  Rank::Five, Rank::Six,  Rank::Seven, Rank::Eight,
    Rank::Nine, Rank::Ten,   Rank::Jack,  Rank::Queen, Rank::King, Rank::Ace};

constexpr std::size_t rank_index(Rank r) noexcept { return static_cast<std::size_t>(r); }

constexpr Rank rank_from_index(std::size_t i) noexcept { return kAllRanks[i]; }

/// Hard point value; Ace counts 1 here (hand evaluation promotes it).
constexpr int point_value(Rank r) noexcept {
  const auto i = static_cast<int>(r);
  if (r == Rank::Ace) return 1;
  return i <= 8 ? i + 2 : 10;
}

constexpr bool is_face(Rank r) noexcept {
  return r == Rank::Jack || r == Rank::Queen || r == Rank::King;
}

/// Serialized name: "2".."10", "jack", "queen", "king", "ace".
std::string_view rank_key(Rank r) noexcept;

/// Display name as used in prompts: "2".."10", "Jack", "Queen", "King", "Ace".
std::string_view rank_display(Rank r) noexcept;

/// Inverse of rank_key (exact match).
std::optional<Rank> rank_from_key(std::string_view key) noexcept;

/// Extracts the first rank token from a free-text agent response.
/// Case-insensitive numerals 2-10, number words, and rank names are accepted.
/// Single-letter abbreviations A/J/Q/K are accepted when written in upper
/// case or when they are the whole response. Throws ParseError otherwise.
Rank parse_rank(std::string_view response);

}  // namespace vfa
