#include "vfa/rank.hpp"

#include <cctype>

#include "vfa/errors.hpp"

namespace vfa {
namespace {

constexpr std::array<std::string_view, kRankCount> kKeys = {
    "2", "3", "4", "5", "6", "7", "8", "9", "10", "jack", "queen", "king", "ace"};
constexpr std::array<std::string_view, kRankCount> kDisplay = {
    "2", "3", "4", "5", "6", "7", "8", "9", "10", "Jack", "Queen", "King", "Ace"};
constexpr std::array<std::string_view, 9> kNumberWords = {
    "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

bool is_ascii_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<Rank> match_word(const std::string& token) {
  for (std::size_t i = 0; i < kRankCount; ++i) {
    if (token == kKeys[i]) return kAllRanks[i];
  }
  for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
    if (token == kNumberWords[i]) return kAllRanks[i];
  }
  return std::nullopt;
}

std::optional<Rank> match_letter(char c) {
  switch (c) {
    case 'A': return Rank::Ace;
    case 'J': return Rank::Jack;
    case 'Q': return Rank::Queen;
    case 'K': return Rank::King;
    default: return std::nullopt;
  }
}

}  // namespace

std::string_view rank_key(Rank r) noexcept { return kKeys[rank_index(r)]; }

std::string_view rank_display(Rank r) noexcept { return kDisplay[rank_index(r)]; }

std::optional<Rank> rank_from_key(std::string_view key) noexcept {
  for (std::size_t i = 0; i < kRankCount; ++i) {
    if (key == kKeys[i]) return kAllRanks[i];
  }
  return std::nullopt;
}

Rank parse_rank(std::string_view response) {
  std::size_t token_count = 0;
  std::optional<Rank> lone_letter;
  std::size_t i = 0;
  while (i < response.size()) {
    if (!is_ascii_alnum(response[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < response.size() && is_ascii_alnum(response[j])) ++j;
    const std::string_view token = response.substr(i, j - i);
    ++token_count;
    if (auto r = match_word(lower(token))) return *r;
    if (token.size() == 1) {
      const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
      if (auto r = match_letter(token[0])) return *r;  // upper-case abbreviation
      if (token_count == 1) lone_letter = match_letter(upper);
    }
    i = j;
  }
  // "a", "k", ... written alone still count.
  if (token_count == 1 && lone_letter) return *lone_letter;
  throw ParseError(std::string(response));
}

}  // namespace vfa
