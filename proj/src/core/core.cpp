#include "pings/core.hpp"

#include <string>

namespace pings {

std::string_view to_string(Speaker s) {
  return s == Speaker::kAlice ? "Alice" : "Bob";
}

Speaker speaker_from_string(std::string_view s) {
  if (s == "Alice") return Speaker::kAlice;
  if (s == "Bob") return Speaker::kBob;
  throw InvalidArgument("unknown speaker: " + std::string(s));
}

Speaker speaker_for_turn(int index) {
  if (index < 1) throw InvalidArgument("turn index must be >= 1");
  return index % 2 == 1 ? Speaker::kAlice : Speaker::kBob;
}

namespace {

// Length in bytes of the whitespace code point starting at text[i], or 0.
std::size_t whitespace_length(std::string_view text, std::size_t i) {
  const auto byte = [&](std::size_t k) -> unsigned char {
    return i + k < text.size() ? static_cast<unsigned char>(text[i + k]) : 0;
  };
  const unsigned char c = byte(0);
  if (c == ' ' || (c >= 0x09 && c <= 0x0D) || (c >= 0x1C && c <= 0x1F)) return 1;
  if (c == 0xC2 && (byte(1) == 0x85 || byte(1) == 0xA0)) return 2;
  if (c == 0xE1 && byte(1) == 0x9A && byte(2) == 0x80) return 3;
  if (c == 0xE2 && byte(1) == 0x80) {
    const unsigned char d = byte(2);
    if ((d >= 0x80 && d <= 0x8A) || d == 0xA8 || d == 0xA9 || d == 0xAF) return 3;
  }
  if (c == 0xE2 && byte(1) == 0x81 && byte(2) == 0x9F) return 3;
  if (c == 0xE3 && byte(1) == 0x80 && byte(2) == 0x80) return 3;
  return 0;
}

}  // namespace

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  std::size_t start = std::string_view::npos;
  while (i < text.size()) {
    const std::size_t ws = whitespace_length(text, i);
    if (ws > 0) {
      if (start != std::string_view::npos) {
        tokens.push_back(text.substr(start, i - start));
        start = std::string_view::npos;
      }
      i += ws;
    } else {
      if (start == std::string_view::npos) start = i;
      ++i;
    }
  }
  if (start != std::string_view::npos) tokens.push_back(text.substr(start));
  return tokens;
}

std::size_t token_count(std::string_view text) { return tokenize(text).size(); }

int per_turn_allowance(int tokens_per_player, int turn_budget) {
  if (turn_budget < 1) throw InvalidArgument("turn budget must be positive");
  if (tokens_per_player < turn_budget) {
    throw InvalidArgument("token budget must be at least the turn budget");
  }
  return tokens_per_player / turn_budget;
}

int stated_word_limit(int allowance, WordLimitFactor factor) {
  if (allowance < 1) throw InvalidArgument("allowance must be positive");
  if (factor.numerator < 1 || factor.denominator < 1) {
    throw InvalidArgument("word limit factor must be positive");
  }
  return static_cast<int>(static_cast<long long>(allowance) * factor.numerator /
                          factor.denominator);
}

Truncation truncate_to_allowance(std::string_view text, int allowance) {
  if (allowance < 1) throw InvalidArgument("allowance must be positive");
  const auto tokens = tokenize(text);
  if (tokens.size() <= static_cast<std::size_t>(allowance)) {
    return {std::string(text), false};
  }
  std::string out;
  for (int i = 0; i < allowance; ++i) {
    if (i > 0) out += ' ';
    out += tokens[static_cast<std::size_t>(i)];
  }
  return {std::move(out), true};
}

BudgetConfig BudgetConfig::make(int tokens_per_player, int turn_budget,
                                WordLimitFactor factor) {
  if (turn_budget < 2 || turn_budget % 2 != 0) {
    throw InvalidArgument("turn budget must be even and at least 2");
  }
  BudgetConfig b;
  b.tokens_per_player = tokens_per_player;
  b.turn_budget = turn_budget;
  b.allowance = per_turn_allowance(tokens_per_player, turn_budget);
  b.stated_word_limit = pings::stated_word_limit(b.allowance, factor);
  return b;
}

int BudgetConfig::max_tokens_per_speaker() const {
  return (turn_budget + 1) / 2 * allowance;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return derive_seed(seed, h);
}

}  // namespace pings
