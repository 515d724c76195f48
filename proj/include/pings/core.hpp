#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pings {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

enum class Speaker { kAlice, kBob };

std::string_view to_string(Speaker s);
Speaker speaker_from_string(std::string_view s);
constexpr Speaker other(Speaker s) {
  return s == Speaker::kAlice ? Speaker::kBob : Speaker::kAlice;
}

// Alice speaks on odd turns, Bob on even turns. Throws on index 0.
Speaker speaker_for_turn(int index);

// Splits on maximal runs of whitespace (ASCII plus the common Unicode
// spaces encoded as UTF-8). Never yields empty tokens.
std::vector<std::string_view> tokenize(std::string_view text);
std::size_t token_count(std::string_view text);

// floor(T / t). Throws when t < 1 or T < t.
int per_turn_allowance(int tokens_per_player, int turn_budget);

// Default factor 11/16 reproduces the word limits printed in the prompts
// (32 -> 22, 64 -> 44, 16 -> 11).
struct WordLimitFactor {
  int numerator = 11;
  int denominator = 16;
};
int stated_word_limit(int allowance, WordLimitFactor factor = {});

struct Truncation {
  std::string text;
  bool truncated = false;
};
// Keeps at most `allowance` tokens. Text within budget comes back unchanged;
// otherwise the first `allowance` tokens are joined by single spaces.
Truncation truncate_to_allowance(std::string_view text, int allowance);

struct BudgetConfig {
  int tokens_per_player = 256;
  int turn_budget = 8;
  int allowance = 32;
  int stated_word_limit = 22;

  // Validates t even, t >= 2 and T >= t, then derives the rest.
  static BudgetConfig make(int tokens_per_player, int turn_budget,
                           WordLimitFactor factor = {});
  // Upper bound on any one player's usage: ceil(t/2) * allowance.
  int max_tokens_per_speaker() const;

  friend bool operator==(const BudgetConfig&, const BudgetConfig&) = default;
};

struct Turn {
  int index = 0;
  Speaker speaker = Speaker::kAlice;
  std::string text;
  int token_count = 0;
  bool truncated = false;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct TokensUsed {
  int alice = 0;
  int bob = 0;

  int& operator[](Speaker s) { return s == Speaker::kAlice ? alice : bob; }
  int operator[](Speaker s) const {
    return s == Speaker::kAlice ? alice : bob;
  }
  friend bool operator==(const TokensUsed&, const TokensUsed&) = default;
};

// `correct` is empty only for aborted dialogues; an unparseable final turn is
// scored false and flagged.
struct Outcome {
  std::string raw_answer;
  std::optional<std::string> parsed_answer;
  std::optional<Speaker> answering_player;
  std::optional<bool> correct;
  int turns_used = 0;
  TokensUsed tokens_used;
  bool unparseable = false;
  bool aborted = false;
  std::string error;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Deterministic seed mixing (splitmix64 finalizer over seed and tag).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

}  // namespace pings
