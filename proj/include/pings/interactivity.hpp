#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pings/core.hpp"
#include "pings/transcript.hpp"

// Exhaustive interactivity levels for tiny two-player games. Player 1 sees
// x1 and answers; player 2 sees x2. Messages are strings of exactly n
// vocabulary symbols, and a level-k exchange alternates senders so that
// player 2 speaks last. Only deterministic encodings are searched: with a
// common payoff the expected score is linear in any mixed strategy, so its
// maximum sits at a pure one.
namespace pings::interactivity {

struct AbstractGame {
  std::vector<std::string> x1, x2, answers;
  std::vector<std::vector<double>> p;                    // [x1][x2]
  std::vector<std::vector<std::vector<double>>> payoff;  // [x1][x2][a], in [0, 1]

  void validate() const;  // throws InvalidArgument
};

struct MessageSpace {
  std::vector<std::string> vocabulary;
  int n = 1;

  void validate() const;
  long long size() const;                       // |V|^n
  std::string message(long long index) const;  // symbols joined by spaces
};

class SearchTooLarge : public Error {
 public:
  SearchTooLarge(double cardinality, double guard);
  double cardinality;
};

struct SearchOptions {
  double guard = 1e7;  // max enumerated encoding tuples
  int max_level = 3;
};

// Encodings and answer policy realizing a value. Keys are (own private value
// index, message indices sent so far).
using History = std::vector<long long>;
struct Witness {
  struct Round {
    int player = 2;  // 1 or 2
    std::map<std::pair<int, History>, long long> encode;
  };
  std::vector<Round> rounds;
  std::map<std::pair<int, History>, int> answer;  // (x1, full history) -> answer index
};

struct LevelResult {
  std::optional<int> level;
  double achieved_value = 0;  // at `level`, or at the last level tried when none qualifies
  Witness witness;
  std::vector<double> values;  // best value at each level tried, from 0
};

// Sender (1 or 2) of round j in a level-k exchange, 1-based.
int sender(int k, int j);

// Product of the encoding-space sizes of the k rounds.
double search_cardinality(const AbstractGame& g, const MessageSpace& ms, int k);

double best_value_level0(const AbstractGame& g);
// Throws SearchTooLarge when search_cardinality exceeds the guard.
double best_value_level_k(const AbstractGame& g, const MessageSpace& ms, int k,
                          const SearchOptions& options = {}, Witness* witness = nullptr);

// Smallest k <= k_max whose best value is strictly above c.
LevelResult interactivity_level(const AbstractGame& g, const MessageSpace& ms, double c, int k_max,
                                const SearchOptions& options = {});

// Expected payoff of a witness played out on the game.
double evaluate(const AbstractGame& g, const MessageSpace& ms, int k, const Witness& w);

// {"x1": [...], "x2": [...], "answers": [...], "p": [[...]], "payoff": [[[...]]],
//  "vocabulary": [...], "n": 1}
std::pair<AbstractGame, MessageSpace> game_from_json(const Json& j);
Json to_json(const AbstractGame& g, const MessageSpace& ms);
Json to_json(const LevelResult& r, const AbstractGame& g, const MessageSpace& ms);

// Player 1 holds a bit position, player 2 a two-bit string; the answer is
// that bit. Uniform prior.
AbstractGame pointer_game();
// Answer must equal x2; uniform prior over `size` values.
AbstractGame identity_game(int size);

}  // namespace pings::interactivity
