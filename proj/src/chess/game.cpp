#include <algorithm>
#include <string>

#include "pings/chess.hpp"
#include "pings/rng.hpp"

namespace pings::chess {

ChessInstance make_instance(std::uint64_t seed, const InstanceOptions& options) {
  if (options.min_gap < 1 || options.min_gap > options.max_gap ||
      options.max_gap >= options.max_plies) {
    throw InvalidArgument("need 1 <= min_gap <= max_gap < max_plies");
  }
  if (options.max_retries < 1) throw InvalidArgument("max_retries must be >= 1");

  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    const std::uint64_t game_seed = derive_seed(seed, static_cast<std::uint64_t>(attempt));
    auto moves = sample_game(game_seed, options.max_plies);
    const int length = static_cast<int>(moves.size());
    if (length < options.min_gap) continue;

    Rng rng(derive_seed(game_seed, "pick"));
    const int gap = rng.uniform_int(options.min_gap, std::min(options.max_gap, length));
    const int early_ply = rng.uniform_int(0, length - gap);
    const bool alice_earlier = rng.bernoulli(0.5);

    Board early = replay(moves, early_ply);
    Board late = replay(moves, early_ply + gap);
    // Random play can shuffle pieces back into an identical placement.
    if (early.same_placement(late)) continue;

    ChessInstance inst;
    inst.earlier = alice_earlier ? Speaker::kAlice : Speaker::kBob;
    inst.board_a = alice_earlier ? early : late;
    inst.board_b = alice_earlier ? late : early;
    inst.move_list = std::move(moves);
    inst.gap_plies = gap;
    inst.seed = seed;
    return inst;
  }
  throw Error("could not build a chess instance for seed " + std::to_string(seed) +
              " within " + std::to_string(options.max_retries) + " attempts");
}

std::string_view to_string(ChessAnswer a) {
  return a == ChessAnswer::kMine ? "_MINE_" : "_YOURS_";
}

std::optional<ChessAnswer> parse_answer(std::string_view utterance) {
  const auto mine = utterance.rfind("_MINE_");
  const auto yours = utterance.rfind("_YOURS_");
  if (mine == std::string_view::npos && yours == std::string_view::npos) return std::nullopt;
  if (yours == std::string_view::npos) return ChessAnswer::kMine;
  if (mine == std::string_view::npos) return ChessAnswer::kYours;
  return mine > yours ? ChessAnswer::kMine : ChessAnswer::kYours;
}

bool score(const ChessInstance& instance, Speaker by, ChessAnswer answer) {
  return (answer == ChessAnswer::kMine) == (by == instance.earlier);
}

}  // namespace pings::chess
