#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "chess_oracle.hpp"
#include "pings/chess.hpp"

using namespace pings;
using namespace pings::chess;

namespace {

std::set<std::string> engine_set(const Board& b) {
  std::set<std::string> out;
  for (const Move& m : legal_moves(b)) out.insert(m.uci());
  return out;
}

constexpr const char* kProAlice =
    ". . b . . k r .\n"
    "r . . q p p . .\n"
    "n p p . . . . .\n"
    "p B . . . . . p\n"
    ". P . . . P p P\n"
    ". . P . P . P .\n"
    "P . . P . . . .\n"
    ". R B Q . K N .";

const char* kTrickyFens[] = {
    "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
    "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
    "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
    "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
    "4k3/8/8/3pP3/8/8/8/4K3 w - d6 0 2",
};

}  // namespace

TEST_CASE("initial position basics") {
  const Board b = Board::initial();
  CHECK_NOTHROW(b.validate());
  CHECK(legal_moves(b).size() == 20);
  CHECK(render_ascii(b).substr(0, 15) == "r n b q k b n r");
  CHECK(Board::from_fen(b.fen()) == b);
  const auto s = board_summary(b);
  CHECK(s.white_count == 16);
  CHECK(s.black_count == 16);
  CHECK(s.white_pawn_max_rank == 2);
  CHECK(s.black_pawn_min_rank == 7);
}

TEST_CASE("perft matches the reference generator from the start") {
  const Board b = Board::initial();
  const auto ref = oracle::parse_fen(b.fen());
  CHECK(perft(b, 0) == 1);
  for (int depth = 1; depth <= 3; ++depth) {
    CHECK(perft(b, depth) == oracle::perft(ref, depth));
  }
}

TEST_CASE("move sets match the reference generator on tricky positions") {
  for (const char* fen : kTrickyFens) {
    CAPTURE(fen);
    const Board b = Board::from_fen(fen);
    CHECK(engine_set(b) == oracle::legal_set(fen));
    CHECK(perft(b, 2) == oracle::perft(oracle::parse_fen(fen), 2));
  }
}

TEST_CASE("move sets match the reference generator along random games") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto moves = sample_game(seed, 120);
    Board b = Board::initial();
    for (const Move& m : moves) {
      REQUIRE(engine_set(b) == oracle::legal_set(b.fen()));
      b = apply_move(b, m);
    }
  }
}

TEST_CASE("stalemate and check evasions") {
  const Board stale = Board::from_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1");
  CHECK(legal_moves(stale).empty());
  CHECK_FALSE(in_check(stale, Color::kBlack));

  const Board check = Board::from_fen("4k3/8/8/8/8/8/4r3/R3K3 w Q - 0 1");
  CHECK(in_check(check, Color::kWhite));
  for (const Move& m : legal_moves(check)) {
    CHECK_FALSE(in_check(apply_move(check, m), Color::kWhite));
  }
  // castling out of check is not allowed
  CHECK(engine_set(check).count("e1c1") == 0);
}

TEST_CASE("apply_move updates state") {
  const Board b = apply_move(Board::initial(), parse_move(Board::initial(), "e2e4"));
  CHECK(b.at(parse_square("e4")) == Piece{PieceKind::kPawn, Color::kWhite});
  CHECK(b.en_passant_target() == parse_square("e3"));
  CHECK(b.side_to_move() == Color::kBlack);
  CHECK(b.ply() == 1);

  const Board c = Board::from_fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1");
  const Board castled = apply_move(c, parse_move(c, "e1g1"));
  CHECK(castled.at(parse_square("g1")) == Piece{PieceKind::kKing, Color::kWhite});
  CHECK(castled.at(parse_square("f1")) == Piece{PieceKind::kRook, Color::kWhite});
  CHECK_FALSE(castled.at(parse_square("h1")).has_value());
  CHECK_FALSE(castled.castling().white_king_side);
  CHECK(castled.castling().black_queen_side);

  const Board cap = Board::from_fen("4k3/8/8/3p4/4P3/8/8/4K3 w - - 0 1");
  const Board after = apply_move(cap, parse_move(cap, "e4d5"));
  CHECK(board_summary(after).black_count == board_summary(cap).black_count - 1);

  CHECK_THROWS_AS(apply_move(Board::initial(), Move{12, 44, std::nullopt}), InvalidArgument);
  CHECK_THROWS_AS(parse_move(Board::initial(), "e2e5"), InvalidArgument);
}

TEST_CASE("promotion offers all four pieces") {
  const Board b = Board::from_fen("4k3/P7/8/8/8/8/8/4K3 w - - 0 1");
  const auto moves = engine_set(b);
  for (const char* m : {"a7a8q", "a7a8r", "a7a8b", "a7a8n"}) CHECK(moves.count(m) == 1);
}

TEST_CASE("invalid boards are rejected") {
  CHECK_THROWS_AS(legal_moves(Board::from_fen("8/8/8/8/8/8/8/4K3 w - - 0 1")), InvalidArgument);
  CHECK_THROWS_AS(legal_moves(Board::from_fen("P3k3/8/8/8/8/8/8/4K3 w - - 0 1")),
                  InvalidArgument);
  CHECK_THROWS_AS(legal_moves(Board::from_fen("4k3/8/8/8/8/8/8/4K3 w - e6 0 1")),
                  InvalidArgument);
  CHECK_THROWS_AS(legal_moves(Board::from_fen("4k3/8/8/8/8/8/8/4K3 w K - 0 1")),
                  InvalidArgument);
}

TEST_CASE("rendering round trips") {
  const Board kings = Board::from_fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1");
  const std::string text = render_ascii(kings);
  CHECK(std::count(text.begin(), text.end(), '.') == 62);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto moves = sample_game(seed, 60);
    const Board b = replay(moves, static_cast<int>(moves.size()));
    const Board back = Board::from_ascii(render_ascii(b));
    CHECK(back.same_placement(b));
    CHECK_FALSE(parse_answer(render_ascii(b)).has_value());
  }
}

TEST_CASE("figure board piece counts") {
  const auto s = board_summary(Board::from_ascii(kProAlice));
  // The dialogue reports "13 white pieces and 14 black pieces"; the diagram
  // itself holds 14 white and 13 black.
  CHECK(s.white_count == 14);
  CHECK(s.black_count == 13);
  CHECK(s.white_pawn_max_rank == 4);
  CHECK(s.black_pawn_min_rank == 4);
}

TEST_CASE("sample_game determinism and monotone material") {
  CHECK(sample_game(5, 40) == sample_game(5, 40));
  CHECK(sample_game(5, 1).size() == 1);
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto moves = sample_game(seed, 200);
    Board b = Board::initial();
    auto prev = board_summary(b);
    for (const Move& m : moves) {
      b = apply_move(b, m);
      const auto cur = board_summary(b);
      CHECK(cur.white_count <= prev.white_count);
      CHECK(cur.black_count <= prev.black_count);
      prev = cur;
    }
  }
}

TEST_CASE("first move is uniform over the 20 openings") {
  std::map<std::string, int> counts;
  const int n = 10000;
  for (int seed = 0; seed < n; ++seed) counts[sample_game(seed, 1)[0].uci()]++;
  CHECK(counts.size() == 20);
  const double p = 1.0 / 20;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (const auto& [move, c] : counts) {
    CAPTURE(move);
    CHECK(std::abs(c - n * p) <= 3 * sigma + 1e-9);
  }
}

TEST_CASE("instances") {
  const auto inst = make_instance(1, {6, 12, 80, 16});
  CHECK(inst.gap_plies >= 6);
  CHECK(inst.gap_plies <= 12);
  CHECK(std::abs(inst.board_a.ply() - inst.board_b.ply()) == inst.gap_plies);
  CHECK(replay(inst.move_list, inst.board_a.ply()) == inst.board_a);
  CHECK(replay(inst.move_list, inst.board_b.ply()) == inst.board_b);
  const Board& earlier = inst.board_for(inst.earlier);
  const Board& later = inst.board_for(other(inst.earlier));
  CHECK(earlier.ply() < later.ply());
  CHECK_THROWS_AS(make_instance(1, {0, 12, 80, 16}), InvalidArgument);
  CHECK_THROWS_AS(make_instance(1, {6, 80, 80, 16}), InvalidArgument);

  int alice = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    if (make_instance(s).earlier == Speaker::kAlice) ++alice;
  }
  CHECK(std::abs(alice / 2000.0 - 0.5) < 0.04);
}

TEST_CASE("answers") {
  CHECK(parse_answer("Therefore, _MINE_") == ChessAnswer::kMine);
  CHECK_FALSE(parse_answer("your board came first").has_value());
  CHECK(parse_answer("_YOURS_ no wait _MINE_") == ChessAnswer::kMine);
  CHECK(parse_answer("_MINE_ or _YOURS_") == ChessAnswer::kYours);

  ChessInstance inst;
  inst.earlier = Speaker::kAlice;
  CHECK(score(inst, Speaker::kAlice, ChessAnswer::kMine));
  CHECK(score(inst, Speaker::kBob, ChessAnswer::kYours));
  CHECK_FALSE(score(inst, Speaker::kBob, ChessAnswer::kMine));
  CHECK_FALSE(score(inst, Speaker::kAlice, ChessAnswer::kYours));
}
