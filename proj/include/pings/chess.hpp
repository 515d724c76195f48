#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pings/core.hpp"

namespace pings::chess {

enum class Color : std::uint8_t { kWhite, kBlack };
enum class PieceKind : std::uint8_t { kPawn, kKnight, kBishop, kRook, kQueen, kKing };

constexpr Color opposite(Color c) {
  return c == Color::kWhite ? Color::kBlack : Color::kWhite;
}

struct Piece {
  PieceKind kind;
  Color color;
  friend bool operator==(const Piece&, const Piece&) = default;
};

// Squares are 0..63 with a1 = 0, b1 = 1, ..., h8 = 63.
using Square = int;
constexpr int file_of(Square s) { return s & 7; }
constexpr int rank_of(Square s) { return s >> 3; }  // 0-based
constexpr Square make_square(int file, int rank) { return rank * 8 + file; }
std::string square_name(Square s);
Square parse_square(std::string_view name);

struct CastlingRights {
  bool white_king_side = false;
  bool white_queen_side = false;
  bool black_king_side = false;
  bool black_queen_side = false;
  friend bool operator==(const CastlingRights&, const CastlingRights&) = default;
};

struct Move {
  Square from = 0;
  Square to = 0;
  std::optional<PieceKind> promotion;

  // Long algebraic coordinates, e.g. "e2e4", "e7e8q", "e1g1" for castling.
  std::string uci() const;
  friend bool operator==(const Move&, const Move&) = default;
};

class Board {
 public:
  // Empty board, white to move, no rights. Not valid until kings are placed.
  Board() = default;
  static Board initial();
  static Board from_fen(std::string_view fen);
  // Inverse of render_ascii. Side to move, rights and ply come from the
  // arguments since the diagram does not carry them.
  static Board from_ascii(std::string_view diagram, Color side_to_move = Color::kWhite,
                          int ply = 0);

  std::optional<Piece> at(Square s) const { return squares_[static_cast<std::size_t>(s)]; }
  void set(Square s, std::optional<Piece> p) { squares_[static_cast<std::size_t>(s)] = p; }

  Color side_to_move() const { return side_to_move_; }
  void set_side_to_move(Color c) { side_to_move_ = c; }
  const CastlingRights& castling() const { return castling_; }
  void set_castling(CastlingRights r) { castling_ = r; }
  std::optional<Square> en_passant_target() const { return en_passant_; }
  void set_en_passant_target(std::optional<Square> s) { en_passant_ = s; }
  int ply() const { return ply_; }
  void set_ply(int ply) { ply_ = ply; }

  std::string fen() const;
  // Throws InvalidArgument describing the first violated invariant.
  void validate() const;
  bool same_placement(const Board& other) const { return squares_ == other.squares_; }

  friend bool operator==(const Board&, const Board&) = default;

 private:
  std::array<std::optional<Piece>, 64> squares_{};
  Color side_to_move_ = Color::kWhite;
  CastlingRights castling_;
  std::optional<Square> en_passant_;
  int ply_ = 0;
};

bool is_square_attacked(const Board& b, Square s, Color by);
bool in_check(const Board& b, Color side);

// Fully legal moves for the side to move. Rejects invalid boards.
std::vector<Move> legal_moves(const Board& b);
// Throws InvalidArgument unless `m` is legal in `b`.
Board apply_move(const Board& b, const Move& m);
Move parse_move(const Board& b, std::string_view uci);
std::uint64_t perft(const Board& b, int depth);

// Random game: each ply draws uniformly from legal_moves. Stops at mate,
// stalemate or max_plies.
std::vector<Move> sample_game(std::uint64_t seed, int max_plies);
// Board after the first `plies` moves of `moves`, starting from the initial
// position.
Board replay(const std::vector<Move>& moves, int plies);

struct ChessInstance {
  Board board_a;  // Alice's
  Board board_b;  // Bob's
  Speaker earlier = Speaker::kAlice;
  std::vector<Move> move_list;
  int gap_plies = 0;
  std::uint64_t seed = 0;

  const Board& board_for(Speaker s) const {
    return s == Speaker::kAlice ? board_a : board_b;
  }
};

struct InstanceOptions {
  int min_gap = 6;
  int max_gap = 16;
  int max_plies = 80;
  int max_retries = 16;
};

// Throws Error after max_retries games too short to separate two positions.
ChessInstance make_instance(std::uint64_t seed, const InstanceOptions& options = {});

// 8 lines, rank 8 first, single spaces between squares, "." for empties.
std::string render_ascii(const Board& b);

enum class ChessAnswer { kMine, kYours };
std::string_view to_string(ChessAnswer a);
// "_MINE_" / "_YOURS_" substring match; the last occurrence wins.
std::optional<ChessAnswer> parse_answer(std::string_view utterance);
bool score(const ChessInstance& instance, Speaker by, ChessAnswer answer);

struct BoardSummary {
  int white_count = 0;
  int black_count = 0;
  std::optional<int> white_pawn_max_rank;  // 1-based
  std::optional<int> black_pawn_min_rank;  // 1-based
  friend bool operator==(const BoardSummary&, const BoardSummary&) = default;
};
BoardSummary board_summary(const Board& b);

}  // namespace pings::chess
