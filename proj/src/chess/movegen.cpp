#include <cstdlib>
#include <algorithm>
#include <string>

#include "pings/chess.hpp"
#include "pings/rng.hpp"

namespace pings::chess {

namespace {

struct Delta {
  int df;
  int dr;
};

constexpr Delta kKnightDeltas[] = {{1, 2}, {2, 1}, {2, -1}, {1, -2},
                                   {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
constexpr Delta kKingDeltas[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                 {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr Delta kRookDirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr Delta kBishopDirs[] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

constexpr PieceKind kPromotions[] = {PieceKind::kQueen, PieceKind::kRook,
                                     PieceKind::kBishop, PieceKind::kKnight};

std::optional<Square> offset(Square s, Delta d) {
  const int f = file_of(s) + d.df;
  const int r = rank_of(s) + d.dr;
  if (f < 0 || f > 7 || r < 0 || r > 7) return std::nullopt;
  return make_square(f, r);
}

bool holds(const Board& b, Square s, PieceKind kind, Color color) {
  const auto p = b.at(s);
  return p && p->kind == kind && p->color == color;
}

bool slider_attacks(const Board& b, Square s, Color by, const Delta (&dirs)[4],
                    PieceKind a, PieceKind q) {
  for (const Delta d : dirs) {
    auto cur = offset(s, d);
    while (cur) {
      if (const auto p = b.at(*cur)) {
        if (p->color == by && (p->kind == a || p->kind == q)) return true;
        break;
      }
      cur = offset(*cur, d);
    }
  }
  return false;
}

Square find_king(const Board& b, Color c) {
  for (Square s = 0; s < 64; ++s) {
    if (holds(b, s, PieceKind::kKing, c)) return s;
  }
  throw InvalidArgument("no king on board");
}

void add_pawn_move(std::vector<Move>& out, Square from, Square to) {
  if (rank_of(to) == 0 || rank_of(to) == 7) {
    for (const PieceKind k : kPromotions) out.push_back({from, to, k});
  } else {
    out.push_back({from, to, std::nullopt});
  }
}

std::vector<Move> pseudo_legal_moves(const Board& b) {
  std::vector<Move> out;
  out.reserve(64);
  const Color us = b.side_to_move();
  const Color them = opposite(us);
  const int forward = us == Color::kWhite ? 1 : -1;
  const int start_rank = us == Color::kWhite ? 1 : 6;

  for (Square from = 0; from < 64; ++from) {
    const auto p = b.at(from);
    if (!p || p->color != us) continue;
    switch (p->kind) {
      case PieceKind::kPawn: {
        if (auto one = offset(from, {0, forward}); one && !b.at(*one)) {
          add_pawn_move(out, from, *one);
          auto two = offset(*one, {0, forward});
          if (rank_of(from) == start_rank && two && !b.at(*two)) {
            out.push_back({from, *two, std::nullopt});
          }
        }
        for (const int df : {-1, 1}) {
          auto to = offset(from, {df, forward});
          if (!to) continue;
          const auto target = b.at(*to);
          if ((target && target->color == them) || b.en_passant_target() == *to) {
            add_pawn_move(out, from, *to);
          }
        }
        break;
      }
      case PieceKind::kKnight:
      case PieceKind::kKing: {
        const auto& deltas = p->kind == PieceKind::kKnight ? kKnightDeltas : kKingDeltas;
        for (const Delta d : deltas) {
          auto to = offset(from, d);
          if (!to) continue;
          const auto target = b.at(*to);
          if (!target || target->color == them) out.push_back({from, *to, std::nullopt});
        }
        break;
      }
      case PieceKind::kBishop:
      case PieceKind::kRook:
      case PieceKind::kQueen: {
        const auto slide = [&](const Delta(&dirs)[4]) {
          for (const Delta d : dirs) {
            auto to = offset(from, d);
            while (to) {
              const auto target = b.at(*to);
              if (target) {
                if (target->color == them) out.push_back({from, *to, std::nullopt});
                break;
              }
              out.push_back({from, *to, std::nullopt});
              to = offset(*to, d);
            }
          }
        };
        if (p->kind != PieceKind::kBishop) slide(kRookDirs);
        if (p->kind != PieceKind::kRook) slide(kBishopDirs);
        break;
      }
    }
  }

  // Castling: rights imply king and rook at home (checked by validate()).
  const int home = us == Color::kWhite ? 0 : 7;
  const Square king = make_square(4, home);
  const auto& rights = b.castling();
  const bool king_side = us == Color::kWhite ? rights.white_king_side : rights.black_king_side;
  const bool queen_side = us == Color::kWhite ? rights.white_queen_side : rights.black_queen_side;
  if ((king_side || queen_side) && holds(b, king, PieceKind::kKing, us) &&
      !is_square_attacked(b, king, them)) {
    if (king_side && !b.at(make_square(5, home)) && !b.at(make_square(6, home)) &&
        !is_square_attacked(b, make_square(5, home), them) &&
        !is_square_attacked(b, make_square(6, home), them)) {
      out.push_back({king, make_square(6, home), std::nullopt});
    }
    if (queen_side && !b.at(make_square(3, home)) && !b.at(make_square(2, home)) &&
        !b.at(make_square(1, home)) && !is_square_attacked(b, make_square(3, home), them) &&
        !is_square_attacked(b, make_square(2, home), them)) {
      out.push_back({king, make_square(2, home), std::nullopt});
    }
  }
  return out;
}

// Applies a move without legality checks.
Board make_move_unchecked(const Board& b, const Move& m) {
  Board next = b;
  const Piece moving = *b.at(m.from);
  const Color us = moving.color;
  const bool is_capture = b.at(m.to).has_value();

  next.set(m.from, std::nullopt);
  if (moving.kind == PieceKind::kPawn && b.en_passant_target() == m.to && !is_capture) {
    next.set(m.to + (us == Color::kWhite ? -8 : 8), std::nullopt);
  }
  next.set(m.to, m.promotion ? Piece{*m.promotion, us} : moving);

  if (moving.kind == PieceKind::kKing && std::abs(file_of(m.to) - file_of(m.from)) == 2) {
    const int home = rank_of(m.from);
    const bool king_side = file_of(m.to) == 6;
    const Square rook_from = make_square(king_side ? 7 : 0, home);
    const Square rook_to = make_square(king_side ? 5 : 3, home);
    next.set(rook_to, next.at(rook_from));
    next.set(rook_from, std::nullopt);
  }

  CastlingRights r = b.castling();
  const auto touch = [&r](Square s) {
    if (s == 4) r.white_king_side = r.white_queen_side = false;
    if (s == 60) r.black_king_side = r.black_queen_side = false;
    if (s == 0) r.white_queen_side = false;
    if (s == 7) r.white_king_side = false;
    if (s == 56) r.black_queen_side = false;
    if (s == 63) r.black_king_side = false;
  };
  touch(m.from);
  touch(m.to);
  next.set_castling(r);

  next.set_en_passant_target(std::nullopt);
  if (moving.kind == PieceKind::kPawn && std::abs(rank_of(m.to) - rank_of(m.from)) == 2) {
    next.set_en_passant_target((m.from + m.to) / 2);
  }
  next.set_side_to_move(opposite(us));
  next.set_ply(b.ply() + 1);
  return next;
}

std::vector<Move> legal_moves_unchecked(const Board& b) {
  std::vector<Move> legal;
  const Color us = b.side_to_move();
  for (const Move& m : pseudo_legal_moves(b)) {
    const Board next = make_move_unchecked(b, m);
    if (!in_check(next, us)) legal.push_back(m);
  }
  return legal;
}

std::uint64_t perft_unchecked(const Board& b, int depth) {
  if (depth == 0) return 1;
  const auto moves = legal_moves_unchecked(b);
  if (depth == 1) return moves.size();
  std::uint64_t nodes = 0;
  for (const Move& m : moves) nodes += perft_unchecked(make_move_unchecked(b, m), depth - 1);
  return nodes;
}

}  // namespace

bool is_square_attacked(const Board& b, Square s, Color by) {
  // Pawns attack diagonally forward, so look one rank "behind" s.
  const int back = by == Color::kWhite ? -1 : 1;
  for (const int df : {-1, 1}) {
    if (auto from = offset(s, {df, back}); from && holds(b, *from, PieceKind::kPawn, by)) {
      return true;
    }
  }
  for (const Delta d : kKnightDeltas) {
    if (auto from = offset(s, d); from && holds(b, *from, PieceKind::kKnight, by)) return true;
  }
  for (const Delta d : kKingDeltas) {
    if (auto from = offset(s, d); from && holds(b, *from, PieceKind::kKing, by)) return true;
  }
  return slider_attacks(b, s, by, kRookDirs, PieceKind::kRook, PieceKind::kQueen) ||
         slider_attacks(b, s, by, kBishopDirs, PieceKind::kBishop, PieceKind::kQueen);
}

bool in_check(const Board& b, Color side) {
  return is_square_attacked(b, find_king(b, side), opposite(side));
}

std::vector<Move> legal_moves(const Board& b) {
  b.validate();
  return legal_moves_unchecked(b);
}

Board apply_move(const Board& b, const Move& m) {
  const auto moves = legal_moves(b);
  if (std::find(moves.begin(), moves.end(), m) == moves.end()) {
    throw InvalidArgument("illegal move " + m.uci() + " in " + b.fen());
  }
  return make_move_unchecked(b, m);
}

Move parse_move(const Board& b, std::string_view uci) {
  for (const Move& m : legal_moves(b)) {
    if (m.uci() == uci) return m;
  }
  throw InvalidArgument("illegal or malformed move " + std::string(uci));
}

std::uint64_t perft(const Board& b, int depth) {
  if (depth < 0) throw InvalidArgument("perft depth must be >= 0");
  b.validate();
  return perft_unchecked(b, depth);
}

std::vector<Move> sample_game(std::uint64_t seed, int max_plies) {
  if (max_plies < 1) throw InvalidArgument("max_plies must be >= 1");
  Rng rng(seed);
  Board board = Board::initial();
  std::vector<Move> moves;
  while (static_cast<int>(moves.size()) < max_plies) {
    const auto legal = legal_moves_unchecked(board);
    if (legal.empty()) break;
    const Move& m = rng.choice(legal);
    board = make_move_unchecked(board, m);
    moves.push_back(m);
  }
  return moves;
}

Board replay(const std::vector<Move>& moves, int plies) {
  if (plies < 0 || plies > static_cast<int>(moves.size())) {
    throw InvalidArgument("replay prefix out of range");
  }
  Board board = Board::initial();
  for (int i = 0; i < plies; ++i) board = apply_move(board, moves[static_cast<std::size_t>(i)]);
  return board;
}

}  // namespace pings::chess
