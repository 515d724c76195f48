#include <cctype>
#include <sstream>
#include <string>

#include "pings/chess.hpp"

namespace pings::chess {

namespace {

char piece_letter(Piece p) {
  static constexpr char kLetters[] = {'p', 'n', 'b', 'r', 'q', 'k'};
  const char c = kLetters[static_cast<int>(p.kind)];
  return p.color == Color::kWhite ? static_cast<char>(std::toupper(c)) : c;
}

std::optional<Piece> piece_from_letter(char c) {
  const Color color = std::isupper(static_cast<unsigned char>(c)) ? Color::kWhite : Color::kBlack;
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'p': return Piece{PieceKind::kPawn, color};
    case 'n': return Piece{PieceKind::kKnight, color};
    case 'b': return Piece{PieceKind::kBishop, color};
    case 'r': return Piece{PieceKind::kRook, color};
    case 'q': return Piece{PieceKind::kQueen, color};
    case 'k': return Piece{PieceKind::kKing, color};
    default: return std::nullopt;
  }
}

}  // namespace

std::string square_name(Square s) {
  return {static_cast<char>('a' + file_of(s)), static_cast<char>('1' + rank_of(s))};
}

Square parse_square(std::string_view name) {
  if (name.size() != 2 || name[0] < 'a' || name[0] > 'h' || name[1] < '1' || name[1] > '8') {
    throw InvalidArgument("bad square: " + std::string(name));
  }
  return make_square(name[0] - 'a', name[1] - '1');
}

std::string Move::uci() const {
  std::string s = square_name(from) + square_name(to);
  if (promotion) s += static_cast<char>(std::tolower(piece_letter({*promotion, Color::kBlack})));
  return s;
}

Board Board::initial() {
  return from_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

Board Board::from_fen(std::string_view fen) {
  std::istringstream in{std::string(fen)};
  std::string placement, side, castling = "-", ep = "-";
  int halfmove = 0, fullmove = 1;
  in >> placement >> side >> castling >> ep >> halfmove >> fullmove;
  if (placement.empty() || (side != "w" && side != "b")) {
    throw InvalidArgument("bad FEN: " + std::string(fen));
  }
  Board b;
  int rank = 7, file = 0;
  for (char c : placement) {
    if (c == '/') {
      --rank;
      file = 0;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      file += c - '0';
    } else {
      auto p = piece_from_letter(c);
      if (!p || rank < 0 || file > 7) throw InvalidArgument("bad FEN placement");
      b.set(make_square(file, rank), p);
      ++file;
    }
  }
  b.side_to_move_ = side == "w" ? Color::kWhite : Color::kBlack;
  for (char c : castling) {
    if (c == 'K') b.castling_.white_king_side = true;
    if (c == 'Q') b.castling_.white_queen_side = true;
    if (c == 'k') b.castling_.black_king_side = true;
    if (c == 'q') b.castling_.black_queen_side = true;
  }
  if (ep != "-") b.en_passant_ = parse_square(ep);
  b.ply_ = 2 * (fullmove - 1) + (b.side_to_move_ == Color::kBlack ? 1 : 0);
  return b;
}

Board Board::from_ascii(std::string_view diagram, Color side_to_move, int ply) {
  Board b;
  b.side_to_move_ = side_to_move;
  b.ply_ = ply;
  int rank = 7;
  std::size_t pos = 0;
  while (pos <= diagram.size() && rank >= 0) {
    std::size_t end = diagram.find('\n', pos);
    if (end == std::string_view::npos) end = diagram.size();
    const auto cells = tokenize(diagram.substr(pos, end - pos));
    pos = end + 1;
    if (cells.empty()) continue;
    if (cells.size() != 8) throw InvalidArgument("diagram rows need 8 squares");
    for (int file = 0; file < 8; ++file) {
      const auto cell = cells[static_cast<std::size_t>(file)];
      if (cell.size() != 1) throw InvalidArgument("bad diagram square");
      if (cell[0] == '.') continue;
      auto p = piece_from_letter(cell[0]);
      if (!p) throw InvalidArgument("bad diagram piece");
      b.set(make_square(file, rank), p);
    }
    --rank;
  }
  if (rank != -1) throw InvalidArgument("diagram needs 8 rows");
  return b;
}

std::string Board::fen() const {
  std::string out;
  for (int rank = 7; rank >= 0; --rank) {
    int empty = 0;
    for (int file = 0; file < 8; ++file) {
      const auto p = at(make_square(file, rank));
      if (!p) {
        ++empty;
        continue;
      }
      if (empty > 0) out += static_cast<char>('0' + empty);
      empty = 0;
      out += piece_letter(*p);
    }
    if (empty > 0) out += static_cast<char>('0' + empty);
    if (rank > 0) out += '/';
  }
  out += side_to_move_ == Color::kWhite ? " w " : " b ";
  std::string rights;
  if (castling_.white_king_side) rights += 'K';
  if (castling_.white_queen_side) rights += 'Q';
  if (castling_.black_king_side) rights += 'k';
  if (castling_.black_queen_side) rights += 'q';
  out += rights.empty() ? "-" : rights;
  out += ' ';
  out += en_passant_ ? square_name(*en_passant_) : "-";
  out += " 0 " + std::to_string(ply_ / 2 + 1);
  return out;
}

void Board::validate() const {
  int white_kings = 0, black_kings = 0;
  for (Square s = 0; s < 64; ++s) {
    const auto p = at(s);
    if (!p) continue;
    if (p->kind == PieceKind::kKing) (p->color == Color::kWhite ? white_kings : black_kings)++;
    if (p->kind == PieceKind::kPawn && (rank_of(s) == 0 || rank_of(s) == 7)) {
      throw InvalidArgument("pawn on first or last rank at " + square_name(s));
    }
  }
  if (white_kings != 1 || black_kings != 1) {
    throw InvalidArgument("board needs exactly one king per color");
  }
  if (en_passant_) {
    const Square ep = *en_passant_;
    // The side that just moved pushed a pawn two squares past `ep`.
    const bool white_to_move = side_to_move_ == Color::kWhite;
    const int expected_rank = white_to_move ? 5 : 2;
    const Square pushed = ep + (white_to_move ? -8 : 8);
    const auto pawn = at(pushed);
    if (rank_of(ep) != expected_rank || at(ep) || !pawn ||
        *pawn != Piece{PieceKind::kPawn, opposite(side_to_move_)}) {
      throw InvalidArgument("inconsistent en passant target " + square_name(ep));
    }
  }
  const auto check_rook_king = [&](bool right, Square king, Square rook, Color c) {
    if (!right) return;
    if (at(king) != Piece{PieceKind::kKing, c} || at(rook) != Piece{PieceKind::kRook, c}) {
      throw InvalidArgument("castling right without king and rook at home");
    }
  };
  check_rook_king(castling_.white_king_side, 4, 7, Color::kWhite);
  check_rook_king(castling_.white_queen_side, 4, 0, Color::kWhite);
  check_rook_king(castling_.black_king_side, 60, 63, Color::kBlack);
  check_rook_king(castling_.black_queen_side, 60, 56, Color::kBlack);
}

std::string render_ascii(const Board& b) {
  std::string out;
  for (int rank = 7; rank >= 0; --rank) {
    for (int file = 0; file < 8; ++file) {
      if (file > 0) out += ' ';
      const auto p = b.at(make_square(file, rank));
      out += p ? piece_letter(*p) : '.';
    }
    if (rank > 0) out += '\n';
  }
  return out;
}

BoardSummary board_summary(const Board& b) {
  BoardSummary s;
  for (Square sq = 0; sq < 64; ++sq) {
    const auto p = b.at(sq);
    if (!p) continue;
    const int rank = rank_of(sq) + 1;
    if (p->color == Color::kWhite) {
      ++s.white_count;
      if (p->kind == PieceKind::kPawn &&
          (!s.white_pawn_max_rank || rank > *s.white_pawn_max_rank)) {
        s.white_pawn_max_rank = rank;
      }
    } else {
      ++s.black_count;
      if (p->kind == PieceKind::kPawn &&
          (!s.black_pawn_min_rank || rank < *s.black_pawn_min_rank)) {
        s.black_pawn_min_rank = rank;
      }
    }
  }
  return s;
}

}  // namespace pings::chess
