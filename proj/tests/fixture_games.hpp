#pragma once

// Games rebuilt from the reference prompt examples, shared by the unit and
// acceptance tests.

#include <memory>
#include <string>

#include "pings/orchestrator.hpp"

namespace pings::testing {

using orchestrator::Game;
using namespace orchestrator;

inline Turn turn(int index, std::string text) {
  Turn t;
  t.index = index;
  t.speaker = speaker_for_turn(index);
  t.text = std::move(text);
  t.token_count = static_cast<int>(token_count(t.text));
  return t;
}

inline std::unique_ptr<Game> chess_fixture_game() {
  chess::ChessInstance x;
  x.board_a = chess::Board::initial();
  x.board_b = chess::Board::from_ascii(
      ". n . . q . n r\nr b . p k . b .\n. . p . . . . .\np . . . P p p p\n"
      ". . B P . . . .\n. P . . . . P P\nP . P N K P . .\nR N . Q . R . .");
  return make_chess_game(x, "chess-fixture");
}

inline std::unique_ptr<Game> namegame_fixture_game() {
  const auto& schema = namegame::color_city_schema();
  namegame::NameGameInstance x;
  x.schema_id = schema.id;
  x.db_b = namegame::parse_table(
      "row,name,company,favorite color,favorite musician,city\n"
      "1,Noah,IBM,Mustard Yellow,Wes Montgomery,Chicago\n"
      "2,Joshua,Samsung,Charcoal,Miles Davis,Sydney\n"
      "3,James,HP,Charcoal,Charlie Parker,Rome\n"
      "4,Madison,Google,Mustard Yellow,Thelonious Monk,Berlin\n"
      "5,Elizabeth,Foxconn,Coral,John Coltrane,Rio de Janeiro\n"
      "6,Asher,Amazon,Teal,John Coltrane,Moscow\n"
      "7,Asher,Foxconn,Teal,John Coltrane,Moscow\n"
      "8,Owen,Sony,Peach,Wes Montgomery,London\n"
      "9,Madison,Foxconn,Coral,John Coltrane,New York");
  x.db_a = x.db_b;
  x.size = 9;
  x.common_row_a = x.common_row_b = 1;
  return make_namegame_game(x, "name-game-fixture");
}

inline std::unique_ptr<Game> tangram_fixture_game() {
  selection::SelectionInstance x;
  x.space_id = "default";
  x.candidates = {{{0, 0, 0, 0, 0}}, {{1, 1, 1, 1, 1}}, {{2, 2, 2, 2, 2}}, {{3, 3, 3, 3, 3}}};
  x.target = x.candidates[2];
  x.gold = 2;
  x.attachments.assign(5, "<start_of_image>");
  return make_selection_game(x, "tangram", "tangram-fixture");
}

inline std::unique_ptr<Game> covr_fixture_game() {
  covr::CovrInstance x = covr::generate_instance(11);
  x.surface_text =
      "How many images contain at least 1 women that are watching child that is wearing "
      "helmet?";
  x.attachments = {"<start_of_image>", "<start_of_image>"};
  return make_covr_game(x, "covr-fixture");
}

}  // namespace pings::testing
