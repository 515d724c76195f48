#include <cstdio>

#include "pings/orchestrator.hpp"

namespace pings::orchestrator {

namespace {

std::string name_of(Speaker s) { return s == Speaker::kAlice ? "Alice" : "Bob"; }

std::string hex_id(std::string_view task, std::uint64_t seed) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(seed));
  return std::string(task) + "-" + buf;
}

std::string words(const BudgetConfig& b) { return std::to_string(b.stated_word_limit); }

// ---- chess ---------------------------------------------------------------

constexpr std::string_view kChessExampleBoard =
    "r n b q k b n r\n"
    "p p . p p p p p\n"
    ". . . . . . . .\n"
    ". . p . . . . .\n"
    ". . . P . . . .\n"
    "N . . . . . . .\n"
    "P P P . P P P P\n"
    "R . B Q K B N R";

class ChessGame : public Game {
 public:
  ChessGame(chess::ChessInstance x, std::string id) : x_(std::move(x)), id_(std::move(id)) {}

  std::string task() const override { return "chess"; }
  std::string instance_id() const override { return id_; }
  Json instance_json() const override { return to_json(x_); }

  std::string instructions(Speaker r, const BudgetConfig& b) const override {
    std::string s = "Your name is " + name_of(r) + " and my name is " + name_of(other(r)) +
                    ". You are a chess expert. We are going to talk about chess games using "
                    "diagrams in which the white pieces are shown by upper-case letters like "
                    "`K' and `Q', and the black pieces are shown by lower-case letters like "
                    "`k' and `q'. Empty squares are shown as periods, `.'.";
    s += "\n\nFor example, in this board, White has moved its pawn to D4 and its knight to A3, "
         "while Black has moved its pawn to C5:\n\n";
    s += kChessExampleBoard;
    s += "\n\nEach of us will be shown a board that the other player cannot see. The two boards "
         "are from the same game of chess. Our task is to determine which board came earlier "
         "in the game. To accomplish this, we must describe our boards to each other.";
    s += "\n\nYou can use only " + words(b) +
         " words per turn, so you cannot fully specify the locations of all pieces. Instead, "
         "describe the key features that will help us determine which board came first.";
    s += "\n\nAfter discussing it, if you think your board came first, say `_MINE_'; if you "
         "think my board came first, say `_YOURS_'. Otherwise, you can continue to describe "
         "your board to me, or ask questions about my board.";
    s += "\n\nIt is important to get this right, so let's discuss until we are sure. However, if "
         "I say this is your final turn, then you **must** give a final answer that is either "
         "`_MINE_' or `_YOURS_'.";
    s += "\n\nHere is your board, which I cannot see:\n\n" + chess::render_ascii(x_.board_for(r));
    return s;
  }

  std::string final_block(Speaker) const override {
    return "This is your final turn, so you must give a final answer that is either `_MINE_' "
           "or `_YOURS_'.";
  }
  bool label_trailing_space() const override { return true; }
  bool eligible(Speaker) const override { return true; }

  std::optional<std::string> parse(std::string_view u) const override {
    const auto a = chess::parse_answer(u);
    if (!a) return std::nullopt;
    return std::string(chess::to_string(*a));
  }
  bool score(Speaker by, const std::string& parsed) const override {
    const auto a = chess::parse_answer(parsed);
    return a && chess::score(x_, by, *a);
  }
  agents::View view(Speaker s) const override { return agents::ChessView{x_.board_for(s)}; }

 private:
  chess::ChessInstance x_;
  std::string id_;
};

// ---- name-game -------------------------------------------------------------

class NameGame : public Game {
 public:
  NameGame(namegame::NameGameInstance x, std::string id) : x_(std::move(x)), id_(std::move(id)) {}

  std::string task() const override { return "name-game"; }
  std::string instance_id() const override { return id_; }
  Json instance_json() const override { return to_json(x_); }

  std::string instructions(Speaker r, const BudgetConfig& b) const override {
    const auto& schema = namegame::schema_by_id(x_.schema_id);
    // The fence really is opened with backticks and closed with quotes.
    std::string s = "# INSTRUCTIONS\n\nYour name is " + name_of(r) +
                    ", and we are going to play a conversational game. You have a database of "
                    "people who you know: \n\n```\n" +
                    namegame::render_table(x_.db_for(r), schema) + "\n'''\n\n";
    s += "I might know one of the same people. Let's talk to find out whom we both know. You "
         "can ask questions or describe some of the people you know. If I ask you a question, "
         "don't forget to answer it.";
    s += "\n\nTo match, *all attributes* of the row must match exactly.";
    s += "\n\nIf you are sure you have identified a person that we both know, output only "
         "`SELECT ROW i', with `i' indicating the row number of your mutual friend. Only answer "
         "when you are completely sure, and talk it over until then. You can use only " +
         words(b) + " words per turn, so be concise.";
    s += "\n\nIf I say that this is your final turn, then you **must** give a final answer in "
         "the format of `SELECT ROW i'.";
    return s;
  }

  std::string final_block(Speaker r) const override {
    return "This is your final turn, so you must give a final answer. Based on the "
           "conversation, make a guess and output `SELECT ROW i'. Don't say anything else: do "
           "not explain or ask any questions. Your next words **must** be `SELECT ROW' and your "
           "last word must be a number between 1 and " +
           std::to_string(x_.db_for(r).size()) + ".";
  }
  bool eligible(Speaker) const override { return true; }

  std::optional<std::string> parse(std::string_view u) const override {
    const auto row = namegame::parse_answer(u);
    if (!row) return std::nullopt;
    return "SELECT ROW " + std::to_string(*row);
  }
  bool score(Speaker by, const std::string& parsed) const override {
    const auto row = namegame::parse_answer(parsed);
    return row && namegame::score(x_, by, *row);
  }
  agents::View view(Speaker s) const override {
    return agents::NameGameView{x_.db_for(s), x_.schema_id};
  }

 private:
  namegame::NameGameInstance x_;
  std::string id_;
};

// ---- image selection -------------------------------------------------------

class SelectionGame : public Game {
 public:
  SelectionGame(selection::SelectionInstance x, std::string task, std::string id)
      : x_(std::move(x)),
        space_(selection::space_by_id(x_.space_id)),
        task_(std::move(task)),
        id_(std::move(id)) {}

  std::string task() const override { return task_; }
  std::string instance_id() const override { return id_; }
  Json instance_json() const override { return to_json(x_); }

  std::string instructions(Speaker r, const BudgetConfig& b) const override {
    if (r == Speaker::kAlice) {
      std::string s =
          "# INSTRUCTIONS\n\nWe are playing an interactive game, which involves having a "
          "conversation. In this game you are the DESCRIBER and I am the GUESSER. I have a "
          "numbered list of images, and you have a single image, which may or may not be in my "
          "list. Describe your image so that I can tell which of my images it is, or that none "
          "of them match. If I ask you a question about your image, answer it.";
      s += "\n\nIn each turn you can use no more than " + words(b) +
           " words, so be concise. Describe the features that are most likely to tell the "
           "images apart.";
      s += "\n\n# Your image\n\n" +
           (x_.attachments.empty() ? selection::render_item(x_.target, space_)
                                   : x_.attachments.front());
      return s;
    }
    std::string s =
        "# INSTRUCTIONS\n\nWe are playing an interactive game, which involves having a "
        "conversation. In this game you are the GUESSER and I am the DESCRIBER. I will show "
        "you a numbered list of images. Next, I will describe an image, which may be in your "
        "list. If you are sure that the image I am describing is in our list, respond with the "
        "number of the image I am describing.";
    s += "\n\nFor example, to identify image 1, your output should be formatted as `ANSWER: "
         "Image 1' and nothing else.";
    s += "\n\nSometimes the image I am describing will not be in your list. If you are sure "
         "that none of the images in your list match mine, respond with `ANSWER: No match' and "
         "nothing else.";
    s += "\n\nIf you are not sure which image matches the description, you can ask me a "
         "clarification question or tell me about your choices. In each turn you can use no "
         "more than " +
         words(b) + " words, so be concise.";
    s += "\n\nIt's better to ask for clarification than to guess incorrectly, so don't be "
         "afraid to ask me for more information if you are not sure!";
    s += "\n\n# Images\n";
    for (std::size_t i = 0; i < x_.candidates.size(); ++i) {
      s += "\nImage " + std::to_string(i) + ": " +
           (x_.attachments.empty() ? selection::render_item(x_.candidates[i], space_)
                                   : x_.attachments[i + 1]);
    }
    return s;
  }

  std::string final_block(Speaker r) const override {
    if (r == Speaker::kAlice) {
      return "This is your final turn, so tell me anything else I need to know about your "
             "image.";
    }
    return "This is your final turn, so you must give a final answer. Output `ANSWER: Image i' "
           "with the number of the image I described, or `ANSWER: No match'. Don't say "
           "anything else.";
  }
  bool eligible(Speaker s) const override { return s == Speaker::kBob; }

  std::optional<std::string> parse(std::string_view u) const override {
    const auto a = selection::parse_answer(u, static_cast<int>(x_.candidates.size()));
    if (!a) return std::nullopt;
    return selection::to_string(*a);
  }
  bool score(Speaker, const std::string& parsed) const override {
    const auto a =
        selection::parse_answer("ANSWER: " + parsed, static_cast<int>(x_.candidates.size()));
    return a && selection::score(x_, *a);
  }
  agents::View view(Speaker s) const override {
    if (s == Speaker::kAlice) return agents::SelectionDescriberView{x_.target, x_.space_id};
    return agents::SelectionGuesserView{x_.candidates, x_.space_id};
  }
  std::vector<std::string> attachments(Speaker s) const override {
    if (x_.attachments.empty()) return {};
    if (s == Speaker::kAlice) return {x_.attachments.front()};
    return {x_.attachments.begin() + 1, x_.attachments.end()};
  }

 private:
  selection::SelectionInstance x_;
  selection::FeatureSpace space_;
  std::string task_;
  std::string id_;
};

// ---- covr ------------------------------------------------------------------

class CovrGame : public Game {
 public:
  CovrGame(covr::CovrInstance x, std::string id) : x_(std::move(x)), id_(std::move(id)) {}

  std::string task() const override { return "covr"; }
  std::string instance_id() const override { return id_; }
  Json instance_json() const override { return to_json(x_); }

  std::string instructions(Speaker r, const BudgetConfig& b) const override {
    const std::string mine = r == Speaker::kAlice ? "left" : "right";
    const std::string theirs = r == Speaker::kAlice ? "right" : "left";
    std::string s = "# INSTRUCTIONS\n\nYou are " + name_of(r) +
                    ", and you are playing a collaborative game that involves having a "
                    "conversation with another player about two images. You can see the `" +
                    mine + "' image and the other player can see the `" + theirs + "' image.";
    s += "\n\nHere is the `" + mine + "' image: " + image(r);
    s += "\n\nWith the help of the other player, you have to answer the question:\n\"" +
         x_.surface_text + "\"";
    s += "\n\nTo do this, you will have a conversation with the other player, for example by "
         "sharing information about your image or asking about the other player's image. In "
         "each turn you can use at most " +
         words(b) + " words, so be concise!";
    s += "\n\nWhen you are ready, output `ANSWER:' followed by your answer to the question. "
         "Your answer should be a *single* word, a number, or (rarely) a short phrase, "
         "e.g.:\n\n`ANSWER: 4'\n`ANSWER: True'\n`ANSWER: next door'";
    s += "\n\nIf it is a true/false question, make sure to output `True' or `False'.";
    return s;
  }

  std::string final_block(Speaker) const override {
    return "This is your final turn, so you must give a final answer. Output `ANSWER:' "
           "followed by your answer to the question, and nothing else.";
  }
  bool eligible(Speaker) const override { return true; }

  std::optional<std::string> parse(std::string_view u) const override {
    return covr::parse_answer(u);
  }
  bool score(Speaker, const std::string& parsed) const override {
    return covr::score(x_, parsed);
  }
  agents::View view(Speaker s) const override {
    return agents::CovrView{s == Speaker::kAlice ? x_.scene_a : x_.scene_b, x_.query};
  }
  std::vector<std::string> attachments(Speaker s) const override {
    if (x_.attachments.empty()) return {};
    return {x_.attachments[s == Speaker::kAlice ? 0 : 1]};
  }

 private:
  std::string image(Speaker r) const {
    if (!x_.attachments.empty()) return x_.attachments[r == Speaker::kAlice ? 0 : 1];
    return covr::render_scene(r == Speaker::kAlice ? x_.scene_a : x_.scene_b);
  }

  covr::CovrInstance x_;
  std::string id_;
};

}  // namespace

const std::vector<std::string>& task_ids() {
  static const std::vector<std::string> ids = {"chess", "name-game", "covr", "md3", "tangram"};
  return ids;
}

std::unique_ptr<Game> make_chess_game(chess::ChessInstance instance, std::string id) {
  if (id.empty()) id = hex_id("chess", instance.seed);
  return std::make_unique<ChessGame>(std::move(instance), std::move(id));
}

std::unique_ptr<Game> make_namegame_game(namegame::NameGameInstance instance, std::string id) {
  if (id.empty()) id = hex_id("name-game", instance.seed);
  return std::make_unique<NameGame>(std::move(instance), std::move(id));
}

std::unique_ptr<Game> make_selection_game(selection::SelectionInstance instance, std::string task,
                                          std::string id) {
  if (task != "md3" && task != "tangram") throw InvalidArgument("not a selection task: " + task);
  if (id.empty()) id = hex_id(task, instance.seed);
  return std::make_unique<SelectionGame>(std::move(instance), std::move(task), std::move(id));
}

std::unique_ptr<Game> make_covr_game(covr::CovrInstance instance, std::string id) {
  if (id.empty()) id = hex_id("covr", instance.seed);
  return std::make_unique<CovrGame>(std::move(instance), std::move(id));
}

std::unique_ptr<Game> game_from_json(std::string_view task, const Json& j, std::string id) {
  if (task == "chess") return make_chess_game(chess_instance_from_json(j), std::move(id));
  if (task == "name-game") return make_namegame_game(namegame_instance_from_json(j), std::move(id));
  if (task == "covr") return make_covr_game(covr_instance_from_json(j), std::move(id));
  if (task == "md3" || task == "tangram") {
    return make_selection_game(selection_instance_from_json(j), std::string(task), std::move(id));
  }
  throw InvalidArgument("unknown task: " + std::string(task));
}

std::unique_ptr<Game> generate_game(std::string_view task, std::uint64_t seed) {
  if (task == "chess") return make_chess_game(chess::make_instance(seed));
  if (task == "name-game") return make_namegame_game(namegame::generate_instance(seed, 9));
  if (task == "covr") return make_covr_game(covr::generate_instance(seed));
  if (task == "md3" || task == "tangram") {
    selection::SelectionConfig config;
    config.k = task == "md3" ? 6 : 4;
    return make_selection_game(selection::generate_instance(seed, config), std::string(task));
  }
  throw InvalidArgument("unknown task: " + std::string(task));
}

std::string render_history(const std::vector<Turn>& history, Speaker recipient) {
  std::string out;
  for (const Turn& t : history) {
    if (!out.empty()) out += '\n';
    out += std::to_string(t.index) + (t.speaker == recipient ? ". YOU: " : ". ME: ") + t.text;
  }
  return out;
}

std::string build_prompt(const Game& game, const std::vector<Turn>& history, int turn_index,
                         const BudgetConfig& budget) {
  const int t = budget.turn_budget;
  if (turn_index < 1 || turn_index > t) throw InvalidArgument("turn index outside the budget");
  const Speaker r = speaker_for_turn(turn_index);

  std::string s = game.instructions(r, budget);
  s += "\n\n# CONVERSATION\n\n";
  if (!history.empty()) {
    s += "Here is our conversation history.\n\n" + render_history(history, r) + "\n\n";
  }
  if (turn_index == t) return s + game.final_block(r);
  if (turn_index == t - 1) s += std::string(kPenultimateWarning) + "\n\n";
  s += "You have " + std::to_string(t - (turn_index - 1)) + " turns left.\n\n";
  s += std::to_string(turn_index) + (game.label_trailing_space() ? ". YOU: " : ". YOU:");
  return s;
}

}  // namespace pings::orchestrator
