#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "pings/agents.hpp"

namespace pings::agents {

namespace {

std::string rank_text(const std::optional<int>& r) { return r ? std::to_string(*r) : "none"; }

std::optional<int> rank_value(const std::string& s) {
  if (s == "none") return std::nullopt;
  return std::stoi(s);
}

const Turn* last_partner_turn(const AgentContext& ctx) {
  for (auto it = ctx.history.rbegin(); it != ctx.history.rend(); ++it) {
    if (it->speaker != ctx.speaker) return &*it;
  }
  return nullptr;
}

std::string coin_answer(const AgentContext& ctx) {
  Rng rng(derive_seed(ctx.seed, "coin" + std::to_string(ctx.turn_index)));
  return rng.bernoulli(0.5) ? "Guessing. _MINE_" : "Guessing. _YOURS_";
}

std::optional<int> find_row(const namegame::Database& db, const namegame::PersonRecord& r) {
  const auto it = std::find(db.begin(), db.end(), r);
  if (it == db.end()) return std::nullopt;
  return static_cast<int>(it - db.begin()) + 1;
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + sep.size();
  }
  return out;
}

}  // namespace

// ---- chess -----------------------------------------------------------------

std::string chess_summary_text(const chess::BoardSummary& s) {
  return "My board: " + std::to_string(s.white_count) + " white, " +
         std::to_string(s.black_count) + " black; pawn ranks " + rank_text(s.white_pawn_max_rank) +
         " and " + rank_text(s.black_pawn_min_rank) + ".";
}

std::optional<chess::BoardSummary> parse_chess_summary(std::string_view text) {
  static const std::regex kPattern(
      R"(My board: (\d+) white, (\d+) black; pawn ranks (\d+|none) and (\d+|none)\.)");
  const std::string s(text);
  std::smatch m;
  if (!std::regex_search(s, m, kPattern)) return std::nullopt;
  chess::BoardSummary out;
  out.white_count = std::stoi(m[1].str());
  out.black_count = std::stoi(m[2].str());
  out.white_pawn_max_rank = rank_value(m[3].str());
  out.black_pawn_min_rank = rank_value(m[4].str());
  return out;
}

std::string scripted_chess(const ChessView& view, const AgentContext& ctx) {
  const auto own = chess::board_summary(view.board);
  std::optional<chess::BoardSummary> partner;
  for (const Turn& t : ctx.history) {
    if (t.speaker == ctx.speaker) continue;
    if (auto s = parse_chess_summary(t.text)) partner = s;
  }
  const bool final_turn = ctx.turn_index >= ctx.turn_budget;
  if (!partner) return final_turn ? coin_answer(ctx) : chess_summary_text(own);

  // > 0: own board later, < 0: own board earlier.
  int later = 0;
  const int own_total = own.white_count + own.black_count;
  const int partner_total = partner->white_count + partner->black_count;
  if (own_total != partner_total) {
    later = own_total < partner_total ? 1 : -1;
  } else if (own.white_pawn_max_rank && partner->white_pawn_max_rank &&
             *own.white_pawn_max_rank != *partner->white_pawn_max_rank) {
    later = *own.white_pawn_max_rank > *partner->white_pawn_max_rank ? 1 : -1;
  } else if (own.black_pawn_min_rank && partner->black_pawn_min_rank &&
             *own.black_pawn_min_rank != *partner->black_pawn_min_rank) {
    later = *own.black_pawn_min_rank < *partner->black_pawn_min_rank ? 1 : -1;
  }
  if (later > 0) return "Your board came first. _YOURS_";
  if (later < 0) return "My board came first. _MINE_";
  if (final_turn) return coin_answer(ctx);
  return "Same counts and pawns. Please list your back rank.";
}

// ---- name-game ---------------------------------------------------------------

std::string guess_one_proposal(const namegame::PersonRecord& r) {
  std::string out;
  for (const auto& f : r.fields) {
    if (!out.empty()) out += ", ";
    out += f;
  }
  return out + "?";
}

std::optional<namegame::PersonRecord> parse_guess_one_proposal(std::string_view text) {
  std::string s(text);
  const std::string prefix = "No match. ";
  if (s.rfind(prefix, 0) == 0) s.erase(0, prefix.size());
  if (s.empty() || s.back() != '?') return std::nullopt;
  s.pop_back();
  auto fields = split(s, ", ");
  if (fields.size() != static_cast<std::size_t>(namegame::kFields)) return std::nullopt;
  return namegame::PersonRecord{std::move(fields)};
}

std::string scripted_guess_one(const NameGameView& view, const AgentContext& ctx) {
  const int size = static_cast<int>(view.db.size());
  const Turn* partner = last_partner_turn(ctx);
  std::optional<namegame::PersonRecord> proposal;
  if (partner) proposal = parse_guess_one_proposal(partner->text);
  if (proposal) {
    if (const auto row = find_row(view.db, *proposal)) return "SELECT ROW " + std::to_string(*row);
  }

  std::set<int> proposed;
  for (const Turn& t : ctx.history) {
    if (t.speaker != ctx.speaker) continue;
    if (const auto p = parse_guess_one_proposal(t.text)) {
      if (const auto row = find_row(view.db, *p)) proposed.insert(*row);
    }
  }
  if (static_cast<int>(proposed.size()) >= size) {
    // nothing left to offer; only reachable when t/2 exceeds the table size
    Rng rng(derive_seed(ctx.seed, "exhausted"));
    return "SELECT ROW " + std::to_string(rng.uniform_int(1, size));
  }
  if (ctx.turn_index >= ctx.turn_budget) {
    const int row = namegame::guess_one_next(size, proposed, derive_seed(ctx.seed, "final"));
    return "SELECT ROW " + std::to_string(row);
  }
  const int row = namegame::guess_one_next(size, proposed, ctx.seed);
  const std::string text = guess_one_proposal(view.db[static_cast<std::size_t>(row - 1)]);
  return partner ? "No match. " + text : text;
}

// ---- selection -------------------------------------------------------------

std::string scripted_describer(const SelectionDescriberView& view, const AgentContext& ctx) {
  const auto space = selection::space_by_id(view.space_id);
  const int per_turn = ctx.stated_word_limit / 2;
  if (per_turn < 1) return "";

  std::set<int> described;
  for (const Turn& t : ctx.history) {
    if (t.speaker != ctx.speaker) continue;
    for (const auto& [f, v] : selection::parse_feature_statements(t.text, space)) {
      described.insert(f);
    }
  }
  std::vector<int> requested;
  if (const Turn* partner = last_partner_turn(ctx)) {
    const auto pos = partner->text.find("Ask: ");
    if (pos != std::string::npos) {
      for (const auto& name : split(partner->text.substr(pos + 5), ", ")) {
        if (const auto f = space.find(name)) requested.push_back(*f);
      }
    }
  }

  std::vector<int> out;
  const auto add = [&](int f) {
    if (static_cast<int>(out.size()) < per_turn &&
        std::find(out.begin(), out.end(), f) == out.end()) {
      out.push_back(f);
    }
  };
  for (int f : requested) {
    if (!described.count(f)) add(f);
  }
  for (int f = 0; f < static_cast<int>(space.size()); ++f) {
    if (!described.count(f)) add(f);
  }
  if (out.empty()) {
    for (int f : requested) add(f);
  }
  if (out.empty()) return "All said.";
  return selection::render_features(view.target, space, out);
}

std::string scripted_guesser(const SelectionGuesserView& view, const AgentContext& ctx) {
  const auto space = selection::space_by_id(view.space_id);
  std::map<int, int> heard;
  for (const Turn& t : ctx.history) {
    if (t.speaker == ctx.speaker) continue;
    for (const auto& [f, v] : selection::parse_feature_statements(t.text, space)) heard[f] = v;
  }
  std::vector<int> alive;
  for (std::size_t i = 0; i < view.candidates.size(); ++i) {
    if (selection::consistent(view.candidates[i], heard)) alive.push_back(static_cast<int>(i));
  }
  if (alive.empty()) return "ANSWER: No match";
  if ((alive.size() == 1 && heard.size() == space.size()) || ctx.last_own_turn()) {
    return "ANSWER: Image " + std::to_string(alive.front());
  }

  // Unheard features on which the live candidates disagree, most values first.
  std::vector<std::pair<int, int>> ranked;  // (-distinct values, feature)
  for (int f = 0; f < static_cast<int>(space.size()); ++f) {
    if (heard.count(f)) continue;
    std::set<int> values;
    for (int c : alive) values.insert(view.candidates[static_cast<std::size_t>(c)].values[f]);
    if (values.size() > 1) ranked.emplace_back(-static_cast<int>(values.size()), f);
  }
  std::sort(ranked.begin(), ranked.end());
  const int cap = std::min(ctx.stated_word_limit - 1, ctx.stated_word_limit / 2);
  if (ranked.empty() || cap < 1) return ctx.stated_word_limit >= 2 ? "Go on." : "";
  std::string out = "Ask:";
  for (int i = 0; i < static_cast<int>(ranked.size()) && i < cap; ++i) {
    out += (i == 0 ? " " : ", ") + space.features[static_cast<std::size_t>(ranked[i].second)].name;
  }
  return out;
}

// ---- covr ------------------------------------------------------------------

std::string scripted_covr(const CovrView& view, const AgentContext& ctx) {
  const auto& q = view.query;
  const bool own1 = !covr::eval_descriptor(q.first, view.scene).empty();
  const bool own2 = q.second && !covr::eval_descriptor(*q.second, view.scene).empty();
  const bool two = q.form == covr::QueryForm::kExistsBoth;

  std::optional<std::pair<bool, bool>> partner;
  if (const Turn* t = last_partner_turn(ctx)) {
    static const std::regex kBits(R"(d1: (yes|no)(?:; d2: (yes|no))?)");
    std::smatch m;
    if (std::regex_search(t->text, m, kBits)) {
      partner = std::make_pair(m[1].str() == "yes", m[2].matched && m[2].str() == "yes");
    }
  }
  const bool final_turn = ctx.turn_index >= ctx.turn_budget;
  if (!partner && !final_turn) {
    std::string out = std::string("d1: ") + (own1 ? "yes" : "no");
    if (two) out += std::string("; d2: ") + (own2 ? "yes" : "no");
    return out + ".";
  }
  const auto [p1, p2] = partner.value_or(std::make_pair(false, false));
  std::string answer;
  switch (q.form) {
    case covr::QueryForm::kExistsEither:
      answer = own1 || p1 ? "True" : "False";
      break;
    case covr::QueryForm::kExistsBoth:
      answer = (q.strict ? (own1 && p2) || (p1 && own2) : (own1 || p1) && (own2 || p2)) ? "True"
                                                                                      : "False";
      break;
    case covr::QueryForm::kCountImages:
      answer = std::to_string(static_cast<int>(own1) + static_cast<int>(p1));
      break;
  }
  return "ANSWER: " + answer;
}

// ---- dispatch ----------------------------------------------------------------

std::string ScriptedAgent::next_utterance(const AgentContext& ctx) {
  struct Visitor {
    const AgentContext& ctx;
    std::string operator()(const std::monostate&) const {
      throw AgentError("scripted agent needs a game view");
    }
    std::string operator()(const ChessView& v) const { return scripted_chess(v, ctx); }
    std::string operator()(const NameGameView& v) const { return scripted_guess_one(v, ctx); }
    std::string operator()(const SelectionDescriberView& v) const {
      return scripted_describer(v, ctx);
    }
    std::string operator()(const SelectionGuesserView& v) const {
      return scripted_guesser(v, ctx);
    }
    std::string operator()(const CovrView& v) const { return scripted_covr(v, ctx); }
  };
  return std::visit(Visitor{ctx}, ctx.view);
}

// ---- replay --------------------------------------------------------------------

ReplayAgent::ReplayAgent(const Transcript& transcript, Speaker speaker)
    : id_("replay") {
  for (const Turn& t : transcript.turns) {
    if (t.speaker == speaker) turns_.emplace_back(t.index, t.text);
  }
}

std::string ReplayAgent::next_utterance(const AgentContext& ctx) {
  for (const auto& [index, text] : turns_) {
    if (index == ctx.turn_index) return text;
  }
  throw Exhausted("no recorded turn " + std::to_string(ctx.turn_index) + " for " +
                  std::string(to_string(ctx.speaker)));
}

}  // namespace pings::agents
