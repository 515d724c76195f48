#include <algorithm>
#include <cctype>
#include <regex>

#include "pings/chess.hpp"
#include "pings/data.hpp"
#include "pings/metrics.hpp"
#include "pings/orchestrator.hpp"

namespace pings::metrics {

namespace {

std::vector<std::string> split_words(std::string_view phrase) { return normalize_tokens(phrase); }

// Start indices where `needle` occurs as a contiguous token run.
std::vector<std::size_t> find_runs(const std::vector<std::string>& hay,
                                   const std::vector<std::string>& needle) {
  std::vector<std::size_t> out;
  if (needle.empty() || needle.size() > hay.size()) return out;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i))) {
      out.push_back(i);
    }
  }
  return out;
}

bool has_sentinel(std::string_view text) {
  return text.find("_MINE_") != std::string_view::npos ||
         text.find("_YOURS_") != std::string_view::npos;
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::kMine ? "mine" : "yours"; }

std::vector<ProposalEvent> detect_proposals(const Transcript& t, const ProposalRules& rules) {
  struct Subject {
    std::vector<std::string> words;
    std::string text;
    bool mine;
  };
  struct Predicate {
    std::vector<std::string> words;
    std::string text;
    bool early;
  };
  std::vector<Subject> subjects;
  for (const auto& s : rules.my_subjects) subjects.push_back({split_words(s), s, true});
  for (const auto& s : rules.your_subjects) subjects.push_back({split_words(s), s, false});
  std::vector<Predicate> predicates;
  for (const auto& p : rules.early_predicates) predicates.push_back({split_words(p), p, true});
  for (const auto& p : rules.late_predicates) predicates.push_back({split_words(p), p, false});

  std::vector<ProposalEvent> out;
  for (std::size_t i = 0; i + 1 < t.turns.size(); ++i) {
    const Turn& turn = t.turns[i];
    if (has_sentinel(turn.text)) continue;
    const auto words = normalize_tokens(turn.text);
    std::optional<ProposalEvent> last;
    std::size_t last_pos = 0;
    for (const auto& s : subjects) {
      for (std::size_t si : find_runs(words, s.words)) {
        const std::size_t end = si + s.words.size();
        for (const auto& p : predicates) {
          for (std::size_t pi : find_runs(words, p.words)) {
            if (pi < end || pi - end > static_cast<std::size_t>(rules.max_gap)) continue;
            if (last && pi < last_pos) continue;
            ProposalEvent e;
            e.turn = turn.index;
            e.proposer = turn.speaker;
            // "mine is earlier" and "yours is later" both claim the proposer's board.
            e.direction = s.mine == p.early ? Direction::kMine : Direction::kYours;
            e.subject = s.text;
            e.predicate = p.text;
            last = e;
            last_pos = pi;
          }
        }
      }
    }
    if (last) out.push_back(*last);
  }
  return out;
}

std::optional<bool> detect_acceptance(const Transcript& t, const ProposalEvent& e) {
  const Outcome& o = t.outcome;
  if (o.unparseable || o.aborted || !o.parsed_answer || !o.answering_player) return std::nullopt;
  const auto a = chess::parse_answer(*o.parsed_answer);
  if (!a) return std::nullopt;
  Direction final_dir = *a == chess::ChessAnswer::kMine ? Direction::kMine : Direction::kYours;
  if (*o.answering_player != e.proposer) final_dir = flip(final_dir);
  return final_dir == e.direction;
}

int count_apologies(const Transcript& t) {
  int n = 0;
  for (const auto& turn : t.turns) {
    std::string low(turn.text);
    for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    n += low.find("apolog") != std::string::npos;
  }
  return n;
}

std::optional<AutoraterVerdict> parse_verdict(std::string_view reply) {
  static const std::regex shape(R"(^\s*LABEL:[ \t]*([012])[ \t]*\r?\nJUSTIFICATION:[ \t]*(\S[^\n]*?)\s*$)");
  std::cmatch m;
  if (!std::regex_match(reply.begin(), reply.end(), m, shape)) return std::nullopt;
  AutoraterVerdict v;
  v.label = m[1].str()[0] - '0';
  v.justification = m[2].str();
  return v;
}

std::string autorater_prompt(const Transcript& t) {
  std::string p(data::autorater_prompt);
  p += "\n";
  for (const auto& turn : t.turns) {
    p += std::string(to_string(turn.speaker)) + ": " + turn.text + "\n";
  }
  return p;
}

AutoraterVerdict autorate(const Transcript& t, agents::Agent& judge) {
  agents::AgentContext ctx;
  ctx.prompt = autorater_prompt(t);
  ctx.turn_budget = 1;
  ctx.turns_left = 1;
  std::string reply = judge.next_utterance(ctx);
  if (auto v = parse_verdict(reply)) return *v;
  ctx.prompt +=
      "\nYour previous reply did not follow the required format. Reply with exactly two lines:\n"
      "LABEL: <0, 1, or 2>\nJUSTIFICATION: <one sentence>\n";
  reply = judge.next_utterance(ctx);
  if (auto v = parse_verdict(reply)) return *v;
  throw FormatError("autorater reply is not in LABEL/JUSTIFICATION form: " + reply);
}

double ProposalStats::proposal_turn_rate() const {
  return candidate_turns == 0 ? 0.0 : static_cast<double>(proposals) / candidate_turns;
}

double ProposalStats::dialogue_rate() const {
  return dialogues == 0 ? 0.0 : static_cast<double>(dialogues_with_proposal) / dialogues;
}

ProposalStats proposal_stats(const std::vector<Transcript>& ts, const ProposalRules& rules) {
  ProposalStats st;
  for (const auto& t : ts) {
    ++st.dialogues;
    if (!t.turns.empty()) st.candidate_turns += static_cast<int>(t.turns.size()) - 1;
    const auto events = detect_proposals(t, rules);
    st.proposals += static_cast<int>(events.size());
    if (!events.empty()) ++st.dialogues_with_proposal;
    std::optional<Speaker> earlier;
    if (t.instance.is_object()) earlier = orchestrator::chess_instance_from_json(t.instance).earlier;
    for (const auto& e : events) {
      const auto accepted = detect_acceptance(t, e);
      if (!accepted || !earlier) {
        ++st.excluded;
        continue;
      }
      const bool correct = (e.direction == Direction::kMine) == (*earlier == e.proposer);
      ++st.table[correct][*accepted];
    }
  }
  return st;
}

}  // namespace pings::metrics
