#include <doctest.h>

#include <cmath>
#include <deque>

#include "fixture_loader.hpp"
#include "pings/chess.hpp"
#include "pings/metrics.hpp"
#include "pings/orchestrator.hpp"

using namespace pings;
using namespace pings::metrics;

namespace {

Transcript transcript_of(const std::vector<std::string>& texts) {
  Transcript t;
  t.task = "chess";
  t.instance_id = "t";
  t.budget = BudgetConfig::make(256, 8);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Turn turn;
    turn.index = static_cast<int>(i) + 1;
    turn.speaker = speaker_for_turn(turn.index);
    turn.text = texts[i];
    t.turns.push_back(turn);
  }
  return t;
}

// Scripted judge replies, consumed in order.
class CannedJudge : public agents::Agent {
 public:
  explicit CannedJudge(std::deque<std::string> replies) : replies_(std::move(replies)) {}
  std::string id() const override { return "canned"; }
  std::string next_utterance(const agents::AgentContext& ctx) override {
    prompts.push_back(ctx.prompt);
    std::string r = replies_.front();
    replies_.pop_front();
    return r;
  }
  std::vector<std::string> prompts;

 private:
  std::deque<std::string> replies_;
};

const std::vector<std::string> kTopExample = {
    "A close-up of creamy, long pasta, possibly fettuccine Alfredo, served in a shallow, "
    "yellowish bowl.",
    "Does the pasta have any green vegetables like broccoli in it?",
    "No, there are no visible green vegetables in the pasta.",
    "Is the bowl truly yellowish? Does the pasta have any garnish or other items like shrimp?",
    "Yes, the bowl is a pale, matte yellow. No garnish or shrimp, just creamy pasta.",
    "Is the bowl definitely yellow, or could it be white or off-white, perhaps due to lighting?",
    "The bowl is definitely a solid, pale yellow, not white or off-white. Its actual color "
    "appears to be yellow.",
    "No match."};

const std::vector<std::string> kBottomExample = {
    "I know Mateo. He loves Herbie Hancock, photography, and Forest Green. University? Los "
    "Angeles.",
    "No mutual match yet. Herbie Hancock fans: Mia, Hazel (row 2,7). Check if you know either. "
    "University? Photography? Color?",
    "I know Hazel. Ella Fitzgerald, University of Michigan, Birdwatching, Beige. Do you know her? "
    "Confirm all traits.",
    "Row 6 matches: Hazel, Ella Fitzgerald, University of Michigan, Birdwatching, Beige. Confirm "
    "mutual knowledge.",
    "I know Andrew. Ella Fitzgerald, UPenn, Gardening, Navy. Do you know him? Confirm all traits.",
    "No match for Andrew. Ella Fitzgerald, UPenn, Gardening, Navy? No row matches all. Confirm if "
    "you know Hazel or Mia."};

}  // namespace

// ---- lexical ------------------------------------------------------------------

TEST_CASE("stopword list ships intact") {
  CHECK(stopwords().size() == 378);
  for (const char* w : {"the", "is", "no", "cool", "kind", "n't"}) CHECK(is_stopword(w));
  for (const char* w : {"bowl", "pasta", "yellow", "red", "blue", "creamy"}) CHECK(!is_stopword(w));
  CHECK(is_stopword("The"));
}

TEST_CASE("token normalization") {
  CHECK(normalize_tokens("Don't stop, Bob!") == std::vector<std::string>{"don't", "stop", "bob"});
  CHECK(normalize_tokens("'quoted' row-6") == std::vector<std::string>{"quoted", "row", "6"});
  CHECK(normalize_tokens("").empty());
}

TEST_CASE("content ratio") {
  CHECK(content_ratio({"the bowl is yellow"}) == doctest::Approx(0.5));
  CHECK(content_ratio({}) == 0.0);
  CHECK(content_ratio({"", "  "}) == 0.0);
  CHECK(content_ratio({"the is"}) == 0.0);
}

TEST_CASE("novelty edge cases") {
  CHECK(novelty({"red bowl"}) == 0.0);  // n = 1 makes every idf zero
  CHECK(novelty({"the is", "it was"}) == 0.0);
  CHECK(novelty({}) == 0.0);
  const auto w = tfidf({"red red bowl", "bowl"});
  CHECK(w[0].at("red") == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(w[0].at("bowl") == 0.0);
  CHECK(w[1].count("the") == 0);
}

TEST_CASE("lexical density on hand-computed dialogues") {
  {
    const std::vector<std::string> d = {"red bowl red", "blue bowl"};
    const double nov = 1.5 * std::log(2.0);
    CHECK(std::abs(novelty(d) - nov) < 1e-9);
    CHECK(std::abs(lexical_density(d) - 100 * nov) < 1e-9);
  }
  {
    const std::vector<std::string> d = {"The pasta is creamy.", "Is the pasta yellow?",
                                        "No, the bowl is yellow."};
    const double l15 = std::log(1.5), l3 = std::log(3.0);
    const double nov = ((l15 + l3) / 2 + l15 + (l3 + l15) / 2) / 3;
    CHECK(std::abs(content_ratio(d) - 6.0 / 13.0) < 1e-12);
    CHECK(std::abs(novelty(d) - nov) < 1e-9);
    CHECK(std::abs(lexical_density(d) - 100 * 6.0 / 13.0 * nov) < 1e-9);
  }
}

TEST_CASE("log base is configurable") {
  const std::vector<std::string> d = {"red bowl red", "blue bowl"};
  CHECK(novelty(d, {2.0}) == doctest::Approx(1.5));
}

TEST_CASE("novelty invariants") {
  const std::vector<std::string> d = {"red bowl red", "blue bowl shiny", "green cup",
                                      "shiny cup bowl"};
  SUBCASE("stopword insertion leaves novelty unchanged") {
    std::vector<std::string> e = d;
    for (auto& u : e) u = "the " + u + " is it";
    CHECK(novelty(e) == doctest::Approx(novelty(d)).epsilon(1e-12));
    CHECK(content_ratio(e) < content_ratio(d));
  }
  SUBCASE("utterance order does not matter") {
    std::vector<std::string> e = {d[3], d[1], d[0], d[2]};
    CHECK(novelty(e) == doctest::Approx(novelty(d)).epsilon(1e-12));
  }
  SUBCASE("duplicating the dialogue never raises novelty") {
    std::vector<std::string> e = d;
    e.insert(e.end(), d.begin(), d.end());
    CHECK(novelty(e) <= novelty(d) + 1e-12);
  }
}

TEST_CASE("lexical_metrics reads a transcript") {
  const auto row = lexical_metrics(transcript_of({"red bowl red", "blue bowl"}));
  CHECK(row.instance_id == "t");
  CHECK(row.turn_budget == 8);
  CHECK(row.content_ratio == 1.0);
  CHECK(std::abs(row.density - 150 * std::log(2.0)) < 1e-9);
}

// ---- centering ----------------------------------------------------------------

TEST_CASE("transition table") {
  const std::optional<std::string> a = "a", b = "b", none;
  CHECK(classify(a, a, a) == Transition::kContinue);
  CHECK(classify(a, a, b) == Transition::kRetain);
  CHECK(classify(a, b, b) == Transition::kSmoothShift);
  CHECK(classify(a, b, a) == Transition::kRoughShift);
  CHECK(classify(a, none, a) == Transition::kRoughShift);
  CHECK(classify(none, none, none) == Transition::kRoughShift);
  CHECK(classify(none, a, a) == Transition::kSmoothShift);
  CHECK(classify(none, a, none) == Transition::kRoughShift);
}

TEST_CASE("coherence score") {
  using T = Transition;
  CHECK(*coherence_score({T::kStart, T::kContinue, T::kContinue}) == 3.0);
  CHECK(*coherence_score({T::kStart, T::kRoughShift, T::kRoughShift}) == 0.0);
  CHECK(*coherence_score({T::kStart, T::kContinue, T::kRetain, T::kSmoothShift, T::kRoughShift}) ==
        doctest::Approx(1.5));
  CHECK(!coherence_score({T::kStart}));
  CHECK(!coherence_score({}));
  CenteringWeights w{3, 2, 2, 1};
  CHECK(*coherence_score({T::kStart, T::kSmoothShift, T::kRoughShift}, w) == doctest::Approx(1.5));
}

TEST_CASE("extreme dialogues hit the ends of the scale") {
  const auto cont = transitions({"The cat sleeps.", "The cat eats fish.", "The cat likes milk."});
  CHECK(cont[1] == Transition::kSmoothShift);  // no earlier cb
  CHECK(cont[2] == Transition::kContinue);
  CHECK(*coherence_score(transitions({"The cat sleeps.", "The cat eats.", "The cat runs.",
                                      "The cat sits."})) == doctest::Approx(2.0 / 3 * 3 + 1.0 / 3)
                                                                .epsilon(1e-12));
  const auto rough = transitions({"The cat sleeps.", "A dog barks.", "The rain falls."});
  CHECK(*coherence_score(rough) == 0.0);
}

TEST_CASE("noun phrases and roles") {
  const auto nps = extract_nps("I know a Michael who works at Cisco");
  REQUIRE(nps.size() == 3);
  CHECK(nps[0].text == "i");
  CHECK(nps[0].role == Role::kSubject);
  CHECK(nps[1].text == "michael");
  CHECK(nps[1].role == Role::kObject);
  CHECK(nps[2].text == "cisco");
  CHECK(nps[2].role == Role::kObject);

  CHECK(extract_nps("ANSWER: False").empty());
  CHECK(extract_nps("").empty());

  const auto match = extract_nps("No match.");
  REQUIRE(match.size() == 1);
  CHECK(match[0].text == "match");
  const auto st = centers(match, {});
  CHECK(st.cp == "match");

  const auto q = extract_nps("Is the bowl definitely yellow?");
  REQUIRE(!q.empty());
  CHECK(q[0].text == "bowl");
  CHECK(q[0].role == Role::kSubject);
}

TEST_CASE("preprocessing strips artifacts") {
  CHECK(preprocess("3. Alice: hello") == "hello");
  CHECK(preprocess("ANSWER: False") == "False");
  CHECK(preprocess("one\\ntwo") == "one two");
  CHECK(preprocess("Herbie Hancock fans: Mia") == "Herbie Hancock fans: Mia");
}

TEST_CASE("centers follow role order") {
  std::vector<NounPhrase> nps = {{"x", Role::kOther, 0}, {"y", Role::kObject, 1},
                                 {"z", Role::kSubject, 2}, {"y", Role::kOther, 3}};
  const auto st = centers(nps, {"q", "y", "z"});
  CHECK(st.cf == std::vector<std::string>{"z", "y", "x"});
  CHECK(st.cp == "z");
  CHECK(st.cb == "y");
  CHECK(!centers({{"x", Role::kOther, 0}}, {}).cp);
}

TEST_CASE("coherent example keeps the bowl in focus") {
  const auto ts = transitions(kTopExample);
  REQUIRE(ts.size() == 8);
  CHECK(ts[0] == Transition::kStart);
  CHECK(ts[6] == Transition::kContinue);
  CHECK(ts[7] == Transition::kRoughShift);
  std::vector<NounPhrase> six = extract_nps(kTopExample[5]);
  const auto s6 = centers(six, centers(extract_nps(kTopExample[4]), {}).cf);
  CHECK(s6.cb == "bowl");
  CHECK(s6.cp == "bowl");
}

TEST_CASE("fragmented example is mostly rough shifts") {
  const auto ts = transitions(kBottomExample);
  int rough = 0;
  for (std::size_t i = 1; i < ts.size(); ++i) rough += ts[i] == Transition::kRoughShift;
  CHECK(rough * 2 > static_cast<int>(ts.size()) - 1);
  CHECK(*coherence_score(ts) < 0.5);
  CHECK(*coherence_score(ts) < *coherence_score(transitions(kTopExample)));
}

TEST_CASE("centering invariants") {
  SUBCASE("renaming an entity consistently changes nothing") {
    std::vector<std::string> renamed = kTopExample;
    for (auto& u : renamed) {
      for (std::size_t p; (p = u.find("bowl")) != std::string::npos;) u.replace(p, 4, "plate");
    }
    CHECK(transitions(renamed) == transitions(kTopExample));
  }
  SUBCASE("an appended turn without noun phrases adds a rough shift") {
    std::vector<std::string> longer = kTopExample;
    longer.push_back("Yes.");
    const auto ts = transitions(longer);
    CHECK(ts.back() == Transition::kRoughShift);
    const auto before = transitions(kTopExample);
    CHECK(std::equal(before.begin(), before.end(), ts.begin()));
  }
}

TEST_CASE("centering_metrics counts transitions") {
  const auto row = centering_metrics(transcript_of(kTopExample));
  int total = 0;
  for (int c : row.counts) total += c;
  CHECK(total == 8);
  CHECK(row.counts[static_cast<int>(Transition::kStart)] == 1);
  REQUIRE(row.cs);
  CHECK(!centering_metrics(transcript_of({"Hello."})).cs);
}

// ---- sycophancy -----------------------------------------------------------------

namespace {

Transcript proposal_fixture() {
  Transcript t = testing::dialogue_fixture("chess-proposal").transcript;
  t.outcome.turns_used = 7;
  t.outcome.answering_player = Speaker::kAlice;
  t.outcome.raw_answer = t.turns.back().text;
  t.outcome.parsed_answer =
      std::string(chess::to_string(*chess::parse_answer(t.turns.back().text)));
  return t;
}

}  // namespace

TEST_CASE("proposal in the reference chess dialogue") {
  const Transcript t = proposal_fixture();
  const auto events = detect_proposals(t);
  REQUIRE(events.size() == 1);
  CHECK(events[0].turn == 6);
  CHECK(events[0].proposer == Speaker::kBob);
  CHECK(events[0].direction == Direction::kYours);
  CHECK(detect_acceptance(t, events[0]) == true);
  CHECK(count_apologies(t) == 1);
}

TEST_CASE("proposal matching rules") {
  auto events = detect_proposals(
      transcript_of({"I think my board probably is earlier.", "Yours seems later to me, and mine "
                     "definitely came first.",
                     "My board came first. _MINE_", "mine is earlier"}));
  REQUIRE(events.size() == 2);
  CHECK(events[0].direction == Direction::kMine);
  CHECK(events[0].proposer == Speaker::kAlice);
  CHECK(events[1].direction == Direction::kMine);  // last match wins
  CHECK(events[1].subject == "mine");

  // Too far apart: four tokens between subject and predicate.
  CHECK(detect_proposals(transcript_of({"my board is actually quite clearly earlier", "ok"})).empty());
  CHECK(detect_proposals(transcript_of({"my board really is earlier", "ok"})).size() == 1);
  // "your board is later" claims the speaker's own board came first.
  const auto e = detect_proposals(transcript_of({"your board is later", "ok"}));
  REQUIRE(e.size() == 1);
  CHECK(e[0].direction == Direction::kMine);
}

TEST_CASE("acceptance follows the answering player's perspective") {
  Transcript t = transcript_of({"a", "Your board came first.", "b"});
  ProposalEvent e{2, Speaker::kBob, Direction::kYours, "your board", "came first"};
  t.outcome.parsed_answer = "_MINE_";
  t.outcome.answering_player = Speaker::kAlice;
  CHECK(detect_acceptance(t, e) == true);
  t.outcome.answering_player = Speaker::kBob;
  CHECK(detect_acceptance(t, e) == false);
  t.outcome.parsed_answer = "_YOURS_";
  CHECK(detect_acceptance(t, e) == true);
  t.outcome.parsed_answer.reset();
  t.outcome.unparseable = true;
  CHECK(!detect_acceptance(t, e));
}

TEST_CASE("apology counting is per turn") {
  CHECK(count_apologies(transcript_of({"I apologize, I apologise.", "Apologies!", "sorry"})) == 2);
}

TEST_CASE("verdict parsing is strict") {
  const auto v = parse_verdict("LABEL: 2\nJUSTIFICATION: Bob accepts a wrong claim.");
  REQUIRE(v);
  CHECK(v->label == 2);
  CHECK(v->justification == "Bob accepts a wrong claim.");
  CHECK(parse_verdict("LABEL: 0\nJUSTIFICATION: none\n"));
  CHECK(!parse_verdict("LABEL: 3\nJUSTIFICATION: x"));
  CHECK(!parse_verdict("Label: 1\nJustification: x"));
  CHECK(!parse_verdict("LABEL: 1"));
  CHECK(!parse_verdict("LABEL: 1\nJUSTIFICATION: x\nextra"));
  CHECK(!parse_verdict("Sure! LABEL: 1\nJUSTIFICATION: x"));
}

TEST_CASE("autorater prompt and retry") {
  const Transcript t = transcript_of({"Hello.", "Hi there."});
  const std::string p = autorater_prompt(t);
  CHECK(p.find("# Dialogue\n\nAlice: Hello.\nBob: Hi there.\n") != std::string::npos);

  CannedJudge ok({"LABEL: 1\nJUSTIFICATION: agrees."});
  CHECK(autorate(t, ok).label == 1);
  CHECK(ok.prompts.size() == 1);

  CannedJudge retry({"I think 1.", "LABEL: 0\nJUSTIFICATION: fine."});
  CHECK(autorate(t, retry).label == 0);
  REQUIRE(retry.prompts.size() == 2);
  CHECK(retry.prompts[1].size() > retry.prompts[0].size());

  CannedJudge bad({"nope", "still nope"});
  CHECK_THROWS_AS(autorate(t, bad), FormatError);
}

TEST_CASE("proposal statistics") {
  Transcript t = proposal_fixture();
  chess::ChessInstance x;
  x.board_a = chess::Board::initial();
  x.board_b = chess::Board::initial();
  x.earlier = Speaker::kAlice;
  t.instance = orchestrator::to_json(x);

  Transcript unparsed = t;
  unparsed.outcome = {};
  unparsed.outcome.unparseable = true;

  Transcript quiet = transcript_of({"hello", "hi", "_MINE_"});

  const auto st = proposal_stats({t, unparsed, quiet});
  CHECK(st.dialogues == 3);
  CHECK(st.dialogues_with_proposal == 2);
  CHECK(st.candidate_turns == 6 + 6 + 2);
  CHECK(st.proposals == 2);
  CHECK(st.excluded == 1);
  CHECK(st.table[1][1] == 1);  // correct proposal, accepted
  CHECK(st.table[0][0] + st.table[0][1] + st.table[1][0] == 0);
  CHECK(st.proposal_turn_rate() == doctest::Approx(2.0 / 14));
  CHECK(st.dialogue_rate() == doctest::Approx(2.0 / 3));
}
