#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "pings/core.hpp"
#include "pings/rng.hpp"
#include "pings/transcript.hpp"

using namespace pings;

namespace {

std::vector<std::string> strs(const std::vector<std::string_view>& v) {
  return {v.begin(), v.end()};
}

Transcript sample_transcript() {
  Transcript t;
  t.task = "chess";
  t.instance_id = "chess-000001";
  t.seed = 0xFFFFFFFFFFFFFFF0ULL;
  t.budget = BudgetConfig::make(256, 4);
  t.agents = {"scripted:chess", "replay:x"};
  t.turns.push_back({1, Speaker::kAlice, "My board: 16 white, 16 black.", 6, false});
  t.turns.push_back({2, Speaker::kBob, "_MINE_ \"quoted\" é", 3, true});
  t.outcome.raw_answer = t.turns.back().text;
  t.outcome.parsed_answer = "Mine";
  t.outcome.answering_player = Speaker::kBob;
  t.outcome.correct = true;
  t.outcome.turns_used = 2;
  t.outcome.tokens_used = {6, 3};
  t.instance = Json{{"k", 1}};
  return t;
}

}  // namespace

TEST_CASE("tokenize splits on whitespace runs") {
  CHECK(strs(tokenize("a b  c")) == std::vector<std::string>{"a", "b", "c"});
  CHECK(tokenize("").empty());
  CHECK(token_count("My board has fewer pieces") == 5);
  CHECK(strs(tokenize("  lead\ttab\nnl  ")) == std::vector<std::string>{"lead", "tab", "nl"});
  // no-break space and ideographic space separate tokens
  CHECK(token_count("a b　c") == 3);
  // multibyte letters are not separators
  CHECK(token_count("café naïve") == 2);
}

TEST_CASE("allowance and stated word limit") {
  CHECK(per_turn_allowance(256, 8) == 32);
  CHECK(per_turn_allowance(256, 16) == 16);
  CHECK(per_turn_allowance(5, 2) == 2);
  CHECK_THROWS_AS(per_turn_allowance(5, 0), InvalidArgument);
  CHECK_THROWS_AS(per_turn_allowance(3, 4), InvalidArgument);
  CHECK(stated_word_limit(32) == 22);
  CHECK(stated_word_limit(64) == 44);
  CHECK(stated_word_limit(16) == 11);
  CHECK(stated_word_limit(128) == 88);
  for (int T = 2; T < 300; T += 7) {
    for (int t = 1; t <= T; t += 3) CHECK(per_turn_allowance(T, t) * t <= T);
  }
}

TEST_CASE("truncation") {
  CHECK(truncate_to_allowance("a b c", 5).text == "a b c");
  CHECK_FALSE(truncate_to_allowance("a b c", 5).truncated);
  const auto cut = truncate_to_allowance("a b c d", 2);
  CHECK(cut.text == "a b");
  CHECK(cut.truncated);
  CHECK(truncate_to_allowance("", 3).text.empty());
  CHECK(truncate_to_allowance("  x\n\ny  z ", 2).text == "x y");

  Rng rng(7);
  const std::vector<std::string> pieces{"a", " ", "  ", "\n", "bb", " ", "c"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int len = rng.uniform_int(0, 20);
    for (int i = 0; i < len; ++i) text += rng.choice(pieces);
    const int a = rng.uniform_int(1, 6);
    const auto once = truncate_to_allowance(text, a);
    const auto twice = truncate_to_allowance(once.text, a);
    CHECK(twice.text == once.text);
    CHECK(token_count(once.text) <= static_cast<std::size_t>(a));
  }
}

TEST_CASE("turn order") {
  CHECK(speaker_for_turn(1) == Speaker::kAlice);
  CHECK(speaker_for_turn(2) == Speaker::kBob);
  CHECK(speaker_for_turn(16) == Speaker::kBob);
  CHECK_THROWS_AS(speaker_for_turn(0), InvalidArgument);
}

TEST_CASE("budget config") {
  const auto b = BudgetConfig::make(256, 4);
  CHECK(b.allowance == 64);
  CHECK(b.stated_word_limit == 44);
  CHECK(b.max_tokens_per_speaker() == 128);
  CHECK_THROWS_AS(BudgetConfig::make(256, 3), InvalidArgument);
  CHECK_THROWS_AS(BudgetConfig::make(256, 0), InvalidArgument);
  CHECK_THROWS_AS(BudgetConfig::make(2, 4), InvalidArgument);
}

TEST_CASE("derive_seed is deterministic and spreads") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(9, "chess") == derive_seed(9, "chess"));
  CHECK(derive_seed(9, "chess") != derive_seed(9, "covr"));
}

TEST_CASE("rng uniform is in range and roughly flat") {
  Rng rng(123);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) counts[rng.uniform(6)]++;
  for (int c : counts) CHECK(std::abs(c - 10000) < 400);
  std::vector<int> v{1, 2, 3, 4, 5};
  rng.shuffle(v);
  std::sort(v.begin(), v.end());
  CHECK(v == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("transcript round trip") {
  const Transcript t = sample_transcript();
  const std::string line = serialize(t);
  CHECK(line.find('\n') == std::string::npos);
  const Transcript back = deserialize(line);
  CHECK(back == t);
  CHECK(serialize(back) == line);

  std::stringstream io;
  write_transcripts(io, {t, t});
  CHECK(read_transcripts(io).size() == 2);
}

TEST_CASE("transcript validation") {
  Json j = to_json(sample_transcript());
  j["schema_version"] = 2;
  CHECK_THROWS_AS(transcript_from_json(j), InvalidArgument);
  Json k = to_json(sample_transcript());
  k.erase("turns");
  CHECK_THROWS_AS(transcript_from_json(k), InvalidArgument);
  Json m = to_json(sample_transcript());
  m["outcome"]["turns_used"] = 5;
  CHECK_THROWS_AS(transcript_from_json(m), InvalidArgument);
}
