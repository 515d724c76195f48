#include <doctest.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "pings/namegame.hpp"

using namespace pings;
using namespace pings::namegame;

namespace {

// Independent pair scan: counts cross pairs equal on every column.
int brute_force_matches(const NameGameInstance& inst) {
  int n = 0;
  for (const auto& a : inst.db_a) {
    for (const auto& b : inst.db_b) {
      bool same = a.fields.size() == b.fields.size();
      for (std::size_t i = 0; same && i < a.fields.size(); ++i) same = a.fields[i] == b.fields[i];
      if (same) ++n;
    }
  }
  return n;
}

bool in_pool(const Schema& s, const PersonRecord& r) {
  for (std::size_t c = 0; c < s.pools.size(); ++c) {
    bool found = false;
    for (const auto& v : s.pools[c]) found = found || v == r.fields[c];
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("schemas are valid") {
  CHECK_NOTHROW(default_schema().validate());
  CHECK_NOTHROW(color_city_schema().validate());
  CHECK(&schema_by_id("default") == &default_schema());
  CHECK(&schema_by_id("color-city") == &color_city_schema());
  CHECK_THROWS_AS(schema_by_id("nope"), InvalidArgument);
  Schema bad = default_schema();
  bad.pools[2].push_back("Acme, Inc");
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("small instance has exactly one common record") {
  const auto inst = generate_instance(3, 9, 2);
  CHECK(inst.db_a.size() == 9);
  CHECK(inst.db_b.size() == 9);
  CHECK(brute_force_matches(inst) == 1);
  CHECK(inst.db_a[inst.common_row_a - 1] == inst.db_b[inst.common_row_b - 1]);
}

TEST_CASE("uniqueness over many instances") {
  int bad = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const int size = seed % 3 == 0 ? 9 : (seed % 3 == 1 ? 16 : 25);
    const auto inst = generate_instance(seed, size);
    if (brute_force_matches(inst) != 1) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("instance structure") {
  for (int size : {9, 16, 25}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto inst = generate_instance(seed, size);
      CHECK(inst.size == size);
      CHECK(static_cast<int>(inst.db_a.size()) == size);
      int near = 0;
      for (const auto& a : inst.db_a) {
        CHECK(in_pool(default_schema(), a));
        for (const auto& b : inst.db_b) {
          const int s = shared_fields(a, b);
          if (s == 3 || s == 4) ++near;
        }
      }
      CHECK(near >= default_near_miss_quota(size));
      // no full duplicates inside one database
      CHECK(std::set<PersonRecord>(inst.db_a.begin(), inst.db_a.end()).size() ==
            inst.db_a.size());
      CHECK(std::set<PersonRecord>(inst.db_b.begin(), inst.db_b.end()).size() ==
            inst.db_b.size());
    }
  }
  CHECK(default_near_miss_quota(9) == 6);
  CHECK_THROWS_AS(generate_instance(1, 10), InvalidArgument);
  CHECK_THROWS_AS(generate_instance(1, 9, 9), InvalidArgument);
  CHECK_THROWS_AS(generate_instance(1, 9, -1), InvalidArgument);
}

TEST_CASE("generation is deterministic") {
  const auto x = generate_instance(42, 16);
  const auto y = generate_instance(42, 16);
  CHECK(render_table(x.db_a, default_schema()) == render_table(y.db_a, default_schema()));
  CHECK(render_table(x.db_b, default_schema()) == render_table(y.db_b, default_schema()));
  CHECK(x.common_row_a == y.common_row_a);
  const auto z = generate_instance(43, 16);
  CHECK(render_table(x.db_a, default_schema()) != render_table(z.db_a, default_schema()));
}

TEST_CASE("color-city schema instances") {
  const auto inst = generate_instance(5, 9, 6, color_city_schema());
  CHECK(inst.schema_id == "color-city");
  CHECK(brute_force_matches(inst) == 1);
  for (const auto& r : inst.db_a) CHECK(in_pool(color_city_schema(), r));
}

TEST_CASE("common row positions are uniform") {
  const int n = 9000;
  std::map<int, int> hist_a, hist_b;
  for (int seed = 0; seed < n; ++seed) {
    const auto inst = generate_instance(static_cast<std::uint64_t>(seed) + 100000, 9);
    hist_a[inst.common_row_a]++;
    hist_b[inst.common_row_b]++;
  }
  const double p = 1.0 / 9;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (int r = 1; r <= 9; ++r) {
    CAPTURE(r);
    CHECK(std::abs(hist_a[r] - n * p) <= 3 * sigma);
    CHECK(std::abs(hist_b[r] - n * p) <= 3 * sigma);
  }
}

TEST_CASE("table rendering") {
  const auto inst = generate_instance(7, 9);
  const std::string text = render_table(inst.db_a, default_schema());
  CHECK(std::count(text.begin(), text.end(), '\n') == 9);
  CHECK(text.rfind("row,name,astrological sign,company,favorite musician,allergies\n1,", 0) == 0);
  CHECK(parse_table(text) == inst.db_a);
  CHECK(parse_table(render_table(inst.db_b, default_schema())) == inst.db_b);
  CHECK(render_table(inst.db_a, default_schema()) != render_table(inst.db_b, default_schema()));
  CHECK_THROWS_AS(parse_table("row,a,b\n1,x,y"), InvalidArgument);
}

TEST_CASE("answers") {
  CHECK(parse_answer("SELECT ROW 1") == 1);
  CHECK_FALSE(parse_answer("I think maybe row 3?").has_value());
  CHECK(parse_answer("select row 12") == 12);
  CHECK(parse_answer("SELECT  ROW\n4") == 4);
  CHECK(parse_answer("SELECT ROW 2 ... actually SELECT ROW 5") == 5);
  CHECK(parse_answer("SELECT ROW 99999999999999999999") == INT_MAX);

  NameGameInstance inst;
  inst.size = 9;
  inst.common_row_a = 7;
  inst.common_row_b = 1;
  CHECK(score(inst, Speaker::kBob, 1));
  CHECK_FALSE(score(inst, Speaker::kAlice, 1));
  CHECK(score(inst, Speaker::kAlice, 7));
  CHECK_FALSE(score(inst, Speaker::kBob, 12));
  CHECK_FALSE(score(inst, Speaker::kBob, 0));
}

TEST_CASE("guess-one proposals") {
  std::set<int> all_but_five;
  for (int r = 1; r <= 9; ++r) {
    if (r != 5) all_but_five.insert(r);
  }
  CHECK(guess_one_next(9, all_but_five, 3) == 5);
  all_but_five.insert(5);
  CHECK_THROWS_AS(guess_one_next(9, all_but_five, 3), InvalidArgument);

  // a full dialogue's worth of proposals never repeats
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::set<int> proposed;
    for (int i = 0; i < 9; ++i) {
      const int r = guess_one_next(9, proposed, seed);
      CHECK(proposed.count(r) == 0);
      proposed.insert(r);
    }
  }
  CHECK(guess_one_next(9, {2, 3}, 11) == guess_one_next(9, {2, 3}, 11));

  const int n = 9000;
  std::map<int, int> first;
  for (int seed = 0; seed < n; ++seed) first[guess_one_next(9, {}, seed)]++;
  const double p = 1.0 / 9;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (int r = 1; r <= 9; ++r) CHECK(std::abs(first[r] - n * p) <= 3 * sigma);
}
