#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pings/core.hpp"

namespace pings::namegame {

inline constexpr int kFields = 5;

// Column names and value pools. Column 0 is always "name".
struct Schema {
  std::string id;
  std::vector<std::string> columns;             // kFields entries
  std::vector<std::vector<std::string>> pools;  // one pool per column

  // Throws unless there are kFields columns with non-empty, comma-free,
  // duplicate-free pools.
  void validate() const;
};

// name, astrological sign, company, favorite musician, allergies
const Schema& default_schema();
// name, company, favorite color, favorite musician, city
const Schema& color_city_schema();
const Schema& schema_by_id(std::string_view id);

struct PersonRecord {
  std::vector<std::string> fields;  // kFields values, column order
  friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
  friend bool operator<(const PersonRecord& a, const PersonRecord& b) {
    return a.fields < b.fields;
  }
};

using Database = std::vector<PersonRecord>;

struct NameGameInstance {
  std::string schema_id;
  Database db_a;
  Database db_b;
  int common_row_a = 0;  // 1-based
  int common_row_b = 0;  // 1-based
  std::uint64_t seed = 0;
  int size = 0;

  const Database& db_for(Speaker s) const { return s == Speaker::kAlice ? db_a : db_b; }
  int common_row_for(Speaker s) const {
    return s == Speaker::kAlice ? common_row_a : common_row_b;
  }
};

// 2 pairs at four shared fields and 4 at three for 9 rows, scaled with size.
int default_near_miss_quota(int size);

int shared_fields(const PersonRecord& a, const PersonRecord& b);

NameGameInstance generate_instance(std::uint64_t seed, int size, int near_miss_quota,
                                   const Schema& schema = default_schema());
NameGameInstance generate_instance(std::uint64_t seed, int size);

// "row,<columns>" header, then "i,<values>" per record, newline separated.
std::string render_table(const Database& db, const Schema& schema);
// Inverse of render_table.
Database parse_table(std::string_view text);

// Last "SELECT ROW i" (any case, any whitespace); saturates huge numbers.
std::optional<int> parse_answer(std::string_view utterance);
bool score(const NameGameInstance& instance, Speaker by, int row);

// Uniform over rows 1..size not in `already_proposed`. Throws when every row
// has been proposed.
int guess_one_next(int size, const std::set<int>& already_proposed, std::uint64_t seed);

}  // namespace pings::namegame
