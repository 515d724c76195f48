#include "pings/namegame.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <regex>
#include <set>

#include "pings/rng.hpp"

namespace pings::namegame {

namespace {

const std::vector<std::string> kNames = {
    "Michael", "Andrew",  "Ethan",    "Asher",   "Lucas",    "Charlotte", "Isabella", "Lily",
    "Chloe",   "Sophia",  "Aurora",   "Sofia",   "Ella",     "Samuel",    "Noah",     "Joshua",
    "James",   "Madison", "Elizabeth", "Owen",   "Mateo",    "Hazel",     "Mia",      "David",
    "Emma",    "Olivia",  "Liam",     "Amelia",  "Harper",   "Evelyn",    "Benjamin", "Henry",
    "Jack",    "Grace",   "Zoe",      "Nora",    "Leo",      "Ava",       "Elijah",   "Luna"};

const std::vector<std::string> kSigns = {"Aries", "Taurus",  "Gemini",      "Cancer",
                                         "Leo",   "Virgo",   "Libra",       "Scorpio",
                                         "Sagittarius", "Capricorn", "Aquarius", "Pisces"};

const std::vector<std::string> kCompanies = {
    "Cisco", "Amazon",    "Tesla", "Sony",   "Google", "HP",      "Oracle",  "Qualcomm", "Samsung",
    "Apple", "IBM",       "Foxconn", "Microsoft", "Intel", "Nvidia", "Adobe", "Netflix", "Dell",
    "Siemens", "Toyota"};

const std::vector<std::string> kMusicians = {
    "John Coltrane",   "Count Basie",     "Miles Davis",     "Ella Fitzgerald",
    "Art Blakey",      "Nina Simone",     "Herbie Hancock",  "Louis Armstrong",
    "Wes Montgomery",  "Billie Holiday",  "Thelonious Monk", "Charlie Parker",
    "Charles Mingus",  "Duke Ellington",  "Dizzy Gillespie", "Sarah Vaughan"};

const std::vector<std::string> kAllergies = {"Corn",    "Shellfish", "Eggs",   "Fish",  "Mustard",
                                             "Soy",     "Gelatin",   "Peanuts", "Sesame", "Tree Nuts",
                                             "Wheat",   "Milk",      "Latex",  "Pollen"};

const std::vector<std::string> kColors = {"Mustard Yellow", "Charcoal", "Coral",  "Teal",
                                          "Peach",          "Crimson",  "Forest Green", "Beige",
                                          "Navy",           "Lavender", "Maroon", "Olive"};

const std::vector<std::string> kCities = {"Chicago", "Sydney", "Rome",    "Berlin",
                                          "Rio de Janeiro", "Moscow", "London", "New York",
                                          "Paris",   "Tokyo",  "Toronto", "Madrid",
                                          "Seoul",   "Cairo",  "Mumbai",  "Los Angeles"};

Schema make_schema(std::string id, std::vector<std::string> columns,
                   std::vector<std::vector<std::string>> pools) {
  Schema s{std::move(id), std::move(columns), std::move(pools)};
  s.validate();
  return s;
}

PersonRecord random_record(const Schema& schema, Rng& rng) {
  PersonRecord r;
  for (const auto& pool : schema.pools) r.fields.push_back(rng.choice(pool));
  return r;
}

bool contains(const Database& db, const PersonRecord& r) {
  return std::find(db.begin(), db.end(), r) != db.end();
}

// Copy of `base` sharing exactly `shared` fields with it.
PersonRecord near_miss(const PersonRecord& base, int shared, const Schema& schema, Rng& rng) {
  std::vector<int> cols{0, 1, 2, 3, 4};
  rng.shuffle(cols);
  PersonRecord r = base;
  for (int i = 0; i < kFields - shared; ++i) {
    const auto c = static_cast<std::size_t>(cols[static_cast<std::size_t>(i)]);
    const auto& pool = schema.pools[c];
    std::string value = base.fields[c];
    while (value == base.fields[c]) value = rng.choice(pool);
    r.fields[c] = value;
  }
  return r;
}

}  // namespace

void Schema::validate() const {
  if (columns.size() != kFields || pools.size() != kFields) {
    throw InvalidArgument("name-game schema needs exactly five columns");
  }
  if (columns[0] != "name") throw InvalidArgument("first name-game column must be name");
  for (std::size_t c = 0; c < pools.size(); ++c) {
    const auto& pool = pools[c];
    if (pool.size() < 2) throw InvalidArgument("pool too small for column " + columns[c]);
    std::set<std::string> seen;
    for (const auto& v : pool) {
      if (v.empty() || v.find(',') != std::string::npos || v.find('\n') != std::string::npos) {
        throw InvalidArgument("bad pool value in column " + columns[c]);
      }
      if (!seen.insert(v).second) throw InvalidArgument("duplicate pool value " + v);
    }
  }
}

const Schema& default_schema() {
  static const Schema s = make_schema(
      "default", {"name", "astrological sign", "company", "favorite musician", "allergies"},
      {kNames, kSigns, kCompanies, kMusicians, kAllergies});
  return s;
}

const Schema& color_city_schema() {
  static const Schema s = make_schema(
      "color-city", {"name", "company", "favorite color", "favorite musician", "city"},
      {kNames, kCompanies, kColors, kMusicians, kCities});
  return s;
}

const Schema& schema_by_id(std::string_view id) {
  if (id == default_schema().id) return default_schema();
  if (id == color_city_schema().id) return color_city_schema();
  throw InvalidArgument("unknown name-game schema: " + std::string(id));
}

int default_near_miss_quota(int size) { return (6 * size + 4) / 9; }

int shared_fields(const PersonRecord& a, const PersonRecord& b) {
  int n = 0;
  for (int i = 0; i < kFields; ++i) {
    if (a.fields[static_cast<std::size_t>(i)] == b.fields[static_cast<std::size_t>(i)]) ++n;
  }
  return n;
}

NameGameInstance generate_instance(std::uint64_t seed, int size, int near_miss_quota,
                                   const Schema& schema) {
  if (size != 9 && size != 16 && size != 25) {
    throw InvalidArgument("name-game size must be 9, 16 or 25");
  }
  if (near_miss_quota < 0 || near_miss_quota > size - 1) {
    throw InvalidArgument("near-miss quota must be in [0, size - 1]");
  }
  const int four_shared = (near_miss_quota + 1) / 3;
  constexpr int kAttempts = 200;

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    const PersonRecord common = random_record(schema, rng);
    Database a{common};
    while (static_cast<int>(a.size()) < size) {
      PersonRecord r = random_record(schema, rng);
      if (!contains(a, r)) a.push_back(std::move(r));
    }

    Database b{common};
    bool ok = true;
    for (int i = 0; i < near_miss_quota && ok; ++i) {
      const int shared = i < four_shared ? 4 : 3;
      int tries = 0;
      while (true) {
        PersonRecord r = near_miss(rng.choice(a), shared, schema, rng);
        if (!contains(a, r) && !contains(b, r)) {
          b.push_back(std::move(r));
          break;
        }
        if (++tries > 100) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    while (static_cast<int>(b.size()) < size) {
      PersonRecord r = random_record(schema, rng);
      if (!contains(a, r) && !contains(b, r)) b.push_back(std::move(r));
    }

    rng.shuffle(a);
    rng.shuffle(b);

    NameGameInstance inst;
    inst.schema_id = schema.id;
    inst.size = size;
    inst.seed = seed;
    int matches = 0, near = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const int s = shared_fields(a[i], b[j]);
        if (s == kFields) {
          ++matches;
          inst.common_row_a = static_cast<int>(i) + 1;
          inst.common_row_b = static_cast<int>(j) + 1;
        } else if (s >= 3) {
          ++near;
        }
      }
    }
    if (matches != 1 || near < near_miss_quota) continue;
    inst.db_a = std::move(a);
    inst.db_b = std::move(b);
    return inst;
  }
  throw Error("could not generate a name-game instance for seed " + std::to_string(seed));
}

NameGameInstance generate_instance(std::uint64_t seed, int size) {
  return generate_instance(seed, size, default_near_miss_quota(size));
}

std::string render_table(const Database& db, const Schema& schema) {
  std::string out = "row";
  for (const auto& c : schema.columns) out += "," + c;
  for (std::size_t i = 0; i < db.size(); ++i) {
    out += "\n" + std::to_string(i + 1);
    for (const auto& v : db[i].fields) out += "," + v;
  }
  return out;
}

Database parse_table(std::string_view text) {
  Database db;
  std::size_t pos = 0;
  bool header = true;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos
                                                                          : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != kFields + 1) throw InvalidArgument("bad name-game table line");
    if (header) {
      header = false;
      continue;
    }
    if (cells[0] != std::to_string(db.size() + 1)) throw InvalidArgument("bad row number");
    db.push_back(PersonRecord{{cells.begin() + 1, cells.end()}});
  }
  return db;
}

std::optional<int> parse_answer(std::string_view utterance) {
  static const std::regex kPattern(R"(select\s+row\s+(\d+))", std::regex::icase);
  const std::string text(utterance);
  std::optional<int> result;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kPattern);
       it != std::sregex_iterator(); ++it) {
    const std::string digits = (*it)[1].str();
    long long value = 0;
    for (char c : digits) {
      value = value * 10 + (c - '0');
      if (value > INT_MAX) {
        value = INT_MAX;
        break;
      }
    }
    result = static_cast<int>(value);
  }
  return result;
}

bool score(const NameGameInstance& instance, Speaker by, int row) {
  return row == instance.common_row_for(by);
}

int guess_one_next(int size, const std::set<int>& already_proposed, std::uint64_t seed) {
  std::vector<int> open;
  for (int r = 1; r <= size; ++r) {
    if (!already_proposed.count(r)) open.push_back(r);
  }
  if (open.empty()) throw InvalidArgument("every row has already been proposed");
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(already_proposed.size())));
  return rng.choice(open);
}

}  // namespace pings::namegame
