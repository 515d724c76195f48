#include <cmath>
#include <sstream>

#include "pings/interactivity.hpp"

namespace pings::interactivity {

namespace {

std::string pow10_text(double log10_value) {
  std::ostringstream ss;
  ss.precision(3);
  ss << "10^" << log10_value;
  return ss.str();
}

struct Search {
  const AbstractGame& g;
  long long m;  // message count
  int k;
  Witness* w;

  double answer_value(const std::vector<int>& a_set, const std::vector<int>& b_set,
                      const History& h) const {
    double total = 0;
    for (int x1 : a_set) {
      double best = -1;
      int best_a = 0;
      for (std::size_t a = 0; a < g.answers.size(); ++a) {
        double v = 0;
        for (int x2 : b_set) v += g.p[x1][x2] * g.payoff[x1][x2][a];
        if (v > best) {
          best = v;
          best_a = static_cast<int>(a);
        }
      }
      total += best;
      if (w) w->answer[{x1, h}] = best_a;
    }
    return total;
  }

  // Best value reachable from a history cell. `a_set`/`b_set` hold the x1/x2
  // values consistent with the history; distinct histories never interact,
  // so each cell is maximized on its own.
  double solve(const std::vector<int>& a_set, const std::vector<int>& b_set, History& h,
               int round, bool record) {
    if (a_set.empty() || b_set.empty()) return 0;
    if (round > k) {
      Witness* saved = w;
      if (!record) w = nullptr;
      const double v = answer_value(a_set, b_set, h);
      w = saved;
      return v;
    }
    const int s = sender(k, round);
    const std::vector<int>& domain = s == 1 ? a_set : b_set;
    const std::size_t d = domain.size();

    std::vector<long long> code(d, 0), best_code;
    double best = -1;
    for (;;) {
      std::map<long long, std::vector<int>> cells;
      for (std::size_t i = 0; i < d; ++i) cells[code[i]].push_back(domain[i]);
      double v = 0;
      for (const auto& [msg, cell] : cells) {
        h.push_back(msg);
        v += s == 1 ? solve(cell, b_set, h, round + 1, false) : solve(a_set, cell, h, round + 1, false);
        h.pop_back();
      }
      if (v > best + 1e-15) {
        best = v;
        best_code = code;
      }
      std::size_t i = 0;
      while (i < d && ++code[i] == m) code[i++] = 0;
      if (i == d) break;
    }

    if (record && w) {
      auto& r = w->rounds[static_cast<std::size_t>(round - 1)];
      std::map<long long, std::vector<int>> cells;
      for (std::size_t i = 0; i < d; ++i) {
        r.encode[{domain[i], h}] = best_code[i];
        cells[best_code[i]].push_back(domain[i]);
      }
      for (const auto& [msg, cell] : cells) {
        h.push_back(msg);
        if (s == 1) {
          solve(cell, b_set, h, round + 1, true);
        } else {
          solve(a_set, cell, h, round + 1, true);
        }
        h.pop_back();
      }
    }
    return best;
  }
};

std::vector<int> iota_vec(std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  return v;
}

}  // namespace

void AbstractGame::validate() const {
  if (x1.empty() || x2.empty() || answers.empty()) {
    throw InvalidArgument("game needs non-empty X1, X2 and answer sets");
  }
  if (p.size() != x1.size()) throw InvalidArgument("p must have one row per x1");
  if (payoff.size() != x1.size()) throw InvalidArgument("payoff must have one table per x1");
  double sum = 0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    if (p[i].size() != x2.size()) throw InvalidArgument("p row width must be |X2|");
    if (payoff[i].size() != x2.size()) throw InvalidArgument("payoff rows must be |X2|");
    for (std::size_t j = 0; j < x2.size(); ++j) {
      if (!(p[i][j] >= 0)) throw InvalidArgument("probabilities must be non-negative");
      sum += p[i][j];
      if (payoff[i][j].size() != answers.size()) {
        throw InvalidArgument("payoff must give a value for every answer");
      }
      for (double v : payoff[i][j]) {
        if (!(v >= 0 && v <= 1)) throw InvalidArgument("payoffs must lie in [0, 1]");
      }
    }
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("probabilities must sum to 1");
}

void MessageSpace::validate() const {
  if (vocabulary.empty()) throw InvalidArgument("message vocabulary is empty");
  if (n < 1) throw InvalidArgument("message length must be >= 1");
  if (std::pow(static_cast<double>(vocabulary.size()), n) > 1e6) {
    throw InvalidArgument("message space too large");
  }
}

long long MessageSpace::size() const {
  long long s = 1;
  for (int i = 0; i < n; ++i) s *= static_cast<long long>(vocabulary.size());
  return s;
}

std::string MessageSpace::message(long long index) const {
  const auto v = static_cast<long long>(vocabulary.size());
  std::vector<std::string> symbols;
  for (int i = 0; i < n; ++i) {
    symbols.push_back(vocabulary[static_cast<std::size_t>(index % v)]);
    index /= v;
  }
  std::string out;
  for (auto it = symbols.rbegin(); it != symbols.rend(); ++it) {
    if (!out.empty()) out += ' ';
    out += *it;
  }
  return out;
}

SearchTooLarge::SearchTooLarge(double card, double guard)
    : Error("search space of " + pow10_text(std::log10(card)) + " encoding tuples exceeds guard " +
            pow10_text(std::log10(guard))),
      cardinality(card) {}

int sender(int k, int j) { return (k - j) % 2 == 0 ? 2 : 1; }

double search_cardinality(const AbstractGame& g, const MessageSpace& ms, int k) {
  const double m = static_cast<double>(ms.size());
  double log10_total = 0;
  for (int j = 1; j <= k; ++j) {
    const double domain = static_cast<double>(sender(k, j) == 1 ? g.x1.size() : g.x2.size());
    log10_total += domain * std::pow(m, j - 1) * std::log10(m);
  }
  return std::pow(10.0, log10_total);
}

double best_value_level0(const AbstractGame& g) {
  g.validate();
  Search s{g, 1, 0, nullptr};
  return s.answer_value(iota_vec(g.x1.size()), iota_vec(g.x2.size()), {});
}

double best_value_level_k(const AbstractGame& g, const MessageSpace& ms, int k,
                          const SearchOptions& options, Witness* witness) {
  g.validate();
  ms.validate();
  if (k < 0) throw InvalidArgument("level must be >= 0");
  if (k > options.max_level) {
    throw InvalidArgument("level " + std::to_string(k) + " above the configured maximum");
  }
  const double card = search_cardinality(g, ms, k);
  if (card > options.guard) throw SearchTooLarge(card, options.guard);
  if (witness) {
    *witness = Witness{};
    for (int j = 1; j <= k; ++j) witness->rounds.push_back({sender(k, j), {}});
  }
  Search s{g, ms.size(), k, witness};
  History h;
  return s.solve(iota_vec(g.x1.size()), iota_vec(g.x2.size()), h, 1, witness != nullptr);
}

LevelResult interactivity_level(const AbstractGame& g, const MessageSpace& ms, double c, int k_max,
                                const SearchOptions& options) {
  if (k_max > options.max_level) {
    throw InvalidArgument("k_max " + std::to_string(k_max) + " above the configured maximum");
  }
  LevelResult r;
  for (int k = 0; k <= k_max; ++k) {
    Witness w;
    const double v = best_value_level_k(g, ms, k, options, &w);
    r.values.push_back(v);
    r.achieved_value = v;
    r.witness = std::move(w);
    if (v > c) {
      r.level = k;
      break;
    }
  }
  return r;
}

double evaluate(const AbstractGame& g, const MessageSpace& ms, int k, const Witness& w) {
  (void)ms;
  double total = 0;
  for (std::size_t x1 = 0; x1 < g.x1.size(); ++x1) {
    for (std::size_t x2 = 0; x2 < g.x2.size(); ++x2) {
      History h;
      for (int j = 1; j <= k; ++j) {
        const auto& round = w.rounds.at(static_cast<std::size_t>(j - 1));
        const int x = static_cast<int>(round.player == 1 ? x1 : x2);
        h.push_back(round.encode.at({x, h}));
      }
      const int a = w.answer.at({static_cast<int>(x1), h});
      total += g.p[x1][x2] * g.payoff[x1][x2][static_cast<std::size_t>(a)];
    }
  }
  return total;
}

std::pair<AbstractGame, MessageSpace> game_from_json(const Json& j) {
  AbstractGame g;
  MessageSpace ms;
  try {
    g.x1 = j.at("x1").get<std::vector<std::string>>();
    g.x2 = j.at("x2").get<std::vector<std::string>>();
    g.answers = j.at("answers").get<std::vector<std::string>>();
    g.p = j.at("p").get<std::vector<std::vector<double>>>();
    g.payoff = j.at("payoff").get<std::vector<std::vector<std::vector<double>>>>();
    ms.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    ms.n = j.value("n", 1);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad game description: ") + e.what());
  }
  g.validate();
  ms.validate();
  return {std::move(g), std::move(ms)};
}

Json to_json(const AbstractGame& g, const MessageSpace& ms) {
  return Json{{"x1", g.x1},           {"x2", g.x2}, {"answers", g.answers},
              {"p", g.p},             {"payoff", g.payoff},
              {"vocabulary", ms.vocabulary}, {"n", ms.n}};
}

Json to_json(const LevelResult& r, const AbstractGame& g, const MessageSpace& ms) {
  const auto history_json = [&](const History& h) {
    Json out = Json::array();
    for (long long m : h) out.push_back(ms.message(m));
    return out;
  };
  Json rounds = Json::array();
  for (const auto& round : r.witness.rounds) {
    Json enc = Json::array();
    for (const auto& [key, msg] : round.encode) {
      const auto& labels = round.player == 1 ? g.x1 : g.x2;
      enc.push_back({{"value", labels[static_cast<std::size_t>(key.first)]},
                     {"history", history_json(key.second)},
                     {"message", ms.message(msg)}});
    }
    rounds.push_back({{"player", round.player}, {"encode", enc}});
  }
  Json answers = Json::array();
  for (const auto& [key, a] : r.witness.answer) {
    answers.push_back({{"x1", g.x1[static_cast<std::size_t>(key.first)]},
                       {"history", history_json(key.second)},
                       {"answer", g.answers[static_cast<std::size_t>(a)]}});
  }
  return Json{{"level", r.level ? Json(*r.level) : Json(nullptr)},
              {"achieved_value", r.achieved_value},
              {"values", r.values},
              {"witness", {{"rounds", rounds}, {"answer", answers}}}};
}

AbstractGame pointer_game() {
  AbstractGame g;
  g.x1 = {"1", "2"};
  g.x2 = {"00", "01", "10", "11"};
  g.answers = {"0", "1"};
  g.p.assign(2, std::vector<double>(4, 1.0 / 8));
  g.payoff.assign(2, std::vector<std::vector<double>>(4, std::vector<double>(2, 0)));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) {
      const int bit = g.x2[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] - '0';
      g.payoff[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(bit)] = 1;
    }
  }
  return g;
}

AbstractGame identity_game(int size) {
  if (size < 1) throw InvalidArgument("identity game needs size >= 1");
  AbstractGame g;
  g.x1 = {"-"};
  for (int i = 0; i < size; ++i) {
    g.x2.push_back(std::to_string(i));
    g.answers.push_back(std::to_string(i));
  }
  const auto n = static_cast<std::size_t>(size);
  g.p = {std::vector<double>(n, 1.0 / size)};
  g.payoff = {std::vector<std::vector<double>>(n, std::vector<double>(n, 0))};
  for (std::size_t i = 0; i < n; ++i) g.payoff[0][i][i] = 1;
  return g;
}

}  // namespace pings::interactivity
