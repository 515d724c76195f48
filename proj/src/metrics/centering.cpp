#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "pings/data.hpp"
#include "pings/metrics.hpp"

namespace pings::metrics {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const std::unordered_map<std::string, Tag>& lexicon() {
  static const std::unordered_map<std::string, Tag> table = [] {
    static const std::unordered_map<std::string, Tag> names = {
        {"DET", Tag::kDet},   {"PRON", Tag::kPron}, {"WH", Tag::kWh},     {"EX", Tag::kEx},
        {"PREP", Tag::kPrep}, {"CONJ", Tag::kConj}, {"AUX", Tag::kAux},   {"VERB", Tag::kVerb},
        {"ADV", Tag::kAdv},   {"ADJ", Tag::kAdj},   {"INTJ", Tag::kIntj}, {"NUM", Tag::kNum},
        {"NOUN", Tag::kNoun}};
    std::unordered_map<std::string, Tag> out;
    std::istringstream in{std::string(data::centering_lexicon)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      std::string tag = line.substr(tab + 1);
      while (!tag.empty() && std::isspace(static_cast<unsigned char>(tag.back()))) tag.pop_back();
      const auto it = names.find(tag);
      if (it == names.end()) throw Error("bad centering lexicon tag: " + tag);
      out[line.substr(0, tab)] = it->second;
    }
    return out;
  }();
  return table;
}

struct Tok {
  std::string text;  // as written
  Tag tag = Tag::kPunct;
  bool finite = false;  // verbs only
  bool clause_break = false;
};

bool word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

// Words keep inner apostrophes and hyphens. Clitics are split off the way
// common tokenizers do it ("don't" -> "do" "n't", "it's" -> "it" "'s").
std::vector<std::string> raw_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      if (c == '\n') out.emplace_back("\n");
      ++i;
      continue;
    }
    if (!word_byte(c)) {
      out.emplace_back(1, static_cast<char>(c));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size()) {
      const auto d = static_cast<unsigned char>(text[j]);
      if (word_byte(d)) {
        ++j;
      } else if ((d == '\'' || d == '-') && j + 1 < text.size() &&
                 word_byte(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
      } else {
        break;
      }
    }
    std::string w(text.substr(i, j - i));
    const std::string lw = lower(w);
    if (!lexicon().count(lw)) {
      if (ends_with(lw, "n't")) {
        out.push_back(w.substr(0, w.size() - 3));
        out.push_back(w.substr(w.size() - 3));
        i = j;
        continue;
      }
      bool split = false;
      for (std::string_view clitic : {"'s", "'m", "'re", "'ve", "'ll", "'d"}) {
        if (ends_with(lw, clitic)) {
          out.push_back(w.substr(0, w.size() - clitic.size()));
          out.push_back(w.substr(w.size() - clitic.size()));
          split = true;
          break;
        }
      }
      if (split) {
        i = j;
        continue;
      }
    }
    out.push_back(std::move(w));
    i = j;
  }
  return out;
}

bool clause_punct(std::string_view t) {
  return t == "." || t == "!" || t == "?" || t == ";" || t == ":" || t == "\n";
}

std::vector<std::vector<Tok>> tag_clauses(std::string_view utterance) {
  std::vector<std::vector<Tok>> clauses(1);
  bool sentence_start = true;
  const auto words = raw_tokens(utterance);
  for (std::size_t k = 0; k < words.size(); ++k) {
    const std::string& w = words[k];
    Tok tok;
    tok.text = w;
    if (clause_punct(w)) {
      if (!clauses.back().empty()) clauses.emplace_back();
      sentence_start = true;
      continue;
    }
    if (!word_byte(static_cast<unsigned char>(w[0]))) {
      tok.tag = Tag::kPunct;
      clauses.back().push_back(tok);
      continue;
    }
    const std::string lw = lower(w);
    // Possessive 's after a non-pronoun carries no role of its own.
    if (lw == "'s" && !clauses.back().empty() && clauses.back().back().tag != Tag::kPron) {
      continue;
    }
    const bool cap = std::isupper(static_cast<unsigned char>(w[0])) != 0;
    tok.tag = tag_word(w, cap && !sentence_start);
    if (tok.tag == Tag::kAux) tok.finite = true;
    if (tok.tag == Tag::kVerb) {
      const bool after_to = !clauses.back().empty() && lower(clauses.back().back().text) == "to";
      const bool unknown_ing = !lexicon().count(lw) && ends_with(lw, "ing");
      tok.finite = !after_to && !unknown_ing;
    }
    clauses.back().push_back(tok);
    sentence_start = false;
  }
  if (clauses.back().empty()) clauses.pop_back();
  return clauses;
}

bool np_tag(Tag t) {
  return t == Tag::kDet || t == Tag::kAdj || t == Tag::kNoun || t == Tag::kPron || t == Tag::kNum;
}

std::string normalize_np(const std::vector<Tok>& clause, std::size_t begin, std::size_t end) {
  while (begin < end && clause[begin].tag == Tag::kDet) ++begin;
  std::string out;
  for (std::size_t k = begin; k < end; ++k) {
    std::string w;
    for (char c : clause[k].text) {
      const auto u = static_cast<unsigned char>(c);
      if (word_byte(u)) w.push_back(static_cast<char>(std::tolower(u)));
    }
    if (w.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

}  // namespace

std::string_view to_string(Transition t) {
  switch (t) {
    case Transition::kStart: return "Start";
    case Transition::kContinue: return "Continue";
    case Transition::kRetain: return "Retain";
    case Transition::kSmoothShift: return "SmoothShift";
    case Transition::kRoughShift: return "RoughShift";
  }
  return "?";
}

Tag tag_word(std::string_view word, bool capitalized_mid_sentence) {
  const std::string w = lower(word);
  if (const auto it = lexicon().find(w); it != lexicon().end()) return it->second;
  if (capitalized_mid_sentence) return Tag::kNoun;
  if (std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c) || c == '-'; })) {
    return Tag::kNum;
  }
  if (std::isdigit(static_cast<unsigned char>(w[0]))) return Tag::kNum;
  if (ends_with(w, "ly")) return Tag::kAdv;
  if (ends_with(w, "ing")) return Tag::kVerb;  // demoted to a noun after a determiner, see below
  if (ends_with(w, "ed")) return Tag::kVerb;
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "al", "ish", "less", "ic"}) {
    if (ends_with(w, s)) return Tag::kAdj;
  }
  if (w.size() > 3 && ends_with(w, "y") && !ends_with(w, "ay") && !ends_with(w, "ey") &&
      !ends_with(w, "oy") && !ends_with(w, "ty")) {
    return Tag::kAdj;
  }
  return Tag::kNoun;
}

std::string preprocess(std::string_view turn_text) {
  static const std::regex escaped_newline(R"(\\n)");
  static const std::regex numbering(R"(^\s*\d+\.\s*)");
  static const std::regex label(R"(^\s*[A-Za-z]+:\s*)");
  std::string s = std::regex_replace(std::string(turn_text), escaped_newline, " ");
  s = std::regex_replace(s, numbering, "");
  for (std::string prev; prev != s;) {
    prev = s;
    s = std::regex_replace(s, label, "", std::regex_constants::format_first_only);
  }
  return s;
}

std::vector<NounPhrase> extract_nps(std::string_view utterance) {
  std::vector<NounPhrase> out;
  int offset = 0;
  for (auto& clause : tag_clauses(preprocess(utterance))) {
    // An -ing word after a determiner or adjective reads as a noun.
    for (std::size_t k = 1; k < clause.size(); ++k) {
      if (clause[k].tag == Tag::kVerb && !clause[k].finite && ends_with(lower(clause[k].text), "ing") &&
          (clause[k - 1].tag == Tag::kDet || clause[k - 1].tag == Tag::kAdj ||
           clause[k - 1].tag == Tag::kPrep)) {
        clause[k].tag = Tag::kNoun;
      }
    }
    std::size_t finite = clause.size();
    for (std::size_t k = 0; k < clause.size(); ++k) {
      if ((clause[k].tag == Tag::kAux || clause[k].tag == Tag::kVerb) && clause[k].finite) {
        finite = k;
        break;
      }
    }
    const bool inverted = finite == 0 && clause[0].tag == Tag::kAux;
    bool first_np = true;

    std::size_t k = 0;
    while (k < clause.size()) {
      if (!np_tag(clause[k].tag)) {
        ++k;
        continue;
      }
      const std::size_t begin = k;
      bool head = false;
      while (k < clause.size() && np_tag(clause[k].tag)) {
        const Tag t = clause[k].tag;
        // A pronoun closes its phrase; a noun after a pronoun starts a new one.
        if (head && t != Tag::kNoun && t != Tag::kNum && clause[k - 1].tag == Tag::kNoun) break;
        if (k > begin && clause[k - 1].tag == Tag::kPron) break;
        head = head || t == Tag::kNoun || t == Tag::kPron;
        ++k;
      }
      if (!head) continue;
      NounPhrase np;
      np.text = normalize_np(clause, begin, k);
      if (np.text.empty()) continue;
      np.position = offset + static_cast<int>(begin);
      if (finite == clause.size()) {
        np.role = Role::kObject;
      } else if (begin < finite) {
        np.role = Role::kSubject;
      } else if (inverted && first_np) {
        np.role = Role::kSubject;
      } else {
        std::size_t p = begin;
        while (p > 0 && clause[p - 1].tag == Tag::kAdv) --p;
        const Tag before = p > 0 ? clause[p - 1].tag : Tag::kPunct;
        np.role = (before == Tag::kVerb || before == Tag::kAux || before == Tag::kPrep)
                      ? Role::kObject
                      : Role::kOther;
      }
      if (begin > finite) first_np = false;
      out.push_back(std::move(np));
    }
    offset += static_cast<int>(clause.size());
  }
  return out;
}

CenterState centers(const std::vector<NounPhrase>& nps, const std::vector<std::string>& prev_cf) {
  CenterState st;
  for (Role r : {Role::kSubject, Role::kObject, Role::kOther}) {
    for (const auto& np : nps) {
      if (np.role != r) continue;
      if (std::find(st.cf.begin(), st.cf.end(), np.text) == st.cf.end()) st.cf.push_back(np.text);
      if (!st.cp && r != Role::kOther) st.cp = np.text;
    }
  }
  for (const auto& e : prev_cf) {
    if (std::find(st.cf.begin(), st.cf.end(), e) != st.cf.end()) {
      st.cb = e;
      break;
    }
  }
  return st;
}

Transition classify(const std::optional<std::string>& prev_cb,
                    const std::optional<std::string>& cb, const std::optional<std::string>& cp) {
  if (!cb) return Transition::kRoughShift;
  if (cb == prev_cb) return cb == cp ? Transition::kContinue : Transition::kRetain;
  return cb == cp ? Transition::kSmoothShift : Transition::kRoughShift;
}

std::optional<double> coherence_score(const std::vector<Transition>& ts,
                                      const CenteringWeights& w) {
  double sum = 0;
  int n = 0;
  for (Transition t : ts) {
    switch (t) {
      case Transition::kStart: continue;
      case Transition::kContinue: sum += w.cont; break;
      case Transition::kRetain: sum += w.retain; break;
      case Transition::kSmoothShift: sum += w.smooth; break;
      case Transition::kRoughShift: sum += w.rough; break;
    }
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::vector<Transition> transitions(const std::vector<std::string>& utterances) {
  std::vector<Transition> out;
  std::vector<std::string> prev_cf;
  std::optional<std::string> prev_cb;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    const CenterState st = centers(extract_nps(utterances[i]), prev_cf);
    out.push_back(i == 0 ? Transition::kStart : classify(prev_cb, st.cb, st.cp));
    prev_cf = st.cf;
    prev_cb = st.cb;
  }
  return out;
}

CenteringRow centering_metrics(const Transcript& t, const CenteringWeights& weights) {
  std::vector<std::string> us;
  for (const auto& turn : t.turns) us.push_back(turn.text);
  const auto ts = transitions(us);
  CenteringRow row;
  row.instance_id = t.instance_id;
  row.turn_budget = t.budget.turn_budget;
  for (Transition x : ts) ++row.counts[static_cast<std::size_t>(x)];
  row.cs = coherence_score(ts, weights);
  return row;
}

}  // namespace pings::metrics
