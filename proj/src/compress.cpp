#include "bc/compress.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "bc/error.hpp"

namespace bc {

void SearchConfig::validate() const {
  if (budget_chars == 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  if (beam_width == 0) throw Error(ErrorCode::InvalidArgument, "beam width must be >= 1");
  if (max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
  if (max_neighbors == 0) throw Error(ErrorCode::InvalidArgument, "neighbor cap must be >= 1");
  if (!std::isfinite(lambda_accuracy) || lambda_accuracy < 0) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be finite and non-negative");
  }
  limits.validate();
}

Candidate evaluate_candidate(Program program, std::span<const Statement> corpus, const SearchConfig& cfg) {
  const ClosureResult cl = closure(program, cfg.limits);
  Candidate c;
  c.report = evaluate(cl.bracket_free, corpus, program_size(program), cl.truncated.any());
  if (c.report.size_chars <= cfg.budget_chars) {
    c.objective = c.report.completeness.value() + cfg.lambda_accuracy * c.report.accuracy.value();
  }
  c.program = std::move(program);
  return c;
}

namespace {

const std::string kOpenTok(kOpen);
const std::string kCloseTok(kClose);

using Tokens = std::vector<std::string>;

// Hands out CAT0, CAT1, ... skipping anything already used as a word.
class CategoryNames {
 public:
  template <class Range>
  void reserve(const Range& statements) {
    for (const Statement& s : statements) {
      for (const std::string& t : s.tokens()) taken_.insert(t);
    }
  }

  std::string peek() const {
    std::size_t k = next_;
    while (taken_.contains("CAT" + std::to_string(k))) ++k;
    return "CAT" + std::to_string(k);
  }

  std::string take() {
    std::string name = peek();
    taken_.insert(name);
    next_ = std::stoul(name.substr(3)) + 1;
    return name;
  }

 private:
  std::unordered_set<std::string> taken_;
  std::size_t next_ = 0;
};

struct SlotKey {
  Words prefix;
  Words suffix;
  auto operator<=>(const SlotKey&) const = default;
};

bool fits(const Words& s, const SlotKey& k) {
  if (s.size() < k.prefix.size() + k.suffix.size() + 1) return false;
  return std::equal(k.prefix.begin(), k.prefix.end(), s.begin()) &&
         std::equal(k.suffix.rbegin(), k.suffix.rend(), s.rbegin());
}

Words span_of(const Words& s, const SlotKey& k) {
  return Words(s.begin() + static_cast<std::ptrdiff_t>(k.prefix.size()),
               s.end() - static_cast<std::ptrdiff_t>(k.suffix.size()));
}

Tokens template_tokens(const SlotKey& k, const std::string& cat) {
  Tokens t = k.prefix;
  t.insert(t.end(), {kOpenTok, cat, kCloseTok});
  t.insert(t.end(), k.suffix.begin(), k.suffix.end());
  return t;
}

std::size_t words_chars(const Words& w) {
  std::size_t n = w.empty() ? 0 : w.size() - 1;
  for (const std::string& x : w) n += x.size();
  return n;
}

}  // namespace

Program induce_slots(std::span<const Statement> corpus) {
  std::vector<Words> sentences;
  for (const Statement& s : corpus) sentences.push_back(s.tokens());
  CategoryNames names;
  names.reserve(corpus);

  std::set<SlotKey> keys;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    for (std::size_t j = i + 1; j < sentences.size(); ++j) {
      const Words& a = sentences[i];
      const Words& b = sentences[j];
      const std::size_t shortest = std::min(a.size(), b.size());
      std::size_t p = 0;
      while (p < shortest && a[p] == b[p]) ++p;
      p = std::min(p, shortest - 1);
      std::size_t q = 0;
      while (p + q + 1 < shortest && a[a.size() - 1 - q] == b[b.size() - 1 - q]) ++q;
      if (p + q == 0) continue;
      keys.insert({Words(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(p)),
                   Words(a.end() - static_cast<std::ptrdiff_t>(q), a.end())});
    }
  }

  Program out;
  std::vector<bool> grouped(sentences.size(), false);
  while (true) {
    const std::string cat = names.peek();
    std::optional<SlotKey> best;
    std::vector<std::size_t> best_members;
    long best_saving = 0;
    for (const SlotKey& k : keys) {
      std::vector<std::size_t> members;
      long verbatim = 0;
      long factored = static_cast<long>(Statement::from_tokens(template_tokens(k, cat)).str().size() + 1);
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (grouped[i] || !fits(sentences[i], k)) continue;
        members.push_back(i);
        verbatim += static_cast<long>(words_chars(sentences[i]) + 1);
        factored += static_cast<long>(cat.size() + 1 + words_chars(span_of(sentences[i], k)) + 1);
      }
      if (members.size() < 2) continue;
      const long saving = verbatim - factored;
      if (saving <= 0) continue;
      if (!best || saving > best_saving ||
          (saving == best_saving && members.size() > best_members.size())) {
        best = k;
        best_saving = saving;
        best_members = std::move(members);
      }
    }
    if (!best) break;
    const std::string name = names.take();
    for (std::size_t i : best_members) {
      Tokens v{name};
      Words sp = span_of(sentences[i], *best);
      v.insert(v.end(), sp.begin(), sp.end());
      out.add(Statement::from_tokens(std::move(v)));
      grouped[i] = true;
    }
    out.add(Statement::from_tokens(template_tokens(*best, name)));
  }
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!grouped[i]) out.add(corpus[i]);
  }
  return out;
}

namespace {

bool is_single_word_bracket(const Tokens& t, std::size_t i) {
  return i + 2 < t.size() && t[i] == kOpenTok && t[i + 1] != kOpenTok && t[i + 1] != kCloseTok &&
         t[i + 2] == kCloseTok;
}

struct ProgramShape {
  std::set<std::string> categories;                 // words used as a whole bracket content
  std::map<std::string, std::vector<Words>> variants;  // bracket-free endings per category
};

ProgramShape shape_of(const Program& p) {
  ProgramShape sh;
  for (const Statement& s : p) {
    const Tokens& t = s.tokens();
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (is_single_word_bracket(t, i)) sh.categories.insert(t[i + 1]);
    }
  }
  for (const Statement& s : p) {
    const Tokens& t = s.tokens();
    if (s.has_brackets() || t.size() < 2 || !sh.categories.contains(t[0])) continue;
    sh.variants[t[0]].emplace_back(t.begin() + 1, t.end());
  }
  return sh;
}

Program rebuild(const std::vector<Statement>& statements) { return Program(statements); }

}  // namespace

std::vector<Program> all_moves(const Program& program, std::span<const Statement> corpus,
                               const ExpansionLimits& limits) {
  const std::vector<Statement>& st = program.statements();
  const ProgramShape sh = shape_of(program);
  std::vector<Program> out;
  std::unordered_set<std::string> seen{program.str()};
  auto push = [&](Program p) {
    if (p.empty()) return;
    if (seen.insert(p.str()).second) out.push_back(std::move(p));
  };

  // (a) merge categories
  for (auto a = sh.categories.begin(); a != sh.categories.end(); ++a) {
    if (!sh.variants.contains(*a)) continue;
    for (auto b = std::next(a); b != sh.categories.end(); ++b) {
      if (!sh.variants.contains(*b)) continue;
      std::vector<Statement> merged;
      for (const Statement& s : st) {
        Tokens t = s.tokens();
        std::replace(t.begin(), t.end(), *b, *a);
        merged.push_back(Statement::from_tokens(std::move(t)));
      }
      push(rebuild(merged));
    }
  }

  // (b) delete a statement
  for (std::size_t i = 0; i < st.size(); ++i) {
    std::vector<Statement> rest;
    for (std::size_t j = 0; j < st.size(); ++j) {
      if (j != i) rest.push_back(st[j]);
    }
    push(rebuild(rest));
  }

  // (c) add an uncovered sentence verbatim
  const ClosureResult cl = closure(program, limits);
  std::unordered_set<Statement, StatementHash> produced(cl.bracket_free.begin(), cl.bracket_free.end());
  std::vector<const Statement*> uncovered;
  for (const Statement& s : corpus) {
    if (!produced.contains(s)) uncovered.push_back(&s);
  }
  for (const Statement* s : uncovered) {
    Program p = program;
    p.add(*s);
    push(std::move(p));
  }

  // (d) widen a category from a one-slot template
  for (const Statement& s : st) {
    const Tokens& t = s.tokens();
    if (std::count(t.begin(), t.end(), kOpenTok) != 1) continue;
    auto open = std::find(t.begin(), t.end(), kOpenTok);
    const std::size_t i = static_cast<std::size_t>(open - t.begin());
    if (!is_single_word_bracket(t, i)) continue;
    SlotKey key{Words(t.begin(), open), Words(open + 3, t.end())};
    for (const Statement* u : uncovered) {
      if (!fits(u->tokens(), key)) continue;
      Tokens v{t[i + 1]};
      Words sp = span_of(u->tokens(), key);
      v.insert(v.end(), sp.begin(), sp.end());
      Program p = program;
      p.add(Statement::from_tokens(std::move(v)));
      push(std::move(p));
    }
  }

  // (e) factor a literal word of a template into a category slot
  CategoryNames names;
  names.reserve(st);
  names.reserve(corpus);
  std::map<std::string, std::string> alias_of;  // category -> existing alias word
  for (const Statement& s : st) {
    const Tokens& t = s.tokens();
    if (t.size() == 4 && is_single_word_bracket(t, 1) && !sh.variants.contains(t[0])) {
      alias_of.try_emplace(t[2], t[0]);
    }
  }
  for (std::size_t si = 0; si < st.size(); ++si) {
    const Tokens& t = st[si].tokens();
    if (!st[si].has_brackets()) continue;
    std::size_t depth = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] == kOpenTok) ++depth;
      if (t[i] == kCloseTok) --depth;
      if (depth != 0 || t[i] == kCloseTok) continue;
      for (const auto& [cat, vars] : sh.variants) {
        const bool is_variant = std::any_of(vars.begin(), vars.end(),
                                            [&](const Words& v) { return v.size() == 1 && v[0] == t[i]; });
        if (!is_variant) continue;
        bool uses_cat = false;
        for (std::size_t j = 0; j + 2 < t.size(); ++j) {
          if (is_single_word_bracket(t, j) && t[j + 1] == cat) uses_cat = true;
        }
        std::vector<Statement> next = st;
        std::string slot = cat;
        if (uses_cat) {
          auto it = alias_of.find(cat);
          const bool alias_free = it != alias_of.end() &&
                                  std::find(t.begin(), t.end(), it->second) == t.end();
          if (alias_free) {
            slot = it->second;
          } else {
            CategoryNames fresh = names;
            slot = fresh.take();
            next.push_back(Statement::from_tokens({slot, kOpenTok, cat, kCloseTok}));
          }
        }
        Tokens nt = t;
        nt[i] = kCloseTok;
        nt.insert(nt.begin() + static_cast<std::ptrdiff_t>(i), {kOpenTok, slot});
        next[si] = Statement::from_tokens(std::move(nt));
        push(rebuild(next));
      }
    }
  }
  return out;
}

std::vector<Program> neighbors(const Candidate& cand, std::span<const Statement> corpus,
                               const SearchConfig& cfg, std::mt19937_64& rng) {
  std::vector<Program> moves = all_moves(cand.program, corpus, cfg.limits);
  if (moves.size() > cfg.max_neighbors) {
    std::shuffle(moves.begin(), moves.end(), rng);
    moves.resize(cfg.max_neighbors);
  }
  return moves;
}

Program greedy_prefix(std::span<const Statement> corpus, std::size_t budget) {
  Program p;
  std::size_t size = 0;
  for (const Statement& s : corpus) {
    const std::size_t add = s.str().size() + (p.empty() ? 0 : 1);
    if (size + add > budget) continue;
    if (p.add(s)) size += add;
  }
  return p;
}

namespace {

bool better(const Candidate& a, const std::string& ka, const Candidate& b, const std::string& kb) {
  if (a.objective != b.objective) return a.objective > b.objective;
  if (a.report.size_chars != b.report.size_chars) return a.report.size_chars < b.report.size_chars;
  return ka < kb;
}

}  // namespace

Candidate compress(std::span<const Statement> corpus, const SearchConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  for (const Statement& s : corpus) shortest = std::min(shortest, s.str().size());
  if (cfg.budget_chars < shortest) {
    throw Error(ErrorCode::BudgetTooSmall, "budget " + std::to_string(cfg.budget_chars) +
                                               " is below the shortest corpus statement (" +
                                               std::to_string(shortest) + " chars)");
  }

  std::mt19937_64 rng(cfg.seed);
  std::unordered_map<std::string, Candidate> memo;
  auto eval = [&](Program p) -> const std::string& {
    std::string key = p.str();
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, evaluate_candidate(std::move(p), corpus, cfg)).first;
    return it->first;
  };

  std::optional<std::string> best;
  auto consider = [&](const std::string& key) {
    const Candidate& c = memo.at(key);
    if (!c.within_budget()) return;
    if (!best || better(c, key, memo.at(*best), *best)) best = key;
  };

  std::vector<std::string> beam;
  for (Program start : {induce_slots(corpus), greedy_prefix(corpus, cfg.budget_chars)}) {
    const std::string& key = eval(std::move(start));
    if (std::find(beam.begin(), beam.end(), key) == beam.end()) beam.push_back(key);
    consider(key);
  }

  auto rank = [&](std::vector<std::string>& keys) {
    std::sort(keys.begin(), keys.end(), [&](const std::string& a, const std::string& b) {
      return better(memo.at(a), a, memo.at(b), b);
    });
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  };
  rank(beam);

  for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
    std::vector<std::string> pool = beam;
    for (const std::string& key : beam) {
      for (Program& p : neighbors(memo.at(key), corpus, cfg, rng)) {
        const std::string& k = eval(std::move(p));
        pool.push_back(k);
        consider(k);
      }
    }
    rank(pool);
    if (pool.size() > cfg.beam_width) pool.resize(cfg.beam_width);
    if (pool == beam) break;
    beam = std::move(pool);
  }

  return memo.at(*best);
}

std::vector<FrontierPoint> reference_points(std::span<const Statement> corpus) {
  const std::size_t half = corpus.size() / 2;
  std::unordered_set<std::string> vocab;
  for (const Statement& s : corpus) vocab.insert(s.tokens().begin(), s.tokens().end());
  std::string foreign = "NOT_IN_CORPUS";
  for (std::size_t k = 0; vocab.contains(foreign); ++k) foreign = "NOT_IN_CORPUS_" + std::to_string(k);

  Program a;
  for (std::size_t i = 0; i < half; ++i) a.add(corpus[i]);
  Program b = a;
  for (std::size_t i = 0; i < half; ++i) b.add(Statement::from_words({foreign, std::to_string(i)}));
  Program c;
  for (const Statement& s : corpus) c.add(s);

  std::vector<FrontierPoint> out;
  for (auto& [label, prog] : {std::pair<const char*, const Program&>{"a", a}, {"b", b}, {"c", c}}) {
    const std::size_t size = program_size(prog);
    out.push_back({size, evaluate(prog.statements(), corpus, size, false), label});
  }
  return out;
}

std::vector<FrontierPoint> frontier_sweep(std::span<const Statement> corpus,
                                          std::span<const std::size_t> budgets, const SearchConfig& cfg,
                                          const std::function<void(const std::string&)>& log) {
  if (budgets.empty()) throw Error(ErrorCode::InvalidArgument, "no budgets given");
  std::vector<FrontierPoint> out;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    SearchConfig run = cfg;
    run.budget_chars = budgets[i];
    run.seed = cfg.seed + i;
    try {
      Candidate c = compress(corpus, run);
      out.push_back({budgets[i], c.report, "bc"});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetTooSmall) throw;
      if (log) log("skipping budget " + std::to_string(budgets[i]) + ": " + e.what());
    }
  }
  for (FrontierPoint& p : reference_points(corpus)) out.push_back(std::move(p));
  return out;
}

}  // namespace bc
