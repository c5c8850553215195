#include "bc/engine.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <random>
#include <unordered_map>

#include "bc/error.hpp"

namespace bc {

void ExpansionLimits::validate() const {
  if (max_rounds == 0 || max_statements == 0 || max_tokens_per_statement == 0) {
    throw Error(ErrorCode::InvalidLimits, "expansion limits must all be >= 1");
  }
}

Pool::Pool(std::span<const Statement> statements) {
  for (const Statement& s : statements) {
    if (!s.has_brackets()) insert(s.tokens());
  }
}

bool Pool::insert(const Words& words, std::size_t generation) {
  return entries_.emplace(words, generation).second;
}

namespace {

struct RipeSlot {
  std::size_t open = 0;
  std::size_t close = 0;
  std::size_t cls = 0;
};

// Where the ripe brackets of a statement sit and how they group by content.
struct Shape {
  std::vector<Words> classes;
  std::vector<RipeSlot> slots;             // ascending by position
  std::vector<std::size_t> top_weight;     // outermost occurrences per class
  std::size_t base_top = 0;                // top-level size without outermost ripe brackets
};

Shape analyze(const Statement& s) {
  struct Open {
    std::size_t pos;
    bool has_child;
  };
  Shape shape;
  const auto& tokens = s.tokens();
  std::vector<Open> stack;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t == kOpen) {
      if (!stack.empty()) stack.back().has_child = true;
      stack.push_back({i, false});
    } else if (t == kClose) {
      Open o = stack.back();
      stack.pop_back();
      const bool outermost = stack.empty();
      if (!o.has_child) {
        Words content(tokens.begin() + static_cast<std::ptrdiff_t>(o.pos + 1),
                      tokens.begin() + static_cast<std::ptrdiff_t>(i));
        auto it = std::find(shape.classes.begin(), shape.classes.end(), content);
        std::size_t cls = static_cast<std::size_t>(it - shape.classes.begin());
        if (it == shape.classes.end()) {
          shape.classes.push_back(std::move(content));
          shape.top_weight.push_back(0);
        }
        shape.slots.push_back({o.pos, i, cls});
        if (outermost) ++shape.top_weight[cls];
      } else if (outermost) {
        ++shape.base_top;
      }
    } else if (stack.empty()) {
      ++shape.base_top;
    }
  }
  std::sort(shape.slots.begin(), shape.slots.end(),
            [](const RipeSlot& a, const RipeSlot& b) { return a.open < b.open; });
  return shape;
}

std::vector<std::string> substitute(const Statement& s, const Shape& shape,
                                    const std::vector<const Words*>& choice) {
  const auto& tokens = s.tokens();
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  for (const RipeSlot& slot : shape.slots) {
    out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i),
               tokens.begin() + static_cast<std::ptrdiff_t>(slot.open));
    const Words& ending = *choice[slot.cls];
    out.insert(out.end(), ending.begin(), ending.end());
    i = slot.close + 1;
  }
  out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.end());
  return out;
}

struct Ending {
  Words words;
  bool fresh = false;
};

void collect_endings(const Words& content, const Pool& pool, std::size_t fresh_generation,
                     std::vector<Ending>& out) {
  pool.for_each_with_prefix(content, [&](const Words& w, std::size_t gen) {
    out.push_back({Words(w.begin() + static_cast<std::ptrdiff_t>(content.size()), w.end()),
                   gen == fresh_generation});
  });
}

// Enumerates substitution tuples for one statement.
//
// When `only_fresh` is set, only tuples using at least one fresh ending are
// produced (semi-naive evaluation: the others were produced in earlier rounds).
// Tuples whose result would exceed `max_top` top-level elements are skipped and
// reported through `dropped`.
class Expander {
 public:
  Expander(const Statement& s, const Shape& shape, const Pool& pool, std::size_t fresh_generation,
           std::size_t max_top)
      : s_(s), shape_(shape), max_top_(max_top) {
    const std::size_t k = shape.classes.size();
    all_.resize(k);
    old_.resize(k);
    fresh_.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<Ending> endings;
      collect_endings(shape.classes[c], pool, fresh_generation, endings);
      for (Ending& e : endings) {
        words_.push_back(std::make_unique<Words>(std::move(e.words)));
        const Words* w = words_.back().get();
        all_[c].push_back(w);
        (e.fresh ? fresh_ : old_)[c].push_back(w);
      }
      auto by_len = [](const Words* a, const Words* b) { return a->size() < b->size(); };
      std::stable_sort(all_[c].begin(), all_[c].end(), by_len);
      std::stable_sort(old_[c].begin(), old_[c].end(), by_len);
      std::stable_sort(fresh_[c].begin(), fresh_[c].end(), by_len);
    }
  }

  template <class Emit>
  void run(bool only_fresh, Emit&& emit) {
    const std::size_t k = shape_.classes.size();
    std::vector<const std::vector<const Words*>*> lists(k);
    choice_.assign(k, nullptr);
    if (!only_fresh) {
      for (std::size_t c = 0; c < k; ++c) lists[c] = &all_[c];
      dfs(lists, 0, shape_.base_top, emit);
      return;
    }
    // Tuple with first fresh component at class j: old before j, fresh at j, anything after.
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t c = 0; c < k; ++c) lists[c] = c < j ? &old_[c] : c == j ? &fresh_[c] : &all_[c];
      dfs(lists, 0, shape_.base_top, emit);
    }
  }

  bool dropped() const noexcept { return dropped_; }

 private:
  template <class Emit>
  void dfs(const std::vector<const std::vector<const Words*>*>& lists, std::size_t c,
           std::size_t top, Emit& emit) {
    if (c == lists.size()) {
      emit(substitute(s_, shape_, choice_));
      return;
    }
    for (std::size_t d = c; d < lists.size(); ++d) {
      if (lists[d]->empty()) return;
    }
    const std::size_t weight = shape_.top_weight[c];
    for (const Words* w : *lists[c]) {
      const std::size_t next = top + weight * w->size();
      if (next > max_top_) {
        dropped_ = true;
        break;  // lists are sorted by length
      }
      choice_[c] = w;
      dfs(lists, c + 1, next, emit);
    }
  }

  const Statement& s_;
  const Shape& shape_;
  std::size_t max_top_;
  std::vector<std::unique_ptr<Words>> words_;
  std::vector<std::vector<const Words*>> all_, old_, fresh_;
  std::vector<const Words*> choice_;
  bool dropped_ = false;
};

constexpr std::size_t kNoGeneration = std::numeric_limits<std::size_t>::max();

}  // namespace

std::vector<Words> ripe_contents(const Statement& s) { return analyze(s).classes; }

std::vector<Words> match_endings(const Words& content, const Pool& pool) {
  std::vector<Words> out;
  pool.for_each_with_prefix(content, [&](const Words& w, std::size_t) {
    out.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(content.size()), w.end());
  });
  return out;
}

std::vector<Statement> expand_statement(const Statement& s, const Pool& pool) {
  Shape shape = analyze(s);
  if (shape.classes.empty()) return {};
  std::vector<Statement> out;
  Expander ex(s, shape, pool, kNoGeneration, std::numeric_limits<std::size_t>::max());
  ex.run(false, [&](std::vector<std::string> tokens) {
    if (!tokens.empty()) out.push_back(Statement::from_tokens(std::move(tokens)));
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ClosureResult closure(const Program& p, const ExpansionLimits& limits) {
  limits.validate();
  ClosureResult r;
  std::unordered_map<Statement, std::size_t, StatementHash> index;
  Pool pool;
  struct Active {
    std::size_t entry;
    Shape shape;
  };
  std::vector<Active> active;

  auto admit = [&](ClosureEntry e) {
    const Statement& s = e.statement;
    if (s.has_brackets()) {
      active.push_back({r.entries.size(), analyze(s)});
    } else {
      pool.insert(s.tokens(), e.round);
    }
    r.entries.push_back(std::move(e));
  };

  for (const Statement& s : p) {
    index.emplace(s, r.entries.size());
    admit({s, std::nullopt, 0});
  }

  for (std::size_t round = 1; round <= limits.max_rounds; ++round) {
    std::vector<ClosureEntry> pending;
    const std::size_t fresh_generation = round - 1;
    const std::size_t n_active = active.size();
    for (std::size_t a = 0; a < n_active && !r.truncated.statements; ++a) {
      const std::size_t parent = active[a].entry;
      const Statement& s = r.entries[parent].statement;
      const bool stmt_fresh = r.entries[parent].round == fresh_generation;
      Expander ex(s, active[a].shape, pool, fresh_generation, limits.max_tokens_per_statement);
      ex.run(!stmt_fresh, [&](std::vector<std::string> tokens) {
        if (tokens.empty() || r.truncated.statements) return;
        Statement d = Statement::from_tokens(std::move(tokens));
        if (index.contains(d)) return;
        if (r.entries.size() + pending.size() >= limits.max_statements) {
          r.truncated.statements = true;
          return;
        }
        index.emplace(d, r.entries.size() + pending.size());
        pending.push_back({std::move(d), parent, round});
      });
      if (ex.dropped()) r.truncated.tokens = true;
    }
    r.rounds_used = round;
    if (pending.empty()) break;
    for (ClosureEntry& e : pending) admit(std::move(e));
    if (r.truncated.statements) break;
    if (round == limits.max_rounds) r.truncated.rounds = true;
  }

  for (const ClosureEntry& e : r.entries) {
    (e.statement.has_brackets() ? r.residual : r.bracket_free).push_back(e.statement);
  }
  return r;
}

std::vector<Statement> canonical_order(const ClosureResult& r, std::span<const Statement> part) {
  std::unordered_map<Statement, std::size_t, StatementHash> rounds;
  for (const ClosureEntry& e : r.entries) rounds.emplace(e.statement, e.round);
  std::vector<Statement> program_part;
  std::vector<Statement> derived;
  for (const Statement& s : part) {
    auto it = rounds.find(s);
    (it != rounds.end() && it->second == 0 ? program_part : derived).push_back(s);
  }
  std::sort(derived.begin(), derived.end(),
            [](const Statement& a, const Statement& b) { return a.str() < b.str(); });
  program_part.insert(program_part.end(), derived.begin(), derived.end());
  return program_part;
}

namespace {

bool starts_with(const std::vector<std::string>& tokens, const Words& prefix) {
  return tokens.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), tokens.begin());
}

// Statements reachable only through some bracket are helpers (categories,
// aliases); the rest are the ones worth sampling from.
std::vector<const Statement*> generator_statements(const Program& p) {
  std::vector<Words> targets;
  for (const Statement& s : p) {
    const auto& t = s.tokens();
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] != kOpen) continue;
      Words lead;
      for (std::size_t j = i + 1; j < t.size() && t[j] != kOpen && t[j] != kClose; ++j) lead.push_back(t[j]);
      if (!lead.empty()) targets.push_back(std::move(lead));
    }
  }
  std::vector<const Statement*> all;
  std::vector<const Statement*> generators;
  for (const Statement& s : p) {
    if (!s.has_brackets()) continue;
    all.push_back(&s);
    bool targeted = std::any_of(targets.begin(), targets.end(),
                                [&](const Words& w) { return starts_with(s.tokens(), w); });
    if (!targeted) generators.push_back(&s);
  }
  return generators.empty() ? all : generators;
}

}  // namespace

std::vector<Statement> sample(const Program& p, const ExpansionLimits& limits, std::uint64_t seed,
                              std::size_t count) {
  limits.validate();
  std::vector<const Statement*> starts = generator_statements(p);
  if (starts.empty()) {
    throw Error(ErrorCode::NoBracketedStatements, "program has no bracketed statements to sample");
  }
  const ClosureResult cl = closure(p, limits);
  const Pool pool(cl.bracket_free);

  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  std::vector<Statement> out;
  std::size_t attempts = count * 64;
  while (out.size() < count && attempts-- > 0) {
    std::vector<std::string> tokens = starts[pick(starts.size())]->tokens();
    bool ok = true;
    for (std::size_t depth = 0; depth < limits.max_rounds; ++depth) {
      Statement cur = Statement::from_tokens(tokens);
      if (!cur.has_brackets()) break;
      Shape shape = analyze(cur);
      std::vector<Words> chosen(shape.classes.size());
      for (std::size_t c = 0; c < shape.classes.size() && ok; ++c) {
        std::vector<Words> endings = match_endings(shape.classes[c], pool);
        if (endings.empty()) {
          ok = false;
        } else {
          chosen[c] = std::move(endings[pick(endings.size())]);
        }
      }
      if (!ok) break;
      std::vector<const Words*> choice;
      for (const Words& w : chosen) choice.push_back(&w);
      tokens = substitute(cur, shape, choice);
      if (tokens.empty()) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Statement s = Statement::from_tokens(std::move(tokens));
    if (s.has_brackets() || s.top_level_size() > limits.max_tokens_per_statement) continue;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace bc
