#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bc/syntax.hpp"

namespace bc {

struct ExpansionLimits {
  std::size_t max_rounds = 100;
  std::size_t max_statements = 100000;
  // Top-level elements: each word counts 1, each outermost bracket counts 1.
  std::size_t max_tokens_per_statement = 64;

  /// Throws InvalidLimits if any limit is zero.
  void validate() const;
};

struct TruncationFlags {
  bool rounds = false;
  bool statements = false;
  bool tokens = false;

  bool any() const noexcept { return rounds || statements || tokens; }
};

/// Bracket-free statements available for matching, ordered lexicographically
/// by token so that all statements sharing a prefix are contiguous.
class Pool {
 public:
  Pool() = default;
  explicit Pool(std::span<const Statement> statements);

  /// Inserts a bracket-free statement tagged with the round that produced it.
  /// Returns false if it was already present.
  bool insert(const Words& words, std::size_t generation = 0);
  bool contains(const Words& words) const { return entries_.contains(words); }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Calls f(statement, generation) for every statement starting with `prefix`,
  /// in lexicographic order. An empty prefix visits everything.
  template <class F>
  void for_each_with_prefix(const Words& prefix, F&& f) const {
    for (auto it = entries_.lower_bound(prefix); it != entries_.end(); ++it) {
      const Words& w = it->first;
      if (w.size() < prefix.size() || !std::equal(prefix.begin(), prefix.end(), w.begin())) break;
      f(w, it->second);
    }
  }

 private:
  std::map<Words, std::size_t> entries_;
};

/// Distinct contents of ripe brackets (no nested bracket inside), in order of
/// first occurrence. The empty content is one class like any other.
std::vector<Words> ripe_contents(const Statement& s);

/// Endings e such that content ++ e is in the pool; for empty content, every
/// pool statement in full. Lexicographic order of the matched statements.
std::vector<Words> match_endings(const Words& content, const Pool& pool);

/// All statements obtained by substituting every ripe bracket class with one
/// of its endings, equal contents receiving equal endings. Empty when some
/// class has no ending. Sorted and duplicate-free.
std::vector<Statement> expand_statement(const Statement& s, const Pool& pool);

struct ClosureEntry {
  Statement statement;
  std::optional<std::size_t> parent;  // index into entries; nullopt for program statements
  std::size_t round = 0;              // 0 for program statements
};

struct ClosureResult {
  std::vector<Statement> bracket_free;  // program order, then derivation order
  std::vector<Statement> residual;
  std::vector<ClosureEntry> entries;    // every retained statement, insertion order
  TruncationFlags truncated;
  std::size_t rounds_used = 0;
};

/// Iterated expansion to a fixpoint or until a limit trips. Each round matches
/// against the bracket-free set as it stood when the round began.
ClosureResult closure(const Program& p, const ExpansionLimits& limits);

/// Canonical listing order: program statements first, then derived ones sorted.
std::vector<Statement> canonical_order(const ClosureResult& r, std::span<const Statement> part);

/// Random grounded statements for text generation. Deterministic per seed.
/// Throws NoBracketedStatements when the program has nothing to expand.
std::vector<Statement> sample(const Program& p, const ExpansionLimits& limits,
                              std::uint64_t seed, std::size_t count);

}  // namespace bc
