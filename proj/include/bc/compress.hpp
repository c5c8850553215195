#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bc/engine.hpp"
#include "bc/metrics.hpp"
#include "bc/syntax.hpp"

namespace bc {

struct SearchConfig {
  std::size_t budget_chars = 0;
  double lambda_accuracy = 0.5;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 32;
  std::size_t beam_width = 8;
  std::size_t max_neighbors = 64;  // per beam member and generation
  ExpansionLimits limits;

  void validate() const;
};

/// Objective given to programs over budget.
inline constexpr double kOverBudget = -std::numeric_limits<double>::infinity();

struct Candidate {
  Program program;
  MetricsReport report;
  double objective = kOverBudget;

  bool within_budget() const noexcept { return objective != kOverBudget; }
};

/// Closure + evaluate, then completeness + lambda * accuracy inside the budget.
Candidate evaluate_candidate(Program program, std::span<const Statement> corpus, const SearchConfig& cfg);

/// Greedy single-slot factoring into CATk categories and bracket templates.
Program induce_slots(std::span<const Statement> corpus);

/// Every single-step mutation of `program`: merge two categories, delete a
/// statement, add an uncovered corpus sentence, widen a category from a
/// template alignment, factor a literal word of a template into a category
/// slot (aliasing the category when the template already uses it).
/// Duplicate-free, excludes `program` itself.
std::vector<Program> all_moves(const Program& program, std::span<const Statement> corpus,
                               const ExpansionLimits& limits);

/// all_moves() capped at cfg.max_neighbors by a seeded shuffle.
std::vector<Program> neighbors(const Candidate& cand, std::span<const Statement> corpus,
                               const SearchConfig& cfg, std::mt19937_64& rng);

/// Corpus sentences taken in order, skipping any that would overflow `budget`.
Program greedy_prefix(std::span<const Statement> corpus, std::size_t budget);

/// Beam search from induce_slots() and greedy_prefix(). The result always fits
/// the budget. Throws BudgetTooSmall when not even one corpus sentence fits.
Candidate compress(std::span<const Statement> corpus, const SearchConfig& cfg);

/// Reference points: "a" half of the corpus, "b" that half plus as many
/// sentences foreign to the corpus, "c" the corpus itself.
std::vector<FrontierPoint> reference_points(std::span<const Statement> corpus);

/// One compress() point per budget (seed offset by index), labelled "bc",
/// followed by the reference points. Budgets that are too small are skipped
/// and reported through `log`.
std::vector<FrontierPoint> frontier_sweep(std::span<const Statement> corpus,
                                          std::span<const std::size_t> budgets, const SearchConfig& cfg,
                                          const std::function<void(const std::string&)>& log = {});

}  // namespace bc
