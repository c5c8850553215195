// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bc/cfg.hpp"
#include "bc/compress.hpp"
#include "bc/corpus.hpp"
#include "bc/engine.hpp"
#include "bc/horn.hpp"
#include "bc/metrics.hpp"
#include "oracles.hpp"

using namespace bc;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string data(const std::string& name) { return std::string(BC_TEST_DATA) + "/" + name; }

Program program_of(const std::vector<std::string>& lines) {
  Program p;
  for (const auto& l : lines) p.add(parse_statement(l));
  return p;
}

std::set<std::string> strs(const std::vector<Statement>& v) {
  std::set<std::string> out;
  for (const auto& s : v) out.insert(s.str());
  return out;
}

std::set<std::string> derived(const Program& p, const ClosureResult& r) {
  std::set<std::string> out = strs(r.bracket_free);
  for (const auto& s : p) out.erase(s.str());
  return out;
}

ExpansionLimits limits(std::size_t rounds, std::size_t tokens, std::size_t statements = 100000) {
  ExpansionLimits l;
  l.max_rounds = rounds;
  l.max_tokens_per_statement = tokens;
  l.max_statements = statements;
  return l;
}

Outcome girls() {
  Outcome o;
  auto r = closure(load_program(data("girls.bc")).program, {});
  o.require(strs(r.bracket_free) == std::set<std::string>{"GIRL LINDA", "GIRL MARY", "MARY LIKES PONIES",
                                                          "LINDA LIKES PONIES"},
            "bracket-free set differs");
  o.require(!r.truncated.any(), "truncated");
  return o;
}

Outcome same_content() {
  Outcome o;
  auto r = closure(load_program(data("same_content.bc")).program, {});
  auto bf = strs(r.bracket_free);
  o.require(bf == std::set<std::string>{"B C", "B D", "A C C", "A D D"}, "bracket-free set differs");
  o.require(!bf.contains("A C D") && !bf.contains("A D C"), "mixed replacement produced");
  return o;
}

Outcome guards() {
  Outcome o;
  auto p = load_program(data("name_guard.bc")).program;
  auto fresh = derived(p, closure(p, {}));
  o.require(fresh == std::set<std::string>{"MARY LIKES PONIES"}, "guard program derived " + std::to_string(fresh.size()));
  auto q = load_program(data("not.bc")).program;
  auto not_fresh = derived(q, closure(q, {}));
  o.require(not_fresh == std::set<std::string>{"MARY LIKES PONIES", "TOM LIKES PONIES , NOT !"},
            "NOT program derived a different set");
  return o;
}

Outcome empty_bracket() {
  Outcome o;
  auto r = closure(load_program(data("empty_bracket.bc")).program, limits(1, 64));
  o.require(strs(r.residual).contains("A B [B C]"), "A B [B C] missing after one round");
  o.require(r.rounds_used == 1, "more than one round");
  return o;
}

Outcome cfg_equivalence() {
  Outcome o;
  constexpr std::size_t L = 8;
  std::size_t strings = 0;
  auto check = [&](const Cfg& g, const std::string& name) {
    auto r = closure(cfg_to_bc(g), limits(100, L + 2, 10000000));
    std::set<Words> got;
    for (const Words& s : derived_strings(r.bracket_free, g.start)) {
      if (s.size() <= L) got.insert(s);
    }
    o.require(got == cfg_enumerate(g, L), name + " strings differ");
    strings += got.size();
    o.require(!r.truncated.rounds && !r.truncated.statements, name + " truncated");
  };
  check(load_cfg(data("palindrome.cfg")), "palindrome");
  std::mt19937 rng(2024);
  for (int i = 0; i < 5; ++i) check(oracle::random_cfg(rng), "random grammar " + std::to_string(i));
  if (o.ok) o.detail = "palindrome + 5 random grammars, L=8, " + std::to_string(strings) + " strings";
  return o;
}

Outcome addition() {
  Outcome o;
  auto r = closure(load_program(data("addition.bc")).program, limits(100, 7));
  std::set<std::pair<int, int>> sums;
  std::size_t wrong = 0;
  for (const auto& s : r.bracket_free) {
    const auto& t = s.tokens();
    if (t.size() != 5 || t[1] != "+" || t[3] != "=") continue;
    const int n = std::stoi(t[0]), m = std::stoi(t[2]), k = std::stoi(t[4]);
    if (k != n + m) ++wrong;
    sums.insert({n, m});
  }
  std::size_t missing = 0;
  for (int n = 0; n <= 10; ++n) {
    for (int m = 0; n + m <= 10; ++m) missing += sums.contains({n, m}) ? 0 : 1;
  }
  o.require(wrong == 0, std::to_string(wrong) + " wrong sums");
  o.require(missing == 0, std::to_string(missing) + " sums missing");
  o.detail += o.ok ? std::to_string(sums.size()) + " sums, all correct" : "";
  return o;
}

Outcome siblings() {
  Outcome o;
  auto h = load_horn(data("siblings.pl"));
  auto p = horn_to_bc(h);
  auto r = closure(p, {});
  auto corpus = load_corpus(data("siblings_corpus.txt"));
  auto rep = evaluate(r.bracket_free, corpus, program_size(p), r.truncated.any());
  o.require(r.bracket_free.size() == 24, "closure has " + std::to_string(r.bracket_free.size()) + " statements");
  o.require(rep.completeness == Ratio(1, 1), "completeness " + rep.completeness.str());
  o.require(rep.accuracy == Ratio(16, 24), "accuracy " + rep.accuracy.str());
  std::set<Words> got, want;
  for (const auto& s : r.bracket_free) {
    if (s.tokens().front() == "SIBLING") got.insert(s.tokens());
  }
  for (const Words& f : oracle::forward_chain(h)) {
    if (f.front() == "SIBLING") want.insert(f);
  }
  o.require(got == want && got.size() == 16, "SIBLING set differs from forward chaining");
  if (o.ok) o.detail = "accuracy " + rep.accuracy.str() + ", completeness " + rep.completeness.str();
  return o;
}

Outcome reference() {
  Outcome o;
  std::size_t odd_exact = 0, odd_total = 0;
  for (std::size_t n = 2; n <= 40; ++n) {
    std::vector<Statement> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(Statement::from_words({"S", std::to_string(i)}));
    auto pts = reference_points(c);
    const bool even = n % 2 == 0;
    const bool a = pts[0].report.accuracy == Ratio(1, 1) && pts[0].report.completeness == Ratio(1, 2);
    const bool b = pts[1].report.accuracy == Ratio(1, 2) && pts[1].report.completeness == Ratio(1, 2);
    const bool cc = pts[2].report.accuracy == Ratio(1, 1) && pts[2].report.completeness == Ratio(1, 1);
    if (even) {
      o.require(a && b && cc, "size " + std::to_string(n));
    } else {
      ++odd_total;
      odd_exact += a && b && cc;
      o.require(cc && pts[0].report.accuracy == Ratio(1, 1) && pts[1].report.accuracy == Ratio(1, 2),
                "odd size " + std::to_string(n));
    }
  }
  for (const char* file : {"templated_corpus.txt", "siblings_corpus.txt"}) {
    auto pts = reference_points(load_corpus(data(file)));
    o.require(pts[0].report.accuracy == Ratio(1, 1) && pts[0].report.completeness == Ratio(1, 2) &&
                  pts[1].report.accuracy == Ratio(1, 2) && pts[1].report.completeness == Ratio(1, 2) &&
                  pts[2].report.accuracy == Ratio(1, 1) && pts[2].report.completeness == Ratio(1, 1),
              file);
  }
  if (o.ok) {
    o.detail = "even sizes 2..40 exact; odd sizes take floor(n/2), exact 1/2 completeness in " +
               std::to_string(odd_exact) + " of " + std::to_string(odd_total);
  }
  return o;
}

Outcome compression() {
  Outcome o;
  auto c = load_corpus(data("templated_corpus.txt"));
  o.require(c.size() == 12, "corpus size");
  const std::size_t raw = program_size(Program(c));
  SearchConfig cfg;
  cfg.budget_chars = raw;
  auto full = compress(c, cfg);
  o.require(full.report.accuracy == Ratio(1, 1) && full.report.completeness == Ratio(1, 1), "raw budget");

  cfg.budget_chars = c[0].str().size() + 1 + c[1].str().size();
  auto two = compress(c, cfg);
  o.require(two.report.accuracy == Ratio(1, 1) && two.report.completeness == Ratio(2, 12),
            "two-sentence budget gave " + two.report.accuracy.str() + ", " + two.report.completeness.str());

  cfg.budget_chars = raw * 6 / 10;
  auto sixty = compress(c, cfg);
  o.require(sixty.report.completeness == Ratio(1, 1), "60% completeness " + sixty.report.completeness.str());
  o.require(sixty.report.size_chars <= cfg.budget_chars, "60% over budget");
  std::size_t visited = 0;
  const double best = oracle::exhaustive_best(c, cfg, 5, &visited);
  o.require(sixty.objective == best, "objective " + format_decimal(sixty.objective) + " vs exhaustive " +
                                         format_decimal(best));
  if (o.ok) {
    o.detail = "60% budget: size " + std::to_string(sixty.report.size_chars) + "/" +
               std::to_string(cfg.budget_chars) + ", objective " + format_decimal(best) + " = exhaustive over " +
               std::to_string(visited) + " programs (move sequences of length <= 5)";
  }
  return o;
}

// Rules only look "downhill" (A reads B and C, B reads C), so every program
// reaches a fixpoint while still chaining derived statements.
std::vector<std::string> random_program(std::mt19937& rng) {
  static const char* vocab[] = {"A", "B", "C", "D"};
  auto word = [&](std::size_t from) { return std::string(vocab[from + rng() % (4 - from)]); };
  std::vector<std::string> lines;
  const std::size_t facts = 4 + rng() % 5;
  for (std::size_t i = 0; i < facts; ++i) lines.push_back(word(0) + (rng() % 2 ? " " + word(0) : ""));
  lines.push_back("B [" + word(2) + "] " + word(0));
  lines.push_back("A [" + word(1) + "] [" + word(1) + "]");
  lines.push_back("A [" + word(1) + " [" + word(2) + "]]");
  lines.push_back("R [A] [" + word(1) + "] [A]");
  return lines;
}

Outcome determinism() {
  Outcome o;
  std::mt19937 rng(77);
  std::size_t fixpoints = 0;
  for (int prog = 0; prog < 5; ++prog) {
    auto lines = random_program(rng);
    auto ref = closure(program_of(lines), limits(100, 8));
    fixpoints += !ref.truncated.any();
    for (int k = 0; k < 20; ++k) {
      std::shuffle(lines.begin(), lines.end(), rng);
      auto r = closure(program_of(lines), limits(100, 8));
      if (!ref.truncated.any()) o.require(strs(r.bracket_free) == strs(ref.bracket_free), "permutation changed M");
    }
    for (std::size_t rounds = 1; rounds < 5; ++rounds) {
      for (std::size_t tokens = 2; tokens < 6; ++tokens) {
        auto small = strs(closure(program_of(lines), limits(rounds, tokens)).bracket_free);
        auto big = strs(closure(program_of(lines), limits(rounds + 1, tokens + 1)).bracket_free);
        o.require(std::includes(big.begin(), big.end(), small.begin(), small.end()), "monotonicity");
      }
    }
  }
  o.require(fixpoints == 5, "random programs did not all reach a fixpoint");

  auto sib = horn_to_bc(load_horn(data("siblings.pl")));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    o.require(sample(sib, {}, seed, 10) == sample(sib, {}, seed, 10), "sample not reproducible");
  }

  std::size_t clouds_ok = 0;
  for (int cloud = 0; cloud < 100; ++cloud) {
    std::vector<FrontierPoint> pts;
    const std::size_t n = 1 + rng() % 50;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t da = 1 + rng() % 8, dc = 1 + rng() % 8;
      FrontierPoint p;
      p.report.size_chars = 1 + rng() % 12;
      p.report.accuracy = Ratio(rng() % (da + 1), da);
      p.report.completeness = Ratio(rng() % (dc + 1), dc);
      p.method_label = std::to_string(i);
      pts.push_back(p);
    }
    std::set<std::string> want, got;
    for (std::size_t i : oracle::pareto_indices(pts)) want.insert(pts[i].method_label);
    for (const auto& p : pareto_filter(pts)) got.insert(p.method_label);
    clouds_ok += want == got;
  }
  o.require(clouds_ok == 100, std::to_string(clouds_ok) + "/100 clouds agree");
  if (o.ok) o.detail = "5 programs x 20 permutations, limits grid, 10 seeds, 100 clouds";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "girls and ponies closure", 1, girls},
      {2, "equal contents replaced alike", 1, same_content},
      {3, "guard brackets and NOT", 1, guards},
      {4, "empty bracket after one round", 1, empty_bracket},
      {5, "grammar encoding equals enumeration", 30, cfg_equivalence},
      {6, "addition program sums", 10, addition},
      {7, "siblings end to end", 1, siblings},
      {8, "metrics reference points", 1, reference},
      {9, "compression extremes and exhaustive match", 60, compression},
      {10, "determinism and invariants", 60, determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.limit_s) o.require(false, "took longer than the time limit");
    if (!o.ok) ++failed;
    std::printf("criterion %2d: %s  %s (%.3f s / %.0f s) %s\n", c.id, o.ok ? "PASS" : "FAIL", c.name, secs,
                c.limit_s, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
