#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bc/syntax.hpp"

namespace bc {

/// Arrow word used by encoded grammars. Carries no meaning to the engine.
inline constexpr std::string_view kArrow = "→";

struct Production {
  std::string lhs;
  std::vector<std::string> rhs;  // empty for an epsilon production

  bool operator==(const Production&) const = default;
};

struct Cfg {
  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::string start;
  std::vector<Production> productions;

  /// Throws InvalidGrammar on undeclared symbols, overlap, bad start.
  void validate() const;
};

/// One statement per production ("N → a [X →] b"), repeated nonterminals in a
/// right side numbered X1, X2, ... with alias statements "Xk → [X →]".
Program cfg_to_bc(const Cfg& g);

/// Every terminal string of length <= max_len derivable from the start symbol.
std::set<Words> cfg_enumerate(const Cfg& g, std::size_t max_len);

/// Strings derived for `nonterminal`: statements "N → w..." with the prefix cut.
std::set<Words> derived_strings(std::span<const Statement> statements, const std::string& nonterminal);

/// Grammar file: "N -> a B c | eps" per line, `#` comments. The first
/// left-hand side is the start symbol; every symbol never on a left side is a terminal.
Cfg parse_cfg(std::string_view text, std::string_view source = "<grammar>");
Cfg load_cfg(const std::string& path);

}  // namespace bc
