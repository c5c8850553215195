#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bc/syntax.hpp"

namespace bc {

struct Term {
  std::string text;
  bool is_variable = false;

  static Term constant(std::string t) { return {std::move(t), false}; }
  static Term variable(std::string t) { return {std::move(t), true}; }

  bool operator==(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool operator==(const Atom&) const = default;
};

struct Rule {
  Atom head;
  std::vector<Atom> body;
};

/// Function-free Horn clauses: ground facts plus range-restricted rules.
struct HornProgram {
  std::vector<Atom> facts;
  std::vector<Rule> rules;

  /// Throws InvalidHornProgram for non-ground facts, empty bodies, head
  /// variables missing from the body, or invalid words.
  void validate() const;
};

/// Translates to BC. Atoms render in prefix form "P a b". A body atom whose
/// last argument is a fresh variable binds it as a bracket over the preceding
/// arguments; atoms with every variable bound become trailing guard brackets.
/// Two binders that could share content are separated by an alias category.
/// Throws UnsupportedRule when a variable has no extractable ending position
/// or a predicate is used with more than one arity.
Program horn_to_bc(const HornProgram& h);

/// Prolog-style text: "p(a, b)." facts and "h(X) :- b1(X), b2(X, Y)." rules.
/// Variables start with an uppercase letter or '_'; quoted 'ATOMS' are constants.
/// `%` and `#` start comments.
HornProgram parse_horn(std::string_view text, std::string_view source = "<rules>");
HornProgram load_horn(const std::string& path);

}  // namespace bc
