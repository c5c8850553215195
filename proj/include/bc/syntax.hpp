#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace bc {

/// A plain run of words: bracket contents, matched endings, corpus sentences.
using Words = std::vector<std::string>;

inline constexpr std::string_view kOpen = "[";
inline constexpr std::string_view kClose = "]";

/// True if `text` is usable as a word: non-empty, no whitespace, no brackets.
bool is_valid_word(std::string_view text);

/// Tree view of a statement. A bracket holds its content in `children`.
struct Element {
  std::string word;
  std::vector<Element> children;
  bool is_bracket = false;

  static Element make_word(std::string text);
  static Element make_bracket(std::vector<Element> content);

  bool operator==(const Element&) const = default;
};

/// One BC statement: a non-empty sequence of words and well-nested brackets.
///
/// Stored flat, with "[" and "]" as reserved tokens. Words can never be
/// bracket characters, so the flat form is unambiguous and ordering/equality
/// on tokens coincides with ordering/equality on the canonical serialization
/// structure.
class Statement {
 public:
  /// Validates balance, non-emptiness and every word.
  static Statement from_tokens(std::vector<std::string> tokens);
  static Statement from_elements(std::span<const Element> elements);
  /// Bracket-free statement.
  static Statement from_words(Words words);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::vector<Element> elements() const;

  bool has_brackets() const noexcept;
  /// Maximum bracket nesting depth; 0 for bracket-free statements.
  std::size_t depth() const noexcept;
  /// Words plus brackets at the outermost level, each bracket counting 1.
  std::size_t top_level_size() const noexcept;

  /// Canonical serialization.
  std::string str() const;

  auto operator<=>(const Statement&) const = default;
  bool operator==(const Statement&) const = default;

 private:
  explicit Statement(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  std::vector<std::string> tokens_;
};

struct StatementHash {
  std::size_t operator()(const Statement& s) const noexcept;
};

/// `[` and `]` are self-delimiting; everything else splits on whitespace.
Statement parse_statement(std::string_view line);

std::string serialize_statement(const Statement& s);

std::string join_words(std::span<const std::string> words);

/// Ordered, duplicate-free collection of statements (the compressed corpus).
class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Statement> statements);

  /// Appends unless an identical statement is present; returns whether added.
  bool add(Statement s);
  bool contains(const Statement& s) const;

  const std::vector<Statement>& statements() const noexcept { return statements_; }
  std::size_t size() const noexcept { return statements_.size(); }
  bool empty() const noexcept { return statements_.empty(); }
  auto begin() const noexcept { return statements_.begin(); }
  auto end() const noexcept { return statements_.end(); }

  /// Statements joined by newlines, no trailing newline.
  std::string str() const;

  bool operator==(const Program& other) const { return statements_ == other.statements_; }

 private:
  std::vector<Statement> statements_;
  std::unordered_set<Statement, StatementHash> index_;
};

/// Characters of the canonical serializations joined by single newlines.
std::size_t program_size(const Program& p);

struct ParsedProgram {
  Program program;
  std::size_t duplicates_dropped = 0;
};

/// Parses a BC program file body. `#` lines are comments, blank lines skipped.
/// Errors carry "<source>:<line>:" in their message.
ParsedProgram parse_program(std::string_view text, std::string_view source = "<input>");
ParsedProgram load_program(const std::string& path);

/// Writes one statement per line. `header` lines are emitted as `# ` comments.
std::string format_program(const Program& p, std::span<const std::string> header = {});

}  // namespace bc
