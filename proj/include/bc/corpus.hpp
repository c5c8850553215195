#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bc/syntax.hpp"

namespace bc {

struct TokenizerOptions {
  // On by default: "GIRL," must become "GIRL ," for prefix matching to see "GIRL".
  bool split_punctuation = true;
  bool fold_case = false;
  // Off: naive sentence split on . ! ? (no abbreviation handling).
  bool one_statement_per_line = true;
};

/// Punctuation characters that become standalone words when splitting.
bool is_split_punctuation(char c);

/// Bracket-free statements in first-occurrence order, duplicates removed.
/// Throws BracketInCorpus for `[`/`]` and EmptyCorpus when nothing remains.
std::vector<Statement> parse_corpus(std::string_view text, const TokenizerOptions& opts,
                                    std::string_view source = "<corpus>");
std::vector<Statement> load_corpus(const std::string& path, const TokenizerOptions& opts = {});

/// One statement per line, trailing newline.
std::string format_corpus(const std::vector<Statement>& corpus);

}  // namespace bc
