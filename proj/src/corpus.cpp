#include "bc/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "bc/error.hpp"

namespace bc {

bool is_split_punctuation(char c) {
  switch (c) {
    case ',': case '.': case '!': case '?': case ';': case ':': case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

namespace {

Words tokenize(std::string_view text, const TokenizerOptions& opts) {
  Words out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::exchange(word, {}));
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (opts.split_punctuation && is_split_punctuation(c)) {
      flush();
      out.emplace_back(1, c);
    } else {
      word.push_back(opts.fold_case ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
    }
  }
  flush();
  return out;
}

}  // namespace

std::vector<Statement> parse_corpus(std::string_view text, const TokenizerOptions& opts,
                                    std::string_view source) {
  std::vector<Statement> out;
  std::unordered_set<Statement, StatementHash> seen;
  auto emit = [&](std::string_view chunk) {
    Words w = tokenize(chunk, opts);
    if (w.empty()) return;
    Statement s = Statement::from_words(std::move(w));
    if (seen.insert(s).second) out.push_back(std::move(s));
  };

  std::size_t line = 1;
  for (char c : text) {
    if (c == '[' || c == ']') {
      std::ostringstream m;
      m << source << ":" << line << ": bracket character in corpus text";
      throw Error(ErrorCode::BracketInCorpus, m.str());
    }
    if (c == '\n') ++line;
  }

  if (opts.one_statement_per_line) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      emit(text.substr(pos, end - pos));
      pos = end + 1;
    }
  } else {
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '.' || c == '!' || c == '?') {
        // Keep runs like "?!" or "..." with their sentence.
        while (i + 1 < text.size() && (text[i + 1] == '.' || text[i + 1] == '!' || text[i + 1] == '?')) ++i;
        emit(text.substr(start, i + 1 - start));
        start = i + 1;
      }
    }
    if (start < text.size()) emit(text.substr(start));
  }

  if (out.empty()) throw Error(ErrorCode::EmptyCorpus, std::string(source) + ": corpus is empty");
  return out;
}

std::vector<Statement> load_corpus(const std::string& path, const TokenizerOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), opts, path);
}

std::string format_corpus(const std::vector<Statement>& corpus) {
  std::string out;
  for (const Statement& s : corpus) out += s.str() + "\n";
  return out;
}

}  // namespace bc
