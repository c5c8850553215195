#include "bc/syntax.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bc/error.hpp"

namespace bc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnbalancedBrackets: return "UnbalancedBrackets";
    case ErrorCode::EmptyStatement: return "EmptyStatement";
    case ErrorCode::InvalidWord: return "InvalidWord";
    case ErrorCode::InvalidLimits: return "InvalidLimits";
    case ErrorCode::NoBracketedStatements: return "NoBracketedStatements";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::BracketInCorpus: return "BracketInCorpus";
    case ErrorCode::ReservedSymbolClash: return "ReservedSymbolClash";
    case ErrorCode::InvalidGrammar: return "InvalidGrammar";
    case ErrorCode::UnsupportedRule: return "UnsupportedRule";
    case ErrorCode::InvalidHornProgram: return "InvalidHornProgram";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

bool is_bracket_token(const std::string& t) { return t == kOpen || t == kClose; }

void flatten(std::span<const Element> elements, std::vector<std::string>& out) {
  for (const Element& e : elements) {
    if (e.is_bracket) {
      out.emplace_back(kOpen);
      flatten(e.children, out);
      out.emplace_back(kClose);
    } else {
      out.push_back(e.word);
    }
  }
}

}  // namespace

bool is_valid_word(std::string_view text) {
  if (text.empty()) return false;
  return std::none_of(text.begin(), text.end(),
                      [](char c) { return is_space(c) || c == '[' || c == ']'; });
}

Element Element::make_word(std::string text) {
  Element e;
  e.word = std::move(text);
  return e;
}

Element Element::make_bracket(std::vector<Element> content) {
  Element e;
  e.children = std::move(content);
  e.is_bracket = true;
  return e;
}

Statement Statement::from_tokens(std::vector<std::string> tokens) {
  long open = 0;
  for (const std::string& t : tokens) {
    if (t == kOpen) {
      ++open;
    } else if (t == kClose) {
      if (--open < 0) throw Error(ErrorCode::UnbalancedBrackets, "unexpected ']'");
    } else if (!is_valid_word(t)) {
      throw Error(ErrorCode::InvalidWord, "invalid word '" + t + "'");
    }
  }
  if (open != 0) throw Error(ErrorCode::UnbalancedBrackets, "unclosed '['");
  if (tokens.empty()) throw Error(ErrorCode::EmptyStatement, "empty statement");
  return Statement(std::move(tokens));
}

Statement Statement::from_elements(std::span<const Element> elements) {
  std::vector<std::string> tokens;
  flatten(elements, tokens);
  return from_tokens(std::move(tokens));
}

Statement Statement::from_words(Words words) {
  for (const std::string& w : words) {
    if (!is_valid_word(w)) throw Error(ErrorCode::InvalidWord, "invalid word '" + w + "'");
  }
  if (words.empty()) throw Error(ErrorCode::EmptyStatement, "empty statement");
  return Statement(std::move(words));
}

std::vector<Element> Statement::elements() const {
  std::vector<std::vector<Element>> stack(1);
  for (const std::string& t : tokens_) {
    if (t == kOpen) {
      stack.emplace_back();
    } else if (t == kClose) {
      Element b = Element::make_bracket(std::move(stack.back()));
      stack.pop_back();
      stack.back().push_back(std::move(b));
    } else {
      stack.back().push_back(Element::make_word(t));
    }
  }
  return std::move(stack.front());
}

bool Statement::has_brackets() const noexcept {
  return std::any_of(tokens_.begin(), tokens_.end(), is_bracket_token);
}

std::size_t Statement::depth() const noexcept {
  std::size_t cur = 0;
  std::size_t best = 0;
  for (const std::string& t : tokens_) {
    if (t == kOpen) {
      best = std::max(best, ++cur);
    } else if (t == kClose) {
      --cur;
    }
  }
  return best;
}

std::size_t Statement::top_level_size() const noexcept {
  std::size_t cur = 0;
  std::size_t n = 0;
  for (const std::string& t : tokens_) {
    if (t == kOpen) {
      if (cur++ == 0) ++n;
    } else if (t == kClose) {
      --cur;
    } else if (cur == 0) {
      ++n;
    }
  }
  return n;
}

std::string Statement::str() const {
  std::string out;
  const std::string* prev = nullptr;
  for (const std::string& t : tokens_) {
    if (prev != nullptr && *prev != kOpen && t != kClose) out.push_back(' ');
    out += t;
    prev = &t;
  }
  return out;
}

std::size_t StatementHash::operator()(const Statement& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  std::hash<std::string> hs;
  for (const std::string& t : s.tokens()) h = (h ^ hs(t)) * 0x100000001b3ULL;
  return h;
}

Statement parse_statement(std::string_view line) {
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::exchange(word, {}));
  };
  for (char c : line) {
    if (is_space(c)) {
      flush();
    } else if (c == '[' || c == ']') {
      flush();
      tokens.emplace_back(1, c);
    } else {
      word.push_back(c);
    }
  }
  flush();
  return Statement::from_tokens(std::move(tokens));
}

std::string serialize_statement(const Statement& s) { return s.str(); }

std::string join_words(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

Program::Program(std::vector<Statement> statements) {
  for (Statement& s : statements) add(std::move(s));
}

bool Program::add(Statement s) {
  if (!index_.insert(s).second) return false;
  statements_.push_back(std::move(s));
  return true;
}

bool Program::contains(const Statement& s) const { return index_.contains(s); }

std::string Program::str() const {
  std::string out;
  for (std::size_t i = 0; i < statements_.size(); ++i) {
    if (i != 0) out.push_back('\n');
    out += statements_[i].str();
  }
  return out;
}

std::size_t program_size(const Program& p) {
  if (p.empty()) return 0;
  std::size_t n = p.size() - 1;
  for (const Statement& s : p) n += s.str().size();
  return n;
}

ParsedProgram parse_program(std::string_view text, std::string_view source) {
  ParsedProgram out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto first = std::find_if_not(line.begin(), line.end(), is_space);
    if (first == line.end() || *first == '#') continue;
    try {
      Statement s = parse_statement(line);
      if (!out.program.add(std::move(s))) ++out.duplicates_dropped;
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << source << ":" << line_no << ": " << e.what();
      throw Error(e.code(), msg.str());
    }
  }
  return out;
}

ParsedProgram load_program(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program(buf.str(), path);
}

std::string format_program(const Program& p, std::span<const std::string> header) {
  std::string out;
  for (const std::string& h : header) out += "# " + h + "\n";
  for (const Statement& s : p) out += s.str() + "\n";
  return out;
}

}  // namespace bc
