#include "bc/horn.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bc/error.hpp"

namespace bc {

namespace {

using Tokens = std::vector<std::string>;

bool has_var(const Atom& a, const std::string& v) {
  return std::any_of(a.args.begin(), a.args.end(),
                     [&](const Term& t) { return t.is_variable && t.text == v; });
}

std::string describe(const Atom& a) {
  std::string s = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i != 0) s += ", ";
    s += a.args[i].text;
  }
  return s + ")";
}

Tokens bracket(const Tokens& content) {
  Tokens t{std::string(kOpen)};
  t.insert(t.end(), content.begin(), content.end());
  t.emplace_back(kClose);
  return t;
}

std::string initials(const std::string& predicate) {
  std::string out;
  bool take = true;
  for (char c : predicate) {
    if (c == '_') {
      take = true;
    } else if (take) {
      out.push_back(c);
      take = false;
    }
  }
  return out.empty() ? std::string("A") : out;
}

class Encoder {
 public:
  explicit Encoder(const HornProgram& h) : h_(h) {
    std::map<std::string, std::size_t> arity;
    auto note = [&](const Atom& a) {
      vocab_.insert(a.predicate);
      for (const Term& t : a.args) {
        if (!t.is_variable) vocab_.insert(t.text);
      }
      auto [it, fresh] = arity.emplace(a.predicate, a.args.size());
      if (!fresh && it->second != a.args.size()) {
        throw Error(ErrorCode::UnsupportedRule,
                    "predicate '" + a.predicate + "' is used with more than one arity");
      }
    };
    for (const Atom& f : h.facts) note(f);
    for (const Rule& r : h.rules) {
      note(r.head);
      for (const Atom& b : r.body) note(b);
    }
  }

  Program run() {
    for (const Atom& f : h_.facts) {
      Tokens t{f.predicate};
      for (const Term& a : f.args) t.push_back(a.text);
      out_.add(Statement::from_tokens(std::move(t)));
    }
    for (const Rule& r : h_.rules) encode(r);
    return std::move(out_);
  }

 private:
  struct Binder {
    const Atom* atom;
  };

  static bool may_coincide(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i + 1 < a.args.size(); ++i) {
      const Term& x = a.args[i];
      const Term& y = b.args[i];
      if (!x.is_variable && !y.is_variable && x.text != y.text) return false;
    }
    return true;
  }

  std::string alias_name(const std::string& predicate, const Tokens& key) {
    if (auto it = aliases_.find(key); it != aliases_.end()) return it->second;
    const std::string base = initials(predicate);
    std::size_t& n = next_index_.try_emplace(base, 2).first->second;
    std::string name;
    do {
      name = base + std::to_string(n++);
    } while (vocab_.contains(name));
    vocab_.insert(name);
    aliases_.emplace(key, name);
    return name;
  }

  void encode(const Rule& rule) {
    std::map<std::string, Tokens> bound;
    std::vector<Binder> binders;
    std::vector<bool> used(rule.body.size(), false);

    auto render = [&](const Term& t) -> Tokens {
      if (!t.is_variable) return {t.text};
      return bound.at(t.text);
    };

    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < rule.body.size(); ++i) {
        const Atom& a = rule.body[i];
        if (used[i] || a.args.empty()) continue;
        const Term& last = a.args.back();
        if (!last.is_variable || bound.contains(last.text)) continue;
        const bool prefix_ready = std::all_of(a.args.begin(), a.args.end() - 1, [&](const Term& t) {
          return !t.is_variable || (t.text != last.text && bound.contains(t.text));
        });
        if (!prefix_ready) continue;

        Tokens content{a.predicate};
        Tokens var_args;
        for (auto it = a.args.begin(); it != a.args.end() - 1; ++it) {
          Tokens r = render(*it);
          content.insert(content.end(), r.begin(), r.end());
          if (it->is_variable) var_args.insert(var_args.end(), r.begin(), r.end());
        }
        const std::size_t k = 1 + static_cast<std::size_t>(std::count_if(
                                      binders.begin(), binders.end(),
                                      [&](const Binder& b) { return may_coincide(*b.atom, a); }));
        if (k == 1) {
          bound[last.text] = bracket(content);
        } else {
          // Same content would force equal values; route through a fresh category.
          Tokens body = var_args;
          Tokens inner = bracket(content);
          body.insert(body.end(), inner.begin(), inner.end());
          Tokens key = body;
          key.push_back("#" + std::to_string(k));
          const std::string name = alias_name(a.predicate, key);
          Tokens stmt{name};
          stmt.insert(stmt.end(), body.begin(), body.end());
          out_.add(Statement::from_tokens(std::move(stmt)));
          Tokens use{name};
          use.insert(use.end(), var_args.begin(), var_args.end());
          bound[last.text] = bracket(use);
        }
        binders.push_back({&a});
        used[i] = true;
        changed = true;
      }
    }

    Tokens guards;
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      if (used[i]) continue;
      const Atom& a = rule.body[i];
      Tokens content{a.predicate};
      for (const Term& t : a.args) {
        if (t.is_variable && !bound.contains(t.text)) {
          throw Error(ErrorCode::UnsupportedRule, "variable " + t.text + " in " + describe(a) +
                                                      " has no extractable ending position");
        }
        Tokens r = render(t);
        content.insert(content.end(), r.begin(), r.end());
      }
      Tokens g = bracket(content);
      guards.insert(guards.end(), g.begin(), g.end());
    }

    Tokens head{rule.head.predicate};
    for (const Term& t : rule.head.args) {
      if (t.is_variable && !bound.contains(t.text)) {
        throw Error(ErrorCode::UnsupportedRule,
                    "head variable " + t.text + " of " + describe(rule.head) + " is never bound");
      }
      Tokens r = render(t);
      head.insert(head.end(), r.begin(), r.end());
    }
    head.insert(head.end(), guards.begin(), guards.end());
    out_.add(Statement::from_tokens(std::move(head)));
  }

  const HornProgram& h_;
  std::set<std::string> vocab_;
  std::map<std::string, std::size_t> next_index_;
  std::map<Tokens, std::string> aliases_;
  Program out_;
};

}  // namespace

void HornProgram::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidHornProgram, msg); };
  auto check_atom = [&](const Atom& a) {
    if (!is_valid_word(a.predicate)) fail("invalid predicate name '" + a.predicate + "'");
    for (const Term& t : a.args) {
      if (!is_valid_word(t.text)) fail("invalid term '" + t.text + "' in " + describe(a));
    }
  };
  for (const Atom& f : facts) {
    check_atom(f);
    for (const Term& t : f.args) {
      if (t.is_variable) fail("fact " + describe(f) + " is not ground");
    }
  }
  for (const Rule& r : rules) {
    check_atom(r.head);
    if (r.body.empty()) fail("rule for " + describe(r.head) + " has an empty body");
    for (const Atom& b : r.body) check_atom(b);
    for (const Term& t : r.head.args) {
      if (!t.is_variable) continue;
      bool in_body = std::any_of(r.body.begin(), r.body.end(),
                                 [&](const Atom& b) { return has_var(b, t.text); });
      if (!in_body) fail("head variable " + t.text + " of " + describe(r.head) + " does not occur in the body");
    }
  }
}

Program horn_to_bc(const HornProgram& h) {
  h.validate();
  return Encoder(h).run();
}

namespace {

struct Token {
  enum Kind { Name, Quoted, LParen, RParen, Comma, Dot, Neck, End } kind;
  std::string text;
  std::size_t line;
};

std::vector<Token> lex(std::string_view text, std::string_view source) {
  std::vector<Token> out;
  std::size_t line = 1;
  auto fail = [&](const std::string& msg) {
    std::ostringstream m;
    m << source << ":" << line << ": " << msg;
    throw Error(ErrorCode::InvalidHornProgram, m.str());
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '%' || c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      out.push_back({Token::LParen, "(", line});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::RParen, ")", line});
      ++i;
    } else if (c == ',') {
      out.push_back({Token::Comma, ",", line});
      ++i;
    } else if (c == '.') {
      out.push_back({Token::Dot, ".", line});
      ++i;
    } else if (c == ':' && i + 1 < text.size() && text[i + 1] == '-') {
      out.push_back({Token::Neck, ":-", line});
      i += 2;
    } else if (c == '\'') {
      std::size_t j = text.find('\'', i + 1);
      if (j == std::string_view::npos) fail("unterminated quoted atom");
      out.push_back({Token::Quoted, std::string(text.substr(i + 1, j - i - 1)), line});
      i = j + 1;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Token::Name, std::string(text.substr(i, j - i)), line});
      i = j;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  // Errors at end of input point at the last clause, not the trailing newline.
  out.push_back({Token::End, "", out.empty() ? line : out.back().line});
  return out;
}

class HornParser {
 public:
  HornParser(std::vector<Token> tokens, std::string_view source)
      : tokens_(std::move(tokens)), source_(source) {}

  HornProgram parse() {
    HornProgram h;
    while (peek().kind != Token::End) {
      Atom head = atom();
      if (peek().kind == Token::Neck) {
        next();
        Rule r{std::move(head), {}};
        r.body.push_back(atom());
        while (peek().kind == Token::Comma) {
          next();
          r.body.push_back(atom());
        }
        expect(Token::Dot, "'.'");
        h.rules.push_back(std::move(r));
      } else {
        expect(Token::Dot, "'.' or ':-'");
        for (const Term& t : head.args) {
          if (t.is_variable) fail("fact " + describe(head) + " is not ground");
        }
        h.facts.push_back(std::move(head));
      }
    }
    try {
      h.validate();
    } catch (const Error& e) {
      throw Error(e.code(), std::string(source_) + ": " + e.what());
    }
    return h;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream m;
    m << source_ << ":" << peek().line << ": " << msg;
    throw Error(ErrorCode::InvalidHornProgram, m.str());
  }

  void expect(Token::Kind kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    next();
  }

  Atom atom() {
    if (peek().kind != Token::Name && peek().kind != Token::Quoted) fail("expected predicate name");
    Atom a{next().text, {}};
    if (peek().kind != Token::LParen) return a;
    next();
    a.args.push_back(term());
    while (peek().kind == Token::Comma) {
      next();
      a.args.push_back(term());
    }
    expect(Token::RParen, "')'");
    return a;
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Token::Quoted) return Term::constant(next().text);
    if (t.kind != Token::Name) fail("expected a term");
    std::string text = next().text;
    const bool var = std::isupper(static_cast<unsigned char>(text[0])) || text[0] == '_';
    return var ? Term::variable(std::move(text)) : Term::constant(std::move(text));
  }

  std::vector<Token> tokens_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

}  // namespace

HornProgram parse_horn(std::string_view text, std::string_view source) {
  return HornParser(lex(text, source), source).parse();
}

HornProgram load_horn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_horn(buf.str(), path);
}

}  // namespace bc
