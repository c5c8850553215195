#include "bc/cfg.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "bc/error.hpp"

namespace bc {

void Cfg::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidGrammar, msg); };
  if (!nonterminals.contains(start)) fail("start symbol '" + start + "' is not a nonterminal");
  for (const std::string& t : terminals) {
    if (nonterminals.contains(t)) fail("symbol '" + t + "' is both terminal and nonterminal");
  }
  auto check_symbol = [&](const std::string& s) {
    if (!is_valid_word(s) || s == kArrow) fail("invalid grammar symbol '" + s + "'");
  };
  for (const std::string& s : nonterminals) check_symbol(s);
  for (const std::string& s : terminals) check_symbol(s);
  for (const Production& p : productions) {
    if (!nonterminals.contains(p.lhs)) fail("production for undeclared nonterminal '" + p.lhs + "'");
    for (const std::string& s : p.rhs) {
      if (!nonterminals.contains(s) && !terminals.contains(s)) fail("undeclared symbol '" + s + "'");
    }
  }
}

Program cfg_to_bc(const Cfg& g) {
  g.validate();
  const std::string arrow(kArrow);
  Program out;
  std::vector<std::pair<std::string, std::string>> aliases;  // (alias, base)

  for (const Production& p : g.productions) {
    std::vector<std::string> tokens{p.lhs, arrow};
    std::map<std::string, std::size_t> seen;
    for (const std::string& sym : p.rhs) {
      if (!g.nonterminals.contains(sym)) {
        tokens.push_back(sym);
        continue;
      }
      const std::size_t k = seen[sym]++;
      std::string name = sym;
      if (k > 0) {
        name += std::to_string(k);
        if (g.nonterminals.contains(name) || g.terminals.contains(name)) {
          throw Error(ErrorCode::ReservedSymbolClash,
                      "alias '" + name + "' for repeated nonterminal '" + sym + "' is already a grammar symbol");
        }
        std::pair<std::string, std::string> alias{name, sym};
        if (std::find(aliases.begin(), aliases.end(), alias) == aliases.end()) aliases.push_back(alias);
      }
      tokens.insert(tokens.end(), {std::string(kOpen), name, arrow, std::string(kClose)});
    }
    out.add(Statement::from_tokens(std::move(tokens)));
  }
  for (const auto& [alias, base] : aliases) {
    out.add(Statement::from_tokens({alias, arrow, std::string(kOpen), base, arrow, std::string(kClose)}));
  }
  return out;
}

std::set<Words> cfg_enumerate(const Cfg& g, std::size_t max_len) {
  g.validate();
  std::map<std::string, std::set<Words>> lang;
  for (const std::string& n : g.nonterminals) lang[n];

  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions) {
      std::set<Words> partial{Words{}};
      for (const std::string& sym : p.rhs) {
        std::set<Words> next;
        if (g.terminals.contains(sym)) {
          for (const Words& w : partial) {
            if (w.size() + 1 > max_len) continue;
            Words x = w;
            x.push_back(sym);
            next.insert(std::move(x));
          }
        } else {
          for (const Words& w : partial) {
            for (const Words& v : lang[sym]) {
              if (w.size() + v.size() > max_len) continue;
              Words x = w;
              x.insert(x.end(), v.begin(), v.end());
              next.insert(std::move(x));
            }
          }
        }
        partial = std::move(next);
        if (partial.empty()) break;
      }
      for (const Words& w : partial) {
        if (lang[p.lhs].insert(w).second) changed = true;
      }
    }
  }
  return lang[g.start];
}

std::set<Words> derived_strings(std::span<const Statement> statements, const std::string& nonterminal) {
  std::set<Words> out;
  for (const Statement& s : statements) {
    const auto& t = s.tokens();
    if (t.size() < 2 || t[0] != nonterminal || t[1] != kArrow || s.has_brackets()) continue;
    out.emplace(t.begin() + 2, t.end());
  }
  return out;
}

Cfg parse_cfg(std::string_view text, std::string_view source) {
  Cfg g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    std::ostringstream m;
    m << source << ":" << line_no << ": " << msg;
    throw Error(ErrorCode::InvalidGrammar, m.str());
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string x; words >> x;) w.push_back(x);
    if (w.empty() || w[0].starts_with('#')) continue;
    if (w.size() < 2 || (w[1] != "->" && w[1] != kArrow)) fail("expected 'N -> ...'");
    const std::string& lhs = w[0];
    if (g.start.empty()) g.start = lhs;
    g.nonterminals.insert(lhs);
    std::vector<std::string> alt;
    auto flush = [&] {
      if (alt.size() == 1 && alt[0] == "eps") alt.clear();
      if (std::find(alt.begin(), alt.end(), "eps") != alt.end()) fail("'eps' must stand alone");
      g.productions.push_back({lhs, alt});
      alt.clear();
    };
    bool any = false;
    for (std::size_t i = 2; i < w.size(); ++i) {
      if (w[i] == "|") {
        if (alt.empty()) fail("empty alternative; write 'eps'");
        flush();
      } else {
        alt.push_back(w[i]);
        any = true;
      }
    }
    if (!any || alt.empty()) fail("empty alternative; write 'eps'");
    flush();
  }
  if (g.start.empty()) {
    line_no = 0;
    fail("grammar has no productions");
  }
  for (const Production& p : g.productions) {
    for (const std::string& s : p.rhs) {
      if (!g.nonterminals.contains(s)) g.terminals.insert(s);
    }
  }
  try {
    g.validate();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(source) + ": " + e.what());
  }
  return g;
}

Cfg load_cfg(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cfg(buf.str(), path);
}

}  // namespace bc
