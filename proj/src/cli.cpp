#include "bc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bc/cfg.hpp"
#include "bc/compress.hpp"
#include "bc/corpus.hpp"
#include "bc/engine.hpp"
#include "bc/error.hpp"
#include "bc/horn.hpp"
#include "bc/metrics.hpp"

namespace bc {

namespace {

struct LimitFlags {
  ExpansionLimits limits;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-rounds", limits.max_rounds, "Expansion rounds")->capture_default_str();
    cmd->add_option("--max-statements", limits.max_statements, "Retained statements")->capture_default_str();
    cmd->add_option("--max-tokens", limits.max_tokens_per_statement,
                    "Top-level elements per derived statement")
        ->capture_default_str();
  }

  std::string describe() const {
    std::ostringstream s;
    s << "limits: max_rounds=" << limits.max_rounds << " max_statements=" << limits.max_statements
      << " max_tokens=" << limits.max_tokens_per_statement;
    return s.str();
  }
};

struct TokenizerFlags {
  bool no_split = false;
  bool fold_case = false;
  bool sentences = false;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--no-split-punct", no_split, "Keep punctuation attached to words");
    cmd->add_flag("--fold-case", fold_case, "Upper-case corpus words");
    cmd->add_flag("--sentences", sentences, "Split on . ! ? instead of one statement per line");
  }

  TokenizerOptions options() const {
    TokenizerOptions o;
    o.split_punctuation = !no_split;
    o.fold_case = fold_case;
    o.one_statement_per_line = !sentences;
    return o;
  }
};

struct SearchFlags {
  SearchConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", cfg.lambda_accuracy, "Accuracy weight in the objective")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Search seed")->capture_default_str();
    cmd->add_option("--beam", cfg.beam_width, "Beam width")->capture_default_str();
    cmd->add_option("--iterations", cfg.max_iterations, "Beam generations")->capture_default_str();
  }
};

std::string truncation_header(const TruncationFlags& t) {
  std::string s = "truncated:";
  if (t.rounds) s += " rounds";
  if (t.statements) s += " statements";
  if (t.tokens) s += " tokens";
  return s;
}

std::vector<Statement> load_program_warn(const std::string& path, std::ostream& err, Program* keep = nullptr) {
  ParsedProgram parsed = load_program(path);
  if (parsed.duplicates_dropped > 0) {
    err << "warning: " << path << ": dropped " << parsed.duplicates_dropped << " duplicate statement(s)\n";
  }
  std::vector<Statement> out = parsed.program.statements();
  if (keep) *keep = std::move(parsed.program);
  return out;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, path + ": cannot open for writing");
  f << text;
  if (!f) throw Error(ErrorCode::Io, path + ": write failed");
}

std::vector<std::size_t> parse_budgets(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v == 0) {
      throw Error(ErrorCode::InvalidArgument, "invalid budget '" + item + "' (positive integers, comma separated)");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "--budgets is empty");
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bracket compression toolkit: expand, score, encode and compress BC programs", "bracket"};
  app.require_subcommand(1);

  // check
  std::string check_prog;
  auto* check = app.add_subcommand("check", "Parse and validate a program");
  check->add_option("PROG", check_prog, "BC program file")->required();

  // expand
  std::string expand_prog;
  bool expand_residual = false;
  LimitFlags expand_limits;
  auto* expand = app.add_subcommand("expand", "Print the bracket-free closure");
  expand->add_option("PROG", expand_prog, "BC program file")->required();
  expand->add_flag("--residual", expand_residual, "Also print statements still holding brackets");
  expand_limits.attach(expand);

  // sample
  std::string sample_prog;
  std::uint64_t sample_seed = 1;
  std::size_t sample_count = 10;
  LimitFlags sample_limits;
  auto* sample_cmd = app.add_subcommand("sample", "Generate random grounded statements");
  sample_cmd->add_option("PROG", sample_prog, "BC program file")->required();
  sample_cmd->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
  sample_cmd->add_option("--count", sample_count, "Statements to generate")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sample_limits.attach(sample_cmd);

  // metrics
  std::string metrics_prog, metrics_corpus;
  bool metrics_csv = false;
  LimitFlags metrics_limits;
  TokenizerFlags metrics_tok;
  auto* metrics = app.add_subcommand("metrics", "Score a program against a corpus");
  metrics->add_option("PROG", metrics_prog, "BC program file")->required();
  metrics->add_option("CORPUS", metrics_corpus, "Corpus file")->required();
  metrics->add_flag("--csv", metrics_csv, "Print a CSV header and row");
  metrics_limits.attach(metrics);
  metrics_tok.attach(metrics);

  // encode-cfg
  std::string cfg_in, cfg_out;
  auto* encode_cfg = app.add_subcommand("encode-cfg", "Translate a context-free grammar to BC");
  encode_cfg->add_option("GRAMMAR", cfg_in, "Grammar file")->required();
  encode_cfg->add_option("-o,--output", cfg_out, "Output program (stdout if omitted)");

  // encode-horn
  std::string horn_in, horn_out;
  auto* encode_horn = app.add_subcommand("encode-horn", "Translate Horn facts and rules to BC");
  encode_horn->add_option("RULES", horn_in, "Rules file")->required();
  encode_horn->add_option("-o,--output", horn_out, "Output program (stdout if omitted)");

  // compress
  std::string compress_corpus, compress_out;
  SearchFlags compress_search;
  LimitFlags compress_limits;
  TokenizerFlags compress_tok;
  auto* compress_cmd = app.add_subcommand("compress", "Search for a program within a size budget");
  compress_cmd->add_option("CORPUS", compress_corpus, "Corpus file")->required();
  compress_cmd->add_option("--budget", compress_search.cfg.budget_chars, "Size budget in characters")
      ->required()
      ->check(CLI::PositiveNumber);
  compress_cmd->add_option("-o,--output", compress_out, "Output program (stdout if omitted)");
  compress_search.attach(compress_cmd);
  compress_limits.attach(compress_cmd);
  compress_tok.attach(compress_cmd);

  // frontier
  std::string frontier_corpus, frontier_budgets, frontier_csv;
  SearchFlags frontier_search;
  LimitFlags frontier_limits;
  TokenizerFlags frontier_tok;
  auto* frontier = app.add_subcommand("frontier", "Sweep budgets and emit frontier CSV");
  frontier->add_option("CORPUS", frontier_corpus, "Corpus file")->required();
  frontier->add_option("--budgets", frontier_budgets, "Comma-separated budgets, e.g. 100,200,400")->required();
  frontier->add_option("--csv", frontier_csv, "CSV output file (stdout if omitted)");
  frontier_search.attach(frontier);
  frontier_limits.attach(frontier);
  frontier_tok.attach(frontier);

  std::vector<std::string> argv_storage{"bracket"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*check) {
      Program p;
      load_program_warn(check_prog, err, &p);
      std::size_t bracketed = 0;
      for (const Statement& s : p) bracketed += s.has_brackets() ? 1 : 0;
      out << "statements=" << p.size() << "\n"
          << "bracketed=" << bracketed << "\n"
          << "size_chars=" << program_size(p) << "\n";
    } else if (*expand) {
      Program p;
      load_program_warn(expand_prog, err, &p);
      const ClosureResult r = closure(p, expand_limits.limits);
      std::vector<std::string> header;
      if (r.truncated.any()) {
        header.push_back(truncation_header(r.truncated));
        header.push_back(expand_limits.describe());
      }
      out << format_program(Program(canonical_order(r, r.bracket_free)), header);
      if (expand_residual) {
        std::vector<std::string> rh{"residual"};
        out << format_program(Program(canonical_order(r, r.residual)), rh);
      }
    } else if (*sample_cmd) {
      Program p;
      load_program_warn(sample_prog, err, &p);
      std::vector<Statement> got = sample(p, sample_limits.limits, sample_seed, sample_count);
      out << "# seed=" << sample_seed << "\n";
      for (const Statement& s : got) out << s.str() << "\n";
      if (got.size() < sample_count) {
        err << "warning: only " << got.size() << " of " << sample_count << " samples grounded within limits\n";
      }
    } else if (*metrics) {
      Program p;
      load_program_warn(metrics_prog, err, &p);
      const std::vector<Statement> corpus = load_corpus(metrics_corpus, metrics_tok.options());
      const ClosureResult r = closure(p, metrics_limits.limits);
      const std::size_t size = program_size(p);
      MetricsReport rep = evaluate(r.bracket_free, corpus, size, r.truncated.any());
      if (r.truncated.any()) out << "# " << truncation_header(r.truncated) << "\n# " << metrics_limits.describe() << "\n";
      if (metrics_csv) {
        out << kCsvHeader << "\n" << csv_row({size, rep, "program"}) << "\n";
      } else {
        out << key_value_report(rep);
      }
    } else if (*encode_cfg) {
      write_text(cfg_out, format_program(cfg_to_bc(load_cfg(cfg_in))), out);
    } else if (*encode_horn) {
      write_text(horn_out, format_program(horn_to_bc(load_horn(horn_in))), out);
    } else if (*compress_cmd) {
      SearchConfig cfg = compress_search.cfg;
      cfg.limits = compress_limits.limits;
      const std::vector<Statement> corpus = load_corpus(compress_corpus, compress_tok.options());
      Candidate best = compress(corpus, cfg);
      std::vector<std::string> header{"seed=" + std::to_string(cfg.seed),
                                      "budget=" + std::to_string(cfg.budget_chars),
                                      "objective=" + format_decimal(best.objective)};
      std::istringstream rep(key_value_report(best.report));
      for (std::string line; std::getline(rep, line);) header.push_back(line);
      if (best.report.truncated) header.push_back(compress_limits.describe());
      if (compress_out.empty() || compress_out == "-") {
        out << format_program(best.program, header);
      } else {
        write_text(compress_out, format_program(best.program), out);
        for (const std::string& h : header) out << h << "\n";
      }
    } else if (*frontier) {
      SearchConfig cfg = frontier_search.cfg;
      cfg.limits = frontier_limits.limits;
      const std::vector<Statement> corpus = load_corpus(frontier_corpus, frontier_tok.options());
      const std::vector<std::size_t> budgets = parse_budgets(frontier_budgets);
      std::vector<FrontierPoint> points =
          frontier_sweep(corpus, budgets, cfg, [&](const std::string& m) { err << "warning: " << m << "\n"; });
      std::string csv = std::string(kCsvHeader) + "\n";
      for (const FrontierPoint& p : points) csv += csv_row(p) + "\n";
      write_text(frontier_csv, csv, out);
      err << "seed=" << cfg.seed << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace bc
