#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mdpavg/bounds.hpp"
#include "mdpavg/config.hpp"
#include "mdpavg/core.hpp"
#include "mdpavg/error.hpp"
#include "mdpavg/exact.hpp"
#include "mdpavg/mc.hpp"
#include "mdpavg/mdp_io.hpp"

namespace mdpavg {

namespace {

std::string paint(std::string line, bool color) {
  if (!color) return line;
  auto swap = [&](const std::string& word, const char* code) {
    for (auto pos = line.find(word); pos != std::string::npos; pos = line.find(word, pos + word.size() + 9))
      line.replace(pos, word.size(), std::string(code) + word + "\x1b[0m");
  };
  swap("PASS", "\x1b[32m");
  swap("FAIL", "\x1b[31m");
  return line;
}

void emit(CliStreams& io, const std::string& text) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) io.out << paint(line, io.color) << '\n';
}

void emit_header(CliStreams& io, const RunConfig& cfg) {
  for (const auto& line : cfg.lines()) io.out << "# " << line << '\n';
}

std::vector<std::string> comment_lines(const RunConfig& cfg) { return cfg.lines(); }

std::string set_text(const std::vector<Vertex>& vs) {
  std::string s = "{";
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + std::to_string(vs[i]);
  return s + "}";
}

std::string verdict_line(const std::string& name, bool pass) { return "verdict." + name + "=" + (pass ? "PASS" : "FAIL"); }

bool is_rational_text(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789/-+") == std::string::npos;
}

// A probability given either as num/den (exact) or as a decimal.
std::pair<double, std::optional<Rational>> parse_probability(const std::string& s) {
  if (s.empty()) throw InputError("missing --p");
  if (is_rational_text(s)) {
    const Rational q = parse_rational(s);
    return {q.get_d(), q};
  }
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("bad probability '" + s + "'");
  return {v, std::nullopt};
}

DegreeSpec degrees_of(const RunConfig& c) {
  if (c.degrees.empty()) throw InputError("missing --degrees");
  return DegreeSpec::parse(c.degrees, c.n);
}

ModelSpec model_from(const RunConfig& c, const std::string& name) {
  if (name == "const-deg") {
    if (!c.p.empty() || c.stages) throw InputError("const-deg takes --degrees, not --p or --stages");
    if (c.targets != 1) throw InputError("const-deg targets come from --degrees");
    return ConstDegModel{degrees_of(c), c.player1_prob};
  }
  if (name == "gnp") {
    if (!c.degrees.empty() || c.stages) throw InputError("gnp takes --n and --p, not --degrees or --stages");
    if (c.n == 0) throw InputError("missing --n");
    return GnpSpec{c.n, parse_probability(c.p).first, c.player1_prob, c.targets};
  }
  if (name == "worst-case") {
    if (!c.degrees.empty() || !c.p.empty()) throw InputError("worst-case takes --stages only");
    if (c.stages == 0) throw InputError("missing --stages");
    return WorstCaseModel{c.stages};
  }
  throw InputError("unknown model '" + name + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  return f;
}

int cmd_solve(const RunConfig& cfg, CliStreams& io) {
  Mdp mdp = [&] {
    if (cfg.input.empty() || cfg.input == "-") return parse_mdp(io.in);
    std::ifstream f(cfg.input);
    if (!f) throw InputError("cannot open " + cfg.input);
    return parse_mdp(f);
  }();
  const SolveResult res = classical_buchi(mdp);
  emit_header(io, cfg);
  const auto winning = mask_members(res.winning);
  io.out << "n=" << mdp.size() << '\n'
         << "winning=" << set_text(winning) << '\n'
         << "iterations=" << res.iterations << '\n';
  for (std::size_t i = 0; i < res.removals.size(); ++i) io.out << "removed." << i + 1 << '=' << set_text(res.removals[i]) << '\n';
  io.out << "first_reach_size=" << res.first_reach_size << '\n' << "work=" << res.work << '\n';
  if (!cfg.oracle) return kExitPass;
  const auto oracle = mask_members(oracle_almost_sure(mdp));
  const bool agree = oracle == winning;
  io.out << "oracle=" << set_text(oracle) << '\n';
  emit(io, verdict_line("oracle_agrees", agree));
  io.out << (agree ? "oracle agrees" : "oracle disagrees") << '\n';
  return agree ? kExitPass : kExitFail;
}

int cmd_gen(const RunConfig& cfg, CliStreams& io) {
  const ModelSpec model = model_from(cfg, cfg.mode);
  const Mdp mdp = sample_mdp(model, cfg.seed);
  if (cfg.out.empty() || cfg.out == "-") {
    write_mdp(io.out, mdp, comment_lines(cfg));
    return kExitPass;
  }
  auto f = open_out(cfg.out);
  write_mdp(f, mdp, comment_lines(cfg));
  emit_header(io, cfg);
  io.out << "wrote=" << cfg.out << '\n' << "n=" << mdp.size() << '\n' << "edges=" << mdp.edge_count() << '\n';
  return kExitPass;
}

int cmd_experiment(const RunConfig& cfg, CliStreams& io) {
  if (cfg.model.empty()) throw InputError("missing --model");
  const ModelSpec model = model_from(cfg, cfg.model);
  const bool csv = !cfg.out.empty();
  const auto res = run_experiment(model, cfg.trials, cfg.seed, cfg.jobs, csv);
  if (csv) {
    std::vector<std::pair<std::string, std::string>> prov;
    for (const auto& line : cfg.lines()) {
      const auto eq = line.find('=');
      prov.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    auto f = open_out(cfg.out);
    write_csv(f, res.records, prov);
  }
  const std::string report = format_summary(res.summary, model, cfg.seed);
  if (!cfg.summary_out.empty()) {
    auto f = open_out(cfg.summary_out);
    for (const auto& line : cfg.lines()) f << "# " << line << '\n';
    f << report;
  }
  emit_header(io, cfg);
  io.out << report;
  return kExitPass;
}

int cmd_recurrence(const RunConfig& cfg, CliStreams& io) {
  if (cfg.mode == "rnp") {
    if (cfg.n == 0) throw InputError("missing --n");
    if (cfg.p.empty()) throw InputError("missing --p");
    const Rational p = parse_rational(cfg.p);
    if (p < 0 || p > 1) throw InputError("--p must lie in [0, 1]");
    // Check the guard before doing any work.
    if (cfg.brute_force && cfg.n > kBruteForceMaxVertices)
      throw CapacityError("brute force is limited to n <= " + std::to_string(kBruteForceMaxVertices));
    const Rational r = r_np_exact(cfg.n, p);
    emit_header(io, cfg);
    io.out << "R=" << to_fraction(r) << '\n' << "R_decimal=" << to_decimal(r, cfg.digits) << '\n';
    if (!cfg.brute_force) return kExitPass;
    const Rational b = brute_force_r_np(cfg.n, p);
    io.out << "R_brute=" << to_fraction(b) << '\n';
    emit(io, verdict_line("recurrence_equals_brute_force", b == r));
    return b == r ? kExitPass : kExitFail;
  }
  if (cfg.mode == "alpha") {
    const DegreeSpec spec = degrees_of(cfg);
    emit_header(io, cfg);
    std::vector<Rational> formula;
    for (std::size_t k = 0; k <= spec.vertices; ++k) formula.push_back(alpha_k_exact(spec, k));
    for (std::size_t k = 0; k <= spec.vertices; ++k)
      io.out << "alpha." << k << '=' << to_fraction(formula[k]) << " (" << to_decimal(formula[k], cfg.digits) << ")\n";
    if (!cfg.brute_force) return kExitPass;
    const auto rep = check_alpha_formula_report(spec);
    for (std::size_t k = 0; k < rep.enumerated.size(); ++k)
      io.out << "enumerated." << k << '=' << to_fraction(rep.enumerated[k]) << '\n';
    emit(io, verdict_line("sums_to_one", rep.sums_to_one));
    emit(io, verdict_line("formula_equals_enumeration", rep.matches));
    return rep.ok() ? kExitPass : kExitFail;
  }
  throw InputError("unknown recurrence '" + cfg.mode + "'");
}

int cmd_bounds(const RunConfig& cfg, CliStreams& io) {
  const RangeOptions opt{cfg.c1, cfg.c2};
  BoundCertificate cert;
  if (cfg.mode == "small-k") {
    if (cfg.k == 0) throw InputError("missing --k");
    cert = cfg.range_check ? small_k_certificate(degrees_of(cfg), cfg.k, opt)
                           : small_k_quantities(degrees_of(cfg), cfg.k, opt);
  } else if (cfg.mode == "large-k") {
    if (cfg.k == 0) throw InputError("missing --k");
    cert = large_k_certificate(degrees_of(cfg), cfg.k, opt);
  } else if (cfg.mode == "very-large-k") {
    if (cfg.l == 0) throw InputError("missing --l");
    cert = very_large_k_certificate(degrees_of(cfg), cfg.l);
  } else if (cfg.mode == "gnp") {
    if (cfg.n == 0) throw InputError("missing --n");
    const auto [p, exact] = parse_probability(cfg.p);
    cert = gnp_certificate(cfg.n, p, exact);
  } else if (cfg.mode == "stirling") {
    if (cfg.l == 0 || cfg.j == 0) throw InputError("stirling needs --l and --j");
    cert = stirling_check(cfg.l, cfg.j);
  } else {
    throw InputError("unknown bound '" + cfg.mode + "'");
  }
  if (cfg.json) {
    auto j = to_json(cert);
    for (const auto& line : cfg.lines()) {
      const auto eq = line.find('=');
      j["config"][line.substr(0, eq)] = line.substr(eq + 1);
    }
    io.out << j.dump(2) << '\n';
  } else {
    emit_header(io, cfg);
    emit(io, to_text(cert));
  }
  return cert.all_pass() ? kExitPass : kExitFail;
}

int dispatch(const RunConfig& cfg, CliStreams& io) {
  if (cfg.command == "solve") return cmd_solve(cfg, io);
  if (cfg.command == "gen") return cmd_gen(cfg, io);
  if (cfg.command == "experiment") return cmd_experiment(cfg, io);
  if (cfg.command == "recurrence") return cmd_recurrence(cfg, io);
  if (cfg.command == "bounds") return cmd_bounds(cfg, io);
  throw InputError("unknown command '" + cfg.command + "'");
}

// Options shared by the model-driven commands.
void model_options(CLI::App* app, RunConfig& cfg, bool with_model) {
  if (with_model) app->add_option("--model", cfg.model, "const-deg, gnp or worst-case");
  app->add_option("--n", cfg.n, "vertex count");
  app->add_option("--degrees", cfg.degrees, "degree classes d:a:t,...");
  app->add_option("--p", cfg.p, "edge probability, num/den or decimal");
  app->add_option("--targets", cfg.targets, "Büchi vertices for G(n,p)");
  app->add_option("--p1,--player1-prob", cfg.player1_prob, "probability a vertex is player 1");
  app->add_option("--stages", cfg.stages, "worst-case stage count");
  app->add_option("--seed", cfg.seed, "master seed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, CliStreams io) {
  RunConfig cfg;
  try {
    // A config file supplies defaults; flags given after it override.
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        cfg = RunConfig::load(args[i + 1]);
      } else if (args[i].rfind("--config=", 0) == 0) {
        cfg = RunConfig::load(args[i].substr(9));
      }
    }
  } catch (const InputError& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Almost-sure Büchi analysis of random MDPs", "mdpavg"};
  std::string config_path;
  app.add_option("--config", config_path, "key=value run configuration");
  app.require_subcommand(0, 1);

  auto* solve = app.add_subcommand("solve", "solve an MDP file (stdin when omitted or -)");
  solve->add_option("file", cfg.input, "MDP text file");
  solve->add_flag("--oracle", cfg.oracle, "cross-check with the strategy enumeration oracle");

  auto* gen = app.add_subcommand("gen", "sample one MDP");
  gen->require_subcommand(1);
  for (const char* m : {"const-deg", "gnp", "worst-case"}) {
    auto* sub = gen->add_subcommand(m, std::string("sample from the ") + m + " model");
    model_options(sub, cfg, false);
    sub->add_option("--out", cfg.out, "output file (stdout when omitted)");
  }

  auto* exp = app.add_subcommand("experiment", "Monte Carlo trials of the classical algorithm");
  model_options(exp, cfg, true);
  exp->add_option("--trials", cfg.trials, "trial count");
  exp->add_option("--jobs", cfg.jobs, "worker threads, 0 for all cores");
  exp->add_option("--out", cfg.out, "per-trial CSV");
  exp->add_option("--summary", cfg.summary_out, "summary report file");

  auto* rec = app.add_subcommand("recurrence", "exact reachability probabilities");
  rec->require_subcommand(1);
  auto* rnp = rec->add_subcommand("rnp", "R(n,p) for G(n,p)");
  rnp->add_option("--n", cfg.n, "vertex count");
  rnp->add_option("--p", cfg.p, "edge probability num/den");
  rnp->add_flag("--brute-force", cfg.brute_force, "also sum over all graphs");
  rnp->add_option("--digits", cfg.digits, "decimal digits");
  auto* alpha = rec->add_subcommand("alpha", "reverse reachable set size distribution");
  alpha->add_option("--n", cfg.n, "vertex count");
  alpha->add_option("--degrees", cfg.degrees, "degree classes d:a:t,...");
  alpha->add_flag("--brute-force", cfg.brute_force, "also classify every graph");
  alpha->add_option("--digits", cfg.digits, "decimal digits");

  auto* bounds = app.add_subcommand("bounds", "evaluate bound certificates");
  bounds->require_subcommand(1);
  for (const char* m : {"small-k", "large-k", "very-large-k"}) {
    auto* sub = bounds->add_subcommand(m, m);
    sub->add_option("--n", cfg.n, "vertex count");
    sub->add_option("--degrees", cfg.degrees, "degree classes d:a:t,...");
    sub->add_flag("--json", cfg.json, "JSON output");
    if (std::string(m) == "very-large-k") {
      sub->add_option("--l", cfg.l, "n - k");
    } else {
      sub->add_option("--k", cfg.k, "reverse reachable set size");
      sub->add_option("--c1", cfg.c1, "lower range constant");
      if (std::string(m) == "large-k") sub->add_option("--c2", cfg.c2, "upper range constant");
    }
    if (std::string(m) == "small-k") {
      sub->add_flag("--no-range-check{false}", cfg.range_check, "evaluate outside the stated range");
    }
  }
  auto* bgnp = bounds->add_subcommand("gnp", "G(n,p) chain");
  bgnp->add_option("--n", cfg.n, "vertex count");
  bgnp->add_option("--p", cfg.p, "edge probability; num/den enables exact checks");
  bgnp->add_flag("--json", cfg.json, "JSON output");
  auto* stir = bounds->add_subcommand("stirling", "binomial inequalities");
  stir->add_option("--l", cfg.l, "l");
  stir->add_option("--j", cfg.j, "j");
  stir->add_flag("--json", cfg.json, "JSON output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  for (auto* top : {solve, gen, exp, rec, bounds}) {
    if (!top->parsed()) continue;
    cfg.command = top->get_name();
    for (auto* sub : top->get_subcommands())
      if (sub->parsed()) cfg.mode = sub->get_name();
    if (top == solve || top == exp) cfg.mode.clear();
  }
  if (cfg.command.empty()) {
    io.err << app.help();
    return kExitUsage;
  }

  try {
    return dispatch(cfg, io);
  } catch (const CapacityError& e) {
    io.err << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const ParseError& e) {
    io.err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace mdpavg
