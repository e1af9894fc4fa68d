// Command-line harness: identity suites, transition probabilities, generator
// cross-checks, Monte Carlo ensembles and Bethe probability tables.
//
// Exit codes: 0 success, 1 check or tolerance failure, 2 invalid input or cap.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrswap/lrswap.hpp"

namespace fs = std::filesystem;
using namespace lrswap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

/// Fixed spectral point for boundary-sum checks in `verify`.
SpectralPoint<Rational> bc_point(int n) {
  const std::vector<Rational> pool{make_rational(1, 2), Rational(3), make_rational(7, 4), make_rational(-2, 5),
                                   make_rational(5, 3)};
  return {std::vector<Rational>(pool.begin(), pool.begin() + n)};
}

struct Common {
  std::string rule = "drop-push";
  std::string output_dir;
};

fs::path output_dir(const Common& c) {
  fs::path dir = ".";
  if (!c.output_dir.empty())
    dir = c.output_dir;
  else if (const char* env = std::getenv("LRSWAP_OUTPUT_DIR"); env && *env)
    dir = env;
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  require(static_cast<bool>(os), ErrorKind::InvalidParameter, "cannot write " + p.string());
  os << text;
}

void write_json(const fs::path& p, const Json& j) { write_text(p, j.dump(2) + "\n"); }

Json with_header(const RunSettings& s, Json body) {
  Json j{{"tool", "lrswap"}, {"version", kVersion}, {"config", settings_json(s)}};
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  Common common;
  int n = 3;
  int N = 3;
  int triples = 20;
  std::uint64_t seed = 20240917;
};

int cmd_verify(const VerifyOpts& o) {
  const RuleType rule = parse_rule(o.common.rule);
  require(o.triples >= 1, ErrorKind::InvalidParameter, "--triples must be >= 1");
  IdentityReport rep = verify_identities(o.n, o.N, rule);
  for (auto& c : verify_scatter(o.N, rule, o.triples, o.seed)) rep.checks.push_back(std::move(c));
  // the boundary sum runs over all n! permutations; keep it to n <= 4
  if (o.n <= 4)
    for (auto& c : verify_bc_sums(o.n, o.N, rule, bc_point(o.n))) rep.checks.push_back(std::move(c));

  const bool ybe_ok = rep.failures("ybe").empty();
  const bool reducible = rep.failures("reducibility").empty() && rep.failures("structure").empty();
  const bool expected = is_integrable(rule) ? rep.all_pass() : ybe_ok && !reducible;

  const RunSettings s{{"command", "verify"},          {"rule", to_string(rule)},
                      {"n", std::to_string(o.n)},     {"N", std::to_string(o.N)},
                      {"triples", std::to_string(o.triples)}, {"seed", std::to_string(o.seed)}};
  Json body = to_json(rep);
  body["expected_outcome"] = expected;
  const fs::path out = output_dir(o.common) / ("verify_" + std::string(to_string(rule)) + "_n" + std::to_string(o.n) + "_N" +
                                               std::to_string(o.N) + ".json");
  write_json(out, with_header(s, body));

  std::cout << "verify " << to_string(rule) << " n=" << o.n << " N=" << o.N << ": " << rep.checks.size()
            << " checks, " << rep.failures().size() << " failed";
  if (!rep.failures().empty()) {
    const auto* f = rep.failures().front();
    std::cout << " (first: " << f->name;
    if (f->witness) std::cout << " at " << word_to_string(*f->witness);
    std::cout << ")";
  }
  std::cout << "\n  report: " << out.string() << "\n  " << (expected ? "outcome as expected" : "UNEXPECTED outcome")
            << "\n";
  return expected ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- shared query options

struct QueryOpts {
  Common common;
  std::optional<int> n;
  std::optional<int> N;
  std::string Y;
  std::string nu;
  double t = 1.0;
};

struct ResolvedQuery {
  RuleType rule;
  Configuration initial;
  int species;
};

ResolvedQuery resolve(const QueryOpts& o) {
  const RuleType rule = parse_rule(o.common.rule);
  Word nu;
  if (!o.nu.empty()) {
    nu = parse_word(o.nu);
  } else {
    const int n = o.n.value_or(2);
    const int N = o.N.value_or(2);
    require(n >= 1 && N >= 1, ErrorKind::InvalidParameter, "n and N must be positive");
    for (int i = 0; i < n; ++i) nu.push_back(std::max(1, N - i));
  }
  const int n = static_cast<int>(nu.size());
  require(!o.n || *o.n == n, ErrorKind::InvalidParameter, "--n does not match the length of --nu");
  const int species = o.N.value_or(max_letter(nu));
  require(max_letter(nu) <= species, ErrorKind::InvalidParameter, "--nu uses a species above --N");
  Positions y;
  if (o.Y.empty())
    for (int i = 0; i < n; ++i) y.push_back(i);
  else
    y = parse_positions(o.Y);
  require(static_cast<int>(y.size()) == n, ErrorKind::InvalidParameter, "--Y and --nu have different lengths");
  require(std::isfinite(o.t) && o.t >= 0.0, ErrorKind::InvalidParameter, "--t must be finite and nonnegative");
  return {rule, Configuration(y, nu), species};
}

RunSettings query_settings(const std::string& command, const ResolvedQuery& q, double t) {
  return {{"command", command},
          {"rule", to_string(q.rule)},
          {"n", std::to_string(q.initial.size())},
          {"N", std::to_string(q.species)},
          {"initial", q.initial.key()},
          {"t", format_double(t)}};
}

struct QuadOpts {
  std::optional<double> r;
  std::optional<int> M;
  bool conv_check = false;
  unsigned threads = 1;
  int window = 0;
  double window_tol = 1e-12;
};

QuadratureConfig resolve_quad(const QuadOpts& o, RuleType rule, int n) {
  QuadratureConfig cfg = QuadratureConfig::defaults(rule, n);
  if (o.r) cfg.radius = *o.r;
  if (o.M) cfg.nodes = *o.M;
  cfg.convergence_check = o.conv_check;
  cfg.threads = o.threads;
  cfg.validate(rule);
  return cfg;
}

int resolve_window(const QuadOpts& o, int n, double t) {
  require(o.window >= 0, ErrorKind::InvalidParameter, "--window must be >= 0 (0 picks it from the Poisson tail)");
  return o.window > 0 ? o.window : std::max(1, poisson_window(n, t, o.window_tol));
}

void add_quad_settings(RunSettings& s, const QuadratureConfig& cfg, int window, const QuadOpts& o) {
  s.emplace_back("r", format_double(cfg.radius));
  s.emplace_back("M", std::to_string(cfg.nodes));
  s.emplace_back("conv_check", cfg.convergence_check ? "true" : "false");
  s.emplace_back("window", std::to_string(window));
  s.emplace_back("window_tol", format_double(o.window_tol));
}

// ---------------------------------------------------------------- prob

struct ProbOpts {
  QueryOpts query;
  QuadOpts quad;
  std::string method = "all";
  double tail_tol = 1e-14;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 7;
  std::optional<double> tol_bethe;
  double mc_sigmas = 4.0;
  double mc_min_p = 1e-3;
  std::string out = "prob";
};

int cmd_prob(const ProbOpts& o) {
  const ResolvedQuery q = resolve(o.query);
  const bool use_bethe = o.method == "bethe" || o.method == "all";
  const bool use_series = o.method == "series" || o.method == "all";
  const bool use_mc = o.method == "mc" || o.method == "all";
  require(use_bethe || use_series || use_mc, ErrorKind::InvalidParameter, "--method must be bethe, series, mc or all");
  const int n = q.initial.size();
  const double tol_bethe = o.tol_bethe.value_or(n <= 2 ? 1e-8 : 1e-6);

  RunSettings s = query_settings("prob", q, o.query.t);
  s.emplace_back("method", o.method);

  std::map<Configuration, ComparisonRow> rows;
  std::optional<ProbabilityTable> table;
  if (use_bethe) {
    const QuadratureConfig cfg = resolve_quad(o.quad, q.rule, n);
    const int window = resolve_window(o.quad, n, o.query.t);
    add_quad_settings(s, cfg, window, o.quad);
    table = probability_table(q.initial, o.query.t, window, q.rule, cfg);
    for (const auto& r : table->rows) {
      auto& row = rows[r.state];
      row.state = r.state;
      row.p_bethe = r.probability;
      row.imag_residual = r.imag_residual;
      row.conv_delta = r.convergence_delta;
    }
  }
  std::optional<SeriesResult> series;
  if (use_series) {
    s.emplace_back("tail_tol", format_double(o.tail_tol));
    series = series_distribution(q.initial, o.query.t, q.rule, o.tail_tol);
    for (const auto& [c, p] : series->probabilities) rows[c].state = c;
  }
  std::optional<Ensemble> mc;
  if (use_mc) {
    s.emplace_back("trials", std::to_string(o.trials));
    s.emplace_back("seed", std::to_string(o.seed));
    mc = simulate_ensemble(q.initial, o.query.t, o.trials, o.seed, q.rule);
    for (const auto& [c, k] : mc->counts) rows[c].state = c;
  }

  double max_bethe_series = 0.0;
  double max_imag = 0.0;
  int mc_breaches = 0;
  std::vector<ComparisonRow> out_rows;
  for (auto& [c, row] : rows) {
    if (series) row.p_series = series->at(c);
    if (mc) row.p_mc = mc->frequency(c);
    if (use_bethe && !row.p_bethe) row.p_bethe = 0.0;  // outside the window or unreachable content
    if (row.p_bethe && row.p_series) max_bethe_series = std::max(max_bethe_series, std::abs(*row.p_bethe - *row.p_series));
    if (row.imag_residual) max_imag = std::max(max_imag, std::abs(*row.imag_residual));
    if (row.p_mc && row.p_series && *row.p_series > o.mc_min_p) {
      const double p = *row.p_series;
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(o.trials));
      if (std::abs(*row.p_mc - p) > o.mc_sigmas * se) ++mc_breaches;
    }
    out_rows.push_back(row);
  }

  bool pass = true;
  Json summary{{"rows", out_rows.size()}};
  if (use_bethe) {
    summary["total_mass_bethe"] = table->total_mass;
    summary["deficit_bethe"] = table->deficit;
    summary["max_imag"] = max_imag;
    pass = pass && max_imag < kImagTolerance;
  }
  if (use_series) summary["series_tail"] = series->tail;
  if (use_bethe && use_series) {
    summary["max_abs_bethe_series"] = max_bethe_series;
    summary["tol_bethe"] = tol_bethe;
    pass = pass && max_bethe_series < tol_bethe;
  }
  if (use_mc && use_series) {
    summary["mc_breaches"] = mc_breaches;
    summary["mc_sigmas"] = o.mc_sigmas;
    pass = pass && mc_breaches == 0;
  }
  summary["pass"] = pass;

  const fs::path dir = output_dir(o.query.common);
  std::ostringstream csv;
  write_csv(csv, s, n, out_rows);
  write_text(dir / (o.out + ".csv"), csv.str());
  write_json(dir / (o.out + "_summary.json"), with_header(s, summary));
  std::cout << "prob " << q.initial.key() << " t=" << o.query.t << " method=" << o.method << ": " << out_rows.size()
            << " states";
  if (use_bethe && use_series) std::cout << ", max |bethe-series| = " << max_bethe_series;
  if (use_mc && use_series) std::cout << ", mc breaches = " << mc_breaches;
  std::cout << "\n  " << (pass ? "within tolerance" : "TOLERANCE BREACH") << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- generator

struct GeneratorOpts {
  Common common;
  int n = 2;
  int N = 2;
  std::string shape;
};

int cmd_generator(const GeneratorOpts& o) {
  const RuleType rule = parse_rule(o.common.rule);
  require_integrable(rule);
  Positions target;
  if (o.shape.empty())
    for (int i = 0; i < o.n; ++i) target.push_back(i);
  else
    target = parse_positions(o.shape);
  require(static_cast<int>(target.size()) == o.n, ErrorKind::InvalidParameter, "--shape length must equal --n");
  const GeneratorReport rep = compare_generator(target, o.N, rule);
  std::ostringstream shape_text;
  for (std::size_t i = 0; i < target.size(); ++i) shape_text << (i ? "," : "") << target[i];
  const RunSettings s{{"command", "generator"},
                      {"rule", to_string(rule)},
                      {"n", std::to_string(o.n)},
                      {"N", std::to_string(o.N)},
                      {"shape", shape_text.str()}};
  const fs::path out = output_dir(o.common) / ("generator_" + std::string(to_string(rule)) + "_n" + std::to_string(o.n) + "_N" +
                                               std::to_string(o.N) + ".json");
  write_json(out, with_header(s, generator_json(rep)));
  std::cout << "generator " << to_string(rule) << " target (" << shape_text.str() << "): " << rep.sources.size()
            << " source shapes, " << rep.differences.size() << " differing entries"
            << (rep.row_sums_ok ? "" : ", outgoing rate totals wrong") << "\n";
  for (const auto& d : rep.differences) {
    std::cout << "  source";
    for (auto x : d.source) std::cout << ' ' << x;
    std::cout << ": (" << word_to_string(d.row) << "," << word_to_string(d.col) << ") extracted " << d.extracted
              << " predicted " << d.predicted << "\n";
  }
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  QueryOpts query;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 7;
  std::string out = "simulate";
};

int cmd_simulate(const SimulateOpts& o) {
  const ResolvedQuery q = resolve(o.query);
  require(o.trials >= 1, ErrorKind::InvalidParameter, "--trials must be >= 1");
  RunSettings s = query_settings("simulate", q, o.query.t);
  s.emplace_back("trials", std::to_string(o.trials));
  s.emplace_back("seed", std::to_string(o.seed));
  const Ensemble e = simulate_ensemble(q.initial, o.query.t, o.trials, o.seed, q.rule);
  std::vector<ComparisonRow> rows;
  for (const auto& [c, k] : e.counts) {
    ComparisonRow r;
    r.state = c;
    r.p_mc = e.frequency(c);
    rows.push_back(r);
  }
  std::ostringstream csv;
  write_csv(csv, s, q.initial.size(), rows);
  write_text(output_dir(o.query.common) / (o.out + ".csv"), csv.str());
  std::cout << "simulate " << q.initial.key() << " t=" << o.query.t << ": " << o.trials << " trajectories, "
            << rows.size() << " distinct final states\n";
  return kExitOk;
}

// ---------------------------------------------------------------- table

struct TableOpts {
  QueryOpts query;
  QuadOpts quad;
  std::string out = "table";
};

int cmd_table(const TableOpts& o) {
  const ResolvedQuery q = resolve(o.query);
  const int n = q.initial.size();
  const QuadratureConfig cfg = resolve_quad(o.quad, q.rule, n);
  const int window = resolve_window(o.quad, n, o.query.t);
  RunSettings s = query_settings("table", q, o.query.t);
  add_quad_settings(s, cfg, window, o.quad);
  const ProbabilityTable t = probability_table(q.initial, o.query.t, window, q.rule, cfg);
  std::vector<ComparisonRow> rows;
  for (const auto& r : t.rows) {
    ComparisonRow c;
    c.state = r.state;
    c.p_bethe = r.probability;
    c.imag_residual = r.imag_residual;
    c.conv_delta = r.convergence_delta;
    rows.push_back(c);
  }
  const fs::path dir = output_dir(o.query.common);
  std::ostringstream csv;
  write_csv(csv, s, n, rows);
  write_text(dir / (o.out + ".csv"), csv.str());
  write_json(dir / (o.out + "_summary.json"), with_header(s, table_summary_json(t)));
  std::cout << "table " << q.initial.key() << " t=" << o.query.t << " window=" << window << ": " << rows.size()
            << " states, total mass " << format_double(t.total_mass) << ", max imag " << format_double(t.max_imag)
            << "\n";
  return t.max_imag < kImagTolerance ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- config file

/// Reads flat `key = value` lines ('#' starts a comment) into `--key=value` tokens.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidParameter, "cannot read config file " + path);
  std::vector<std::string> out;
  std::string line;
  auto trim = [](std::string x) {
    const auto b = x.find_first_not_of(" \t\r");
    const auto e = x.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::InvalidParameter, "config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), ErrorKind::InvalidParameter, "config line without key: " + line);
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

/// Config values are spliced in right after the subcommand so that explicit
/// flags, which come later, take precedence.
std::vector<std::string> expand_config(int argc, char** argv, const std::vector<std::string>& subcommands) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> cfg;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      require(i + 1 < args.size(), ErrorKind::InvalidParameter, "--config needs a file");
      cfg = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      cfg = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (!cfg) return kept;
  const auto tokens = config_tokens(*cfg);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (const auto& sc : subcommands)
      if (kept[i] == sc) {
        kept.insert(kept.begin() + static_cast<std::ptrdiff_t>(i) + 1, tokens.begin(), tokens.end());
        return kept;
      }
  return kept;
}

void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--rule", c.rule, "drop-push | tasep | non-integrable")->capture_default_str();
  sc->add_option("--output-dir", c.output_dir, "output directory (default: $LRSWAP_OUTPUT_DIR or .)");
}

void add_query(CLI::App* sc, QueryOpts& q) {
  add_common(sc, q.common);
  sc->add_option("--n", q.n, "particle count");
  sc->add_option("--N", q.N, "species count");
  sc->add_option("--Y", q.Y, "initial positions, comma separated (default 0..n-1)");
  sc->add_option("--nu", q.nu, "initial species word (default N, N-1, ...)");
  sc->add_option("--t", q.t, "time")->capture_default_str();
}

void add_quad(CLI::App* sc, QuadOpts& q) {
  sc->add_option("--r", q.r, "contour radius (default 1.5 drop-push, 0.5 tasep)");
  sc->add_option("--M", q.M, "nodes per circle (default 64 for n<=2, 32 for n=3)");
  sc->add_flag("--conv-check", q.conv_check, "also evaluate at 2M and report the change");
  sc->add_option("--threads", q.threads, "worker threads for quadrature")->capture_default_str();
  sc->add_option("--window", q.window, "position window beyond y_n (0 = Poisson tail rule)")->capture_default_str();
  sc->add_option("--window-tol", q.window_tol, "Poisson tail target for the automatic window")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lrswap: multispecies TASEP with long-range swap", "lrswap"};
  app.set_version_flag("--version", std::string("lrswap ") + kVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "exact identity, Yang-Baxter and boundary-sum suite");
  add_common(verify, vo.common);
  verify->add_option("--n", vo.n, "particle count")->capture_default_str();
  verify->add_option("--N", vo.N, "species count")->capture_default_str();
  verify->add_option("--triples", vo.triples, "random rational Yang-Baxter triples")->capture_default_str();
  verify->add_option("--seed", vo.seed, "seed for the random triples")->capture_default_str();

  ProbOpts po;
  auto* prob = app.add_subcommand("prob", "transition probabilities by Bethe quadrature, series oracle and MC");
  add_query(prob, po.query);
  add_quad(prob, po.quad);
  prob->add_option("--method", po.method, "bethe | series | mc | all")->capture_default_str();
  prob->add_option("--tail-tol", po.tail_tol, "Poisson tail tolerance of the series oracle")->capture_default_str();
  prob->add_option("--trials", po.trials, "Monte Carlo trajectories")->capture_default_str();
  prob->add_option("--seed", po.seed, "Monte Carlo seed")->capture_default_str();
  prob->add_option("--tol-bethe", po.tol_bethe, "max |bethe - series| (default 1e-8, n=3: 1e-6)");
  prob->add_option("--mc-sigmas", po.mc_sigmas, "allowed MC deviation in standard errors")->capture_default_str();
  prob->add_option("--mc-min-p", po.mc_min_p, "MC check only for states above this probability")->capture_default_str();
  prob->add_option("--out", po.out, "output file stem")->capture_default_str();

  GeneratorOpts go;
  auto* gen = app.add_subcommand("generator", "compare extracted rates with the pair-algebra matrices");
  add_common(gen, go.common);
  gen->add_option("--n", go.n, "particle count")->capture_default_str();
  gen->add_option("--N", go.N, "species count")->capture_default_str();
  gen->add_option("--shape", go.shape, "target positions, comma separated (default packed 0..n-1)");

  SimulateOpts so;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo ensemble of final states");
  add_query(sim, so.query);
  sim->add_option("--trials", so.trials, "trajectories")->capture_default_str();
  sim->add_option("--seed", so.seed, "seed")->capture_default_str();
  sim->add_option("--out", so.out, "output file stem")->capture_default_str();

  TableOpts to;
  auto* tab = app.add_subcommand("table", "Bethe probability table over a position window");
  add_query(tab, to.query);
  add_quad(tab, to.quad);
  tab->add_option("--out", to.out, "output file stem")->capture_default_str();

  try {
    auto args = expand_config(argc, argv, {"verify", "prob", "generator", "simulate", "table"});
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    if (*verify) return cmd_verify(vo);
    if (*prob) return cmd_prob(po);
    if (*gen) return cmd_generator(go);
    if (*sim) return cmd_simulate(so);
    if (*tab) return cmd_table(to);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool input = e.kind() == ErrorKind::InvalidParameter || e.kind() == ErrorKind::ResourceLimit ||
                       e.kind() == ErrorKind::UnsupportedRule || e.kind() == ErrorKind::Singularity;
    return input ? kExitBadInput : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
