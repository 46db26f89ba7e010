#include "zeroset/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "zeroset/benchmarks.hpp"
#include "zeroset/coverage.hpp"
#include "zeroset/expr.hpp"
#include "zeroset/metrics.hpp"
#include "zeroset/solver.hpp"
#include "zeroset/tree_solver.hpp"

namespace zeroset {

namespace {

// Reference clouds for the fill-distance column come from one fixed stream so
// the metric is comparable across runs and seeds.
constexpr std::uint64_t kReferenceSeed = 97865214;
constexpr std::uint64_t kReferenceStream = ~std::uint64_t{0};
constexpr int kReferenceCount = 500;

double parse_double(const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.push_back("");
  return parts;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void apply_param(SolverConfig& cfg, const std::string& name, double value) {
  if (name == "n") {
    cfg.initial_chains = static_cast<int>(value);
  } else if (name == "p") {
    cfg.inject_per_round = static_cast<int>(value);
  } else if (name == "C") {
    cfg.decrease_factor = value;
  } else if (name == "k") {
    cfg.residual_gain = value;
  } else if (name == "tol") {
    cfg.tol = value;
  } else if (name == "N") {
    cfg.target_solutions = static_cast<int>(value);
  } else if (name == "R0") {
    cfg.initial_radius = value;
  } else if (name == "seed") {
    if (value < 0) throw std::invalid_argument("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(value);
  } else if (name == "branching") {
    cfg.branching = static_cast<int>(value);
  } else {
    throw std::invalid_argument("unknown parameter: " + name);
  }
}

// Flag values plus the CLI11 handles needed to tell "user set it" from "left
// at default", so benchmark defaults survive untouched flags.
struct Overrides {
  int n = 0, p = 0, target = 0, branching = 0, threads = 0;
  double C = 0, k = 0, tol = 0, R0 = 0;
  double seed = 0;
  std::int64_t budget = 0;
  std::string policy = "retry";
  bool normalize = false;
  CLI::Option *n_o = nullptr, *p_o = nullptr, *target_o = nullptr, *branching_o = nullptr,
              *threads_o = nullptr, *C_o = nullptr, *k_o = nullptr, *tol_o = nullptr,
              *R0_o = nullptr, *seed_o = nullptr, *budget_o = nullptr, *policy_o = nullptr,
              *normalize_o = nullptr;

  void add_to(CLI::App& cmd, bool with_seed) {
    n_o = cmd.add_option("--n", n, "chains started up front");
    p_o = cmd.add_option("--p", p, "fresh chains injected per round");
    C_o = cmd.add_option("--C", C, "residual decrease factor, in [0.5, 1]");
    k_o = cmd.add_option("--k", k, "residual weight in the proposal radius");
    tol_o = cmd.add_option("--tol", tol, "solution threshold on the residual");
    target_o = cmd.add_option("--N", target, "number of solutions to collect");
    R0_o = cmd.add_option("--R0", R0, "tree-root seed radius (0: diameter/10)");
    if (with_seed) seed_o = cmd.add_option("--seed", seed, "random seed");
    branching_o = cmd.add_option("--branching", branching, "children attempted per node");
    budget_o = cmd.add_option("--budget", budget, "stop after this many evaluations");
    threads_o = cmd.add_option("--threads", threads, "worker threads (default 1)");
    policy_o = cmd.add_option("--policy", policy, "acceptance policy")
                   ->check(CLI::IsMember({"retry", "strict"}));
    normalize_o = cmd.add_flag("--normalize,!--no-normalize", normalize,
                               "rescale fields by their pilot mean magnitude");
  }

  void apply(SolverConfig& cfg) const {
    if (n_o->count()) cfg.initial_chains = n;
    if (p_o->count()) cfg.inject_per_round = p;
    if (C_o->count()) cfg.decrease_factor = C;
    if (k_o->count()) cfg.residual_gain = k;
    if (tol_o->count()) cfg.tol = tol;
    if (target_o->count()) cfg.target_solutions = target;
    if (R0_o->count()) cfg.initial_radius = R0;
    if (seed_o && seed_o->count()) apply_param(cfg, "seed", seed);
    if (branching_o->count()) cfg.branching = branching;
    if (budget_o->count()) cfg.eval_budget = budget;
    if (threads_o->count()) cfg.threads = threads;
    if (policy_o->count()) {
      cfg.policy = policy == "strict" ? AcceptancePolicy::strict : AcceptancePolicy::retry;
    }
    if (normalize_o->count()) cfg.normalize = normalize;
  }
};

struct ProblemSource {
  const BenchmarkCase* bench = nullptr;  // registry case, or
  std::vector<std::string> formulas;     // explicit formulas over this domain
  std::optional<BoxDomain> domain;

  Problem build(double tol) const {
    if (bench) return make_problem(*bench, tol);
    std::vector<ScalarField> fields;
    fields.reserve(formulas.size());
    for (const std::string& text : formulas) {
      fields.push_back(make_field(text, domain->dimension()));
    }
    return Problem(std::move(fields), *domain, tol);
  }
};

struct RunResult {
  SolveReport report;
  std::vector<GenealogyRow> genealogy;
};

RunResult run_one(const ProblemSource& source, const SolverConfig& cfg, bool enhanced) {
  Problem problem = source.build(cfg.tol);
  RunResult result;
  if (enhanced) {
    TreeReport tree = solve_enhanced_full(problem, cfg);
    result.report = std::move(tree.report);
    result.genealogy = std::move(tree.genealogy);
  } else {
    result.report = solve(problem, cfg);
  }
  if (source.bench && source.bench->reference != ReferenceKind::none &&
      !result.report.solutions.empty()) {
    RngStream ref_rng(kReferenceSeed, kReferenceStream);
    const std::vector<Point> reference =
        reference_points(*source.bench, kReferenceCount, ref_rng);
    std::vector<Point> cloud;
    cloud.reserve(result.report.solutions.size());
    for (const Solution& s : result.report.solutions) cloud.push_back(s.point);
    result.report.coverage_stats = coverage(cloud, reference);
  }
  return result;
}

struct SuiteRow {
  std::string case_name;
  std::string param;  // empty: run the case defaults
  double value = 0.0;
};

std::vector<SuiteRow> suite_rows(const std::string& suite) {
  const auto param_rows = [](const char* name, const char* param,
                             std::initializer_list<double> values) {
    std::vector<SuiteRow> rows;
    for (double v : values) rows.push_back(SuiteRow{name, param, v});
    return rows;
  };
  if (suite == "ex1-n") return param_rows("ex1", "n", {5, 100, 300});
  if (suite == "ex2-C") return param_rows("ex2", "C", {0.55, 0.75, 0.95});
  if (suite == "ex3-k") return param_rows("ex3", "k", {0.005, 0.05, 0.25});
  if (suite == "ex4-p") return param_rows("ex4", "p", {1, 3, 5});
  if (suite == "ex5-tol") return param_rows("ex5", "tol", {0.15, 0.75, 1.5});
  if (suite == "ex6-N") return param_rows("ex6", "N", {100, 1000, 2000});
  const auto case_rows = [](std::initializer_list<const char*> names) {
    std::vector<SuiteRow> rows;
    for (const char* n : names) rows.push_back(SuiteRow{n, "", 0.0});
    return rows;
  };
  if (suite == "spheres") return case_rows({"sphere2", "sphere3", "sphere4", "sphere10"});
  if (suite == "cubes") return case_rows({"cube2", "cube3", "cube4", "cube10"});
  if (suite == "multi") return case_rows({"multi1", "multi2", "multi3"});
  throw std::invalid_argument("unknown suite: " + suite);
}

std::string row_label(const SuiteRow& row) {
  if (row.param.empty()) return row.case_name;
  std::ostringstream s;
  s << row.case_name << '[' << row.param << '=' << format_sig(row.value, 6) << ']';
  return s.str();
}

}  // namespace

BoxDomain parse_domain(const std::string& text, int dim) {
  if (dim < 1) throw std::invalid_argument("--dim must be at least 1");
  std::vector<std::pair<double, double>> pairs;
  for (const std::string& part : split(text, ';')) {
    const std::vector<std::string> bounds = split(part, ',');
    if (bounds.size() != 2) {
      throw std::invalid_argument("--domain: expected 'lo,hi' but got '" + part + "'");
    }
    pairs.emplace_back(parse_double(bounds[0]), parse_double(bounds[1]));
  }
  if (pairs.empty()) throw std::invalid_argument("--domain: empty specification");
  if (pairs.size() == 1 && dim > 1) pairs.assign(static_cast<std::size_t>(dim), pairs[0]);
  if (static_cast<int>(pairs.size()) != dim) {
    throw std::invalid_argument("--domain: got " + std::to_string(pairs.size()) +
                                " axis ranges for --dim " + std::to_string(dim));
  }
  Point lower, upper;
  for (const auto& [lo, hi] : pairs) {
    lower.push_back(lo);
    upper.push_back(hi);
  }
  return BoxDomain(std::move(lower), std::move(upper));
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& part : split(text, ',')) values.push_back(parse_double(part));
  if (values.empty()) throw std::invalid_argument("empty value list");
  return values;
}

namespace {

struct SourceFlags {
  std::string bench;
  std::vector<std::string> exprs;
  int dim = 0;
  std::string domain_text;
  CLI::Option *bench_o = nullptr, *expr_o = nullptr, *dim_o = nullptr, *domain_o = nullptr;

  void add_to(CLI::App& cmd) {
    bench_o = cmd.add_option("--bench", bench, "benchmark name (see `list`)");
    expr_o = cmd.add_option("--expr", exprs, "field formula; repeat for systems");
    dim_o = cmd.add_option("--dim", dim, "dimension for --expr problems");
    domain_o = cmd.add_option("--domain", domain_text, "box as lo,hi or lo,hi;lo,hi;...");
  }

  // Resolves to a registry case or an expression problem; the returned
  // default config is the case's table row, or the stock defaults for
  // expressions.
  std::pair<ProblemSource, SolverConfig> resolve() const {
    const bool has_bench = bench_o->count() > 0;
    const bool has_expr = expr_o->count() > 0;
    if (has_bench == has_expr) {
      throw std::invalid_argument("exactly one of --bench or --expr is required");
    }
    ProblemSource source;
    if (has_bench) {
      if (dim_o->count() || domain_o->count()) {
        throw std::invalid_argument("--dim/--domain only apply to --expr problems");
      }
      source.bench = &find_case(bench);
      return {source, source.bench->config};
    }
    if (!dim_o->count()) throw std::invalid_argument("--expr requires --dim");
    if (!domain_o->count()) throw std::invalid_argument("--expr requires --domain");
    source.formulas = exprs;
    source.domain = parse_domain(domain_text, dim);
    for (const std::string& text : exprs) parse_expression(text, dim);  // fail early
    return {source, SolverConfig{}};
  }
};

int exit_code(bool any_budget_stop) { return any_budget_stop ? 2 : 0; }

int cmd_solve(const SourceFlags& src, const Overrides& over, const std::string& algo,
              const std::string& out_path, const std::string& format,
              const std::string& trace_path, const std::string& genealogy_path) {
  auto [source, cfg] = src.resolve();
  over.apply(cfg);
  cfg.record_traces = !trace_path.empty() || !genealogy_path.empty();
  const bool enhanced = algo == "enhanced";
  if (!genealogy_path.empty() && !enhanced) {
    throw std::invalid_argument("--genealogy requires --algo enhanced");
  }
  RunResult result = run_one(source, cfg, enhanced);

  TableRow row = to_table_row(result.report);
  row.label = source.bench ? source.bench->name : "expr";
  std::cout << table_header() << '\n' << table_line(row) << '\n';

  if (!out_path.empty()) {
    write_file(out_path, export_points(result.report,
                                       format == "json" ? ExportFormat::json : ExportFormat::csv));
  }
  if (!trace_path.empty()) {
    write_file(trace_path, export_trace_csv(result.report.traces, result.report.dimension));
  }
  if (!genealogy_path.empty()) {
    write_file(genealogy_path, export_genealogy_csv(result.genealogy));
  }
  return exit_code(result.report.budget_stopped);
}

int cmd_bench(const std::string& suite, const std::string& seeds_text, const Overrides& over,
              const std::string& algo) {
  const std::vector<SuiteRow> rows = suite_rows(suite);
  std::vector<std::uint64_t> seeds;
  for (double v : parse_number_list(seeds_text)) {
    if (v < 0) throw std::invalid_argument("--seeds must be non-negative");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  const bool enhanced = algo == "enhanced";
  std::cout << table_header() << '\n';
  bool stopped = false;
  for (const SuiteRow& spec : rows) {
    ProblemSource source;
    source.bench = &find_case(spec.case_name);
    SolverConfig cfg = source.bench->config;
    if (!spec.param.empty()) apply_param(cfg, spec.param, spec.value);
    over.apply(cfg);
    std::vector<double> times, ecs, fills;
    TableRow last;
    for (std::uint64_t seed : seeds) {
      cfg.seed = seed;
      RunResult result = run_one(source, cfg, enhanced);
      stopped = stopped || result.report.budget_stopped;
      TableRow row = to_table_row(result.report);
      row.label = row_label(spec) + " seed=" + std::to_string(seed);
      std::cout << table_line(row) << '\n';
      times.push_back(row.time_seconds);
      ecs.push_back(row.ec);
      if (row.fill_distance) fills.push_back(*row.fill_distance);
      last = row;
    }
    TableRow med = last;
    med.label = row_label(spec) + " median";
    med.time_seconds = median(times);
    med.ec = median(ecs);
    if (fills.size() == seeds.size()) {
      med.fill_distance = median(fills);
    } else {
      med.fill_distance.reset();
    }
    std::cout << table_line(med) << '\n';
  }
  return exit_code(stopped);
}

int cmd_sweep(const SourceFlags& src, const Overrides& over, const std::string& algo,
              const std::string& param, const std::string& values_text) {
  auto [source, base] = src.resolve();
  over.apply(base);
  {
    SolverConfig probe = base;  // reject unknown names before running anything
    apply_param(probe, param, probe.decrease_factor);
  }
  const std::vector<double> values = parse_number_list(values_text);
  const bool enhanced = algo == "enhanced";
  std::cout << table_header() << '\n';
  bool stopped = false;
  for (double v : values) {
    SolverConfig cfg = base;
    apply_param(cfg, param, v);
    RunResult result = run_one(source, cfg, enhanced);
    stopped = stopped || result.report.budget_stopped;
    TableRow row = to_table_row(result.report);
    row.label = param + "=" + format_sig(v, 6);
    std::cout << table_line(row) << '\n';
  }
  return exit_code(stopped);
}

int cmd_list() {
  std::cout << "name\tdim\tfields\tn\ttol\tN\tC\tk\tp\tformulas\n";
  for (const BenchmarkCase& c : registry()) {
    std::cout << c.name << '\t' << c.domain.dimension() << '\t' << c.formulas.size() << '\t'
              << c.config.initial_chains << '\t' << format_sig(c.config.tol, 6) << '\t'
              << c.config.target_solutions << '\t' << format_sig(c.config.decrease_factor, 6)
              << '\t' << format_sig(c.config.residual_gain, 6) << '\t'
              << c.config.inject_per_round << '\t';
    for (std::size_t i = 0; i < c.formulas.size(); ++i) {
      std::cout << (i ? " | " : "") << c.formulas[i];
    }
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Streaming stochastic zero-set solver"};
  app.require_subcommand(1);

  SourceFlags solve_src, sweep_src;
  Overrides solve_over, bench_over, sweep_over;
  std::string solve_algo = "basic", bench_algo = "basic", sweep_algo = "basic";
  std::string out_path, format = "csv", trace_path, genealogy_path;
  std::string suite, seeds_text = "1", param, values_text;

  CLI::App* solve_cmd = app.add_subcommand("solve", "run one configuration");
  solve_src.add_to(*solve_cmd);
  solve_over.add_to(*solve_cmd, /*with_seed=*/true);
  solve_cmd->add_option("--algo", solve_algo, "basic | enhanced")
      ->check(CLI::IsMember({"basic", "enhanced"}));
  solve_cmd->add_option("--out", out_path, "write the solution cloud here");
  solve_cmd->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  solve_cmd->add_option("--trace", trace_path, "write accepted-step records here");
  solve_cmd->add_option("--genealogy", genealogy_path,
                        "write the final tree population here (enhanced only)");

  CLI::App* bench_cmd = app.add_subcommand("bench", "run a table suite over seeds");
  bench_cmd->add_option("--suite", suite,
                        "ex1-n ex2-C ex3-k ex4-p ex5-tol ex6-N spheres cubes multi")
      ->required();
  bench_cmd->add_option("--seeds", seeds_text, "comma-separated seed list");
  bench_over.add_to(*bench_cmd, /*with_seed=*/false);
  bench_cmd->add_option("--algo", bench_algo, "basic | enhanced")
      ->check(CLI::IsMember({"basic", "enhanced"}));

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "vary one parameter over a base run");
  sweep_src.add_to(*sweep_cmd);
  sweep_over.add_to(*sweep_cmd, /*with_seed=*/true);
  sweep_cmd->add_option("--param", param, "n p C k tol N R0 seed branching")->required();
  sweep_cmd->add_option("--values", values_text, "comma-separated values")->required();
  sweep_cmd->add_option("--algo", sweep_algo, "basic | enhanced")
      ->check(CLI::IsMember({"basic", "enhanced"}));

  CLI::App* list_cmd = app.add_subcommand("list", "show the benchmark registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }

  try {
    if (app.got_subcommand(solve_cmd)) {
      return cmd_solve(solve_src, solve_over, solve_algo, out_path, format, trace_path,
                       genealogy_path);
    }
    if (app.got_subcommand(bench_cmd)) {
      return cmd_bench(suite, seeds_text, bench_over, bench_algo);
    }
    if (app.got_subcommand(sweep_cmd)) {
      return cmd_sweep(sweep_src, sweep_over, sweep_algo, param, values_text);
    }
    if (app.got_subcommand(list_cmd)) return cmd_list();
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace zeroset
