// fairdiv: command-line frontend for the equalizing-multiplier allocation
// library. Subcommands: solve, allocate, check, experiment, reproduce.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure
// (solver non-termination, quadrature breakdown).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fairdiv/errors.hpp"
#include "fairdiv/experiment.hpp"
#include "fairdiv/fairness.hpp"
#include "fairdiv/solver.hpp"

namespace {

using nlohmann::json;

struct SolveArgs {
  std::string profile;
  double delta = 1e-5;
  std::optional<double> q;
  std::string method = "anneal";
  bool trace = false;
  std::string out;
  std::string format = "text";
};

struct AllocateArgs {
  std::string profile;
  int m = 0;
  std::uint64_t seed = 1;
  std::string algorithm = "multiplier";
  double delta_floor = 1e-6;
  std::optional<double> q;
  std::optional<double> p;
  double mnw_tol = 1e-5;
  std::string save_instance;
  std::string out;
  std::string format = "text";
};

struct CheckArgs {
  std::string instance_path;
  std::string allocation_path;
  int depth = 2;
  std::vector<double> weights;
  bool exact_po = false;
  std::string out;
  std::string format = "text";
};

struct ExperimentArgs {
  std::string config_path;
  std::string profile;
  std::vector<int> m_grid;
  int trials = 100;
  std::uint64_t seed = 1;
  int workers = 0;
  std::vector<std::string> algorithms;
  double delta_floor = 1e-6;
  std::optional<double> q;
  std::optional<double> p;
  double mnw_tol = 1e-5;
  int depth = 2;
  std::string out;
  std::string format = "csv";
};

struct ReproduceArgs {
  std::string target;
  std::optional<int> trials;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out_dir = ".";
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

std::string format_multipliers(const fairdiv::MultiplierVector& beta) {
  std::ostringstream out;
  out.precision(12);
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (i) out << " ";
    out << beta[i];
  }
  return out.str();
}

int run_solve(const SolveArgs& args) {
  fairdiv::AgentProfile profile = fairdiv::load_profile(args.profile);
  const int n = profile.size();

  double q = 0.0;
  if (args.q) {
    q = *args.q;
  } else if (auto bounds = profile.density_bounds()) {
    q = bounds->upper;
  } else {
    throw std::invalid_argument(
        "profile has no declared density bounds; pass --q");
  }

  fairdiv::SolverConfig cfg;
  cfg.delta = args.delta;
  cfg.q_bound = q;
  cfg.record_history = args.trace;

  fairdiv::ProbabilityOracle oracle(profile);
  fairdiv::MultiplierVector beta;
  fairdiv::SolverTrace trace;
  if (args.method == "anneal" || args.method == "fixed") {
    fairdiv::SolverResult res = args.method == "anneal"
                                    ? fairdiv::equalize_annealed(oracle, cfg)
                                    : fairdiv::equalize_fixed_eps(oracle, cfg);
    beta = fairdiv::normalize_min_one(std::move(res.multipliers));
    trace = std::move(res.trace);
  } else {  // grid
    beta = fairdiv::sperner_grid_search(oracle, args.delta, q);
    trace.oracle_queries = oracle.query_count();
  }

  const fairdiv::ProbabilityVector probs =
      fairdiv::resulting_probabilities(profile, beta);
  double max_dev = 0.0;
  std::vector<double> deviations(n);
  for (int i = 0; i < n; ++i) {
    deviations[i] = std::abs(probs[i] - 1.0 / n);
    max_dev = std::max(max_dev, deviations[i]);
  }

  std::ofstream file;
  std::ostream& out = open_output(args.out, file);
  if (args.format == "json") {
    json j;
    j["profile"] = profile.name;
    j["n"] = n;
    j["delta"] = args.delta;
    j["q"] = q;
    j["method"] = args.method;
    j["multipliers"] = beta;
    j["probabilities"] = probs;
    j["deviations"] = deviations;
    j["max_deviation"] = max_dev;
    j["iterations"] = trace.iterations;
    j["oracle_queries"] = trace.oracle_queries;
    if (args.trace && args.method != "grid") j["trace"] = trace.to_json();
    out << j.dump(2) << "\n";
  } else {
    out << "profile: " << profile.name << " (n=" << n << ")\n";
    out << "method: " << args.method << "  delta: " << args.delta
        << "  q: " << q << "\n";
    out << "multipliers: " << format_multipliers(beta) << "\n";
    out.precision(6);
    out << "probabilities:";
    for (double p : probs) out << " " << p;
    out << "\n";
    out << "max |p_i - 1/n|: " << max_dev
        << (max_dev <= args.delta ? "  (within delta)" : "  (OVER delta)")
        << "\n";
    if (args.method != "grid")
      out << "iterations: " << trace.iterations
          << "  stages: " << trace.stages.size()
          << "  oracle queries: " << trace.oracle_queries << "\n";
    else
      out << "oracle queries: " << trace.oracle_queries << "\n";
    if (args.trace && args.method != "grid")
      out << "trace: " << trace.to_json().dump() << "\n";
  }
  return 0;
}

int run_allocate(const AllocateArgs& args) {
  fairdiv::AgentProfile profile = fairdiv::load_profile(args.profile);
  fairdiv::Instance inst =
      fairdiv::sample_instance(profile, args.m, args.seed);

  const fairdiv::AlgorithmKind kind =
      fairdiv::algorithm_from_name(args.algorithm);
  fairdiv::Allocation alloc;
  fairdiv::MultiplierVector multipliers;
  switch (kind) {
    case fairdiv::AlgorithmKind::Multiplier: {
      fairdiv::PipelineConfig pcfg;
      pcfg.delta_floor = args.delta_floor;
      pcfg.p_bound = args.p;
      pcfg.q_bound = args.q;
      fairdiv::PipelineMultipliers pm =
          fairdiv::compute_pipeline_multipliers(profile, pcfg);
      for (const auto& w : pm.warnings) std::cerr << "warning: " << w << "\n";
      multipliers = pm.multipliers;
      alloc = fairdiv::multiplier_allocation(inst, multipliers);
      break;
    }
    case fairdiv::AlgorithmKind::WelfareMax:
      alloc = fairdiv::welfare_max_allocation(inst);
      break;
    case fairdiv::AlgorithmKind::RoundRobin:
      alloc = fairdiv::round_robin(inst);
      break;
    case fairdiv::AlgorithmKind::MaxPercentile:
      alloc = fairdiv::max_percentile_allocation(inst, profile);
      break;
    case fairdiv::AlgorithmKind::NormalizingMultiplier:
      alloc = fairdiv::normalizing_multiplier_allocation(inst);
      break;
    case fairdiv::AlgorithmKind::RoundedMnw:
      alloc = fairdiv::round_fractional(
          fairdiv::fractional_mnw(inst, args.mnw_tol).shares);
      break;
  }

  const bool ef = fairdiv::is_envy_free(inst, alloc);
  const bool ef1 = ef || fairdiv::is_ef1(inst, alloc);
  const std::vector<double> bundle_utils = alloc.bundle_utilities(inst);

  if (!args.save_instance.empty()) {
    std::ofstream inst_out(args.save_instance);
    if (!inst_out)
      throw std::runtime_error("cannot open " + args.save_instance);
    inst.to_csv(inst_out);
  }

  std::ofstream file;
  std::ostream& out = open_output(args.out, file);
  if (args.format == "json") {
    json j;
    j["profile"] = profile.name;
    j["n"] = inst.n;
    j["m"] = inst.m;
    j["seed"] = inst.seed;
    j["algorithm"] = args.algorithm;
    if (!multipliers.empty()) j["multipliers"] = multipliers;
    j["allocation"] = alloc.to_json();
    j["bundle_utilities"] = bundle_utils;
    j["ef"] = ef;
    j["ef1"] = ef1;
    out << j.dump(2) << "\n";
  } else {
    out << "algorithm: " << args.algorithm << "  n=" << inst.n
        << " m=" << inst.m << " seed=" << inst.seed << "\n";
    if (!multipliers.empty())
      out << "multipliers: " << format_multipliers(multipliers) << "\n";
    for (int i = 0; i < inst.n; ++i) {
      const auto bundle = alloc.bundles()[i];
      out << "agent " << i << " (u=" << bundle_utils[i] << "):";
      for (int a : bundle) out << " " << a;
      out << "\n";
    }
    out << "ef: " << (ef ? "yes" : "no") << "  ef1: " << (ef1 ? "yes" : "no")
        << "\n";
  }
  return 0;
}

int run_check(const CheckArgs& args) {
  std::ifstream inst_file(args.instance_path);
  if (!inst_file)
    throw std::runtime_error("cannot open instance: " + args.instance_path);
  fairdiv::Instance inst = fairdiv::Instance::from_csv(inst_file);

  std::ifstream alloc_file(args.allocation_path);
  if (!alloc_file)
    throw std::runtime_error("cannot open allocation: " +
                             args.allocation_path);
  json alloc_json;
  alloc_file >> alloc_json;
  // Accept both a bare allocation object and the wrapper emitted by
  // `allocate --format json`.
  if (alloc_json.contains("allocation")) alloc_json = alloc_json["allocation"];
  fairdiv::Allocation alloc = fairdiv::Allocation::from_json(alloc_json);
  if (alloc.n != inst.n ||
      static_cast<int>(alloc.owners.size()) != inst.m)
    throw std::invalid_argument("allocation shape does not match instance");

  const fairdiv::EnvyMatrix envy = fairdiv::envy_matrix(inst, alloc);
  const bool ef = fairdiv::is_envy_free(inst, alloc);
  const bool ef1 = ef || fairdiv::is_ef1(inst, alloc);
  const auto improvement =
      fairdiv::find_pareto_improvement(inst, alloc, args.depth);
  std::optional<bool> fpo;
  if (!args.weights.empty())
    fpo = fairdiv::fpo_certificate_check(inst, alloc, args.weights);
  std::optional<bool> exact_po;
  if (args.exact_po)
    exact_po = fairdiv::is_pareto_optimal_bruteforce(inst, alloc);

  std::ofstream file;
  std::ostream& out = open_output(args.out, file);
  if (args.format == "json") {
    json j;
    j["n"] = inst.n;
    j["m"] = inst.m;
    j["ef"] = ef;
    j["ef1"] = ef1;
    j["max_envy"] = envy.max_envy();
    j["improvement_found"] = improvement.has_value();
    if (improvement) {
      json moves = json::array();
      for (auto [item, owner] : improvement->moves)
        moves.push_back({{"item", item}, {"to", owner}});
      j["improvement"] = {{"moves", moves}, {"deltas", improvement->deltas}};
    }
    if (fpo) j["fpo_certified"] = *fpo;
    if (exact_po) j["pareto_optimal"] = *exact_po;
    out << j.dump(2) << "\n";
  } else {
    out << "instance: n=" << inst.n << " m=" << inst.m << "\n";
    out << "ef: " << (ef ? "yes" : "no") << "  ef1: " << (ef1 ? "yes" : "no")
        << "  max envy: " << envy.max_envy() << "\n";
    if (improvement) {
      out << "pareto improvement found (depth " << args.depth << "):";
      for (auto [item, owner] : improvement->moves)
        out << " item " << item << "->agent " << owner << ";";
      out << "\n";
    } else {
      out << "no pareto improvement found at depth " << args.depth << "\n";
    }
    if (fpo)
      out << "fpo certificate: " << (*fpo ? "pass" : "fail") << "\n";
    if (exact_po)
      out << "pareto optimal (exhaustive): " << (*exact_po ? "yes" : "no")
          << "\n";
  }
  return 0;
}

fairdiv::ExperimentConfig build_experiment_config(const ExperimentArgs& args,
                                                  const CLI::App* cmd) {
  fairdiv::ExperimentConfig cfg;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in)
      throw std::runtime_error("cannot open config: " + args.config_path);
    json j;
    in >> j;
    cfg = fairdiv::ExperimentConfig::from_json(j);
  } else {
    if (args.profile.empty())
      throw std::invalid_argument("pass --profile or --config");
    cfg.profile = fairdiv::load_profile(args.profile);
    if (args.m_grid.empty())
      throw std::invalid_argument("pass --m-grid or --config");
  }
  // Explicit flags override config-file values.
  auto passed = [&](const std::string& flag) {
    return cmd->count(flag) > 0;
  };
  if (passed("--profile") && !args.config_path.empty())
    cfg.profile = fairdiv::load_profile(args.profile);
  if (passed("--m-grid") || cfg.m_grid.empty()) cfg.m_grid = args.m_grid;
  if (passed("--trials") || cfg.trials <= 0) cfg.trials = args.trials;
  if (passed("--seed")) cfg.base_seed = args.seed;
  if (passed("--workers")) cfg.workers = args.workers;
  if (passed("--algorithms") || cfg.algorithms.empty()) {
    std::vector<std::string> names = args.algorithms;
    if (names.empty())
      names = {"multiplier", "welfare-max", "round-robin", "rounded-mnw"};
    cfg.algorithms.clear();
    for (const auto& name : names)
      cfg.algorithms.push_back(fairdiv::default_algorithm_spec(
          fairdiv::algorithm_from_name(name)));
  }
  if (passed("--delta-floor")) cfg.delta_floor = args.delta_floor;
  if (args.q) cfg.q_bound = args.q;
  if (args.p) cfg.p_bound = args.p;
  if (passed("--mnw-tol")) cfg.mnw_tolerance = args.mnw_tol;
  if (passed("--depth")) cfg.improvement_depth = args.depth;
  return cfg;
}

int run_experiment_cmd(const ExperimentArgs& args, const CLI::App* cmd) {
  fairdiv::ExperimentConfig cfg = build_experiment_config(args, cmd);
  fairdiv::ExperimentResult result = fairdiv::run_experiment(cfg);
  std::ofstream file;
  std::ostream& out = open_output(args.out, file);
  if (args.format == "json")
    out << result.to_json().dump(2) << "\n";
  else
    fairdiv::write_csv(result, out);
  return 0;
}

struct ReproduceTarget {
  fairdiv::ExperimentConfig config;
  // Reference expectations reported alongside the measured rates: each entry
  // is (algorithm, m, metric, description).
  struct Reference {
    std::string algorithm;
    int m;
    std::string metric;
    std::string note;
  };
  std::vector<Reference> references;
  std::string description;
};

ReproduceTarget make_target(const std::string& name) {
  using fairdiv::AlgorithmKind;
  ReproduceTarget t;
  fairdiv::ExperimentConfig& cfg = t.config;
  if (name == "fig3" || name == "fig3-offset") {
    cfg.profile = fairdiv::builtin_profile("peak10");
    cfg.m_grid = name == "fig3"
                     ? std::vector<int>{10, 20, 100, 200, 500, 1000, 2000,
                                        5000, 10000}
                     : std::vector<int>{13, 23, 53, 103, 203, 503, 1003};
    cfg.trials = 300;
    cfg.algorithms = {
        fairdiv::default_algorithm_spec(AlgorithmKind::Multiplier),
        fairdiv::default_algorithm_spec(AlgorithmKind::WelfareMax),
        fairdiv::default_algorithm_spec(AlgorithmKind::RoundRobin),
        fairdiv::default_algorithm_spec(AlgorithmKind::RoundedMnw),
    };
    cfg.algorithms.back().max_m = 2000;  // fractional solves dominate runtime
    t.description =
        "EF/PO rates for ten peak distributions across a logarithmic item "
        "grid" +
        std::string(name == "fig3-offset" ? " with m shifted to 3 mod 10"
                                          : "");
    t.references = {
        {"multiplier", 500, "ef", "reference rate 0.67"},
        {"multiplier", 2000, "ef", "reference rate 0.99"},
        {"round-robin", 100, "ef", "reference: reliably EF for m >= 100"},
        {"round-robin", 10000, "po_violation_found",
         "reference: essentially never PO at large m"},
    };
    if (name == "fig3-offset")
      t.references = {
          {"multiplier", 503, "ef", "reference rate near 0.67"},
          {"round-robin", 103, "ef", "reference: reliably EF for m >= 100"},
          {"round-robin", 1003, "po_violation_found",
           "reference: essentially never PO at large m"},
      };
  } else if (name == "beta5") {
    cfg.profile = fairdiv::builtin_profile("beta5");
    cfg.m_grid = {10, 20, 100, 200, 500, 1000, 2000};
    cfg.trials = 300;
    cfg.q_bound = 5.0;  // holds for most of the five densities
    cfg.delta_floor = 1e-5;
    cfg.algorithms = {
        fairdiv::default_algorithm_spec(AlgorithmKind::Multiplier),
        fairdiv::default_algorithm_spec(AlgorithmKind::WelfareMax),
        fairdiv::default_algorithm_spec(AlgorithmKind::RoundRobin),
        fairdiv::default_algorithm_spec(AlgorithmKind::RoundedMnw),
    };
    t.description =
        "Five heterogeneous beta distributions (not density-bounded); "
        "multipliers solved at accuracy 1e-5 with q=5";
    t.references = {
        {"multiplier", 2000, "ef", "reference: EF rate approaches 1"},
        {"round-robin", 200, "ef", "reference: EF as reliable as rounded MNW"},
    };
  } else if (name == "percentile-counterexample") {
    cfg.profile = fairdiv::builtin_profile("percentile-counterexample");
    cfg.m_grid = {5000};
    cfg.trials = 500;
    cfg.algorithms = {
        fairdiv::default_algorithm_spec(AlgorithmKind::MaxPercentile)};
    t.description =
        "Two-agent piecewise-uniform profile where the max-percentile rule "
        "assigns systematically dominated bundles";
    t.references = {
        {"max-percentile", 5000, "po_violation_found",
         "reference rate >= 0.5"},
    };
  } else if (name == "normalize-counterexample") {
    cfg.profile = fairdiv::builtin_profile("normalize-counterexample");
    cfg.m_grid = {3000};
    cfg.trials = 200;
    cfg.algorithms = {fairdiv::default_algorithm_spec(
        AlgorithmKind::NormalizingMultiplier)};
    t.description =
        "Fifteen agents, one wide and fourteen narrow uniforms; normalizing "
        "by total utility starves the wide agent";
    t.references = {
        {"normalizing", 3000, "ef", "reference rate <= 0.1"},
    };
  } else if (name == "rr-po-counterexample") {
    cfg.profile = fairdiv::builtin_profile("rr-po-counterexample");
    cfg.m_grid = {50};
    cfg.trials = 2000;
    cfg.algorithms = {
        fairdiv::default_algorithm_spec(AlgorithmKind::RoundRobin)};
    t.description =
        "Uniform[0.6,1] vs uniform[0,1]: round robin admits a 2-for-1 trade "
        "with constant probability";
    t.references = {
        {"round-robin", 50, "po_violation_found",
         "reference rate >= 1/81 (about 0.0123)"},
    };
  } else {
    throw std::invalid_argument(
        "unknown target: " + name +
        " (expected fig3, fig3-offset, beta5, percentile-counterexample, "
        "normalize-counterexample, rr-po-counterexample)");
  }
  return t;
}

int run_reproduce(const ReproduceArgs& args) {
  ReproduceTarget target = make_target(args.target);
  fairdiv::ExperimentConfig& cfg = target.config;
  if (args.trials) cfg.trials = *args.trials;
  cfg.base_seed = args.seed;
  cfg.workers = args.workers;

  fairdiv::ExperimentResult result = fairdiv::run_experiment(cfg);

  std::filesystem::create_directories(args.out_dir);
  const std::string csv_path = args.out_dir + "/" + args.target + ".csv";
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  fairdiv::write_csv(result, csv);
  csv.close();

  std::ostringstream rows;
  fairdiv::write_csv(result, rows);
  std::istringstream rows_in(rows.str());
  const std::vector<fairdiv::CsvRow> parsed = fairdiv::parse_csv(rows_in);

  const std::string summary_path =
      args.out_dir + "/" + args.target + "-summary.txt";
  std::ofstream summary(summary_path);
  if (!summary) throw std::runtime_error("cannot open " + summary_path);
  summary << "target: " << args.target << "\n";
  summary << target.description << "\n\n";
  summary << "profile: " << cfg.profile.name << " (n=" << cfg.profile.size()
          << ")  trials per cell: " << cfg.trials
          << "  base seed: " << cfg.base_seed << "\n";
  if (!result.multipliers.empty()) {
    summary << "multipliers: " << format_multipliers(result.multipliers)
            << "\n";
    summary << "solver: " << result.solver_info.dump() << "\n";
  }
  summary << "\nmeasured rates (95% Wilson intervals):\n";
  for (const auto& row : parsed) {
    std::ostringstream line;
    line.precision(4);
    line << "  " << row.algorithm << " m=" << row.m << " " << row.metric
         << ": " << row.rate << " [" << row.ci_lo << ", " << row.ci_hi << "]";
    for (const auto& ref : target.references)
      if (ref.algorithm == row.algorithm && ref.m == row.m &&
          ref.metric == row.metric)
        line << "   <- " << ref.note;
    summary << line.str() << "\n";
  }
  summary << "\nfull data: " << csv_path << "\n";
  summary.close();

  std::cout << "wrote " << csv_path << " and " << summary_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fairdiv: envy-free and Pareto-optimal allocation of indivisible "
      "items via equalizing multipliers",
      "fairdiv"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for all subcommands");

  SolveArgs solve_args;
  CLI::App* solve =
      app.add_subcommand("solve", "Compute equalizing multipliers");
  solve->add_option("--profile", solve_args.profile,
                    "Built-in profile name or JSON file")
      ->required();
  solve->add_option("--delta", solve_args.delta,
                    "Accuracy: every win probability lands in 1/n +- delta")
      ->check(CLI::Range(1e-12, 1.0))
      ->capture_default_str();
  solve->add_option("--q", solve_args.q,
                    "Density upper bound (default: taken from the profile)");
  solve->add_option("--method", solve_args.method,
                    "Solver: anneal, fixed, or grid (Sperner search, n <= 3)")
      ->check(CLI::IsMember({"anneal", "fixed", "grid"}))
      ->capture_default_str();
  solve->add_flag("--trace", solve_args.trace,
                  "Record and emit the per-iteration solver trace");
  solve->add_option("--out", solve_args.out, "Output file (default: stdout)");
  solve->add_option("--format", solve_args.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  AllocateArgs alloc_args;
  CLI::App* allocate = app.add_subcommand(
      "allocate", "Sample an instance and allocate its items");
  allocate->add_option("--profile", alloc_args.profile,
                       "Built-in profile name or JSON file")
      ->required();
  allocate->add_option("--m", alloc_args.m, "Number of items")
      ->required()
      ->check(CLI::PositiveNumber);
  allocate->add_option("--seed", alloc_args.seed, "Instance seed")
      ->capture_default_str();
  allocate
      ->add_option("--algorithm", alloc_args.algorithm,
                   "multiplier, welfare-max, round-robin, max-percentile, "
                   "normalizing, or rounded-mnw")
      ->check(CLI::IsMember({"multiplier", "welfare-max", "round-robin",
                             "max-percentile", "normalizing", "rounded-mnw"}))
      ->capture_default_str();
  allocate
      ->add_option("--delta-floor", alloc_args.delta_floor,
                   "Smallest multiplier accuracy the pipeline may choose")
      ->capture_default_str();
  allocate->add_option("--q", alloc_args.q, "Density upper bound override");
  allocate->add_option("--p", alloc_args.p, "Density lower bound override");
  allocate
      ->add_option("--mnw-tol", alloc_args.mnw_tol,
                   "KKT tolerance for the fractional Nash welfare solve")
      ->capture_default_str();
  allocate->add_option("--save-instance", alloc_args.save_instance,
                       "Also write the sampled utility matrix as CSV");
  allocate->add_option("--out", alloc_args.out,
                       "Output file (default: stdout)");
  allocate->add_option("--format", alloc_args.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "Check fairness and efficiency of a stored allocation");
  check
      ->add_option("--instance", check_args.instance_path,
                   "Instance CSV (as written by allocate --save-instance)")
      ->required();
  check
      ->add_option("--allocation", check_args.allocation_path,
                   "Allocation JSON ({\"agents\": n, \"owners\": [...]})")
      ->required();
  check
      ->add_option("--depth", check_args.depth,
                   "Pareto-improvement search depth (1 = transfers and "
                   "swaps, 2 = adds two-for-one and two-for-two trades)")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  check->add_option("--weights", check_args.weights,
                    "Agent weights for the fPO certificate check")
      ->delimiter(',');
  check->add_flag("--exact-po", check_args.exact_po,
                  "Also decide Pareto optimality exhaustively (tiny "
                  "instances only)");
  check->add_option("--out", check_args.out, "Output file (default: stdout)");
  check->add_option("--format", check_args.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  ExperimentArgs exp_args;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "Run a Monte-Carlo sweep over item counts");
  experiment->add_option("--config", exp_args.config_path,
                         "Experiment config JSON (flags override its fields)");
  experiment->add_option("--profile", exp_args.profile,
                         "Built-in profile name or JSON file");
  experiment
      ->add_option("--m-grid", exp_args.m_grid,
                   "Comma-separated item counts, e.g. 10,100,1000")
      ->delimiter(',');
  experiment->add_option("--trials", exp_args.trials, "Trials per grid point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment->add_option("--seed", exp_args.seed, "Base seed")
      ->capture_default_str();
  experiment
      ->add_option("--workers", exp_args.workers,
                   "Worker threads (0 = one per logical core)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  experiment
      ->add_option("--algorithms", exp_args.algorithms,
                   "Comma-separated algorithm names (default: multiplier,"
                   "welfare-max,round-robin,rounded-mnw)")
      ->delimiter(',');
  experiment
      ->add_option("--delta-floor", exp_args.delta_floor,
                   "Smallest multiplier accuracy the pipeline may choose")
      ->capture_default_str();
  experiment->add_option("--q", exp_args.q, "Density upper bound override");
  experiment->add_option("--p", exp_args.p, "Density lower bound override");
  experiment
      ->add_option("--mnw-tol", exp_args.mnw_tol,
                   "KKT tolerance for the fractional Nash welfare solve")
      ->capture_default_str();
  experiment
      ->add_option("--depth", exp_args.depth,
                   "Pareto-improvement search depth")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  experiment->add_option("--out", exp_args.out,
                         "Output file (default: stdout)");
  experiment->add_option("--format", exp_args.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ReproduceArgs repro_args;
  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Re-run a packaged experiment and compare to reference "
                   "rates");
  reproduce
      ->add_option("target", repro_args.target,
                   "fig3, fig3-offset, beta5, percentile-counterexample, "
                   "normalize-counterexample, or rr-po-counterexample")
      ->required();
  reproduce->add_option("--trials", repro_args.trials,
                        "Override the target's trial count");
  reproduce->add_option("--seed", repro_args.seed, "Base seed")
      ->capture_default_str();
  reproduce
      ->add_option("--workers", repro_args.workers,
                   "Worker threads (0 = one per logical core)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  reproduce
      ->add_option("--out", repro_args.out_dir,
                   "Directory for <target>.csv and <target>-summary.txt")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11's own exit codes are nonstandard; map every usage problem to 1.
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (allocate->parsed()) return run_allocate(alloc_args);
    if (check->parsed()) return run_check(check_args);
    if (experiment->parsed()) return run_experiment_cmd(exp_args, experiment);
    if (reproduce->parsed()) return run_reproduce(repro_args);
  } catch (const fairdiv::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
