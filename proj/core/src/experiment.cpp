#include "fairdiv/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fairdiv/fairness.hpp"
#include "fairdiv/random.hpp"

namespace fairdiv {

std::string algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::Multiplier: return "multiplier";
    case AlgorithmKind::WelfareMax: return "welfare-max";
    case AlgorithmKind::RoundRobin: return "round-robin";
    case AlgorithmKind::MaxPercentile: return "max-percentile";
    case AlgorithmKind::NormalizingMultiplier: return "normalizing";
    case AlgorithmKind::RoundedMnw: return "rounded-mnw";
  }
  throw std::invalid_argument("bad algorithm kind");
}

AlgorithmKind algorithm_from_name(const std::string& name) {
  if (name == "multiplier") return AlgorithmKind::Multiplier;
  if (name == "welfare-max") return AlgorithmKind::WelfareMax;
  if (name == "round-robin") return AlgorithmKind::RoundRobin;
  if (name == "max-percentile") return AlgorithmKind::MaxPercentile;
  if (name == "normalizing") return AlgorithmKind::NormalizingMultiplier;
  if (name == "rounded-mnw") return AlgorithmKind::RoundedMnw;
  throw std::invalid_argument("unknown algorithm: " + name);
}

AlgorithmSpec default_algorithm_spec(AlgorithmKind kind) {
  AlgorithmSpec spec;
  spec.kind = kind;
  switch (kind) {
    case AlgorithmKind::Multiplier:
    case AlgorithmKind::WelfareMax:
    case AlgorithmKind::NormalizingMultiplier:
    case AlgorithmKind::RoundedMnw:
      spec.check_fpo = true;  // these produce certifying weights
      break;
    case AlgorithmKind::RoundRobin:
    case AlgorithmKind::MaxPercentile:
      spec.search_po_violation = true;  // no certificate; search instead
      break;
  }
  return spec;
}

Instance sample_instance(const AgentProfile& profile, int m,
                         std::uint64_t seed) {
  if (profile.size() == 0) throw std::invalid_argument("empty profile");
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  Instance inst;
  inst.n = profile.size();
  inst.m = m;
  inst.profile_name = profile.name;
  inst.seed = seed;
  inst.utilities.resize(static_cast<std::size_t>(inst.n) * m);
  RandomSource rng(seed);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < inst.n; ++i)
      inst.util(i, a) = profile.agents[i].sample(rng);
  return inst;
}

std::pair<double, double> wilson_interval(long long successes,
                                          long long trials) {
  if (trials <= 0) return {0.0, 1.0};
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: successes out of range");
  constexpr double z = 1.959963984540054;  // 97.5th standard normal quantile
  const double t = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (phat + z2 / (2.0 * t)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
  // At the boundaries the exact interval endpoint is the boundary itself;
  // keep it free of rounding residue.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

namespace {

struct TrialOutcome {
  bool ran = false;
  bool ef = false;
  bool ef1 = false;
  bool po_violation = false;
  bool fpo = false;
  double seconds = 0.0;
};

struct PreparedAlgorithm {
  AlgorithmSpec spec;
  std::string name;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.profile.size() == 0) throw std::invalid_argument("empty profile");
  if (cfg.trials <= 0) throw std::invalid_argument("trials must be > 0");
  if (cfg.m_grid.empty()) throw std::invalid_argument("empty m grid");
  if (cfg.algorithms.empty()) throw std::invalid_argument("no algorithms");
  if (cfg.workers < 0) throw std::invalid_argument("workers must be >= 0");
  for (int m : cfg.m_grid)
    if (m < 0) throw std::invalid_argument("grid sizes must be >= 0");

  std::vector<int> grid = cfg.m_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<PreparedAlgorithm> algs;
  for (const auto& spec : cfg.algorithms)
    algs.push_back({spec, algorithm_name(spec.kind)});

  ExperimentResult result;
  result.profile_name = cfg.profile.name;
  result.base_seed = cfg.base_seed;

  // The equalizing multipliers depend only on the profile; solve once.
  MultiplierVector mult;
  const bool needs_multiplier =
      std::any_of(algs.begin(), algs.end(), [](const PreparedAlgorithm& a) {
        return a.spec.kind == AlgorithmKind::Multiplier;
      });
  if (needs_multiplier) {
    PipelineConfig pcfg;
    pcfg.delta_floor = cfg.delta_floor;
    pcfg.p_bound = cfg.p_bound;
    pcfg.q_bound = cfg.q_bound;
    PipelineMultipliers pm = compute_pipeline_multipliers(cfg.profile, pcfg);
    mult = pm.multipliers;
    result.multipliers = pm.multipliers;
    result.solver_info = {
        {"delta", pm.delta},
        {"iterations", pm.trace.iterations},
        {"oracle_queries", pm.trace.oracle_queries},
        {"stages", pm.trace.stages.size()},
    };
    if (pm.theoretical_delta)
      result.solver_info["theoretical_delta"] = *pm.theoretical_delta;
    for (const auto& w : pm.warnings)
      result.solver_info["warnings"].push_back(w);
  }

  const int n_grid = static_cast<int>(grid.size());
  const int n_alg = static_cast<int>(algs.size());
  const std::size_t n_tasks =
      static_cast<std::size_t>(n_grid) * cfg.trials;
  std::vector<TrialOutcome> slots(n_tasks * n_alg);

  auto run_task = [&](std::size_t task) {
    const int gi = static_cast<int>(task / cfg.trials);
    const int trial = static_cast<int>(task % cfg.trials);
    const int m = grid[gi];
    const Instance inst = sample_instance(
        cfg.profile, m,
        derive_seed(cfg.base_seed, static_cast<std::uint64_t>(gi),
                    static_cast<std::uint64_t>(trial)));
    for (int ai = 0; ai < n_alg; ++ai) {
      const auto& alg = algs[ai];
      if (alg.spec.max_m && m > *alg.spec.max_m) continue;
      TrialOutcome& out = slots[task * n_alg + ai];
      const auto t0 = std::chrono::steady_clock::now();

      Allocation alloc;
      MultiplierVector fpo_weights;
      switch (alg.spec.kind) {
        case AlgorithmKind::Multiplier:
          alloc = multiplier_allocation(inst, mult);
          fpo_weights = mult;
          break;
        case AlgorithmKind::WelfareMax:
          alloc = welfare_max_allocation(inst);
          fpo_weights.assign(inst.n, 1.0);
          break;
        case AlgorithmKind::RoundRobin:
          alloc = round_robin(inst);
          break;
        case AlgorithmKind::MaxPercentile:
          alloc = max_percentile_allocation(inst, cfg.profile);
          break;
        case AlgorithmKind::NormalizingMultiplier: {
          alloc = normalizing_multiplier_allocation(inst);
          fpo_weights.resize(inst.n);
          for (int i = 0; i < inst.n; ++i) {
            double total = 0.0;
            for (int a = 0; a < inst.m; ++a) total += inst.util(i, a);
            fpo_weights[i] = 1.0 / total;
          }
          break;
        }
        case AlgorithmKind::RoundedMnw: {
          const MnwResult mnw = fractional_mnw(inst, cfg.mnw_tolerance);
          alloc = round_fractional(mnw.shares);
          fpo_weights.resize(inst.n);
          for (int i = 0; i < inst.n; ++i)
            fpo_weights[i] = 1.0 / mnw.agent_utilities[i];
          break;
        }
      }

      out.ran = true;
      out.ef = is_envy_free(inst, alloc);
      out.ef1 = out.ef || is_ef1(inst, alloc);
      if (alg.spec.search_po_violation)
        out.po_violation =
            find_pareto_improvement(inst, alloc, cfg.improvement_depth)
                .has_value();
      if (alg.spec.check_fpo) {
        // Rounded MNW owners satisfy the KKT exit condition, which is this
        // same inequality with gap 10 * tolerance; exact argmax algorithms
        // pass at machine precision.
        const double tol = alg.spec.kind == AlgorithmKind::RoundedMnw
                               ? 10.0 * cfg.mnw_tolerance + 1e-12
                               : 1e-9;
        out.fpo = fpo_certificate_check(inst, alloc, fpo_weights, tol);
      }
      out.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      cfg.workers > 0 ? static_cast<unsigned>(cfg.workers) : hw;
  if (workers <= 1 || n_tasks <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < n_tasks; t += workers) run_task(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (int ai = 0; ai < n_alg; ++ai) {
    for (int gi = 0; gi < n_grid; ++gi) {
      CellResult cell;
      cell.algorithm = algs[ai].name;
      cell.m = grid[gi];
      cell.po_searched = algs[ai].spec.search_po_violation;
      cell.fpo_checked = algs[ai].spec.check_fpo;
      for (int trial = 0; trial < cfg.trials; ++trial) {
        const TrialOutcome& out =
            slots[(static_cast<std::size_t>(gi) * cfg.trials + trial) * n_alg +
                  ai];
        if (!out.ran) continue;
        ++cell.trials;
        cell.ef_count += out.ef;
        cell.ef1_count += out.ef1;
        cell.po_violation_count += out.po_violation;
        cell.fpo_certified_count += out.fpo;
        cell.seconds += out.seconds;
      }
      if (cell.trials > 0) result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

namespace {

const char* kCsvHeader = "algorithm,m,metric,rate,ci_lo,ci_hi,trials,seconds";

void csv_row(std::ostream& out, const CellResult& cell, const char* metric,
             long long count) {
  const auto [lo, hi] = wilson_interval(count, cell.trials);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%d,%s,%.10g,%.10g,%.10g,%d,%.6f",
                cell.algorithm.c_str(), cell.m, metric,
                static_cast<double>(count) / cell.trials, lo, hi, cell.trials,
                cell.seconds);
  out << buf << "\n";
}

}  // namespace

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const auto& cell : result.cells) {
    csv_row(out, cell, "ef", cell.ef_count);
    csv_row(out, cell, "ef1", cell.ef1_count);
    if (cell.po_searched)
      csv_row(out, cell, "po_violation_found", cell.po_violation_count);
    if (cell.fpo_checked)
      csv_row(out, cell, "fpo_certified", cell.fpo_certified_count);
  }
}

std::vector<CsvRow> parse_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("csv: empty input");
  if (line != kCsvHeader)
    throw std::invalid_argument("csv: unexpected header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8)
      throw std::invalid_argument("csv: malformed row: " + line);
    CsvRow row;
    row.algorithm = cells[0];
    row.m = std::stoi(cells[1]);
    row.metric = cells[2];
    row.rate = std::stod(cells[3]);
    row.ci_lo = std::stod(cells[4]);
    row.ci_hi = std::stod(cells[5]);
    row.trials = std::stoll(cells[6]);
    row.seconds = std::stod(cells[7]);
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["profile_name"] = profile.name;
  j["profile"] = profile.to_json();
  j["m_grid"] = m_grid;
  j["trials"] = trials;
  j["base_seed"] = base_seed;
  j["workers"] = workers;
  nlohmann::json algs = nlohmann::json::array();
  for (const auto& a : algorithms) {
    nlohmann::json e;
    e["name"] = algorithm_name(a.kind);
    e["search_po_violation"] = a.search_po_violation;
    e["check_fpo"] = a.check_fpo;
    if (a.max_m) e["max_m"] = *a.max_m;
    algs.push_back(e);
  }
  j["algorithms"] = algs;
  j["delta_floor"] = delta_floor;
  if (p_bound) j["p_bound"] = *p_bound;
  if (q_bound) j["q_bound"] = *q_bound;
  j["mnw_tolerance"] = mnw_tolerance;
  j["improvement_depth"] = improvement_depth;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  // "profile" is either a builtin/file id or an inline distribution list.
  if (j.at("profile").is_string())
    cfg.profile = load_profile(j.at("profile").get<std::string>());
  else
    cfg.profile = AgentProfile::from_json(
        j.at("profile"), j.value("profile_name", std::string()));
  cfg.m_grid = j.at("m_grid").get<std::vector<int>>();
  cfg.trials = j.value("trials", cfg.trials);
  cfg.base_seed = j.value("base_seed", cfg.base_seed);
  cfg.workers = j.value("workers", cfg.workers);
  for (const auto& e : j.at("algorithms")) {
    if (e.is_string()) {
      cfg.algorithms.push_back(
          default_algorithm_spec(algorithm_from_name(e.get<std::string>())));
    } else {
      AlgorithmSpec spec = default_algorithm_spec(
          algorithm_from_name(e.at("name").get<std::string>()));
      spec.search_po_violation =
          e.value("search_po_violation", spec.search_po_violation);
      spec.check_fpo = e.value("check_fpo", spec.check_fpo);
      if (e.contains("max_m")) spec.max_m = e.at("max_m").get<int>();
      cfg.algorithms.push_back(spec);
    }
  }
  cfg.delta_floor = j.value("delta_floor", cfg.delta_floor);
  if (j.contains("p_bound")) cfg.p_bound = j.at("p_bound").get<double>();
  if (j.contains("q_bound")) cfg.q_bound = j.at("q_bound").get<double>();
  cfg.mnw_tolerance = j.value("mnw_tolerance", cfg.mnw_tolerance);
  cfg.improvement_depth = j.value("improvement_depth", cfg.improvement_depth);
  return cfg;
}

nlohmann::json ExperimentResult::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["profile"] = profile_name;
  j["base_seed"] = base_seed;
  if (!multipliers.empty()) j["multipliers"] = multipliers;
  if (!solver_info.is_null()) j["solver"] = solver_info;
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& cell : cells) {
    nlohmann::json c;
    c["algorithm"] = cell.algorithm;
    c["m"] = cell.m;
    c["trials"] = cell.trials;
    c["seconds"] = cell.seconds;
    auto metric = [&](const char* name, long long count) {
      const auto [lo, hi] = wilson_interval(count, cell.trials);
      c[name] = {{"count", count},
                 {"rate", static_cast<double>(count) / cell.trials},
                 {"ci_lo", lo},
                 {"ci_hi", hi}};
    };
    metric("ef", cell.ef_count);
    metric("ef1", cell.ef1_count);
    if (cell.po_searched)
      metric("po_violation_found", cell.po_violation_count);
    if (cell.fpo_checked) metric("fpo_certified", cell.fpo_certified_count);
    cells_json.push_back(c);
  }
  j["cells"] = cells_json;
  return j;
}

}  // namespace fairdiv
