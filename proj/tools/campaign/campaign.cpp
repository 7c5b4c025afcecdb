#include "campaign/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "shoals/fixtures.hpp"
#include "shoals/quantiles.hpp"

namespace shoals::campaign {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!keys.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("invalid value for '" + std::string(key) + "' in " + where);
  }
}

template <typename T>
std::optional<T> get_opt(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return get_or<T>(obj, key, T{}, where);
}

std::uint64_t get_count(const json& obj, const char* key, std::uint64_t fallback,
                        const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError("'" + std::string(key) + "' in " + where + " must be a nonnegative integer");
}

bool valid_solver_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

SolverSpec parse_solver(const json& obj) {
  if (!obj.is_object()) throw ConfigError("solver entries must be objects");
  const auto name = get_or<std::string>(obj, "name", "", "solver");
  const std::string where = "solver '" + name + "'";
  if (!valid_solver_name(name)) {
    throw ConfigError("solver names must be non-empty and use [A-Za-z0-9._-]: '" + name + "'");
  }
  const auto type = get_or<std::string>(obj, "type", "", where);
  if (type == "shoals") {
    reject_unknown_keys(obj, {"name", "type", "gamma", "c", "alpha_max", "alpha0", "p", "eps_f",
                              "eps_g", "warmup_samples"},
                        where);
    ShoalsConfig cfg;
    cfg.gamma = get_or(obj, "gamma", cfg.gamma, where);
    cfg.c = get_or(obj, "c", cfg.c, where);
    cfg.alpha_max = get_or(obj, "alpha_max", cfg.alpha_max, where);
    cfg.alpha0 = get_or(obj, "alpha0", cfg.alpha0, where);
    cfg.p = get_or(obj, "p", cfg.p, where);
    cfg.eps_f = get_or(obj, "eps_f", cfg.eps_f, where);
    cfg.eps_g = get_or(obj, "eps_g", std::sqrt(cfg.eps_f), where);
    cfg.warmup_samples = get_count(obj, "warmup_samples", cfg.warmup_samples, where);
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (!(cfg.eps_f > 0.0)) throw ConfigError(where + ": eps_f must be positive");
    return {name, cfg};
  }
  if (type == "adam") {
    reject_unknown_keys(obj, {"name", "type", "alpha", "batch", "beta1", "beta2", "offset"}, where);
    AdamConfig cfg;
    cfg.alpha = get_opt<double>(obj, "alpha", where);
    cfg.batch = get_count(obj, "batch", cfg.batch, where);
    cfg.beta1 = get_or(obj, "beta1", cfg.beta1, where);
    cfg.beta2 = get_or(obj, "beta2", cfg.beta2, where);
    cfg.offset = get_or(obj, "offset", cfg.offset, where);
    if (cfg.batch < 2) throw ConfigError(where + ": batch must be >= 2");
    return {name, cfg};
  }
  if (type == "sgd") {
    reject_unknown_keys(obj, {"name", "type", "alpha", "batch"}, where);
    SgdConfig cfg;
    cfg.alpha = get_opt<double>(obj, "alpha", where);
    cfg.batch = get_count(obj, "batch", cfg.batch, where);
    if (cfg.batch < 2) throw ConfigError(where + ": batch must be >= 2");
    return {name, cfg};
  }
  if (type == "icans") {
    reject_unknown_keys(obj, {"name", "type", "alpha", "s_min", "mu", "bias"}, where);
    IcansConfig cfg;
    cfg.alpha = get_opt<double>(obj, "alpha", where);
    cfg.s_min = get_count(obj, "s_min", cfg.s_min, where);
    cfg.mu = get_or(obj, "mu", cfg.mu, where);
    cfg.bias = get_or(obj, "bias", cfg.bias, where);
    if (cfg.s_min < 2) throw ConfigError(where + ": s_min must be >= 2");
    return {name, cfg};
  }
  throw ConfigError(where + ": unknown solver type '" + type +
                    "' (expected shoals, adam, sgd or icans)");
}

ProblemSource parse_problem(const json& value, const std::filesystem::path& base_dir) {
  ProblemSource src;
  if (value.is_string()) {
    src.bundled = value.get<std::string>();
    src.name = *src.bundled;
    return src;
  }
  if (!value.is_object()) throw ConfigError("'problem' must be a name or an object");
  reject_unknown_keys(value, {"name", "bundled", "hamiltonian", "ansatz", "circuits_per_f",
                              "circuits_per_g", "f_star"},
                      "problem");
  src.bundled = get_opt<std::string>(value, "bundled", "problem");
  src.name = get_or<std::string>(value, "name", src.bundled.value_or("custom"), "problem");
  if (!src.bundled) {
    if (!value.contains("hamiltonian") || !value.contains("ansatz")) {
      throw ConfigError("problem needs 'bundled' or both 'hamiltonian' and 'ansatz' files");
    }
    src.hamiltonian_file = base_dir / get_or<std::string>(value, "hamiltonian", "", "problem");
    src.ansatz_file = base_dir / get_or<std::string>(value, "ansatz", "", "problem");
  }
  if (value.contains("circuits_per_f")) src.circuits_per_f = get_count(value, "circuits_per_f", 0, "problem");
  if (value.contains("circuits_per_g")) src.circuits_per_g = get_count(value, "circuits_per_g", 0, "problem");
  src.f_star = get_opt<double>(value, "f_star", "problem");
  return src;
}

DeviceModel parse_device(const json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "superconducting") return DeviceModel::superconducting();
    throw ConfigError("unknown device preset '" + value.get<std::string>() + "'");
  }
  if (!value.is_object()) throw ConfigError("'device' must be a preset name or an object");
  reject_unknown_keys(value, {"c1", "c2", "c3"}, "device");
  DeviceModel d{get_or(value, "c1", 0.0, "device"), get_or(value, "c2", 0.0, "device"),
                get_or(value, "c3", 0.0, "device")};
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return d;
}

}  // namespace

CampaignConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(doc, {"problem", "solvers", "seeds", "seed_count", "master_seed", "budget",
                            "device", "output_dir", "accuracy", "stop_at_accuracy", "sample_cap",
                            "jobs", "sweep"},
                      "config");
  CampaignConfig cfg;
  if (!doc.contains("problem")) throw ConfigError("config needs a 'problem'");
  cfg.problem = parse_problem(doc.at("problem"), base_dir);

  if (!doc.contains("solvers") || !doc.at("solvers").is_array() || doc.at("solvers").empty()) {
    throw ConfigError("config needs a non-empty 'solvers' list");
  }
  std::set<std::string> names;
  for (const auto& s : doc.at("solvers")) {
    cfg.solvers.push_back(parse_solver(s));
    if (!names.insert(cfg.solvers.back().name).second) {
      throw ConfigError("duplicate solver name '" + cfg.solvers.back().name + "'");
    }
  }

  cfg.master_seed = static_cast<std::uint32_t>(get_count(doc, "master_seed", 0, "config"));
  if (doc.contains("seeds") && doc.contains("seed_count")) {
    throw ConfigError("give either 'seeds' or 'seed_count', not both");
  }
  if (doc.contains("seeds")) {
    if (!doc.at("seeds").is_array()) throw ConfigError("'seeds' must be a list");
    for (const auto& s : doc.at("seeds")) {
      if (!s.is_number_integer() || s.get<std::int64_t>() < 0 ||
          s.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
        throw ConfigError("seeds must be integers in [0, 2^32)");
      }
      cfg.seeds.push_back(s.get<std::uint32_t>());
    }
  } else {
    const auto count = get_count(doc, "seed_count", 0, "config");
    for (std::uint64_t s = 0; s < count; ++s) cfg.seeds.push_back(static_cast<std::uint32_t>(s));
  }
  if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");

  if (doc.contains("budget")) {
    const auto& b = doc.at("budget");
    if (!b.is_object()) throw ConfigError("'budget' must be an object");
    reject_unknown_keys(b, {"max_seconds", "max_iterations"}, "budget");
    cfg.budget.max_seconds = get_or(b, "max_seconds", kInf, "budget");
    cfg.budget.max_iterations = get_count(b, "max_iterations", cfg.budget.max_iterations, "budget");
  }
  if (!(cfg.budget.max_seconds > 0.0) || cfg.budget.max_iterations == 0) {
    throw ConfigError("budget must be positive");
  }
  if (doc.contains("device")) cfg.device = parse_device(doc.at("device"));
  if (doc.contains("output_dir")) {
    cfg.output_dir = base_dir / get_or<std::string>(doc, "output_dir", "", "config");
  }
  cfg.threshold = get_or(doc, "accuracy", cfg.threshold, "config");
  if (!(cfg.threshold > 0.0)) throw ConfigError("accuracy threshold must be positive");
  cfg.stop_at_threshold = get_or(doc, "stop_at_accuracy", cfg.stop_at_threshold, "config");
  cfg.sample_cap = get_count(doc, "sample_cap", cfg.sample_cap, "config");
  if (cfg.sample_cap < 2) throw ConfigError("sample_cap must be >= 2");
  cfg.jobs = static_cast<unsigned>(get_count(doc, "jobs", 1, "config"));
  if (cfg.jobs == 0) throw ConfigError("jobs must be >= 1");
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    reject_unknown_keys(s, {"numerator", "denominator"}, "sweep");
    cfg.sweep_numerator = get_opt<std::string>(s, "numerator", "sweep");
    cfg.sweep_denominator = get_opt<std::string>(s, "denominator", "sweep");
    for (const auto& n : {cfg.sweep_numerator, cfg.sweep_denominator}) {
      if (n && !names.contains(*n)) throw ConfigError("sweep refers to unknown solver '" + *n + "'");
    }
  }
  return cfg;
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

Problem resolve_problem(const ProblemSource& source) {
  try {
    if (source.bundled) {
      Problem base = load_bundled_problem(*source.bundled);
      if (!source.circuits_per_f && !source.circuits_per_g) return base;
      return Problem(source.name, base.hamiltonian(), base.ansatz(),
                     source.circuits_per_f.value_or(base.circuits_per_f()),
                     source.circuits_per_g.value_or(base.circuits_per_g()));
    }
    return Problem(source.name, load_hamiltonian(source.hamiltonian_file.string()),
                   load_ansatz(source.ansatz_file.string()), source.circuits_per_f,
                   source.circuits_per_g);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("problem files: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

std::vector<double> initial_point(const CampaignConfig& config, std::uint32_t seed,
                                  std::size_t n) {
  Rng rng{config.master_seed, seed, 0u};
  return random_initial_point(n, rng);
}

std::vector<RunResult> run_campaign(const Problem& problem, const CampaignConfig& config,
                                    std::span<const SolverSpec> solvers) {
  const double f_star =
      config.problem.f_star.value_or(exact_ground_energy(problem.hamiltonian()));
  RunOptions options;
  options.device = config.device;
  options.budget = config.budget;
  options.f_star = f_star;
  options.threshold = config.threshold;
  options.stop_at_threshold = config.stop_at_threshold;
  options.sample_cap = config.sample_cap;

  std::vector<RunResult> results;
  for (const auto& solver : solvers) {
    for (std::uint32_t seed : config.seeds) {
      results.push_back({solver.name, seed, initial_point(config, seed, problem.parameter_count()), {}});
    }
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(results.size());
  auto worker = [&] {
    for (std::size_t k = next++; k < results.size(); k = next++) {
      auto& r = results[k];
      const auto& solver = solvers[k / config.seeds.size()];
      try {
        Rng rng{config.master_seed, r.seed, 1u};
        r.trajectory = run_solver(problem, solver, rng, r.theta0, options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(results.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  out << "iter,exact_f,gap_to_fstar,f0_est,fs_est,grad_norm_est,alpha,accepted,n_f,n_g_total,"
         "shots_cum,switches_cum,comms_cum,wall_clock_s\n";
  const double f_star = t.f_star.value_or(std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : t.records) {
    out << r.iteration << ',' << format_double(r.exact_f) << ','
        << format_double(std::abs(r.exact_f - f_star)) << ',' << format_double(r.f0_est) << ','
        << format_double(r.fs_est) << ',' << format_double(r.grad_norm_est) << ','
        << format_double(r.alpha) << ',' << (r.accepted ? 1 : 0) << ',' << r.n_f << ','
        << r.n_g_total() << ',' << r.ledger.shots << ',' << r.ledger.switches << ','
        << r.ledger.communications << ',' << format_double(r.wall_clock_s) << '\n';
  }
  return out.str();
}

std::string trajectory_file_name(const std::string& solver, std::uint32_t seed) {
  return solver + "__seed" + std::to_string(seed) + ".csv";
}

ReachMetrics reach_metrics(const Trajectory& t) {
  if (!t.reached) return {kInf, kInf, kInf, kInf, kInf};
  const auto& r = t.records[*t.reached];
  return {static_cast<double>(r.ledger.shots), static_cast<double>(r.ledger.switches),
          static_cast<double>(r.ledger.communications), r.wall_clock_s,
          static_cast<double>(r.iteration)};
}

namespace {

json number_or_marker(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json quantile_block(const std::vector<double>& values) {
  const auto q = summarize_quantiles(values);
  return {{"q25", number_or_marker(q.q25)},
          {"q50", number_or_marker(q.q50)},
          {"q75", number_or_marker(q.q75)},
          {"mean", number_or_marker(q.mean)}};
}

}  // namespace

json summarize(const Problem& problem, double f_star, const CampaignConfig& config,
               std::span<const RunResult> results) {
  json doc;
  doc["schema"] = "shoals-summary/1";
  doc["problem"] = {{"name", problem.name()},
                    {"qubits", problem.hamiltonian().qubit_count()},
                    {"n", problem.parameter_count()},
                    {"t_f", problem.circuits_per_f()},
                    {"t_g", problem.circuits_per_g()},
                    {"f_star", f_star}};
  doc["device"] = {{"c1", config.device.shot_seconds},
                   {"c2", config.device.switch_seconds},
                   {"c3", config.device.communication_seconds}};
  doc["budget"] = {{"max_seconds", number_or_marker(config.budget.max_seconds)},
                   {"max_iterations", config.budget.max_iterations}};
  doc["accuracy"] = config.threshold;
  doc["master_seed"] = config.master_seed;
  doc["seeds"] = config.seeds;
  doc["quantile_method"] = "linear interpolation between order statistics";

  json solvers = json::object();
  std::map<std::string, std::vector<const RunResult*>> by_solver;
  std::vector<std::string> order;
  for (const auto& r : results) {
    if (!by_solver.contains(r.solver)) order.push_back(r.solver);
    by_solver[r.solver].push_back(&r);
  }
  for (const auto& name : order) {
    const auto& runs = by_solver[name];
    std::vector<double> shots, switches, comms, wall, iters;
    json detail = json::array();
    std::size_t reached = 0;
    for (const RunResult* r : runs) {
      const auto m = reach_metrics(r->trajectory);
      shots.push_back(m.shots);
      switches.push_back(m.switches);
      comms.push_back(m.communications);
      wall.push_back(m.wall_clock_s);
      iters.push_back(m.iterations);
      reached += r->trajectory.reached ? 1 : 0;
      detail.push_back({{"seed", r->seed},
                        {"status", to_string(r->trajectory.status)},
                        {"reached", r->trajectory.reached.has_value()},
                        {"iterations_run", r->trajectory.records.size() - 1},
                        {"final_exact_f", r->trajectory.records.back().exact_f},
                        {"truncation_events", r->trajectory.events.size()},
                        {"diagnostic", r->trajectory.diagnostic},
                        {"file", "trajectories/" + trajectory_file_name(r->solver, r->seed)}});
    }
    solvers[name] = {{"runs", runs.size()},
                     {"reached", reached},
                     {"shots", quantile_block(shots)},
                     {"switches", quantile_block(switches)},
                     {"communications", quantile_block(comms)},
                     {"wall_clock_s", quantile_block(wall)},
                     {"iterations", quantile_block(iters)},
                     {"runs_detail", detail}};
  }
  doc["solvers"] = solvers;
  return doc;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

void write_outputs(const std::filesystem::path& dir, const json& summary,
                   std::span<const RunResult> results) {
  std::filesystem::create_directories(dir / "trajectories");
  for (const auto& r : results) {
    write_file(dir / "trajectories" / trajectory_file_name(r.solver, r.seed),
               trajectory_csv(r.trajectory));
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

std::vector<double> parse_ratio_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("empty entry in ratio list");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("invalid ratio '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("invalid ratio '" + item + "'");
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("ratios must be positive: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty ratio grid");
  return out;
}

SweepResult run_sweep(const Problem& problem, const CampaignConfig& config,
                      std::span<const double> ratios) {
  if (ratios.empty()) throw ConfigError("empty ratio grid");
  auto find = [&](const std::optional<std::string>& name, std::size_t fallback) -> const SolverSpec& {
    if (name) {
      for (const auto& s : config.solvers) {
        if (s.name == *name) return s;
      }
      throw ConfigError("unknown sweep solver '" + *name + "'");
    }
    if (fallback >= config.solvers.size()) {
      throw ConfigError("sweep needs two solvers (numerator and denominator)");
    }
    return config.solvers[fallback];
  };
  const SolverSpec& numerator = find(config.sweep_numerator, 0);
  const SolverSpec& denominator = find(config.sweep_denominator, 1);

  std::vector<SolverSpec> pair{numerator};
  const bool self = numerator.name == denominator.name;
  if (!self) pair.push_back(denominator);
  const auto results = run_campaign(problem, config, pair);

  const std::size_t seeds = config.seeds.size();
  std::vector<ReachLedger> a(seeds), b(seeds);
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto& ta = results[s].trajectory;
    const auto& tb = results[self ? s : seeds + s].trajectory;
    if (ta.reached) a[s] = ta.records[*ta.reached].ledger;
    if (tb.reached) b[s] = tb.records[*tb.reached].ledger;
  }
  return sweep_ratio(a, b, ratios);
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "ratio,q25,q50,q75,crossing\n";
  const std::string crossing = result.crossing ? format_double(*result.crossing) : "";
  for (const auto& row : result.rows) {
    out << format_double(row.ratio) << ',' << format_double(row.q25) << ','
        << format_double(row.q50) << ',' << format_double(row.q75) << ',' << crossing << '\n';
  }
  return out.str();
}

}  // namespace shoals::campaign
