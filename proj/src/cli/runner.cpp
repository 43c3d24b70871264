/* Copyright 2026 The xxchain Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <thread>

#include "cli/artifacts.hpp"
#include "xxchain/experiments.hpp"

namespace xxchain {
namespace cli {

namespace {

namespace exp = xxchain::experiments;
using nlohmann::json;

constexpr double kAutoPeakWindowFactor = 1.5;

struct ResolvedAlpha {
  double value = 0.0;
  bool was_auto = false;
  double t_peak = 0.0;   // peak data at the resolved alpha
  double p_peak = 0.0;
};

ResolvedAlpha resolve_alpha(const RunConfig& cfg) {
  ResolvedAlpha r;
  if (cfg.alpha == "auto") {
    const AlphaChoice choice = exp::resolve_alpha(cfg.n);
    r.value = choice.alpha;
    r.was_auto = true;
    r.t_peak = choice.t_peak;
    r.p_peak = choice.p_peak;
    return r;
  }
  try {
    r.value = std::stod(cfg.alpha);
  } catch (const std::exception&) {
    throw ConfigError("alpha: expected a number or 'auto', got '" + cfg.alpha + "'");
  }
  if (r.value < 0.0) throw ConfigError("alpha: must be >= 0");
  const double window =
      cfg.t_max > 0.0 ? cfg.t_max : kAutoPeakWindowFactor * cfg.n;
  const PeakResult pk =
      free_peak(ChainSpec{cfg.n, r.value, 1.0}, window, cfg.coarse_dt);
  r.t_peak = pk.t_peak;
  r.p_peak = pk.p_peak;
  return r;
}

double resolve_time(const RunConfig& cfg, const ResolvedAlpha& alpha) {
  if (cfg.t == "peak") return alpha.t_peak;
  if (cfg.t == "n") return static_cast<double>(cfg.n);
  try {
    const double t = std::stod(cfg.t);
    if (t <= 0.0) throw ConfigError("t: must be > 0");
    return t;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("t: expected a number, 'peak' or 'n', got '" + cfg.t + "'");
  }
}

TimeGrid make_grid(const RunConfig& cfg, double t) {
  if (cfg.dt <= 0.0) return TimeGrid::with_duration(t);
  const int n = std::max(1, static_cast<int>(std::ceil(t / cfg.dt - 1e-9)));
  return TimeGrid{t, n};
}

oct::Actuators parse_actuators(const std::string& s) {
  if (s == "left") return oct::Actuators::LeftOnly;
  if (s == "both") return oct::Actuators::Both;
  throw ConfigError("actuators: expected 'left' or 'both', got '" + s + "'");
}

exp::SweepMode parse_mode(const std::string& s) {
  if (s == "free") return exp::SweepMode::Free;
  if (s == "left") return exp::SweepMode::OneActuator;
  if (s == "both") return exp::SweepMode::TwoActuators;
  throw ConfigError("mode: expected 'free', 'left' or 'both', got '" + s + "'");
}

int effective_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

exp::OctSettings oct_settings(const RunConfig& cfg) {
  exp::OctSettings s;
  s.alpha_L = cfg.alpha_l;
  s.alpha_R = cfg.alpha_r;
  s.guess = parse_guess(cfg.guess);
  s.max_iters = cfg.max_iters;
  s.tol = cfg.tol;
  s.mixing = cfg.eta;
  return s;
}

oct::OCTProblem make_problem(const RunConfig& cfg, double alpha, double t) {
  oct::OCTProblem p;
  p.spec = ChainSpec{cfg.n, alpha, 1.0};
  p.grid = make_grid(cfg, t);
  p.actuators = parse_actuators(cfg.actuators);
  p.alpha_L = cfg.alpha_l;
  p.alpha_R = cfg.alpha_r;
  p.guess = parse_guess(cfg.guess);
  p.max_iters = cfg.max_iters;
  p.tol = cfg.tol;
  p.mixing = cfg.eta;
  return p;
}

json config_json(const RunConfig& cfg) {
  return json{{"n", cfg.n},
              {"alpha", cfg.alpha},
              {"t", cfg.t},
              {"actuators", cfg.actuators},
              {"alpha-l", cfg.alpha_l},
              {"alpha-r", cfg.alpha_r},
              {"guess", cfg.guess},
              {"eta", cfg.eta},
              {"tol", cfg.tol},
              {"max-iters", cfg.max_iters},
              {"dt", cfg.dt},
              {"coarse-dt", cfg.coarse_dt},
              {"t-max", cfg.t_max},
              {"amplitudes", cfg.amplitudes},
              {"m", cfg.m},
              {"seed", cfg.seed},
              {"base", cfg.base},
              {"eval", cfg.eval},
              {"mode", cfg.mode},
              {"alpha-grid", cfg.alpha_grid},
              {"t-grid", cfg.t_grid},
              {"normalized-t-grid", cfg.normalized_t_grid},
              {"n-grid", cfg.n_grid},
              {"threads", cfg.threads}};
}

json sweep_summary(const exp::SweepTable& table) {
  return json{{"axis", table.axis},
              {"rows", table.rows.size()},
              {"columns", table.columns},
              {"config-digest", table.config_digest}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json oct_result_json(const oct::OCTResult& r) {
  return json{{"yield", r.yield},
              {"fluence-left", r.fluence_left},
              {"fluence-right", r.fluence_right},
              {"reduced-fluence", oct::reduced_fluence(r)},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"best-iteration", r.best_iteration},
              {"stationarity-defect", r.stationarity_defect},
              {"symmetry-defect", oct::symmetry_defect(r.left, r.right)},
              {"j1", r.j_history.back().j1},
              {"j2", r.j_history.back().j2},
              {"j", r.j_history.back().j}};
}

void run_free_evolve(const RunConfig& cfg, const std::filesystem::path& dir,
                     json& manifest, std::ostream& log) {
  const ResolvedAlpha alpha = resolve_alpha(cfg);
  const double window = cfg.t_max > 0.0 ? cfg.t_max : 4.0 * cfg.n;
  const PeakResult pk =
      free_peak(ChainSpec{cfg.n, alpha.value, 1.0}, window, cfg.coarse_dt);
  manifest["resolved"] = {{"alpha", alpha.value},
                          {"alpha-was-auto", alpha.was_auto},
                          {"t-peak", pk.t_peak},
                          {"p-peak", pk.p_peak},
                          {"at-window-edge", pk.at_window_edge},
                          {"window", window}};

  const TimeGrid grid = make_grid(cfg, pk.t_peak);
  const SingleExcHamiltonian h =
      build_hamiltonian(couplings_from_spec(ChainSpec{cfg.n, alpha.value, 1.0}));
  const Trajectory traj = evolve_controlled(h, nullptr, nullptr,
                                            first_site_state(cfg.n), grid);
  write_trajectory_csv(dir / "trajectory.csv", traj);
  write_pulses_csv(dir / "pulses.csv", Pulse::zero(grid), Pulse::zero(grid));
  manifest["results"] = {{"t-peak", pk.t_peak},
                         {"p-peak", pk.p_peak},
                         {"p-at-grid-end", traj.target_population_series.back()}};
  log << "free evolution N=" << cfg.n << " alpha=" << alpha.value
      << ": P_peak=" << pk.p_peak << " at T_peak=" << pk.t_peak << "\n";
}

void run_optimize(const RunConfig& cfg, const std::filesystem::path& dir,
                  json& manifest, std::ostream& log) {
  const ResolvedAlpha alpha = resolve_alpha(cfg);
  const double t = resolve_time(cfg, alpha);
  const oct::OCTProblem problem = make_problem(cfg, alpha.value, t);
  const oct::OCTResult result = oct::optimize(problem);
  manifest["resolved"] = {{"alpha", alpha.value},
                          {"alpha-was-auto", alpha.was_auto},
                          {"t", t},
                          {"t-peak", alpha.t_peak},
                          {"p-free-peak", alpha.p_peak},
                          {"dt", problem.grid.dt()},
                          {"n-steps", problem.grid.n_steps}};
  manifest["results"] = oct_result_json(result);
  write_pulses_csv(dir / "pulses.csv", result.left, result.right);
  write_trajectory_csv(dir / "trajectory.csv", result.final_trajectory);
  write_convergence_csv(dir / "convergence.csv", result.j_history);
  log << "optimize N=" << cfg.n << " T=" << t << " (" << cfg.actuators
      << "): yield=" << result.yield << " fluence="
      << result.fluence_left + result.fluence_right
      << (result.converged ? " converged" : " NOT converged") << " after "
      << result.iterations << " iterations\n";
}

void run_time_sweep(const RunConfig& cfg, const std::filesystem::path& dir,
                    json& manifest, std::ostream& log) {
  const ResolvedAlpha alpha = resolve_alpha(cfg);
  std::vector<double> ts = parse_number_list(cfg.t_grid);
  if (ts.empty()) throw ConfigError("t-grid: empty");
  if (cfg.normalized_t_grid)
    for (double& t : ts) t *= cfg.n;
  const exp::SweepMode mode = cfg.actuators == "both"
                                  ? exp::SweepMode::TwoActuators
                                  : exp::SweepMode::OneActuator;
  exp::SweepTable table = exp::time_sweep(cfg.n, ts, mode, alpha.value,
                                          oct_settings(cfg),
                                          effective_threads(cfg));
  table.config_digest = config_digest(manifest["config"]);
  write_sweep_csv(dir / "time_sweep.csv", table);
  manifest["resolved"] = {{"alpha", alpha.value},
                          {"alpha-was-auto", alpha.was_auto},
                          {"t-peak", alpha.t_peak},
                          {"p-free-peak", alpha.p_peak}};
  manifest["results"] = sweep_summary(table);
  log << "time sweep N=" << cfg.n << ": " << table.rows.size() << " points\n";
}

void run_alpha_sweep(const RunConfig& cfg, const std::filesystem::path& dir,
                     json& manifest, std::ostream& log) {
  const std::vector<double> alphas = parse_number_list(cfg.alpha_grid);
  if (alphas.empty()) throw ConfigError("alpha-grid: empty");
  const exp::SweepMode mode = parse_mode(cfg.mode);

  double operation_time = 0.0;
  ResolvedAlpha auto_alpha;
  if (mode != exp::SweepMode::Free) {
    auto_alpha = resolve_alpha(cfg);
    operation_time = resolve_time(cfg, auto_alpha);
  }

  const std::vector<double> amplitudes = parse_number_list(cfg.amplitudes);
  exp::DisorderSettings disorder;
  disorder.amplitudes = amplitudes;
  disorder.realizations = cfg.m;
  disorder.master_seed = cfg.seed;

  exp::SweepTable table = exp::alpha_sweep(
      cfg.n, alphas, mode, operation_time, oct_settings(cfg),
      amplitudes.empty() ? nullptr : &disorder,
      cfg.t_max > 0.0 ? cfg.t_max : 0.0, effective_threads(cfg));
  table.config_digest = config_digest(manifest["config"]);
  write_sweep_csv(dir / "alpha_sweep.csv", table);

  double best_alpha = alphas.front(), best_yield = -1.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i][0] > best_yield + 1e-12) {
      best_yield = table.rows[i][0];
      best_alpha = table.axis_values[i];
    }
  }
  manifest["resolved"] = {{"mode", cfg.mode}, {"operation-time", operation_time}};
  manifest["results"] = sweep_summary(table);
  manifest["results"]["best-alpha"] = best_alpha;
  manifest["results"]["best-yield"] = best_yield;
  log << "alpha sweep N=" << cfg.n << " (" << cfg.mode
      << "): best alpha=" << best_alpha << " yield=" << best_yield << "\n";
}

void run_disorder_sweep(const RunConfig& cfg, const std::filesystem::path& dir,
                        json& manifest, std::ostream& log) {
  const ResolvedAlpha alpha = resolve_alpha(cfg);
  const ChainSpec spec{cfg.n, alpha.value, 1.0};

  exp::DisorderStudy study;
  study.amplitudes = parse_number_list(cfg.amplitudes);
  if (study.amplitudes.empty()) throw ConfigError("amplitudes: empty");
  study.realizations = cfg.m;
  study.master_seed = cfg.seed;

  double protocol_t = 0.0;
  manifest["resolved"] = {{"alpha", alpha.value},
                          {"alpha-was-auto", alpha.was_auto}};
  if (cfg.base == "free") {
    protocol_t = alpha.t_peak;
    study.base = exp::FreeEvolutionBase{spec};
  } else if (cfg.base == "oct") {
    protocol_t = resolve_time(cfg, alpha);
    const oct::OCTProblem problem = make_problem(cfg, alpha.value, protocol_t);
    const oct::OCTResult result = oct::optimize(problem);
    manifest["resolved"]["optimize"] = oct_result_json(result);
    write_pulses_csv(dir / "pulses.csv", result.left, result.right);
    study.base = exp::PulsedBase{spec, result.left, result.right};
  } else {
    throw ConfigError("base: expected 'free' or 'oct', got '" + cfg.base + "'");
  }
  manifest["resolved"]["protocol-t"] = protocol_t;

  if (cfg.eval == "fixed-t") {
    study.evaluation = exp::AtFixedT{protocol_t};
  } else if (cfg.eval == "peak-window") {
    study.evaluation = exp::AtPeak{0.8 * protocol_t, 1.2 * protocol_t};
  } else {
    throw ConfigError("eval: expected 'fixed-t' or 'peak-window', got '" +
                      cfg.eval + "'");
  }

  const std::vector<exp::DisorderStats> stats =
      exp::disorder_average(study, effective_threads(cfg));
  write_disorder_csv(dir / "disorder_sweep.csv", stats);
  json rows = json::array();
  for (const auto& s : stats)
    rows.push_back({{"A", s.amplitude},
                    {"mean", s.mean},
                    {"std-error", s.std_error},
                    {"m", s.realizations},
                    {"seed", s.seed}});
  manifest["results"] = {{"points", rows}};
  log << "disorder sweep N=" << cfg.n << " base=" << cfg.base << ": "
      << stats.size() << " amplitudes, M=" << cfg.m << "\n";
}

void run_length_scaling(const RunConfig& cfg, const std::filesystem::path& dir,
                        json& manifest, std::ostream& log) {
  const std::vector<int> ns = parse_int_list(cfg.n_grid);
  if (ns.empty()) throw ConfigError("n-grid: empty");
  exp::SweepTable table = exp::length_scaling(
      ns, parse_number_list(cfg.amplitudes), cfg.m, cfg.seed, oct_settings(cfg),
      effective_threads(cfg));
  table.config_digest = config_digest(manifest["config"]);
  write_sweep_csv(dir / "length_scaling.csv", table);
  manifest["results"] = sweep_summary(table);
  log << "length scaling over " << ns.size() << " chain lengths done\n";
}

}  // namespace

std::filesystem::path resolve_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir = cfg.out.empty()
                                  ? std::filesystem::path("runs") /
                                        experiment_name(cfg.experiment)
                                  : std::filesystem::path(cfg.out);
  if (dir.is_relative()) {
    if (const char* root = std::getenv("XXCHAIN_OUTPUT_ROOT"))
      dir = std::filesystem::path(root) / dir;
  }
  return dir;
}

RunOutcome run(const RunConfig& cfg, std::ostream& log) {
  if (cfg.n < 2) throw ConfigError("n: chain length must be >= 2");
  if (cfg.m < 1) throw ConfigError("m: need at least one realization");
  if (cfg.eta <= 0.0 || cfg.eta > 1.0) throw ConfigError("eta: must be in (0, 1]");

  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome outcome;
  outcome.out_dir = resolve_out_dir(cfg);
  std::filesystem::create_directories(outcome.out_dir);

  json manifest;
  manifest["tool"] = "xxchain";
  manifest["version"] = "0.1.0";
  manifest["experiment"] = experiment_name(cfg.experiment);
  manifest["config"] = config_json(cfg);

  switch (cfg.experiment) {
    case Experiment::FreeEvolve:
      run_free_evolve(cfg, outcome.out_dir, manifest, log);
      break;
    case Experiment::Optimize:
      run_optimize(cfg, outcome.out_dir, manifest, log);
      break;
    case Experiment::TimeSweep:
      run_time_sweep(cfg, outcome.out_dir, manifest, log);
      break;
    case Experiment::AlphaSweep:
      run_alpha_sweep(cfg, outcome.out_dir, manifest, log);
      break;
    case Experiment::DisorderSweep:
      run_disorder_sweep(cfg, outcome.out_dir, manifest, log);
      break;
    case Experiment::LengthScaling:
      run_length_scaling(cfg, outcome.out_dir, manifest, log);
      break;
  }

  const auto t1 = std::chrono::steady_clock::now();
  manifest["timing"] = {
      {"wall-seconds",
       std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() /
           1000.0},
      {"timestamp-utc", utc_timestamp()}};
  write_manifest(outcome.out_dir / "manifest.json", manifest);
  outcome.manifest = std::move(manifest);
  log << "artifacts written to " << outcome.out_dir.string() << "\n";
  return outcome;
}

int validate(const RunConfig& cfg, std::ostream& out) {
  int warnings = 0;
  const ResolvedAlpha alpha = resolve_alpha(cfg);
  double t = 0.0;
  try {
    t = resolve_time(cfg, alpha);
  } catch (const ConfigError&) {
    t = alpha.t_peak;  // sweeps resolve their own times
  }
  const TimeGrid grid = make_grid(cfg, t);
  out << "experiment:      " << experiment_name(cfg.experiment) << "\n"
      << "chain:           N=" << cfg.n << " alpha=" << alpha.value
      << (alpha.was_auto ? " (auto)" : "") << "\n"
      << "free peak:       P=" << alpha.p_peak << " at T=" << alpha.t_peak << "\n"
      << "operation time:  T=" << t << " (T/N=" << t / cfg.n << ")\n"
      << "grid:            dt=" << grid.dt() << ", " << grid.n_steps
      << " steps\n"
      << "cost estimate:   ~" << 2 * grid.n_steps * cfg.max_iters
      << " RK4 steps per optimization (upper bound)\n";
  if (t < 0.5 * cfg.n) {
    out << "warning: T < 0.5 N is below the quantum speed limit; transfer "
           "protocols are expected to fail\n";
    ++warnings;
  }
  if (grid.dt() > 0.01 + 1e-12) {
    out << "warning: dt > 0.01; the integrator accuracy contract (1e-8 norm, "
           "1e-7 oracle agreement) is not guaranteed\n";
    ++warnings;
  }
  if (warnings == 0) out << "no warnings\n";
  return warnings;
}

}  // namespace cli
}  // namespace xxchain
