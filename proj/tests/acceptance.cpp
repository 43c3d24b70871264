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

// End-to-end reproduction suite. Each check re-derives one of the headline
// results on a desk-scale budget and prints a single PASS/FAIL line; the
// process exits nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "xxchain/experiments.hpp"
#include "xxchain/model.hpp"
#include "xxchain/oct.hpp"
#include "xxchain/propagate.hpp"
#include "xxchain/rng.hpp"

using namespace xxchain;
namespace xpr = xxchain::experiments;

namespace {

int g_failures = 0;
int g_index = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  ++g_index;
  std::printf("[%s] %2d. %s: %s\n", pass ? "PASS" : "FAIL", g_index,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.5g", v);
  return buf;
}

// Disorder realizations per amplitude; matches the reference studies.
constexpr int kRealizations = 2000;
constexpr std::uint64_t kMasterSeed = 20260808;
constexpr int kThreads = 2;

// Fluence weights. One-actuator protocols run at the stock weight; the N=30
// time sweep needs a stiffer one so the yield at the speed limit stays at the
// free-peak level rather than above it, and two-actuator runs use a weak
// target weight reached by continuation inside the sweep drivers.
constexpr double kOneActuatorWeight = 0.05;
constexpr double kOneActuatorWeightN30 = 0.17;
constexpr double kTwoActuatorWeight = 0.005;
constexpr double kTwoActuatorWeightScaling = 0.001;

struct FreePoint {
  double alpha, t_peak, p_peak;
};

FreePoint resolved(int n) {
  const AlphaChoice c = xpr::resolve_alpha(n);
  return {c.alpha, c.t_peak, c.p_peak};
}

void criterion_1_free_baseline() {
  const FreePoint p10 = resolved(10);
  const FreePoint p30 = resolved(30);
  const bool pass = std::abs(p10.p_peak - 0.976) <= 0.01 &&
                    std::abs(p10.t_peak - 7.0) <= 1.0 &&
                    std::abs(p30.p_peak - 0.928) <= 0.01 &&
                    std::abs(p30.t_peak - 18.0) <= 2.0;
  report(pass, "free-evolution baseline",
         "N=10: P=" + fmt(p10.p_peak) + "@T=" + fmt(p10.t_peak) +
             " (want 0.976+-0.01 @ 7+-1); N=30: P=" + fmt(p30.p_peak) + "@T=" +
             fmt(p30.t_peak) + " (want 0.928+-0.01 @ 18+-2)");
}

void criterion_2_alpha_optimum() {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);
  const AlphaChoice c = optimal_alpha(30, grid, 1.5 * 30);
  const bool pass = c.alpha >= 0.5 && c.alpha <= 0.7;
  report(pass, "alpha optimum at N=30",
         "maximizer alpha=" + fmt(c.alpha) + " (want in [0.5, 0.7])");
}

// One-actuator yields over the operation time, compared against the free
// peak: below the speed limit the protocol fails, near 0.65N it matches the
// free peak, at T=N it exceeds it.
void criterion_3_qsl() {
  bool pass = true;
  std::string detail;
  for (int n : {10, 30}) {
    const FreePoint base = resolved(n);
    xpr::OctSettings settings;
    settings.alpha_L = n == 30 ? kOneActuatorWeightN30 : kOneActuatorWeight;
    const std::vector<double> fracs = {0.4, 0.65, 0.75, 0.85, 1.0};
    std::vector<double> ts;
    for (double f : fracs) ts.push_back(f * n);
    const xpr::SweepTable table =
        xpr::time_sweep(n, ts, xpr::SweepMode::OneActuator, base.alpha, settings);
    const double y_04 = table.rows[0][1];
    const double y_065 = table.rows[1][1];
    const double y_n = table.rows.back()[1];
    const bool ok = y_04 < base.p_peak - 0.05 &&
                    std::abs(y_065 - base.p_peak) <= 0.02 &&
                    y_n >= base.p_peak;
    pass = pass && ok;
    detail += "N=" + std::to_string(n) + ": y(0.4N)=" + fmt(y_04) +
              " y(0.65N)=" + fmt(y_065) + " y(N)=" + fmt(y_n) +
              " vs peak " + fmt(base.p_peak) + (n == 10 ? "; " : "");
  }
  report(pass, "one-actuator quantum speed limit", detail);
}

void criterion_4_reduced_fluence() {
  const FreePoint base = resolved(10);
  xpr::OctSettings settings;
  settings.alpha_L = kOneActuatorWeight;
  const std::vector<double> fracs = {0.65, 0.8, 1.0, 1.25, 1.5};
  std::vector<double> ts;
  for (double f : fracs) ts.push_back(f * 10);
  const xpr::SweepTable table =
      xpr::time_sweep(10, ts, xpr::SweepMode::OneActuator, base.alpha, settings);

  std::size_t nearest = 0;
  for (std::size_t i = 1; i < fracs.size(); ++i)
    if (std::abs(fracs[i] - base.t_peak / 10) <
        std::abs(fracs[nearest] - base.t_peak / 10))
      nearest = i;
  std::size_t minimum = 0;
  std::string values;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i][3] < table.rows[minimum][3]) minimum = i;
    values += fmt(table.rows[i][3]) + (i + 1 < table.rows.size() ? " " : "");
  }
  const bool pass =
      minimum == nearest && table.rows[4][3] > table.rows[2][3];
  report(pass, "reduced fluence minimum near T_peak",
         "F/T over T/N {0.65,0.8,1,1.25,1.5} = {" + values +
             "}; min at index " + std::to_string(minimum) + " (want " +
             std::to_string(nearest) + "), F/T(1.5) > F/T(1.0)");
}

// Criteria 5 and 6 share one length-scaling table.
void criteria_5_6_two_actuators() {
  xpr::OctSettings settings;
  settings.alpha_L = settings.alpha_R = kTwoActuatorWeightScaling;
  const std::vector<int> ns = {10, 15, 20, 25, 30, 35, 40};
  const xpr::SweepTable table =
      xpr::length_scaling(ns, {}, 1, kMasterSeed, settings, kThreads);

  bool pass5 = true;
  double min_yield = 1.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const int n = ns[i];
    const double y = table.rows[i][3];
    if (n == 10 || n == 20 || n == 30 || n == 40) {
      pass5 = pass5 && y >= 0.995;
      min_yield = std::min(min_yield, y);
    }
  }
  report(pass5, "two-actuator yield at T_peak",
         "min yield over N in {10,20,30,40} = " + fmt(min_yield) +
             " (want >= 0.995)");

  // Least-squares fit of the peak time against N.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(ns.size());
  for (int i = 0; i < m; ++i) {
    const double x = ns[i], y = table.rows[i][1];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < m; ++i) {
    const double y = table.rows[i][1];
    ss_res += (y - slope * ns[i] - intercept) * (y - slope * ns[i] - intercept);
    ss_tot += (y - sy / m) * (y - sy / m);
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  report(r2 >= 0.99, "two-actuator peak-time linearity",
         "R^2=" + fmt(r2) + " (want >= 0.99), slope=" + fmt(slope) +
             " recorded");
}

oct::OCTResult one_actuator_protocol(int n, double alpha, double t,
                                     double weight) {
  oct::OCTProblem p;
  p.spec = ChainSpec{n, alpha, 1.0};
  p.grid = TimeGrid::with_duration(t);
  p.actuators = oct::Actuators::LeftOnly;
  p.alpha_L = weight;
  return oct::optimize(p);
}

// The two one-actuator protocols, replayed on the same disorder realizations
// and read at the transfer peak near the designed arrival.
void criterion_7_disorder_collapse() {
  const FreePoint base = resolved(10);
  const oct::OCTResult peak_protocol =
      one_actuator_protocol(10, base.alpha, base.t_peak, kOneActuatorWeight);
  const oct::OCTResult long_protocol =
      one_actuator_protocol(10, base.alpha, 10.0, kOneActuatorWeight);

  const ChainSpec spec{10, base.alpha, 1.0};
  auto stats = [&](const oct::OCTResult& r, double t, double amplitude) {
    const xpr::StudyBase b = xpr::PulsedBase{spec, r.left, r.right};
    const xpr::AtPeak eval{0.8 * t, 1.2 * t};
    return xpr::disorder_stats_at(b, eval, amplitude, kRealizations,
                                  derive_seed(kMasterSeed, 7), kThreads);
  };
  const xpr::DisorderStats peak_small = stats(peak_protocol, base.t_peak, 0.01);
  const xpr::DisorderStats long_small = stats(long_protocol, 10.0, 0.01);
  const xpr::DisorderStats peak_02 = stats(peak_protocol, base.t_peak, 0.2);
  const xpr::DisorderStats long_02 = stats(long_protocol, 10.0, 0.2);

  const double diff_small = long_small.mean - peak_small.mean;
  const double diff_02 = long_02.mean - peak_02.mean;
  const bool pass = diff_small > 0.0 && std::abs(diff_02) < 0.02;
  report(pass, "disorder collapse of the long-T advantage",
         "A=0.01: <P>(T=N) - <P>(T_peak) = " + fmt(diff_small) +
             " (want > 0); A=0.2: |diff| = " + fmt(std::abs(diff_02)) +
             " (want < 0.02)");
}

void criterion_8_oct_vs_free_crossover() {
  const FreePoint base = resolved(10);
  const oct::OCTResult protocol =
      one_actuator_protocol(10, base.alpha, base.t_peak, kOneActuatorWeight);
  const ChainSpec spec{10, base.alpha, 1.0};
  const std::vector<double> amplitudes = {0.05, 0.1, 0.2, 0.35, 0.5,
                                          0.75, 1.0, 1.25, 1.5};

  xpr::DisorderStudy oct_study;
  oct_study.base = xpr::PulsedBase{spec, protocol.left, protocol.right};
  oct_study.amplitudes = amplitudes;
  oct_study.realizations = kRealizations;
  oct_study.master_seed = kMasterSeed;  // same seed: paired realizations
  oct_study.evaluation = xpr::AtFixedT{base.t_peak};
  const std::vector<xpr::DisorderStats> oct_stats =
      xpr::disorder_average(oct_study, kThreads);

  xpr::DisorderStudy free_study = oct_study;
  free_study.base = xpr::FreeEvolutionBase{spec};
  const std::vector<xpr::DisorderStats> free_stats =
      xpr::disorder_average(free_study, kThreads);

  bool pass = true;
  double max_small_gap = 0.0, gap_15 = 0.0;
  std::string gaps;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    const double gap = oct_stats[i].mean - free_stats[i].mean;
    const double se = 3.0 * std::hypot(oct_stats[i].std_error,
                                       free_stats[i].std_error);
    if (amplitudes[i] <= 1.0 && gap <= -se) pass = false;
    if (amplitudes[i] <= 0.5 && gap <= 0.0) pass = false;
    if (amplitudes[i] <= 0.2) max_small_gap = std::max(max_small_gap, gap);
    if (amplitudes[i] == 1.5) gap_15 = gap;
    gaps += fmt(gap) + (i + 1 < amplitudes.size() ? " " : "");
  }
  // Shrinking advantage: by A = 1.5 the gap has lost at least half of its
  // small-amplitude size.
  if (!(gap_15 < 0.5 * max_small_gap)) pass = false;
  report(pass, "OCT-vs-free disorder crossover",
         "gaps over A {0.05..1.5} = {" + gaps + "}; positive through A<=1.0, "
         "gap(1.5)=" + fmt(gap_15) + " < half of " + fmt(max_small_gap));
}

void criterion_9_two_actuator_alpha_robustness() {
  const FreePoint base = resolved(30);
  std::vector<double> alphas;
  for (int k = 1; k <= 10; ++k) alphas.push_back(0.1 * k);

  xpr::OctSettings two;
  two.alpha_L = two.alpha_R = kTwoActuatorWeight;
  const xpr::SweepTable both = xpr::alpha_sweep(
      30, alphas, xpr::SweepMode::TwoActuators, base.t_peak, two);
  xpr::OctSettings one;
  one.alpha_L = kOneActuatorWeight;
  const xpr::SweepTable left = xpr::alpha_sweep(
      30, alphas, xpr::SweepMode::OneActuator, base.t_peak, one);

  auto range = [](const xpr::SweepTable& t) {
    double lo = t.rows[0][0], hi = t.rows[0][0];
    for (const auto& row : t.rows) {
      lo = std::min(lo, row[0]);
      hi = std::max(hi, row[0]);
    }
    return hi - lo;
  };
  const double range_both = range(both);
  const double range_left = range(left);
  const bool pass = range_both < 0.02 && range_left > 0.1;
  report(pass, "two-actuator alpha robustness",
         "yield range over alpha in [0.1,1]: two-actuator " + fmt(range_both) +
             " (want < 0.02), one-actuator " + fmt(range_left) +
             " (want > 0.1)");
}

// The always-runnable numerical property suite.
void criterion_10_property_suite() {
  bool pass = true;
  std::string detail;
  constexpr double kPi = std::numbers::pi;

  // Norm conservation under oscillating pulses, dt = 0.01.
  {
    const SingleExcHamiltonian h =
        build_hamiltonian(couplings_from_spec(ChainSpec{10, 0.75, 1.0}));
    const TimeGrid grid{20.0, 2000};
    Pulse f = Pulse::zero(grid), g = Pulse::zero(grid);
    for (int k = 0; k < grid.n_nodes(); ++k) {
      f.values[k] = std::sin(2.3 * grid.node_time(k));
      g.values[k] = 0.8 * std::sin(1.1 * grid.node_time(k) + 0.7);
    }
    const Trajectory traj =
        evolve_controlled(h, &f, &g, first_site_state(10), grid);
    double worst = 0.0;
    for (double e : traj.norm_error) worst = std::max(worst, e);
    if (worst >= 1e-8) pass = false;
    detail += "norm " + fmt(worst);
  }

  // RK4 against the eigendecomposition oracle: constant and piecewise pulses.
  {
    const Eigen::VectorXd j = couplings_from_spec(ChainSpec{8, 0.6, 1.0});
    const SingleExcHamiltonian h0 = build_hamiltonian(j);
    StateVector rk4 = first_site_state(8);
    StateVector oracle = rk4;
    double worst = 0.0;
    for (double c : {1.0, -0.5, 0.7, 0.2}) {
      const TimeGrid grid = TimeGrid::with_duration(1.2);
      const Pulse f = Pulse::constant(grid, c);
      rk4 = evolve_controlled_final(h0, &f, nullptr, rk4, grid);
      Eigen::VectorXd shifted = j;
      shifted(0) += c;
      oracle =
          SpectralPropagator(build_hamiltonian(shifted)).evolve(oracle, 1.2);
      worst = std::max(worst, (rk4 - oracle).cwiseAbs().maxCoeff());
    }
    if (worst >= 1e-7) pass = false;
    detail += ", oracle " + fmt(worst);
  }

  // Fourth-order convergence factor under step halving.
  {
    const Eigen::VectorXd j = couplings_from_spec(ChainSpec{10, 0.7, 1.0});
    const SingleExcHamiltonian h0 = build_hamiltonian(j);
    Eigen::VectorXd shifted = j;
    shifted(0) += 0.8;
    const StateVector exact =
        evolve_eigen(build_hamiltonian(shifted), first_site_state(10), 5.0);
    auto err = [&](double dt) {
      const TimeGrid grid{5.0, static_cast<int>(std::lround(5.0 / dt))};
      const Pulse f = Pulse::constant(grid, 0.8);
      return (evolve_controlled_final(h0, &f, nullptr, first_site_state(10),
                                      grid) -
              exact)
          .cwiseAbs()
          .maxCoeff();
    };
    const double factor = err(0.02) / err(0.01);
    if (!(factor >= 12.0 && factor <= 20.0)) pass = false;
    detail += ", order " + fmt(factor);
  }

  // Costate overlap constancy along a converged optimization.
  {
    oct::OCTProblem p;
    p.spec = ChainSpec{6, 0.7, 1.0};
    p.grid = TimeGrid{6.0, 600};
    p.alpha_L = 0.2;
    p.max_iters = 400;
    const oct::OCTResult r = oct::optimize(p);
    const SingleExcHamiltonian h0 =
        build_hamiltonian(couplings_from_spec(p.spec));
    const Trajectory traj =
        evolve_controlled(h0, &r.left, nullptr, first_site_state(6), p.grid);
    const StateVector chi_final =
        oct::terminal_costate(traj.final_state(), last_site_state(6));
    const std::vector<StateVector> chi =
        evolve_backward_nodes(h0, &r.left, nullptr, chi_final, p.grid);
    const std::complex<double> overlap0 = chi.front().dot(traj.states.front());
    double worst = 0.0;
    for (int k = 0; k <= p.grid.n_steps; ++k)
      worst = std::max(worst,
                       std::abs(chi[k].dot(traj.states[k]) - overlap0));
    if (worst >= 1e-7) pass = false;
    detail += ", costate " + fmt(worst);
  }

  // Two-site Rabi formula.
  {
    const SingleExcHamiltonian h =
        build_hamiltonian(couplings_from_spec(ChainSpec{2, 1.0, 1.0}));
    double worst = 0.0;
    for (double t : {0.4, 1.1, kPi / 2}) {
      const StateVector psi = evolve_eigen(h, first_site_state(2), t);
      worst = std::max(worst, std::abs(target_population(psi) -
                                       std::sin(t) * std::sin(t)));
    }
    if (worst >= 1e-8) pass = false;
    detail += ", rabi " + fmt(worst);
  }

  // Perfect-state-transfer chain oracle.
  {
    const int n = 5;
    const double lambda = 0.25;
    Eigen::VectorXd j(n - 1);
    for (int i = 1; i < n; ++i)
      j(i - 1) = lambda * std::sqrt(double(i) * double(n - i));
    const StateVector psi = evolve_eigen(build_hamiltonian(j),
                                         first_site_state(n), kPi / (2 * lambda));
    const double err = std::abs(target_population(psi) - 1.0);
    if (err >= 1e-8) pass = false;
    detail += ", pst " + fmt(err);
  }

  // Disorder exactness at A = 0 and bit-identical reruns.
  {
    const Eigen::VectorXd j = couplings_from_spec(ChainSpec{12, 0.55, 1.0});
    const DisorderRealization zero = sample_disorder(11, 0.0, 42);
    if (!(apply_disorder(j, zero) == j)) pass = false;
    const DisorderRealization a = sample_disorder(11, 0.3, 42);
    const DisorderRealization b = sample_disorder(11, 0.3, 42);
    if (!(a.deltas == b.deltas)) pass = false;

    oct::OCTProblem p;
    p.spec = ChainSpec{5, 0.6, 1.0};
    p.grid = TimeGrid{4.0, 400};
    p.alpha_L = 0.1;
    p.max_iters = 50;
    p.guess = oct::RandomGuess{99, 0.4};
    const oct::OCTResult r1 = oct::optimize(p);
    const oct::OCTResult r2 = oct::optimize(p);
    if (!(r1.yield == r2.yield && r1.left.values == r2.left.values))
      pass = false;
    detail += ", determinism ok";
  }

  report(pass, "numerical property suite", detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1_free_baseline();
  criterion_2_alpha_optimum();
  criterion_3_qsl();
  criterion_4_reduced_fluence();
  criteria_5_6_two_actuators();
  criterion_7_disorder_collapse();
  criterion_8_oct_vs_free_crossover();
  criterion_9_two_actuator_alpha_robustness();
  criterion_10_property_suite();
  const auto t1 = std::chrono::steady_clock::now();
  std::printf("%s: %d/%d checks passed (%.1f s)\n",
              g_failures == 0 ? "OK" : "FAILED", g_index - g_failures, g_index,
              std::chrono::duration<double>(t1 - t0).count());
  return g_failures == 0 ? 0 : 1;
}
