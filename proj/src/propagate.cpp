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

#include "xxchain/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

namespace xxchain {

namespace {

constexpr double kDefaultDt = 0.01;
constexpr double kPeakTimeResolution = 1e-4;
constexpr double kAlphaTieEps = 1e-7;

using cd = std::complex<double>;

// Scratch buffers for the RK4 stages; reused across steps and calls.
struct Rk4Workspace {
  StateVector k1, k2, k3, k4, tmp;

  void resize(int n) {
    k1.resize(n);
    k2.resize(n);
    k3.resize(n);
    k4.resize(n);
    tmp.resize(n);
  }
};

// One RK4 step of i dpsi/dt = H(t) psi with pulse values sampled at the step
// endpoints (f0,g0), midpoint (fh,gh) and far end (f1,g1). h may be negative.
void rk4_step(const SingleExcHamiltonian& h0, double h, double f0, double fh,
              double f1, double g0, double gh, double g1, StateVector& psi,
              Rk4Workspace& w) {
  const cd mi(0.0, -1.0);

  h0.apply_controlled(f0, g0, psi, w.tmp);
  w.k1 = mi * w.tmp;

  w.tmp = psi + (0.5 * h) * w.k1;
  h0.apply_controlled(fh, gh, w.tmp, w.k2);
  w.k2 *= mi;

  w.tmp = psi + (0.5 * h) * w.k2;
  h0.apply_controlled(fh, gh, w.tmp, w.k3);
  w.k3 *= mi;

  w.tmp = psi + h * w.k3;
  h0.apply_controlled(f1, g1, w.tmp, w.k4);
  w.k4 *= mi;

  psi += (h / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
}

inline double node_value(const Pulse* p, int k) {
  return p ? p->values[static_cast<std::size_t>(k)] : 0.0;
}

void check_controlled_inputs(const SingleExcHamiltonian& h0, const Pulse* left,
                             const Pulse* right, const StateVector& psi0,
                             const TimeGrid& grid) {
  grid.validate();
  if (psi0.size() != h0.n_sites())
    throw std::invalid_argument("evolve_controlled: state dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("evolve_controlled: initial state not normalized");
  if (left && !(left->grid == grid))
    throw std::invalid_argument("evolve_controlled: left pulse grid mismatch");
  if (right && !(right->grid == grid))
    throw std::invalid_argument("evolve_controlled: right pulse grid mismatch");
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double xtol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TimeGrid TimeGrid::with_duration(double t_final) {
  return with_duration_max_dt(t_final, kDefaultDt);
}

TimeGrid TimeGrid::with_duration_max_dt(double t_final, double max_dt) {
  if (t_final <= 0.0)
    throw std::invalid_argument("TimeGrid: t_final must be > 0");
  const double dt = std::min(max_dt, t_final / 2000.0);
  const int n = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-9)));
  return TimeGrid{t_final, n};
}

void TimeGrid::validate() const {
  if (t_final <= 0.0)
    throw std::invalid_argument("TimeGrid: t_final must be > 0");
  if (n_steps < 1)
    throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
}

Pulse Pulse::zero(const TimeGrid& grid) { return constant(grid, 0.0); }

Pulse Pulse::constant(const TimeGrid& grid, double c) {
  grid.validate();
  return Pulse{grid, std::vector<double>(grid.n_nodes(), c)};
}

void Pulse::validate() const {
  grid.validate();
  if (static_cast<int>(values.size()) != grid.n_nodes())
    throw std::invalid_argument("Pulse: sample count does not match grid");
}

double Pulse::value_at(double t) const {
  const double dt = grid.dt();
  double x = t / dt;
  if (x <= 0.0) return values.front();
  if (x >= grid.n_steps) return values.back();
  const int k = static_cast<int>(x);
  const double frac = x - k;
  return values[k] * (1.0 - frac) + values[k + 1] * frac;
}

double Pulse::fluence() const {
  const double dt = grid.dt();
  double acc = 0.5 * (values.front() * values.front() +
                      values.back() * values.back());
  for (std::size_t k = 1; k + 1 < values.size(); ++k) acc += values[k] * values[k];
  return acc * dt;
}

Pulse Pulse::resampled(const TimeGrid& target) const {
  if (std::abs(target.t_final - grid.t_final) > 1e-12 * std::max(1.0, grid.t_final))
    throw std::invalid_argument("Pulse::resampled: durations differ");
  Pulse out{target, std::vector<double>(target.n_nodes())};
  for (int k = 0; k < target.n_nodes(); ++k)
    out.values[k] = value_at(target.node_time(k));
  return out;
}

Pulse Pulse::time_reversed() const {
  Pulse out = *this;
  std::reverse(out.values.begin(), out.values.end());
  return out;
}

Pulse Pulse::rescaled_to(const TimeGrid& target) const {
  Pulse out{target, std::vector<double>(target.n_nodes())};
  for (int k = 0; k < target.n_nodes(); ++k) {
    const double frac_t = target.node_time(k) / target.t_final;
    out.values[k] = value_at(frac_t * grid.t_final);
  }
  return out;
}

SpectralPropagator::SpectralPropagator(const SingleExcHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.dense());
  evals_ = solver.eigenvalues();
  evecs_ = solver.eigenvectors();
  const int n = h.n_sites();
  edge_weights_ = (evecs_.row(0).array() * evecs_.row(n - 1).array()).matrix();
}

StateVector SpectralPropagator::evolve(const StateVector& psi0, double t) const {
  if (psi0.size() != evecs_.rows())
    throw std::invalid_argument("SpectralPropagator: dimension mismatch");
  StateVector modal = evecs_.transpose() * psi0;
  for (int k = 0; k < modal.size(); ++k)
    modal(k) *= std::exp(cd(0.0, -evals_(k) * t));
  return evecs_ * modal;
}

double SpectralPropagator::transfer_probability(double t) const {
  cd amp(0.0, 0.0);
  for (int k = 0; k < evals_.size(); ++k)
    amp += edge_weights_(k) * std::exp(cd(0.0, -evals_(k) * t));
  return std::norm(amp);
}

StateVector evolve_eigen(const SingleExcHamiltonian& h, const StateVector& psi0,
                         double t) {
  if (psi0.size() != h.n_sites())
    throw std::invalid_argument("evolve_eigen: dimension mismatch");
  return SpectralPropagator(h).evolve(psi0, t);
}

double target_population(const StateVector& psi) {
  return std::norm(psi(psi.size() - 1));
}

Trajectory evolve_controlled(const SingleExcHamiltonian& h0, const Pulse* left,
                             const Pulse* right, const StateVector& psi0,
                             const TimeGrid& grid) {
  check_controlled_inputs(h0, left, right, psi0, grid);
  const double h = grid.dt();
  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.n_nodes());
  traj.target_population_series.reserve(grid.n_nodes());
  traj.norm_error.reserve(grid.n_nodes());

  StateVector psi = psi0;
  Rk4Workspace w;
  w.resize(h0.n_sites());
  auto record = [&](const StateVector& s) {
    traj.states.push_back(s);
    traj.target_population_series.push_back(target_population(s));
    traj.norm_error.push_back(std::abs(s.norm() - 1.0));
  };
  record(psi);
  for (int k = 0; k < grid.n_steps; ++k) {
    const double f0 = node_value(left, k), f1 = node_value(left, k + 1);
    const double g0 = node_value(right, k), g1 = node_value(right, k + 1);
    rk4_step(h0, h, f0, 0.5 * (f0 + f1), f1, g0, 0.5 * (g0 + g1), g1, psi, w);
    record(psi);
  }
  if (!psi.allFinite())
    throw NumericalError("evolve_controlled: non-finite state");
  return traj;
}

StateVector evolve_controlled_final(const SingleExcHamiltonian& h0,
                                    const Pulse* left, const Pulse* right,
                                    const StateVector& psi0,
                                    const TimeGrid& grid) {
  check_controlled_inputs(h0, left, right, psi0, grid);
  const double h = grid.dt();
  StateVector psi = psi0;
  Rk4Workspace w;
  w.resize(h0.n_sites());
  for (int k = 0; k < grid.n_steps; ++k) {
    const double f0 = node_value(left, k), f1 = node_value(left, k + 1);
    const double g0 = node_value(right, k), g1 = node_value(right, k + 1);
    rk4_step(h0, h, f0, 0.5 * (f0 + f1), f1, g0, 0.5 * (g0 + g1), g1, psi, w);
  }
  if (!psi.allFinite())
    throw NumericalError("evolve_controlled_final: non-finite state");
  return psi;
}

std::vector<StateVector> evolve_backward_nodes(const SingleExcHamiltonian& h0,
                                               const Pulse* left,
                                               const Pulse* right,
                                               const StateVector& psi_final,
                                               const TimeGrid& grid) {
  grid.validate();
  if (psi_final.size() != h0.n_sites())
    throw std::invalid_argument("evolve_backward_nodes: dimension mismatch");
  if (left && !(left->grid == grid))
    throw std::invalid_argument("evolve_backward_nodes: left pulse grid mismatch");
  if (right && !(right->grid == grid))
    throw std::invalid_argument("evolve_backward_nodes: right pulse grid mismatch");

  const double h = -grid.dt();
  std::vector<StateVector> nodes(grid.n_nodes());
  StateVector psi = psi_final;
  Rk4Workspace w;
  w.resize(h0.n_sites());
  nodes[grid.n_steps] = psi;
  for (int k = grid.n_steps; k > 0; --k) {
    const double f0 = node_value(left, k), f1 = node_value(left, k - 1);
    const double g0 = node_value(right, k), g1 = node_value(right, k - 1);
    rk4_step(h0, h, f0, 0.5 * (f0 + f1), f1, g0, 0.5 * (g0 + g1), g1, psi, w);
    nodes[k - 1] = psi;
  }
  if (!psi.allFinite())
    throw NumericalError("evolve_backward_nodes: non-finite state");
  return nodes;
}

PeakResult free_peak(const ChainSpec& spec, double t_max, double coarse_dt) {
  spec.validate();
  if (t_max <= 0.0) throw std::invalid_argument("free_peak: t_max must be > 0");
  if (coarse_dt <= 0.0)
    throw std::invalid_argument("free_peak: coarse_dt must be > 0");

  const SpectralPropagator prop(build_hamiltonian(couplings_from_spec(spec)));
  const int n_scan = static_cast<int>(std::floor(t_max / coarse_dt)) + 1;
  double best_t = 0.0, best_p = prop.transfer_probability(0.0);
  for (int k = 1; k < n_scan; ++k) {
    const double t = std::min(k * coarse_dt, t_max);
    const double p = prop.transfer_probability(t);
    if (p > best_p) {
      best_p = p;
      best_t = t;
    }
  }
  const double lo = std::max(0.0, best_t - coarse_dt);
  const double hi = std::min(t_max, best_t + coarse_dt);
  const double t_peak = golden_section_max(
      [&](double t) { return prop.transfer_probability(t); }, lo, hi,
      kPeakTimeResolution);
  PeakResult r;
  r.t_peak = t_peak;
  r.p_peak = prop.transfer_probability(t_peak);
  r.at_window_edge = t_peak > t_max - coarse_dt;
  return r;
}

AlphaChoice optimal_alpha(int n_sites, const std::vector<double>& alpha_grid,
                          double t_max) {
  if (alpha_grid.empty())
    throw std::invalid_argument("optimal_alpha: empty alpha grid");
  AlphaChoice best;
  bool have = false;
  for (double a : alpha_grid) {
    ChainSpec spec{n_sites, a, 1.0};
    const PeakResult pk = free_peak(spec, t_max);
    if (!have || pk.p_peak > best.p_peak + kAlphaTieEps) {
      best = AlphaChoice{a, pk.t_peak, pk.p_peak};
      have = true;
    }
  }
  return best;
}

}  // namespace xxchain
