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

#ifndef XXCHAIN_PROPAGATE_HPP
#define XXCHAIN_PROPAGATE_HPP

#include <vector>

#include "xxchain/model.hpp"

namespace xxchain {

// Uniform time grid on [0, t_final] with n_steps intervals.
struct TimeGrid {
  double t_final = 1.0;
  int n_steps = 1;

  // Default step rule: dt = min(0.01, T/2000).
  static TimeGrid with_duration(double t_final);
  // Same rule with an upper bound on dt (used for strongly disordered chains).
  static TimeGrid with_duration_max_dt(double t_final, double max_dt);

  double dt() const { return t_final / n_steps; }
  double node_time(int k) const { return t_final * k / n_steps; }
  int n_nodes() const { return n_steps + 1; }

  bool operator==(const TimeGrid&) const = default;

  void validate() const;
};

// Sampled control function; linear interpolation between grid nodes.
struct Pulse {
  TimeGrid grid;
  std::vector<double> values;  // n_steps + 1 samples at the nodes

  static Pulse zero(const TimeGrid& grid);
  static Pulse constant(const TimeGrid& grid, double c);

  double value_at(double t) const;

  // Integral of F^2 over [0, T], trapezoidal rule on the samples.
  double fluence() const;

  // Node-wise resampling (linear interpolation) onto another grid of the
  // same duration.
  Pulse resampled(const TimeGrid& target) const;

  // F(T - t) on the same grid.
  Pulse time_reversed() const;

  // Stretches the pulse to the target grid's duration: the new sample at
  // normalized time t/T' equals the old value at the same normalized time.
  Pulse rescaled_to(const TimeGrid& target) const;

  void validate() const;
};

// Stored states at every grid node, plus the per-node target-site population
// and norm deviation.
struct Trajectory {
  TimeGrid grid;
  std::vector<StateVector> states;
  std::vector<double> target_population_series;
  std::vector<double> norm_error;  // | ||psi|| - 1 | per node

  const StateVector& initial_state() const { return states.front(); }
  const StateVector& final_state() const { return states.back(); }
};

// Exact propagator from the full eigendecomposition of a (time-independent)
// single-excitation Hamiltonian. Serves as the accuracy oracle for the RK4
// integrator and as the fast path for free-evolution scans.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const SingleExcHamiltonian& h);

  StateVector evolve(const StateVector& psi0, double t) const;

  // |<N| e^{-iHt} |1>|^2 without forming the state.
  double transfer_probability(double t) const;

  const Eigen::VectorXd& eigenvalues() const { return evals_; }

 private:
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
  Eigen::VectorXd edge_weights_;  // v_k(1) * v_k(N)
};

// e^{-iHt} psi0 via full eigendecomposition; norm preserved to round-off.
StateVector evolve_eigen(const SingleExcHamiltonian& h, const StateVector& psi0,
                         double t);

// P_N = |c_N|^2.
double target_population(const StateVector& psi);

// Classic fixed-step RK4 for i dPsi/dt = [H0 - hL F(t) - hR G(t)] Psi.
// Null pulses are treated as identically zero. Pulses must live on `grid`.
Trajectory evolve_controlled(const SingleExcHamiltonian& h0, const Pulse* left,
                             const Pulse* right, const StateVector& psi0,
                             const TimeGrid& grid);

// Same integration without storing intermediate states.
StateVector evolve_controlled_final(const SingleExcHamiltonian& h0,
                                    const Pulse* left, const Pulse* right,
                                    const StateVector& psi0,
                                    const TimeGrid& grid);

// Integrates the same equation from t = T down to t = 0 (used for the
// backward costate sweep). Returns states at all nodes, index k <-> time t_k.
std::vector<StateVector> evolve_backward_nodes(const SingleExcHamiltonian& h0,
                                               const Pulse* left,
                                               const Pulse* right,
                                               const StateVector& psi_final,
                                               const TimeGrid& grid);

struct PeakResult {
  double t_peak = 0.0;
  double p_peak = 0.0;
  bool at_window_edge = false;  // the scan maximum sits at the window end
};

// First global maximum of P_N(t) on [0, t_max]: coarse scan with step
// coarse_dt, then golden-section refinement to time resolution 1e-4.
PeakResult free_peak(const ChainSpec& spec, double t_max,
                     double coarse_dt = 0.05);

struct AlphaChoice {
  double alpha = 0.0;
  double t_peak = 0.0;
  double p_peak = 0.0;
};

// Grid maximizer of p_peak over alpha; ties (within 1e-7) break toward the
// smaller alpha.
AlphaChoice optimal_alpha(int n_sites, const std::vector<double>& alpha_grid,
                          double t_max);

}  // namespace xxchain

#endif  // XXCHAIN_PROPAGATE_HPP
