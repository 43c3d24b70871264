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

#ifndef XXCHAIN_MODEL_HPP
#define XXCHAIN_MODEL_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace xxchain {

using StateVector = Eigen::VectorXcd;

// Raised when an iteration or propagation produces non-finite values.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Boundary-controlled XX chain: bulk couplings J, boundary bonds alpha.
// Units: couplings in units of the bulk J, time in 1/J, hbar = 1.
struct ChainSpec {
  int n_sites = 2;
  double alpha = 1.0;
  double bulk_coupling = 1.0;

  void validate() const;
};

// Coupling vector (J_1, ..., J_{N-1}) = (alpha, J, ..., J, alpha).
// N = 2 gives (alpha); N = 3 gives (alpha, alpha).
Eigen::VectorXd couplings_from_spec(const ChainSpec& spec);

// Static multiplicative disorder offsets, delta_i uniform on [-A, A).
struct DisorderRealization {
  Eigen::VectorXd deltas;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
};

// N-1 independent uniform draws in [-A, A); deterministic given the seed.
DisorderRealization sample_disorder(int n_couplings, double amplitude,
                                    std::uint64_t seed);

// J_i -> J_i (1 + delta_i), element-wise. Negative results are kept:
// for A > 1 some couplings legitimately change sign.
Eigen::VectorXd apply_disorder(const Eigen::VectorXd& couplings,
                               const DisorderRealization& realization);

// The chain Hamiltonian restricted to the single-excitation sector:
// real symmetric tridiagonal with zero diagonal and off-diagonal -J_i.
class SingleExcHamiltonian {
 public:
  explicit SingleExcHamiltonian(Eigen::VectorXd off_diagonal);

  int n_sites() const { return static_cast<int>(off_diagonal_.size()) + 1; }
  const Eigen::VectorXd& off_diagonal() const { return off_diagonal_; }

  Eigen::MatrixXd dense() const;

  // out = H psi (out must be sized n_sites).
  void apply(const StateVector& psi, StateVector& out) const;

  // out = [H0 - hL*f - hR*g] psi, i.e. the controlled Hamiltonian with the
  // left/right boundary bonds driven to alpha + f and alpha + g.
  void apply_controlled(double f, double g, const StateVector& psi,
                        StateVector& out) const;

 private:
  Eigen::VectorXd off_diagonal_;
};

SingleExcHamiltonian build_hamiltonian(const Eigen::VectorXd& couplings);

enum class Side { Left, Right };

// Boundary control operator h_L or h_R. In the single-excitation basis it has
// exactly two nonzero entries, value +1, on the controlled bond.
struct ControlOperator {
  Side side = Side::Left;
  int n_sites = 2;

  // 0-based index of the controlled bond: 0 for Left, N-2 for Right.
  int bond() const { return side == Side::Left ? 0 : n_sites - 2; }

  // Im<chi| h |psi> for this operator; the only ingredient of the pulse update.
  double imag_matrix_element(const StateVector& chi, const StateVector& psi) const;
};

ControlOperator control_operator(Side side, int n_sites);

// |site> basis states of the single-excitation sector (0-based site index).
StateVector site_state(int n_sites, int site_index);
inline StateVector first_site_state(int n_sites) { return site_state(n_sites, 0); }
inline StateVector last_site_state(int n_sites) { return site_state(n_sites, n_sites - 1); }

}  // namespace xxchain

#endif  // XXCHAIN_MODEL_HPP
