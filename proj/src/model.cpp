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

#include "xxchain/model.hpp"

#include <string>

#include "xxchain/rng.hpp"

namespace xxchain {

void ChainSpec::validate() const {
  if (n_sites < 2)
    throw std::invalid_argument("ChainSpec: n_sites must be >= 2, got " +
                                std::to_string(n_sites));
  if (alpha < 0.0)
    throw std::invalid_argument("ChainSpec: alpha must be >= 0");
  if (bulk_coupling < 0.0)
    throw std::invalid_argument("ChainSpec: bulk_coupling must be >= 0");
}

Eigen::VectorXd couplings_from_spec(const ChainSpec& spec) {
  spec.validate();
  const int nb = spec.n_sites - 1;
  Eigen::VectorXd j = Eigen::VectorXd::Constant(nb, spec.bulk_coupling);
  j(0) = spec.alpha;
  j(nb - 1) = spec.alpha;
  return j;
}

DisorderRealization sample_disorder(int n_couplings, double amplitude,
                                    std::uint64_t seed) {
  if (n_couplings < 1)
    throw std::invalid_argument("sample_disorder: need at least one coupling");
  if (amplitude < 0.0)
    throw std::invalid_argument("sample_disorder: amplitude must be >= 0");
  DisorderRealization r;
  r.amplitude = amplitude;
  r.seed = seed;
  r.deltas.resize(n_couplings);
  std::mt19937_64 eng(seed);
  for (int i = 0; i < n_couplings; ++i)
    r.deltas(i) = amplitude * uniform_symmetric(eng);
  return r;
}

Eigen::VectorXd apply_disorder(const Eigen::VectorXd& couplings,
                               const DisorderRealization& realization) {
  if (couplings.size() != realization.deltas.size())
    throw std::invalid_argument("apply_disorder: length mismatch");
  return couplings.cwiseProduct(Eigen::VectorXd::Ones(couplings.size()) +
                                realization.deltas);
}

SingleExcHamiltonian::SingleExcHamiltonian(Eigen::VectorXd off_diagonal)
    : off_diagonal_(std::move(off_diagonal)) {
  if (off_diagonal_.size() < 1)
    throw std::invalid_argument("SingleExcHamiltonian: empty coupling vector");
}

Eigen::MatrixXd SingleExcHamiltonian::dense() const {
  const int n = n_sites();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n - 1; ++i) {
    h(i, i + 1) = off_diagonal_(i);
    h(i + 1, i) = off_diagonal_(i);
  }
  return h;
}

void SingleExcHamiltonian::apply(const StateVector& psi, StateVector& out) const {
  apply_controlled(0.0, 0.0, psi, out);
}

void SingleExcHamiltonian::apply_controlled(double f, double g,
                                            const StateVector& psi,
                                            StateVector& out) const {
  const int nb = static_cast<int>(off_diagonal_.size());
  out.setZero(nb + 1);
  for (int i = 0; i < nb; ++i) {
    double h = off_diagonal_(i);
    if (i == 0) h -= f;        // -hL F adds -F on the first bond
    if (i == nb - 1) h -= g;   // -hR G adds -G on the last bond
    out(i) += h * psi(i + 1);
    out(i + 1) += h * psi(i);
  }
}

SingleExcHamiltonian build_hamiltonian(const Eigen::VectorXd& couplings) {
  if (couplings.size() < 1)
    throw std::invalid_argument("build_hamiltonian: empty coupling vector");
  return SingleExcHamiltonian(-couplings);
}

double ControlOperator::imag_matrix_element(const StateVector& chi,
                                            const StateVector& psi) const {
  const int b = bond();
  const std::complex<double> me =
      std::conj(chi(b)) * psi(b + 1) + std::conj(chi(b + 1)) * psi(b);
  return me.imag();
}

ControlOperator control_operator(Side side, int n_sites) {
  if (n_sites < 2)
    throw std::invalid_argument("control_operator: n_sites must be >= 2");
  return ControlOperator{side, n_sites};
}

StateVector site_state(int n_sites, int site_index) {
  if (site_index < 0 || site_index >= n_sites)
    throw std::invalid_argument("site_state: index out of range");
  StateVector psi = StateVector::Zero(n_sites);
  psi(site_index) = 1.0;
  return psi;
}

}  // namespace xxchain
