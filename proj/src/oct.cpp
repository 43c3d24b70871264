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

#include "xxchain/oct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "xxchain/rng.hpp"

namespace xxchain {
namespace oct {

namespace {

// Accepting a step only when J does not drop below J_prev - kAcceptSlack keeps
// the iterate history monotone up to round-off.
constexpr double kAcceptSlack = 1e-12;
// Smallest damping tried before the iteration is declared stalled, as a
// fraction of the problem's mixing parameter.
constexpr double kMinMixingFraction = 1.0 / 4096.0;

Pulse synthesize_guess(const InitialGuess& guess, const TimeGrid& grid,
                       int stream) {
  if (std::holds_alternative<ZeroGuess>(guess)) return Pulse::zero(grid);
  if (const auto* c = std::get_if<ConstantGuess>(&guess))
    return Pulse::constant(grid, c->value);
  if (const auto* r = std::get_if<RandomGuess>(&guess)) {
    Pulse p = Pulse::zero(grid);
    std::mt19937_64 eng(derive_seed(r->seed, static_cast<std::uint64_t>(stream)));
    for (auto& v : p.values) v = r->amplitude * uniform_symmetric(eng);
    return p;
  }
  if (const auto* m = std::get_if<MonochromaticGuess>(&guess)) {
    Pulse p = Pulse::zero(grid);
    for (int k = 0; k < grid.n_nodes(); ++k)
      p.values[k] = m->amplitude * std::sin(m->omega * grid.node_time(k));
    return p;
  }
  if (const auto* t = std::get_if<TwoToneGuess>(&guess)) {
    Pulse p = Pulse::zero(grid);
    for (int k = 0; k < grid.n_nodes(); ++k) {
      const double time = grid.node_time(k);
      p.values[k] = t->amplitude_a * std::sin(t->omega_a * time) +
                    t->amplitude_b * std::sin(t->omega_b * time);
    }
    return p;
  }
  const auto& w = std::get<WarmStart>(guess);
  return (stream == 0 ? w.left : w.right).rescaled_to(grid);
}

double trapezoid_sq_norm(const std::vector<double>& v, double dt) {
  double acc = 0.5 * (v.front() * v.front() + v.back() * v.back());
  for (std::size_t k = 1; k + 1 < v.size(); ++k) acc += v[k] * v[k];
  return acc * dt;
}

}  // namespace

void OCTProblem::validate() const {
  spec.validate();
  grid.validate();
  if (alpha_L <= 0.0)
    throw std::invalid_argument("OCTProblem: alpha_L must be > 0");
  if (actuators == Actuators::Both && alpha_R <= 0.0)
    throw std::invalid_argument("OCTProblem: alpha_R must be > 0");
  if (max_iters < 1)
    throw std::invalid_argument("OCTProblem: max_iters must be >= 1");
  if (tol <= 0.0) throw std::invalid_argument("OCTProblem: tol must be > 0");
  if (mixing <= 0.0 || mixing > 1.0)
    throw std::invalid_argument("OCTProblem: mixing must be in (0, 1]");
}

FunctionalValue functional(const Trajectory& traj, const Pulse& left,
                           const Pulse& right, const OCTProblem& problem) {
  if (!(traj.grid == problem.grid) || !(left.grid == problem.grid) ||
      !(right.grid == problem.grid))
    throw std::invalid_argument("functional: grid mismatch");
  FunctionalValue v;
  v.j1 = target_population(traj.final_state());
  v.j2 = -problem.alpha_L * left.fluence();
  if (problem.actuators == Actuators::Both)
    v.j2 -= problem.alpha_R * right.fluence();
  v.j = v.j1 + v.j2;
  return v;
}

StateVector terminal_costate(const StateVector& psi_final,
                             const StateVector& target) {
  const std::complex<double> overlap = target.dot(psi_final);  // <phi_F|Psi(T)>
  return overlap * target;
}

double pulse_update(const StateVector& chi, const StateVector& psi,
                    const ControlOperator& op, double penalty) {
  if (penalty <= 0.0)
    throw std::invalid_argument("pulse_update: penalty must be > 0");
  return -op.imag_matrix_element(chi, psi) / penalty;
}

namespace {

struct Iterate {
  Pulse left;
  Pulse right;
  Trajectory traj;
  FunctionalValue f;
};

void evaluate(const SingleExcHamiltonian& h0, const StateVector& psi0,
              const OCTProblem& problem, Iterate& it) {
  it.traj = evolve_controlled(h0, &it.left,
                              problem.actuators == Actuators::Both ? &it.right
                                                                   : nullptr,
                              psi0, problem.grid);
  it.f = functional(it.traj, it.left, it.right, problem);
  if (!std::isfinite(it.f.j))
    throw NumericalError("oct::optimize: non-finite functional");
}

// Candidate pulses from one backward sweep of the costate under the iterate's
// own field (Eqs. of motion share H(t), so <chi|Psi> stays constant).
void candidate_pulses(const SingleExcHamiltonian& h0, const StateVector& target,
                      const OCTProblem& problem, const Iterate& it,
                      std::vector<double>& left_cand,
                      std::vector<double>& right_cand) {
  const bool both = problem.actuators == Actuators::Both;
  const StateVector chi_final = terminal_costate(it.traj.final_state(), target);
  const std::vector<StateVector> chi = evolve_backward_nodes(
      h0, &it.left, both ? &it.right : nullptr, chi_final, problem.grid);

  const int n = problem.grid.n_nodes();
  const ControlOperator h_left = control_operator(Side::Left, problem.spec.n_sites);
  const ControlOperator h_right =
      control_operator(Side::Right, problem.spec.n_sites);
  left_cand.resize(n);
  right_cand.resize(n);
  for (int k = 0; k < n; ++k) {
    left_cand[k] = pulse_update(chi[k], it.traj.states[k], h_left, problem.alpha_L);
    right_cand[k] =
        both ? pulse_update(chi[k], it.traj.states[k], h_right, problem.alpha_R)
             : 0.0;
  }
}

void mix_into(const std::vector<double>& current, const std::vector<double>& cand,
              double eta, std::vector<double>& out) {
  out.resize(current.size());
  for (std::size_t k = 0; k < current.size(); ++k)
    out[k] = (1.0 - eta) * current[k] + eta * cand[k];
}

}  // namespace

OCTResult optimize(const OCTProblem& problem) {
  problem.validate();
  const bool both = problem.actuators == Actuators::Both;
  const SingleExcHamiltonian h0 =
      build_hamiltonian(couplings_from_spec(problem.spec));
  const StateVector psi0 = first_site_state(problem.spec.n_sites);
  const StateVector target = last_site_state(problem.spec.n_sites);

  Iterate cur;
  cur.left = synthesize_guess(problem.guess, problem.grid, 0);
  cur.right = both ? synthesize_guess(problem.guess, problem.grid, 1)
                   : Pulse::zero(problem.grid);
  evaluate(h0, psi0, problem, cur);

  OCTResult result;
  result.j_history.push_back(cur.f);

  Pulse best_left = cur.left;
  Pulse best_right = cur.right;
  double best_j = cur.f.j;
  int best_iteration = 0;

  std::vector<double> left_cand, right_cand;
  Iterate trial;
  trial.left = cur.left;
  trial.right = cur.right;

  const double min_eta = problem.mixing * kMinMixingFraction;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= problem.max_iters; ++it) {
    candidate_pulses(h0, target, problem, cur, left_cand, right_cand);

    double eta = problem.mixing;
    bool accepted = false;
    while (eta >= min_eta) {
      mix_into(cur.left.values, left_cand, eta, trial.left.values);
      if (both) mix_into(cur.right.values, right_cand, eta, trial.right.values);
      evaluate(h0, psi0, problem, trial);
      if (trial.f.j >= cur.f.j - kAcceptSlack) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // no damping level improves J: stationary

    const double delta_j = trial.f.j - cur.f.j;
    std::swap(cur, trial);
    result.j_history.push_back(cur.f);
    if (cur.f.j > best_j) {
      best_j = cur.f.j;
      best_left = cur.left;
      best_right = cur.right;
      best_iteration = it;
    }
    if (std::abs(delta_j) < problem.tol) {
      converged = true;
      break;
    }
  }

  result.iterations = static_cast<int>(result.j_history.size()) - 1;
  result.converged = converged;
  result.best_iteration = best_iteration;
  result.left = std::move(best_left);
  result.right = std::move(best_right);

  // Re-propagate the returned pulses so yield, trajectory and the
  // self-consistency diagnostic all describe the same iterate.
  Iterate ret;
  ret.left = result.left;
  ret.right = result.right;
  evaluate(h0, psi0, problem, ret);
  result.yield = ret.f.j1;
  result.fluence_left = ret.left.fluence();
  result.fluence_right = both ? ret.right.fluence() : 0.0;

  candidate_pulses(h0, target, problem, ret, left_cand, right_cand);
  const double dt = problem.grid.dt();
  std::vector<double> diff(left_cand.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < diff.size(); ++k)
    diff[k] = result.left.values[k] - left_cand[k];
  num += trapezoid_sq_norm(diff, dt);
  den += trapezoid_sq_norm(result.left.values, dt);
  if (both) {
    for (std::size_t k = 0; k < diff.size(); ++k)
      diff[k] = result.right.values[k] - right_cand[k];
    num += trapezoid_sq_norm(diff, dt);
    den += trapezoid_sq_norm(result.right.values, dt);
  }
  result.stationarity_defect = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  result.final_trajectory = std::move(ret.traj);
  return result;
}

double reduced_fluence(const OCTResult& result) {
  const double t = result.left.grid.t_final;
  return (result.fluence_left + result.fluence_right) / t;
}

double symmetry_defect(const Pulse& left, const Pulse& right) {
  if (!(left.grid == right.grid))
    throw std::invalid_argument("symmetry_defect: grid mismatch");
  const Pulse mirrored = left.time_reversed();
  std::vector<double> diff(right.values.size());
  for (std::size_t k = 0; k < diff.size(); ++k)
    diff[k] = right.values[k] - mirrored.values[k];
  const double dt = left.grid.dt();
  const double num = trapezoid_sq_norm(diff, dt);
  const double den = trapezoid_sq_norm(left.values, dt);
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

}  // namespace oct
}  // namespace xxchain
