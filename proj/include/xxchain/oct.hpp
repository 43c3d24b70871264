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

#ifndef XXCHAIN_OCT_HPP
#define XXCHAIN_OCT_HPP

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "xxchain/model.hpp"
#include "xxchain/propagate.hpp"

namespace xxchain {
namespace oct {

enum class Actuators { LeftOnly, Both };

// Initial pulse families. Random uses node-wise uniform samples in
// [-amplitude, amplitude); Monochromatic is amplitude*sin(omega t); TwoTone
// superposes two such harmonics (frequencies are caller-supplied).
struct ZeroGuess {};
struct ConstantGuess {
  double value = 0.5;
};
struct RandomGuess {
  std::uint64_t seed = 0;
  double amplitude = 0.5;
};
struct MonochromaticGuess {
  double amplitude = 0.5;
  double omega = 1.0;
};
struct TwoToneGuess {
  double amplitude_a = 0.5;
  double omega_a = 1.0;
  double amplitude_b = 0.5;
  double omega_b = 2.0;
};
// Pulses from a previous result, stretched to this problem's duration.
struct WarmStart {
  Pulse left;
  Pulse right;
};

using InitialGuess = std::variant<ZeroGuess, ConstantGuess, RandomGuess,
                                  MonochromaticGuess, TwoToneGuess, WarmStart>;

// One pulse-optimization run: drive |1> to |N> in the prescribed time T.
struct OCTProblem {
  ChainSpec spec;
  TimeGrid grid;
  Actuators actuators = Actuators::LeftOnly;
  double alpha_L = 0.05;  // fluence penalty weight, left actuator
  double alpha_R = 0.05;  // fluence penalty weight, right actuator
  InitialGuess guess = ConstantGuess{};
  int max_iters = 5000;
  double tol = 1e-8;     // convergence threshold on |dJ|
  double mixing = 0.5;   // maximum pulse-update damping eta

  void validate() const;
};

struct FunctionalValue {
  double j1 = 0.0;  // |<Psi(T)|phi_F>|^2
  double j2 = 0.0;  // -alpha_L * fluence(F) - alpha_R * fluence(G)
  double j = 0.0;   // j1 + j2
};

struct OCTResult {
  Pulse left;
  Pulse right;              // identically zero for LeftOnly
  double yield = 0.0;       // J1 of the returned (best-J) iterate
  double fluence_left = 0.0;
  double fluence_right = 0.0;
  std::vector<FunctionalValue> j_history;  // one entry per iterate, index 0 = guess
  int iterations = 0;
  bool converged = false;
  int best_iteration = 0;
  double stationarity_defect = 0.0;  // relative L2 self-consistency mismatch
  Trajectory final_trajectory;       // forward evolution under the returned pulses
};

FunctionalValue functional(const Trajectory& traj, const Pulse& left,
                           const Pulse& right, const OCTProblem& problem);

// chi(T) = |phi_F><phi_F|Psi(T)>.
StateVector terminal_costate(const StateVector& psi_final,
                             const StateVector& target);

// One node of the control equation: -(1/penalty) Im<chi| h |psi>.
double pulse_update(const StateVector& chi, const StateVector& psi,
                    const ControlOperator& op, double penalty);

// Forward-backward iteration: propagate Psi forward under the current pulses,
// form chi(T), propagate chi backward under the same H(t), recompute candidate
// pulses at every node, and mix them in with damping eta. The damping
// backtracks (eta halves) whenever a step would decrease J, so J is
// non-decreasing along the accepted history. Returns the best-J iterate.
OCTResult optimize(const OCTProblem& problem);

// Total fluence divided by the operation time.
double reduced_fluence(const OCTResult& result);

// ||G(t) - F(T-t)||_2 / ||F||_2, the mirror-symmetry diagnostic of
// two-actuator pulses.
double symmetry_defect(const Pulse& left, const Pulse& right);

}  // namespace oct
}  // namespace xxchain

#endif  // XXCHAIN_OCT_HPP
