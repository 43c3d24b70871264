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

#ifndef XXCHAIN_EXPERIMENTS_HPP
#define XXCHAIN_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "xxchain/model.hpp"
#include "xxchain/oct.hpp"
#include "xxchain/propagate.hpp"

namespace xxchain {
namespace experiments {

// ---------------------------------------------------------------------------
// Disorder-averaged transfer studies.
//
// Pulses are never re-optimized per realization: the clean-chain protocol is
// replayed on each disordered Hamiltonian.
// ---------------------------------------------------------------------------

// Free evolution of the excitation, no control.
struct FreeEvolutionBase {
  ChainSpec spec;
};

// Fixed clean-chain control pulses replayed on the disordered chain.
struct PulsedBase {
  ChainSpec spec;
  Pulse left;
  Pulse right;
};

using StudyBase = std::variant<FreeEvolutionBase, PulsedBase>;

// When to read off the target population per realization.
struct AtFixedT {
  double t = 0.0;
};
struct AtPeak {
  double window_lo = 0.0;
  double window_hi = 0.0;
};
using Evaluation = std::variant<AtFixedT, AtPeak>;

struct DisorderStudy {
  StudyBase base;
  std::vector<double> amplitudes;
  int realizations = 2000;
  std::uint64_t master_seed = 0;
  Evaluation evaluation = AtFixedT{};

  void validate() const;
};

struct DisorderStats {
  double amplitude = 0.0;
  double mean = 0.0;       // <P_T> over realizations
  double std_error = 0.0;  // sample standard deviation / sqrt(M)
  int realizations = 0;
  std::uint64_t seed = 0;  // amplitude-level stream seed; row is reproducible from it
};

// Target population of realization m (seed derive_seed(stream_seed, m)).
double disorder_single_realization(const StudyBase& base, const Evaluation& eval,
                                   double amplitude, std::uint64_t realization_seed);

// Mean and standard error over M realizations at one amplitude. Realization m
// uses seed derive_seed(stream_seed, m); the reduction is by realization index,
// so results do not depend on evaluation order (or thread count).
DisorderStats disorder_stats_at(const StudyBase& base, const Evaluation& eval,
                                double amplitude, int realizations,
                                std::uint64_t stream_seed, int threads = 1);

// One DisorderStats per amplitude; amplitude index a uses stream seed
// derive_seed(master_seed, a).
std::vector<DisorderStats> disorder_average(const DisorderStudy& study,
                                            int threads = 1);

// ---------------------------------------------------------------------------
// Sweep tables.
// ---------------------------------------------------------------------------

struct SweepTable {
  std::string axis;                       // name of the swept parameter
  std::vector<std::string> columns;       // value columns, excluding axis/seed
  std::vector<double> axis_values;        // one per row
  std::vector<std::vector<double>> rows;  // aligned with columns
  std::vector<std::uint64_t> seeds;       // per-row seed (empty if not used)
  std::uint64_t master_seed = 0;
  std::string config_digest;
};

enum class SweepMode { Free, OneActuator, TwoActuators };

// Shared OCT settings for sweep drivers. Sweep points try both the configured
// cold guess and a warm start from the neighboring grid point and keep the
// better functional value; fluence weights below 0.02 are reached by
// continuation (converge at 0.02, then re-optimize warm-started while the
// weight is lowered stepwise to alpha_L), since the iteration can stall in
// the zero-pulse stationary point when the penalty is weak.
struct OctSettings {
  double alpha_L = 0.05;
  double alpha_R = 0.05;
  oct::InitialGuess guess = oct::ConstantGuess{};
  int max_iters = 5000;
  double tol = 1e-8;
  double mixing = 0.5;
};

struct DisorderSettings {
  std::vector<double> amplitudes;
  int realizations = 2000;
  std::uint64_t master_seed = 0;
};

// Free-evolution peak or OCT yield as a function of the boundary coupling.
// OCT modes optimize at the given operation time T per grid point. With
// disorder settings present, adds one <P_T> column per amplitude (evaluated
// at the protocol's T; clean T_peak for Free mode).
SweepTable alpha_sweep(int n_sites, const std::vector<double>& alpha_grid,
                       SweepMode mode, double operation_time,
                       const OctSettings& oct_settings = {},
                       const DisorderSettings* disorder = nullptr,
                       double peak_t_max = 0.0,  // 0 -> 4N
                       int threads = 1);

// Yield and reduced fluence versus operation time at fixed N. alpha <= 0
// resolves the boundary coupling via optimal_alpha.
SweepTable time_sweep(int n_sites, const std::vector<double>& t_grid,
                      SweepMode mode, double alpha,
                      const OctSettings& oct_settings = {}, int threads = 1);

// Two-actuator scaling with chain length: per N, resolve alpha and T_peak,
// optimize at T = T_peak (warm-started across the N grid), record the clean
// yield and disorder-averaged yields at the peak time.
SweepTable length_scaling(const std::vector<int>& n_grid,
                          const std::vector<double>& disorder_amplitudes,
                          int realizations, std::uint64_t master_seed,
                          const OctSettings& oct_settings = {}, int threads = 1);

// Boundary coupling used when a sweep must resolve alpha itself: grid
// 0.05..1.0 (step 0.05), ballistic-peak window t_max = 1.5 N.
AlphaChoice resolve_alpha(int n_sites);

// Run F(i) for i in [0, n) on up to `threads` workers; results are collected
// by index, so the reduction is deterministic.
void parallel_for_indexed(int n, int threads, const std::function<void(int)>& f);

}  // namespace experiments
}  // namespace xxchain

#endif  // XXCHAIN_EXPERIMENTS_HPP
