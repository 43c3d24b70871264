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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xxchain/experiments.hpp"
#include "xxchain/rng.hpp"

using namespace xxchain;
using namespace xxchain::experiments;

namespace {

DisorderStudy free_study(int n, std::vector<double> amplitudes, int m,
                         std::uint64_t seed) {
  const ChainSpec spec{n, 0.7, 1.0};
  const PeakResult pk = free_peak(spec, 1.5 * n);
  DisorderStudy study;
  study.base = FreeEvolutionBase{spec};
  study.amplitudes = std::move(amplitudes);
  study.realizations = m;
  study.master_seed = seed;
  study.evaluation = AtFixedT{pk.t_peak};
  return study;
}

}  // namespace

TEST_CASE("disorder_average at A=0 equals the clean value with zero error") {
  const int n = 8;
  const ChainSpec spec{n, 0.7, 1.0};
  const PeakResult pk = free_peak(spec, 1.5 * n);

  DisorderStudy study = free_study(n, {0.0}, 64, 11);
  const std::vector<DisorderStats> stats = disorder_average(study);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].mean == doctest::Approx(pk.p_peak).epsilon(1e-12));
  CHECK(std::abs(stats[0].mean - pk.p_peak) < 1e-10);
  CHECK(stats[0].std_error == 0.0);
  CHECK(stats[0].realizations == 64);
}

TEST_CASE("disorder_average at A=0 with the peak-window evaluation also "
          "reproduces free_peak") {
  const int n = 8;
  const ChainSpec spec{n, 0.7, 1.0};
  const PeakResult pk = free_peak(spec, 1.5 * n);
  DisorderStudy study = free_study(n, {0.0}, 8, 3);
  study.evaluation = AtPeak{0.5 * pk.t_peak, 1.5 * pk.t_peak};
  const std::vector<DisorderStats> stats = disorder_average(study);
  // Two independent peak refinements; both sit within ~1e-9 of the true max.
  CHECK(std::abs(stats[0].mean - pk.p_peak) < 1e-7);
}

TEST_CASE("disorder degrades the mean monotonically up to noise") {
  const std::vector<double> grid = {0.0, 0.05, 0.1, 0.2, 0.5};
  const std::vector<DisorderStats> stats =
      disorder_average(free_study(8, grid, 300, 2026));
  REQUIRE(stats.size() == grid.size());
  for (std::size_t i = 1; i < stats.size(); ++i) {
    const double combined = 3.0 * std::sqrt(stats[i].std_error * stats[i].std_error +
                                            stats[i - 1].std_error * stats[i - 1].std_error);
    CHECK(stats[i].mean <= stats[i - 1].mean + combined);
  }
}

TEST_CASE("thread count does not change disorder statistics") {
  DisorderStudy study = free_study(7, {0.2}, 101, 555);
  const DisorderStats serial =
      disorder_stats_at(study.base, study.evaluation, 0.2, 101,
                        derive_seed(study.master_seed, 0), 1);
  const DisorderStats parallel =
      disorder_stats_at(study.base, study.evaluation, 0.2, 101,
                        derive_seed(study.master_seed, 0), 3);
  CHECK(serial.mean == parallel.mean);  // indexed reduction, bit-exact
  CHECK(serial.std_error == parallel.std_error);
}

TEST_CASE("disorder rows regenerate exactly from their recorded seed") {
  DisorderStudy study = free_study(7, {0.1, 0.3}, 40, 987);
  const std::vector<DisorderStats> stats = disorder_average(study);
  for (const auto& s : stats) {
    const DisorderStats again = disorder_stats_at(
        study.base, study.evaluation, s.amplitude, s.realizations, s.seed);
    CHECK(again.mean == s.mean);
    CHECK(again.std_error == s.std_error);
  }
}

TEST_CASE("pulsed disorder base replays the clean pulses on disordered chains") {
  // A clean-chain protocol evaluated at A=0 must give the clean yield exactly.
  oct::OCTProblem p;
  p.spec = ChainSpec{5, 0.6, 1.0};
  p.grid = TimeGrid{4.0, 400};
  p.actuators = oct::Actuators::Both;
  p.alpha_L = p.alpha_R = 0.05;
  p.max_iters = 200;
  const oct::OCTResult r = oct::optimize(p);

  DisorderStudy study;
  study.base = PulsedBase{p.spec, r.left, r.right};
  study.amplitudes = {0.0, 0.2};
  study.realizations = 50;
  study.master_seed = 77;
  study.evaluation = AtFixedT{4.0};
  const std::vector<DisorderStats> stats = disorder_average(study);
  CHECK(stats[0].mean == doctest::Approx(r.yield).epsilon(1e-7));
  CHECK(stats[0].std_error == 0.0);
  CHECK(stats[1].mean < stats[0].mean);
  CHECK(stats[1].std_error > 0.0);
}

TEST_CASE("peak-window evaluation follows the free flight past the pulse end") {
  // Zero pulses on [0, pi/4]; the excitation of a two-site chain keeps flying
  // afterwards and peaks at t = pi/2 with unit probability.
  const double quarter = std::numbers::pi / 4;
  DisorderStudy study;
  study.base = PulsedBase{ChainSpec{2, 1.0, 1.0},
                          Pulse::zero(TimeGrid{quarter, 200}),
                          Pulse::zero(TimeGrid{quarter, 200})};
  study.amplitudes = {0.0};
  study.realizations = 3;
  study.master_seed = 5;
  study.evaluation = AtPeak{quarter, 3 * quarter};
  const std::vector<DisorderStats> stats = disorder_average(study);
  CHECK(stats[0].mean == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("resolve_alpha lands near the known free-evolution optima") {
  const AlphaChoice a10 = resolve_alpha(10);
  CHECK(a10.alpha == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(a10.p_peak == doctest::Approx(0.978).epsilon(0.005));

  const AlphaChoice a30 = resolve_alpha(30);
  CHECK(a30.alpha == doctest::Approx(0.60).epsilon(1e-12));
  CHECK(a30.t_peak == doctest::Approx(17.96).epsilon(0.01));
}

TEST_CASE("alpha_sweep in free mode reports per-alpha peaks") {
  const SweepTable table =
      alpha_sweep(6, {0.3, 0.6, 0.9}, SweepMode::Free, 0.0);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.axis == "alpha");
  CHECK(table.columns[0] == "yield");
  for (const auto& row : table.rows) {
    CHECK(row[0] > 0.0);
    CHECK(row[0] <= 1.0);
    CHECK(row[1] > 0.0);  // t_peak
    CHECK(row[2] == 0.0);  // no fluence in free mode
  }
}

TEST_CASE("alpha_sweep with disorder: rows regenerate from recorded seeds") {
  DisorderSettings disorder;
  disorder.amplitudes = {0.1};
  disorder.realizations = 30;
  disorder.master_seed = 4242;
  const SweepTable table = alpha_sweep(6, {0.4, 0.8}, SweepMode::Free, 0.0, {},
                                       &disorder);
  REQUIRE(table.rows.size() == 2);
  // yield, t_peak, fluence, window_edge, mean_A0.100
  REQUIRE(table.columns.size() == 5);

  // Row 1: regenerate the disorder column from the stored row seed.
  const ChainSpec spec{6, 0.8, 1.0};
  const PeakResult pk = free_peak(spec, 4.0 * 6);
  const DisorderStats again = disorder_stats_at(
      FreeEvolutionBase{spec}, AtFixedT{pk.t_peak}, 0.1, 30,
      derive_seed(table.seeds[1], 0));
  CHECK(again.mean == table.rows[1][4]);
}

TEST_CASE("time_sweep records yields and reduced fluences per operation time") {
  OctSettings settings;
  settings.alpha_L = 0.1;
  settings.max_iters = 150;
  const SweepTable table =
      time_sweep(4, {2.0, 4.0}, SweepMode::OneActuator, 0.9, settings);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.axis == "t");
  // columns: t_over_n, yield, fluence, reduced_fluence, iterations, converged
  CHECK(table.rows[0][0] == doctest::Approx(0.5));
  CHECK(table.rows[1][0] == doctest::Approx(1.0));
  for (const auto& row : table.rows) {
    CHECK(row[1] >= 0.0);
    CHECK(row[1] <= 1.0);
    CHECK(row[3] == doctest::Approx(row[2] / (row[0] * 4)).epsilon(1e-9));
  }
}

TEST_CASE("two actuators at T = N reach near-perfect transfer") {
  OctSettings settings;
  settings.alpha_L = settings.alpha_R = 0.005;
  const SweepTable table =
      time_sweep(10, {10.0}, SweepMode::TwoActuators, 0.75, settings);
  CHECK(table.rows[0][1] >= 0.995);
}

TEST_CASE("time_sweep below the speed limit cannot beat the free evolution") {
  OctSettings settings;
  settings.max_iters = 300;
  const int n = 8;
  const double t = 0.1 * n;
  const AlphaChoice choice = resolve_alpha(n);
  const SweepTable table =
      time_sweep(n, {t}, SweepMode::OneActuator, choice.alpha, settings);
  const SpectralPropagator prop(
      build_hamiltonian(couplings_from_spec(ChainSpec{n, choice.alpha, 1.0})));
  CHECK(table.rows[0][1] < prop.transfer_probability(t) + 0.05);
}

TEST_CASE("disordered two-actuator yield decays slower with N than the free "
          "evolution") {
  const double amplitude = 0.15;
  const int m = 120;
  OctSettings settings;
  settings.alpha_L = settings.alpha_R = 0.005;
  const std::vector<int> ns = {6, 12};
  const SweepTable table = length_scaling(ns, {amplitude}, m, 99, settings, 2);

  std::vector<double> free_means;
  for (int n : ns) {
    const AlphaChoice choice = resolve_alpha(n);
    DisorderStudy study;
    study.base = FreeEvolutionBase{ChainSpec{n, choice.alpha, 1.0}};
    study.amplitudes = {amplitude};
    study.realizations = m;
    study.master_seed = 99;
    study.evaluation = AtFixedT{choice.t_peak};
    free_means.push_back(disorder_average(study, 2)[0].mean);
  }
  const int mean_col = 7;  // first disorder column
  const double oct_drop = table.rows[0][mean_col] - table.rows[1][mean_col];
  const double free_drop = free_means[0] - free_means[1];
  CHECK(oct_drop < free_drop);
  CHECK(table.rows[1][mean_col] > free_means[1]);
}

TEST_CASE("parallel_for_indexed covers every index exactly once") {
  std::vector<int> hits(103, 0);
  parallel_for_indexed(103, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}
