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

#ifndef XXCHAIN_CLI_RUN_CONFIG_HPP
#define XXCHAIN_CLI_RUN_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "xxchain/oct.hpp"

namespace xxchain {
namespace cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  FreeEvolve,
  Optimize,
  TimeSweep,
  AlphaSweep,
  DisorderSweep,
  LengthScaling,
};

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

// Flat, file-serializable run configuration. String-typed fields keep the
// "auto"/"peak"/"n" spellings so a manifest round-trips exactly.
struct RunConfig {
  Experiment experiment = Experiment::FreeEvolve;

  int n = 10;                      // chain length
  std::string alpha = "auto";      // boundary coupling or "auto"
  std::string t = "peak";          // operation time: number, "peak" or "n"
  std::string actuators = "left";  // "left" | "both"

  double alpha_l = 0.05;
  double alpha_r = 0.05;
  std::string guess = "constant:0.5";
  double eta = 0.5;
  double tol = 1e-8;
  int max_iters = 5000;

  double dt = 0.0;         // 0 -> min(0.01, T/2000)
  double coarse_dt = 0.05;
  double t_max = 0.0;      // free-peak window; 0 -> 4N (1.5N when resolving alpha)

  std::string amplitudes = "0,0.01,0.05,0.1,0.2,0.5";
  int m = 2000;
  std::uint64_t seed = 12345;
  std::string base = "oct";        // disorder-sweep baseline: "oct" | "free"
  std::string eval = "fixed-t";    // disorder evaluation: "fixed-t" | "peak-window"
  std::string mode = "free";       // alpha-sweep mode: "free" | "left" | "both"

  std::string alpha_grid = "0.05:0.05:1.0";
  std::string t_grid = "0.4:0.1:1.5";  // in units of N when normalized
  bool normalized_t_grid = true;
  std::string n_grid = "10,15,20,25,30,35,40";

  std::string out;  // output directory; empty -> runs/<experiment>
  int threads = 0;  // 0 -> hardware concurrency
};

// "a,b,c" or "lo:step:hi" (inclusive, fuzzed endpoint).
std::vector<double> parse_number_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

// Guess spellings: zero | constant:C | random:SEED:AMP | mono:AMP:OMEGA |
// two:A1:W1:A2:W2 | warm:<pulses.csv>.
oct::InitialGuess parse_guess(const std::string& text);

}  // namespace cli
}  // namespace xxchain

#endif  // XXCHAIN_CLI_RUN_CONFIG_HPP
