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

#ifndef XXCHAIN_CLI_ARTIFACTS_HPP
#define XXCHAIN_CLI_ARTIFACTS_HPP

#include <filesystem>
#include <string>
#include <utility>

#include <json.hpp>

#include "xxchain/experiments.hpp"
#include "xxchain/oct.hpp"
#include "xxchain/propagate.hpp"

namespace xxchain {
namespace cli {

// Shortest round-trip decimal representation; locale-independent.
std::string format_double(double v);

// pulses.csv: t,F,G at the pulse grid nodes.
void write_pulses_csv(const std::filesystem::path& path, const Pulse& left,
                      const Pulse& right);

// trajectory.csv: t,P_target,norm_error at the trajectory nodes.
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& traj);

// convergence.csv: iteration,J1,J2,J.
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<oct::FunctionalValue>& history);

// <axis>,<columns...>[,seed]
void write_sweep_csv(const std::filesystem::path& path,
                     const experiments::SweepTable& table);

// disorder_sweep.csv: A,mean,std_error,m,seed.
void write_disorder_csv(const std::filesystem::path& path,
                        const std::vector<experiments::DisorderStats>& stats);

// Reads a pulses.csv back into a pair of pulses (used by warm starts).
std::pair<Pulse, Pulse> read_pulses_csv(const std::filesystem::path& path);

// FNV-1a digest of the canonical config dump, as 16 hex digits.
std::string config_digest(const nlohmann::json& config);

void write_manifest(const std::filesystem::path& path,
                    const nlohmann::json& manifest);

}  // namespace cli
}  // namespace xxchain

#endif  // XXCHAIN_CLI_ARTIFACTS_HPP
