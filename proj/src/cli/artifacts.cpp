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

#include "cli/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli/run_config.hpp"

namespace xxchain {
namespace cli {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: stable line endings
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_pulses_csv(const std::filesystem::path& path, const Pulse& left,
                      const Pulse& right) {
  auto out = open_out(path);
  out << "t,F,G\n";
  for (int k = 0; k < left.grid.n_nodes(); ++k) {
    out << format_double(left.grid.node_time(k)) << ','
        << format_double(left.values[k]) << ','
        << format_double(right.values[k]) << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,P_target,norm_error\n";
  for (int k = 0; k < traj.grid.n_nodes(); ++k) {
    out << format_double(traj.grid.node_time(k)) << ','
        << format_double(traj.target_population_series[k]) << ','
        << format_double(traj.norm_error[k]) << '\n';
  }
}

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<oct::FunctionalValue>& history) {
  auto out = open_out(path);
  out << "iteration,J1,J2,J\n";
  for (std::size_t k = 0; k < history.size(); ++k) {
    out << k << ',' << format_double(history[k].j1) << ','
        << format_double(history[k].j2) << ',' << format_double(history[k].j)
        << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& path,
                     const experiments::SweepTable& table) {
  auto out = open_out(path);
  out << table.axis;
  for (const auto& c : table.columns) out << ',' << c;
  const bool with_seed =
      !table.seeds.empty() &&
      std::any_of(table.seeds.begin(), table.seeds.end(),
                  [](std::uint64_t s) { return s != 0; });
  if (with_seed) out << ",seed";
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << format_double(table.axis_values[r]);
    for (double v : table.rows[r]) out << ',' << format_double(v);
    if (with_seed) out << ',' << table.seeds[r];
    out << '\n';
  }
}

void write_disorder_csv(const std::filesystem::path& path,
                        const std::vector<experiments::DisorderStats>& stats) {
  auto out = open_out(path);
  out << "A,mean,std_error,m,seed\n";
  for (const auto& s : stats) {
    out << format_double(s.amplitude) << ',' << format_double(s.mean) << ','
        << format_double(s.std_error) << ',' << s.realizations << ',' << s.seed
        << '\n';
  }
}

std::pair<Pulse, Pulse> read_pulses_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pulses file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,F,G", 0) != 0)
    throw ConfigError("pulses file " + path.string() + ": expected header t,F,G");
  std::vector<double> ts, fs, gs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double vals[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(row, cell, ','))
        throw ConfigError("pulses file " + path.string() + ": short row");
      vals[c] = std::stod(cell);
    }
    ts.push_back(vals[0]);
    fs.push_back(vals[1]);
    gs.push_back(vals[2]);
  }
  if (ts.size() < 2)
    throw ConfigError("pulses file " + path.string() + ": need at least 2 rows");
  const TimeGrid grid{ts.back(), static_cast<int>(ts.size()) - 1};
  grid.validate();
  return {Pulse{grid, fs}, Pulse{grid, gs}};
}

std::string config_digest(const nlohmann::json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

void write_manifest(const std::filesystem::path& path,
                    const nlohmann::json& manifest) {
  auto out = open_out(path);
  out << manifest.dump(2) << '\n';
}

}  // namespace cli
}  // namespace xxchain
