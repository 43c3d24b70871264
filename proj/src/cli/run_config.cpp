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

#include "cli/run_config.hpp"

#include <cmath>
#include <sstream>

#include "cli/artifacts.hpp"

namespace xxchain {
namespace cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "' in " + what);
  }
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::FreeEvolve: return "free-evolve";
    case Experiment::Optimize: return "optimize";
    case Experiment::TimeSweep: return "time-sweep";
    case Experiment::AlphaSweep: return "alpha-sweep";
    case Experiment::DisorderSweep: return "disorder-sweep";
    case Experiment::LengthScaling: return "length-scaling";
  }
  return "unknown";
}

Experiment experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::FreeEvolve, Experiment::Optimize,
                       Experiment::TimeSweep, Experiment::AlphaSweep,
                       Experiment::DisorderSweep, Experiment::LengthScaling})
    if (experiment_name(e) == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3)
      throw ConfigError("range '" + text + "' must be lo:step:hi");
    const double lo = to_double(parts[0], text);
    const double step = to_double(parts[1], text);
    const double hi = to_double(parts[2], text);
    if (step <= 0.0) throw ConfigError("range '" + text + "': step must be > 0");
    for (int k = 0;; ++k) {
      double v = lo + k * step;
      if (v > hi + 0.5 * step) break;
      v = std::round(v * 1e10) / 1e10;  // kill accumulation drift in the axis
      out.push_back(std::min(v, hi));
    }
    return out;
  }
  for (const auto& item : split(text, ','))
    if (!item.empty()) out.push_back(to_double(item, text));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_number_list(text)) {
    const int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 1e-9)
      throw ConfigError("expected integers in '" + text + "'");
    out.push_back(i);
  }
  return out;
}

oct::InitialGuess parse_guess(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string& kind = parts.front();
  auto want = [&](std::size_t n) {
    if (parts.size() != n)
      throw ConfigError("guess '" + text + "': wrong number of fields");
  };
  if (kind == "zero") {
    want(1);
    return oct::ZeroGuess{};
  }
  if (kind == "constant") {
    want(2);
    return oct::ConstantGuess{to_double(parts[1], text)};
  }
  if (kind == "random") {
    want(3);
    return oct::RandomGuess{
        static_cast<std::uint64_t>(std::stoull(parts[1])),
        to_double(parts[2], text)};
  }
  if (kind == "mono") {
    want(3);
    return oct::MonochromaticGuess{to_double(parts[1], text),
                                   to_double(parts[2], text)};
  }
  if (kind == "two") {
    want(5);
    return oct::TwoToneGuess{to_double(parts[1], text), to_double(parts[2], text),
                             to_double(parts[3], text), to_double(parts[4], text)};
  }
  if (kind == "warm") {
    if (parts.size() < 2) throw ConfigError("guess 'warm' needs a pulses.csv path");
    // The path may contain ':' on exotic filesystems; rejoin.
    std::string path = parts[1];
    for (std::size_t k = 2; k < parts.size(); ++k) path += ":" + parts[k];
    auto [left, right] = read_pulses_csv(path);
    return oct::WarmStart{std::move(left), std::move(right)};
  }
  throw ConfigError("unknown guess kind '" + kind + "'");
}

}  // namespace cli
}  // namespace xxchain
