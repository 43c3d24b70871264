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

#ifndef XXCHAIN_CLI_RUNNER_HPP
#define XXCHAIN_CLI_RUNNER_HPP

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "cli/run_config.hpp"

namespace xxchain {
namespace cli {

struct RunOutcome {
  std::filesystem::path out_dir;
  nlohmann::json manifest;
};

// Executes the configured experiment and writes its artifact files
// (manifest.json plus the experiment's CSV tables) into the output directory.
// Throws ConfigError for invalid configurations and NumericalError when the
// computation produces non-finite values.
RunOutcome run(const RunConfig& config, std::ostream& log);

// Prints resolved derived quantities and warnings without running anything.
// Returns the number of warnings.
int validate(const RunConfig& config, std::ostream& out);

// Output directory resolution: explicit config value or runs/<experiment>,
// prefixed by $XXCHAIN_OUTPUT_ROOT when the path is relative.
std::filesystem::path resolve_out_dir(const RunConfig& config);

}  // namespace cli
}  // namespace xxchain

#endif  // XXCHAIN_CLI_RUNNER_HPP
