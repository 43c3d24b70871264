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

#include "cli/app.hpp"

#include <memory>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/runner.hpp"

namespace xxchain {
namespace cli {

namespace {

// Accepts either the flat key=value format or a manifest.json produced by a
// previous run (its "config" object is applied), so manifests round-trip as
// config files.
class ManifestOrIniConfig : public CLI::ConfigBase {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    char first = 0;
    while (input.get(first) && std::isspace(static_cast<unsigned char>(first))) {
    }
    input.unget();
    if (first != '{') return CLI::ConfigBase::from_config(input);

    nlohmann::json doc = nlohmann::json::parse(input);
    std::vector<CLI::ConfigItem> items;
    const nlohmann::json& config = doc.contains("config") ? doc["config"] : doc;
    if (doc.contains("experiment")) {
      CLI::ConfigItem item;
      item.name = "experiment";
      item.inputs = {doc["experiment"].get<std::string>()};
      items.push_back(item);
    }
    for (const auto& [key, value] : config.items()) {
      CLI::ConfigItem item;
      item.name = key;
      item.inputs = {value.is_string() ? value.get<std::string>() : value.dump()};
      items.push_back(item);
    }
    return items;
  }
};

// All options live on the top-level app: CLI11 resolves config files only
// there, and a single flat option namespace is what lets a manifest "config"
// object round-trip regardless of the subcommand. Subcommands are bare
// experiment selectors with fallthrough.
void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& experiment_tag) {
  cmd->option_defaults()->always_capture_default();

  cmd->add_option("--n", cfg.n, "Chain length N (>= 2)");
  cmd->add_option("--alpha", cfg.alpha, "Boundary coupling, or 'auto'");
  cmd->add_option("--t", cfg.t, "Operation time: number, 'peak' or 'n'");
  cmd->add_option("--actuators", cfg.actuators, "'left' or 'both'");
  cmd->add_option("--alpha-l", cfg.alpha_l, "Left fluence penalty weight");
  cmd->add_option("--alpha-r", cfg.alpha_r, "Right fluence penalty weight");
  cmd->add_option("--guess", cfg.guess,
                  "Initial pulse: zero | constant:C | random:SEED:AMP | "
                  "mono:AMP:OMEGA | two:A1:W1:A2:W2 | warm:pulses.csv");
  cmd->add_option("--eta", cfg.eta, "Maximum pulse-update mixing in (0,1]");
  cmd->add_option("--tol", cfg.tol, "Convergence threshold on |dJ|");
  cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap");
  cmd->add_option("--dt", cfg.dt, "Integrator step (0 = min(0.01, T/2000))");
  cmd->add_option("--coarse-dt", cfg.coarse_dt, "Peak-scan coarse step");
  cmd->add_option("--t-max", cfg.t_max, "Peak-scan window (0 = default)");
  cmd->add_option("--amplitudes", cfg.amplitudes,
                  "Disorder amplitudes: list a,b,c or range lo:step:hi");
  cmd->add_option("--m", cfg.m, "Disorder realizations per amplitude");
  cmd->add_option("--seed", cfg.seed, "Master seed");
  cmd->add_option("--base", cfg.base, "Disorder baseline: 'oct' or 'free'");
  cmd->add_option("--eval", cfg.eval,
                  "Disorder evaluation: 'fixed-t' or 'peak-window'");
  cmd->add_option("--mode", cfg.mode, "Alpha-sweep mode: free | left | both");
  cmd->add_option("--alpha-grid", cfg.alpha_grid, "Alpha sweep grid");
  cmd->add_option("--t-grid", cfg.t_grid, "Time sweep grid");
  cmd->add_option("--normalized-t-grid", cfg.normalized_t_grid,
                  "Interpret t-grid in units of N");
  cmd->add_option("--n-grid", cfg.n_grid, "Chain-length grid");
  cmd->add_option("--out", cfg.out, "Output directory");
  cmd->add_option("--threads", cfg.threads, "Worker threads (0 = hardware)");
  // Accepted from config files so a manifest can assert what it was for.
  cmd->add_option("--experiment", experiment_tag)->group("");

  cmd->set_config("--config", "",
                  "Config file: flat key=value lines or a previous run's "
                  "manifest.json");
  cmd->config_formatter(std::make_shared<ManifestOrIniConfig>());
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Optimal-control pulse synthesis and evaluation for "
               "boundary-controlled XX spin chains"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string experiment_tag;
  bool do_validate = false;

  add_common_options(&app, cfg, experiment_tag);

  struct SubcommandSpec {
    Experiment kind;
    const char* description;
  };
  const std::vector<SubcommandSpec> experiments = {
      {Experiment::FreeEvolve, "Free-evolution transfer peak"},
      {Experiment::Optimize, "Optimize control pulses for one run"},
      {Experiment::TimeSweep, "Yield and fluence vs operation time"},
      {Experiment::AlphaSweep, "Yield vs boundary coupling"},
      {Experiment::DisorderSweep, "Disorder-averaged yield vs amplitude"},
      {Experiment::LengthScaling, "Two-actuator scaling with chain length"},
  };
  for (const auto& sub : experiments) {
    CLI::App* cmd = app.add_subcommand(experiment_name(sub.kind), sub.description);
    cmd->fallthrough();
    cmd->callback([&cfg, kind = sub.kind] { cfg.experiment = kind; });
  }
  CLI::App* val = app.add_subcommand(
      "validate", "Report derived quantities and warnings without running");
  val->fallthrough();
  val->add_option("--for", experiment_tag, "Experiment the config is meant for");
  val->callback([&do_validate] { do_validate = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (do_validate) {
      if (!experiment_tag.empty())
        cfg.experiment = experiment_from_name(experiment_tag);
      validate(cfg, out);
      return 0;
    }
    if (!experiment_tag.empty() &&
        experiment_tag != experiment_name(cfg.experiment))
      throw ConfigError("config file was written for '" + experiment_tag +
                        "' but the '" + experiment_name(cfg.experiment) +
                        "' subcommand was invoked");
    run(cfg, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cli
}  // namespace xxchain
