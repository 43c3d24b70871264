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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli/run_config.hpp"
#include "xxchain/experiments.hpp"
#include "xxchain/model.hpp"
#include "xxchain/oct.hpp"
#include "xxchain/propagate.hpp"

namespace py = pybind11;
using namespace xxchain;

namespace {

oct::Actuators actuators_from_string(const std::string& s) {
  if (s == "left") return oct::Actuators::LeftOnly;
  if (s == "both") return oct::Actuators::Both;
  throw std::invalid_argument("actuators must be 'left' or 'both'");
}

oct::OCTProblem make_problem(int n, double alpha, double t,
                             const std::string& actuators, double alpha_l,
                             double alpha_r, const std::string& guess,
                             int max_iters, double tol, double eta, double dt) {
  oct::OCTProblem p;
  p.spec = ChainSpec{n, alpha, 1.0};
  p.grid = dt > 0.0
               ? TimeGrid{t, std::max(1, static_cast<int>(std::ceil(t / dt)))}
               : TimeGrid::with_duration(t);
  p.actuators = actuators_from_string(actuators);
  p.alpha_L = alpha_l;
  p.alpha_R = alpha_r;
  p.guess = cli::parse_guess(guess);
  p.max_iters = max_iters;
  p.tol = tol;
  p.mixing = eta;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal-control pulse synthesis for boundary-controlled XX "
            "spin chains (single-excitation sector)";

  py::register_exception<NumericalError>(m, "NumericalError");

  py::class_<ChainSpec>(m, "ChainSpec")
      .def(py::init([](int n_sites, double alpha, double bulk_coupling) {
             ChainSpec s{n_sites, alpha, bulk_coupling};
             s.validate();
             return s;
           }),
           py::arg("n_sites"), py::arg("alpha"), py::arg("bulk_coupling") = 1.0)
      .def_readonly("n_sites", &ChainSpec::n_sites)
      .def_readonly("alpha", &ChainSpec::alpha)
      .def_readonly("bulk_coupling", &ChainSpec::bulk_coupling)
      .def("__repr__", [](const ChainSpec& s) {
        return "ChainSpec(n_sites=" + std::to_string(s.n_sites) +
               ", alpha=" + std::to_string(s.alpha) + ")";
      });

  m.def("couplings_from_spec", &couplings_from_spec, py::arg("spec"),
        "Coupling vector (alpha, 1, ..., 1, alpha).");

  m.def(
      "sample_disorder",
      [](int n_couplings, double amplitude, std::uint64_t seed) {
        return sample_disorder(n_couplings, amplitude, seed).deltas;
      },
      py::arg("n_couplings"), py::arg("amplitude"), py::arg("seed"),
      "Uniform draws in [-A, A), deterministic in the seed.");

  m.def(
      "apply_disorder",
      [](const Eigen::VectorXd& couplings, const Eigen::VectorXd& deltas) {
        DisorderRealization r;
        r.deltas = deltas;
        return apply_disorder(couplings, r);
      },
      py::arg("couplings"), py::arg("deltas"), "J_i -> J_i (1 + delta_i).");

  py::class_<SingleExcHamiltonian>(m, "SingleExcHamiltonian")
      .def(py::init([](const Eigen::VectorXd& couplings) {
             return build_hamiltonian(couplings);
           }),
           py::arg("couplings"))
      .def_property_readonly("n_sites", &SingleExcHamiltonian::n_sites)
      .def_property_readonly("off_diagonal", &SingleExcHamiltonian::off_diagonal)
      .def("dense", &SingleExcHamiltonian::dense);

  m.def(
      "evolve_eigen",
      [](const SingleExcHamiltonian& h, const StateVector& psi0, double t) {
        return evolve_eigen(h, psi0, t);
      },
      py::arg("h"), py::arg("psi0"), py::arg("t"),
      "Exact eigendecomposition propagator e^{-iHt} psi0.");

  m.def(
      "free_peak",
      [](int n, double alpha, double t_max, double coarse_dt) {
        if (t_max <= 0.0) t_max = 4.0 * n;
        const PeakResult pk = free_peak(ChainSpec{n, alpha, 1.0}, t_max, coarse_dt);
        return py::make_tuple(pk.t_peak, pk.p_peak, pk.at_window_edge);
      },
      py::arg("n"), py::arg("alpha"), py::arg("t_max") = 0.0,
      py::arg("coarse_dt") = 0.05,
      "(t_peak, p_peak, at_window_edge) of the free evolution.");

  m.def(
      "optimal_alpha",
      [](int n, const std::vector<double>& grid, double t_max) {
        const AlphaChoice c =
            grid.empty() ? experiments::resolve_alpha(n)
                         : optimal_alpha(n, grid, t_max > 0 ? t_max : 1.5 * n);
        return py::make_tuple(c.alpha, c.t_peak, c.p_peak);
      },
      py::arg("n"), py::arg("grid") = std::vector<double>{},
      py::arg("t_max") = 0.0,
      "(alpha*, t_peak, p_peak): grid maximizer of the free-evolution peak.");

  py::class_<Pulse>(m, "Pulse")
      .def_property_readonly("t_final",
                             [](const Pulse& p) { return p.grid.t_final; })
      .def_property_readonly(
          "times",
          [](const Pulse& p) {
            Eigen::VectorXd t(p.grid.n_nodes());
            for (int k = 0; k < p.grid.n_nodes(); ++k) t(k) = p.grid.node_time(k);
            return t;
          })
      .def_property_readonly(
          "values",
          [](const Pulse& p) {
            return Eigen::Map<const Eigen::VectorXd>(
                p.values.data(), static_cast<Eigen::Index>(p.values.size()));
          })
      .def("value_at", &Pulse::value_at, py::arg("t"))
      .def("fluence", &Pulse::fluence);

  py::class_<oct::OCTResult>(m, "OCTResult")
      .def_readonly("yield_", &oct::OCTResult::yield)
      .def_readonly("fluence_left", &oct::OCTResult::fluence_left)
      .def_readonly("fluence_right", &oct::OCTResult::fluence_right)
      .def_readonly("iterations", &oct::OCTResult::iterations)
      .def_readonly("converged", &oct::OCTResult::converged)
      .def_readonly("best_iteration", &oct::OCTResult::best_iteration)
      .def_readonly("stationarity_defect", &oct::OCTResult::stationarity_defect)
      .def_readonly("left", &oct::OCTResult::left)
      .def_readonly("right", &oct::OCTResult::right)
      .def_property_readonly("reduced_fluence",
                             [](const oct::OCTResult& r) {
                               return oct::reduced_fluence(r);
                             })
      .def_property_readonly(
          "j_history",
          [](const oct::OCTResult& r) {
            py::list hist;
            for (const auto& v : r.j_history)
              hist.append(py::make_tuple(v.j1, v.j2, v.j));
            return hist;
          })
      .def_property_readonly(
          "trajectory_populations",
          [](const oct::OCTResult& r) {
            const auto& s = r.final_trajectory.target_population_series;
            return Eigen::Map<const Eigen::VectorXd>(
                s.data(), static_cast<Eigen::Index>(s.size()));
          })
      .def("__repr__", [](const oct::OCTResult& r) {
        return "OCTResult(yield=" + std::to_string(r.yield) +
               ", converged=" + (r.converged ? std::string("True") : "False") +
               ", iterations=" + std::to_string(r.iterations) + ")";
      });

  m.def(
      "run_optimize",
      [](int n, double alpha, double t, const std::string& actuators,
         double alpha_l, double alpha_r, const std::string& guess,
         int max_iters, double tol, double eta, double dt) {
        return oct::optimize(make_problem(n, alpha, t, actuators, alpha_l,
                                          alpha_r, guess, max_iters, tol, eta,
                                          dt));
      },
      py::arg("n"), py::arg("alpha"), py::arg("t"),
      py::arg("actuators") = "left", py::arg("alpha_l") = 0.05,
      py::arg("alpha_r") = 0.05, py::arg("guess") = "constant:0.5",
      py::arg("max_iters") = 5000, py::arg("tol") = 1e-8, py::arg("eta") = 0.5,
      py::arg("dt") = 0.0,
      "Forward-backward pulse optimization; returns an OCTResult.");

  m.def("symmetry_defect", &oct::symmetry_defect, py::arg("left"),
        py::arg("right"),
        "Relative L2 mismatch between G(t) and F(T-t).");

  m.def(
      "disorder_average_free",
      [](int n, double alpha, double t_eval, const std::vector<double>& amplitudes,
         int realizations, std::uint64_t seed, int threads,
         const std::string& eval, double window) {
        experiments::DisorderStudy study;
        study.base = experiments::FreeEvolutionBase{ChainSpec{n, alpha, 1.0}};
        study.amplitudes = amplitudes;
        study.realizations = realizations;
        study.master_seed = seed;
        if (eval == "fixed-t")
          study.evaluation = experiments::AtFixedT{t_eval};
        else if (eval == "peak-window")
          study.evaluation = experiments::AtPeak{(1.0 - window) * t_eval,
                                                 (1.0 + window) * t_eval};
        else
          throw std::invalid_argument("eval must be 'fixed-t' or 'peak-window'");
        py::list rows;
        for (const auto& s : experiments::disorder_average(study, threads))
          rows.append(py::make_tuple(s.amplitude, s.mean, s.std_error));
        return rows;
      },
      py::arg("n"), py::arg("alpha"), py::arg("t_eval"), py::arg("amplitudes"),
      py::arg("realizations") = 2000, py::arg("seed") = 12345,
      py::arg("threads") = 1, py::arg("eval") = "fixed-t",
      py::arg("window") = 0.2,
      "[(A, mean, std_error), ...] for the free evolution at fixed time.");

  m.def(
      "disorder_average_pulsed",
      [](int n, double alpha, const oct::OCTResult& result, double t_eval,
         const std::vector<double>& amplitudes, int realizations,
         std::uint64_t seed, int threads, const std::string& eval,
         double window) {
        experiments::DisorderStudy study;
        study.base = experiments::PulsedBase{ChainSpec{n, alpha, 1.0},
                                             result.left, result.right};
        study.amplitudes = amplitudes;
        study.realizations = realizations;
        study.master_seed = seed;
        if (eval == "fixed-t")
          study.evaluation = experiments::AtFixedT{t_eval};
        else if (eval == "peak-window")
          study.evaluation = experiments::AtPeak{(1.0 - window) * t_eval,
                                                 (1.0 + window) * t_eval};
        else
          throw std::invalid_argument("eval must be 'fixed-t' or 'peak-window'");
        py::list rows;
        for (const auto& s : experiments::disorder_average(study, threads))
          rows.append(py::make_tuple(s.amplitude, s.mean, s.std_error));
        return rows;
      },
      py::arg("n"), py::arg("alpha"), py::arg("result"), py::arg("t_eval"),
      py::arg("amplitudes"), py::arg("realizations") = 2000,
      py::arg("seed") = 12345, py::arg("threads") = 1,
      py::arg("eval") = "fixed-t", py::arg("window") = 0.2,
      "Replays clean-chain pulses on disordered chains.");

  m.attr("__version__") = "0.1.0";
}
