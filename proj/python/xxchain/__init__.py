# Copyright 2026 The xxchain Authors. All Rights Reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Optimal-control pulse synthesis for boundary-controlled XX spin chains."""

from ._core import (
    ChainSpec,
    NumericalError,
    OCTResult,
    Pulse,
    SingleExcHamiltonian,
    __version__,
    apply_disorder,
    couplings_from_spec,
    disorder_average_free,
    disorder_average_pulsed,
    evolve_eigen,
    free_peak,
    optimal_alpha,
    run_optimize,
    sample_disorder,
    symmetry_defect,
)

__all__ = [
    "ChainSpec",
    "NumericalError",
    "OCTResult",
    "Pulse",
    "SingleExcHamiltonian",
    "__version__",
    "apply_disorder",
    "couplings_from_spec",
    "disorder_average_free",
    "disorder_average_pulsed",
    "evolve_eigen",
    "free_peak",
    "optimal_alpha",
    "run_optimize",
    "sample_disorder",
    "symmetry_defect",
]
