# Copyright 2026 The netseg Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python interface to the netseg core library."""

from ._core import (
    NetsegError,
    fixed_points,
    jr_equilibrium,
    jr_integration_at,
    jr_simulate,
    moment_inequalities,
    predict_equilibrium,
    run_suite,
    sbm_expected_counts,
    sbm_relative_bounds,
    sbm_relative_effect,
    suite_names,
)

__all__ = [
    "NetsegError",
    "fixed_points",
    "jr_equilibrium",
    "jr_integration_at",
    "jr_simulate",
    "moment_inequalities",
    "predict_equilibrium",
    "run_suite",
    "sbm_expected_counts",
    "sbm_relative_bounds",
    "sbm_relative_effect",
    "suite_names",
]
