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

import math

import pytest

import netseg


def test_sbm_bounds_bracket_one_at_balanced_groups():
    lo, hi = netseg.sbm_relative_bounds([50, 50], 0.1, 0.02, 1.0)
    assert lo == pytest.approx(1.0)
    assert hi >= lo


def test_expected_counts_exact_matches_large_group_form():
    fast = netseg.sbm_expected_counts([400, 200], 0.05, 0.01)
    exact = netseg.sbm_expected_counts([400, 200], 0.05, 0.01, exact=True)
    assert fast["e_m"] == pytest.approx(exact["e_m"], rel=1e-2)
    assert fast["o_b"] == pytest.approx(exact["o_b"], rel=1e-2)


def test_jr_equilibrium_closed_form():
    # (N_D + (1 - alpha) N_F) / (N_S + N_D + K/(K-1) (1 - alpha) N_F)
    f = netseg.jr_equilibrium(6.0, 2.0, 4.0, 0.75, K=2)
    assert f == pytest.approx(3.0 / 10.0)


def test_jr_alpha_outside_range_raises():
    with pytest.raises(netseg.NetsegError):
        netseg.jr_equilibrium(6.0, 2.0, 4.0, 0.3, K=2)


def test_jr_simulation_is_seeded():
    a = netseg.jr_simulate(6.0, 2.0, 4.0, 0.75, 300, seed=11)
    b = netseg.jr_simulate(6.0, 2.0, 4.0, 0.75, 300, seed=11)
    assert a["integration"] == b["integration"]
    assert len(a["integration"]) == 300
    assert all(0.0 <= x <= 1.0 for x in a["integration"])


def test_fixed_node_without_closure_sits_at_one_minus_s():
    pts = [p for p in netseg.fixed_points(0.0, 0.4) if p["stable"]]
    assert pts
    assert any(math.isclose(p["integration"], 0.6, abs_tol=1e-8) for p in pts)


def test_predict_equilibrium_split():
    e = netseg.predict_equilibrium(6.0, 2.0, 3.0, 1.0, K=2)
    assert e["alpha"] == pytest.approx(0.75)
    assert e["f_inf"] == pytest.approx(e["f_inf_no_tc"] + e["tc_contribution"])


def test_suite_names_and_unknown_suite():
    assert "fixed-node" in netseg.suite_names()
    with pytest.raises(netseg.NetsegError):
        netseg.run_suite("no-such-suite")
