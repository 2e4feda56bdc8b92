import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tdsim.engine import IntegrationSettings
from tdsim.model import (
    ModelParameters,
    StockState,
    debt_accrual_rate,
    evaluate_flows,
    maintainability,
    new_requirements_rate,
    perfective_rate,
    preventive_rate,
    productivity,
    simulate,
    split_effort,
)
from tdsim.policy import FixedPolicy, TableDrivenPolicy, allocation_target, default_scenario_table

P = ModelParameters()


@pytest.mark.parametrize("pl, expected", [(10_000, 10_000 * 0.07 / 12), (0, 0), (12_000, 70.0)])
def test_new_requirements_rate(pl, expected):
    assert new_requirements_rate(pl, P) == pytest.approx(expected, rel=1e-12)


def test_new_requirements_rate_value():
    assert new_requirements_rate(10_000, P) == pytest.approx(58.333, abs=1e-3)


@pytest.mark.parametrize(
    "td, expected",
    [(0, 1.0), (88_704, math.exp(-2)), (44_352, math.exp(-1))],
)
def test_maintainability(td, expected):
    # 132 * 14 * 160 * 0.3 = 88,704 man-hours drives the exponent to -overhead
    assert 132 * 14 * 160 * 0.3 == pytest.approx(88_704)
    assert maintainability(td, P) == pytest.approx(expected, rel=1e-12)


def test_maintainability_reference_values():
    assert maintainability(88_704, P) == pytest.approx(0.13534, abs=1e-5)
    assert maintainability(44_352, P) == pytest.approx(0.36788, abs=1e-5)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_maintainability_bounds_and_monotone(a, b):
    ma, mb = maintainability(a, P), maintainability(b, P)
    assert 0 < ma <= 1
    if a < b:
        assert ma >= mb


def test_maintainability_strictly_decreasing_in_realistic_range():
    tds = np.linspace(0, 500_000, 2001)
    m = np.array([maintainability(t, P) for t in tds])
    assert np.all(m > 0) and np.all(m <= 1)
    assert np.all(np.diff(m) < 0)


def test_erosion_rate_diagnostic():
    assert P.erosion_rate == pytest.approx(2 / 88_704)


@pytest.mark.parametrize("m, expected", [(1.0, 4.65), (0.5, 2.325), (math.exp(-2), 0.6293)])
def test_productivity(m, expected):
    assert productivity(m, P) == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("a, expected", [(1, (2240, 0)), (0.2, (448, 1792)), (0, (0, 2240))])
def test_split_effort(a, expected):
    perf, prev = split_effort(a, P)
    assert (perf, prev) == pytest.approx(expected)
    assert perf + prev == pytest.approx(2240, rel=1e-9)


@pytest.mark.parametrize(
    "effort, prod, backlog, expected",
    [(2240, 4.65, 10_000, 65.1), (2240, 4.65, 10, 10.0), (0, 4.65, 10_000, 0.0)],
)
def test_perfective_rate(effort, prod, backlog, expected):
    assert perfective_rate(effort, prod, backlog, P) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "effort, m, td, expected",
    [(1792, 0.5, 50_000, 896), (1792, 1.0, 100, 100), (1792, 0.7, 0, 0)],
)
def test_preventive_rate(effort, m, td, expected):
    assert preventive_rate(effort, m, td, P) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("effort, expected", [(2240, 672), (0, 0), (448, 134.4)])
def test_debt_accrual(effort, expected):
    assert debt_accrual_rate(effort, P) == pytest.approx(expected, rel=1e-12)


def test_evaluate_flows_initial_fixed():
    aux, flows = evaluate_flows(StockState(), FixedPolicy(1.0), P, 0.0)
    assert flows["backlog"] == pytest.approx(58.333, abs=1e-3)
    assert aux.perfective_rate == 0.0
    assert flows["technical_debt"] == pytest.approx(672)
    assert flows["total_effort"] == 2240
    assert flows["allocation_level"] == 0.0
    assert aux.maintainability == 1.0 and aux.productivity == 4.65


@st.composite
def states(draw):
    return StockState(
        backlog=draw(st.floats(0, 1e5)),
        production_library=draw(st.floats(0, 1e5)),
        technical_debt=draw(st.floats(0, 3e5)),
        total_effort=draw(st.floats(0, 1e6)),
        allocation_level=draw(st.floats(0, 1)),
    )


@given(states(), st.floats(0, 1))
def test_fixed_policy_never_moves_and_identities(state, v):
    aux, flows = evaluate_flows(state, FixedPolicy(v), P)
    assert flows["allocation_level"] == 0.0
    assert aux.productivity_ratio == aux.maintainability
    assert aux.perfective_effort + aux.preventive_effort == pytest.approx(P.team_effort, rel=1e-9)


@given(states())
def test_table_policy_moves_toward_target(state):
    pol = TableDrivenPolicy(default_scenario_table(), 12.0)
    aux, flows = evaluate_flows(state, pol, P)
    assert flows["allocation_level"] == pytest.approx((aux.allocation_target - state.allocation_level) / 12)


def test_table_policy_defers_smoothing_time_to_params():
    pol = TableDrivenPolicy(default_scenario_table())
    state = StockState(technical_debt=20_000)
    _, flows = evaluate_flows(state, pol, P.replace(smoothing_time=6.0))
    aux, _ = evaluate_flows(state, pol, P)
    assert flows["allocation_level"] == pytest.approx((aux.allocation_target - 1.0) / 6.0)


@given(st.floats(0, 2), st.floats(0, 2))
def test_allocation_target_monotone_in_ratio(a, b):
    pol = TableDrivenPolicy(default_scenario_table(), 12.0)
    lo, hi = sorted((a, b))
    assert allocation_target(pol, lo) <= allocation_target(pol, hi)


@settings(max_examples=300)
@given(states(), st.floats(0.01, 1.0), st.floats(1.0, 5.0), st.floats(1.0, 5.0))
def test_one_step_non_negativity(state, dt, drain_b, drain_d):
    params = P.replace(backlog_drain_time=drain_b, debt_drain_time=drain_d)
    for pol in (FixedPolicy(1.0), FixedPolicy(0.0), TableDrivenPolicy(default_scenario_table(), 12.0)):
        _, flows = evaluate_flows(state, pol, params)
        assert state.backlog + dt * flows["backlog"] >= 0
        assert state.technical_debt + dt * flows["technical_debt"] >= 0


@pytest.mark.parametrize(
    "field, value",
    [("maintenance_team", -1), ("monthly_hours_worked", 0), ("refactoring_effort_necessary", 1.5),
     ("nominal_productivity", float("nan")), ("debt_accrual_basis", "sometimes")],
)
def test_parameter_validation(field, value):
    with pytest.raises(ValueError, match=field):
        P.replace(**{field: value})


@pytest.mark.parametrize("field, value", [("backlog", -1), ("allocation_level", 1.2), ("technical_debt", float("inf"))])
def test_state_validation(field, value):
    with pytest.raises(ValueError, match=field):
        StockState(**{field: value})


def test_conservation_with_per_step_recording():
    dt = 0.25
    run = simulate(P, TableDrivenPolicy(default_scenario_table(), 12.0), StockState(), IntegrationSettings(dt, 132, dt))
    net_b = np.concatenate([[0], np.cumsum(dt * (run["new_requirements_rate"] - run["perfective_rate"])[:-1])])
    net_pl = np.concatenate([[0], np.cumsum(dt * run["perfective_rate"][:-1])])
    np.testing.assert_allclose(run["backlog"], run["backlog"][0] + net_b, rtol=1e-6, atol=1e-6)
    np.testing.assert_allclose(run["production_library"], run["production_library"][0] + net_pl, rtol=1e-6)


def test_total_effort_exact():
    run = simulate(P, FixedPolicy(1.0), StockState(), IntegrationSettings())
    np.testing.assert_array_equal(run["total_effort"], 2240.0 * run.times)


def test_expended_accrual_variant_only_differs_when_backlog_limited():
    settings_ = IntegrationSettings()
    a = simulate(P, FixedPolicy(1.0), StockState(), settings_)
    b = simulate(P.replace(debt_accrual_basis="expended"), FixedPolicy(1.0), StockState(), settings_)
    # backlog starts empty, so early on delivery is backlog-limited and less debt accrues
    assert b.final("technical_debt") < a.final("technical_debt")
    assert b["debt_accrual_rate"][0] == 0.0
    assert a["debt_accrual_rate"][0] == pytest.approx(672)
