"""Technical-debt maintenance model.

Four stocks (backlog, production library, technical debt, total effort)
plus the smoothed allocation level. Time is in months, sizes in function
points (FP) and effort in man-hours.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from types import SimpleNamespace
from typing import Literal

from tdsim.engine import IntegrationSettings, RunResult, integrate
from tdsim.policy import AllocationPolicy, FixedPolicy, allocation_target

LEVELS = ("backlog", "production_library", "technical_debt", "total_effort", "allocation_level")


@dataclass(frozen=True)
class ModelParameters:
    new_business_demands: float = 0.07  # fraction of the library per year
    nominal_productivity: float = 4.65  # FP / person / month
    monthly_hours_worked: float = 160.0  # man-hours / person / month
    refactoring_effort_necessary: float = 0.3
    refactoring_overhead: float = 2.0
    maintenance_team: float = 14.0  # persons, constant
    time_horizon: float = 132.0  # months; a constant of the maintainability law
    smoothing_time: float = 12.0  # months
    backlog_drain_time: float = 1.0  # months
    debt_drain_time: float = 1.0  # months
    # "allocated": debt accrues on perfective effort as allocated.
    # "expended": only on effort the backlog actually absorbed.
    debt_accrual_basis: Literal["allocated", "expended"] = "allocated"

    def __post_init__(self):
        for f in fields(self):
            if f.name == "debt_accrual_basis":
                continue
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
                raise ValueError(f"{f.name} must be a positive finite number, got {v!r}")
        if self.refactoring_effort_necessary > 1:
            raise ValueError(
                f"refactoring_effort_necessary must lie in (0, 1], got {self.refactoring_effort_necessary!r}"
            )
        if self.debt_accrual_basis not in ("allocated", "expended"):
            raise ValueError(
                f"debt_accrual_basis must be 'allocated' or 'expended', got {self.debt_accrual_basis!r}"
            )

    @property
    def team_effort(self) -> float:
        """Man-hours available per month."""
        return self.maintenance_team * self.monthly_hours_worked

    @property
    def erosion_rate(self) -> float:
        """Maintainability decay constant per man-hour of debt (diagnostic)."""
        return self.refactoring_overhead / (
            self.time_horizon * self.maintenance_team * self.monthly_hours_worked * self.refactoring_effort_necessary
        )

    def replace(self, **changes) -> "ModelParameters":
        return ModelParameters(**{**asdict(self), **changes})


@dataclass(frozen=True)
class StockState:
    backlog: float = 0.0
    production_library: float = 10_000.0
    technical_debt: float = 0.0
    total_effort: float = 0.0
    allocation_level: float = 1.0

    def __post_init__(self):
        for name in LEVELS:
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be a non-negative finite number, got {v!r}")
        if self.allocation_level > 1:
            raise ValueError(f"allocation_level must lie in [0, 1], got {self.allocation_level!r}")

    def as_dict(self) -> dict[str, float]:
        return {name: float(getattr(self, name)) for name in LEVELS}


@dataclass(frozen=True)
class AuxiliaryValues:
    maintainability: float
    productivity: float
    productivity_ratio: float
    allocation_target: float
    perfective_effort: float
    preventive_effort: float
    new_requirements_rate: float
    perfective_rate: float
    preventive_rate: float
    debt_accrual_rate: float

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


def new_requirements_rate(production_library: float, params: ModelParameters) -> float:
    """FP/month of new demand; the annual demand fraction is spread over 12 months."""
    return production_library * params.new_business_demands / 12.0


def maintainability(technical_debt: float, params: ModelParameters) -> float:
    return math.exp(-params.erosion_rate * technical_debt)


def productivity(maintainability: float, params: ModelParameters) -> float:
    return params.nominal_productivity * maintainability


def split_effort(allocation: float, params: ModelParameters) -> tuple[float, float]:
    total = params.team_effort
    return total * allocation, total * (1.0 - allocation)


def perfective_rate(perfective_effort: float, productivity: float, backlog: float, params: ModelParameters) -> float:
    capacity = perfective_effort / params.monthly_hours_worked * productivity
    return min(capacity, backlog / params.backlog_drain_time)


def preventive_rate(
    preventive_effort: float, maintainability: float, technical_debt: float, params: ModelParameters
) -> float:
    return min(preventive_effort * maintainability, technical_debt / params.debt_drain_time)


def debt_accrual_rate(perfective_effort: float, params: ModelParameters) -> float:
    return params.refactoring_effort_necessary * perfective_effort


def evaluate_flows(
    state: StockState, policy: AllocationPolicy, params: ModelParameters, t: float = 0.0
) -> tuple[AuxiliaryValues, dict[str, float]]:
    """Auxiliaries and net flows of every level at one instant.

    ``t`` is unused by the current equations but kept so time-dependent
    policies can be added without changing the callback shape.
    """
    m = maintainability(state.technical_debt, params)
    prod = productivity(m, params)
    ratio = m  # actual / nominal productivity, identically the maintainability
    target = allocation_target(policy, ratio)
    perf_effort, prev_effort = split_effort(state.allocation_level, params)

    nr = new_requirements_rate(state.production_library, params)
    pr = perfective_rate(perf_effort, prod, state.backlog, params)
    vr = preventive_rate(prev_effort, m, state.technical_debt, params)
    if params.debt_accrual_basis == "expended":
        accrual = debt_accrual_rate(pr / prod * params.monthly_hours_worked, params)
    else:
        accrual = debt_accrual_rate(perf_effort, params)

    if isinstance(policy, FixedPolicy):
        d_alloc = 0.0
    else:
        tau = policy.smoothing_time if policy.smoothing_time is not None else params.smoothing_time
        d_alloc = (target - state.allocation_level) / tau

    aux = AuxiliaryValues(
        maintainability=m,
        productivity=prod,
        productivity_ratio=ratio,
        allocation_target=target,
        perfective_effort=perf_effort,
        preventive_effort=prev_effort,
        new_requirements_rate=nr,
        perfective_rate=pr,
        preventive_rate=vr,
        debt_accrual_rate=accrual,
    )
    flows = {
        "backlog": nr - pr,
        "production_library": pr,
        "technical_debt": accrual - vr,
        "total_effort": params.team_effort,
        "allocation_level": d_alloc,
    }
    return aux, flows


def simulate(
    params: ModelParameters,
    policy: AllocationPolicy,
    initial: StockState,
    settings: IntegrationSettings,
) -> RunResult:
    def flows(t, levels):
        # unvalidated view of the levels; StockState checks run once, on the initial state
        aux, rates = evaluate_flows(SimpleNamespace(**levels), policy, params, t)
        return rates, aux.as_dict()

    result = integrate(flows, initial.as_dict(), settings)
    result.meta.update(params=params, policy=policy, initial=initial)
    return result
