"""Allocation policies: the fraction of team effort sent to perfective work."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from tdsim.engine import TableFunction, table_lookup

# Flat floor at 0.2 with a steep rise to full perfective allocation just
# below a productivity ratio of 1.
DEFAULT_BREAKPOINTS = ((0.0, 0.2), (0.95, 0.2), (1.0, 1.0))


def default_scenario_table() -> TableFunction:
    return TableFunction(DEFAULT_BREAKPOINTS)


@dataclass(frozen=True)
class FixedPolicy:
    value: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"value (fixed allocation) must lie in [0, 1], got {self.value!r}")

    @property
    def initial_level(self) -> float:
        return self.value


@dataclass(frozen=True)
class TableDrivenPolicy:
    """Reactive policy: a table maps productivity ratio to a target allocation.

    The actual allocation follows the target through a first-order smooth.
    ``smoothing_time=None`` defers to ``ModelParameters.smoothing_time``.
    """

    table: TableFunction
    smoothing_time: Optional[float] = None

    def __post_init__(self):
        bad = [y for y in self.table.ys if not 0.0 <= y <= 1.0]
        if bad:
            raise ValueError(f"table outputs must lie in [0, 1], got {bad}")
        if self.smoothing_time is not None and not self.smoothing_time > 0:
            raise ValueError(f"smoothing_time must be positive, got {self.smoothing_time!r}")

    @property
    def initial_level(self) -> float:
        return 1.0


AllocationPolicy = Union[FixedPolicy, TableDrivenPolicy]


def allocation_target(policy: AllocationPolicy, productivity_ratio: float) -> float:
    if isinstance(policy, FixedPolicy):
        return policy.value
    return table_lookup(policy.table, productivity_ratio)
