"""Fixed-step system-dynamics primitives.

Nothing in here knows about technical debt. A model is a callable
``flows(t, levels) -> (rates, auxiliaries)`` over plain ``dict[str, float]``
mappings; :func:`integrate` advances the levels with explicit Euler and
records levels and auxiliaries on a regular grid.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

FlowFunction = Callable[[float, Mapping[str, float]], tuple[Mapping[str, float], Mapping[str, float]]]

_MULTIPLE_RTOL = 1e-9


class FlowEvaluationError(RuntimeError):
    """Raised when the model callback fails; carries the simulation time."""

    def __init__(self, t: float, cause: BaseException):
        super().__init__(f"flow evaluation failed at t={t!r}: {cause}")
        self.t = t
        self.cause = cause


@dataclass(frozen=True, init=False)
class TableFunction:
    """Piecewise-linear lookup table with endpoint clamping."""

    breakpoints: tuple[tuple[float, float], ...]

    def __init__(self, breakpoints: Iterable[Sequence[float]]):
        pts = tuple((float(x), float(y)) for x, y in breakpoints)
        if len(pts) < 2:
            raise ValueError(f"table needs at least 2 breakpoints, got {len(pts)}")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x1 > x0:
                raise ValueError(f"table x values must be strictly increasing ({x0!r} then {x1!r})")
        if not all(math.isfinite(v) for p in pts for v in p):
            raise ValueError("table breakpoints must be finite")
        object.__setattr__(self, "breakpoints", pts)
        object.__setattr__(self, "_xs", [p[0] for p in pts])

    @property
    def xs(self) -> list[float]:
        return list(self._xs)

    @property
    def ys(self) -> list[float]:
        return [p[1] for p in self.breakpoints]

    def __call__(self, x: float) -> float:
        return table_lookup(self, x)


def table_lookup(table: TableFunction, x: float) -> float:
    pts = table.breakpoints
    if x <= pts[0][0]:
        return pts[0][1]
    if x >= pts[-1][0]:
        return pts[-1][1]
    i = bisect_right(table._xs, x)
    (x0, y0), (x1, y1) = pts[i - 1], pts[i]
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0)


def smooth_step(current: float, target: float, tau: float, dt: float) -> float:
    """One explicit-Euler step of a first-order exponential smooth."""
    return current + dt * (target - current) / tau


def _steps(span: float, dt: float, what: str) -> int:
    n = round(span / dt)
    if n < 1 or abs(n * dt - span) > _MULTIPLE_RTOL * span:
        raise ValueError(f"{what}={span!r} is not an integer multiple of dt={dt!r}")
    return n


@dataclass(frozen=True)
class IntegrationSettings:
    dt: float = 0.25
    horizon: float = 132.0
    record_every: float = 1.0

    def __post_init__(self):
        for name in ("dt", "horizon", "record_every"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
        _steps(self.horizon, self.dt, "horizon")
        _steps(self.record_every, self.dt, "record_every")
        _steps(self.horizon, self.record_every, "horizon (per record_every)")

    @property
    def n_steps(self) -> int:
        return round(self.horizon / self.dt)

    @property
    def stride(self) -> int:
        """Number of Euler steps between recorded samples."""
        return round(self.record_every / self.dt)

    @property
    def n_samples(self) -> int:
        return self.n_steps // self.stride + 1


@dataclass(frozen=True)
class TimeSeries:
    name: str
    times: np.ndarray
    values: np.ndarray

    def __len__(self):
        return len(self.times)

    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.values.tolist()))


@dataclass
class RunResult:
    """Recorded trajectories of one integration run.

    ``levels`` and ``auxiliaries`` list the variable names in recording
    order; every entry of ``values`` has one sample per entry of ``times``.
    """

    times: np.ndarray
    values: dict[str, np.ndarray]
    levels: tuple[str, ...]
    auxiliaries: tuple[str, ...]
    settings: IntegrationSettings
    meta: dict = field(default_factory=dict)

    @property
    def horizon(self) -> float:
        return self.settings.horizon

    @property
    def names(self) -> tuple[str, ...]:
        return self.levels + self.auxiliaries

    def __getitem__(self, name: str) -> np.ndarray:
        return self.values[name]

    def series(self, name: str) -> TimeSeries:
        return TimeSeries(name, self.times, self.values[name])

    def final(self, name: str) -> float:
        return float(self.values[name][-1])

    def initial(self, name: str) -> float:
        return float(self.values[name][0])

    def index_of(self, t: float) -> int:
        i = int(np.argmin(np.abs(self.times - t)))
        if not math.isclose(self.times[i], t, rel_tol=1e-9, abs_tol=1e-9):
            raise KeyError(f"no sample recorded at t={t!r}")
        return i


def integrate(model: FlowFunction, initial: Mapping[str, float], settings: IntegrationSettings) -> RunResult:
    """Advance ``initial`` over ``settings.horizon`` with explicit Euler.

    ``model(t, levels)`` returns ``(rates, auxiliaries)``; ``rates`` must
    have a key for every level. Levels and auxiliaries are recorded at
    t = 0, record_every, ..., horizon.
    """
    names = tuple(initial)
    state = {k: float(v) for k, v in initial.items()}
    dt = settings.dt
    stride = settings.stride
    n_steps = settings.n_steps

    def evaluate(k: int):
        t = k * dt
        try:
            rates, aux = model(t, dict(state))
            missing = [n for n in names if n not in rates]
            if missing:
                raise KeyError(f"model returned no rate for level(s) {missing}")
        except FlowEvaluationError:
            raise
        except Exception as exc:
            raise FlowEvaluationError(t, exc) from exc
        return rates, aux

    rows: list[list[float]] = []
    aux_names: tuple[str, ...] | None = None
    for k in range(n_steps + 1):
        rates, aux = evaluate(k)
        if k % stride == 0:
            if aux_names is None:
                aux_names = tuple(aux)
            rows.append([state[n] for n in names] + [float(aux[a]) for a in aux_names])
        if k == n_steps:
            break
        for n in names:
            state[n] += dt * rates[n]

    data = np.asarray(rows, dtype=float)
    all_names = names + (aux_names or ())
    times = np.arange(len(rows), dtype=float) * settings.record_every
    values = {n: data[:, i].copy() for i, n in enumerate(all_names)}
    return RunResult(times=times, values=values, levels=names, auxiliaries=aux_names or (), settings=settings)
