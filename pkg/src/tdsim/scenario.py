"""Scenario definitions and the JSON scenario file format.

A scenario file is a JSON object; every section and key is optional and
falls back to the base scenario (``"base": "s1"`` unless stated)::

    {
      "name": "slower-reaction",
      "base": "s2",
      "params": {"refactoring_effort_necessary": 0.25},
      "initial": {"production_library": 12000},
      "policy": {"type": "table",
                 "breakpoints": [[0, 0.2], [0.95, 0.2], [1, 1]],
                 "smoothing_time": 18},
      "settings": {"dt": 0.25, "horizon": 132, "record_every": 1}
    }

``policy`` is either ``{"type": "fixed", "value": v}`` or
``{"type": "table", "breakpoints": [[x, y], ...], "smoothing_time": tau}``.
Omitting ``smoothing_time`` makes the table policy use
``params.smoothing_time``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from tdsim.engine import IntegrationSettings, RunResult, TableFunction
from tdsim.model import LEVELS, ModelParameters, StockState, simulate
from tdsim.policy import AllocationPolicy, FixedPolicy, TableDrivenPolicy, default_scenario_table

BUILTIN_IDS = ("s1", "s2")
_SECTIONS = ("name", "base", "params", "initial", "policy", "settings")
_PARAM_KEYS = tuple(f.name for f in fields(ModelParameters))
_SETTINGS_KEYS = tuple(f.name for f in fields(IntegrationSettings))


class ScenarioError(ValueError):
    """Invalid scenario document; ``key`` is the dotted path of the culprit."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


class ScenarioSyntaxError(ScenarioError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__("", f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    params: ModelParameters
    initial: StockState
    policy: AllocationPolicy
    settings: IntegrationSettings

    def __post_init__(self):
        if self.initial.allocation_level != self.policy.initial_level:
            raise ScenarioError(
                "initial.allocation_level",
                f"must equal the policy's starting allocation {self.policy.initial_level!r}, "
                f"got {self.initial.allocation_level!r}",
            )

    def run(self) -> RunResult:
        result = simulate(self.params, self.policy, self.initial, self.settings)
        result.meta["scenario"] = self.name
        return result


def builtin_scenario(id: str) -> ScenarioSpec:
    """``s1``: all effort on perfective work. ``s2``: reactive table policy."""
    if id == "s1":
        return ScenarioSpec("s1", ModelParameters(), StockState(), FixedPolicy(1.0), IntegrationSettings())
    if id == "s2":
        policy = TableDrivenPolicy(default_scenario_table(), smoothing_time=12.0)
        return ScenarioSpec("s2", ModelParameters(), StockState(), policy, IntegrationSettings())
    raise ScenarioError("base", f"unknown built-in scenario {id!r} (choose from {', '.join(BUILTIN_IDS)})")


def _number(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(key, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(key, f"expected a finite number, got {value!r}")
    return float(value)


def _section(doc: Mapping, name: str, allowed: tuple[str, ...]) -> dict:
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ScenarioError(name, f"expected an object, got {type(sec).__name__}")
    unknown = sorted(set(sec) - set(allowed))
    if unknown:
        raise ScenarioError(f"{name}.{unknown[0]}", f"unknown key (allowed: {', '.join(allowed)})")
    return sec


def _build(key: str, factory, kwargs: dict):
    """Construct ``factory(**kwargs)``, reattaching validation errors to ``key``."""
    try:
        return factory(**kwargs)
    except ScenarioError:
        raise
    except ValueError as exc:
        msg = str(exc)
        m = re.match(r"\w+", msg)
        if m and m.group() in kwargs:
            raise ScenarioError(f"{key}.{m.group()}", msg) from exc
        raise ScenarioError(key, msg) from exc


def _policy(sec: dict, base: AllocationPolicy) -> AllocationPolicy:
    kind = sec.get("type", "fixed" if isinstance(base, FixedPolicy) else "table")
    if kind == "fixed":
        extra = sorted(set(sec) - {"type", "value"})
        if extra:
            raise ScenarioError(f"policy.{extra[0]}", "not valid for a fixed policy")
        default = base.value if isinstance(base, FixedPolicy) else 1.0
        value = _number(sec["value"], "policy.value") if "value" in sec else default
        return _build("policy", FixedPolicy, {"value": value})
    if kind == "table":
        extra = sorted(set(sec) - {"type", "breakpoints", "smoothing_time"})
        if extra:
            raise ScenarioError(f"policy.{extra[0]}", "not valid for a table policy")
        same = isinstance(base, TableDrivenPolicy)
        table = base.table if same else default_scenario_table()
        tau = base.smoothing_time if same else None
        if "breakpoints" in sec:
            raw = sec["breakpoints"]
            if not isinstance(raw, list) or not all(isinstance(p, list) and len(p) == 2 for p in raw):
                raise ScenarioError("policy.breakpoints", "expected a list of [x, y] pairs")
            pts = [
                (_number(x, f"policy.breakpoints[{i}][0]"), _number(y, f"policy.breakpoints[{i}][1]"))
                for i, (x, y) in enumerate(raw)
            ]
            try:
                table = TableFunction(pts)
            except ValueError as exc:
                raise ScenarioError("policy.breakpoints", str(exc)) from exc
        if "smoothing_time" in sec:
            tau = None if sec["smoothing_time"] is None else _number(sec["smoothing_time"], "policy.smoothing_time")
        try:
            return TableDrivenPolicy(table, tau)
        except ValueError as exc:
            key = "policy.smoothing_time" if str(exc).startswith("smoothing_time") else "policy.breakpoints"
            raise ScenarioError(key, str(exc)) from exc
    raise ScenarioError("policy.type", f"expected 'fixed' or 'table', got {kind!r}")


def scenario_from_dict(doc: Mapping, base: str = "s1") -> ScenarioSpec:
    """Apply one override layer ``doc`` on top of a built-in scenario."""
    if not isinstance(doc, dict):
        raise ScenarioError("", f"scenario document must be an object, got {type(doc).__name__}")
    unknown = sorted(set(doc) - set(_SECTIONS))
    if unknown:
        raise ScenarioError(unknown[0], f"unknown section (allowed: {', '.join(_SECTIONS)})")
    base_id = doc.get("base", base)
    spec = builtin_scenario(base_id)
    name = doc.get("name", spec.name)
    if not isinstance(name, str):
        raise ScenarioError("name", f"expected a string, got {name!r}")

    p_sec = _section(doc, "params", _PARAM_KEYS)
    p_kwargs = asdict(spec.params)
    for k, v in p_sec.items():
        if k == "debt_accrual_basis":
            p_kwargs[k] = v
        else:
            p_kwargs[k] = _number(v, f"params.{k}")
    params = _build("params", ModelParameters, p_kwargs)

    policy = _policy(_section(doc, "policy", ("type", "value", "breakpoints", "smoothing_time")), spec.policy)

    i_sec = _section(doc, "initial", LEVELS)
    i_kwargs = spec.initial.as_dict()
    i_kwargs["allocation_level"] = policy.initial_level
    for k, v in i_sec.items():
        i_kwargs[k] = _number(v, f"initial.{k}")
    initial = _build("initial", StockState, i_kwargs)

    s_sec = _section(doc, "settings", _SETTINGS_KEYS)
    s_kwargs = asdict(spec.settings)
    for k, v in s_sec.items():
        s_kwargs[k] = _number(v, f"settings.{k}")
    settings = _build("settings", IntegrationSettings, s_kwargs)

    return ScenarioSpec(name, params, initial, policy, settings)


def parse_scenario(text: str, base: str = "s1") -> ScenarioSpec:
    if not text.strip():
        return builtin_scenario(base)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    return scenario_from_dict(doc, base)


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    if isinstance(spec.policy, FixedPolicy):
        policy: dict[str, Any] = {"type": "fixed", "value": spec.policy.value}
    else:
        policy = {"type": "table", "breakpoints": [list(p) for p in spec.policy.table.breakpoints]}
        if spec.policy.smoothing_time is not None:
            policy["smoothing_time"] = spec.policy.smoothing_time
    return {
        "name": spec.name,
        "params": asdict(spec.params),
        "initial": spec.initial.as_dict(),
        "policy": policy,
        "settings": asdict(spec.settings),
    }


def render_scenario(spec: ScenarioSpec) -> str:
    return json.dumps(scenario_to_dict(spec), indent=2) + "\n"


def load_scenario(ref: str) -> ScenarioSpec:
    """Resolve a built-in id or read a scenario file."""
    if ref in BUILTIN_IDS:
        return builtin_scenario(ref)
    path = Path(ref)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError("", f"cannot read scenario file {ref!r}: {exc.strerror or exc}") from exc
    try:
        return parse_scenario(text)
    except ScenarioError as exc:
        raise ScenarioError(exc.key, f"in {ref!r}: {exc}") from exc


class SweepPathError(ValueError):
    pass


def resolve_path(spec: ScenarioSpec, path: str) -> tuple[str, str]:
    """Normalise a sweep path to ``(section, key)``; bare names mean params."""
    section, _, key = path.rpartition(".")
    section = section or "params"
    if section == "params" and key in _PARAM_KEYS and key != "debt_accrual_basis":
        return section, key
    if section == "policy":
        if isinstance(spec.policy, FixedPolicy) and key == "value":
            return section, key
        if isinstance(spec.policy, TableDrivenPolicy) and key == "smoothing_time":
            return section, key
    raise SweepPathError(f"{path!r} does not name a numeric parameter or policy field of scenario {spec.name!r}")


def with_value(spec: ScenarioSpec, path: str, value: float) -> ScenarioSpec:
    section, key = resolve_path(spec, path)
    doc = scenario_to_dict(spec)
    doc[section][key] = value
    if (section, key) == ("policy", "value"):
        doc["initial"]["allocation_level"] = value
    return scenario_from_dict(doc)
