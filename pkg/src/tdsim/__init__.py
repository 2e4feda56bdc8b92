"""System-dynamics simulation of technical debt under maintenance allocation policies."""

from tdsim.engine import (
    FlowEvaluationError,
    IntegrationSettings,
    RunResult,
    TableFunction,
    TimeSeries,
    integrate,
    smooth_step,
    table_lookup,
)
from tdsim.model import AuxiliaryValues, ModelParameters, StockState, evaluate_flows, simulate
from tdsim.policy import (
    AllocationPolicy,
    FixedPolicy,
    TableDrivenPolicy,
    allocation_target,
    default_scenario_table,
)
from tdsim.scenario import ScenarioError, ScenarioSpec, builtin_scenario, load_scenario, parse_scenario, render_scenario
from tdsim.report import ComparisonReport, SummaryMetrics, compare, summarize, sweep, write_csv

__version__ = "0.1.0"
