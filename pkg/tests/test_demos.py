import runpy
from pathlib import Path

import pytest

from tdsim.policy import TableDrivenPolicy
from tdsim.scenario import load_scenario

ROOT = Path(__file__).resolve().parents[1]


@pytest.mark.parametrize("script", sorted((ROOT / "demos").glob("*.py")), ids=lambda p: p.name)
def test_demo_runs(script, capsys):
    runpy.run_path(str(script), run_name="__main__")
    assert capsys.readouterr().out


def test_sample_scenario_file():
    spec = load_scenario(str(ROOT / "scenarios" / "reactive_slow_review.json"))
    assert spec.name == "reactive-slow-review"
    assert isinstance(spec.policy, TableDrivenPolicy) and spec.policy.smoothing_time == 24
