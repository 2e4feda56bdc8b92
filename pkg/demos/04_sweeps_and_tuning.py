"""
Parameter sweeps and table tuning
=================================

Sweeps rerun a scenario once per value of a parameter path. Here we look
at how the reaction delay and the table's knee change the outcome of the
reactive policy.
"""

import dataclasses

from tdsim import TableDrivenPolicy, TableFunction, builtin_scenario, summarize, sweep

base = builtin_scenario("s2")

print("reaction delay (months) -> delivered FP, final debt, equilibrium allocation")
for row in sweep(base, "policy.smoothing_time", [3, 6, 12, 24, 48]):
    m = row.metrics
    print(f"  {row.value:5g}  {m.delivered_fp:8.0f}  {m.final_technical_debt:9.1f}  {m.equilibrium_allocation:.3f}")

# Debt at the horizon under perfective-only work is linear in the refactoring fraction.
print("\nrefactoring fraction -> final debt (perfective only)")
for row in sweep(builtin_scenario("s1"), "params.refactoring_effort_necessary", [0.1, 0.2, 0.3, 0.4, 0.5]):
    print(f"  {row.value:4.1f}  {row.metrics.final_technical_debt:9.0f}")

# Table breakpoints are configuration: move the knee and watch the equilibrium.
print("\ntable knee -> equilibrium allocation")
for knee in (0.8, 0.9, 0.95, 0.98):
    table = TableFunction([(0, 0.2), (knee, 0.2), (1, 1)])
    spec = dataclasses.replace(base, policy=TableDrivenPolicy(table, 12.0))
    print(f"  {knee:4.2f}  {summarize(spec.run()).equilibrium_allocation:.3f}")
