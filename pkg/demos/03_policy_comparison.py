"""
Comparing the two policies
==========================

Moving effort from perfective to preventive work still ends with more
functionality delivered: productivity never collapses.
"""

from tdsim import builtin_scenario, compare, summarize

a = summarize(builtin_scenario("s1").run())
b = summarize(builtin_scenario("s2").run())
report = compare(a, b, "perfective-only", "reactive")
print(report.render())
print("better on every metric:", report.winner_on_all())

# The same report as a machine-readable document.
print(report.to_json())
