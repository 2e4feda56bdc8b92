"""
Perfective maintenance only
===========================

All of the team's effort goes to delivering backlog items. Debt piles up
linearly, maintainability decays exponentially and delivery stalls.
"""

import numpy as np

from tdsim import builtin_scenario, summarize

spec = builtin_scenario("s1")
run = spec.run()

# Yearly snapshot of the main stocks.
print(f"{'month':>5} {'library FP':>11} {'backlog FP':>11} {'debt mh':>9} {'maint.':>7}")
for t in range(0, 133, 12):
    i = run.index_of(t)
    print(
        f"{t:5d} {run['production_library'][i]:11.0f} {run['backlog'][i]:11.0f} "
        f"{run['technical_debt'][i]:9.0f} {run['maintainability'][i]:7.4f}"
    )

# Debt grows by a constant 0.3 * 14 * 160 = 672 man-hours per month, so at
# the horizon the maintainability exponent is exactly -2.
m = summarize(run)
print("\nfinal debt", m.final_technical_debt, "expected", 672 * 132)
print("final maintainability", m.final_maintainability, "e^-2 =", np.exp(-2))
print("delivered", round(m.delivered_fp), "FP over eleven years")
