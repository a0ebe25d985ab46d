"""
Correlations of a noisy EPR pair
================================

Sweep uncorrelated noise on EPR(r=1) and watch the optimal measurement
switch from homodyne to heterodyne. The closed-form homodyne-optimality
test predicts the same switching point.
"""

from gdiscord.sweeps import SweepSpec, homodyne_criterion_switch, regime_switch, rows_to_csv, run_sweep

spec = SweepSpec("epr", "uncorrelated", 0.0, 2.0, 0.25)
rows = run_sweep(spec)
print(rows_to_csv(rows))

print("optimizer regime switch:  v =", round(regime_switch(spec, rows), 4))
print("closed-form prediction:   v =", round(homodyne_criterion_switch(spec), 4))
