"""
Local Gaussian measurements and outcome mutual information
==========================================================

Each mode is rotated by theta and split on a beam splitter of
transmissivity t; both outputs are detected. t = 1 is homodyne of Q,
t = 1/2 heterodyne.
"""

import numpy as np

from gdiscord import MeasurementPlan, classical_mi, classical_mi_chain, epr, outcome_covariance

V = epr(1.0)

for name, plan in [("homodyne", MeasurementPlan.homodyne(2)), ("heterodyne", MeasurementPlan.heterodyne(2))]:
    sigma = outcome_covariance(V, plan)
    print(f"{name}: outcome covariance\n{np.round(sigma, 4)}")
    # determinant form and chain rule give the same number
    print(f"  MI = {classical_mi(sigma):.6f} bits (chain rule {classical_mi_chain(sigma):.6f})\n")

# MI as a function of a common transmissivity
for t in np.linspace(0, 1, 5):
    plan = MeasurementPlan.from_arrays([0.0, 0.0], [t, t])
    print(f"t = {t:.2f}  MI = {classical_mi(outcome_covariance(V, plan)):.4f}")
