"""
Entanglement boundaries
=======================

Duan's test and the PPT criterion on the noisy EPR family, and PPT across
the single-mode cuts of the noisy GHZ state.
"""

import numpy as np

from gdiscord import NoiseModel, apply_noise, duan_criterion, epr, ghz
from gdiscord.separability import ppt_single_mode_cuts
from gdiscord.sweeps import SweepSpec, separability_boundary

for v in (0.0, 0.5, 1.0 - np.exp(-2.0), 1.0):
    V = apply_noise(epr(1.0), NoiseModel("uncorrelated", v))
    print(f"EPR + noise v = {v:.4f}: {duan_criterion(V).to_json()}")

print("\nEPR boundary:", separability_boundary(SweepSpec("epr", "uncorrelated", 0.0, 3.0, 0.25)))
print("GHZ boundary:", separability_boundary(SweepSpec("ghz", "uncorrelated", 0.0, 3.0, 0.25)))

# three-mode verdicts are per bipartition only
W = apply_noise(ghz(2.0), NoiseModel("uncorrelated", 0.5))
for k, cut in enumerate(ppt_single_mode_cuts(W)):
    print(f"cut {k} | rest: witness {cut.witness:+.4f}, entangled {cut.entangled}")
