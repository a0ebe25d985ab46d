"""
GHZ state under multiplicative noise
====================================

Scaling the GHZ covariance by v leaves the homodyne MI unchanged, so J_G is
flat until another measurement wins. The common transmissivity then drops
abruptly below 1.
"""

import numpy as np

from gdiscord import NoiseModel, apply_noise, ghz, maximize_mi_symmetric
from gdiscord.sweeps import SweepSpec, regime_switch

for v in np.arange(2.5, 4.01, 0.25):
    res = maximize_mi_symmetric(apply_noise(ghz(2.0), NoiseModel("multiplicative", v)))
    print(f"v = {v:.2f}  J_G = {res.j_g:.5f}  t = {res.plan.ts[0]:.3f}  {res.regime.value}")

# bisected switching point, using the common-(theta, t) search
spec = SweepSpec("ghz", "multiplicative", 1.0, 6.0, 0.5, symmetric=True)
print("\nregime switch at v =", round(regime_switch(spec), 4))
