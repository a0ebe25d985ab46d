"""
Gaussian states, symplectic spectra and entropies
=================================================

Build the two-mode squeezed vacuum and the three-mode GHZ-type state, look
at their symplectic eigenvalues and compute the quantum mutual information.
Vacuum has covariance equal to the identity.
"""

import numpy as np

from gdiscord import entropy_function, epr, gaussian_entropy, ghz, marginal, quantum_mi, symplectic_eigenvalues

# a pure state has every symplectic eigenvalue equal to 1
V = epr(1.0)
print("EPR(r=1) covariance:\n", np.round(V.matrix, 4))
print("symplectic eigenvalues:", symplectic_eigenvalues(V).values)

# each half is thermal with nu = cosh 2, so the entropy is g(cosh 2)
half = marginal(V, [0])
print("S(A) =", gaussian_entropy(half), " g(cosh 2) =", entropy_function(np.cosh(2.0)))
print("I_Q(EPR) =", quantum_mi(V))

W = ghz(2.0)
print("\nGHZ(a=2) marginal entropies:", [round(gaussian_entropy(marginal(W, [k])), 6) for k in range(3)])
print("I_Q(GHZ) =", quantum_mi(W))
