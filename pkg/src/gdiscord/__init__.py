"""Gaussian multipartite classical correlations and quantum discord.

Quadratures are ordered (Q1, P1, ..., Qn, Pn), the vacuum covariance is the
identity and all entropies and informations are in bits.
"""

from .core import (
    CovarianceMatrix,
    GaussianStateError,
    SymplecticSpectrum,
    UnphysicalStateError,
    condition,
    entropy_function,
    gaussian_entropy,
    make_covariance,
    marginal,
    symplectic_eigenvalues,
    vacuum,
)
from .discord import (
    CorrelationReport,
    asymmetric_gaussian_cc,
    asymmetric_gaussian_qd,
    fock_mi_epr,
    gaussian_multipartite_cc,
    gaussian_multipartite_qd,
    homodyne_optimal,
    quantum_mi,
)
from .measurement import (
    MeasurementPlan,
    classical_mi,
    classical_mi_chain,
    differential_entropy,
    outcome_covariance,
)
from .montecarlo import estimate_mi, sample_outcomes
from .optimizer import (
    OptimizationResult,
    Regime,
    SearchOptions,
    maximize_mi,
    maximize_mi_symmetric,
)
from .separability import SeparabilityVerdict, duan_criterion, ppt_criterion, separability
from .states import NoiseKind, NoiseModel, apply_noise, epr, ghz

__version__ = "0.1.0"
