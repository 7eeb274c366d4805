"""Thermal-equilibrium Gaussian state and bath-induced entanglement of two
Brownian particles coupled to a common heat bath, plus a classical Langevin
simulator for the dynamical regimes."""

__version__ = "0.1.0"

from .entanglement import (EntanglementResult, InvalidStateError, SymplecticInvariants,
                           log_negativity, log_negativity_closed, nu_minus_closed,
                           nu_minus_general, symplectic_invariants)
from .gaussian import (GaussianExponent, characteristic_function, covariance_from_moments,
                       default_regulator, density_exponent, rho_element,
                       sector_variances, vacuum_normalized)
from .langevin import (EnsembleStats, NonFiniteStateError, SimConfig, TrajectoryState,
                       drift, read_stats_binary, simulate_ensemble, stats_to_csv, step,
                       write_stats_binary)
from .model import (DimensionlessPoint, ModeParams, PhysicalParams, PotentialPrefactor,
                    derived_modes, eta_tilde, from_dimensionless, k_integral_oracle,
                    potential_prefactor, to_dimensionless, v_eff, v_eff_prime)
from .moments import DivergentMomentError, SecondMoments, moments_all, p2, q2
from .numutil import QuadratureError, QuadratureResult
from .spectral import KernelGrid, chi_lowfreq, chi_oscillator, kernel_K, kernel_grid, phi_k

__all__ = [
    "DimensionlessPoint", "DivergentMomentError", "EnsembleStats",
    "EntanglementResult", "GaussianExponent", "InvalidStateError", "KernelGrid",
    "ModeParams", "NonFiniteStateError", "PhysicalParams", "PotentialPrefactor",
    "QuadratureError", "QuadratureResult", "SecondMoments", "SimConfig",
    "SymplecticInvariants", "TrajectoryState", "characteristic_function",
    "chi_lowfreq", "chi_oscillator", "covariance_from_moments", "default_regulator",
    "density_exponent", "derived_modes", "drift", "eta_tilde", "from_dimensionless",
    "k_integral_oracle", "kernel_K", "kernel_grid", "log_negativity",
    "log_negativity_closed", "moments_all", "nu_minus_closed", "nu_minus_general",
    "p2", "phi_k", "potential_prefactor", "q2", "read_stats_binary", "rho_element",
    "sector_variances", "simulate_ensemble", "stats_to_csv", "step",
    "symplectic_invariants", "to_dimensionless", "v_eff", "v_eff_prime",
    "vacuum_normalized", "write_stats_binary",
]
