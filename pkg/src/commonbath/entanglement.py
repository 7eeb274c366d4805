"""Symplectic invariants, partial-transpose eigenvalue, and logarithmic
negativity for the two-particle Gaussian state.

Two routes to the smallest partial-transpose symplectic eigenvalue are kept
side by side: nu_minus_general works on any 4x4 covariance matrix through
the block-determinant invariants, while nu_minus_closed uses the product
sqrt(<p_zeta^2><q_xi^2>)/2 that the equilibrium state's structure implies.

Convention note: under the standard Simon normalization a state is entangled
iff 2*nu_minus < hbar, which makes an exactly-product two-oscillator ground
state sit on the boundary with E_N = 0.  The 'paper' convention uses
E_N = max(0, -ln(nu_minus/hbar)) instead, which assigns that same product
state E_N = ln 2; it is kept available behind the convention flag so the
printed closed form can be reproduced, but 'standard' is the default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .moments import SecondMoments

CONVENTIONS = ("standard", "paper")

# Relative slack on the invariant discriminant, absorbing quadrature noise
# in covariance entries near the pure-state boundary.
_DISC_RTOL = 1e-12


class InvalidStateError(ValueError):
    """Covariance matrix is not a valid Gaussian state (negative discriminant)."""


@dataclass(frozen=True)
class SymplecticInvariants:
    """Block determinants of sigma = [[alpha, gamma], [gamma^T, beta]] and the
    partial-transpose combination Delta~ = det(alpha)+det(beta)-2det(gamma)."""

    delta_tilde: float
    det_sigma: float
    det_alpha: float
    det_beta: float
    det_gamma: float


@dataclass(frozen=True)
class EntanglementResult:
    nu_minus: float
    E_N: float
    separable: bool
    convention: str


def _det2(block: np.ndarray) -> float:
    return float(block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0])


def symplectic_invariants(sigma: np.ndarray) -> SymplecticInvariants:
    """Local symplectic invariants of a two-mode covariance matrix.

    The sign convention already includes the partial transpose: transposition
    of the second mode flips the sign of det(gamma), so Delta~ carries the
    -2 det(gamma) combination.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got {sigma.shape}")
    if not np.allclose(sigma, sigma.T, rtol=1e-10, atol=0.0):
        raise ValueError("covariance matrix must be symmetric")
    det_alpha = _det2(sigma[:2, :2])
    det_beta = _det2(sigma[2:, 2:])
    det_gamma = _det2(sigma[:2, 2:])
    det_sigma = float(np.linalg.det(sigma))
    return SymplecticInvariants(
        delta_tilde=det_alpha + det_beta - 2.0 * det_gamma,
        det_sigma=det_sigma,
        det_alpha=det_alpha, det_beta=det_beta, det_gamma=det_gamma)


def nu_minus_general(sigma: np.ndarray) -> float:
    """Smallest partial-transpose symplectic eigenvalue of a 4x4 covariance
    matrix, nu~_-^2 = (Delta~ - sqrt(Delta~^2 - 4 det sigma))/2.

    Evaluated through the conjugate form 2 det(sigma)/(Delta~ + sqrt(disc))
    so a tiny root is not lost to cancellation when the matrix carries a huge
    regulated center-of-mass variance.  A discriminant below -1e-12 relative
    is rejected as an invalid state; smaller negatives are clipped to zero.
    """
    inv = symplectic_invariants(sigma)
    disc = inv.delta_tilde**2 - 4.0 * inv.det_sigma
    scale = max(inv.delta_tilde**2, abs(4.0 * inv.det_sigma))
    if disc < -_DISC_RTOL * scale:
        raise InvalidStateError(
            f"discriminant {disc:.3e} < 0 beyond tolerance: "
            "not a valid Gaussian covariance matrix")
    disc = max(disc, 0.0)
    denom = inv.delta_tilde + math.sqrt(disc)
    if denom <= 0.0:
        raise InvalidStateError("nonpositive Delta~ + sqrt(disc): invalid state")
    nu_sq = max(2.0 * inv.det_sigma / denom, 0.0)
    return math.sqrt(nu_sq)


def nu_minus_closed(moments: SecondMoments) -> float:
    """Closed-form nu~_- = sqrt(<p_zeta^2> <q_xi^2>)/2 in action units.

    This is the infinite-regulator limit of the general route for the
    equilibrium state's covariance structure; division by hbar is left to
    the convention layer in log_negativity.
    """
    for name in ("p2_zeta", "q2_xi"):
        value = getattr(moments, name)
        if not (math.isfinite(value) and value > 0.0):
            raise ValueError(f"{name} must be finite and positive, got {value}")
    return 0.5 * math.sqrt(moments.p2_zeta * moments.q2_xi)


def log_negativity(nu_minus: float, hbar: float = 1.0,
                   convention: str = "standard") -> EntanglementResult:
    """Logarithmic negativity and separability verdict from nu~_-.

    standard: E_N = max(0, -ln(2 nu/hbar)), separable iff 2 nu >= hbar.
    paper:    E_N = max(0, -ln(nu/hbar)),   separable iff nu >= hbar.
    """
    if not nu_minus > 0.0:
        raise ValueError(f"nu_minus must be positive, got {nu_minus}")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    if convention == "standard":
        ratio = 2.0 * nu_minus / hbar
    else:
        ratio = nu_minus / hbar
    E_N = max(0.0, -math.log(ratio))
    return EntanglementResult(nu_minus=nu_minus, E_N=E_N,
                              separable=(E_N == 0.0), convention=convention)


def log_negativity_closed(moments: SecondMoments, hbar: float = 1.0,
                          convention: str = "standard") -> EntanglementResult:
    """Convenience composition of nu_minus_closed and log_negativity."""
    return log_negativity(nu_minus_closed(moments), hbar=hbar, convention=convention)
