"""Assembly of the two-particle Gaussian equilibrium state.

The state factorizes over center-of-mass and relative coordinates; in the
original particle coordinates its position matrix elements are
exp(-f) with

    f = c1 (y1-y2+x1-x2)^2 + c2 (y1-y2-x1+x2)^2
      + c3 (y1+y2+x1+x2)^2 + c4 (y1+y2-x1-x2)^2,

c1 = 1/(8<q_xi^2>), c2 = <p_xi^2>/(2 hbar^2), c3 = 1/(32<q_zeta^2>),
c4 = <p_zeta^2>/(8 hbar^2).  The divergent <q_zeta^2> enters only through
c3 -> 0, which is the translation-invariant (non-normalizable) center of
mass; only the relative sector is normalized, so rho is a density per unit
center-of-mass length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .moments import SecondMoments


@dataclass(frozen=True)
class GaussianExponent:
    """Quadratic coefficients of the density-matrix exponent.

    c3 = 0 exactly iff <q_zeta^2> is infinite (free center of mass).
    """

    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        for name in ("c1", "c2", "c4"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.c3 < 0.0:
            raise ValueError("c3 must be >= 0")


def density_exponent(moments: SecondMoments, hbar: float = 1.0) -> GaussianExponent:
    """Exponent coefficients from the equilibrium second moments."""
    for name in ("q2_xi", "p2_xi", "p2_zeta"):
        value = getattr(moments, name)
        if not (math.isfinite(value) and value > 0.0):
            raise ValueError(f"{name} must be finite and positive, got {value}")
    if not moments.q2_zeta > 0.0:
        raise ValueError(f"q2_zeta must be positive or inf, got {moments.q2_zeta}")
    c3 = 0.0 if math.isinf(moments.q2_zeta) else 1.0 / (32.0 * moments.q2_zeta)
    return GaussianExponent(
        c1=1.0 / (8.0 * moments.q2_xi),
        c2=moments.p2_xi / (2.0 * hbar**2),
        c3=c3,
        c4=moments.p2_zeta / (8.0 * hbar**2))


def rho_element(x1, x2, y1, y2, exponent: GaussianExponent):
    """Position matrix element <x1 x2|rho|y1 y2>.

    Normalization: the diagonal of the relative sector integrates to one;
    the center-of-mass factor is left at unity (density per unit CM length).
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    rel_sum = y1 - y2 + x1 - x2
    rel_diff = y1 - y2 - x1 + x2
    cm_sum = y1 + y2 + x1 + x2
    cm_diff = y1 + y2 - x1 - x2
    f = (exponent.c1 * rel_sum**2 + exponent.c2 * rel_diff**2
         + exponent.c3 * cm_sum**2 + exponent.c4 * cm_diff**2)
    # C_xi = 1/sqrt(2 pi <q_xi^2>) expressed through c1 = 1/(8<q_xi^2>)
    norm = 2.0 * math.sqrt(exponent.c1 / math.pi)
    out = norm * np.exp(-f)
    return float(out) if out.ndim == 0 else out


def default_regulator(moments: SecondMoments, hbar: float = 1.0) -> float:
    """Finite stand-in for the divergent <q_zeta^2>; large enough that every
    downstream entanglement quantity is converged at the 1e-6 level."""
    return 1e6 * max(moments.q2_xi, hbar**2 / moments.p2_zeta)


def covariance_from_moments(moments: SecondMoments,
                            regulator: float | None = None) -> np.ndarray:
    """4x4 covariance matrix over (x1, p1, x2, p2).

    Uses x1 = zeta + xi/2, x2 = zeta - xi/2, p_zeta = p1 + p2 and
    p_xi = (p1 - p2)/2, with sector variances a = <q_zeta^2> (or the
    regulator), b = <p_zeta^2>, c = <q_xi^2>, d = <p_xi^2>:

        <x_i^2> = a + c/4     <x1 x2> = a - c/4
        <p_i^2> = b/4 + d     <p1 p2> = b/4 - d

    Thermal equilibrium has no q-p correlations, so all cross entries vanish.
    """
    if moments.q2_zeta_divergent:
        if regulator is None:
            raise ValueError("q2_zeta is infinite: a finite regulator is required")
        if not regulator > 0.0:
            raise ValueError(f"regulator must be positive, got {regulator}")
        a = regulator
    else:
        a = moments.q2_zeta
    b, c, d = moments.p2_zeta, moments.q2_xi, moments.p2_xi
    xx = a + 0.25 * c
    xy = a - 0.25 * c
    pp = 0.25 * b + d
    pq = 0.25 * b - d
    return np.array([
        [xx, 0.0, xy, 0.0],
        [0.0, pp, 0.0, pq],
        [xy, 0.0, xx, 0.0],
        [0.0, pq, 0.0, pp],
    ])


def sector_variances(sigma: np.ndarray) -> tuple[float, float, float, float]:
    """Invert covariance_from_moments: recover (a, b, c, d) from sigma."""
    a = 0.5 * (sigma[0, 0] + sigma[0, 2])
    c = 2.0 * (sigma[0, 0] - sigma[0, 2])
    b = 2.0 * (sigma[1, 1] + sigma[1, 3])
    d = 0.5 * (sigma[1, 1] - sigma[1, 3])
    return a, b, c, d


def characteristic_function(X, sigma: np.ndarray):
    """Gaussian characteristic function exp(-X.sigma.X/2) for zero-mean states.

    Equals 1 at X = 0 and stays <= 1 whenever sigma is positive semidefinite.
    X may be a single 4-vector or an (..., 4) stack.
    """
    X = np.asarray(X, dtype=float)
    quad_form = np.einsum("...i,ij,...j->...", X, sigma, X)
    out = np.exp(-0.5 * quad_form)
    return float(out) if out.ndim == 0 else out


def vacuum_normalized(sigma: np.ndarray, hbar: float = 1.0) -> np.ndarray:
    """sigma in units where the two-mode vacuum is the identity.

    Uniform scaling by 2/hbar; symplectic eigenvalues of the result are
    2*nu/hbar, so the separability boundary sits at 1.
    """
    return 2.0 * np.asarray(sigma, dtype=float) / hbar
