"""Equilibrium second moments of the collective modes by quadrature.

Each mode j contributes a position and a momentum variance

    <q_j^2> = (2 hbar gamma_j / m_j pi) int_0^Omega  omega   coth(hbar omega beta/2) / D(omega) domega
    <p_j^2> = (2 m_j hbar gamma_j / pi) int_0^Omega  omega^3 coth(hbar omega beta/2) / D(omega) domega

with D(omega) = (omega_j^2 - omega^2)^2 + 4 gamma_j^2 omega^2.  For the free
center of mass (omega_zeta = 0) the position integrand behaves like 1/omega^2
near the origin and <q_zeta^2> diverges; that divergence is carried as an
explicit infinity, never as a large number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModeParams, PhysicalParams, derived_modes
from .numutil import QuadratureResult, adaptive_quad, omega_coth


class DivergentMomentError(ValueError):
    """Requested a moment whose defining integral diverges."""


@dataclass(frozen=True)
class SecondMoments:
    """The four equilibrium variances; q2_zeta is +inf for every parameter set.

    *_err fields are quadrature error estimates for the finite entries.
    """

    q2_xi: float
    p2_xi: float
    p2_zeta: float
    q2_zeta: float = math.inf
    q2_xi_err: float = 0.0
    p2_xi_err: float = 0.0
    p2_zeta_err: float = 0.0

    @property
    def q2_zeta_divergent(self) -> bool:
        return math.isinf(self.q2_zeta)


def _split_points(mode: ModeParams, Omega: float):
    # Keep the resonance and the midpoint as subdivision seeds; for small
    # gamma the integrable peak at omega_j is the only sharp feature.
    pts = [0.5 * Omega]
    if mode.omega > 0.0:
        pts += [mode.omega, mode.omega - 5.0 * mode.gamma, mode.omega + 5.0 * mode.gamma]
    return pts


def q2(mode: ModeParams, params: PhysicalParams) -> QuadratureResult:
    """Equilibrium position variance of one mode.

    Rejects omega_j = 0: at any T > 0 the integrand ~ 1/omega^2 at the
    origin (and ~ 1/omega at T = 0), so the integral diverges; moments_all
    is the place that deals with the free mode.
    """
    if mode.omega == 0.0:
        raise DivergentMomentError(
            "position variance of the free (omega=0) mode diverges; "
            "it is reported as infinite by moments_all")
    half = 0.5 * params.hbar * params.beta

    def integrand(w):
        den = (mode.omega**2 - w**2) ** 2 + 4.0 * mode.gamma**2 * w**2
        return omega_coth(w, half) / den

    prefactor = 2.0 * params.hbar * mode.gamma / (mode.m * math.pi)
    result = adaptive_quad(integrand, 0.0, params.Omega,
                           points=_split_points(mode, params.Omega))
    return result.scaled(prefactor)


def p2(mode: ModeParams, params: PhysicalParams) -> QuadratureResult:
    """Equilibrium momentum variance of one mode; omega_j = 0 is allowed.

    For the free mode the integrand reduces exactly to
    omega*coth / (omega^2 + 4 gamma^2), finite at the origin.  The value
    grows logarithmically with the cutoff Omega.
    """
    half = 0.5 * params.hbar * params.beta

    if mode.omega == 0.0:
        def integrand(w):
            return omega_coth(w, half) / (w**2 + 4.0 * mode.gamma**2)
    else:
        def integrand(w):
            den = (mode.omega**2 - w**2) ** 2 + 4.0 * mode.gamma**2 * w**2
            return omega_coth(w, half) * w**2 / den

    prefactor = 2.0 * mode.m * params.hbar * mode.gamma / math.pi
    result = adaptive_quad(integrand, 0.0, params.Omega,
                           points=_split_points(mode, params.Omega))
    return result.scaled(prefactor)


def moments_all(params: PhysicalParams) -> SecondMoments:
    """All equilibrium variances for one parameter set.

    q2_zeta is flagged infinite unconditionally; its physical content is
    1/<q_zeta^2> -> 0 (translation invariance of the free center of mass).
    """
    zeta, xi = derived_modes(params)
    q2_xi = q2(xi, params)
    p2_xi = p2(xi, params)
    p2_zeta = p2(zeta, params)
    return SecondMoments(
        q2_xi=q2_xi.value, p2_xi=p2_xi.value, p2_zeta=p2_zeta.value,
        q2_zeta=math.inf,
        q2_xi_err=q2_xi.error, p2_xi_err=p2_xi.error, p2_zeta_err=p2_zeta.error)
