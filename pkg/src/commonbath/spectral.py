"""Bath response functions and the imaginary-time thermal kernel.

The bath oscillators are treated as very weakly damped, giving the response
chi_oscillator; at low frequency this collapses to f(k)*omega below a sharp
cutoff Omega (chi_lowfreq).  The fluctuation-dissipation relation then turns
the mode correlation function into an omega-integral with a cosh/sinh weight;
kernel_K is that integral with the f(k) dependence factored out, and phi_k
restores it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import PhysicalParams
from .numutil import QuadratureResult, adaptive_quad, cosh_ratio


def chi_oscillator(omega, m_k: float, omega_k: float, gamma_k: float):
    """Imaginary part of a weakly damped oscillator response,
    gamma_k*omega / (m_k [(omega^2 - omega_k^2)^2 + omega^2 gamma_k^2]).

    Odd in omega; peak height at omega = omega_k is 1/(m_k omega_k gamma_k).
    """
    omega = np.asarray(omega, dtype=float)
    den = (omega**2 - omega_k**2) ** 2 + omega**2 * gamma_k**2
    out = gamma_k * omega / (m_k * den)
    return float(out) if out.ndim == 0 else out


def chi_lowfreq(omega, f_k: float, Omega: float):
    """Low-frequency bath response f_k * omega with a sharp cutoff at Omega.

    The Heaviside cutoff is implemented literally: exactly zero at and above
    Omega.  Negative frequencies are rejected; extend by oddness if needed.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0):
        raise ValueError("chi_lowfreq is defined for omega >= 0")
    out = np.where(omega < Omega, f_k * omega, 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class KernelGrid:
    """Samples of the thermal kernel on [0, hbar*beta].

    taus are sorted sample points; values are K(tau) with the symmetry
    K(tau) = K(hbar*beta - tau) holding to quadrature tolerance.
    """

    beta_hbar: float
    taus: np.ndarray
    values: np.ndarray
    errors: np.ndarray


def _kernel_integrand(omega, tau: float, beta_hbar: float):
    """omega * cosh[omega(tau - hbar beta/2)] / sinh(hbar beta omega / 2).

    Written with non-positive exponents only, so low temperature (large
    hbar*beta*Omega) cannot overflow.  At T = 0 the weight degenerates to
    exp(-omega tau).
    """
    omega = np.asarray(omega, dtype=float)
    if math.isinf(beta_hbar):
        out = omega * np.exp(-omega * tau)
        return float(out) if out.ndim == 0 else out
    b = 0.5 * beta_hbar
    a = tau - b
    x = omega * b
    small = np.abs(x) < 1e-6
    if np.any(small):
        # omega*cosh(omega a)/sinh(omega b) -> 1/b + omega^2 (a^2/2 - b^2/6)/b
        series = (1.0 + (omega * a) ** 2 / 2.0 - x * x / 6.0) / b
        safe = np.where(small, 1.0, omega)
        direct = safe * cosh_ratio(safe, a, b)
        out = np.where(small, series, direct)
    else:
        out = omega * cosh_ratio(omega, a, b)
    return float(out) if np.ndim(out) == 0 else out


def kernel_K(tau: float, params: PhysicalParams) -> QuadratureResult:
    """Thermal kernel K(tau) = (eta/pi) int_0^Omega domega omega
    cosh[omega(tau - hbar beta/2)] / sinh(hbar omega beta / 2).

    Strictly positive, symmetric about hbar*beta/2, and flat at the value
    2*eta*Omega/(pi*hbar*beta) in the high-temperature limit.  tau outside
    [0, hbar*beta] is rejected.  With Omega finite the integral is proper;
    no short-time regularization is needed or applied.
    """
    beta_hbar = params.hbar * params.beta
    if not 0.0 <= tau <= beta_hbar:
        raise ValueError(f"tau={tau} outside [0, hbar*beta={beta_hbar}]")
    result = adaptive_quad(lambda w: _kernel_integrand(w, tau, beta_hbar),
                           0.0, params.Omega, epsrel=1e-11)
    return result.scaled(params.eta / math.pi)


def kernel_grid(params: PhysicalParams, n: int = 51) -> KernelGrid:
    """Sample kernel_K on n evenly spaced points of [0, hbar*beta]."""
    beta_hbar = params.hbar * params.beta
    if math.isinf(beta_hbar):
        raise ValueError("kernel_grid needs T > 0 (finite hbar*beta)")
    taus = np.linspace(0.0, beta_hbar, n)
    results = [kernel_K(t, params) for t in taus]
    return KernelGrid(beta_hbar=beta_hbar, taus=taus,
                      values=np.array([r.value for r in results]),
                      errors=np.array([r.error for r in results]))


def phi_k(tau: float, f_k: float, params: PhysicalParams) -> QuadratureResult:
    """Imaginary-time correlation of one bath mode,
    Phi_k(tau) = f_k * (hbar/eta) * K(tau).

    Inherits domain, symmetry, and error estimate from kernel_K.
    """
    return kernel_K(tau, params).scaled(f_k * params.hbar / params.eta)
