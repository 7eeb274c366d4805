"""Shared numerical helpers: stable hyperbolic ratios and quadrature plumbing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested accuracy.

    Carries the best value obtained and the achieved error estimate so a
    caller can decide whether the result is still usable.
    """

    def __init__(self, message, value=np.nan, error=np.inf):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadratureResult:
    """Value of a numerical integral together with its error estimate."""

    value: float
    error: float

    def scaled(self, factor: float) -> "QuadratureResult":
        return QuadratureResult(factor * self.value, abs(factor) * self.error)


def coth(x):
    """coth(x), stable for small and large arguments.

    Uses the Laurent series 1/x + x/3 - x^3/45 below |x| = 1e-4 (next term
    is ~x^5/945, i.e. < 1e-22 there) and 1/tanh otherwise.  Accurate to
    ~1e-15 relative everywhere; x = 0 is a pole and raises in numpy's
    natural way (division by zero).
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, np.where(x == 0.0, np.nan, x), 1.0)
    series = 1.0 / xs + xs / 3.0 - xs**3 / 45.0
    with np.errstate(over="ignore"):
        direct = 1.0 / np.tanh(np.where(small, 1.0, x))
    out = np.where(small, series, direct)
    if out.ndim == 0:
        return float(out)
    return out


def omega_coth(omega, half_hbar_beta: float):
    """omega * coth(omega * half_hbar_beta), finite at omega = 0.

    half_hbar_beta = hbar*beta/2; pass numpy.inf for zero temperature,
    where the factor degenerates to omega itself.  The product tends to
    1/half_hbar_beta as omega -> 0.
    """
    omega = np.asarray(omega, dtype=float)
    if np.isinf(half_hbar_beta):
        out = omega.copy()
    else:
        x = omega * half_hbar_beta
        small = np.abs(x) < 1e-4
        xs = np.where(small, 1.0, x)
        with np.errstate(over="ignore"):
            direct = omega / np.tanh(xs)
        series = (1.0 + x * x / 3.0 - x**4 / 45.0) / half_hbar_beta
        out = np.where(small, series, direct)
    if out.ndim == 0:
        return float(out)
    return out


def cosh_ratio(omega, a: float, b: float):
    """cosh(omega*a) / sinh(omega*b) for 0 <= |a| <= b, without overflow.

    Both hyperbolics grow like exp(omega*...); the ratio is rewritten with
    non-positive exponents only, so it stays finite for arbitrarily large
    omega*b.  b = inf is accepted and gives exp(-omega*(b - |a|)) -> the
    zero-temperature limit exp(omega*(|a| - b)) read as exp(-omega*tau).
    """
    omega = np.asarray(omega, dtype=float)
    aa = abs(a)
    if np.isinf(b):
        # only meaningful via a = tau - b with tau finite: |a| - b -> -tau
        raise ValueError("cosh_ratio requires finite b; handle beta=inf upstream")
    if aa > b * (1.0 + 1e-12):
        raise ValueError(f"|a|={aa} exceeds b={b}")
    t1 = np.exp(omega * (aa - b))
    t2 = np.exp(-omega * (aa + b))
    den = -np.expm1(-2.0 * omega * b)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(omega > 0.0, (t1 + t2) / np.where(omega > 0.0, den, 1.0), np.inf)
    if out.ndim == 0:
        return float(out)
    return out


def adaptive_quad(f, lo: float, hi: float, *, points=None, epsrel: float = 1e-11,
                  epsabs: float = 0.0, limit: int = 500) -> QuadratureResult:
    """scipy quad wrapper that raises QuadratureError on non-convergence."""
    interior = None
    if points:
        interior = sorted(p for p in points if lo < p < hi)
        if not interior:
            interior = None
    value, error, info, *rest = integrate.quad(
        f, lo, hi, points=interior, epsrel=epsrel, epsabs=epsabs,
        limit=limit, full_output=1)
    if rest:
        raise QuadratureError(
            f"quadrature did not converge on [{lo}, {hi}]: {rest[0]}; "
            f"achieved error estimate {error:.3e}", value=value, error=error)
    return QuadratureResult(value, error)


def kahan_add(total, comp, term):
    """One compensated-summation update; returns (total, comp).

    Works elementwise on arrays.  Keeps reductions order-insensitive to
    well below double rounding, which is what the ensemble statistics
    contract requires.
    """
    y = term - comp
    t = total + y
    comp = (t - total) - y
    return t, comp
