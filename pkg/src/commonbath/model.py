"""Physical parameters, derived mode constants, and the bath-mediated
interaction between two Brownian particles in a common reservoir.

The reservoir couples to each particle through plane-wave vertices with an
exponential wavenumber envelope g(k) = exp(-k/k0).  Integrating the bath out
leaves a Lorentzian attraction v_eff(xi) between the particles and a
distance-dependent ("anomalous") friction eta_tilde(xi), both functions of
the separation xi only.  k_integral_oracle re-derives both directly from the
k-space integrals by numerical quadrature and is the independent check used
throughout the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .numutil import QuadratureResult


@dataclass(frozen=True)
class PhysicalParams:
    """Bath and system constants defining one experiment.

    M        particle mass (both particles identical)
    eta      dissipation constant (mass/time)
    Omega    spectral cutoff frequency of the bath (kept finite always)
    k0       inverse length scale of the bath correlations
    T        temperature; T = 0 selects the ground state
    hbar,kB  explicit so SI parameter sets work; default to natural units
    """

    M: float
    eta: float
    Omega: float
    k0: float
    T: float
    hbar: float = 1.0
    kB: float = 1.0

    def __post_init__(self):
        for name in ("M", "eta", "Omega", "k0", "hbar", "kB"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be finite and positive, got {value}")
        if not (math.isfinite(self.T) and self.T >= 0.0):
            raise ValueError(f"T must be finite and >= 0, got {self.T}")

    @property
    def omega0(self) -> float:
        """Small-separation oscillation frequency, omega0^2 = 4*eta*Omega/(M*pi)."""
        return math.sqrt(4.0 * self.eta * self.Omega / (self.M * math.pi))

    @property
    def beta(self) -> float:
        """Inverse temperature 1/(kB*T); inf at T = 0."""
        return math.inf if self.T == 0.0 else 1.0 / (self.kB * self.T)


@dataclass(frozen=True)
class ModeParams:
    """Effective oscillator for one collective coordinate (label 'zeta' or 'xi')."""

    m: float
    omega: float
    gamma: float
    label: str

    def __post_init__(self):
        if self.label not in ("zeta", "xi"):
            raise ValueError(f"label must be 'zeta' or 'xi', got {self.label!r}")
        if not self.m > 0.0:
            raise ValueError(f"mode mass must be positive, got {self.m}")
        if not self.gamma > 0.0:
            raise ValueError(f"mode damping must be positive, got {self.gamma}")
        if self.omega < 0.0:
            raise ValueError(f"mode frequency must be >= 0, got {self.omega}")
        if self.label == "zeta" and self.omega != 0.0:
            raise ValueError("the center-of-mass mode is free: omega must be 0")


@dataclass(frozen=True)
class DimensionlessPoint:
    """Coupling ratio r = gamma_zeta/omega0 and squared reduced temperature
    A = (kB*T/(hbar*gamma_zeta))^2."""

    r: float
    A: float

    def __post_init__(self):
        if not self.r > 0.0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not self.A >= 0.0:
            raise ValueError(f"A must be >= 0, got {self.A}")


def derived_modes(params: PhysicalParams) -> tuple[ModeParams, ModeParams]:
    """Effective (mass, frequency, damping) of the two collective modes.

    Center of mass: m = 2M, omega = 0, friction constant 4*eta, hence
    gamma_zeta = 4*eta/(2*2M) = eta/M.  Relative coordinate: m = M/2,
    omega^2 = 4*eta*Omega/(M*pi), friction constant eta/2, hence
    gamma_xi = (eta/2)/(2*(M/2)) = eta/(2M).
    """
    zeta = ModeParams(m=2.0 * params.M, omega=0.0,
                      gamma=params.eta / params.M, label="zeta")
    xi = ModeParams(m=0.5 * params.M, omega=params.omega0,
                    gamma=params.eta / (2.0 * params.M), label="xi")
    return zeta, xi


def from_dimensionless(point: DimensionlessPoint, omega0: float = 1.0,
                       M: float = 1.0, hbar: float = 1.0, kB: float = 1.0,
                       k0: float = 1.0) -> PhysicalParams:
    """Physical parameters realizing a given (r, A) at reference scale omega0.

    Inverts r = gamma_zeta/omega0 and A = (kB*T/(hbar*gamma_zeta))^2 with
    gamma_zeta = eta/M, keeping omega0 fixed: eta = M*r*omega0 and
    Omega = pi*omega0/(4r).  k0 never enters the equilibrium moments and is
    passed through for the potential/friction functions.
    """
    if not omega0 > 0.0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    eta = M * point.r * omega0
    Omega = math.pi * omega0 / (4.0 * point.r)
    gamma_zeta = point.r * omega0
    T = hbar * gamma_zeta * math.sqrt(point.A) / kB
    return PhysicalParams(M=M, eta=eta, Omega=Omega, k0=k0, T=T, hbar=hbar, kB=kB)


def to_dimensionless(params: PhysicalParams) -> DimensionlessPoint:
    """The (r, A) coordinates of a physical parameter set."""
    gamma_zeta = params.eta / params.M
    r = gamma_zeta / params.omega0
    A = (params.kB * params.T / (params.hbar * gamma_zeta)) ** 2
    return DimensionlessPoint(r=r, A=A)


def v_eff(xi, params: PhysicalParams):
    """Bath-mediated potential between the particles,
    v_eff(xi) = -(2*Omega*eta/(pi*k0^2)) / (k0^2 xi^2 + 1).

    Even in xi, strictly negative, Lorentzian with range 1/k0.
    """
    xi = np.asarray(xi, dtype=float)
    depth = 2.0 * params.Omega * params.eta / (math.pi * params.k0**2)
    out = -depth / (params.k0**2 * xi**2 + 1.0)
    return float(out) if out.ndim == 0 else out


def v_eff_prime(xi, params: PhysicalParams):
    """d v_eff/d xi = (4*Omega*eta/pi) * xi / (k0^2 xi^2 + 1)^2.

    Odd, vanishes at xi = 0; slope there is M*omega0^2 = 4*eta*Omega/pi.
    """
    xi = np.asarray(xi, dtype=float)
    out = (4.0 * params.Omega * params.eta / math.pi) * xi / (params.k0**2 * xi**2 + 1.0) ** 2
    return float(out) if out.ndim == 0 else out


def eta_tilde(xi, params: PhysicalParams):
    """Distance-dependent friction correction,
    eta_tilde(xi) = eta * (1 - 3 k0^2 xi^2) / (1 + k0^2 xi^2)^3.

    Equals eta at contact, crosses zero at k0*xi = 1/sqrt(3), dips to
    -eta/4 at k0*xi = 1 and decays to zero at large separation.
    """
    xi = np.asarray(xi, dtype=float)
    u = params.k0**2 * xi**2
    out = params.eta * (1.0 - 3.0 * u) / (1.0 + u) ** 3
    return float(out) if out.ndim == 0 else out


# Integration window in units of the envelope decay constant k0; the
# neglected tail is bounded analytically below and reported in the result.
_KMAX_DECADES = 40.0


def k_integral_oracle(theta: float, params: PhysicalParams,
                      weight: str = "friction") -> QuadratureResult:
    """Brute-force k-space integral behind eta_tilde and v_eff.

    Evaluates C * int_0^{40 k0} dk k^p exp(-k/k0) cos(k theta) with p = 2
    for weight='friction' and p = 0 for weight='potential'.  The overall
    constant C = eta/(2 k0^3) is fixed by requiring the friction weight at
    theta = 0 to reproduce eta (int k^2 exp(-k/k0) dk = 2 k0^3).

    The friction-weight result equals eta_tilde(theta) identically; the
    potential-weight result is proportional to -v_eff(theta) with a constant
    measured by potential_prefactor, not assumed.  The reported error adds
    the analytic bound on the truncated exp(-40) tail to the quadrature
    estimate.
    """
    if weight == "friction":
        power = 2
    elif weight == "potential":
        power = 0
    else:
        raise ValueError(f"weight must be 'friction' or 'potential', got {weight!r}")

    k0 = params.k0
    norm = params.eta / (2.0 * k0**3)
    kmax = _KMAX_DECADES * k0

    def envelope(k):
        return norm * k**power * np.exp(-k / k0)

    if theta == 0.0:
        value, err = integrate.quad(envelope, 0.0, kmax, epsabs=1e-14, epsrel=1e-12,
                                    limit=400)
    else:
        # QAWO handles the cos(k*theta) oscillation explicitly.
        value, err = integrate.quad(envelope, 0.0, kmax, weight="cos", wvar=theta,
                                    epsabs=1e-14, epsrel=1e-12, limit=400)
    tail = math.exp(-_KMAX_DECADES)
    if power == 0:
        truncation = norm * k0 * tail
    else:
        truncation = norm * k0 * tail * (kmax**2 + 2.0 * kmax * k0 + 2.0 * k0**2)
    return QuadratureResult(value, err + truncation)


@dataclass(frozen=True)
class PotentialPrefactor:
    """Measured proportionality between the p=0 oracle and -v_eff.

    measured      least-squares constant in oracle = measured * (-v_eff)
    fit_residual  worst relative deviation of the oracle from the fit
    claimed       the pi/Omega value quoted for the same identity upstream
    """

    measured: float
    fit_residual: float
    claimed: float

    @property
    def ratio_to_claimed(self) -> float:
        return self.measured / self.claimed


def potential_prefactor(params: PhysicalParams, thetas=None) -> PotentialPrefactor:
    """Fit the potential-weight oracle against -v_eff over a theta grid.

    With the eta-anchored normalization the measured constant comes out at
    pi/(4 Omega), a factor 4 below the quoted pi/Omega; both are reported so
    the discrepancy stays visible instead of being silently absorbed.
    """
    if thetas is None:
        thetas = np.linspace(0.0, 6.0 / params.k0, 25)
    oracle = np.array([k_integral_oracle(t, params, "potential").value for t in thetas])
    shape = -v_eff(thetas, params)
    measured = float(np.dot(oracle, shape) / np.dot(shape, shape))
    residual = float(np.max(np.abs(oracle - measured * shape) / (measured * shape)))
    return PotentialPrefactor(measured=measured, fit_residual=residual,
                              claimed=math.pi / params.Omega)
