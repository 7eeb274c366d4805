"""Classical Langevin dynamics of the two collective coordinates.

Integrates, in the original equations' mass convention,

    M xi..   = -(eta - eta_tilde(xi)) xi.  - v_eff'(xi) + F_xi(t)
    M zeta.. = -(eta + eta_tilde(xi)) zeta.            + F_zeta(t)

with the distance-dependent friction evaluated at the current separation in
both equations.  The fluctuating forces are stationary Gaussian white noise:
'constant_eta' uses the far-field amplitude 2*eta*kB*T per equation, while
'local_fdr' (experimental) modulates the amplitude with the local friction
eta -+ eta_tilde at the midpoint separation.  The deterministic part is a
second-order explicit midpoint scheme; noise increments are added after the
deterministic update, evaluated at the midpoint state.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .model import PhysicalParams, eta_tilde, v_eff_prime
from .numutil import kahan_add

NOISE_MODES = ("off", "constant_eta", "local_fdr")

# Ensemble members integrated together per batch; statistics memory stays
# O(n_steps) regardless of ensemble size.
_CHUNK = 128


class NonFiniteStateError(RuntimeError):
    """Trajectory left the finite domain (NaN/overflow)."""

    def __init__(self, step_index: int):
        super().__init__(f"non-finite state at step {step_index}")
        self.step_index = step_index


@dataclass(frozen=True)
class TrajectoryState:
    t: float
    zeta: float
    zeta_dot: float
    xi: float
    xi_dot: float

    def __post_init__(self):
        for name in ("t", "zeta", "zeta_dot", "xi", "xi_dot"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class SimConfig:
    """Integrator configuration.

    dt*omega0 <= 0.05 is enforced whenever the potential is active, so the
    relative-coordinate oscillation stays resolved.
    """

    dt: float
    n_steps: int
    seed: int = 0
    noise_mode: str = "constant_eta"
    ensemble: int = 1
    include_potential: bool = True

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if self.ensemble < 1:
            raise ValueError(f"ensemble must be >= 1, got {self.ensemble}")
        if self.noise_mode not in NOISE_MODES:
            raise ValueError(f"noise_mode must be one of {NOISE_MODES}")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


def _check_dt(config: SimConfig, params: PhysicalParams):
    if config.include_potential and config.dt * params.omega0 > 0.05 * (1 + 1e-12):
        raise ValueError(
            f"dt*omega0 = {config.dt * params.omega0:.3g} exceeds 0.05; "
            "reduce dt for oscillatory runs")


def _accelerations(xi, zeta_dot, xi_dot, params: PhysicalParams,
                   include_potential: bool):
    """(zeta_ddot, xi_ddot) for array-valued state components."""
    et = eta_tilde(xi, params)
    zeta_ddot = -(params.eta + et) * zeta_dot / params.M
    xi_ddot = -(params.eta - et) * xi_dot / params.M
    if include_potential:
        xi_ddot = xi_ddot - v_eff_prime(xi, params) / params.M
    return zeta_ddot, xi_ddot


def drift(state: TrajectoryState, params: PhysicalParams,
          include_potential: bool = True) -> tuple[float, float]:
    """Deterministic accelerations (zeta_ddot, xi_ddot) at a state."""
    az, ax = _accelerations(np.float64(state.xi), np.float64(state.zeta_dot),
                            np.float64(state.xi_dot), params, include_potential)
    return float(az), float(ax)


def _advance(zeta, zeta_dot, xi, xi_dot, noise, config: SimConfig,
             params: PhysicalParams):
    """One midpoint step on array state; noise is an (..., 2) standard-normal
    draw (zeta column first) or None."""
    dt = config.dt
    az1, ax1 = _accelerations(xi, zeta_dot, xi_dot, params, config.include_potential)
    zeta_m = zeta + 0.5 * dt * zeta_dot
    xi_m = xi + 0.5 * dt * xi_dot
    u_m = zeta_dot + 0.5 * dt * az1
    v_m = xi_dot + 0.5 * dt * ax1
    az2, ax2 = _accelerations(xi_m, u_m, v_m, params, config.include_potential)
    zeta_new = zeta + dt * u_m
    xi_new = xi + dt * v_m
    u_new = zeta_dot + dt * az2
    v_new = xi_dot + dt * ax2
    if noise is not None and config.noise_mode != "off" and params.T > 0.0:
        kT = params.kB * params.T
        if config.noise_mode == "constant_eta":
            amp_zeta = np.sqrt(2.0 * params.eta * kT * dt)
            amp_xi = amp_zeta
        else:  # local_fdr, midpoint (Stratonovich-like) amplitude
            et_m = eta_tilde(xi_m, params)
            amp_zeta = np.sqrt(2.0 * (params.eta + et_m) * kT * dt)
            amp_xi = np.sqrt(2.0 * (params.eta - et_m) * kT * dt)
        u_new = u_new + amp_zeta * noise[..., 0] / params.M
        v_new = v_new + amp_xi * noise[..., 1] / params.M
    return zeta_new, u_new, xi_new, v_new


def step(state: TrajectoryState, config: SimConfig, params: PhysicalParams,
         rng: np.random.Generator) -> TrajectoryState:
    """Advance a single trajectory by one time step.

    Draws exactly one standard-normal pair from rng when noise is active,
    so a fixed seed reproduces the trajectory bit for bit.
    """
    _check_dt(config, params)
    noise = None
    if config.noise_mode != "off" and params.T > 0.0:
        noise = rng.standard_normal(2)
    z, u, x, v = _advance(np.float64(state.zeta), np.float64(state.zeta_dot),
                          np.float64(state.xi), np.float64(state.xi_dot),
                          noise, config, params)
    values = (float(z), float(u), float(x), float(v))
    if not all(math.isfinite(w) for w in values):
        raise NonFiniteStateError(int(round(state.t / config.dt)) + 1)
    return TrajectoryState(t=state.t + config.dt, zeta=values[0], zeta_dot=values[1],
                           xi=values[2], xi_dot=values[3])


@dataclass(frozen=True)
class EnsembleStats:
    """Per-time-slice ensemble statistics of a Langevin run.

    msd_* are mean squared displacements from each trajectory's own start;
    spectrum_xi is the ensemble-mean periodogram of xi(t) with the time mean
    removed, on angular frequencies spectrum_omega.
    """

    t: np.ndarray
    mean_zeta: np.ndarray
    msd_zeta: np.ndarray
    mean_xi: np.ndarray
    msd_xi: np.ndarray
    spectrum_omega: np.ndarray
    spectrum_xi: np.ndarray
    n_trajectories: int
    config: SimConfig

    def dominant_xi_frequency(self) -> float:
        """Angular frequency of the largest nonzero-frequency spectral peak."""
        idx = int(np.argmax(self.spectrum_xi[1:])) + 1
        return float(self.spectrum_omega[idx])


def _trajectory_noise(seed: int, index: int, n_steps: int):
    return np.random.default_rng([seed, index]).standard_normal((n_steps, 2))


def simulate_ensemble(config: SimConfig, params: PhysicalParams,
                      initial: TrajectoryState) -> EnsembleStats:
    """Integrate an ensemble of independent trajectories and reduce statistics.

    Every trajectory draws its noise from a generator keyed on
    (config.seed, trajectory index), so results do not depend on chunking or
    evaluation order; the per-slice reductions use compensated summation.
    Memory per statistic is O(n_steps), independent of ensemble size.
    """
    _check_dt(config, params)
    n_slices = config.n_steps + 1
    n_freq = n_slices // 2 + 1
    sums = {name: np.zeros(n_slices) for name in ("zeta", "dz2", "xi", "dx2")}
    comps = {name: np.zeros(n_slices) for name in sums}
    spec_sum = np.zeros(n_freq)
    spec_comp = np.zeros(n_freq)

    noise_on = config.noise_mode != "off" and params.T > 0.0
    for start in range(0, config.ensemble, _CHUNK):
        m = min(_CHUNK, config.ensemble - start)
        zeta = np.full(m, initial.zeta)
        zeta_dot = np.full(m, initial.zeta_dot)
        xi = np.full(m, initial.xi)
        xi_dot = np.full(m, initial.xi_dot)
        traj_zeta = np.empty((n_slices, m))
        traj_xi = np.empty((n_slices, m))
        traj_zeta[0] = zeta
        traj_xi[0] = xi
        if noise_on:
            noise = np.stack([_trajectory_noise(config.seed, start + j, config.n_steps)
                              for j in range(m)], axis=1)  # (n_steps, m, 2)
        for k in range(config.n_steps):
            nk = noise[k] if noise_on else None
            zeta, zeta_dot, xi, xi_dot = _advance(zeta, zeta_dot, xi, xi_dot,
                                                  nk, config, params)
            if not (np.all(np.isfinite(zeta)) and np.all(np.isfinite(xi))
                    and np.all(np.isfinite(zeta_dot)) and np.all(np.isfinite(xi_dot))):
                raise NonFiniteStateError(k + 1)
            traj_zeta[k + 1] = zeta
            traj_xi[k + 1] = xi

        for j in range(m):
            zj = traj_zeta[:, j]
            xj = traj_xi[:, j]
            sums["zeta"], comps["zeta"] = kahan_add(sums["zeta"], comps["zeta"], zj)
            sums["xi"], comps["xi"] = kahan_add(sums["xi"], comps["xi"], xj)
            sums["dz2"], comps["dz2"] = kahan_add(sums["dz2"], comps["dz2"],
                                                  (zj - zj[0]) ** 2)
            sums["dx2"], comps["dx2"] = kahan_add(sums["dx2"], comps["dx2"],
                                                  (xj - xj[0]) ** 2)
            power = np.abs(np.fft.rfft(xj - xj.mean())) ** 2
            spec_sum, spec_comp = kahan_add(spec_sum, spec_comp, power)

    n = float(config.ensemble)
    t = initial.t + config.dt * np.arange(n_slices)
    omega = 2.0 * math.pi * np.fft.rfftfreq(n_slices, d=config.dt)
    return EnsembleStats(
        t=t, mean_zeta=sums["zeta"] / n, msd_zeta=sums["dz2"] / n,
        mean_xi=sums["xi"] / n, msd_xi=sums["dx2"] / n,
        spectrum_omega=omega, spectrum_xi=spec_sum / n,
        n_trajectories=config.ensemble, config=config)


def stats_to_csv(stats: EnsembleStats, fh, comments=()):
    """Write the statistics table as CSV with '#'-prefixed metadata lines."""
    for line in comments:
        fh.write(f"# {line}\n")
    fh.write("t,mean_zeta,msd_zeta,mean_xi,msd_xi\n")
    for i in range(len(stats.t)):
        row = (stats.t[i], stats.mean_zeta[i], stats.msd_zeta[i],
               stats.mean_xi[i], stats.msd_xi[i])
        fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


# Binary layout (all little-endian): magic b'CBLS', uint32 version (=1),
# uint32 n_slices, then five contiguous float64 arrays of length n_slices in
# column order t, mean_zeta, msd_zeta, mean_xi, msd_xi.
BINARY_MAGIC = b"CBLS"
BINARY_VERSION = 1


def write_stats_binary(stats: EnsembleStats, path: str):
    n = len(stats.t)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sII", BINARY_MAGIC, BINARY_VERSION, n))
        for arr in (stats.t, stats.mean_zeta, stats.msd_zeta,
                    stats.mean_xi, stats.msd_xi):
            fh.write(np.asarray(arr, dtype="<f8").tobytes())


def read_stats_binary(path: str) -> dict[str, np.ndarray]:
    """Read back a binary dump; returns the five named columns."""
    with open(path, "rb") as fh:
        magic, version, n = struct.unpack("<4sII", fh.read(12))
        if magic != BINARY_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        if version != BINARY_VERSION:
            raise ValueError(f"unsupported version {version}")
        data = np.frombuffer(fh.read(5 * 8 * n), dtype="<f8")
    cols = data.reshape(5, n)
    names = ("t", "mean_zeta", "msd_zeta", "mean_xi", "msd_xi")
    return dict(zip(names, cols))
