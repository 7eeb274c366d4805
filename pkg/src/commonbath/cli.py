"""Command-line interface.

Subcommands: moments, sweep, death, langevin, density.  Input is a single
JSON config with sections {physical | dimensionless | sweep | langevin |
death | density}; exactly one of physical/dimensionless is required.  All
output is CSV with '#'-prefixed metadata comments and 17-significant-digit
floats; every command is deterministic given config + seed.  Exit codes:
0 ok, 1 numerical failure, 2 config error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import subprocess
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .entanglement import CONVENTIONS, log_negativity, nu_minus_closed, nu_minus_general
from .gaussian import covariance_from_moments, default_regulator, density_exponent, rho_element
from .langevin import (SimConfig, TrajectoryState, simulate_ensemble, stats_to_csv,
                       write_stats_binary)
from .model import DimensionlessPoint, PhysicalParams, from_dimensionless
from .moments import moments_all
from .numutil import QuadratureError

SCHEMA_COMMENT = "commonbath-csv v1"


class ConfigError(Exception):
    """Invalid or inconsistent configuration; reported with exit code 2."""


@dataclass(frozen=True)
class ARange:
    min: float
    max: float
    count: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSpec:
    r_values: tuple
    A_range: ARange
    convention: str = "standard"
    regulator_check: bool = False


DEFAULT_R_VALUES = tuple(round(0.1 * k, 10) for k in range(1, 10))
DEFAULT_A_RANGE = ARange(min=0.1, max=1.0, count=25)


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.17g}"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def _float_field(section: dict, section_name: str, key: str, default=None) -> float:
    if key not in section:
        if default is None:
            raise ConfigError(f"{section_name}.{key}: required field missing")
        return float(default)
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section_name}.{key}: expected a number, got {value!r}")
    return float(value)


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return cfg


def params_from_config(cfg: dict) -> PhysicalParams:
    """Resolve the physical parameter set; exactly one of the two sections."""
    has_phys = "physical" in cfg
    has_dim = "dimensionless" in cfg
    if has_phys == has_dim:
        raise ConfigError("exactly one of 'physical' or 'dimensionless' is required")
    if has_phys:
        sec = cfg["physical"]
        try:
            return PhysicalParams(
                M=_float_field(sec, "physical", "M"),
                eta=_float_field(sec, "physical", "eta"),
                Omega=_float_field(sec, "physical", "Omega"),
                k0=_float_field(sec, "physical", "k0"),
                T=_float_field(sec, "physical", "T"),
                hbar=_float_field(sec, "physical", "hbar", 1.0),
                kB=_float_field(sec, "physical", "kB", 1.0))
        except ValueError as exc:
            raise ConfigError(f"physical: {exc}") from exc
    sec = cfg["dimensionless"]
    try:
        point = DimensionlessPoint(r=_float_field(sec, "dimensionless", "r"),
                                   A=_float_field(sec, "dimensionless", "A"))
        return from_dimensionless(
            point,
            omega0=_float_field(sec, "dimensionless", "omega0", 1.0),
            M=_float_field(sec, "dimensionless", "M", 1.0),
            hbar=_float_field(sec, "dimensionless", "hbar", 1.0),
            kB=_float_field(sec, "dimensionless", "kB", 1.0),
            k0=_float_field(sec, "dimensionless", "k0", 1.0))
    except ValueError as exc:
        raise ConfigError(f"dimensionless: {exc}") from exc


def reference_scale(cfg: dict) -> tuple[float, float, float, float, float]:
    """(omega0, M, hbar, kB, k0) used to realize sweep grid points."""
    params = params_from_config(cfg)
    return params.omega0, params.M, params.hbar, params.kB, params.k0


def sweep_spec_from_config(cfg: dict, convention_flag=None,
                           regulator_flag: bool = False) -> SweepSpec:
    sec = cfg.get("sweep", {})
    r_values = sec.get("r_values", list(DEFAULT_R_VALUES))
    if not isinstance(r_values, list) or not r_values:
        raise ConfigError("sweep.r_values: must be a nonempty list")
    for r in r_values:
        if isinstance(r, bool) or not isinstance(r, (int, float)) or not 0.0 < r < math.inf:
            raise ConfigError(f"sweep.r_values: entries must be finite and > 0, got {r!r}")
    if "A_range" in sec:
        asec = sec["A_range"]
        arange = ARange(min=_float_field(asec, "sweep.A_range", "min"),
                        max=_float_field(asec, "sweep.A_range", "max"),
                        count=int(_float_field(asec, "sweep.A_range", "count")),
                        spacing=asec.get("spacing", "linear"))
    else:
        arange = DEFAULT_A_RANGE
    if arange.min < 0.0:
        raise ConfigError("sweep.A_range.min: must be >= 0")
    if arange.max <= arange.min:
        raise ConfigError("sweep.A_range.max: must exceed min")
    if arange.count < 2:
        raise ConfigError("sweep.A_range.count: must be >= 2")
    if arange.spacing not in ("linear", "log"):
        raise ConfigError("sweep.A_range.spacing: must be 'linear' or 'log'")
    if arange.spacing == "log" and arange.min <= 0.0:
        raise ConfigError("sweep.A_range.spacing: log spacing requires min > 0")
    convention = convention_flag or sec.get("convention", "standard")
    if convention not in CONVENTIONS:
        raise ConfigError(f"sweep.convention: must be one of {CONVENTIONS}")
    return SweepSpec(r_values=tuple(float(r) for r in r_values), A_range=arange,
                     convention=convention,
                     regulator_check=bool(sec.get("regulator_check", False)) or regulator_flag)


def _commit_id() -> str:
    here = os.path.dirname(os.path.abspath(__file__))
    try:
        out = subprocess.run(["git", "-C", here, "rev-parse", "--short", "HEAD"],
                             capture_output=True, text=True, timeout=5)
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return f"commonbath-{__version__}"


def _write_lines(lines, out_path):
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------- commands

def cmd_moments(cfg: dict, args) -> int:
    params = params_from_config(cfg)
    m = moments_all(params)
    lines = [f"# {SCHEMA_COMMENT}", "# command: moments",
             "q2_xi,q2_xi_err,p2_xi,p2_xi_err,p2_zeta,p2_zeta_err,q2_zeta",
             ",".join(_fmt(v) for v in (m.q2_xi, m.q2_xi_err, m.p2_xi, m.p2_xi_err,
                                        m.p2_zeta, m.p2_zeta_err, m.q2_zeta))]
    _write_lines(lines, args.out)
    return 0


def _sweep_point(r: float, A: float, scale, convention: str, regulator_check: bool):
    omega0, M, hbar, kB, k0 = scale
    params = from_dimensionless(DimensionlessPoint(r=r, A=A), omega0=omega0,
                                M=M, hbar=hbar, kB=kB, k0=k0)
    try:
        m = moments_all(params)
        res = log_negativity(nu_minus_closed(m), hbar=hbar, convention=convention)
    except QuadratureError:
        return (r, A, math.nan, math.nan, "error", math.nan)
    general = math.nan
    if regulator_check:
        sigma = covariance_from_moments(m, regulator=default_regulator(m, hbar))
        general = nu_minus_general(sigma)
    return (r, A, res.nu_minus, res.E_N, res.separable, general)


def sweep_rows(spec: SweepSpec, scale):
    """Evaluate the grid r-major, A-ascending; points run concurrently but
    results are emitted in deterministic order."""
    A_values = spec.A_range.values()
    points = [(r, float(A)) for r in spec.r_values for A in A_values]
    workers = min(8, os.cpu_count() or 1)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(
            lambda p: _sweep_point(p[0], p[1], scale, spec.convention,
                                   spec.regulator_check), points))
    return rows


def cmd_sweep(cfg: dict, args) -> int:
    spec = sweep_spec_from_config(cfg, args.convention, args.regulator_check)
    scale = reference_scale(cfg)
    rows = sweep_rows(spec, scale)
    header = "r,A,nu_minus,E_N,separable"
    if spec.regulator_check:
        header += ",nu_minus_general"
    lines = [f"# {SCHEMA_COMMENT}", "# command: sweep",
             f"# convention: {spec.convention}", header]
    failed = 0
    for row in rows:
        cells = [_fmt(v) for v in row[:5]]
        if spec.regulator_check:
            cells.append(_fmt(row[5]))
        if row[4] == "error":
            failed += 1
        lines.append(",".join(cells))
    _write_lines(lines, args.out)
    if args.figure:
        from .figures import sweep_figure
        ok_rows = [r for r in rows if r[4] != "error"]
        sweep_figure(ok_rows, args.figure, convention=spec.convention)
    return 1 if failed else 0


def death_point(r: float, A_lo: float, A_hi: float, scale, convention: str,
                rel_width: float = 1e-6):
    """Bisect the entanglement-death temperature on [A_lo, A_hi].

    Returns (A_star, lo, hi, status); requires E_N(A_lo) > 0 and
    E_N(A_hi) = 0.  E_N is strictly decreasing until it clamps, so the
    zero-crossing is unique.
    """
    def entangled(A: float) -> bool:
        row = _sweep_point(r, A, scale, convention, False)
        if row[4] == "error":
            raise QuadratureError(f"quadrature failed at r={r}, A={A}")
        return row[3] > 0.0

    if not entangled(A_lo):
        return (math.nan, A_lo, A_hi, "no_entangled_region")
    if entangled(A_hi):
        raise ValueError(
            f"E_N still positive at A_hi={A_hi} for r={r}; widen the search bounds")
    lo, hi = A_lo, A_hi
    while (hi - lo) > rel_width * 0.5 * (hi + lo):
        mid = 0.5 * (lo + hi)
        if entangled(mid):
            lo = mid
        else:
            hi = mid
    return (0.5 * (lo + hi), lo, hi, "ok")


def cmd_death(cfg: dict, args) -> int:
    spec = sweep_spec_from_config(cfg, args.convention, False)
    scale = reference_scale(cfg)
    sec = cfg.get("death", {})
    r_values = sec.get("r_values", list(spec.r_values))
    A_lo = _float_field(sec, "death", "A_lo", 0.0)
    A_hi = _float_field(sec, "death", "A_hi", 1e4)
    if A_lo < 0.0 or A_hi <= A_lo:
        raise ConfigError("death: require 0 <= A_lo < A_hi")
    lines = [f"# {SCHEMA_COMMENT}", "# command: death",
             f"# convention: {spec.convention}", "r,A_star,A_lo,A_hi,status"]
    for r in r_values:
        a_star, lo, hi, status = death_point(float(r), A_lo, A_hi, scale,
                                             spec.convention)
        lines.append(",".join(_fmt(v) for v in (float(r), a_star, lo, hi)) + f",{status}")
    _write_lines(lines, args.out)
    return 0


def cmd_langevin(cfg: dict, args) -> int:
    params = params_from_config(cfg)
    sec = cfg.get("langevin", {})
    seed = args.seed if args.seed is not None else int(sec.get("seed", 0))
    try:
        config = SimConfig(
            dt=_float_field(sec, "langevin", "dt"),
            n_steps=int(_float_field(sec, "langevin", "n_steps")),
            seed=seed,
            noise_mode=sec.get("noise_mode", "constant_eta"),
            ensemble=int(_float_field(sec, "langevin", "ensemble", 1)),
            include_potential=bool(sec.get("include_potential", True)))
        initial = TrajectoryState(
            t=0.0,
            zeta=_float_field(sec, "langevin", "zeta0", 0.0),
            zeta_dot=_float_field(sec, "langevin", "zeta_dot0", 0.0),
            xi=_float_field(sec, "langevin", "xi0", 1.0),
            xi_dot=_float_field(sec, "langevin", "xi_dot0", 0.0))
    except ValueError as exc:
        raise ConfigError(f"langevin: {exc}") from exc
    stats = simulate_ensemble(config, params, initial)
    comments = (SCHEMA_COMMENT, "command: langevin", f"seed: {config.seed}",
                f"dt: {_fmt(config.dt)}", f"n_steps: {config.n_steps}",
                f"ensemble: {config.ensemble}", f"noise_mode: {config.noise_mode}",
                f"commit: {_commit_id()}")
    if args.out is None:
        stats_to_csv(stats, sys.stdout, comments)
    else:
        with open(args.out, "w", newline="\n") as fh:
            stats_to_csv(stats, fh, comments)
    if args.binary_out:
        write_stats_binary(stats, args.binary_out)
    if args.figure:
        from .figures import langevin_figure
        langevin_figure(stats, args.figure)
    return 0


def _axis_values(section: dict, key: str):
    spec = section.get(key, 0.0)
    if isinstance(spec, dict):
        lo = _float_field(spec, f"density.{key}", "min")
        hi = _float_field(spec, f"density.{key}", "max")
        count = int(_float_field(spec, f"density.{key}", "count"))
        if count < 1:
            raise ConfigError(f"density.{key}.count: must be >= 1")
        return np.linspace(lo, hi, count)
    if isinstance(spec, bool) or not isinstance(spec, (int, float)):
        raise ConfigError(f"density.{key}: expected a number or a grid object")
    return np.array([float(spec)])


def cmd_density(cfg: dict, args) -> int:
    params = params_from_config(cfg)
    sec = cfg.get("density", {})
    axes = [_axis_values(sec, key) for key in ("x1", "x2", "y1", "y2")]
    exponent = density_exponent(moments_all(params), hbar=params.hbar)
    lines = [f"# {SCHEMA_COMMENT}", "# command: density", "x1,x2,y1,y2,rho"]
    for x1 in axes[0]:
        for x2 in axes[1]:
            for y1 in axes[2]:
                for y2 in axes[3]:
                    rho = rho_element(x1, x2, y1, y2, exponent)
                    lines.append(",".join(_fmt(float(v))
                                          for v in (x1, x2, y1, y2, rho)))
    _write_lines(lines, args.out)
    return 0


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to JSON config")
    common.add_argument("--out", default=None, help="output CSV path (default stdout)")
    common.add_argument("--convention", choices=list(CONVENTIONS), default=None,
                        help="entanglement normalization (default standard)")
    common.add_argument("--seed", type=int, default=None, help="RNG seed override")
    common.add_argument("--regulator-check", action="store_true",
                        help="add the general-route nu_minus column")
    common.add_argument("--figure", default=None,
                        help="also render a figure to this path")
    common.add_argument("--binary-out", default=None,
                        help="binary statistics dump (langevin only)")

    parser = argparse.ArgumentParser(
        prog="commonbath",
        description="Thermal equilibrium and entanglement of two Brownian "
                    "particles in a common heat bath")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("moments", parents=[common],
                   help="equilibrium second moments for one parameter set")
    sub.add_parser("sweep", parents=[common],
                   help="nu_minus and E_N over an (r, A) grid")
    sub.add_parser("death", parents=[common],
                   help="entanglement-death temperature A* per coupling r")
    sub.add_parser("langevin", parents=[common],
                   help="classical Langevin ensemble statistics")
    sub.add_parser("density", parents=[common],
                   help="density-matrix elements on a coordinate grid")
    return parser


_DISPATCH = {
    "moments": cmd_moments,
    "sweep": cmd_sweep,
    "death": cmd_death,
    "langevin": cmd_langevin,
    "density": cmd_density,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return _DISPATCH[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, ValueError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
