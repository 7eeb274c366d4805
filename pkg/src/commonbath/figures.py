"""Figure rendering for the CLI report paths.

Each renderer takes the same data the CSV writers consume and saves a PNG/PDF
next to the delimited output.  matplotlib is imported lazily and driven with
the Agg backend so headless runs work.
"""

from __future__ import annotations

from .langevin import EnsembleStats


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def sweep_figure(rows, path: str, convention: str = "standard"):
    """Entanglement versus reduced temperature, one curve per coupling.

    rows: iterables of (r, A, nu_minus, E_N, separable_or_error) as produced
    by the sweep command; rows flagged with errors are skipped.
    """
    plt = _pyplot()
    curves: dict[float, list[tuple[float, float]]] = {}
    for row in rows:
        r, A, _nu, E_N = row[0], row[1], row[2], row[3]
        if E_N is None or not isinstance(E_N, float):
            continue
        curves.setdefault(r, []).append((A, E_N))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for r in sorted(curves):
        pts = sorted(curves[r])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=f"$r = {r:g}$")
    ax.set_xlabel("reduced temperature $A$")
    ax.set_ylabel(r"$E_\mathcal{N}$")
    ax.set_title(f"bath-induced entanglement ({convention} convention)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def langevin_figure(stats: EnsembleStats, path: str):
    """Two panels: mean-square displacements and the xi power spectrum."""
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.plot(stats.t, stats.msd_zeta, label=r"$\langle\Delta\zeta^2\rangle$")
    ax1.plot(stats.t, stats.msd_xi, label=r"$\langle\Delta\xi^2\rangle$")
    ax1.set_xlabel("$t$")
    ax1.set_ylabel("MSD")
    ax1.legend(frameon=False)
    ax2.semilogy(stats.spectrum_omega[1:], stats.spectrum_xi[1:])
    ax2.set_xlabel(r"$\omega$")
    ax2.set_ylabel(r"$|\xi(\omega)|^2$")
    fig.suptitle(f"ensemble of {stats.n_trajectories} trajectories, "
                 f"noise={stats.config.noise_mode}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
