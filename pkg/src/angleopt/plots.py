"""Matplotlib renderings of report contents.

Figures are an opt-in convenience next to the CSV outputs (which remain
the interchange format): sweeps get energy/gap panels, single runs get a
per-start profile, and ledger verifications get a margin chart.  All
rendering uses the Agg backend and writes PNG files.
"""

from __future__ import annotations


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_sweep_figure(rows, path) -> None:
    """Best-found vs even-frame energy and the gap, across alpha."""
    plt = _plt()
    alphas = [r.alpha for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.plot(alphas, [r.best_energy for r in rows], "o-", label="best found")
    ax1.plot(alphas, [r.conjectured_energy for r in rows], "s--", label="even frame")
    ax1.set_xlabel("alpha")
    ax1.set_ylabel("energy")
    ax1.set_title(f"d={rows[0].d}, N={rows[0].n_points}")
    ax1.legend()
    ax2.axhline(0.0, color="0.6", lw=0.8)
    ax2.plot(alphas, [r.gap for r in rows], "o-", color="tab:red")
    ax2.set_xlabel("alpha")
    ax2.set_ylabel("gap = frame - best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_optrun_figure(run, path) -> None:
    """Per-start energies (sorted) against the even-frame target."""
    from .closed_form import f_dn

    plt = _plt()
    energies = sorted(run.per_start_energies, reverse=True)
    target = f_dn(run.d, run.n_points) / run.n_points**2
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.plot(range(len(energies)), energies, ".", label="starts (sorted)")
    ax.axhline(target, color="tab:green", lw=1.0, label="even frame")
    ax.axhline(run.best_energy, color="tab:orange", lw=0.8, ls="--", label="best")
    ax.set_xlabel("start rank")
    ax.set_ylabel("energy")
    ax.set_title(f"d={run.d}, N={run.n_points}, alpha={run.alpha:g}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_verify_figure(report, path) -> None:
    """Margin rhs - lhs of every strict inequality, grouped by d."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    by_d: dict[int, list[tuple[int, int]]] = {}
    for c in report.checks:
        if c.check_name == "strict_inequality":
            by_d.setdefault(c.d, []).append((c.n, c.rhs - c.lhs))
    for d in sorted(by_d):
        pts = sorted(by_d[d])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], ".", ms=4, label=f"d={d}")
    ax.set_xlabel("n")
    ax.set_ylabel("margin (split - nested)")
    ax.set_yscale("symlog")
    ax.axhline(0.0, color="0.5", lw=0.8)
    ax.set_title(f"strict margins, d<={report.d_max}, n<={report.n_max}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
