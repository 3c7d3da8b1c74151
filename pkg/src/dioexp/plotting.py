"""Report figures.  Everything renders off-screen to PNG next to the CSVs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.2),
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
}


def _save(fig, path):
    # no Software stamp, so reruns are byte-identical
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_flow(trace, path, gamma=None):
    """delta(t)/t along the flow, with the tail estimate if given."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        pts = [(t, d / t) for t, d, _, _ in trace.samples if t > 0]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], lw=1.0, color="k", label=r"$\delta(t)/t$")
        if gamma is not None:
            ax.axhline(gamma.gamma_hat, ls="--", lw=0.8, color="C3", label=rf"$\hat\gamma$ = {gamma.gamma_hat:.3f}")
        ax.set_xlabel("t")
        ax.set_ylabel(r"$\delta(t)/t$")
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def plot_witnesses(est, path, title=None):
    """Implied exponent of each record witness against log ||q||."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ws = [w for w in est.witnesses if math.isfinite(w.implied_exponent)]
        ax.semilogx([w.norm_q for w in ws], [w.implied_exponent for w in ws], "o", ms=3, color="k")
        if est.base:
            ax.axhline(est.base, ls=":", lw=0.8, color="0.5", label="Dirichlet")
        if not est.infinite and est.value is not None:
            ax.axhline(est.value, ls="--", lw=0.8, color="C3", label=f"estimate {est.value:.3f}")
        ax.axvline(est.window_min, lw=0.6, color="0.7")
        ax.set_xlabel("||q||")
        ax.set_ylabel("implied exponent")
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def plot_cusp(eps, measures, path, slope=None):
    """Log-log plot of the cusp measure against eps."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        pts = [(e, m) for e, m in zip(eps, measures) if m > 0]
        ax.loglog([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3, lw=1.0, color="k")
        ax.set_xlabel(r"$\epsilon$")
        ax.set_ylabel("measure outside $K_\\epsilon$")
        if slope is not None:
            ax.set_title(f"slope {slope:.2f}")
        fig.tight_layout()
        return _save(fig, path)
