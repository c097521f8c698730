"""Figures for construction traces, density estimates and the theta* demo.

Each function writes one image file and returns its path.  The Agg backend
is selected so rendering works without a display.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .counterexamples import DemoReport  # noqa: E402
from .darboux import DarbouxTrace  # noqa: E402
from .density import DensityEstimate  # noqa: E402

FIGSIZE = (8, 3.6)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_trace(trace: DarbouxTrace, path) -> Path:
    ns = [s.n for s in trace.stages]
    xi = float(trace.request.target)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=FIGSIZE)

    ax1.plot(ns, [float(s.valA) for s in trace.stages], "o-", label="value(A_n)")
    ax1.plot(ns, [float(s.valB) for s in trace.stages], "s-", label="value(B_n)")
    ax1.axhline(xi, color="k", lw=0.8, ls="--", label=f"target {trace.request.target}")
    ax1.set_xlabel("stage n")
    ax1.set_ylabel(f"{trace.sense} density")
    ax1.legend(fontsize=8)

    gaps = [float(s.valB - s.valA) for s in trace.stages]
    ax2.semilogy(ns, [g if g > 0 else float("nan") for g in gaps], "o-",
                 label="value(B_n) - value(A_n)")
    ax2.semilogy(ns, [1 / s.k for s in trace.stages], "x--", label="1/k_n")
    ax2.semilogy(ns, [1 / n for n in ns], ":", color="gray", label="1/n")
    ax2.set_xlabel("stage n")
    ax2.legend(fontsize=8)
    if trace.truncated:
        fig.suptitle("stopped early by resource cap", fontsize=9)
    return _save(fig, path)


def plot_estimate(est: DensityEstimate, path, reference: Fraction | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(FIGSIZE[0] / 2 + 1, FIGSIZE[1]))
    ns = [n for n, _ in est.samples]
    ax.semilogx(ns, [float(r) for _, r in est.samples], "o-", label="|S ∩ [0,N)| / N")
    if reference is not None:
        ax.axhline(float(reference), color="k", ls="--", lw=0.8,
                   label=f"exact {reference}")
        if est.bound is not None:
            b = float(est.bound)
            ax.axhspan(float(reference) - b, float(reference) + b, alpha=0.15)
    ax.set_xlabel("N")
    ax.set_ylabel("prefix ratio")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_demo(report: DemoReport, path) -> Path:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    names = [e.name for e in report.entries]
    vals = [float(e.value) for e in report.entries]
    colors = ["tab:blue" if e.exact else "tab:orange" for e in report.entries]
    ax.bar(range(len(vals)), vals, color=colors)
    ax.axhspan(7 / 16, 9 / 16, color="red", alpha=0.1, label="(7/16, 9/16)")
    ax.axhline(0.5, color="red", lw=0.8, ls="--", label="1/2")
    ax.set_xticks(range(len(vals)))
    ax.set_xticklabels(names, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("theta*")
    ax.legend(fontsize=8)
    return _save(fig, path)
