"""Render sweep reports as figures next to the delimited output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_sweep_figures(records, outdir, fmt: str = "png") -> list[Path]:
    """Write decay and gap/index figures for a sweep; returns written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    usable = [r for r in records if not r.flagged]
    paths = []

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    if usable:
        n = np.array([r.N for r in usable], dtype=float)
        ax.loglog(n, [r.norm_chi_minus_e for r in usable], "o-", label=r"$\|\chi(e)-e\|$")
        ax.loglog(n, [r.norm_e2_minus_e for r in usable], "s-", label=r"$\|e^2-e\|$")
        cubic = np.array([abs(r.tr_e3 - (r.N - 0.5)) for r in usable])
        positive = cubic > 0
        if positive.any():
            ax.loglog(n[positive], cubic[positive], "^-", label=r"$|\mathrm{tr}\,e^3-(N-1/2)|$")
        guide = usable[0].norm_chi_minus_e * usable[0].N / n
        ax.loglog(n, guide, "k--", alpha=0.5, label=r"$\propto 1/N$")
    ax.set_xlabel("N")
    ax.set_ylabel("deviation")
    ax.set_title("Decay of the sweep deviations")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    decay_path = outdir / f"sweep_decay.{fmt}"
    fig.savefig(decay_path, dpi=150)
    plt.close(fig)
    paths.append(decay_path)

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    n_all = [r.N for r in records]
    ax.semilogx(n_all, [r.gap for r in records], "o-", color="tab:blue", label="spectral gap at 1/2")
    ax.axhline(0.5, color="tab:blue", ls=":", alpha=0.5)
    ax.set_xlabel("N")
    ax.set_ylabel("gap", color="tab:blue")
    ax.set_ylim(-0.02, 0.55)
    ax2 = ax.twinx()
    idx_n = [r.N for r in usable]
    ax2.plot(idx_n, [r.index for r in usable], "d", color="tab:red", label="index")
    ax2.set_ylabel("index", color="tab:red")
    ax2.set_yticks(sorted({r.index for r in usable} | {0, 1}))
    ax.set_title("Gap certificate and integer index")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    gap_path = outdir / f"sweep_gap_index.{fmt}"
    fig.savefig(gap_path, dpi=150)
    plt.close(fig)
    paths.append(gap_path)
    return paths
