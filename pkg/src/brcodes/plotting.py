"""Figures for the report commands (written to files, never shown)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_rates(rows: list[dict], path: str) -> None:
    """Code rate against k per alpha, with the CPC ceilings as dashed lines."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    cmap = plt.get_cmap("viridis")
    alphas = sorted({r["alpha"] for r in rows})
    for idx, a in enumerate(alphas):
        pts = sorted((r["k"], r["rate"]) for r in rows if r["alpha"] == a)
        color = cmap(idx / max(1, len(alphas) - 1))
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=".", color=color, label=f"alpha={a}")
        ax.axhline(1 / (a + 1), color=color, linestyle="--", linewidth=0.8)
    ax.set_xlabel("information length k (bits)")
    ax.set_ylabel("code rate k/n")
    ax.set_ylim(0, 1)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_min_dimension(rows: list[dict], path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for a in sorted({r["alpha"] for r in rows}):
        pts = sorted((r["k"], r["mm"]) for r in rows if r["alpha"] == a and r["mm"] is not None)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=".", label=f"alpha={a}")
    ax.set_xlabel("information length k (bits)")
    ax.set_ylabel("minimum object height (mm)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_success(rows: list[dict], path: str) -> None:
    """Success rate against rho, one line per (alpha, beta)."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    keys = sorted({(r["alpha"], r["beta"]) for r in rows})
    for a, b in keys:
        pts = sorted((r["rho"], r["successes"] / r["trials"]) for r in rows
                     if r["alpha"] == a and r["beta"] == b and r["trials"])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=f"alpha={a}, beta={b}")
    ax.set_xlabel("hidden fraction rho")
    ax.set_ylabel("recovery rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
