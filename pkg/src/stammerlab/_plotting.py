"""Figure rendering for the report command (headless Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_META = {"Software": "stammerlab"}


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)


def _empty(ax, message: str):
    ax.text(0.5, 0.5, message, ha="center", va="center",
            transform=ax.transAxes)
    ax.set_xticks([])
    ax.set_yticks([])


def complexity_figure(rows, path, title: str) -> None:
    """rows: (n, p, stable)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if rows:
        ns = [r[0] for r in rows]
        ps = [r[1] for r in rows]
        ax.plot(ns, ps, marker="o", markersize=3, linewidth=1)
        ax.set_xlabel("n")
        ax.set_ylabel("p(n)")
        ax.grid(True, alpha=0.3)
    else:
        _empty(ax, "no profile data")
    ax.set_title("factor counts: %s" % title)
    _finish(fig, path)


def witness_figure(rows, path, title: str) -> None:
    """rows: (index, uLen, vLen, w_num, w_den, verified, ratio)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if rows:
        idx = [r[0] for r in rows]
        ax.plot(idx, [r[1] for r in rows], marker="s", markersize=3,
                linewidth=1, label="|U|")
        ax.plot(idx, [r[2] for r in rows], marker="o", markersize=3,
                linewidth=1, label="|V|")
        if max(r[2] for r in rows) > 32 * max(1, min(r[2] for r in rows)):
            ax.set_yscale("log")
        ax.set_xlabel("witness index")
        ax.legend()
        ax.grid(True, alpha=0.3)
    else:
        _empty(ax, "no witnesses")
    ax.set_title("witness lengths: %s" % title)
    _finish(fig, path)


def audit_figure(rows, path, title: str) -> None:
    """rows: (index, rPlusS, digitsUsed, exponentLo, exponentHi, below)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if rows:
        for row in rows:
            ax.vlines(row[1], row[3], row[4], linewidth=2)
        ax.axhline(-3, linestyle="--", linewidth=1)
        ax.set_xlabel("r + s")
        ax.set_ylabel("exponent enclosure")
        ax.grid(True, alpha=0.3)
    else:
        _empty(ax, "no audit rows")
    ax.set_title("audit exponents: %s" % title)
    _finish(fig, path)
