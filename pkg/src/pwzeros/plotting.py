"""Figure rendering for sweep outputs; saved next to the delimited report."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _floats(rows, col):
    out = []
    for r in rows:
        try:
            out.append(float(r[col]))
        except (ValueError, IndexError):
            out.append(float("nan"))
    return out


def render_mu_sweep(columns, rows, path):
    """mu per representation against a, plus the pairwise disagreement."""
    a = _floats(rows, 0)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    for j, name in enumerate(columns):
        if name.startswith("mu_"):
            ax1.plot(a, _floats(rows, j), label=name[3:], lw=1.2)
    ax1.set_xlabel("a")
    ax1.set_ylabel("mu")
    ax1.legend(fontsize=7)
    dis = [max(v, 1e-60) for v in _floats(rows, len(columns) - 1)]
    ax2.semilogy(a, dis, marker=".", lw=1.0, color="tab:red")
    ax2.set_xlabel("a")
    ax2.set_ylabel("max pairwise disagreement")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_pvi_sweep(columns, rows, path):
    """q(b) and the Painleve VI residual over the sweep grid."""
    ok_rows = [r for r in rows if r[-1] == "ok"]
    b = _floats(ok_rows, 1)
    q = _floats(ok_rows, 2)
    res = [max(v, 1e-60) for v in _floats(ok_rows, 5)]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    ax1.plot(b, q, marker=".", lw=1.2)
    ax1.set_xlabel("b = a^2")
    ax1.set_ylabel("q")
    ax2.semilogy(b, res, marker=".", lw=1.0, color="tab:red")
    ax2.set_xlabel("b = a^2")
    ax2.set_ylabel("PVI residual (relative)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
