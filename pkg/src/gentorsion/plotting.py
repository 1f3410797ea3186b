"""Figures for the Alexander-polynomial report."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .alexander import LaurentPolynomial, RootReport

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.4,
    "savefig.dpi": 150,
}

# palette (blue, orange, green, red, purple, brown, pink, grey, olive)
COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"]


def _scaled(poly: LaurentPolynomial, t: np.ndarray) -> np.ndarray:
    # divide by t^(d/2) and the leading coefficient so curves share a scale
    coeffs = poly.normalize().coefficients()
    d = len(coeffs) - 1
    vals = sum(float(c) * t**i for i, c in enumerate(coeffs))
    return vals / (abs(float(coeffs[-1])) * t ** (d / 2))


def root_figure(rows: list[tuple[str, LaurentPolynomial, RootReport]], path, t_max: float = 4.0):
    """Plot each polynomial on the positive real axis and mark its isolated roots.

    ``rows`` holds (label, polynomial, root report).  Writes a PNG to ``path``.
    """
    with plt.rc_context(STYLE):
        fig, (ax, bx) = plt.subplots(1, 2, figsize=(10, 4), gridspec_kw={"width_ratios": [3, 2]})
        t = np.linspace(0.05, t_max, 800)
        for i, (label, poly, roots) in enumerate(rows):
            color = COLORS[i % len(COLORS)]
            if poly.degree == 0:
                continue
            ax.plot(t, _scaled(poly, t), color=color, label=label)
            for a, b in roots.intervals:
                mid = float(a + b) / 2
                if mid <= t_max:
                    ax.plot([mid], [0.0], "o", color=color, markersize=5)
        ax.axhline(0.0, color="black", linewidth=0.6)
        ax.set_xlim(0, t_max)
        ax.set_ylim(-3, 6)
        ax.set_xlabel("t")
        ax.set_ylabel(r"$\Delta(t)\,/\,(c\,t^{d/2})$")
        ax.set_title("Alexander polynomials on t > 0")
        ax.legend(loc="upper left", frameon=False, ncol=2)

        labels = [r[0] for r in rows]
        counts = [r[2].positive_real_roots for r in rows]
        degrees = [r[2].degree for r in rows]
        y = np.arange(len(rows))
        bx.barh(y, degrees, color="#dddddd", label="degree")
        bx.barh(y, counts, color=[COLORS[i % len(COLORS)] for i in range(len(rows))], label="positive real roots")
        bx.set_yticks(y)
        bx.set_yticklabels(labels)
        bx.invert_yaxis()
        bx.set_xlabel("count")
        bx.set_title("positive real roots vs degree")
        bx.legend(loc="lower right", frameon=False)

        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
