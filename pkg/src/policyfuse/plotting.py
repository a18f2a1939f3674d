"""Figure rendering for sweep reports."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .combine import Verdict
from .engine import SweepResult


def render_sweep_figure(result: SweepResult, path: str) -> str:
    """Plot combined clearance against the swept parameter and save to ``path``.

    Points are colored by verdict, the grant threshold is drawn at zero, and
    the flip value (first verdict change) is marked when present. The output
    format follows the file extension (png, pdf, svg, ...).
    """
    xs = [p.value for p in result.points]
    ys = [p.combined for p in result.points]

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(xs, ys, color="0.45", linewidth=1.0, zorder=1)
    grants = [(p.value, p.combined) for p in result.points if p.verdict is Verdict.GRANT]
    denies = [(p.value, p.combined) for p in result.points if p.verdict is Verdict.DENY]
    if grants:
        ax.scatter(*zip(*grants), color="tab:green", s=28, label="grant", zorder=2)
    if denies:
        ax.scatter(*zip(*denies), color="tab:red", s=28, label="deny", zorder=2)
    ax.axhline(0.0, color="0.7", linestyle=":", linewidth=1.0)
    if result.flip_value is not None:
        ax.axvline(
            result.flip_value,
            color="tab:orange",
            linestyle="--",
            linewidth=1.0,
            label=f"flip at {result.flip_value:g}",
        )
    ax.set_xlabel(result.parameter)
    ax.set_ylabel("combined clearance")
    ax.set_title(f"combined clearance vs {result.parameter}")
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
