"""Matplotlib figures rendered by the report path of the CLI.

For 2-dimensional algebras the figure shows |u^2| around the unit circle
together with the square floor and any nilpotent directions; for higher
dimensions it shows the sorted sphere-sample profile of |u^2|.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .algebra import StructureConstants, mul_batch, norm_batch
from .analysis import (
    ClassificationReport,
    SquareFloor,
    square_floor_sampled,
)


def save_report_figure(
    algebra: StructureConstants,
    report: ClassificationReport,
    path,
    label: str | None = None,
) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if algebra.dim == 2:
        _unit_circle_panel(ax, algebra, report)
    else:
        _sample_profile_panel(ax, algebra, report)
    if label:
        ax.set_title(label)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _unit_circle_panel(ax, algebra, report):
    theta = np.linspace(0.0, 2.0 * math.pi, 2048)
    U = np.vstack([np.cos(theta), np.sin(theta)])
    values = norm_batch(mul_batch(algebra, U, U))
    ax.plot(theta, values, lw=1.2, label="|u^2| on the unit circle")
    floor = report.floor
    if isinstance(floor, SquareFloor):
        ax.axhline(floor.value, color="tab:red", ls="--", lw=1.0,
                   label=f"square floor = {floor.value:.6g}")
    for line in report.nilpotent_lines:
        angle = math.atan2(line.direction[1], line.direction[0]) % math.pi
        for shift in (0.0, math.pi):
            ax.axvline(angle + shift, color="tab:gray", ls=":", lw=1.0)
    if report.nilpotent_lines:
        ax.plot([], [], color="tab:gray", ls=":", label="nilpotent direction")
    ax.set_xlabel("angle")
    ax.set_ylabel("|u^2|")
    ax.set_xlim(0.0, 2.0 * math.pi)
    ax.legend(loc="best", fontsize=9)


def _sample_profile_panel(ax, algebra, report):
    floor = square_floor_sampled(algebra, budget=20_000, certified=False)
    U, _ = _resample(algebra)
    values = np.sort(norm_batch(mul_batch(algebra, U, U)))
    ax.plot(values, lw=1.2, label="sorted |u^2| over sphere samples")
    ax.axhline(floor.sampled_min, color="tab:red", ls="--", lw=1.0,
               label=f"observed minimum = {floor.sampled_min:.6g}")
    ax.set_xlabel("sample rank")
    ax.set_ylabel("|u^2|")
    ax.legend(loc="best", fontsize=9)


def _resample(algebra):
    from .analysis import _sphere_grid

    return _sphere_grid(algebra.dim, 20_000)
