"""Matplotlib rendering of the report figures.

Every figure is written next to its delimited payload file; rendering is
save-only (Agg backend) so the CLI works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .corpus import KdeCurve, LengthStats
from .history import MetricSeries, PhaseReport

DPI = 150
BOX_COLOR = "#c23b22"
VIOLIN_COLOR = "#6a5acd"
RETAINED_COLOR = "#1f77b4"
EXCLUDED_COLOR = "#7f7f7f"
NEGATED_COLOR = "#d62728"


def render_length_distribution(
    lengths_by_field: dict[str, list[int]],
    stats_by_field: dict[str, LengthStats],
    kde_by_field: dict[str, KdeCurve],
    split: str,
    path: str | Path,
) -> None:
    """Side-by-side box/violin panels of token-length distributions."""
    fields = list(lengths_by_field)
    fig, axes = plt.subplots(1, len(fields), figsize=(6 * len(fields), 5))
    if len(fields) == 1:
        axes = [axes]
    for ax, field in zip(axes, fields):
        lengths = lengths_by_field[field]
        stats = stats_by_field[field]
        curve = kde_by_field.get(field)
        if curve is not None:
            density = np.asarray(curve.density)
            scale = 0.45 / density.max() if density.max() > 0 else 1.0
            ax.fill_betweenx(
                curve.grid,
                1 - density * scale,
                1 + density * scale,
                color=VIOLIN_COLOR,
                alpha=0.4,
                label=f"KDE (h={curve.bandwidth:.2f})",
            )
        ax.boxplot(
            lengths,
            positions=[1],
            widths=0.25,
            whis=1.5,
            showfliers=True,
            boxprops={"color": BOX_COLOR},
            whiskerprops={"color": BOX_COLOR},
            capprops={"color": BOX_COLOR},
            medianprops={"color": BOX_COLOR},
        )
        ax.axhline(stats.mean, color="black", linestyle="--", linewidth=1, label="mean")
        ax.set_title(f"{field} lengths ({split})")
        ax.set_ylabel("word tokens")
        ax.set_xticks([])
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def render_filter_scatter(rows: list[dict], path: str | Path) -> None:
    """Findings vs impression lengths, marking exclusions and negated reports."""
    fig, ax = plt.subplots(figsize=(6, 6))
    def pick(flag_retained, flag_negated):
        return [
            (r["findings_len"], r["impression_len"])
            for r in rows
            if bool(r["retained_flag"]) == flag_retained
            and bool(r["negated_flag"]) == flag_negated
        ]

    for retained, negated, color, marker, label in (
        (True, False, RETAINED_COLOR, "o", "retained diagnosis"),
        (True, True, NEGATED_COLOR, "x", "retained negated"),
        (False, False, EXCLUDED_COLOR, "o", "excluded diagnosis"),
        (False, True, EXCLUDED_COLOR, "x", "excluded negated"),
    ):
        pts = pick(retained, negated)
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, c=color, marker=marker, s=18, alpha=0.7, label=label)
    limit = max(
        (max(r["findings_len"], r["impression_len"]) for r in rows), default=1
    )
    ax.plot([0, limit], [0, limit], color="black", linewidth=0.8, linestyle=":")
    ax.set_xlabel("findings word tokens")
    ax.set_ylabel("impression word tokens")
    ax.set_title("Mahalanobis percentile filter")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def render_score_summary(aggregate: dict, path: str | Path) -> None:
    """Bar chart of the aggregate metric values."""
    labels, values = [], []
    for key, value in aggregate.items():
        if isinstance(value, dict):
            labels.append(f"{key}-f1")
            values.append(value["f1"])
        elif value is not None:
            labels.append(key)
            values.append(value)
    fig, ax = plt.subplots(figsize=(1.2 * len(labels) + 2, 4))
    ax.bar(labels, values, color=RETAINED_COLOR)
    ax.set_ylim(0, 1)
    ax.set_ylabel("score")
    ax.set_title("Aggregate metric scores")
    plt.setp(ax.get_xticklabels(), rotation=30, ha="right")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def render_confusion(report: dict, path: str | Path) -> None:
    """Model vs dummy-baseline precision/recall bars."""
    fig, ax = plt.subplots(figsize=(5, 4))
    x = np.arange(2)
    width = 0.35
    ax.bar(x - width / 2, [report["precision"], report["recall"]], width,
           color=RETAINED_COLOR, label="model")
    ax.bar(x + width / 2,
           [report["dummy_precision"], report["dummy_recall"]], width,
           color=EXCLUDED_COLOR, label="always-negated baseline")
    ax.set_xticks(x, ["precision", "recall"])
    ax.set_ylim(0, 1.05)
    ax.set_title("Negated-diagnosis classification")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def render_history(
    raw: MetricSeries,
    smoothed: MetricSeries,
    report: PhaseReport,
    path: str | Path,
) -> None:
    """Metric trajectory with detected phase landmarks."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(raw.epochs, raw.values, color=EXCLUDED_COLOR, linewidth=0.8, label="raw")
    if smoothed.points != raw.points:
        ax.plot(smoothed.epochs, smoothed.values, color=RETAINED_COLOR,
                linewidth=1.4, label="smoothed")
    if report.early_peak:
        ax.scatter(*report.early_peak, color=NEGATED_COLOR, zorder=5, label="early peak")
    if report.trough:
        ax.scatter(*report.trough, color="#2ca02c", zorder=5, label="trough")
    if report.recovery_onset is not None:
        ax.axvline(report.recovery_onset, color=NEGATED_COLOR, linestyle="--",
                   linewidth=1, label="recovery onset")
    if report.plateau_onset is not None:
        ax.axvline(report.plateau_onset, color=VIOLIN_COLOR, linestyle=":",
                   linewidth=1, label="plateau onset")
    ax.set_xlabel("epoch")
    ax.set_ylabel(raw.metric)
    ax.set_title(f"{raw.run_id} / {raw.metric} ({report.label})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
