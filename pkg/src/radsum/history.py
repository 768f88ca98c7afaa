"""Training-history phase detection: early peak, forgetting trough, recovery
onset, plateau onset, jaggedness, run labelling, and onset extrapolation
across training-set fractions.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import UsageError, ValidationError

METRICS = ("rouge1", "rouge2", "rougeL", "bleu", "meteor", "bertscore_recall")

LABEL_MONOTONIC = "monotonic"
LABEL_PEAK_DROP_RECOVERY = "peak_drop_recovery"
LABEL_PEAK_DROP_NO_RECOVERY = "peak_drop_no_recovery"
LABEL_FLAT = "flat"
LABEL_JAGGED = "jagged"


@dataclass(frozen=True)
class MetricSeries:
    run_id: str
    metric: str
    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((int(e), float(v)) for e, v in self.points))
        epochs = [e for e, _ in self.points]
        if any(b <= a for a, b in zip(epochs, epochs[1:])):
            raise ValidationError(
                f"{self.run_id}/{self.metric}: epochs must be strictly increasing"
            )
        if any(not math.isfinite(v) for _, v in self.points):
            raise ValidationError(f"{self.run_id}/{self.metric}: non-finite value")

    @property
    def epochs(self) -> list[int]:
        return [e for e, _ in self.points]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.points]


@dataclass(frozen=True)
class PhaseReport:
    run_id: str
    metric: str
    early_peak: tuple[int, float] | None
    trough: tuple[int, float] | None
    recovery_onset: int | None
    plateau_onset: int | None
    jaggedness: float
    label: str


@dataclass(frozen=True)
class RunMeta:
    run_id: str
    checkpoint: str
    train_fraction: float

    def __post_init__(self):
        if not 0.0 < self.train_fraction <= 1.0:
            raise ValidationError(
                f"{self.run_id}: train_fraction must be in (0, 1], "
                f"got {self.train_fraction}"
            )


def load_history(path: str | Path) -> list[MetricSeries]:
    """Read a long-form CSV (run_id,metric,epoch,value) into sorted series."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"history file not found: {path}")
    groups: dict[tuple[str, str], dict[int, float]] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"run_id", "metric", "epoch", "value"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValidationError(f"{path}: header must contain {sorted(required)}")
        for rowno, row in enumerate(reader, start=2):
            try:
                run_id = row["run_id"].strip()
                metric = row["metric"].strip()
                epoch = int(row["epoch"])
                value = float(row["value"])
            except (ValueError, AttributeError) as exc:
                raise ValidationError(f"{path}:{rowno}: parse error: {exc}")
            if epoch < 1:
                raise ValidationError(f"{path}:{rowno}: epoch must be positive")
            series = groups.setdefault((run_id, metric), {})
            if epoch in series:
                raise ValidationError(
                    f"{path}:{rowno}: duplicate epoch {epoch} for {run_id}/{metric}"
                )
            series[epoch] = value
    return [
        MetricSeries(run_id=rid, metric=metric, points=tuple(sorted(pts.items())))
        for (rid, metric), pts in sorted(groups.items())
    ]


def load_run_meta(path: str | Path) -> dict[str, RunMeta]:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"run metadata file not found: {path}")
    metas: dict[str, RunMeta] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"run_id", "checkpoint", "train_fraction"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValidationError(f"{path}: header must contain {sorted(required)}")
        for rowno, row in enumerate(reader, start=2):
            try:
                meta = RunMeta(
                    run_id=row["run_id"].strip(),
                    checkpoint=row["checkpoint"].strip(),
                    train_fraction=float(row["train_fraction"]),
                )
            except (ValueError, AttributeError) as exc:
                raise ValidationError(f"{path}:{rowno}: parse error: {exc}")
            if meta.run_id in metas:
                raise ValidationError(f"{path}:{rowno}: duplicate run_id {meta.run_id!r}")
            metas[meta.run_id] = meta
    return metas


def smooth(series: MetricSeries, window: int) -> MetricSeries:
    """Centered moving average; the window shrinks symmetrically at the ends."""
    if window < 1 or window % 2 == 0:
        raise UsageError(f"window must be an odd positive integer, got {window}")
    if window == 1:
        return series
    values = series.values
    half = window // 2
    smoothed = []
    for i in range(len(values)):
        reach = min(half, i, len(values) - 1 - i)
        segment = values[i - reach : i + reach + 1]
        smoothed.append(sum(segment) / len(segment))
    return MetricSeries(
        run_id=series.run_id,
        metric=series.metric,
        points=tuple(zip(series.epochs, smoothed)),
    )


def detect_early_peak(
    series: MetricSeries, radius: int = 3, min_prominence: float = 0.02
) -> tuple[int, float] | None:
    """First interior point that dominates its ±radius window and rises at
    least min_prominence above the minimum seen before it."""
    epochs, values = series.epochs, series.values
    for i in range(1, len(values) - 1):
        lo = max(0, i - radius)
        hi = min(len(values), i + radius + 1)
        window = values[lo:i] + values[i + 1 : hi]
        if window and values[i] > max(window):
            if values[i] - min(values[:i]) >= min_prominence:
                return epochs[i], values[i]
    return None


def detect_trough(series: MetricSeries, after_epoch: int) -> tuple[int, float] | None:
    """Global minimum strictly after after_epoch; earliest epoch on ties."""
    candidates = [(e, v) for e, v in series.points if e > after_epoch]
    if not candidates:
        return None
    best = min(candidates, key=lambda p: (p[1], p[0]))
    return best


def detect_recovery(
    series: MetricSeries, peak: tuple[int, float], sustain: int = 3
) -> int | None:
    """First epoch after the trough whose value exceeds the peak value for
    `sustain` consecutive recorded epochs."""
    if sustain < 1:
        raise UsageError("sustain must be >= 1")
    trough = detect_trough(series, peak[0])
    if trough is None:
        return None
    points = series.points
    start = next(i for i, (e, _) in enumerate(points) if e > trough[0] or e == trough[0])
    for i in range(start, len(points) - sustain + 1):
        if points[i][0] <= trough[0]:
            continue
        if all(points[i + k][1] > peak[1] for k in range(sustain)):
            return points[i][0]
    return None


def detect_plateau(series: MetricSeries, fraction: float = 0.95) -> int | None:
    """First epoch reaching fraction * final value; None for non-positive finals."""
    if not 0.0 < fraction <= 1.0:
        raise UsageError(f"fraction must be in (0, 1], got {fraction}")
    final = series.values[-1]
    if final <= 0:
        return None
    threshold = fraction * final
    for epoch, value in series.points:
        if value >= threshold:
            return epoch
    return None


def jaggedness(series: MetricSeries) -> float:
    """Mean absolute step normalised by the value range; 0 for flat series."""
    values = series.values
    if len(values) < 2:
        return 0.0
    spread = max(values) - min(values)
    if spread == 0:
        return 0.0
    steps = [abs(b - a) for a, b in zip(values, values[1:])]
    return sum(steps) / len(steps) / spread


def best_score(series: MetricSeries) -> tuple[int, float]:
    """Maximum value; earliest epoch on ties."""
    return max(series.points, key=lambda p: (p[1], -p[0]))


def classify_run(
    series: MetricSeries,
    radius: int = 3,
    min_prominence: float = 0.02,
    sustain: int = 3,
    plateau_fraction: float = 0.95,
    jagged_threshold: float = 0.05,
    window: int = 1,
) -> PhaseReport:
    """Compose the detectors into a full phase report for one run/metric."""
    smoothed = smooth(series, window)
    peak = detect_early_peak(smoothed, radius=radius, min_prominence=min_prominence)
    trough = detect_trough(smoothed, peak[0]) if peak else None
    recovery = detect_recovery(smoothed, peak, sustain=sustain) if peak else None
    plateau = detect_plateau(smoothed, fraction=plateau_fraction)
    jag = jaggedness(smoothed)
    values = smoothed.values
    if peak is None:
        if values[-1] >= 0.95 * max(values):
            label = LABEL_MONOTONIC
        elif jag > jagged_threshold:
            label = LABEL_JAGGED
        else:
            label = LABEL_FLAT
    elif recovery is not None:
        label = LABEL_PEAK_DROP_RECOVERY
    else:
        label = LABEL_PEAK_DROP_NO_RECOVERY
    return PhaseReport(
        run_id=series.run_id,
        metric=series.metric,
        early_peak=peak,
        trough=trough,
        recovery_onset=recovery,
        plateau_onset=plateau,
        jaggedness=jag,
        label=label,
    )


def predict_onset(
    onsets: list[tuple[float, int]], target_fraction: float
) -> int:
    """Extrapolate a recovery onset to a new training fraction.

    Models onset ~ c / fraction with c the conservative (maximal) product of
    observed onset * fraction, so predictions read as lower bounds.
    """
    if not onsets:
        raise ValidationError("predict_onset needs at least one observed onset")
    if target_fraction <= 0:
        raise UsageError("target_fraction must be positive")
    c = max(fraction * onset for fraction, onset in onsets)
    # Tolerance guards against float noise pushing an exact integer over ceil.
    return math.ceil(c / target_fraction - 1e-9)


def peak_table(runs: list[tuple[RunMeta, PhaseReport, dict[str, float]]]) -> list[dict]:
    """One row per run with the peak epoch and the metric scores at the peak.

    `scores` maps metric name -> value at the peak epoch; missing metrics are
    emitted as None. Rows are sorted by checkpoint, then train fraction.
    """
    rows = []
    for meta, report, scores in sorted(
        runs, key=lambda item: (item[0].checkpoint, item[0].train_fraction)
    ):
        rows.append(
            {
                "checkpoint": meta.checkpoint,
                "train_fraction": meta.train_fraction,
                "peak_epoch": report.early_peak[0] if report.early_peak else None,
                "rouge1": scores.get("rouge1"),
                "bertscore_recall": scores.get("bertscore_recall"),
                "meteor": scores.get("meteor"),
                "bleu": scores.get("bleu"),
            }
        )
    return rows
