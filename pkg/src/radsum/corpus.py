"""Corpus loading, cleaning, and descriptive length statistics.

Quartiles use linear interpolation between order statistics (position
(n-1)*q); the bandwidth rule is the robust rule of thumb
0.9 * min(sd, IQR/1.34) * n^(-1/5).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import diagnosis
from .errors import ValidationError
from .tokenize import word_token_count

SPLITS = ("train", "validation", "test")
REQUIRED_FIELDS = ("id", "findings", "impression", "split")


@dataclass(frozen=True)
class ReportRecord:
    id: str
    findings: str
    impression: str
    split: str


@dataclass(frozen=True)
class Exclusion:
    id: str
    findings_tokens: int
    impression_tokens: int


@dataclass(frozen=True)
class LengthStats:
    n: int
    mean: float
    median: float
    q1: float
    q3: float
    iqr: float
    whisker_lo: float
    whisker_hi: float
    outlier_ids: tuple[str, ...]


@dataclass(frozen=True)
class KdeCurve:
    bandwidth: float
    grid: tuple[float, ...]
    density: tuple[float, ...]


def _validate_record(raw: dict, where: str) -> ReportRecord:
    for field in REQUIRED_FIELDS:
        if field not in raw or raw[field] is None:
            raise ValidationError(f"{where}: missing field {field!r}")
    rid = str(raw["id"]).strip()
    findings = str(raw["findings"])
    impression = str(raw["impression"])
    split = str(raw["split"]).strip()
    if not rid:
        raise ValidationError(f"{where}: empty id")
    if not findings.strip():
        raise ValidationError(f"{where}: empty findings for id {rid!r}")
    if not impression.strip():
        raise ValidationError(f"{where}: empty impression for id {rid!r}")
    if split not in SPLITS:
        raise ValidationError(f"{where}: unknown split {split!r} for id {rid!r}")
    return ReportRecord(id=rid, findings=findings, impression=impression, split=split)


def load_corpus(path: str | Path, format: str | None = None) -> list[ReportRecord]:
    """Load a JSONL or CSV corpus; format inferred from the extension if omitted."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"corpus file not found: {path}")
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format not in ("jsonl", "csv"):
        raise ValidationError(f"unknown corpus format {format!r}")

    records: list[ReportRecord] = []
    if format == "jsonl":
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    raw = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValidationError(f"{path}:{lineno}: JSON parse error: {exc}")
                records.append(_validate_record(raw, f"{path}:{lineno}"))
    else:
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not set(REQUIRED_FIELDS) <= set(reader.fieldnames):
                raise ValidationError(
                    f"{path}: CSV header must contain {', '.join(REQUIRED_FIELDS)}"
                )
            for lineno, raw in enumerate(reader, start=2):
                records.append(_validate_record(raw, f"{path}:{lineno}"))

    seen: set[str] = set()
    for record in records:
        if record.id in seen:
            raise ValidationError(f"duplicate record id {record.id!r}")
        seen.add(record.id)
    return records


def clean_corpus(
    corpus: list[ReportRecord],
) -> tuple[list[ReportRecord], list[Exclusion]]:
    """Drop records whose impression is word-token longer than its findings."""
    retained: list[ReportRecord] = []
    excluded: list[Exclusion] = []
    for record in corpus:
        n_findings = word_token_count(record.findings)
        n_impression = word_token_count(record.impression)
        if n_impression > n_findings:
            excluded.append(Exclusion(record.id, n_findings, n_impression))
        else:
            retained.append(record)
    return retained, excluded


def length_stats(lengths: list[int], ids: list[str]) -> LengthStats:
    if not lengths:
        raise ValidationError("length_stats requires a non-empty input")
    if len(lengths) != len(ids):
        raise ValidationError("lengths and ids must have matching sizes")
    values = np.asarray(lengths, dtype=float)
    q1, median, q3 = np.quantile(values, [0.25, 0.5, 0.75])
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    inside = values[(values >= lo_fence) & (values <= hi_fence)]
    whisker_lo = float(inside.min())
    whisker_hi = float(inside.max())
    outlier_ids = tuple(
        rid
        for rid, v in zip(ids, values)
        if v < whisker_lo or v > whisker_hi
    )
    return LengthStats(
        n=len(lengths),
        mean=float(values.mean()),
        median=float(median),
        q1=float(q1),
        q3=float(q3),
        iqr=float(iqr),
        whisker_lo=whisker_lo,
        whisker_hi=whisker_hi,
        outlier_ids=outlier_ids,
    )


def silverman_bandwidth(lengths: list[int]) -> float:
    values = np.asarray(lengths, dtype=float)
    if values.size < 2:
        raise ValidationError("bandwidth needs at least two data points")
    sd = float(values.std(ddof=1))
    if sd == 0.0:
        raise ValidationError("degenerate data: zero spread")
    q1, q3 = np.quantile(values, [0.25, 0.75])
    iqr = float(q3 - q1)
    # Zero IQR with positive sd happens for heavily tied counts; fall back to sd.
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    return 0.9 * spread * values.size ** (-1 / 5)


def kde(lengths: list[int], bandwidth: float, grid_size: int = 256) -> KdeCurve:
    """Gaussian kernel density over a grid padded by three bandwidths."""
    if bandwidth <= 0:
        raise ValidationError(f"invalid bandwidth {bandwidth!r}")
    if grid_size < 2:
        raise ValidationError("grid_size must be at least 2")
    values = np.asarray(lengths, dtype=float)
    if values.size == 0:
        raise ValidationError("kde requires data")
    grid = np.linspace(
        values.min() - 3 * bandwidth, values.max() + 3 * bandwidth, grid_size
    )
    z = (grid[:, None] - values[None, :]) / bandwidth
    density = np.exp(-0.5 * z**2).sum(axis=1) / (
        values.size * bandwidth * math.sqrt(2 * math.pi)
    )
    return KdeCurve(
        bandwidth=float(bandwidth),
        grid=tuple(float(x) for x in grid),
        density=tuple(float(d) for d in density),
    )


def negation_prevalence(
    corpus: list[ReportRecord],
    split: str,
    lexicon: diagnosis.NegationLexicon,
) -> float:
    members = [r for r in corpus if r.split == split]
    if not members:
        raise ValidationError(f"split {split!r} is empty")
    negated = sum(
        1
        for r in members
        if diagnosis.classify(r.impression, lexicon) == diagnosis.NEGATED
    )
    return negated / len(members)
