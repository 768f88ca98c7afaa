"""Command-line entry point.

Subcommands: corpus-stats, clean, filter, score, classify, history. Every
command writes machine-readable JSON/CSV payloads plus rendered figures into
the output directory, together with a run manifest for reproducibility.
Payload bytes are deterministic; timestamps live only in the manifest.

Exit codes: 0 success, 1 usage error, 2 data validation error, 3 internal.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, corpus as corpus_mod, diagnosis, history as history_mod
from . import metrics as metrics_mod
from . import outlier as outlier_mod
from . import plots
from .errors import UsageError, ValidationError
from .tokenize import word_tokenize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_INTERNAL = 3

CONFIG_DEFAULTS = {
    "stemming": "true",
    "smoothing": "none",
    "percentile": "0.98",
    "window": "1",
    "radius": "3",
    "prominence": "0.02",
    "sustain": "3",
    "plateau_fraction": "0.95",
    "jagged_threshold": "0.05",
}


# ---------------------------------------------------------------------------
# Serialization helpers
# ---------------------------------------------------------------------------

def _round_floats(obj, places: int = 6):
    if isinstance(obj, float):
        return round(obj, places)
    if isinstance(obj, dict):
        return {k: _round_floats(v, places) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, places) for v in obj]
    return obj


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, payload) -> None:
    text = json.dumps(_round_floats(payload), indent=2, sort_keys=True) + "\n"
    _atomic_write(path, text)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[dict]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(row.get(col)) for col in header))
    _atomic_write(path, "\n".join(lines) + "\n")


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: Path, command: str, config: dict, inputs: list[Path]) -> None:
    config_blob = json.dumps(config, sort_keys=True).encode()
    manifest = {
        "tool_version": __version__,
        "command": command,
        "config": config,
        "config_hash": hashlib.sha256(config_blob).hexdigest(),
        "input_digests": [
            {"path": str(p), "sha256": _sha256_file(p)} for p in inputs
        ],
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    write_json(out_dir / "manifest.json", manifest)


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------

def load_config(path: str | None) -> dict[str, str]:
    config = dict(CONFIG_DEFAULTS)
    if path is None:
        return config
    file = Path(path)
    if not file.exists():
        raise UsageError(f"config file not found: {file}")
    for lineno, line in enumerate(file.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{file}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_DEFAULTS:
            raise UsageError(f"{file}:{lineno}: unknown config key {key!r}")
        config[key] = value
    return config


def effective_config(args, config: dict[str, str]) -> dict:
    """Merge config-file values with explicit CLI flag overrides."""
    merged = dict(config)
    for key in CONFIG_DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = str(flag)
    try:
        return {
            "stemming": merged["stemming"].lower() in ("true", "1", "yes"),
            "smoothing": merged["smoothing"],
            "percentile": float(merged["percentile"]),
            "window": int(merged["window"]),
            "radius": int(merged["radius"]),
            "prominence": float(merged["prominence"]),
            "sustain": int(merged["sustain"]),
            "plateau_fraction": float(merged["plateau_fraction"]),
            "jagged_threshold": float(merged["jagged_threshold"]),
        }
    except ValueError as exc:
        raise UsageError(f"bad config value: {exc}")


# ---------------------------------------------------------------------------
# Shared input loaders
# ---------------------------------------------------------------------------

def load_predictions(path: str | Path) -> dict[str, str]:
    """Predictions JSONL: one {id, prediction} object per line."""
    file = Path(path)
    if not file.exists():
        raise ValidationError(f"predictions file not found: {file}")
    predictions: dict[str, str] = {}
    with file.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{file}:{lineno}: JSON parse error: {exc}")
            if "id" not in raw or "prediction" not in raw:
                raise ValidationError(f"{file}:{lineno}: need keys id and prediction")
            rid = str(raw["id"])
            if rid in predictions:
                raise ValidationError(f"{file}:{lineno}: duplicate prediction id {rid!r}")
            predictions[rid] = str(raw["prediction"])
    return predictions


def load_embeddings(path: str | Path) -> dict[str, metrics_mod.EmbeddingRecord]:
    file = Path(path)
    if not file.exists():
        raise ValidationError(f"embeddings file not found: {file}")
    try:
        raw = json.loads(file.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{file}: JSON parse error: {exc}")
    records = {}
    for item in raw:
        rec = metrics_mod.EmbeddingRecord(
            id=str(item["id"]),
            ref_tokens=tuple(item["ref_tokens"]),
            ref_vectors=item["ref_vectors"],
            cand_tokens=tuple(item["cand_tokens"]),
            cand_vectors=item["cand_vectors"],
        )
        records[rec.id] = rec
    return records


def _split_texts(records, split: str) -> dict[str, str]:
    texts = {r.id: r.impression for r in records if r.split == split}
    if not texts:
        raise ValidationError(f"split {split!r} is empty")
    return texts


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def cmd_corpus_stats(args, config: dict, out_dir: Path) -> None:
    records = corpus_mod.load_corpus(args.corpus, format=args.format)
    records, _ = corpus_mod.clean_corpus(records)
    members = [r for r in records if r.split == args.split]
    if not members:
        raise ValidationError(f"split {args.split!r} is empty")
    lexicon = diagnosis.load_lexicon(args.lexicon)

    box_rows = []
    lengths_by_field: dict[str, list[int]] = {}
    stats_by_field = {}
    kde_by_field = {}
    for field in ("findings", "impression"):
        lengths = [len(word_tokenize(getattr(r, field))) for r in members]
        ids = [r.id for r in members]
        stats = corpus_mod.length_stats(lengths, ids)
        lengths_by_field[field] = lengths
        stats_by_field[field] = stats
        box_rows.append(
            {
                "split": args.split,
                "field": field,
                "n": stats.n,
                "mean": stats.mean,
                "median": stats.median,
                "q1": stats.q1,
                "q3": stats.q3,
                "iqr": stats.iqr,
                "whisker_lo": stats.whisker_lo,
                "whisker_hi": stats.whisker_hi,
                "n_outliers": len(stats.outlier_ids),
            }
        )
        try:
            bandwidth = corpus_mod.silverman_bandwidth(lengths)
        except ValidationError:
            bandwidth = None
        if bandwidth is not None:
            curve = corpus_mod.kde(lengths, bandwidth)
            kde_by_field[field] = curve
            write_csv(
                out_dir / f"kde_{args.split}_{field}.csv",
                ["x", "density"],
                [{"x": x, "density": d} for x, d in zip(curve.grid, curve.density)],
            )
    write_csv(
        out_dir / "box_stats.csv",
        ["split", "field", "n", "mean", "median", "q1", "q3", "iqr",
         "whisker_lo", "whisker_hi", "n_outliers"],
        box_rows,
    )
    prevalence = corpus_mod.negation_prevalence(records, args.split, lexicon)
    write_json(
        out_dir / "prevalence.json",
        {
            "split": args.split,
            "n": len(members),
            "negated_fraction": prevalence,
            "diagnosis_fraction": 1.0 - prevalence,
            "bandwidths": {
                field: curve.bandwidth for field, curve in kde_by_field.items()
            },
        },
    )
    if not args.no_figures:
        plots.render_length_distribution(
            lengths_by_field, stats_by_field, kde_by_field, args.split,
            out_dir / f"length_distribution_{args.split}.png",
        )
    write_manifest(out_dir, "corpus-stats", config, [Path(args.corpus)])


def cmd_clean(args, config: dict, out_dir: Path) -> None:
    records = corpus_mod.load_corpus(args.corpus, format=args.format)
    retained, excluded = corpus_mod.clean_corpus(records)
    lines = [
        json.dumps(
            {"id": r.id, "findings": r.findings, "impression": r.impression,
             "split": r.split},
            sort_keys=True,
        )
        for r in retained
    ]
    _atomic_write(out_dir / "cleaned.jsonl", "\n".join(lines) + ("\n" if lines else ""))
    write_json(
        out_dir / "exclusions.json",
        [
            {"id": e.id, "findings_tokens": e.findings_tokens,
             "impression_tokens": e.impression_tokens}
            for e in excluded
        ],
    )
    write_manifest(out_dir, "clean", config, [Path(args.corpus)])


def cmd_filter(args, config: dict, out_dir: Path) -> None:
    percentile = config["percentile"]
    if not 0.0 < percentile <= 1.0:
        raise UsageError(f"percentile must be in (0, 1], got {percentile}")
    records = corpus_mod.load_corpus(args.corpus, format=args.format)
    records, _ = corpus_mod.clean_corpus(records)
    train = [r for r in records if r.split == "train"]
    if not train:
        raise ValidationError("train split is empty")
    lexicon = diagnosis.load_lexicon(args.lexicon)
    ids = [r.id for r in train]
    points = [
        (float(len(word_tokenize(r.findings))), float(len(word_tokenize(r.impression))))
        for r in train
    ]
    model = outlier_mod.fit_gaussian(points)
    result = outlier_mod.filter_percentile(points, ids, percentile, model)
    write_json(
        out_dir / "filter_result.json",
        {
            "percentile": result.percentile,
            "threshold_d2": result.threshold_d2,
            "retained_ids": list(result.retained_ids),
            "excluded_ids": list(result.excluded_ids),
        },
    )
    retained = set(result.retained_ids)
    scatter_rows = []
    for r, point in zip(train, points):
        scatter_rows.append(
            {
                "id": r.id,
                "findings_len": int(point[0]),
                "impression_len": int(point[1]),
                "d2": outlier_mod.mahalanobis_sq(model, point),
                "retained_flag": r.id in retained,
                "negated_flag": diagnosis.classify(r.impression, lexicon)
                == diagnosis.NEGATED,
            }
        )
    write_csv(
        out_dir / "scatter.csv",
        ["id", "findings_len", "impression_len", "d2", "retained_flag",
         "negated_flag"],
        scatter_rows,
    )
    retained_points = [p for r, p in zip(train, points) if r.id in retained]
    max_findings = int(max(p[0] for p in retained_points))
    max_impression = int(max(p[1] for p in retained_points))
    write_json(
        out_dir / "truncation.json",
        {
            "max_findings_tokens": max_findings,
            "max_impression_tokens": max_impression,
            "findings_truncation": outlier_mod.truncation_length(max_findings),
            "impression_truncation": outlier_mod.truncation_length(max_impression),
        },
    )
    if not args.no_figures:
        plots.render_filter_scatter(scatter_rows, out_dir / "filter_scatter.png")
    write_manifest(out_dir, "filter", config, [Path(args.corpus)])


def _bundle_to_dict(bundle: metrics_mod.ScoreBundle) -> dict:
    payload = {}
    for name in ("rouge1", "rouge2", "rougeL", "rougeLsum"):
        triple = getattr(bundle, name)
        payload[name] = {
            "precision": triple.precision,
            "recall": triple.recall,
            "f1": triple.f1,
        }
    payload["meteor"] = bundle.meteor
    if bundle.bleu is not None:
        payload["bleu"] = bundle.bleu
    if bundle.bertscore_recall is not None:
        payload["bertscore_recall"] = bundle.bertscore_recall
    return payload


def cmd_score(args, config: dict, out_dir: Path) -> None:
    records = corpus_mod.load_corpus(args.corpus, format=args.format)
    references = _split_texts(records, args.split)
    predictions = load_predictions(args.predictions)
    embeddings = load_embeddings(args.embeddings) if args.embeddings else None
    per_record, aggregate = metrics_mod.score_corpus(
        predictions,
        references,
        embeddings=embeddings,
        stem=config["stemming"],
        smoothing=config["smoothing"],
    )
    payload = {
        "config": {
            "stemming": config["stemming"],
            "smoothing": config["smoothing"],
            "lowercase": True,
        },
        "per_record": [
            {"id": rid, **_bundle_to_dict(bundle)}
            for rid, bundle in sorted(per_record.items())
        ],
        "aggregate": _bundle_to_dict(aggregate),
    }
    write_json(out_dir / "scores.json", payload)
    if not args.no_figures:
        plots.render_score_summary(
            payload["aggregate"], out_dir / "aggregate_metrics.png"
        )
    inputs = [Path(args.corpus), Path(args.predictions)]
    if args.embeddings:
        inputs.append(Path(args.embeddings))
    write_manifest(out_dir, "score", config, inputs)


def cmd_classify(args, config: dict, out_dir: Path) -> None:
    records = corpus_mod.load_corpus(args.corpus, format=args.format)
    references = _split_texts(records, args.split)
    predictions = load_predictions(args.predictions)
    lexicon = diagnosis.load_lexicon(args.lexicon)
    counts = diagnosis.confusion(predictions, references, lexicon)
    dummy_precision, dummy_recall = diagnosis.dummy_baseline(references, lexicon)
    report = {
        "tp": counts.tp,
        "fp": counts.fp,
        "fn": counts.fn,
        "tn": counts.tn,
        "precision": counts.precision,
        "recall": counts.recall,
        "positive_class": counts.positive_class,
        "dummy_precision": dummy_precision,
        "dummy_recall": dummy_recall,
    }
    write_json(out_dir / "confusion.json", report)
    if not args.no_figures:
        plots.render_confusion(report, out_dir / "confusion.png")
    write_manifest(
        out_dir, "classify", config, [Path(args.corpus), Path(args.predictions)]
    )


def cmd_history(args, config: dict, out_dir: Path) -> None:
    series_list = history_mod.load_history(args.history)
    metas = history_mod.load_run_meta(args.meta) if args.meta else {}
    reports: dict[tuple[str, str], history_mod.PhaseReport] = {}
    by_run: dict[str, dict[str, history_mod.MetricSeries]] = {}
    for series in series_list:
        report = history_mod.classify_run(
            series,
            radius=config["radius"],
            min_prominence=config["prominence"],
            sustain=config["sustain"],
            plateau_fraction=config["plateau_fraction"],
            jagged_threshold=config["jagged_threshold"],
            window=config["window"],
        )
        reports[(series.run_id, series.metric)] = report
        by_run.setdefault(series.run_id, {})[series.metric] = series
        best = history_mod.best_score(series)
        write_json(
            out_dir / f"phase_report_{series.run_id}_{series.metric}.json",
            {
                "run_id": report.run_id,
                "metric": report.metric,
                "early_peak": (
                    {"epoch": report.early_peak[0], "value": report.early_peak[1]}
                    if report.early_peak
                    else None
                ),
                "trough": (
                    {"epoch": report.trough[0], "value": report.trough[1]}
                    if report.trough
                    else None
                ),
                "recovery_onset": report.recovery_onset,
                "plateau_onset": report.plateau_onset,
                "jaggedness": report.jaggedness,
                "label": report.label,
                "best": {"epoch": best[0], "value": best[1]},
                "detector_config": config,
            },
        )
        smoothed = history_mod.smooth(series, config["window"])
        write_csv(
            out_dir / f"plotdata_{series.run_id}_{series.metric}.csv",
            ["epoch", "value", "smoothed", "label"],
            [
                {"epoch": e, "value": v, "smoothed": s, "label": report.label}
                for (e, v), s in zip(series.points, smoothed.values)
            ],
        )
        if not args.no_figures:
            plots.render_history(
                series, smoothed, report,
                out_dir / f"history_{series.run_id}_{series.metric}.png",
            )

    # Peak table: peak epoch from the rouge1 series, other metrics read there.
    table_runs = []
    for run_id, metric_series in sorted(by_run.items()):
        meta = metas.get(run_id) or history_mod.RunMeta(
            run_id=run_id, checkpoint=run_id, train_fraction=1.0
        )
        report = reports.get((run_id, "rouge1"))
        if report is None or report.early_peak is None:
            continue
        peak_epoch = report.early_peak[0]
        scores = {}
        for metric, series in metric_series.items():
            value = dict(series.points).get(peak_epoch)
            if value is not None:
                scores[metric] = value
        table_runs.append((meta, report, scores))
    write_csv(
        out_dir / "peak_table.csv",
        ["checkpoint", "train_fraction", "peak_epoch", "rouge1",
         "bertscore_recall", "meteor", "bleu"],
        history_mod.peak_table(table_runs),
    )

    # Onset extrapolation per checkpoint for query fractions not observed.
    query_fractions = (
        [float(f) for f in args.predict_fractions.split(",")]
        if args.predict_fractions
        else [0.1, 0.5, 1.0]
    )
    by_checkpoint: dict[str, list[tuple[float, int]]] = {}
    for (run_id, metric), report in reports.items():
        if metric != "rouge1" or report.recovery_onset is None:
            continue
        meta = metas.get(run_id)
        if meta is None:
            continue
        by_checkpoint.setdefault(meta.checkpoint, []).append(
            (meta.train_fraction, report.recovery_onset)
        )
    predictions = []
    for checkpoint, onsets in sorted(by_checkpoint.items()):
        observed = {fraction for fraction, _ in onsets}
        for fraction in query_fractions:
            if fraction in observed:
                continue
            predictions.append(
                {
                    "checkpoint": checkpoint,
                    "train_fraction": fraction,
                    "predicted_onset_epoch": history_mod.predict_onset(
                        onsets, fraction
                    ),
                    "observed": sorted(onsets),
                }
            )
    write_json(out_dir / "onset_predictions.json", predictions)
    inputs = [Path(args.history)] + ([Path(args.meta)] if args.meta else [])
    write_manifest(out_dir, "history", config, inputs)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="radsum",
        description="Corpus statistics, summarisation metrics, and "
        "training-history phase detection.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--out", default="radsum_out", help="output directory")
        p.add_argument("--seed", type=int, default=0,
                       help="reserved; all operations are deterministic")
        p.add_argument("--quiet", action="store_true")
        p.add_argument("--no-figures", action="store_true",
                       help="skip rendering PNG figures")

    def add_corpus(p):
        p.add_argument("--corpus", required=True, help="corpus JSONL or CSV")
        p.add_argument("--format", choices=["jsonl", "csv"], default=None)

    p = sub.add_parser("corpus-stats", help="length distributions and prevalences")
    add_common(p)
    add_corpus(p)
    p.add_argument("--split", default="train",
                   choices=list(corpus_mod.SPLITS))
    p.add_argument("--lexicon", default=None, help="negation lexicon file")
    p.set_defaults(func=cmd_corpus_stats)

    p = sub.add_parser("clean", help="drop impressions longer than their findings")
    add_common(p)
    add_corpus(p)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("filter", help="Mahalanobis percentile filter on the train split")
    add_common(p)
    add_corpus(p)
    p.add_argument("--percentile", type=float, default=None)
    p.add_argument("--lexicon", default=None)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("score", help="summarisation metrics for predictions")
    add_common(p)
    add_corpus(p)
    p.add_argument("--predictions", required=True, help="predictions JSONL")
    p.add_argument("--embeddings", default=None, help="embeddings JSON")
    p.add_argument("--split", default="validation", choices=list(corpus_mod.SPLITS))
    p.add_argument("--stemming", default=None, choices=["true", "false"])
    p.add_argument("--smoothing", default=None, choices=["none", "add1"])
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("classify", help="negated-diagnosis confusion matrix")
    add_common(p)
    add_corpus(p)
    p.add_argument("--predictions", required=True)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--split", default="validation", choices=list(corpus_mod.SPLITS))
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("history", help="phase detection over metric trajectories")
    add_common(p)
    p.add_argument("--history", required=True, help="long-form history CSV")
    p.add_argument("--meta", default=None, help="run metadata CSV")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--prominence", type=float, default=None)
    p.add_argument("--sustain", type=int, default=None)
    p.add_argument("--plateau-fraction", dest="plateau_fraction", type=float,
                   default=None)
    p.add_argument("--jagged-threshold", dest="jagged_threshold", type=float,
                   default=None)
    p.add_argument("--predict-fractions", dest="predict_fractions", default=None,
                   help="comma-separated train fractions to extrapolate onsets to")
    p.set_defaults(func=cmd_history)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = effective_config(args, load_config(args.config))
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        args.func(args, config, out_dir)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if not args.quiet:
        print(f"wrote outputs to {out_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
