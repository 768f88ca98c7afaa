import pytest

from radsum.errors import UsageError, ValidationError
from radsum.history import (
    LABEL_FLAT,
    LABEL_JAGGED,
    LABEL_MONOTONIC,
    LABEL_PEAK_DROP_NO_RECOVERY,
    LABEL_PEAK_DROP_RECOVERY,
    MetricSeries,
    best_score,
    classify_run,
    detect_early_peak,
    detect_plateau,
    detect_recovery,
    detect_trough,
    jaggedness,
    load_history,
    load_run_meta,
    peak_table,
    predict_onset,
    smooth,
)


def series(values, run_id="run", metric="rouge1", start=1):
    return MetricSeries(
        run_id=run_id,
        metric=metric,
        points=tuple((start + i, v) for i, v in enumerate(values)),
    )


# A canonical peak/drop/recovery/plateau curve used by several tests:
# rises to 0.40 at epoch 4, falls to 0.10 at epoch 8, recovers past the
# peak at epoch 12, and plateaus near its final value of 0.55.
CURVE = [
    0.05, 0.20, 0.35, 0.40, 0.30, 0.22, 0.15, 0.10,
    0.18, 0.30, 0.38, 0.43, 0.47, 0.50, 0.53, 0.54, 0.55, 0.55,
]


class TestMetricSeries:
    def test_rejects_unsorted_epochs(self):
        with pytest.raises(ValidationError):
            MetricSeries("r", "rouge1", ((2, 0.1), (1, 0.2)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            MetricSeries("r", "rouge1", ((1, float("nan")),))


class TestLoaders:
    def test_load_history(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text(
            "run_id,metric,epoch,value\n"
            "a,rouge1,2,0.2\n"
            "a,rouge1,1,0.1\n"
            "b,bleu,1,0.3\n"
        )
        loaded = load_history(path)
        assert [(s.run_id, s.metric) for s in loaded] == [("a", "rouge1"), ("b", "bleu")]
        assert loaded[0].points == ((1, 0.1), (2, 0.2))

    def test_duplicate_epoch_rejected(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text(
            "run_id,metric,epoch,value\na,rouge1,1,0.1\na,rouge1,1,0.2\n"
        )
        with pytest.raises(ValidationError, match=":3"):
            load_history(path)

    def test_bad_value_names_row(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("run_id,metric,epoch,value\na,rouge1,1,oops\n")
        with pytest.raises(ValidationError, match=":2"):
            load_history(path)

    def test_load_run_meta(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(
            "run_id,checkpoint,train_fraction\na,base,1.0\nb,large,0.5\n"
        )
        metas = load_run_meta(path)
        assert metas["b"].checkpoint == "large"
        assert metas["b"].train_fraction == 0.5

    def test_bad_fraction_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("run_id,checkpoint,train_fraction\na,base,1.5\n")
        with pytest.raises(ValidationError):
            load_run_meta(path)


class TestSmooth:
    def test_window_one_identity(self):
        s = series(CURVE)
        assert smooth(s, 1).points == s.points

    def test_window_three(self):
        s = series([0.0, 0.3, 0.6])
        assert smooth(s, 3).values == pytest.approx([0.0, 0.3, 0.6])
        s = series([0.0, 0.9, 0.0])
        assert smooth(s, 3).values == pytest.approx([0.0, 0.3, 0.0])

    def test_even_window_rejected(self):
        with pytest.raises(UsageError):
            smooth(series(CURVE), 2)

    def test_preserves_epochs(self):
        s = series(CURVE, start=5)
        assert smooth(s, 5).epochs == s.epochs


class TestDetectors:
    def test_peak_on_curve(self):
        assert detect_early_peak(series(CURVE)) == (4, 0.40)

    def test_monotonic_has_no_peak(self):
        assert detect_early_peak(series([0.1, 0.2, 0.3, 0.4, 0.5])) is None

    def test_endpoints_never_peak(self):
        assert detect_early_peak(series([0.5, 0.1, 0.9])) is None
        assert detect_early_peak(series([0.9, 0.1, 0.5])) is None

    def test_prominence_gate(self):
        bumpy = [0.10, 0.115, 0.10, 0.10, 0.10]
        assert detect_early_peak(series(bumpy), min_prominence=0.02) is None
        assert detect_early_peak(series(bumpy), min_prominence=0.01) == (2, 0.115)

    def test_trough_on_curve(self):
        assert detect_trough(series(CURVE), after_epoch=4) == (8, 0.10)

    def test_trough_tie_earliest(self):
        s = series([0.5, 0.1, 0.3, 0.1, 0.4])
        assert detect_trough(s, after_epoch=1) == (2, 0.1)

    def test_trough_none_after_final(self):
        assert detect_trough(series(CURVE), after_epoch=18) is None

    def test_recovery_on_curve(self):
        # values exceed the 0.40 peak from epoch 12 onward and stay there
        assert detect_recovery(series(CURVE), peak=(4, 0.40), sustain=3) == 12

    def test_recovery_requires_sustain(self):
        spike = [0.1, 0.4, 0.1, 0.45, 0.1, 0.1, 0.1]
        assert detect_recovery(series(spike), peak=(2, 0.4), sustain=2) is None

    def test_plateau_on_curve(self):
        # final 0.55, threshold 0.5225, first reached at epoch 15
        assert detect_plateau(series(CURVE)) == 15

    def test_plateau_none_for_nonpositive_final(self):
        assert detect_plateau(series([0.3, 0.0])) is None

    def test_jaggedness_flat_zero(self):
        assert jaggedness(series([0.4, 0.4, 0.4])) == 0.0

    def test_jaggedness_sawtooth_high(self):
        saw = [0.1, 0.9] * 5
        assert jaggedness(series(saw)) == pytest.approx(1.0)

    def test_best_score_tie_earliest(self):
        assert best_score(series([0.1, 0.5, 0.5, 0.2])) == (2, 0.5)


class TestClassifyRun:
    def test_recovery_label(self):
        report = classify_run(series(CURVE))
        assert report.label == LABEL_PEAK_DROP_RECOVERY
        assert report.early_peak == (4, 0.40)
        assert report.trough == (8, 0.10)
        assert report.recovery_onset == 12
        assert report.plateau_onset == 15

    def test_no_recovery_label(self):
        values = [0.05, 0.2, 0.4, 0.3, 0.2, 0.15, 0.12, 0.1, 0.1, 0.1]
        assert classify_run(series(values)).label == LABEL_PEAK_DROP_NO_RECOVERY

    def test_monotonic_label(self):
        values = [0.1, 0.2, 0.3, 0.4, 0.45, 0.47]
        assert classify_run(series(values)).label == LABEL_MONOTONIC

    def test_flat_label(self):
        # a slow decline: no peak, final well under 95% of the max, and a
        # per-step change small enough relative to the range to stay unjagged
        values = [0.40 - 0.0017 * i for i in range(30)]
        report = classify_run(series(values))
        assert report.label == LABEL_FLAT

    def test_jagged_label(self):
        values = [0.1, 0.5, 0.1, 0.5, 0.1, 0.5, 0.1]
        assert classify_run(series(values)).label == LABEL_JAGGED

    def test_smoothing_applied_before_detection(self):
        noisy = [v + (0.03 if i % 2 else -0.03) for i, v in enumerate(CURVE)]
        report = classify_run(series(noisy), window=3)
        assert report.label == LABEL_PEAK_DROP_RECOVERY


class TestPredictOnset:
    def test_published_pair_full_history(self):
        assert predict_onset([(1.0, 48), (0.5, 106)], 0.1) == 530

    def test_published_pair_second(self):
        predicted = predict_onset([(1.0, 32), (0.5, 65)], 0.1)
        assert 320 <= predicted <= 340

    def test_exact_integer_not_bumped(self):
        assert predict_onset([(0.5, 10)], 0.1) == 50
        assert predict_onset([(0.1, 3)], 0.1) == 3

    def test_errors(self):
        with pytest.raises(ValidationError):
            predict_onset([], 0.5)
        with pytest.raises(UsageError):
            predict_onset([(1.0, 5)], 0.0)


class TestPeakTable:
    def test_sorted_rows(self):
        from radsum.history import PhaseReport, RunMeta

        def report(peak):
            return PhaseReport(
                run_id="r",
                metric="rouge1",
                early_peak=peak,
                trough=None,
                recovery_onset=None,
                plateau_onset=None,
                jaggedness=0.0,
                label=LABEL_MONOTONIC,
            )

        runs = [
            (RunMeta("b", "large", 1.0), report((3, 0.5)), {"rouge1": 0.5}),
            (RunMeta("a", "base", 0.5), report((7, 0.4)), {"rouge1": 0.4}),
            (RunMeta("c", "base", 1.0), report(None), {}),
        ]
        rows = peak_table(runs)
        assert [(r["checkpoint"], r["train_fraction"]) for r in rows] == [
            ("base", 0.5),
            ("base", 1.0),
            ("large", 1.0),
        ]
        assert rows[0]["peak_epoch"] == 7
        assert rows[1]["peak_epoch"] is None
        assert rows[1]["rouge1"] is None
