import io
import json
import math
from datetime import date, timedelta

import numpy as np
import pytest
from oracles import brute_force_confusion

from sensorpca.detectors import DayScore, Method, detect
from sensorpca.evaluation import (
    calibrate_threshold,
    confusion,
    pr_curve,
    write_pr_csv,
    write_report_json,
)
from sensorpca.ingest import EventDaySet

D0 = date(2005, 1, 1)


def day(i):
    return D0 + timedelta(days=int(i))


def scores_of(values, method=Method.DELTA):
    return [DayScore(day(i), method, float(v)) for i, v in enumerate(values)]


def truth_of(idx):
    return EventDaySet(frozenset(day(i) for i in idx), 3.0)


def test_worked_example():
    s = scores_of([-2.0, -1.0, 0.5, 1.0, -0.5])
    truth = truth_of([0, 2])
    rep = confusion(detect(s, 0.0), truth, [x.day for x in s])
    # flagged {0,1,4}; truth {0,2}
    assert (rep.true_positives, rep.false_positives, rep.false_negatives) == (1, 2, 1)
    assert rep.precision == pytest.approx(1 / 3)
    assert rep.recall == pytest.approx(1 / 2)


def test_undefined_metrics_are_none():
    s = scores_of([1.0, 2.0])
    rep = confusion(detect(s, -math.inf), truth_of([]), [x.day for x in s])
    assert rep.precision is None and rep.recall is None


def test_truth_outside_evaluated_days_excluded():
    s = scores_of([-1.0, 1.0])
    rep = confusion(detect(s, 0.0), truth_of([0, 9]), [x.day for x in s])
    assert rep.truth_days == 1
    assert rep.excluded_truth_days == [day(9)]
    assert rep.recall == 1.0


def test_flags_outside_evaluated_days_rejected():
    s = scores_of([-1.0, 1.0])
    with pytest.raises(ValueError, match="outside"):
        confusion(detect(s, 0.0), truth_of([0]), [day(1)])


def test_matches_brute_force_randomized(rng):
    for _ in range(300):
        n = int(rng.integers(1, 40))
        s = scores_of(rng.standard_normal(n))
        truth_idx = set(rng.choice(n + 5, size=int(rng.integers(0, n + 1)), replace=False).tolist())
        evaluated = set(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
        slack = int(rng.integers(0, 3))
        kept = [x for i, x in enumerate(s) if i in evaluated]
        r = detect(kept, float(rng.normal()))
        rep = confusion(r, truth_of(truth_idx), [day(i) for i in evaluated], slack)
        flagged = {(d - D0).days for d in r.flagged_days}
        assert (rep.true_positives, rep.false_positives, rep.false_negatives) == brute_force_confusion(
            flagged, truth_idx, evaluated, slack
        )


def test_pr_curve_endpoints_and_monotone(rng):
    s = scores_of(rng.standard_normal(50))
    truth = truth_of(rng.choice(50, size=12, replace=False))
    curve = pr_curve(s, truth)
    assert curve[0] == (-math.inf, None, 0.0)
    thr, p, r = curve[-1]
    assert thr == math.inf and r == 1.0 and p == pytest.approx(12 / 50)
    recalls = [r for _, _, r in curve]
    assert all(a <= b for a, b in zip(recalls, recalls[1:]))
    assert len(curve) == 52


def test_pr_curve_agrees_with_confusion(rng):
    s = scores_of(rng.integers(0, 5, size=30).astype(float))  # many ties
    truth = truth_of(rng.choice(30, size=8, replace=False))
    days = [x.day for x in s]
    for thr, p, r in pr_curve(s, truth):
        rep = confusion(detect(s, thr), truth, days)
        assert (rep.precision, rep.recall) == (p, r)


def test_calibration_maximizes_recall_under_precision_floor(rng):
    for _ in range(50):
        n = int(rng.integers(5, 40))
        s = scores_of(rng.standard_normal(n))
        truth = truth_of(rng.choice(n, size=int(rng.integers(1, n)), replace=False))
        days = [x.day for x in s]
        thr = calibrate_threshold(s, truth, days, 0.5)
        rep = confusion(detect(s, thr), truth, days)
        # brute force over every cut position
        feasible = []
        for t, p, r in pr_curve(s, truth, days):
            if p is not None and p >= 0.5:
                feasible.append(r)
        if not feasible:
            assert thr == -math.inf
            continue
        assert rep.precision >= 0.5
        assert rep.recall == max(feasible)


def test_calibration_threshold_is_midpoint():
    s = scores_of([-3.0, -1.0, 2.0, 4.0])
    thr = calibrate_threshold(s, truth_of([0, 1]), None, 0.5)
    # {0,1} already gives full recall at precision 1; the cut sits between -1 and 2
    assert thr == pytest.approx(0.5)
    # with a floor of 0.5 but the events ranked low, a wider cut is needed
    thr = calibrate_threshold(s, truth_of([1, 2]), None, 0.5)
    assert thr == pytest.approx(3.0)


def test_report_json_is_deterministic():
    s = scores_of([-1.0, 0.5])
    rep = confusion(detect(s, math.inf), truth_of([0]), [x.day for x in s])
    rep.pr_curve = pr_curve(s, truth_of([0]))
    a, b = io.StringIO(), io.StringIO()
    write_report_json([rep], a)
    write_report_json([rep], b)
    assert a.getvalue() == b.getvalue()
    doc = json.loads(a.getvalue())
    assert doc["reports"][0]["threshold"] == "inf"
    assert doc["reports"][0]["recall"] == 1.0


def test_pr_csv_format():
    buf = io.StringIO()
    write_pr_csv([(-math.inf, None, 0.0), (0.5, 1.0, 0.5), (math.inf, 0.5, 1.0)], buf)
    assert buf.getvalue().splitlines() == ["threshold,precision,recall", "-inf,,0.0", "0.5,1.0,0.5", "inf,0.5,1.0"]
