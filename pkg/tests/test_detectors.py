import io
import math
from datetime import date, timedelta

import numpy as np
import pytest

from sensorpca.detectors import (
    DayScore,
    Method,
    detect,
    parse_threshold,
    read_scores_csv,
    score_basic,
    score_delta,
    score_highpass,
    write_scores_csv,
)
from sensorpca.trends import to_series

D0 = date(2005, 9, 17)


def series(values, skip=()):
    return to_series({D0 + timedelta(days=i): v for i, v in enumerate(values) if i not in skip})


def test_basic_scores_are_e1():
    scores = score_basic(series([0.9, 0.2, 0.8]))
    assert [s.score for s in scores] == [0.9, 0.2, 0.8]
    assert all(s.method is Method.BASIC for s in scores)


def test_flag_strictly_below_threshold():
    scores = score_highpass(series([-0.5, 0.0, 0.3]))
    r = detect(scores, 0.0)
    assert r.flagged_days == {D0}
    assert detect(scores, -math.inf).flagged_days == frozenset()
    assert len(detect(scores, math.inf).flagged_days) == 3


def test_delta_is_difference():
    air = series([0.1, -0.4, 0.2])
    soil = series([0.05, 0.1, 0.2])
    s = score_delta(air, soil)
    np.testing.assert_allclose([x.score for x in s], [0.05, -0.5, 0.0])


def test_delta_with_flat_soil_equals_highpass(rng):
    air = series(rng.standard_normal(20))
    zero = series(np.zeros(20))
    assert [s.score for s in score_delta(air, zero)] == [s.score for s in score_highpass(air)]


def test_delta_skips_unmatched_dates(caplog):
    air = series([0.1, 0.2, 0.3])
    soil = series([0.0, 0.0, 0.0], skip={1})
    with caplog.at_level("WARNING"):
        s = score_delta(air, soil)
    assert [x.day for x in s] == [D0, D0 + timedelta(days=2)]
    assert "1 date" in caplog.text


def test_flag_set_monotone_in_threshold(rng):
    scores = score_basic(series(rng.standard_normal(40)))
    thresholds = np.sort(rng.uniform(-3, 3, 20))
    flagged = [detect(scores, t).flagged_days for t in thresholds]
    for a, b in zip(flagged, flagged[1:]):
        assert a <= b


def test_detect_rejects_mixed_methods_and_duplicates():
    a = DayScore(D0, Method.BASIC, 0.1)
    with pytest.raises(ValueError, match="mix"):
        detect([a, DayScore(D0, Method.DELTA, 0.1)], 0)
    with pytest.raises(ValueError, match="per day"):
        detect([a, a], 0)


@pytest.mark.parametrize("text, value", [("-inf", -math.inf), ("+inf", math.inf), ("0.25", 0.25)])
def test_parse_threshold(text, value):
    assert parse_threshold(text) == value


def test_parse_threshold_rejects_nan():
    with pytest.raises(ValueError):
        parse_threshold("nan")


def test_scores_csv_roundtrip(rng):
    results = [
        detect(score_basic(series(rng.standard_normal(5))), 0.0),
        detect(score_highpass(series(rng.standard_normal(5))), -0.2),
    ]
    buf = io.StringIO()
    write_scores_csv(results, buf, "# sensorpca: {}")
    back = read_scores_csv(io.StringIO(buf.getvalue()))
    for r in results:
        scores, flagged = back[r.method]
        assert [s.score for s in scores] == [s.score for s in r.scores]
        assert flagged == set(r.flagged_days)
