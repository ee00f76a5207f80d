import io
from datetime import date, datetime, timedelta, timezone

import numpy as np
import pytest

from sensorpca.ingest import Measurement, MeasurementTable, Modality
from sensorpca.preprocess import (
    SLOTS_PER_DAY,
    DayVector,
    DegenerateDay,
    NormalizedDayVector,
    aggregate_table,
    aggregate_to_slots,
    censor_cutoff,
    censor_noisy_days,
    center_and_normalize,
    median3,
    normalize_days,
    roughness,
    select_complete_days,
    write_censor_report,
)

TZ = timezone(timedelta(hours=-5))
AIR = Modality.AIR_TEMPERATURE


def table_from(readings, offset=-300):
    return MeasurementTable.from_measurements(
        [Measurement(s, m, ts, v) for s, m, ts, v in readings], offset
    )


def test_ten_readings_average_in_one_slot():
    start = datetime(2005, 9, 17, 10, 0, tzinfo=TZ)
    t = table_from([("m", AIR, start + timedelta(minutes=i), float(i + 1)) for i in range(10)])
    (day,) = aggregate_to_slots(t, "m", AIR)
    assert day.day == date(2005, 9, 17)
    assert day.slots[60] == pytest.approx(5.5)
    assert day.filled == 1


def test_slot_boundaries_use_local_time():
    # 04:59 UTC is 23:59 local on the previous day at -05:00
    ts = datetime(2005, 9, 18, 4, 59, tzinfo=timezone.utc)
    t = table_from([("m", AIR, ts, 1.0), ("m", AIR, ts + timedelta(minutes=1), 2.0)])
    days = aggregate_to_slots(t, "m", AIR)
    assert [d.day for d in days] == [date(2005, 9, 17), date(2005, 9, 18)]
    assert days[0].slots[143] == 1.0
    assert days[1].slots[0] == 2.0


def test_full_and_half_days():
    start = datetime(2005, 9, 17, 0, 0, tzinfo=TZ)
    readings = [("m", AIR, start + timedelta(minutes=10 * i), float(i)) for i in range(144)]
    readings += [("m", AIR, start + timedelta(days=1, minutes=20 * i), 1.0) for i in range(72)]
    days = aggregate_to_slots(table_from(readings), "m", AIR)
    assert [d.filled for d in days] == [144, 72]
    assert [d.complete for d in days] == [True, False]
    assert select_complete_days(days) == [days[0]]


def test_aggregation_independent_of_row_order(rng):
    start = datetime(2005, 9, 17, 0, 0, tzinfo=TZ)
    readings = [
        (s, m, start + timedelta(minutes=int(k)), float(rng.standard_normal()))
        for s in ("a", "b")
        for m in (AIR, Modality.SOIL_TEMPERATURE)
        for k in rng.integers(0, 3 * 1440, size=300)
    ]
    t = table_from(readings)
    perm = rng.permutation(len(readings))
    shuffled = table_from([readings[i] for i in perm])
    a, b = aggregate_table(t), aggregate_table(shuffled)
    assert a.keys() == b.keys()
    for key in a:
        for x, y in zip(a[key], b[key]):
            assert x.day == y.day
            np.testing.assert_allclose(x.slots, y.slots, equal_nan=True, atol=1e-12)


def _day(values, sensor="m", d=date(2005, 1, 1)):
    return DayVector(sensor, AIR, d, np.asarray(values, dtype=float))


def test_center_and_normalize_invariants(rng):
    raw = 20 + 5 * np.sin(np.linspace(0, 2 * np.pi, SLOTS_PER_DAY)) + rng.standard_normal(SLOTS_PER_DAY)
    nd = center_and_normalize(_day(raw))
    assert abs(np.mean(nd.values)) < 1e-12
    assert np.sqrt(np.mean(nd.values**2)) == pytest.approx(1.0, abs=1e-12)
    assert nd.daily_mean == pytest.approx(np.mean(raw))
    np.testing.assert_allclose(nd.denormalize(), raw, atol=1e-12)


def test_normalization_scale_and_shift_invariant(rng):
    raw = rng.standard_normal(SLOTS_PER_DAY)
    a = center_and_normalize(_day(raw))
    b = center_and_normalize(_day(3.0 * raw + 7.0))
    np.testing.assert_allclose(a.values, b.values, atol=1e-12)


def test_constant_day_is_degenerate():
    with pytest.raises(DegenerateDay):
        center_and_normalize(_day(np.full(SLOTS_PER_DAY, 4.2)))
    ok, bad = normalize_days([_day(np.full(SLOTS_PER_DAY, 4.2)), _day(np.arange(SLOTS_PER_DAY))])
    assert len(ok) == 1 and len(bad) == 1


def test_incomplete_day_rejected():
    v = np.arange(SLOTS_PER_DAY, dtype=float)
    v[5] = np.nan
    with pytest.raises(ValueError, match="incomplete"):
        center_and_normalize(_day(v))


def test_median3_and_roughness():
    x = np.array([1.0, 5.0, 2.0, 2.0, 9.0])
    np.testing.assert_array_equal(median3(x), [1.0, 2.0, 2.0, 2.0, 9.0])
    # smooth ramps pass through a running median untouched
    assert roughness(np.linspace(-1, 1, 144)) == 0.0


def _normalized(values, i):
    v = np.asarray(values, dtype=float)
    v = v - v.mean()
    v = v / np.sqrt(np.mean(v * v))
    return NormalizedDayVector(f"s{i % 3}", AIR, date(2005, 1, 1) + timedelta(days=i), v, 0.0, 1.0)


def test_censoring_removes_injected_jitter(rng):
    base = np.sin(np.linspace(0, 2 * np.pi, SLOTS_PER_DAY))
    days = [_normalized(base + 0.02 * rng.standard_normal(SLOTS_PER_DAY), i) for i in range(30)]
    jittery = {4, 17, 22}
    for i in jittery:
        days[i] = _normalized(base + 0.8 * rng.standard_normal(SLOTS_PER_DAY), i)
    kept, censored = censor_noisy_days(days, k_mad=4.0)
    assert {d.day for d in censored} == {days[i].day for i in jittery}
    assert len(kept) == 27


def test_censor_cutoff_formula():
    scores = np.array([1.0, 2.0, 3.0, 4.0, 100.0])
    # median 3, absolute deviations [2,1,0,1,97] -> MAD 1
    assert censor_cutoff(scores, 4.0) == 7.0


def test_censoring_skips_small_samples(rng):
    days = [_normalized(rng.standard_normal(SLOTS_PER_DAY) * (10 if i == 0 else 1), i) for i in range(7)]
    kept, censored = censor_noisy_days(days)
    assert censored == [] and len(kept) == 7


def test_zero_mad_censors_only_rough_days(rng):
    ramp = np.linspace(-1, 1, SLOTS_PER_DAY)  # roughness exactly 0
    days = [_normalized(ramp, i) for i in range(10)] + [
        _normalized(ramp + rng.standard_normal(SLOTS_PER_DAY), i) for i in range(10, 13)
    ]
    kept, censored = censor_noisy_days(days)
    assert [d.day for d in censored] == [d.day for d in days[10:]]


def test_never_censors_more_than_half(rng):
    for trial in range(50):
        n = int(rng.integers(8, 40))
        scales = rng.exponential(1.0, size=n) ** 3
        days = [_normalized(np.sin(np.linspace(0, 6, SLOTS_PER_DAY)) + s * rng.standard_normal(SLOTS_PER_DAY), i) for i, s in enumerate(scales)]
        kept, censored = censor_noisy_days(days, k_mad=float(rng.uniform(0.1, 5)))
        assert len(censored) <= n // 2
        assert len(kept) + len(censored) == n


def test_censor_report_sorted():
    base = np.sin(np.linspace(0, 2 * np.pi, SLOTS_PER_DAY))
    days = [_normalized(base, i) for i in range(4)]
    buf = io.StringIO()
    write_censor_report(days[2:], days[:2], buf)
    rows = buf.getvalue().splitlines()
    assert rows[0] == "sensor_id,day,score,censored"
    keys = [tuple(r.split(",")[:2]) for r in rows[1:]]
    assert keys == sorted(keys)
