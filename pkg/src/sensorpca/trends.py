"""Long-term trends of the daily coefficients.

Series are ``pandas.Series`` on a daily ``DatetimeIndex``; gaps are simply
absent dates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Mapping, Sequence

import numpy as np
import pandas as pd

from .pca import DayCoefficients

SMOOTH_THEN_AVERAGE = "smooth-then-average"
AVERAGE_THEN_SMOOTH = "average-then-smooth"


def to_series(values: Mapping, name: str | None = None) -> pd.Series:
    """Date-keyed mapping to a sorted daily series."""
    if not values:
        return pd.Series([], index=pd.DatetimeIndex([]), dtype=np.float64, name=name)
    idx = pd.DatetimeIndex(pd.to_datetime(list(values.keys())))
    s = pd.Series(list(values.values()), index=idx, dtype=np.float64, name=name)
    return s.sort_index()


def _day_numbers(index: pd.DatetimeIndex) -> np.ndarray:
    return index.values.astype("datetime64[D]").astype(np.int64)


def lowpass_week(series: pd.Series, iterations: int = 3, width: int = 7) -> pd.Series:
    """Repeated centered moving mean over ``width`` calendar days.

    Each pass replaces a value by the mean of the values present within
    ``width // 2`` days on either side; windows shrink at the ends of the
    series and skip missing dates.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if width < 1 or width % 2 == 0:
        raise ValueError("width must be a positive odd number of days")
    if series.empty:
        return series.astype(np.float64).copy()
    if series.index.has_duplicates:
        raise ValueError("series has duplicate dates")
    series = series.sort_index()
    days = _day_numbers(series.index)
    first = days[0]
    n = int(days[-1] - first + 1)
    pos = days - first
    cur = np.full(n, np.nan)
    cur[pos] = series.to_numpy(dtype=np.float64)
    present = ~np.isnan(cur)
    half = width // 2
    for _ in range(iterations):
        # accumulate differences from the centre value: exact on constants
        acc = np.zeros(n)
        count = np.zeros(n)
        for shift in range(-half, half + 1):
            lo, hi = max(0, -shift), min(n, n - shift)
            src = cur[lo + shift : hi + shift]
            ok = present[lo + shift : hi + shift] & present[lo:hi]
            acc[lo:hi] += np.where(ok, src - cur[lo:hi], 0.0)
            count[lo:hi] += ok
        with np.errstate(invalid="ignore"):
            cur = np.where(present, cur + acc / np.maximum(count, 1), np.nan)
    return pd.Series(cur[pos], index=series.index, name=series.name)


def average_over_sensors(per_sensor: Mapping[str, pd.Series]) -> pd.Series:
    """Per-date mean over the sensors that have a value on that date."""
    if not per_sensor:
        raise ValueError("need at least one sensor")
    cols = [per_sensor[k].rename(k) for k in sorted(per_sensor)]
    frame = pd.concat(cols, axis=1, sort=True)
    out = frame.mean(axis=1, skipna=True).dropna()
    out.index = pd.DatetimeIndex(out.index)
    return out.astype(np.float64)


def highpass(e: pd.Series, s: pd.Series) -> pd.Series:
    """``E - S`` on the dates both series share."""
    common = e.index.intersection(s.index)
    return (e.loc[common] - s.loc[common]).sort_index()


@dataclass
class CoefficientSeries:
    """Derived series for one modality and one coefficient index ``k``.

    ``k == 0`` is the daily mean; ``k >= 1`` indexes the eigen-coefficients.
    """

    modality: str
    k: int
    e: dict[str, pd.Series]
    s: dict[str, pd.Series]
    E: pd.Series
    S: pd.Series
    D: pd.Series

    def named_series(self) -> list[tuple[str, pd.Series]]:
        out = []
        for sensor in sorted(self.e):
            out.append((f"{self.modality}.e{self.k}[{sensor}]", self.e[sensor]))
            out.append((f"{self.modality}.s{self.k}[{sensor}]", self.s[sensor]))
        out += [
            (f"{self.modality}.E{self.k}", self.E),
            (f"{self.modality}.S{self.k}", self.S),
            (f"{self.modality}.D{self.k}", self.D),
        ]
        return out


def coefficient_values(coeffs: Sequence[DayCoefficients], k: int) -> dict[str, pd.Series]:
    per_sensor: dict[str, dict] = {}
    for c in coeffs:
        value = c.e0 if k == 0 else float(c.e[k - 1])
        per_sensor.setdefault(c.sensor_id, {})[pd.Timestamp(c.day)] = value
    return {sensor: to_series(vals, sensor) for sensor, vals in per_sensor.items()}


def build_coefficient_series(
    coeffs: Sequence[DayCoefficients],
    k: int = 1,
    iterations: int = 3,
    width: int = 7,
    order: str = SMOOTH_THEN_AVERAGE,
    modality: str | None = None,
) -> CoefficientSeries:
    if not coeffs:
        raise ValueError("no coefficients")
    if order not in (SMOOTH_THEN_AVERAGE, AVERAGE_THEN_SMOOTH):
        raise ValueError(f"unknown smoothing order {order!r}")
    modality = modality or coeffs[0].modality
    e = coefficient_values(coeffs, k)
    s = {sensor: lowpass_week(series, iterations, width) for sensor, series in e.items()}
    big_e = average_over_sensors(e)
    if order == SMOOTH_THEN_AVERAGE:
        big_s = average_over_sensors(s)
    else:
        big_s = lowpass_week(big_e, iterations, width)
    return CoefficientSeries(modality, k, e, s, big_e, big_s, highpass(big_e, big_s))


def write_series_csv(series: Sequence[tuple[str, pd.Series]], stream: IO[str]) -> None:
    stream.write("date,series_name,value\n")
    for name, s in series:
        for ts, value in s.items():
            stream.write(f"{ts.date().isoformat()},{name},{float(value)!r}\n")
