"""From raw readings to censored, unit-RMS daily vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, timedelta
from typing import IO, Iterable, Sequence

import numpy as np

from . import kernels
from .ingest import MODALITIES, Modality, MeasurementTable

SLOT_MINUTES = 10
SLOTS_PER_DAY = 144
MINUTES_PER_DAY = SLOT_MINUTES * SLOTS_PER_DAY

_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()
_DEGENERATE_RMS = 1e-12


class DegenerateDay(ValueError):
    """A day whose readings are constant after centering."""


@dataclass(frozen=True, eq=False)
class DayVector:
    """144 ten-minute means for one sensor-day; ``nan`` marks empty slots."""

    sensor_id: str
    modality: Modality
    day: date
    slots: np.ndarray

    def __post_init__(self):
        if self.slots.shape != (SLOTS_PER_DAY,):
            raise ValueError(f"expected {SLOTS_PER_DAY} slots, got {self.slots.shape}")

    @property
    def filled(self) -> int:
        return int(np.count_nonzero(~np.isnan(self.slots)))

    @property
    def complete(self) -> bool:
        return self.filled == SLOTS_PER_DAY

    @property
    def key(self) -> tuple[str, str, date]:
        return (self.sensor_id, Modality(self.modality).value, self.day)


@dataclass(frozen=True, eq=False)
class NormalizedDayVector:
    sensor_id: str
    modality: Modality
    day: date
    values: np.ndarray
    daily_mean: float
    rms: float

    @property
    def key(self) -> tuple[str, str, date]:
        return (self.sensor_id, Modality(self.modality).value, self.day)

    def denormalize(self) -> np.ndarray:
        return self.daily_mean + self.rms * self.values


def _day_from_index(index: int) -> date:
    return date.fromordinal(_EPOCH_ORDINAL + int(index))


def _aggregate_columns(minute: np.ndarray, value: np.ndarray, utc_offset_minutes: int):
    """Group readings into (local day, slot) bins.

    Returns the first day index and ``(n_days, 144)`` arrays of slot means
    (``nan`` where empty); ``None`` for no readings.
    """
    if len(minute) == 0:
        return None
    local = np.asarray(minute, dtype=np.int64) + utc_offset_minutes
    day_index = np.floor_divide(local, MINUTES_PER_DAY)
    first = int(day_index.min())
    n_days = int(day_index.max()) - first + 1
    slot = np.floor_divide(local - day_index * MINUTES_PER_DAY, SLOT_MINUTES)
    keys = np.ascontiguousarray((day_index - first) * SLOTS_PER_DAY + slot, dtype=np.int64)
    sums, counts = kernels.slot_sums(keys, np.ascontiguousarray(value, dtype=np.float64), n_days * SLOTS_PER_DAY)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return first, means.reshape(n_days, SLOTS_PER_DAY), counts.reshape(n_days, SLOTS_PER_DAY)


def aggregate_to_slots(
    measurements: MeasurementTable,
    sensor_id: str,
    modality: Modality | str,
    utc_offset_minutes: int | None = None,
) -> list[DayVector]:
    """Ten-minute slot means for one sensor and modality, one vector per local day.

    Days without any reading are omitted. ``utc_offset_minutes`` defaults
    to the table's deployment offset.
    """
    offset = measurements.utc_offset_minutes if utc_offset_minutes is None else utc_offset_minutes
    sub = measurements.select(sensor_id, modality)
    return _day_vectors(sensor_id, Modality(modality), sub.minute, sub.value, offset)


def _day_vectors(sensor_id, modality, minute, value, offset) -> list[DayVector]:
    agg = _aggregate_columns(minute, value, offset)
    if agg is None:
        return []
    first, means, counts = agg
    out = []
    for i in np.flatnonzero(counts.sum(axis=1) > 0):
        out.append(DayVector(sensor_id, modality, _day_from_index(first + i), means[i].copy()))
    return out


def aggregate_table(
    measurements: MeasurementTable, utc_offset_minutes: int | None = None
) -> dict[tuple[str, Modality], list[DayVector]]:
    """:func:`aggregate_to_slots` for every (sensor, modality) present."""
    offset = measurements.utc_offset_minutes if utc_offset_minutes is None else utc_offset_minutes
    out: dict[tuple[str, Modality], list[DayVector]] = {}
    if len(measurements) == 0:
        return out
    order = np.lexsort((measurements.modality_code, measurements.sensor_code))
    sc = measurements.sensor_code[order]
    mc = measurements.modality_code[order]
    boundaries = np.flatnonzero((np.diff(sc) != 0) | (np.diff(mc) != 0)) + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [len(order)]])
    for s, e in zip(starts, ends):
        idx = order[s:e]
        sensor = measurements.sensor_ids[sc[s]]
        modality = MODALITIES[mc[s]]
        out[(sensor, modality)] = _day_vectors(
            sensor, modality, measurements.minute[idx], measurements.value[idx], offset
        )
    return out


def select_complete_days(days: Iterable[DayVector]) -> list[DayVector]:
    return [d for d in days if d.complete]


def center_and_normalize(day: DayVector) -> NormalizedDayVector:
    """Subtract the day's mean and scale to unit RMS.

    Raises:
        ValueError: the day has empty slots.
        DegenerateDay: the centered readings have RMS below 1e-12.
    """
    if not day.complete:
        raise ValueError(f"day {day.day} for {day.sensor_id} is incomplete ({day.filled}/144)")
    mean = float(np.mean(day.slots))
    centered = day.slots - mean
    rms = math.sqrt(float(np.mean(centered * centered)))
    if rms < _DEGENERATE_RMS:
        raise DegenerateDay(f"{day.sensor_id} {day.modality} {day.day}: constant readings")
    values = centered / rms
    return NormalizedDayVector(day.sensor_id, day.modality, day.day, values, mean, rms)


def normalize_days(days: Iterable[DayVector]) -> tuple[list[NormalizedDayVector], list[DayVector]]:
    """Normalize complete days; return ``(normalized, degenerate)``."""
    ok, degenerate = [], []
    for d in days:
        try:
            ok.append(center_and_normalize(d))
        except DegenerateDay:
            degenerate.append(d)
    return ok, degenerate


def median3(x: np.ndarray) -> np.ndarray:
    """Running median over 3 samples, endpoints padded by repetition."""
    padded = np.concatenate([x[:1], x, x[-1:]])
    return np.median(np.stack([padded[:-2], padded[1:-1], padded[2:]]), axis=0)


def roughness(values: np.ndarray) -> float:
    """RMS of what a 3-slot running median removes; high for jittery days."""
    resid = values - median3(values)
    return math.sqrt(float(np.mean(resid * resid)))


def censor_noisy_days(
    days: Sequence[NormalizedDayVector], k_mad: float = 4.0, min_days: int = 8
) -> tuple[list[NormalizedDayVector], list[NormalizedDayVector]]:
    """Split days into ``(kept, censored)`` by their roughness score.

    A day is censored when its score exceeds ``median + k_mad * MAD`` of
    all scores. With zero MAD, only scores above ten times the median are
    censored. At most half the days are ever censored; with fewer than
    ``min_days`` days nothing is.
    """
    if not k_mad > 0:
        raise ValueError("k_mad must be positive")
    days = list(days)
    if len(days) < min_days:
        return days, []
    scores = np.array([roughness(d.values) for d in days])
    cut = censor_cutoff(scores, k_mad)
    flagged = np.flatnonzero(scores > cut)
    limit = len(days) // 2
    if len(flagged) > limit:
        # keep the roughest half; stable so equal scores resolve by input order
        flagged = flagged[np.argsort(-scores[flagged], kind="stable")[:limit]]
    mask = np.zeros(len(days), dtype=bool)
    mask[flagged] = True
    kept = [d for d, m in zip(days, mask) if not m]
    censored = [d for d, m in zip(days, mask) if m]
    return kept, censored


def censor_cutoff(scores: np.ndarray, k_mad: float) -> float:
    med = float(np.median(scores))
    mad = float(np.median(np.abs(scores - med)))
    if mad == 0.0:
        return max(med, 10.0 * med)
    return med + k_mad * mad


def write_censor_report(
    kept: Iterable[NormalizedDayVector], censored: Iterable[NormalizedDayVector], stream: IO[str]
) -> None:
    rows = [(d, False) for d in kept] + [(d, True) for d in censored]
    rows.sort(key=lambda r: (r[0].sensor_id, r[0].day))
    stream.write("sensor_id,day,score,censored\n")
    for d, flag in rows:
        stream.write(f"{d.sensor_id},{d.day.isoformat()},{roughness(d.values)!r},{str(flag).lower()}\n")


def day_range(first: date, last: date) -> list[date]:
    return [first + timedelta(days=i) for i in range((last - first).days + 1)]
