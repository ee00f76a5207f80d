"""Labelled synthetic air/soil temperature corpora.

Signal model, per sensor ``i`` and local minute ``t``::

    air(t)  = mean(t) + offset_i + gain_i * bell(t) + front(t) - rain(t) + noise
    soil(t) = soil_offset + a * (mean + gain_i * bell + front)(t - lag)
              - a * a_rain * rain(t - lag) + noise

``bell`` is a raised cosine over the daylight hours whose amplitude and
width follow the season, ``front`` a continuous piecewise-linear weather
anomaly with random values at each midnight (shared by every sensor),
and ``rain`` a trapezoidal dip on event days. Soil sees weather and the
diurnal cycle through the same lag and attenuation but damps the short
rain transient further by ``a_rain``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from datetime import date, timedelta

import numpy as np

from .ingest import (
    DEFAULT_UTC_OFFSET_MINUTES,
    MODALITIES,
    EventDaySet,
    GroundTruthEvent,
    MeasurementTable,
    Modality,
    build_event_days,
)
from .preprocess import MINUTES_PER_DAY, SLOT_MINUTES

_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()
EVENT_PRECIP_THRESHOLD_MM = 3.0


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SynthConfig:
    n_sensors: int = 10
    n_days: int = 200
    n_events: int = 40
    event_days: tuple[date, ...] | None = None
    start: date = date(2005, 9, 17)
    seed: int = 1
    utc_offset_minutes: int = DEFAULT_UTC_OFFSET_MINUTES
    sample_minutes: int = 1
    # mean level and its slow drift (degC, degC/day)
    base_temperature: float = 18.0
    seasonal_drift: float = -0.06
    # diurnal bell
    diurnal_amplitude: float = 8.0
    amplitude_swing: float = 0.35
    daylight_hours: float = 11.0
    daylight_swing_hours: float = 3.0
    peak_hour: float = 13.0
    peak_shift_hours: float = 1.5
    cloud_std: float = 0.15
    # day-to-day weather wobble of the bell, shared by air and soil
    peak_jitter_hours: float = 0.3
    width_jitter: float = 0.0
    # shared weather anomaly at each midnight (degC)
    front_std: float = 0.5
    # soil channel
    soil_offset: float = 4.0
    soil_lag_hours: float = 3.0
    soil_attenuation: float = 0.35
    soil_event_attenuation: float = 0.1
    # rain dip
    rain_depth: float = 3.0
    rain_slots: int = 12
    rain_edge_slots: int = 2
    rain_start_hours: tuple[float, float] = (8.0, 13.0)
    # per-minute noise and sensor spread
    noise_std: float = 0.3
    soil_noise_std: float = 0.03
    sensor_gain_spread: float = 0.15
    sensor_offset_std: float = 1.0
    # jittery bad sensor-days
    bad_day_rate: float = 0.01
    bad_day_jitter: float = 3.0

    def validate(self) -> None:
        if self.n_sensors < 1 or self.n_days < 1:
            raise ConfigError("n_sensors and n_days must be >= 1")
        if self.sample_minutes < 1 or SLOT_MINUTES % self.sample_minutes:
            raise ConfigError("sample_minutes must divide the 10-minute slot")
        nonneg = (
            "diurnal_amplitude", "amplitude_swing", "daylight_hours", "daylight_swing_hours",
            "peak_shift_hours", "cloud_std", "peak_jitter_hours", "width_jitter", "front_std", "soil_lag_hours", "rain_depth", "noise_std",
            "soil_noise_std", "sensor_gain_spread", "sensor_offset_std", "bad_day_rate",
            "bad_day_jitter",
        )
        for name in nonneg:
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ConfigError(f"{name} must be a finite non-negative number, got {value!r}")
        if not 0 < self.soil_attenuation <= 1:
            raise ConfigError("soil_attenuation must lie in (0, 1]")
        if not 0 <= self.soil_event_attenuation <= 1:
            raise ConfigError("soil_event_attenuation must lie in [0, 1]")
        if self.amplitude_swing >= 1 or self.sensor_gain_spread >= 1:
            raise ConfigError("amplitude_swing and sensor_gain_spread must be < 1")
        if self.daylight_swing_hours >= self.daylight_hours or self.daylight_hours >= 24:
            raise ConfigError("daylight hours out of range")
        if not 0 <= self.bad_day_rate <= 1:
            raise ConfigError("bad_day_rate must lie in [0, 1]")
        if self.rain_slots < 1 or 2 * self.rain_edge_slots > self.rain_slots:
            raise ConfigError("rain_slots must be >= 1 and hold both edges")
        lo, hi = self.rain_start_hours
        if not 0 <= lo <= hi or hi * 6 + self.rain_slots > 144:
            raise ConfigError("rain window must fit inside the day")
        last = self.start + timedelta(days=self.n_days - 1)
        if self.event_days is not None:
            outside = [d for d in self.event_days if not self.start <= d <= last]
            if outside:
                raise ConfigError(f"event day {outside[0]} outside {self.start}..{last}")
        elif not 0 <= self.n_events <= self.n_days:
            raise ConfigError(f"n_events={self.n_events} does not fit in {self.n_days} days")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["start"] = self.start.isoformat()
        d["event_days"] = None if self.event_days is None else [x.isoformat() for x in self.event_days]
        d["rain_start_hours"] = list(self.rain_start_hours)
        return d


@dataclass(frozen=True)
class SynthEvent:
    day: date
    start_slot: int
    n_slots: int


@dataclass
class SynthCorpus:
    measurements: MeasurementTable
    truth: EventDaySet
    records: list[GroundTruthEvent]
    events: list[SynthEvent]
    bad_days: set = field(default_factory=set)
    config: SynthConfig | None = None

    def __iter__(self):
        # allows ``measurements, truth = generate(cfg)``
        return iter((self.measurements, self.truth))


def _season(cfg: SynthConfig, day_index: np.ndarray) -> np.ndarray:
    doy = cfg.start.timetuple().tm_yday + day_index
    return np.cos(2 * np.pi * (doy - 172) / 365.25)


def _bell(cfg: SynthConfig, t: np.ndarray, day_shape: dict, first_day: int) -> np.ndarray:
    """Raised cosine over the daylight window; ``t`` in local minutes from start."""
    day = np.floor_divide(t, MINUTES_PER_DAY)
    hour = (t - day * MINUTES_PER_DAY) / 60.0
    idx = day - first_day
    season = _season(cfg, day)
    half = 0.5 * (cfg.daylight_hours + cfg.daylight_swing_hours * season) * day_shape["width"][idx]
    peak = cfg.peak_hour + cfg.peak_shift_hours * season + day_shape["shift"][idx]
    x = (hour - peak) / half
    shape = np.where(np.abs(x) < 1.0, 0.5 * (1.0 + np.cos(np.pi * x)), 0.0)
    return day_shape["amplitude"][idx] * shape


def _trapezoid(n_slots: int, edge_slots: int) -> np.ndarray:
    """Per-minute dip profile in [0, 1] spanning ``n_slots`` slots."""
    n = n_slots * SLOT_MINUTES
    ramp = edge_slots * SLOT_MINUTES
    m = np.arange(n) + 0.5
    if ramp == 0:
        return np.ones(n)
    return np.clip(np.minimum(m, n - m) / ramp, 0.0, 1.0)


def generate(config: SynthConfig | None = None) -> SynthCorpus:
    """Per-minute air and soil temperatures with injected rain events.

    Deterministic for a fixed ``config.seed``.
    """
    cfg = config or SynthConfig()
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    n_days = cfg.n_days
    lag = int(round(cfg.soil_lag_hours * 60))
    lag_days = -(-lag // MINUTES_PER_DAY)
    first_day = -lag_days - 1

    # event schedule
    if cfg.event_days is not None:
        event_idx = sorted({(d - cfg.start).days for d in cfg.event_days})
    else:
        event_idx = sorted(rng.choice(n_days, size=cfg.n_events, replace=False).tolist())
    lo_slot = int(round(cfg.rain_start_hours[0] * 6))
    hi_slot = int(round(cfg.rain_start_hours[1] * 6))
    starts = rng.integers(lo_slot, hi_slot + 1, size=len(event_idx))
    events = [
        SynthEvent(cfg.start + timedelta(days=int(d)), int(s), cfg.rain_slots)
        for d, s in zip(event_idx, starts)
    ]

    # shared day-level processes, indexed from first_day
    span = n_days - first_day + 1
    day_numbers = np.arange(first_day, first_day + span)
    clouds = np.clip(1.0 + cfg.cloud_std * rng.standard_normal(span), 0.2, None)
    amp_by_day = cfg.diurnal_amplitude * (1.0 + cfg.amplitude_swing * _season(cfg, day_numbers)) * clouds
    knots = cfg.front_std * rng.standard_normal(span + 1)
    day_shape = {
        "amplitude": amp_by_day,
        "shift": cfg.peak_jitter_hours * rng.standard_normal(span),
        "width": np.clip(1.0 + cfg.width_jitter * rng.standard_normal(span), 0.5, 1.5),
    }

    gains = 1.0 + cfg.sensor_gain_spread * rng.uniform(-1.0, 1.0, cfg.n_sensors)
    offsets = cfg.sensor_offset_std * rng.standard_normal(cfg.n_sensors)

    t = np.arange(0, n_days * MINUTES_PER_DAY, cfg.sample_minutes, dtype=np.int64)
    t_soil = t - lag

    def mean_level(tt):
        return cfg.base_temperature + cfg.seasonal_drift * tt / MINUTES_PER_DAY

    def front(tt):
        pos = tt / MINUTES_PER_DAY - first_day
        return np.interp(pos, np.arange(span + 1), knots)

    def rain(tt):
        out = np.zeros(len(tt))
        profile = _trapezoid(cfg.rain_slots, cfg.rain_edge_slots)
        for ev in events:
            begin = (ev.day - cfg.start).days * MINUTES_PER_DAY + ev.start_slot * SLOT_MINUTES
            rel = tt - begin
            inside = (rel >= 0) & (rel < len(profile))
            out[inside] = cfg.rain_depth * profile[rel[inside]]
        return out

    bell_air = _bell(cfg, t, day_shape, first_day)
    bell_soil = _bell(cfg, t_soil, day_shape, first_day)
    common_air = mean_level(t) + front(t)
    common_soil = mean_level(t_soil) + front(t_soil)
    rain_air = rain(t)
    rain_soil = rain(t_soil)

    event_set = set(event_idx)
    candidates = [(s, d) for s in range(cfg.n_sensors) for d in range(n_days) if d not in event_set]
    bad_mask = rng.random(len(candidates)) < cfg.bad_day_rate
    bad = {candidates[i] for i in np.flatnonzero(bad_mask)}
    slot_sign = np.where((np.floor_divide(t, SLOT_MINUTES) % 2) == 0, 1.0, -1.0)
    day_of_t = np.floor_divide(t, MINUTES_PER_DAY)

    sensor_ids = tuple(f"s{i + 1:02d}" for i in range(cfg.n_sensors))
    start_utc = (cfg.start.toordinal() - _EPOCH_ORDINAL) * MINUTES_PER_DAY - cfg.utc_offset_minutes
    minute_utc = start_utc + t
    air_code = MODALITIES.index(Modality.AIR_TEMPERATURE)
    soil_code = MODALITIES.index(Modality.SOIL_TEMPERATURE)

    codes, mods, minutes, values = [], [], [], []
    n = len(t)
    for i in range(cfg.n_sensors):
        air = common_air + offsets[i] + gains[i] * bell_air - rain_air
        air = air + cfg.noise_std * rng.standard_normal(n)
        soil = (
            cfg.soil_offset
            + cfg.soil_attenuation * (common_soil + gains[i] * bell_soil)
            - cfg.soil_attenuation * cfg.soil_event_attenuation * rain_soil
            + cfg.soil_noise_std * rng.standard_normal(n)
        )
        for s, d in sorted(bad):
            if s == i:
                on_day = day_of_t == d
                air[on_day] += cfg.bad_day_jitter * slot_sign[on_day]
        for code, series in ((air_code, air), (soil_code, soil)):
            codes.append(np.full(n, i, dtype=np.int32))
            mods.append(np.full(n, code, dtype=np.int8))
            minutes.append(minute_utc)
            values.append(series)

    table = MeasurementTable(
        sensor_ids,
        np.concatenate(codes),
        np.concatenate(mods),
        np.concatenate(minutes),
        np.concatenate(values),
        cfg.utc_offset_minutes,
    )

    precip = np.where(rng.random(n_days) < 0.7, 0.0, np.round(rng.uniform(0.1, 3.0, n_days), 1))
    event_amounts = np.round(rng.uniform(5.0, 30.0, n_days), 1)
    records = [
        GroundTruthEvent(
            cfg.start + timedelta(days=d),
            float(event_amounts[d] if d in event_set else precip[d]),
        )
        for d in range(n_days)
    ]
    truth = build_event_days(records, EVENT_PRECIP_THRESHOLD_MM)
    bad_days = {(sensor_ids[s], cfg.start + timedelta(days=d)) for s, d in bad}
    return SynthCorpus(table, truth, records, events, bad_days, cfg)
