"""Reading and writing measurement and ground-truth CSV files.

Measurements are held column-wise in a :class:`MeasurementTable`; a
synthetic year of per-minute readings from ten motes is several million
rows, which rules out one Python object per reading. The table still
behaves as a sequence of :class:`Measurement` records.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from enum import Enum
from typing import IO, Iterable, Iterator, Sequence

import numpy as np
import pandas as pd

MEASUREMENT_HEADER = ("sensor_id", "timestamp", "modality", "value")
GROUND_TRUTH_HEADER = ("date", "precipitation_mm")
DEFAULT_UTC_OFFSET_MINUTES = -300

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_TIMESTAMP_RE = r"^\d{4}-\d{2}-\d{2}[Tt ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?([Zz]|[+-]\d{2}:\d{2})$"
_META_PREFIX = "# sensorpca:"
_MINUTES_PER_DAY = 1440


class IngestError(Exception):
    """Fatal problem with an input file."""


class Modality(str, Enum):
    AIR_TEMPERATURE = "air_temperature"
    SOIL_TEMPERATURE = "soil_temperature"
    SOIL_MOISTURE = "soil_moisture"
    LIGHT = "light"


MODALITIES = tuple(Modality)
_MODALITY_CODE = {m.value: i for i, m in enumerate(MODALITIES)}


@dataclass(frozen=True)
class Measurement:
    """One timestamped sensor reading."""

    sensor_id: str
    modality: Modality
    timestamp: datetime
    value: float

    def __post_init__(self):
        if self.timestamp.tzinfo is None or self.timestamp.utcoffset() is None:
            raise ValueError("timestamp must carry an explicit UTC offset")
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite value {self.value!r}")
        object.__setattr__(self, "modality", Modality(self.modality))


@dataclass(frozen=True)
class RowError:
    line: int
    reason: str


def tz_from_offset(offset_minutes: int) -> timezone:
    return timezone(timedelta(minutes=offset_minutes))


def format_offset(offset_minutes: int) -> str:
    sign = "+" if offset_minutes >= 0 else "-"
    hours, minutes = divmod(abs(offset_minutes), 60)
    return f"{sign}{hours:02d}:{minutes:02d}"


def parse_offset(text: str) -> int:
    """Parse ``-05:00`` / ``+0530`` / ``Z`` into minutes east of UTC."""
    text = text.strip()
    if text in ("Z", "z", "UTC"):
        return 0
    m = re.fullmatch(r"([+-])(\d{2}):?(\d{2})", text)
    if not m:
        raise ValueError(f"bad UTC offset {text!r}")
    minutes = int(m.group(2)) * 60 + int(m.group(3))
    return -minutes if m.group(1) == "-" else minutes


@dataclass(frozen=True, eq=False)
class MeasurementTable(Sequence):
    """Column-oriented list of measurements.

    ``minute`` holds whole minutes since the Unix epoch (UTC).
    ``sensor_code`` indexes into ``sensor_ids`` and ``modality_code``
    into :data:`MODALITIES`.
    """

    sensor_ids: tuple[str, ...]
    sensor_code: np.ndarray
    modality_code: np.ndarray
    minute: np.ndarray
    value: np.ndarray
    utc_offset_minutes: int = DEFAULT_UTC_OFFSET_MINUTES

    def __post_init__(self):
        n = len(self.value)
        for name in ("sensor_code", "modality_code", "minute"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name} has wrong length")
        if n and not np.all(np.isfinite(self.value)):
            raise ValueError("non-finite values in table")

    @classmethod
    def empty(cls, utc_offset_minutes: int = DEFAULT_UTC_OFFSET_MINUTES) -> MeasurementTable:
        return cls(
            (),
            np.zeros(0, np.int32),
            np.zeros(0, np.int8),
            np.zeros(0, np.int64),
            np.zeros(0, np.float64),
            utc_offset_minutes,
        )

    @classmethod
    def from_measurements(
        cls, records: Iterable[Measurement], utc_offset_minutes: int = DEFAULT_UTC_OFFSET_MINUTES
    ) -> MeasurementTable:
        records = list(records)
        sensors: dict[str, int] = {}
        codes = []
        for r in records:
            codes.append(sensors.setdefault(r.sensor_id, len(sensors)))
        minutes = [int((r.timestamp - _EPOCH).total_seconds() // 60) for r in records]
        return cls(
            tuple(sensors),
            np.asarray(codes, dtype=np.int32),
            np.asarray([_MODALITY_CODE[r.modality.value] for r in records], dtype=np.int8),
            np.asarray(minutes, dtype=np.int64),
            np.asarray([r.value for r in records], dtype=np.float64),
            utc_offset_minutes,
        )

    @classmethod
    def concat(cls, tables: Sequence[MeasurementTable]) -> MeasurementTable:
        if not tables:
            return cls.empty()
        sensors: dict[str, int] = {}
        codes = []
        for t in tables:
            remap = np.array([sensors.setdefault(s, len(sensors)) for s in t.sensor_ids], dtype=np.int32)
            codes.append(remap[t.sensor_code] if len(remap) else t.sensor_code.astype(np.int32))
        return cls(
            tuple(sensors),
            np.concatenate(codes),
            np.concatenate([t.modality_code for t in tables]),
            np.concatenate([t.minute for t in tables]),
            np.concatenate([t.value for t in tables]),
            tables[0].utc_offset_minutes,
        )

    def __len__(self) -> int:
        return len(self.value)

    def __getitem__(self, i):
        if isinstance(i, slice):
            idx = np.arange(len(self))[i]
            return self.take(idx)
        i = range(len(self))[i]
        tz = tz_from_offset(self.utc_offset_minutes)
        ts = (_EPOCH + timedelta(minutes=int(self.minute[i]))).astimezone(tz)
        return Measurement(
            self.sensor_ids[self.sensor_code[i]],
            MODALITIES[self.modality_code[i]],
            ts,
            float(self.value[i]),
        )

    def __iter__(self) -> Iterator[Measurement]:
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, MeasurementTable):
            return NotImplemented
        if len(self) != len(other):
            return False
        mine = np.asarray(self.sensor_ids, dtype=object)[self.sensor_code] if len(self) else []
        theirs = np.asarray(other.sensor_ids, dtype=object)[other.sensor_code] if len(other) else []
        return (
            list(mine) == list(theirs)
            and np.array_equal(self.modality_code, other.modality_code)
            and np.array_equal(self.minute, other.minute)
            and np.array_equal(self.value, other.value)
        )

    __hash__ = None

    def take(self, idx) -> MeasurementTable:
        return MeasurementTable(
            self.sensor_ids,
            self.sensor_code[idx],
            self.modality_code[idx],
            self.minute[idx],
            self.value[idx],
            self.utc_offset_minutes,
        )

    def select(self, sensor_id: str | None = None, modality: Modality | str | None = None) -> MeasurementTable:
        mask = np.ones(len(self), dtype=bool)
        if sensor_id is not None:
            if sensor_id not in self.sensor_ids:
                return self.take(np.zeros(0, dtype=np.int64))
            mask &= self.sensor_code == self.sensor_ids.index(sensor_id)
        if modality is not None:
            mask &= self.modality_code == _MODALITY_CODE[Modality(modality).value]
        return self.take(np.flatnonzero(mask))

    def modalities(self) -> list[Modality]:
        return [MODALITIES[c] for c in sorted(set(np.unique(self.modality_code).tolist()))]

    def sensors(self) -> list[str]:
        present = set(np.unique(self.sensor_code).tolist())
        return [s for i, s in enumerate(self.sensor_ids) if i in present]


@dataclass
class ParseResult:
    measurements: MeasurementTable
    errors: list[RowError] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def error_count(self) -> int:
        return len(self.errors)


def _split_preamble(text: str) -> tuple[str, dict, int, str]:
    """Split leading ``#``/blank lines off ``text``.

    Returns ``(header_line, metadata, header_lineno, body)``.
    """
    meta: dict = {}
    pos = 0
    lineno = 0
    while pos < len(text):
        nl = text.find("\n", pos)
        end = len(text) if nl < 0 else nl + 1
        line = text[pos:end]
        lineno += 1
        pos = end
        if line.startswith(_META_PREFIX):
            meta.update(json.loads(line[len(_META_PREFIX):]))
        elif line.startswith("#") or not line.strip():
            continue
        else:
            return line, meta, lineno, text[pos:]
    return "", meta, lineno, ""


def _check_header(line: str, expected: tuple[str, ...]) -> None:
    got = tuple(col.strip() for col in line.strip().split(","))
    if got != expected:
        raise IngestError(f"malformed header {line.strip()!r}; expected {','.join(expected)!r}")


def _split_rows(body: str, first_lineno: int) -> tuple[pd.DataFrame, np.ndarray, list[RowError]]:
    """Tokenize data rows into string columns plus their file line numbers."""
    n_lines = body.count("\n") + (1 if body and not body.endswith("\n") else 0)
    if '"' not in body:
        df = pd.read_csv(
            io.StringIO(body),
            names=list(MEASUREMENT_HEADER),
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            on_bad_lines="skip",
            engine="c",
            index_col=False,
        )
        if len(df) == n_lines:
            # pandas pads short rows, so count separators per line directly
            raw = np.frombuffer(body.encode(), dtype=np.uint8)
            newlines = np.flatnonzero(raw == ord("\n"))
            line_of_comma = np.searchsorted(newlines, np.flatnonzero(raw == ord(",")))
            n_fields = np.bincount(line_of_comma, minlength=n_lines)[:n_lines] + 1
            lines = np.arange(first_lineno, first_lineno + n_lines, dtype=np.int64)
            structural = n_fields != len(MEASUREMENT_HEADER)
            errors = [RowError(int(lines[i]), "wrong number of fields") for i in np.flatnonzero(structural)]
            keep = ~structural
            return df.loc[keep].reset_index(drop=True), lines[keep], errors

    # Quoting or blank lines present: tokenize exactly, line by line.
    rows, lines, errors = [], [], []
    for offset, row in enumerate(csv.reader(io.StringIO(body))):
        lineno = first_lineno + offset
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(MEASUREMENT_HEADER):
            errors.append(RowError(lineno, "wrong number of fields"))
            continue
        rows.append(row)
        lines.append(lineno)
    frame = pd.DataFrame(rows, columns=list(MEASUREMENT_HEADER), dtype=object)
    return frame, np.asarray(lines, dtype=np.int64), errors


def _strip_factorized(col: pd.Series) -> pd.Series:
    # Few distinct values per column: strip the uniques, not every row.
    codes, uniques = pd.factorize(col.astype(str), sort=False)
    stripped = np.asarray([u.strip() for u in uniques], dtype=object)
    return pd.Series(stripped[codes], index=col.index)


def _fixed_width_stamps(text: np.ndarray):
    """Vectorized parse of ``YYYY-MM-DDTHH:MM:SS+HH:MM`` (the writer's form).

    Returns ``(minute, ok)``; rows with ``ok`` False need the general parser.
    """
    n = len(text)
    try:
        raw = text.astype("S32")
    except (UnicodeEncodeError, ValueError):
        return np.zeros(n, dtype=np.int64), np.zeros(n, dtype=bool)
    b = raw.view(np.uint8).reshape(n, 32).astype(np.int64)
    digit_pos = [0, 1, 2, 3, 5, 6, 8, 9, 11, 12, 14, 15, 17, 18, 20, 21, 23, 24]
    dig = b[:, digit_pos] - ord("0")
    ok = np.all((dig >= 0) & (dig <= 9), axis=1) & (b[:, 25] == 0)
    ok &= (b[:, 4] == ord("-")) & (b[:, 7] == ord("-")) & (b[:, 13] == ord(":")) & (b[:, 16] == ord(":"))
    ok &= np.isin(b[:, 10], [ord("T"), ord("t"), ord(" ")]) & np.isin(b[:, 19], [ord("+"), ord("-")])
    ok &= b[:, 22] == ord(":")

    def num(i, j):
        return dig[:, i] * 10 + dig[:, j]

    year = num(0, 1) * 100 + num(2, 3)
    month, day = num(4, 5), num(6, 7)
    hour, minute, second = num(8, 9), num(10, 11), num(12, 13)
    off = np.where(b[:, 19] == ord("-"), -1, 1) * (num(14, 15) * 60 + num(16, 17))
    ok &= (month >= 1) & (month <= 12) & (day >= 1) & (hour <= 23) & (minute <= 59) & (second <= 59)
    ok &= (num(14, 15) <= 23) & (num(16, 17) <= 59)
    months = np.where(ok, (year - 1970) * 12 + month - 1, 0).astype("datetime64[M]")
    first = months.astype("datetime64[D]").astype(np.int64)
    month_len = (months + 1).astype("datetime64[D]").astype(np.int64) - first
    ok &= day <= month_len
    local = (first + day - 1) * _MINUTES_PER_DAY + hour * 60 + minute
    return np.where(ok, local - off, 0), ok


def _parse_floats(col: pd.Series) -> np.ndarray:
    """Correctly rounded float parse; ``nan`` where unparseable."""
    text = col.to_numpy(dtype=object)
    try:
        return text.astype(np.float64)
    except ValueError:
        out = np.empty(len(text))
        for i, t in enumerate(text):
            try:
                out[i] = float(t)
            except (TypeError, ValueError):
                out[i] = np.nan
        return out


def _parse_stamps(col: pd.Series) -> tuple[np.ndarray, np.ndarray]:
    """UTC epoch minutes (seconds floored) and a bad-row mask."""
    text = col.to_numpy(dtype=object)
    minute, ok = _fixed_width_stamps(text)
    rest = np.flatnonzero(~ok)
    if len(rest):
        ts_text = pd.Series(text[rest]).astype(str).str.strip()
        ts_ok = ts_text.str.match(_TIMESTAMP_RE)
        stamps = pd.to_datetime(ts_text.where(ts_ok), utc=True, format="ISO8601", errors="coerce")
        parsed = ~stamps.isna().to_numpy()
        ns = stamps.to_numpy(dtype="datetime64[ns]").astype(np.int64)
        minute[rest[parsed]] = np.floor_divide(ns[parsed], 60_000_000_000)
        ok[rest[parsed]] = True
    return minute.astype(np.int64), ~ok


def parse_measurements(
    stream: IO[str], utc_offset_minutes: int = DEFAULT_UTC_OFFSET_MINUTES
) -> ParseResult:
    """Parse a ``sensor_id,timestamp,modality,value`` CSV stream.

    Invalid rows are returned as :class:`RowError` records (1-based file
    line numbers) and left out of the table; valid rows keep their input
    order. Seconds are truncated to the minute.

    Raises:
        IngestError: bad header, or every data row rejected.
    """
    header, meta, header_lineno, body = _split_preamble(stream.read())
    if not header:
        raise IngestError("empty measurements file (no header)")
    _check_header(header, MEASUREMENT_HEADER)
    df, lines, errors = _split_rows(body, header_lineno + 1)
    n = len(df) + len(errors)
    if len(df) == 0:
        if errors:
            raise IngestError(f"all {n} data rows rejected; first error: {errors[0].reason}")
        return ParseResult(MeasurementTable.empty(utc_offset_minutes), [], meta)

    sid = _strip_factorized(df["sensor_id"])
    mod_text = _strip_factorized(df["modality"])
    reasons = np.full(len(df), "", dtype=object)

    reasons[(sid == "").to_numpy()] = "empty sensor_id"

    minute_all, bad_ts = _parse_stamps(df["timestamp"])
    reasons[bad_ts & (reasons == "")] = "unparseable timestamp (RFC 3339 with offset required)"

    mod_codes = mod_text.map(_MODALITY_CODE)
    bad_mod = mod_codes.isna().to_numpy()
    reasons[bad_mod & (reasons == "")] = "unknown modality"

    values = _parse_floats(df["value"])
    bad_val = ~np.isfinite(values)
    reasons[bad_val & (reasons == "")] = "non-finite or unparseable value"

    bad = reasons != ""
    errors = sorted(
        errors + [RowError(int(lines[i]), reasons[i]) for i in np.flatnonzero(bad)],
        key=lambda e: e.line,
    )
    if bad.all():
        raise IngestError(f"all {n} data rows rejected; first error: {errors[0].reason}")

    good = ~bad
    codes, uniques = pd.factorize(sid[good], sort=False)
    minute = minute_all[good]
    table = MeasurementTable(
        tuple(str(u) for u in uniques),
        codes.astype(np.int32),
        mod_codes[good].to_numpy(dtype=np.int8),
        minute,
        values[good],
        utc_offset_minutes,
    )
    return ParseResult(table, errors, meta)


def format_timestamps(minute: np.ndarray, utc_offset_minutes: int) -> np.ndarray:
    local = (np.asarray(minute, dtype=np.int64) + utc_offset_minutes).astype("datetime64[m]")
    text = np.datetime_as_string(local, unit="m")
    return np.char.add(text, ":00" + format_offset(utc_offset_minutes))


def write_measurements(
    table: MeasurementTable, stream: IO[str], metadata: dict | None = None
) -> None:
    """Write ``table`` as CSV; timestamps rendered in the table's offset."""
    if metadata:
        stream.write(_META_PREFIX + " " + json.dumps(metadata, sort_keys=True) + "\n")
    df = pd.DataFrame(
        {
            "sensor_id": np.asarray(table.sensor_ids, dtype=object)[table.sensor_code]
            if len(table)
            else np.zeros(0, dtype=object),
            "timestamp": format_timestamps(table.minute, table.utc_offset_minutes),
            "modality": np.asarray([m.value for m in MODALITIES], dtype=object)[table.modality_code]
            if len(table)
            else np.zeros(0, dtype=object),
            "value": table.value,
        }
    )
    df.to_csv(stream, index=False, lineterminator="\n", float_format=None)


# ---------------------------------------------------------------- ground truth


@dataclass(frozen=True)
class GroundTruthEvent:
    day: date
    precipitation_mm: float

    def __post_init__(self):
        if not math.isfinite(self.precipitation_mm) or self.precipitation_mm < 0:
            raise ValueError(f"bad precipitation {self.precipitation_mm!r} on {self.day}")


@dataclass(frozen=True)
class EventDaySet:
    days: frozenset
    min_precip_mm: float

    def __contains__(self, day) -> bool:
        return day in self.days

    def __len__(self) -> int:
        return len(self.days)

    def __iter__(self):
        return iter(sorted(self.days))


def build_event_days(events: Iterable[GroundTruthEvent], min_precip_mm: float = 3.0) -> EventDaySet:
    """Days whose precipitation strictly exceeds ``min_precip_mm``."""
    if not min_precip_mm >= 0:
        raise ValueError("min_precip_mm must be >= 0")
    seen: set[date] = set()
    days = set()
    for ev in events:
        if ev.day in seen:
            raise IngestError(f"duplicate ground-truth record for {ev.day}")
        seen.add(ev.day)
        if ev.precipitation_mm > min_precip_mm:
            days.add(ev.day)
    return EventDaySet(frozenset(days), float(min_precip_mm))


def parse_ground_truth(stream: IO[str]) -> list[GroundTruthEvent]:
    """Parse a ``date,precipitation_mm`` CSV. Any malformed row is fatal."""
    header, _, header_lineno, body = _split_preamble(stream.read())
    if not header:
        raise IngestError("empty ground-truth file (no header)")
    _check_header(header, GROUND_TRUTH_HEADER)
    out = []
    for lineno, row in enumerate(csv.reader(io.StringIO(body)), start=header_lineno + 1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise IngestError(f"line {lineno}: expected 2 fields, got {len(row)}")
        try:
            day = date.fromisoformat(row[0].strip())
            out.append(GroundTruthEvent(day, float(row[1])))
        except ValueError as exc:
            raise IngestError(f"line {lineno}: {exc}") from None
    return out


def write_ground_truth(events: Iterable[GroundTruthEvent], stream: IO[str], metadata: dict | None = None) -> None:
    if metadata:
        stream.write(_META_PREFIX + " " + json.dumps(metadata, sort_keys=True) + "\n")
    stream.write(",".join(GROUND_TRUTH_HEADER) + "\n")
    for ev in sorted(events, key=lambda e: e.day):
        stream.write(f"{ev.day.isoformat()},{ev.precipitation_mm!r}\n")


def read_measurements_file(path, utc_offset_minutes: int = DEFAULT_UTC_OFFSET_MINUTES) -> ParseResult:
    with open(path, newline="") as fh:
        return parse_measurements(fh, utc_offset_minutes)


def read_ground_truth_file(path) -> list[GroundTruthEvent]:
    with open(path, newline="") as fh:
        return parse_ground_truth(fh)


def measurements_to_text(table: MeasurementTable, metadata: dict | None = None) -> str:
    buf = io.StringIO()
    write_measurements(table, buf, metadata)
    return buf.getvalue()
