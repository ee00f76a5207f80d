"""Day scores for the three detectors and threshold flagging.

More negative scores are more event-like; a day is flagged when its
score is strictly below the threshold.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import IO, Iterable, Sequence

import pandas as pd

log = logging.getLogger(__name__)


class Method(str, Enum):
    BASIC = "basic"
    HIGHPASS = "highpass"
    DELTA = "delta"


@dataclass(frozen=True)
class DayScore:
    day: date
    method: Method
    score: float


@dataclass(frozen=True)
class DetectionResult:
    method: Method
    threshold: float
    flagged_days: frozenset
    scores: tuple = field(default=(), repr=False)


def _scores(series: pd.Series, method: Method) -> list[DayScore]:
    return [DayScore(ts.date(), method, float(v)) for ts, v in series.sort_index().items()]


def score_basic(e1_air: pd.Series) -> list[DayScore]:
    """Score = sensor-averaged first air coefficient."""
    if e1_air.empty:
        raise ValueError("E1 series is empty")
    return _scores(e1_air, Method.BASIC)


def score_highpass(d1_air: pd.Series) -> list[DayScore]:
    """Score = air E1 with its weekly trend removed."""
    return _scores(d1_air, Method.HIGHPASS)


def score_delta(d1_air: pd.Series, d1_soil: pd.Series) -> list[DayScore]:
    """Score = high-passed air E1 minus high-passed soil E1.

    Dates present in only one of the two series are skipped and logged;
    :func:`unmatched_dates` lists them.
    """
    missing = unmatched_dates(d1_air, d1_soil)
    if missing:
        log.warning("delta: %d date(s) lack one of the two series, skipped", len(missing))
    common = d1_air.index.intersection(d1_soil.index)
    return _scores(d1_air.loc[common] - d1_soil.loc[common], Method.DELTA)


def unmatched_dates(a: pd.Series, b: pd.Series) -> list[date]:
    return sorted(ts.date() for ts in a.index.symmetric_difference(b.index))


def detect(scores: Sequence[DayScore], threshold: float) -> DetectionResult:
    methods = {s.method for s in scores}
    if len(methods) > 1:
        raise ValueError(f"scores mix methods {sorted(m.value for m in methods)}")
    days = [s.day for s in scores]
    if len(set(days)) != len(days):
        raise ValueError("more than one score per day")
    method = methods.pop() if methods else Method.BASIC
    flagged = frozenset(s.day for s in scores if s.score < threshold)
    return DetectionResult(method, float(threshold), flagged, tuple(scores))


def parse_threshold(text: str) -> float:
    """``'-inf'``, ``'+inf'``, ``'inf'`` or any float literal."""
    value = float(text)
    if math.isnan(value):
        raise ValueError("threshold cannot be NaN")
    return value


def write_scores_csv(results: Iterable[DetectionResult], stream: IO[str], header_comment: str | None = None) -> None:
    if header_comment:
        stream.write(header_comment.rstrip("\n") + "\n")
    stream.write("date,method,score,flagged\n")
    for result in results:
        for s in sorted(result.scores, key=lambda s: s.day):
            flag = "true" if s.day in result.flagged_days else "false"
            stream.write(f"{s.day.isoformat()},{s.method.value},{s.score!r},{flag}\n")


def read_scores_csv(stream: IO[str]) -> dict[Method, tuple[list[DayScore], set]]:
    """Scores and flagged days per method from a scores CSV."""
    out: dict[Method, tuple[list[DayScore], set]] = {}
    header_seen = False
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != "date,method,score,flagged":
                raise ValueError(f"line {lineno}: bad scores header {line!r}")
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 4 fields")
        method = Method(parts[1])
        scores, flagged = out.setdefault(method, ([], set()))
        day = date.fromisoformat(parts[0])
        scores.append(DayScore(day, method, float(parts[2])))
        if parts[3] == "true":
            flagged.add(day)
    if not header_seen:
        raise ValueError("scores file has no header")
    return out
