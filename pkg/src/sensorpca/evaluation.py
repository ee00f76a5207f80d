"""Precision, recall and PR curves against ground-truth event days."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from datetime import date, timedelta
from typing import IO, Iterable, Sequence

import numpy as np

from .detectors import DayScore, DetectionResult, Method
from .ingest import EventDaySet


@dataclass
class EvalReport:
    method: str
    threshold: float
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float | None  # None when nothing was flagged
    recall: float | None  # None when no truth day was evaluated
    evaluated_days: int
    truth_days: int
    excluded_truth_days: list[date] = field(default_factory=list)
    slack_days: int = 0
    pr_curve: list[tuple[float, float | None, float | None]] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["threshold"] = encode_float(self.threshold)
        d["excluded_truth_days"] = [x.isoformat() for x in self.excluded_truth_days]
        d["pr_curve"] = [[encode_float(t), p, r] for t, p, r in self.pr_curve]
        return d


def encode_float(x: float):
    """JSON-safe float: infinities become the strings ``"inf"``/``"-inf"``."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _matches(day: date, others: set, slack: int) -> bool:
    if slack == 0:
        return day in others
    return any(day + timedelta(days=k) in others for k in range(-slack, slack + 1))


def confusion(
    result: DetectionResult,
    truth: EventDaySet,
    evaluated_days: Iterable[date],
    slack_days: int = 0,
) -> EvalReport:
    """Day-level comparison of flagged days with truth.

    With ``slack_days > 0`` a flag and a truth day match when they are at
    most that many days apart. Truth days outside ``evaluated_days`` are
    left out and listed in ``excluded_truth_days``.
    """
    evaluated = set(evaluated_days)
    flagged = set(result.flagged_days)
    if not flagged <= evaluated:
        extra = sorted(flagged - evaluated)
        raise ValueError(f"{len(extra)} flagged day(s) outside the evaluated days, e.g. {extra[0]}")
    if slack_days < 0:
        raise ValueError("slack_days must be >= 0")
    truth_in = set(truth.days) & evaluated
    excluded = sorted(set(truth.days) - evaluated)

    tp = sum(1 for t in truth_in if _matches(t, flagged, slack_days))
    fn = len(truth_in) - tp
    fp = sum(1 for d in flagged if not _matches(d, truth_in, slack_days))
    n_flag = len(flagged)
    precision = (n_flag - fp) / n_flag if n_flag else None
    recall = tp / len(truth_in) if truth_in else None
    return EvalReport(
        method=Method(result.method).value,
        threshold=result.threshold,
        true_positives=tp,
        false_positives=fp,
        false_negatives=fn,
        precision=precision,
        recall=recall,
        evaluated_days=len(evaluated),
        truth_days=len(truth_in),
        excluded_truth_days=excluded,
        slack_days=slack_days,
    )


def _sorted_labels(scores: Sequence[DayScore], truth: EventDaySet, evaluated_days):
    evaluated = set(evaluated_days) if evaluated_days is not None else {s.day for s in scores}
    kept = [s for s in scores if s.day in evaluated]
    values = np.array([s.score for s in kept], dtype=np.float64)
    labels = np.array([s.day in truth.days for s in kept], dtype=bool)
    n_truth = len(set(truth.days) & evaluated)
    order = np.argsort(values, kind="stable")
    return values[order], labels[order], n_truth


def pr_curve(
    scores: Sequence[DayScore], truth: EventDaySet, evaluated_days: Iterable[date] | None = None
) -> list[tuple[float, float | None, float | None]]:
    """``(threshold, precision, recall)`` for -inf, every distinct score, and +inf.

    Flagging is ``score < threshold``; undefined precision or recall is
    ``None``.
    """
    if not scores:
        raise ValueError("need at least one score")
    values, labels, n_truth = _sorted_labels(scores, truth, evaluated_days)
    cum_tp = np.concatenate([[0], np.cumsum(labels)])
    thresholds = [-math.inf] + sorted(set(values.tolist())) + [math.inf]
    out = []
    for thr in thresholds:
        n_flag = int(np.searchsorted(values, thr, side="left"))
        tp = int(cum_tp[n_flag])
        precision = tp / n_flag if n_flag else None
        recall = tp / n_truth if n_truth else None
        out.append((thr, precision, recall))
    return out


def calibrate_threshold(
    scores: Sequence[DayScore],
    truth: EventDaySet,
    evaluated_days: Iterable[date] | None = None,
    min_precision: float = 0.5,
) -> float:
    """Threshold with the highest recall among those keeping precision >= ``min_precision``.

    Candidate thresholds sit halfway between consecutive distinct scores.
    Ties in recall go to the higher precision. Returns ``-inf`` (flag
    nothing) when no threshold reaches the precision floor.
    """
    values, labels, n_truth = _sorted_labels(scores, truth, evaluated_days)
    if len(values) == 0 or n_truth == 0:
        return -math.inf
    distinct = np.unique(values)
    cum_tp = np.concatenate([[0], np.cumsum(labels)])
    best = (-1.0, -1.0)
    best_thr = -math.inf
    for j, v in enumerate(distinct):
        thr = 0.5 * (v + distinct[j + 1]) if j + 1 < len(distinct) else math.inf
        n_flag = int(np.searchsorted(values, v, side="right"))
        tp = int(cum_tp[n_flag])
        precision = tp / n_flag
        recall = tp / n_truth
        if precision + 1e-12 < min_precision:
            continue
        if (recall, precision) > best:
            best = (recall, precision)
            best_thr = float(thr)
    return best_thr


def write_report_json(reports: Sequence[EvalReport], stream: IO[str], extra: dict | None = None) -> None:
    doc = {"reports": [r.to_dict() for r in reports]}
    if extra:
        doc.update(extra)
    json.dump(doc, stream, indent=2, sort_keys=True)
    stream.write("\n")


def write_pr_csv(curve: Sequence[tuple[float, float | None, float | None]], stream: IO[str]) -> None:
    stream.write("threshold,precision,recall\n")
    for thr, p, r in curve:
        t = encode_float(thr)
        stream.write(f"{t if isinstance(t, str) else repr(t)},{'' if p is None else repr(p)},{'' if r is None else repr(r)}\n")
