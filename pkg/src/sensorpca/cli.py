"""Command-line front end.

Subcommands: ``synth``, ``build-model``, ``detect``, ``evaluate`` and
``report``. Exit status is 0 on success, 1 for usage errors and 2 for
data errors (unreadable or inconsistent inputs, unwritable outputs).

Every file written carries the run configuration in its metadata so a
result can be traced back to the exact invocation. Nothing time- or
host-dependent is recorded, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import date
from typing import Sequence

import numpy as np

from . import __version__
from .detectors import DetectionResult, Method, detect, parse_threshold, read_scores_csv, write_scores_csv
from .evaluation import (
    EvalReport,
    calibrate_threshold,
    confusion,
    encode_float,
    pr_curve,
    write_pr_csv,
    write_report_json,
)
from .ingest import (
    DEFAULT_UTC_OFFSET_MINUTES,
    IngestError,
    Modality,
    build_event_days,
    format_offset,
    parse_offset,
    read_ground_truth_file,
    read_measurements_file,
    write_ground_truth,
    write_measurements,
)
from .pca import (
    DEFAULT_COMPONENTS,
    InsufficientData,
    load_basis,
    orthonormality_error,
    project,
    reconstruct,
    save_basis,
)
from .pipeline import AIR, SOIL, PipelineConfig, coefficient_series, fit_model, prepare_days, score_methods
from .preprocess import SLOT_MINUTES, write_censor_report
from .svgplot import line_chart
from .synthgen import ConfigError, SynthConfig, generate
from .trends import AVERAGE_THEN_SMOOTH, SMOOTH_THEN_AVERAGE, write_series_csv

log = logging.getLogger("sensorpca")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

_META_PREFIX = "# sensorpca: "


class DataError(Exception):
    """Input or output problem that should end the run with exit status 2."""


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's outputs."""

    subcommand: str
    inputs: dict = field(default_factory=dict)
    out_dir: str = "."
    modalities: tuple[str, ...] = ()
    k: int = DEFAULT_COMPONENTS
    smoothing_width: int = 7
    smoothing_iterations: int = 3
    smoothing_order: str = SMOOTH_THEN_AVERAGE
    k_mad: float = 4.0
    methods: tuple[str, ...] = ()
    threshold: str | None = None
    min_precision: float = 0.5
    train_start: str | None = None
    train_end: str | None = None
    calibrate_start: str | None = None
    calibrate_end: str | None = None
    utc_offset: str = format_offset(DEFAULT_UTC_OFFSET_MINUTES)
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["modalities"] = list(self.modalities)
        d["methods"] = list(self.methods)
        d["version"] = __version__
        return d

    def header(self, **more) -> str:
        doc = {"run_config": self.to_dict(), **more}
        return _META_PREFIX + json.dumps(doc, sort_keys=True)

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            k=self.k,
            k_mad=self.k_mad,
            smoothing_width=self.smoothing_width,
            smoothing_iterations=self.smoothing_iterations,
            smoothing_order=self.smoothing_order,
            train_start=_date_or_none(self.train_start),
            train_end=_date_or_none(self.train_end),
        )


# ---------------------------------------------------------------- helpers


def _date_or_none(text):
    return date.fromisoformat(text) if text else None


def _iso_date(text: str) -> str:
    try:
        return date.fromisoformat(text).isoformat()
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}") from None


def _offset(text: str) -> str:
    try:
        return format_offset(parse_offset(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _threshold(text: str) -> str:
    if text == "calibrate":
        return text
    try:
        return repr(parse_threshold(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"threshold must be a number, +inf, -inf or 'calibrate', got {text!r}") from None


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _modality(text: str) -> str:
    aliases = {"air": AIR, "soil": SOIL}
    try:
        return Modality(aliases.get(text, text)).value
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown modality {text!r}") from None


def _methods(values: Sequence[str] | None) -> tuple[str, ...]:
    if not values or "all" in values:
        return tuple(m.value for m in Method)
    return tuple(m.value for m in Method if m.value in values)


def _short(modality: str) -> str:
    return {AIR: "air", SOIL: "soil"}.get(modality, modality)


def _out_path(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.out_dir, name)


def _write(path: str, text: str) -> None:
    try:
        d = os.path.dirname(path)
        if d:
            os.makedirs(d, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror or exc}") from None


def _open_for_write(path: str):
    try:
        d = os.path.dirname(path)
        if d:
            os.makedirs(d, exist_ok=True)
        return open(path, "w", newline="")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror or exc}") from None


def _load_measurements(path: str, offset: str):
    if not os.path.isfile(path):
        raise DataError(f"measurements file not found: {path}")
    result = read_measurements_file(path, parse_offset(offset))
    if result.errors:
        first = result.errors[0]
        log.warning("%s: %d row(s) rejected, first at line %d (%s)", path, result.error_count, first.line, first.reason)
    return result.measurements


def _load_truth(path: str, min_precip: float):
    if not os.path.isfile(path):
        raise DataError(f"ground-truth file not found: {path}")
    records = read_ground_truth_file(path)
    return records, build_event_days(records, min_precip)


def _model_path(model_dir: str, modality: str) -> str:
    return os.path.join(model_dir, f"model_{_short(modality)}.json")


def _load_model(model_dir: str, modality: str):
    path = _model_path(model_dir, modality)
    if not os.path.isfile(path):
        raise DataError(f"model file not found: {path}")
    with open(path) as fh:
        try:
            return load_basis(fh)
        except (ValueError, KeyError) as exc:
            raise DataError(f"{path}: {exc}") from None


def _in_window(day: date, start: str | None, end: str | None) -> bool:
    if start and day < date.fromisoformat(start):
        return False
    if end and day > date.fromisoformat(end):
        return False
    return True


# ---------------------------------------------------------------- synth


def cmd_synth(args) -> int:
    event_days = None
    if args.event_dates:
        try:
            event_days = tuple(sorted({date.fromisoformat(x.strip()) for x in args.event_dates.split(",") if x.strip()}))
        except ValueError as exc:
            raise UsageError(f"--event-dates: {exc}") from None
    synth = SynthConfig(
        n_sensors=args.sensors,
        n_days=args.days,
        n_events=args.events if event_days is None else len(event_days),
        event_days=event_days,
        start=date.fromisoformat(args.start),
        seed=args.seed,
        utc_offset_minutes=parse_offset(args.utc_offset),
        sample_minutes=args.sample_minutes,
    )
    cfg = RunConfig(
        "synth",
        out_dir=args.out_dir,
        seed=args.seed,
        utc_offset=args.utc_offset,
        extra={"synth_config": synth.to_dict()},
    )
    try:
        corpus = generate(synth)
    except ConfigError as exc:
        raise DataError(str(exc)) from None
    meta = {"run_config": cfg.to_dict()}
    with _open_for_write(_out_path(cfg, "measurements.csv")) as fh:
        write_measurements(corpus.measurements, fh, meta)
    with _open_for_write(_out_path(cfg, "truth.csv")) as fh:
        write_ground_truth(corpus.records, fh, meta)
    print(
        f"wrote {len(corpus.measurements)} readings and {len(corpus.records)} truth rows "
        f"({len(corpus.truth)} event days) to {cfg.out_dir}"
    )
    return EXIT_OK


# ---------------------------------------------------------------- build-model


def cmd_build_model(args) -> int:
    cfg = RunConfig(
        "build-model",
        inputs={"measurements": args.measurements},
        out_dir=args.out_dir,
        modalities=tuple(args.modality or (AIR, SOIL)),
        k_mad=args.k_mad,
        train_start=args.train_start,
        train_end=args.train_end,
        utc_offset=args.utc_offset,
    )
    table = _load_measurements(args.measurements, cfg.utc_offset)
    prepared = prepare_days(table, cfg.modalities)
    pcfg = cfg.pipeline()
    for modality in cfg.modalities:
        try:
            fitted = fit_model(prepared.normalized[modality], pcfg, modality)
        except InsufficientData as exc:
            raise DataError(f"{modality}: {exc} after censoring") from None
        basis = fitted.basis
        err = orthonormality_error(basis)
        with _open_for_write(_model_path(cfg.out_dir, modality)) as fh:
            save_basis(basis, fh, {"run_config": cfg.to_dict()})
        with _open_for_write(_out_path(cfg, f"censor_{_short(modality)}.csv")) as fh:
            fh.write(cfg.header() + "\n")
            write_censor_report(fitted.kept, fitted.censored, fh)
        k = min(DEFAULT_COMPONENTS, basis.n_components)
        fractions = " ".join(f"{x:.4f}" for x in basis.variance_fraction[:k])
        print(
            f"{modality}: {basis.training_meta['day_count']} training days, "
            f"{len(fitted.censored)} censored; variance fractions K=1..{k}: {fractions}; "
            f"cumulative {float(np.sum(basis.variance_fraction[:k])):.4f}; orthonormality error {err:.1e}"
        )
    return EXIT_OK


# ---------------------------------------------------------------- detect


def cmd_detect(args) -> int:
    methods = _methods(args.method)
    if args.threshold == "calibrate" and not args.truth:
        raise UsageError("--threshold calibrate needs --truth")
    cfg = RunConfig(
        "detect",
        inputs={"measurements": args.measurements, "model_dir": args.model_dir, "truth": args.truth},
        out_dir=args.out_dir,
        modalities=(AIR, SOIL) if Method.DELTA.value in methods else (AIR,),
        k=args.k,
        smoothing_width=args.smoothing_width,
        smoothing_iterations=args.smoothing_iterations,
        smoothing_order=args.smoothing_order,
        methods=methods,
        threshold=args.threshold,
        min_precision=args.min_precision,
        calibrate_start=args.calibrate_start,
        calibrate_end=args.calibrate_end,
        utc_offset=args.utc_offset,
    )
    pcfg = cfg.pipeline()
    models = {m: _load_model(args.model_dir, m) for m in cfg.modalities}
    for m, basis in models.items():
        if cfg.k > basis.n_components:
            raise DataError(f"--k {cfg.k} exceeds the {basis.n_components} components of the {m} model")
    table = _load_measurements(args.measurements, cfg.utc_offset)
    prepared = prepare_days(table, cfg.modalities)
    series = {}
    for m in cfg.modalities:
        if not prepared.normalized[m]:
            raise DataError(f"no complete {m} days in {args.measurements}")
        series[m], _ = coefficient_series(prepared.normalized[m], models[m], pcfg)
    scores = score_methods(series[AIR], series.get(SOIL), methods)

    truth = None
    if args.truth:
        _, truth = _load_truth(args.truth, args.min_precip)
    thresholds: dict[str, float] = {}
    results = []
    for method in methods:
        method_scores = scores[Method(method)]
        if args.threshold == "calibrate":
            window = [s.day for s in method_scores if _in_window(s.day, cfg.calibrate_start, cfg.calibrate_end)]
            if not window:
                raise DataError(f"{method}: no scored days inside the calibration window")
            thr = calibrate_threshold(method_scores, truth, window, cfg.min_precision)
        else:
            thr = float(args.threshold)
        thresholds[method] = thr
        results.append(detect(method_scores, thr))

    training_meta = {m: b.training_meta for m, b in sorted(models.items())}
    header = cfg.header(thresholds={k: encode_float(v) for k, v in thresholds.items()}, training_meta=training_meta)
    with _open_for_write(_out_path(cfg, "scores.csv")) as fh:
        write_scores_csv(results, fh, header)
    with _open_for_write(_out_path(cfg, "flags.csv")) as fh:
        fh.write(header + "\n")
        fh.write("date,method\n")
        for r in results:
            for d in sorted(r.flagged_days):
                fh.write(f"{d.isoformat()},{r.method.value}\n")
    with _open_for_write(_out_path(cfg, "series.csv")) as fh:
        fh.write(header + "\n")
        named = [pair for m in cfg.modalities for pair in series[m].named_series()]
        write_series_csv(named, fh)
    for r in results:
        thr = encode_float(r.threshold)
        print(f"{r.method.value}: threshold {thr if isinstance(thr, str) else f'{thr:.6g}'}, {len(r.flagged_days)} of {len(r.scores)} days flagged")
    return EXIT_OK


# ---------------------------------------------------------------- evaluate


def cmd_evaluate(args) -> int:
    cfg = RunConfig(
        "evaluate",
        inputs={"scores": args.scores, "truth": args.truth},
        out_dir=args.out_dir,
        threshold=args.threshold,
        calibrate_start=args.eval_start,
        calibrate_end=args.eval_end,
        extra={"slack_days": args.slack, "min_precip_mm": args.min_precip, "svg": bool(args.svg)},
    )
    if not os.path.isfile(args.scores):
        raise DataError(f"scores file not found: {args.scores}")
    with open(args.scores, newline="") as fh:
        text = fh.read()
    try:
        per_method = read_scores_csv(io.StringIO(text))
    except ValueError as exc:
        raise DataError(f"{args.scores}: {exc}") from None
    upstream = _leading_metadata(text)
    records, truth = _load_truth(args.truth, args.min_precip)
    truth_dates = {r.day for r in records}

    reports: list[EvalReport] = []
    for method in sorted(per_method, key=lambda m: list(Method).index(m)):
        scores, flagged = per_method[method]
        evaluated = sorted(
            d for d in {s.day for s in scores} & truth_dates if _in_window(d, args.eval_start, args.eval_end)
        )
        if not evaluated:
            raise DataError(f"{method.value}: no day is both scored and covered by the ground truth")
        ev_set = set(evaluated)
        in_scores = [s for s in scores if s.day in ev_set]
        if args.threshold is not None:
            result = detect(in_scores, float(args.threshold))
        else:
            recorded = (upstream.get("thresholds") or {}).get(method.value)
            if recorded is None:
                raise DataError(f"{args.scores}: no recorded {method.value} threshold; pass --threshold")
            result = DetectionResult(method, float(recorded), frozenset(flagged & ev_set), tuple(in_scores))
        report = confusion(result, truth, evaluated, args.slack)
        report.pr_curve = pr_curve(in_scores, truth, evaluated)
        reports.append(report)
        with _open_for_write(_out_path(cfg, f"pr_{method.value}.csv")) as fh:
            fh.write(cfg.header() + "\n")
            write_pr_csv(report.pr_curve, fh)
        if args.svg:
            _write_eval_svgs(cfg, method, report, in_scores, truth)
        p = "n/a" if report.precision is None else f"{report.precision:.3f}"
        r = "n/a" if report.recall is None else f"{report.recall:.3f}"
        print(f"{method.value}: precision {p} recall {r} (TP {report.true_positives}, FP {report.false_positives}, FN {report.false_negatives})")

    with _open_for_write(_out_path(cfg, "report.json")) as fh:
        write_report_json(reports, fh, {"run_config": cfg.to_dict(), "upstream": upstream})
    return EXIT_OK


def _leading_metadata(text: str) -> dict:
    meta = {}
    for line in text.splitlines():
        if line.startswith(_META_PREFIX.rstrip()):
            meta.update(json.loads(line[len(_META_PREFIX.rstrip()):]))
        elif not line.startswith("#"):
            break
    return meta


def _write_eval_svgs(cfg: RunConfig, method: Method, report: EvalReport, scores, truth) -> None:
    pts = [(r, p) for _, p, r in report.pr_curve if p is not None and r is not None]
    svg = line_chart(
        [(method.value, [r for r, _ in pts], [p for _, p in pts])],
        title=f"{method.value}: precision vs recall",
        xlabel="recall",
        ylabel="precision",
    )
    _write(_out_path(cfg, f"pr_{method.value}.svg"), svg)
    if not scores:
        return
    origin = min(s.day for s in scores)
    xs = [(s.day - origin).days for s in scores]
    markers = [(d - origin).days for d in sorted(truth.days) if d in {s.day for s in scores}]
    svg = line_chart(
        [(method.value, xs, [s.score for s in scores])],
        title=f"{method.value} score by day (markers: event days)",
        xlabel=f"days since {origin.isoformat()}",
        ylabel="score",
        markers=markers,
    )
    _write(_out_path(cfg, f"scores_{method.value}.svg"), svg)


# ---------------------------------------------------------------- report


def cmd_report(args) -> int:
    modality = args.modality or AIR
    cfg = RunConfig(
        "report",
        inputs={"measurements": args.measurements, "model_dir": args.model_dir},
        out_dir=args.out_dir,
        modalities=(modality,),
        k=args.k,
        utc_offset=args.utc_offset,
        extra={"sensor": args.sensor, "day": args.day, "svg": bool(args.svg)},
    )
    basis = _load_model(args.model_dir, modality)
    if cfg.k > basis.n_components:
        raise DataError(f"--k {cfg.k} exceeds the {basis.n_components} model components")
    table = _load_measurements(args.measurements, cfg.utc_offset)
    prepared = prepare_days(table, (modality,))
    day = date.fromisoformat(args.day)
    match = [d for d in prepared.normalized[modality] if d.sensor_id == args.sensor and d.day == day]
    if not match:
        raise DataError(f"no complete {modality} day for sensor {args.sensor!r} on {day}")
    nd = match[0]
    measured = nd.denormalize()
    model = reconstruct(project(nd, basis, cfg.k), basis)
    resid = measured - model
    name = f"residual_{args.sensor}_{day.isoformat()}_{_short(modality)}"
    lines = [cfg.header(training_meta=basis.training_meta), "slot,minute,measured,reconstructed,residual"]
    for i in range(len(measured)):
        lines.append(f"{i},{i * SLOT_MINUTES},{float(measured[i])!r},{float(model[i])!r},{float(resid[i])!r}")
    _write(_out_path(cfg, name + ".csv"), "\n".join(lines) + "\n")
    peak = int(np.argmax(np.abs(resid)))
    if args.svg:
        hours = [i * SLOT_MINUTES / 60 for i in range(len(measured))]
        svg = line_chart(
            [("measured", hours, measured.tolist()), (f"model K={cfg.k}", hours, model.tolist())],
            title=f"{args.sensor} {day.isoformat()} {modality}",
            xlabel="local hour",
            ylabel="value",
        )
        _write(_out_path(cfg, name + ".svg"), svg)
    print(f"{args.sensor} {day}: max |residual| {abs(resid[peak]):.4g} at slot {peak} ({peak * SLOT_MINUTES // 60:02d}:{peak * SLOT_MINUTES % 60:02d})")
    return EXIT_OK


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sensorpca", description="PCA models of daily sensor behaviour and event detection.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def offset_arg(sp):
        sp.add_argument("--utc-offset", type=_offset, default=format_offset(DEFAULT_UTC_OFFSET_MINUTES),
                        help="local fixed offset defining the day boundary (default %(default)s)")

    sp = sub.add_parser("synth", help="write a synthetic labelled corpus")
    sp.add_argument("--days", type=_positive_int, default=200)
    sp.add_argument("--sensors", type=_positive_int, default=10)
    sp.add_argument("--events", type=int, default=40)
    sp.add_argument("--event-dates", help="comma-separated ISO dates; overrides --events")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--start", type=_iso_date, default="2005-09-17")
    sp.add_argument("--sample-minutes", type=_positive_int, default=1)
    sp.add_argument("--out-dir", default=".")
    offset_arg(sp)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("build-model", help="fit a PCA basis per modality")
    sp.add_argument("--measurements", required=True)
    sp.add_argument("--train-start", type=_iso_date)
    sp.add_argument("--train-end", type=_iso_date)
    sp.add_argument("--modality", type=_modality, action="append", help="repeatable; default air and soil temperature")
    sp.add_argument("--k-mad", type=float, default=4.0, help="censoring cut in MADs above the median roughness")
    sp.add_argument("--out-dir", default=".")
    offset_arg(sp)
    sp.set_defaults(func=cmd_build_model)

    sp = sub.add_parser("detect", help="score days and flag events")
    sp.add_argument("--measurements", required=True)
    sp.add_argument("--model-dir", default=".")
    sp.add_argument("--method", action="append", choices=[m.value for m in Method] + ["all"])
    sp.add_argument("--threshold", type=_threshold, default="calibrate", help="number, +inf, -inf or 'calibrate'")
    sp.add_argument("--truth", help="ground truth, required for calibration")
    sp.add_argument("--min-precision", type=float, default=0.5)
    sp.add_argument("--min-precip", type=float, default=3.0)
    sp.add_argument("--calibrate-start", type=_iso_date)
    sp.add_argument("--calibrate-end", type=_iso_date)
    sp.add_argument("--k", type=_positive_int, default=DEFAULT_COMPONENTS)
    sp.add_argument("--smoothing-width", type=_positive_int, default=7)
    sp.add_argument("--smoothing-iterations", type=int, default=3)
    sp.add_argument("--smoothing-order", choices=[SMOOTH_THEN_AVERAGE, AVERAGE_THEN_SMOOTH], default=SMOOTH_THEN_AVERAGE)
    sp.add_argument("--out-dir", default=".")
    offset_arg(sp)
    sp.set_defaults(func=cmd_detect)

    sp = sub.add_parser("evaluate", help="precision, recall and PR curves")
    sp.add_argument("--scores", required=True)
    sp.add_argument("--truth", required=True)
    sp.add_argument("--threshold", type=_threshold, help="re-threshold instead of using the flags in the scores file")
    sp.add_argument("--slack", type=int, default=0, help="match flags to events up to this many days apart")
    sp.add_argument("--min-precip", type=float, default=3.0)
    sp.add_argument("--eval-start", type=_iso_date)
    sp.add_argument("--eval-end", type=_iso_date)
    sp.add_argument("--svg", action="store_true", help="also write SVG plots")
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("report", help="measurement vs reconstruction for one sensor-day")
    sp.add_argument("--measurements", required=True)
    sp.add_argument("--model-dir", default=".")
    sp.add_argument("--sensor", required=True)
    sp.add_argument("--day", type=_iso_date, required=True)
    sp.add_argument("--modality", type=_modality)
    sp.add_argument("--k", type=_positive_int, default=DEFAULT_COMPONENTS)
    sp.add_argument("--svg", action="store_true")
    sp.add_argument("--out-dir", default=".")
    offset_arg(sp)
    sp.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if getattr(args, "slack", 0) < 0:
            raise UsageError("--slack must be >= 0")
        if getattr(args, "threshold", None) == "calibrate" and args.command == "evaluate":
            raise UsageError("evaluate takes a numeric --threshold")
        return args.func(args)
    except UsageError as exc:
        print(f"sensorpca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, IngestError, InsufficientData, ConfigError, ValueError, OSError) as exc:
        print(f"sensorpca: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
