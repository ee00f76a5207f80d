"""End-to-end wiring: readings -> daily vectors -> basis -> coefficient series -> scores."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from datetime import date

from .detectors import DayScore, Method, score_basic, score_delta, score_highpass, unmatched_dates
from .ingest import MeasurementTable, Modality
from .pca import DEFAULT_COMPONENTS, DayCoefficients, PcaBasis, build_basis, project_many
from .preprocess import (
    DayVector,
    NormalizedDayVector,
    aggregate_table,
    censor_noisy_days,
    normalize_days,
    select_complete_days,
)
from .trends import SMOOTH_THEN_AVERAGE, CoefficientSeries, build_coefficient_series

AIR = Modality.AIR_TEMPERATURE.value
SOIL = Modality.SOIL_TEMPERATURE.value


@dataclass(frozen=True)
class PipelineConfig:
    k: int = DEFAULT_COMPONENTS
    k_mad: float = 4.0
    smoothing_width: int = 7
    smoothing_iterations: int = 3
    smoothing_order: str = SMOOTH_THEN_AVERAGE
    train_start: date | None = None
    train_end: date | None = None
    modalities: tuple[str, ...] = (AIR, SOIL)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["train_start"] = self.train_start.isoformat() if self.train_start else None
        d["train_end"] = self.train_end.isoformat() if self.train_end else None
        d["modalities"] = list(self.modalities)
        return d

    def in_training(self, day: date) -> bool:
        if self.train_start and day < self.train_start:
            return False
        if self.train_end and day > self.train_end:
            return False
        return True


@dataclass
class PreparedDays:
    """Normalized complete days per modality plus what was dropped on the way."""

    normalized: dict[str, list[NormalizedDayVector]] = field(default_factory=dict)
    incomplete: dict[str, list[DayVector]] = field(default_factory=dict)
    degenerate: dict[str, list[DayVector]] = field(default_factory=dict)


@dataclass
class FittedModel:
    basis: PcaBasis
    kept: list[NormalizedDayVector]
    censored: list[NormalizedDayVector]


def prepare_days(table: MeasurementTable, modalities=(AIR, SOIL)) -> PreparedDays:
    out = PreparedDays()
    grouped = aggregate_table(table)
    for modality in modalities:
        mod = Modality(modality)
        days: list[DayVector] = []
        for (_, m), vecs in sorted(grouped.items(), key=lambda kv: kv[0][0]):
            if m == mod:
                days.extend(vecs)
        complete = select_complete_days(days)
        normalized, degenerate = normalize_days(complete)
        out.normalized[mod.value] = normalized
        out.incomplete[mod.value] = [d for d in days if not d.complete]
        out.degenerate[mod.value] = degenerate
    return out


def fit_model(days: list[NormalizedDayVector], cfg: PipelineConfig, modality: str) -> FittedModel:
    """Censor the training window and build the basis for one modality."""
    training = [d for d in days if cfg.in_training(d.day)]
    kept, censored = censor_noisy_days(training, cfg.k_mad)
    basis = build_basis(kept, modality)
    basis.training_meta["censored_count"] = len(censored)
    basis.training_meta["k_mad"] = cfg.k_mad
    return FittedModel(basis, kept, censored)


def coefficient_series(
    days: list[NormalizedDayVector], basis: PcaBasis, cfg: PipelineConfig, k: int = 1
) -> tuple[CoefficientSeries, list[DayCoefficients]]:
    coeffs = project_many(days, basis, cfg.k)
    series = build_coefficient_series(
        coeffs,
        k,
        iterations=cfg.smoothing_iterations,
        width=cfg.smoothing_width,
        order=cfg.smoothing_order,
        modality=basis.modality,
    )
    return series, coeffs


def score_methods(
    air: CoefficientSeries, soil: CoefficientSeries | None, methods=tuple(Method)
) -> dict[Method, list[DayScore]]:
    out: dict[Method, list[DayScore]] = {}
    for method in methods:
        method = Method(method)
        if method is Method.BASIC:
            out[method] = score_basic(air.E)
        elif method is Method.HIGHPASS:
            out[method] = score_highpass(air.D)
        else:
            if soil is None:
                raise ValueError("the delta method needs a soil temperature model")
            out[method] = score_delta(air.D, soil.D)
    return out


@dataclass
class PipelineResult:
    prepared: PreparedDays
    models: dict[str, FittedModel]
    series: dict[str, CoefficientSeries]
    coefficients: dict[str, list[DayCoefficients]]
    scores: dict[Method, list[DayScore]]
    delta_unmatched: list[date] = field(default_factory=list)


def run(
    table: MeasurementTable,
    cfg: PipelineConfig | None = None,
    methods=tuple(Method),
    models: dict[str, PcaBasis] | None = None,
) -> PipelineResult:
    """Fit (or reuse) bases and score every complete day with each method."""
    cfg = cfg or PipelineConfig()
    methods = tuple(Method(m) for m in methods)
    need = [AIR] + ([SOIL] if Method.DELTA in methods else [])
    prepared = prepare_days(table, need)
    fitted: dict[str, FittedModel] = {}
    series: dict[str, CoefficientSeries] = {}
    coeffs: dict[str, list[DayCoefficients]] = {}
    for modality in need:
        days = prepared.normalized[modality]
        if models and modality in models:
            fitted[modality] = FittedModel(models[modality], [], [])
        else:
            fitted[modality] = fit_model(days, cfg, modality)
        series[modality], coeffs[modality] = coefficient_series(days, fitted[modality].basis, cfg)
    scores = score_methods(series[AIR], series.get(SOIL), methods)
    unmatched = unmatched_dates(series[AIR].D, series[SOIL].D) if SOIL in series else []
    return PipelineResult(prepared, fitted, series, coeffs, scores, unmatched)
