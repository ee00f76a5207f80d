"""Daily PCA basis, expansion coefficients and reconstruction.

Eigenvectors are stored with unit Euclidean norm. Coefficients use the
RMS inner product, so a unit-RMS day identical to eigenvector ``k``
(rescaled to unit RMS) has ``e_k == 1`` and the energy identity
``residual_norm**2 + sum(e**2) == 1`` holds for every normalized day.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import date
from typing import IO, Sequence

import numpy as np

from . import kernels
from .ingest import Modality
from .preprocess import SLOTS_PER_DAY, NormalizedDayVector

MODEL_FORMAT = "sensorpca.model"
MODEL_VERSION = 1
DEFAULT_COMPONENTS = 4
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
_NEGATIVE_EIGEN_TOL = 1e-12


class InsufficientData(ValueError):
    """Too few days to build a basis."""


class ConvergenceError(RuntimeError):
    pass


def symmetric_eigh(
    a: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues in descending order and the matching eigenvectors
    as rows. Each eigenvector is signed so its largest-magnitude entry is
    positive; eigenvalues equal to rounding are ordered by their vectors,
    compared lexicographically.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, float(np.max(np.abs(a), initial=0.0)))):
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    w, v, _, off = kernels.jacobi_eigh(np.ascontiguousarray(a), tol, max_sweeps)
    if off >= tol:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")
    vecs = np.ascontiguousarray(v.T)
    for row in vecs:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            row *= -1.0
    order = _descending_order(w, vecs)
    return w[order], vecs[order]


def _descending_order(w: np.ndarray, vecs: np.ndarray) -> list[int]:
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    tie = 1e-12 * scale
    by_value = sorted(range(len(w)), key=lambda i: -w[i])
    order: list[int] = []
    group = [by_value[0]] if by_value else []
    for i in by_value[1:]:
        if w[group[-1]] - w[i] <= tie:
            group.append(i)
        else:
            order.extend(sorted(group, key=lambda j: tuple(vecs[j])))
            group = [i]
    order.extend(sorted(group, key=lambda j: tuple(vecs[j])))
    return order


@dataclass(frozen=True, eq=False)
class PcaBasis:
    modality: str
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # (n_components, dim), rows orthonormal
    variance_fraction: np.ndarray
    training_meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[1]

    @property
    def n_components(self) -> int:
        return self.eigenvectors.shape[0]


@dataclass(frozen=True, eq=False)
class DayCoefficients:
    sensor_id: str
    modality: str
    day: date
    e0: float
    e: np.ndarray
    residual_norm: float
    rms: float

    @property
    def k(self) -> int:
        return len(self.e)


def correlation_matrix(values: np.ndarray) -> np.ndarray:
    """``(1/N) * sum(v v^T)`` over the rows of ``values``."""
    n = values.shape[0]
    c = values.T @ values / n
    return 0.5 * (c + c.T)


def build_basis(days: Sequence[NormalizedDayVector], modality: str | None = None) -> PcaBasis:
    """Eigen-basis of the correlation matrix of normalized training days.

    Days are ordered by (sensor, day) before accumulation so the result
    does not depend on input order.

    Raises:
        InsufficientData: fewer than two days.
    """
    days = list(days)
    if len(days) < 2:
        raise InsufficientData(f"need at least 2 training days, got {len(days)}")
    dims = {len(d.values) for d in days}
    if dims != {SLOTS_PER_DAY}:
        raise ValueError(f"all day vectors must have length {SLOTS_PER_DAY}, got {sorted(dims)}")
    days.sort(key=lambda d: (d.sensor_id, d.day))
    if modality is None:
        modality = Modality(days[0].modality).value
    x = np.stack([d.values for d in days])
    c = correlation_matrix(x)
    w, vecs = symmetric_eigh(c)
    if w[-1] < -_NEGATIVE_EIGEN_TOL * max(1.0, w[0]):
        raise ValueError(f"correlation matrix has negative eigenvalue {w[-1]:.3e}")
    w = np.clip(w, 0.0, None)
    meta = {
        "first_day": min(d.day for d in days).isoformat(),
        "last_day": max(d.day for d in days).isoformat(),
        "sensor_count": len({d.sensor_id for d in days}),
        "day_count": len(days),
        "normalization": "N",
    }
    return PcaBasis(str(modality), w, vecs, w / w.sum(), meta)


def variance_explained(basis: PcaBasis, k: int) -> float:
    if not 1 <= k <= basis.n_components:
        raise ValueError(f"k must be in [1, {basis.n_components}]")
    return float(np.sum(basis.eigenvalues[:k]) / np.sum(basis.eigenvalues))


def project(day: NormalizedDayVector, basis: PcaBasis, k: int = DEFAULT_COMPONENTS) -> DayCoefficients:
    """Expansion coefficients of one normalized day on the first ``k`` eigenvectors."""
    if not 1 <= k <= basis.n_components:
        raise ValueError(f"k must be in [1, {basis.n_components}]")
    x = np.asarray(day.values, dtype=np.float64)
    if x.shape != (basis.dim,):
        raise ValueError(f"day vector has length {x.shape}, basis dimension is {basis.dim}")
    scale = math.sqrt(basis.dim)
    v = basis.eigenvectors[:k]
    e = v @ x / scale
    resid = x - scale * (e @ v)
    return DayCoefficients(
        day.sensor_id,
        Modality(day.modality).value,
        day.day,
        float(day.daily_mean),
        e,
        math.sqrt(float(np.mean(resid * resid))),
        float(day.rms),
    )


def project_many(
    days: Sequence[NormalizedDayVector], basis: PcaBasis, k: int = DEFAULT_COMPONENTS
) -> list[DayCoefficients]:
    return [project(d, basis, k) for d in days]


def reconstruct(coeffs: DayCoefficients, basis: PcaBasis) -> np.ndarray:
    """Model day in original units: ``e0 + rms * sum(e_k * v_k)``."""
    if coeffs.k > basis.n_components:
        raise ValueError("more coefficients than basis vectors")
    shape = math.sqrt(basis.dim) * (coeffs.e @ basis.eigenvectors[: coeffs.k])
    return coeffs.e0 + coeffs.rms * shape


def residual(day: NormalizedDayVector, basis: PcaBasis, k: int = DEFAULT_COMPONENTS) -> np.ndarray:
    """Measurement minus model reconstruction, in original units."""
    return day.denormalize() - reconstruct(project(day, basis, k), basis)


def orthonormality_error(basis: PcaBasis) -> float:
    v = basis.eigenvectors
    return float(np.max(np.abs(v @ v.T - np.eye(v.shape[0]))))


# ---------------------------------------------------------------- persistence


def basis_to_dict(basis: PcaBasis, extra: dict | None = None) -> dict:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "modality": basis.modality,
        "dim": basis.dim,
        "eigenvalues": [float(x) for x in basis.eigenvalues],
        "variance_fraction": [float(x) for x in basis.variance_fraction],
        "eigenvectors": [[float(x) for x in row] for row in basis.eigenvectors],
        "training_meta": basis.training_meta,
    }
    if extra:
        doc.update(extra)
    return doc


def basis_from_dict(doc: dict) -> PcaBasis:
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError("not a sensorpca model file")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')!r}")
    vecs = np.asarray(doc["eigenvectors"], dtype=np.float64)
    if vecs.ndim != 2 or vecs.shape[1] != doc["dim"]:
        raise ValueError("eigenvector array does not match declared dim")
    return PcaBasis(
        doc["modality"],
        np.asarray(doc["eigenvalues"], dtype=np.float64),
        vecs,
        np.asarray(doc["variance_fraction"], dtype=np.float64),
        dict(doc.get("training_meta", {})),
    )


def save_basis(basis: PcaBasis, stream: IO[str], extra: dict | None = None) -> None:
    # json writes floats with repr(), i.e. the shortest exact round-trip form.
    json.dump(basis_to_dict(basis, extra), stream, indent=1, sort_keys=True)
    stream.write("\n")


def load_basis(stream: IO[str]) -> PcaBasis:
    return basis_from_dict(json.load(stream))
