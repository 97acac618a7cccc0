"""MCSE scoring of a candidate entity list against a reference entity list.

Exactly matching phrases are paired off first. The leftover reference
entities (rows) and candidate entities (columns) form a cosine-similarity
matrix. Each column is scored ``max / (max + mean)`` and the final value is
``(matched + sum of column scores) / M``, where M is the candidate count.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from mcse.embeddings import EmbeddingStore, similarity_matrix
from mcse.extraction import ClinicalEntity

EntityLike = Union[ClinicalEntity, str]


def _phrase(e: EntityLike) -> str:
    return e if isinstance(e, str) else e.phrase


@dataclass(frozen=True)
class MatchPartition:
    matched_count: int
    residual_reference: Tuple[EntityLike, ...]
    residual_candidate: Tuple[EntityLike, ...]
    matched: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SimilarityMatrix:
    rows: Tuple[str, ...]
    cols: Tuple[str, ...]
    values: np.ndarray

    @property
    def shape(self):
        return (len(self.rows), len(self.cols))

    @classmethod
    def from_values(cls, values, rows=None, cols=None) -> "SimilarityMatrix":
        """Wrap a raw matrix, e.g. a printed table replayed without embeddings."""
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2:
            arr = arr.reshape(len(rows or ()), len(cols or ()))
        n, m = arr.shape
        rows = tuple(rows) if rows is not None else tuple(f"r{i}" for i in range(n))
        cols = tuple(cols) if cols is not None else tuple(f"c{j}" for j in range(m))
        if (len(rows), len(cols)) != arr.shape:
            raise ValueError(f"labels {len(rows)}x{len(cols)} do not fit values of shape {arr.shape}")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0 or not np.all(np.isfinite(arr))):
            raise ValueError("similarity values must lie in [0, 1]")
        return cls(rows, cols, arr)


@dataclass
class ColumnScore:
    candidate: str
    s: float
    best_reference: Optional[str]

    def to_dict(self):
        return {"candidate": self.candidate, "s": self.s, "best_reference": self.best_reference}


@dataclass
class ScoreReport:
    mcse: float
    matched: int
    m: int
    n: int
    columns: List[ColumnScore] = field(default_factory=list)
    diagnostics: Dict[str, object] = field(default_factory=dict)

    def to_dict(self):
        return {
            "mcse": self.mcse,
            "matched": self.matched,
            "m": self.m,
            "n": self.n,
            "columns": [c.to_dict() for c in self.columns],
            "diagnostics": dict(self.diagnostics),
        }


def partition_exact(reference: Sequence[EntityLike], candidate: Sequence[EntityLike]) -> MatchPartition:
    """One-to-one exact phrase matching; unmatched entities keep their original order."""
    pool: Dict[str, int] = {}
    for e in candidate:
        p = _phrase(e)
        pool[p] = pool.get(p, 0) + 1
    residual_ref = []
    matched = []
    matched_ref: Dict[str, int] = {}
    for e in reference:
        p = _phrase(e)
        if pool.get(p, 0) > 0:
            pool[p] -= 1
            matched_ref[p] = matched_ref.get(p, 0) + 1
            matched.append(p)
        else:
            residual_ref.append(e)
    residual_cand = []
    for e in candidate:
        p = _phrase(e)
        if matched_ref.get(p, 0) > 0:
            matched_ref[p] -= 1
        else:
            residual_cand.append(e)
    return MatchPartition(len(matched), tuple(residual_ref), tuple(residual_cand), tuple(matched))


def build_matrix(partition: MatchPartition, store: EmbeddingStore) -> SimilarityMatrix:
    rows = tuple(_phrase(e) for e in partition.residual_reference)
    cols = tuple(_phrase(e) for e in partition.residual_candidate)
    return SimilarityMatrix(rows, cols, similarity_matrix(rows, cols, store))


def column_score(matrix: SimilarityMatrix, j: int) -> float:
    """``max / (max + mean)`` of column ``j``; the mean includes the maximum entry.

    An all-zero column scores 0.

    >>> column_score(SimilarityMatrix.from_values([[0.8]]), 0)
    0.5
    """
    n_rows, n_cols = matrix.values.shape
    if not 0 <= j < n_cols:
        raise IndexError(f"column {j} out of range for {n_cols} columns")
    if n_rows == 0:
        raise ValueError("column score needs at least one row")
    return float(_column_scores(matrix.values[:, j : j + 1])[0])


def _column_scores(values: np.ndarray) -> np.ndarray:
    n_rows, n_cols = values.shape
    if n_rows == 0:
        return np.zeros(n_cols)
    top = values.max(axis=0)
    # sorted summation keeps the result independent of row order
    mean = np.sort(values, axis=0).sum(axis=0) / n_rows
    out = np.zeros(n_cols)
    pos = top > 0
    out[pos] = top[pos] / (top[pos] + mean[pos])
    return out


def mcse_from_matrix(matrix, matched_count: int, m: int) -> float:
    """Final MCSE arithmetic from a residual similarity matrix.

    Parameters
    ----------
    matrix : SimilarityMatrix or array-like of shape (rows, cols)
    matched_count : int
        Number of exact matches.
    m : int
        Total candidate entity count; must equal ``matched_count + cols``.
    """
    values = matrix.values if isinstance(matrix, SimilarityMatrix) else np.asarray(matrix, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    if matched_count < 0:
        raise ValueError("matched_count must be non-negative")
    if m != matched_count + values.shape[1]:
        raise ValueError(f"M={m} but matched_count + columns = {matched_count + values.shape[1]}")
    if m <= 0:
        raise ValueError("M must be positive")
    return (matched_count + math.fsum(_column_scores(values))) / m


def mcse(reference: Sequence[EntityLike], candidate: Sequence[EntityLike], store: EmbeddingStore) -> ScoreReport:
    """Score ``candidate`` entities against ``reference`` entities.

    Empty inputs are scored rather than rejected: both sides empty gives 1.0,
    and an empty reference or an empty candidate gives 0.0. The diagnostics
    flag each of these cases.
    """
    n, m = len(reference), len(candidate)
    part = partition_exact(reference, candidate)
    matrix = build_matrix(part, store)
    scores = _column_scores(matrix.values)
    diagnostics = {
        "empty_reference": n == 0,
        "empty_candidate": m == 0,
        "oov_reference": store.oov_count(matrix.rows),
        "oov_candidate": store.oov_count(matrix.cols),
        "zero_columns": int(np.sum(scores == 0.0)) if matrix.rows else len(matrix.cols),
    }
    columns = []
    for j, cand in enumerate(matrix.cols):
        best = matrix.rows[int(np.argmax(matrix.values[:, j]))] if matrix.rows else None
        columns.append(ColumnScore(cand, float(scores[j]), best))
    if m == 0:
        value = 1.0 if n == 0 else 0.0
    else:
        value = (part.matched_count + math.fsum(scores)) / m
    return ScoreReport(value, part.matched_count, m, n, columns, diagnostics)
