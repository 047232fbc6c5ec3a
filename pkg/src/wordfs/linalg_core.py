"""Deterministic dense linear algebra used by every other stage."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.stats import rankdata

from wordfs.errors import DomainError


@dataclass(frozen=True)
class PcaBasis:
    """Principal directions of a point cloud, most-variant first.

    ``components`` is ``(r, d)`` with orthonormal rows.
    """

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[0]


def column_mean(matrix) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise DomainError("column_mean needs a non-empty 2-D matrix")
    return matrix.mean(axis=0)


def normalize_signs(components: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive.

    ``argmax`` returns the first maximum, which breaks ties by lowest index.
    """
    components = np.array(components, dtype=np.float64, copy=True)
    for row in components:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            row *= -1.0
    return components


def numerical_rank(singular_values: np.ndarray, shape: Tuple[int, int]) -> int:
    if singular_values.size == 0 or singular_values[0] == 0.0:
        return 0
    tol = singular_values[0] * max(shape) * np.finfo(np.float64).eps
    return int(np.sum(singular_values > tol))


# Fixed row-block size; results depend on it, so it is not tunable at runtime.
ROW_BLOCK = 32768


def centered_r_factor(matrix: np.ndarray, mean: np.ndarray) -> np.ndarray:
    """Triangular factor R of ``matrix - mean`` via blockwise (TS)QR.

    ``R^T R`` equals the centered Gram matrix, so R has the same singular
    values and right singular vectors as the centered data, without ever
    holding a centered copy of a tall matrix.
    """
    n = matrix.shape[0]
    if n <= ROW_BLOCK:
        return np.linalg.qr(matrix - mean, mode="r")
    blocks = [
        np.linalg.qr(matrix[i:i + ROW_BLOCK] - mean, mode="r")
        for i in range(0, n, ROW_BLOCK)
    ]
    return np.linalg.qr(np.vstack(blocks), mode="r")


def fit_pca(matrix, r: int, *, allow_rank_deficient: bool = False) -> PcaBasis:
    """Top-``r`` principal components of the row-centered matrix.

    The right singular vectors come from an SVD of the blockwise QR factor
    of the centered data (see :func:`centered_r_factor`).

    With ``allow_rank_deficient`` the directions beyond the numerical rank
    are kept (an arbitrary orthonormal completion, zero variance) instead of
    raising. Projections onto them are numerically zero.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise DomainError("fit_pca needs a 2-D matrix")
    n, d = matrix.shape
    if n < 2:
        raise DomainError(f"fit_pca needs at least 2 rows, got {n}")
    if not 1 <= r <= min(n - 1, d):
        raise DomainError(f"component count {r} outside [1, {min(n - 1, d)}]")
    mean = matrix.mean(axis=0)
    rfac = centered_r_factor(matrix, mean)
    _, s, vt = np.linalg.svd(rfac, full_matrices=False)
    rank = numerical_rank(s, matrix.shape)
    if rank < r and not allow_rank_deficient:
        raise DomainError(
            f"requested {r} components but centered data has rank {rank}"
        )
    components = normalize_signs(vt[:r])
    explained = (s[:r] ** 2) / (n - 1)
    return PcaBasis(mean=mean, components=components, explained_variance=explained)


def remove_projections(matrix, basis: PcaBasis, top_d: int) -> np.ndarray:
    """Subtract each row's projection onto the first ``top_d`` components."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if top_d < 0 or top_d > basis.n_components:
        raise DomainError(
            f"cannot remove {top_d} components; basis has {basis.n_components}"
        )
    if top_d == 0:
        return matrix.copy()
    u = basis.components[:top_d]
    out = np.empty_like(matrix)
    for i in range(0, matrix.shape[0], ROW_BLOCK):
        block = matrix[i:i + ROW_BLOCK]
        out[i:i + ROW_BLOCK] = block - (block @ u.T) @ u
    return out


def cosine_similarity(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = math.sqrt(float(np.dot(a, a)))
    nb = math.sqrt(float(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        raise DomainError("cosine similarity undefined for a zero vector")
    c = float(np.dot(a, b)) / (na * nb)
    return min(1.0, max(-1.0, c))


def average_ranks(values) -> np.ndarray:
    """Ascending fractional ranks from 1; ties share the mean position."""
    values = np.asarray(values, dtype=np.float64)
    return rankdata(values, method="average").astype(np.float64)


def pearson_from_ranks(rx: np.ndarray, ry: np.ndarray) -> Tuple[float, bool]:
    cx = rx - rx.mean()
    cy = ry - ry.mean()
    sxx = float(np.dot(cx, cx))
    syy = float(np.dot(cy, cy))
    if sxx == 0.0 or syy == 0.0:
        return 0.0, True
    r = float(np.dot(cx, cy)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r)), False


def spearman_corr(x, y, *, with_flag: bool = False):
    """Spearman's rho as Pearson correlation of average ranks.

    A constant input yields ``0.0``; pass ``with_flag=True`` to also get a
    boolean telling whether that fallback was used.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("spearman_corr needs two 1-D vectors of equal length")
    if x.size < 2:
        raise DomainError("spearman_corr needs at least 2 observations")
    rho, degenerate = pearson_from_ranks(average_ranks(x), average_ranks(y))
    if with_flag:
        return rho, degenerate
    return rho
