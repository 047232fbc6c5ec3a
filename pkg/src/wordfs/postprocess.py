"""Mean removal plus top principal component removal (PPA)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from wordfs.embedding_store import EmbeddingTable
from wordfs.errors import DomainError
from wordfs.linalg_core import ROW_BLOCK, PcaBasis, fit_pca

DEFAULT_PPA_D = 7


@dataclass(frozen=True)
class PpaConfig:
    top_d: int = DEFAULT_PPA_D

    def __post_init__(self):
        if int(self.top_d) != self.top_d or self.top_d < 1:
            raise DomainError(f"PPA top_d must be a positive integer, got {self.top_d!r}")


def ppa_matrix(matrix: np.ndarray, top_d: int) -> Tuple[np.ndarray, PcaBasis]:
    """Apply PPA to a raw matrix; also return the fitted basis."""
    n, d = matrix.shape
    if n < top_d + 1:
        raise DomainError(f"PPA with top_d={top_d} needs at least {top_d + 1} words, got {n}")
    if d <= top_d:
        raise DomainError(f"PPA with top_d={top_d} needs dimension > {top_d}, got {d}")
    mean = matrix.mean(axis=0)
    basis = fit_pca(matrix, top_d)
    u = basis.components
    out = np.empty_like(matrix)
    for i in range(0, n, ROW_BLOCK):
        block = matrix[i:i + ROW_BLOCK] - mean
        out[i:i + ROW_BLOCK] = block - (block @ u.T) @ u
    return out, basis


def ppa(table: EmbeddingTable, config: PpaConfig = PpaConfig()) -> EmbeddingTable:
    """Subtract the common mean, then the top ``config.top_d`` directions."""
    out, _ = ppa_matrix(table.matrix, config.top_d)
    return table.with_matrix(out, copy=False)
