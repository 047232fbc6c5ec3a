"""Per-dimension pair features whose row sums are cosine similarities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from wordfs.embedding_store import EmbeddingTable, resolve
from wordfs.errors import DomainError
from wordfs.simdatasets import WordPairDataset


@dataclass(frozen=True)
class PairFeatureMatrix:
    features: np.ndarray  # (m, d)
    labels: np.ndarray  # (m,)
    kept_pairs: Tuple[int, ...]
    skipped_oov: int = 0
    skipped_zero: int = 0

    @property
    def m(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


def resolve_pairs(table: EmbeddingTable, ds: WordPairDataset, fold_case: bool = True):
    """Row indices for every usable pair.

    Returns ``(kept, rows_a, rows_b, n_oov, n_zero)``; a pair is unusable if a
    word is missing or either vector has zero norm.
    """
    norms_sq = np.einsum("ij,ij->i", table.matrix, table.matrix)
    kept: List[int] = []
    rows_a: List[int] = []
    rows_b: List[int] = []
    n_oov = n_zero = 0
    for i, p in enumerate(ds.pairs):
        ra = resolve(table, p.word1, fold_case)
        rb = resolve(table, p.word2, fold_case)
        if ra is None or rb is None:
            n_oov += 1
            continue
        if norms_sq[ra] == 0.0 or norms_sq[rb] == 0.0:
            n_zero += 1
            continue
        kept.append(i)
        rows_a.append(ra)
        rows_b.append(rb)
    return kept, np.array(rows_a, dtype=np.intp), np.array(rows_b, dtype=np.intp), n_oov, n_zero


def pair_feature_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a_i * b_i / (|a| |b|)`` for row-aligned stacks of vectors."""
    na = np.sqrt(np.einsum("ij,ij->i", a, a))
    nb = np.sqrt(np.einsum("ij,ij->i", b, b))
    return (a * b) / (na * nb)[:, None]


def extract_features(table: EmbeddingTable, ds: WordPairDataset, fold_case: bool = True) -> PairFeatureMatrix:
    kept, ra, rb, n_oov, n_zero = resolve_pairs(table, ds, fold_case)
    if not kept:
        raise DomainError(
            f"no usable pairs in {ds.name!r} ({n_oov} out-of-vocabulary, {n_zero} zero-norm)"
        )
    features = pair_feature_rows(table.matrix[ra], table.matrix[rb])
    labels = np.array([ds.pairs[i].score for i in kept], dtype=np.float64)
    return PairFeatureMatrix(
        features=features,
        labels=labels,
        kept_pairs=tuple(kept),
        skipped_oov=n_oov,
        skipped_zero=n_zero,
    )
