"""End-to-end reduction methods.

``wordfs-p`` / ``wordfs-s``
    Optional PPA, pair features, rank dimensions by RFT loss or Spearman,
    keep the best ``K`` columns (best first).
``pca-algo``
    PPA, project onto the top ``K`` principal components, PPA again.
``pca-plain``
    Projection onto the top ``K`` principal components only.
``truncate``
    First ``K`` coordinates.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from wordfs.embedding_store import EmbeddingTable, select_columns
from wordfs.errors import DomainError
from wordfs.feature_select import RftConfig, SelectionModel, rank_dimensions, top_k
from wordfs.linalg_core import fit_pca
from wordfs.pair_features import extract_features
from wordfs.postprocess import PpaConfig, ppa
from wordfs.simdatasets import WordPairDataset

METHODS = ("wordfs-p", "wordfs-s", "pca-algo", "pca-plain", "truncate")
WORDFS_CRITERION = {"wordfs-p": "rft", "wordfs-s": "spearman"}


@dataclass(frozen=True)
class ReductionSpec:
    method: str
    target_dim: int
    use_ppa: bool = True
    ppa: PpaConfig = field(default_factory=PpaConfig)
    rft: RftConfig = field(default_factory=RftConfig)
    fold_case: bool = True
    use_abs: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.target_dim < 1:
            raise DomainError(f"target dimension must be positive, got {self.target_dim}")

    @property
    def supervised(self) -> bool:
        return self.method in WORDFS_CRITERION

    @property
    def label(self) -> str:
        """Short name in the style ``wordfs-s-wP``."""
        if self.supervised:
            return f"{self.method}-{'wP' if self.use_ppa else 'woP'}"
        return self.method

    def as_dict(self) -> dict:
        out = asdict(self)
        out["ppa"] = self.ppa.top_d
        out["rft"] = self.rft.bins
        return out


@dataclass(frozen=True)
class ReductionResult:
    table: EmbeddingTable
    model: Optional[SelectionModel]
    provenance: dict


def _check_dim(table: EmbeddingTable, k: int):
    if not 1 <= k <= table.d:
        raise DomainError(f"target dimension {k} outside [1, {table.d}]")


def working_table(table: EmbeddingTable, spec: ReductionSpec) -> EmbeddingTable:
    return ppa(table, spec.ppa) if spec.use_ppa else table


def fit_selection(working: EmbeddingTable, ds: WordPairDataset, spec: ReductionSpec, threads: int = 1) -> SelectionModel:
    fm = extract_features(working, ds, spec.fold_case)
    return rank_dimensions(
        fm,
        WORDFS_CRITERION[spec.method],
        spec.rft,
        use_abs=spec.use_abs,
        threads=threads,
    )


def reduce_wordfs(
    table: EmbeddingTable,
    ds: WordPairDataset,
    spec: ReductionSpec,
    *,
    working: Optional[EmbeddingTable] = None,
    threads: int = 1,
) -> ReductionResult:
    """Select the ``K`` best dimensions of the (optionally PPA'd) table.

    ``working`` lets callers reuse an already post-processed table.
    """
    if not spec.supervised:
        raise DomainError(f"reduce_wordfs cannot run method {spec.method!r}")
    _check_dim(table, spec.target_dim)
    if working is None:
        working = working_table(table, spec)
    model = fit_selection(working, ds, spec, threads=threads)
    reduced = select_columns(working, top_k(model, spec.target_dim))
    provenance = {"spec": spec.as_dict(), "dataset": ds.name, "n_pairs": len(ds)}
    return ReductionResult(reduced, model, provenance)


def pca_project(matrix: np.ndarray, k: int) -> np.ndarray:
    """Coordinates of the centered rows in the top-``k`` PCA basis."""
    basis = fit_pca(matrix, k, allow_rank_deficient=True)
    return (matrix - basis.mean) @ basis.components.T


def reduce_pca_algo(table: EmbeddingTable, spec: ReductionSpec) -> ReductionResult:
    k, top_d = spec.target_dim, spec.ppa.top_d
    _check_dim(table, k)
    if k <= top_d:
        raise DomainError(
            f"pca-algo needs K > D for the second PPA pass (K={k}, D={top_d})"
        )
    t1 = ppa(table, spec.ppa)
    t2 = t1.with_matrix(pca_project(t1.matrix, k))
    out = ppa(t2, spec.ppa)
    return ReductionResult(out, None, {"spec": spec.as_dict()})


def reduce_pca_plain(table: EmbeddingTable, spec: ReductionSpec) -> ReductionResult:
    _check_dim(table, spec.target_dim)
    out = table.with_matrix(pca_project(table.matrix, spec.target_dim))
    return ReductionResult(out, None, {"spec": spec.as_dict()})


def reduce_truncate(table: EmbeddingTable, k: int) -> ReductionResult:
    _check_dim(table, k)
    out = select_columns(table, range(k))
    return ReductionResult(out, None, {"spec": {"method": "truncate", "target_dim": k}})


def reduce(table: EmbeddingTable, spec: ReductionSpec, ds: Optional[WordPairDataset] = None, threads: int = 1) -> ReductionResult:
    """Dispatch on ``spec.method``."""
    if spec.supervised:
        if ds is None:
            raise DomainError(f"{spec.method} needs a word-pair dataset for supervision")
        return reduce_wordfs(table, ds, spec, threads=threads)
    if spec.method == "pca-algo":
        return reduce_pca_algo(table, spec)
    if spec.method == "pca-plain":
        return reduce_pca_plain(table, spec)
    return reduce_truncate(table, spec.target_dim)
