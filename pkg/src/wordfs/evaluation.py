"""Word-similarity scoring, cross-validated experiments, mean pooling."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from wordfs.embedding_store import EmbeddingTable, resolve, select_columns
from wordfs.errors import DomainError
from wordfs.feature_select import top_k
from wordfs.linalg_core import spearman_corr
from wordfs.pair_features import resolve_pairs
from wordfs.pipelines import (
    ReductionSpec,
    fit_selection,
    reduce,
    working_table,
)
from wordfs.simdatasets import WordPairDataset, kfold_split

DEFAULT_SEEDS = (0, 1, 2, 3, 4)
DEFAULT_FOLDS = 5


@dataclass
class EvalReport:
    """Spearman correlation on the x100 scale."""

    dataset_name: str
    spearman: float
    kept_pairs: int
    skipped_oov: int
    skipped_zero: int = 0
    method: str = "raw"
    dim: Optional[int] = None
    per_fold: Optional[List[float]] = None
    per_trial: Optional[List[float]] = None
    seeds: Optional[List[int]] = None
    degenerate: bool = False

    def as_items(self):
        items = [
            ("dataset", self.dataset_name),
            ("method", self.method),
            ("dim", "-" if self.dim is None else str(self.dim)),
            ("spearman", f"{self.spearman:.2f}"),
            ("spearman_exact", repr(float(self.spearman))),
            ("kept_pairs", str(self.kept_pairs)),
            ("skipped_oov", str(self.skipped_oov)),
            ("skipped_zero", str(self.skipped_zero)),
        ]
        if self.seeds is not None:
            items.append(("seeds", ",".join(map(str, self.seeds))))
        if self.per_trial is not None:
            items.append(("per_trial", " ".join(repr(float(v)) for v in self.per_trial)))
        if self.per_fold is not None:
            items.append(("per_fold", " ".join(repr(float(v)) for v in self.per_fold)))
        return items


def cosine_predictions(table: EmbeddingTable, rows_a: np.ndarray, rows_b: np.ndarray) -> np.ndarray:
    a = table.matrix[rows_a]
    b = table.matrix[rows_b]
    dots = np.einsum("ij,ij->i", a, b)
    norms = np.sqrt(np.einsum("ij,ij->i", a, a)) * np.sqrt(np.einsum("ij,ij->i", b, b))
    return np.clip(dots / norms, -1.0, 1.0)


def eval_similarity(table: EmbeddingTable, ds: WordPairDataset, fold_case: bool = True) -> EvalReport:
    """100 x Spearman between cosine similarities and human scores.

    Pairs with an out-of-vocabulary word or a zero vector are left out.
    """
    kept, ra, rb, n_oov, n_zero = resolve_pairs(table, ds, fold_case)
    if len(kept) < 2:
        raise DomainError(
            f"{ds.name!r}: only {len(kept)} resolvable pair(s); need at least 2"
        )
    preds = cosine_predictions(table, ra, rb)
    labels = np.array([ds.pairs[i].score for i in kept], dtype=np.float64)
    rho, degenerate = spearman_corr(preds, labels, with_flag=True)
    return EvalReport(
        dataset_name=ds.name,
        spearman=100.0 * rho,
        kept_pairs=len(kept),
        skipped_oov=n_oov,
        skipped_zero=n_zero,
        degenerate=degenerate,
    )


def _fold_score(reduced: EmbeddingTable, test: WordPairDataset, fold_case: bool) -> float:
    return eval_similarity(reduced, test, fold_case).spearman


def cross_validate(
    table: EmbeddingTable,
    ds: WordPairDataset,
    spec: ReductionSpec,
    k: int = DEFAULT_FOLDS,
    trial_seeds: Sequence[int] = DEFAULT_SEEDS,
    *,
    threads: int = 1,
) -> EvalReport:
    """k-fold CV repeated once per seed.

    Supervised methods re-fit their dimension ranking on the training folds
    of every split. PPA uses no labels and is fitted once on the whole
    vocabulary. Unsupervised methods are reduced once and only evaluated per
    fold. The reported score is the mean over seeds of the mean over folds.
    """
    if not trial_seeds:
        raise DomainError("at least one trial seed is required")
    kept, _, _, n_oov, n_zero = resolve_pairs(table, ds, spec.fold_case)
    usable = ds.subset(kept)
    if len(usable) < 2 * k:
        raise DomainError(
            f"{ds.name!r}: {len(usable)} resolvable pairs give folds with < 2 pairs; use a smaller k"
        )

    if spec.supervised:
        working = working_table(table, spec)
    else:
        fixed = reduce(table, spec).table

    def run_fold(job):
        split, fold = job
        test = usable.subset(split.fold_indices(fold), name=f"{ds.name}/fold{fold}")
        if spec.supervised:
            train = usable.subset(split.train_indices(fold), name=f"{ds.name}/train{fold}")
            model = fit_selection(working, train, spec)
            reduced = select_columns(working, top_k(model, spec.target_dim))
        else:
            reduced = fixed
        return _fold_score(reduced, test, spec.fold_case)

    splits = [kfold_split(usable, k, seed) for seed in trial_seeds]
    jobs = [(split, fold) for split in splits for fold in range(k)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            fold_scores = list(pool.map(run_fold, jobs))
    else:
        fold_scores = [run_fold(job) for job in jobs]

    per_trial = [math.fsum(fold_scores[t * k:(t + 1) * k]) / k for t in range(len(splits))]
    return EvalReport(
        dataset_name=ds.name,
        spearman=math.fsum(per_trial) / len(per_trial),
        kept_pairs=len(usable),
        skipped_oov=n_oov,
        skipped_zero=n_zero,
        method=spec.label,
        dim=spec.target_dim,
        per_fold=fold_scores,
        per_trial=per_trial,
        seeds=list(trial_seeds),
    )


def mean_pool(table: EmbeddingTable, tokens: Sequence[str], fold_case: bool = True) -> Optional[np.ndarray]:
    """Average of the vectors of the tokens found in ``table``."""
    rows = [resolve(table, t, fold_case) for t in tokens]
    rows = [r for r in rows if r is not None]
    if not rows:
        return None
    return table.matrix[rows].mean(axis=0)


REPORT_MAGIC = "# wordfs-report v1"


def format_report(reports: Sequence[EvalReport], provenance=None) -> str:
    """Key-value text: a ``[name]`` block per report, then optional provenance."""
    out = [REPORT_MAGIC]
    if provenance:
        out.append("[provenance]")
        out.extend(f"{key} = {value}" for key, value in provenance)
    for rep in reports:
        out.append(f"[{rep.dataset_name}]")
        out.extend(f"{key} = {value}" for key, value in rep.as_items())
    return "\n".join(out) + "\n"


CSV_FIELDS = ("method", "dim", "dataset", "spearman", "kept_pairs", "skipped_oov", "skipped_zero")


def format_csv(reports: Sequence[EvalReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rep in reports:
        writer.writerow([
            rep.method,
            "" if rep.dim is None else rep.dim,
            rep.dataset_name,
            f"{rep.spearman:.2f}",
            rep.kept_pairs,
            rep.skipped_oov,
            rep.skipped_zero,
        ])
    return buf.getvalue()


def average_report(reports: Sequence[EvalReport], name: str = "Avg") -> EvalReport:
    """Unweighted mean of the per-dataset scores."""
    first = reports[0]
    return EvalReport(
        dataset_name=name,
        spearman=math.fsum(r.spearman for r in reports) / len(reports),
        kept_pairs=sum(r.kept_pairs for r in reports),
        skipped_oov=sum(r.skipped_oov for r in reports),
        skipped_zero=sum(r.skipped_zero for r in reports),
        method=first.method,
        dim=first.dim,
    )
