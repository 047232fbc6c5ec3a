"""Filter feature selection over embedding dimensions.

Two criteria score each column of a :class:`PairFeatureMatrix`:

``rft``
    Best weighted two-segment MSE of the labels over ``B - 1`` uniformly
    spaced thresholds (lower is better).
``spearman``
    Spearman correlation between the column and the labels (higher is
    better).

Sums inside :func:`rft_loss` go through :func:`math.fsum`, which is
correctly rounded and therefore independent of summation order and thread
count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from wordfs.errors import DomainError, ParseError
from wordfs.linalg_core import spearman_corr
from wordfs.pair_features import PairFeatureMatrix

CRITERIA = ("rft", "spearman")


@dataclass(frozen=True)
class RftConfig:
    """``bin_exponent`` k gives ``B = 2**k`` uniform segments."""

    bin_exponent: int = 2

    def __post_init__(self):
        if int(self.bin_exponent) != self.bin_exponent or self.bin_exponent < 1:
            raise DomainError(f"bin exponent must be a positive integer, got {self.bin_exponent!r}")

    @property
    def bins(self) -> int:
        return 2 ** self.bin_exponent

    @classmethod
    def from_bins(cls, bins: int) -> "RftConfig":
        if bins < 2 or bins & (bins - 1):
            raise DomainError(f"number of bins must be a power of two >= 2, got {bins}")
        return cls(bin_exponent=bins.bit_length() - 1)


def _mse(y: np.ndarray) -> float:
    n = y.size
    if n == 0:
        return 0.0
    mu = math.fsum(y) / n
    dev = y - mu
    return math.fsum(dev * dev) / n


def _check_pair(feature, labels) -> Tuple[np.ndarray, np.ndarray]:
    f = np.asarray(feature, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if f.ndim != 1 or f.shape != y.shape:
        raise DomainError("feature and labels must be 1-D vectors of equal length")
    if f.size < 2:
        raise DomainError("at least 2 samples are required")
    if not (np.all(np.isfinite(f)) and np.all(np.isfinite(y))):
        raise DomainError("feature and labels must be finite")
    return f, y


def rft_thresholds(lo: float, hi: float, bins: int) -> List[float]:
    return [lo + (b / bins) * (hi - lo) for b in range(1, bins)]


def rft_loss_flagged(feature, labels, config: RftConfig = RftConfig()) -> Tuple[float, bool]:
    """RFT loss plus a flag that is true for a constant feature."""
    f, y = _check_pair(feature, labels)
    lo, hi = float(f.min()), float(f.max())
    if lo == hi:
        return _mse(y), True
    n = f.size
    best = math.inf
    for t in rft_thresholds(lo, hi, config.bins):
        left = f <= t
        y_left, y_right = y[left], y[~left]
        n_left, n_right = y_left.size, y_right.size
        # An empty side has weight zero.
        loss = (n_left * _mse(y_left) + n_right * _mse(y_right)) / n
        if loss < best:
            best = loss
    return best, False


def rft_loss(feature, labels, config: RftConfig = RftConfig()) -> float:
    return rft_loss_flagged(feature, labels, config)[0]


def spearman_score_flagged(feature, labels) -> Tuple[float, bool]:
    f, y = _check_pair(feature, labels)
    return spearman_corr(f, y, with_flag=True)


def spearman_score(feature, labels) -> float:
    return spearman_score_flagged(feature, labels)[0]


@dataclass(frozen=True)
class SelectionModel:
    ranking: Tuple[int, ...]
    scores: np.ndarray
    criterion: str
    degenerate_dims: FrozenSet[int] = frozenset()
    bins: Optional[int] = None
    use_abs: bool = False

    @property
    def d(self) -> int:
        return len(self.ranking)


def order_dimensions(scores: Sequence[float], degenerate: Sequence[bool], criterion: str, use_abs: bool = False) -> List[int]:
    """Best-first dimension order.

    Ties keep lower indices first; degenerate dimensions go last by index.
    """
    live = [j for j in range(len(scores)) if not degenerate[j]]
    dead = [j for j in range(len(scores)) if degenerate[j]]
    if criterion == "rft":
        live.sort(key=lambda j: scores[j])
    elif use_abs:
        live.sort(key=lambda j: -abs(scores[j]))
    else:
        live.sort(key=lambda j: -scores[j])
    return live + dead


def rank_dimensions(
    fm: PairFeatureMatrix,
    criterion: str = "spearman",
    config: RftConfig = RftConfig(),
    *,
    use_abs: bool = False,
    threads: int = 1,
) -> SelectionModel:
    """Score every column of ``fm`` and sort best-first.

    ``use_abs`` ranks Spearman scores by magnitude instead of signed value.
    ``threads`` only changes wall time; every column is scored independently
    and the sort happens once at the end.
    """
    if criterion not in CRITERIA:
        raise DomainError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")
    if fm.m < 2:
        raise DomainError(f"need at least 2 supervised pairs, got {fm.m}")
    columns = np.ascontiguousarray(fm.features.T)
    labels = fm.labels

    if criterion == "rft":
        def score(j):
            return rft_loss_flagged(columns[j], labels, config)
    else:
        def score(j):
            return spearman_score_flagged(columns[j], labels)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(score, range(fm.d)))
    else:
        results = [score(j) for j in range(fm.d)]

    scores = np.array([r[0] for r in results], dtype=np.float64)
    degenerate = [r[1] for r in results]
    ranking = order_dimensions(scores, degenerate, criterion, use_abs)
    return SelectionModel(
        ranking=tuple(ranking),
        scores=scores,
        criterion=criterion,
        degenerate_dims=frozenset(j for j, flag in enumerate(degenerate) if flag),
        bins=config.bins if criterion == "rft" else None,
        use_abs=use_abs if criterion == "spearman" else False,
    )


def top_k(model: SelectionModel, k: int) -> List[int]:
    if not 1 <= k <= model.d:
        raise DomainError(f"K={k} outside [1, {model.d}]")
    return list(model.ranking[:k])


SIDECAR_MAGIC = "# wordfs-selection v1"


def save_selection(model: SelectionModel, path) -> None:
    """Write ``dim_index score`` lines, best first, under a ``#`` header."""
    lines = [
        SIDECAR_MAGIC,
        f"# criterion: {model.criterion}",
        f"# rft_bins: {model.bins if model.bins is not None else '-'}",
        f"# abs: {'true' if model.use_abs else 'false'}",
        f"# d: {model.d}",
        "# degenerate: " + " ".join(str(j) for j in sorted(model.degenerate_dims)),
    ]
    for j in model.ranking:
        lines.append(f"{j} {float(model.scores[j])!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_selection(path) -> SelectionModel:
    header = {}
    ranking: List[int] = []
    values: List[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if lineno == 1:
                if line != SIDECAR_MAGIC:
                    raise ParseError("not a selection sidecar", path, lineno)
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                header[key.strip()] = value.strip()
                continue
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected 'dim_index score'", path, lineno)
            try:
                ranking.append(int(parts[0]))
                values.append(float(parts[1]))
            except ValueError:
                raise ParseError("malformed entry", path, lineno) from None
    d = len(ranking)
    if sorted(ranking) != list(range(d)):
        raise ParseError("ranking is not a permutation of 0..d-1", path)
    scores = np.empty(d, dtype=np.float64)
    scores[ranking] = values
    bins = header.get("rft_bins", "-")
    degenerate = header.get("degenerate", "")
    return SelectionModel(
        ranking=tuple(ranking),
        scores=scores,
        criterion=header.get("criterion", "spearman"),
        degenerate_dims=frozenset(int(t) for t in degenerate.split()),
        bins=None if bins == "-" else int(bins),
        use_abs=header.get("abs") == "true",
    )
