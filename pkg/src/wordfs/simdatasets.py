"""Word-similarity pair datasets: parsing, scaling, aggregation, fold splits.

Fold splits are produced by a Fisher-Yates shuffle driven by SplitMix64, so
the same ``(n, k, seed)`` yields the same assignment on every platform and
in any language that implements the same two routines.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from wordfs.errors import DomainError, ParseError

_SEP = re.compile(r"\t| +")
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class WordPair:
    word1: str
    word2: str
    score: float


@dataclass(frozen=True)
class WordPairDataset:
    name: str
    pairs: Tuple[WordPair, ...]

    def __len__(self):
        return len(self.pairs)

    @property
    def scores(self) -> np.ndarray:
        return np.array([p.score for p in self.pairs], dtype=np.float64)

    def subset(self, indices: Iterable[int], name=None) -> "WordPairDataset":
        return WordPairDataset(name or self.name, tuple(self.pairs[i] for i in indices))


def load_pairs(path, name=None) -> WordPairDataset:
    """Read ``word1 word2 score`` lines (tab or space separated).

    Blank lines and lines starting with ``#`` are skipped.
    """
    pairs = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n").strip()
            if not line or line.startswith("#"):
                continue
            fields = [f for f in _SEP.split(line) if f != ""]
            if len(fields) != 3:
                raise ParseError(f"expected 3 fields, found {len(fields)}", path, lineno)
            try:
                score = float(fields[2])
            except ValueError:
                raise ParseError(f"non-numeric score {fields[2]!r}", path, lineno) from None
            if not np.isfinite(score):
                raise ParseError(f"non-finite score {fields[2]!r}", path, lineno)
            pairs.append(WordPair(fields[0], fields[1], score))
    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
    return WordPairDataset(name, tuple(pairs))


def save_pairs(ds: WordPairDataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in ds.pairs:
            fh.write(f"{p.word1}\t{p.word2}\t{p.score!r}\n")


def minmax_scale(ds: WordPairDataset) -> WordPairDataset:
    scores = ds.scores
    if scores.size == 0:
        raise DomainError(f"dataset {ds.name!r} is empty")
    lo, hi = float(scores.min()), float(scores.max())
    if lo == hi:
        raise DomainError(f"dataset {ds.name!r} has constant scores; cannot scale")
    span = hi - lo
    pairs = tuple(
        WordPair(p.word1, p.word2, min(1.0, max(0.0, (p.score - lo) / span)))
        for p in ds.pairs
    )
    return WordPairDataset(ds.name, pairs)


def pair_key(word1: str, word2: str) -> Tuple[str, str]:
    a, b = word1.lower(), word2.lower()
    return (a, b) if a <= b else (b, a)


def aggregate(datasets: Sequence[WordPairDataset], name: str = "aggregated") -> WordPairDataset:
    """Merge datasets; pairs sharing an unordered, case-folded key are averaged.

    The first occurrence of a key fixes its output position and spelling.
    """
    first: Dict[Tuple[str, str], WordPair] = {}
    scores: Dict[Tuple[str, str], List[float]] = {}
    for ds in datasets:
        for p in ds.pairs:
            key = pair_key(p.word1, p.word2)
            if key not in first:
                first[key] = p
                scores[key] = []
            scores[key].append(p.score)
    pairs = tuple(
        WordPair(p.word1, p.word2, float(np.mean(scores[key])))
        for key, p in first.items()
    )
    return WordPairDataset(name, pairs)


def scale_and_aggregate(datasets: Sequence[WordPairDataset], name: str = "aggregated") -> WordPairDataset:
    return aggregate([minmax_scale(ds) for ds in datasets], name=name)


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood 2014); 64-bit outputs."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection (no modulo bias)."""
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


def seeded_permutation(n: int, seed: int) -> List[int]:
    """Fisher-Yates: for i = n-1 down to 1, swap i with j drawn from [0, i]."""
    perm = list(range(n))
    rng = SplitMix64(seed)
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


@dataclass(frozen=True)
class FoldSplit:
    seed: int
    k: int
    assignments: Tuple[int, ...]

    def fold_indices(self, fold: int) -> List[int]:
        return [i for i, f in enumerate(self.assignments) if f == fold]

    def train_indices(self, fold: int) -> List[int]:
        return [i for i, f in enumerate(self.assignments) if f != fold]

    def fold_sizes(self) -> List[int]:
        return [self.assignments.count(f) for f in range(self.k)]


def kfold_split(ds, k: int, seed: int) -> FoldSplit:
    """Shuffle pair indices with the seeded permutation, deal round-robin."""
    n = ds if isinstance(ds, int) else len(ds)
    if k < 2:
        raise DomainError(f"need k >= 2 folds, got {k}")
    if n < k:
        raise DomainError(f"{n} pairs cannot fill {k} folds")
    assignments = [0] * n
    for pos, idx in enumerate(seeded_permutation(n, seed)):
        assignments[idx] = pos % k
    return FoldSplit(seed=seed, k=k, assignments=tuple(assignments))
