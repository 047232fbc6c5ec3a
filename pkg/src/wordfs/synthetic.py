"""Synthetic tables with a known set of similarity-bearing dimensions.

Each supervised pair ``(a, b)`` gets a latent similarity ``z`` drawn from
``U(0, 1)``. On every signal dimension both words hold ``+1`` or ``-1``, and
``b`` copies the sign of ``a`` with probability ``(1 + z) / 2``; the product
``a_i b_i`` is therefore more often positive for similar pairs. Noise
dimensions are independent standard normal draws for every word, so their
products carry no information about ``z``. The label is ``z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from wordfs.embedding_store import EmbeddingTable
from wordfs.simdatasets import WordPair, WordPairDataset


@dataclass(frozen=True)
class PlantedProblem:
    table: EmbeddingTable
    pairs: WordPairDataset
    signal_dims: Tuple[int, ...]


def planted_problem(
    n_words: int = 1000,
    d: int = 60,
    n_signal: int = 10,
    n_pairs: int = 300,
    seed: int = 0,
    signal_dims=None,
) -> PlantedProblem:
    if 2 * n_pairs > n_words:
        raise ValueError("need two fresh words per pair")
    rng = np.random.default_rng(seed)
    if signal_dims is None:
        signal_dims = tuple(range(n_signal))
    signal_dims = tuple(int(j) for j in signal_dims)

    matrix = rng.standard_normal((n_words, d))
    z = rng.uniform(0.0, 1.0, n_pairs)
    sig = np.array(signal_dims)
    matrix[:, sig] = rng.choice([-1.0, 1.0], size=(n_words, len(sig)))
    for p in range(n_pairs):
        a, b = 2 * p, 2 * p + 1
        keep = rng.uniform(size=len(sig)) < (1.0 + z[p]) / 2.0
        matrix[b, sig] = np.where(keep, matrix[a, sig], -matrix[a, sig])

    tokens = [f"w{i:05d}" for i in range(n_words)]
    pairs = tuple(WordPair(tokens[2 * p], tokens[2 * p + 1], float(z[p])) for p in range(n_pairs))
    return PlantedProblem(
        table=EmbeddingTable.from_arrays(tokens, matrix),
        pairs=WordPairDataset("planted", pairs),
        signal_dims=signal_dims,
    )
