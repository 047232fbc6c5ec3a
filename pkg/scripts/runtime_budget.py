"""Time a WordFS-S-wP reduction to 150 dimensions.

Uses the given embedding file, or a random 400000 x 300 table of the same
shape as GloVe-6B-300d when none is given.
"""
import argparse
import time

import numpy as np

from wordfs.embedding_store import EmbeddingTable, load_embeddings
from wordfs.pipelines import ReductionSpec, reduce_wordfs
from wordfs.simdatasets import WordPair, WordPairDataset, load_pairs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--embeddings", default=None)
    ap.add_argument("--pairs", default=None)
    ap.add_argument("--dim", type=int, default=150)
    ap.add_argument("--method", default="wordfs-s", choices=["wordfs-s", "wordfs-p"])
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    if args.embeddings:
        t0 = time.perf_counter()
        table = load_embeddings(args.embeddings)
        print(f"load: {time.perf_counter() - t0:.1f} s")
    else:
        table = EmbeddingTable.from_arrays(
            [f"w{i}" for i in range(400_000)], rng.standard_normal((400_000, 300)), copy=False
        )
    if args.pairs:
        ds = load_pairs(args.pairs)
    else:
        idx = rng.integers(0, min(table.n_words, 20_000), (7705, 2))
        ds = WordPairDataset("random", tuple(
            WordPair(table.tokens[a], table.tokens[b], float(rng.uniform())) for a, b in idx
        ))
    t0 = time.perf_counter()
    reduce_wordfs(table, ds, ReductionSpec(args.method, args.dim, use_ppa=True))
    print(f"{args.method}-wP to {args.dim}: {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
