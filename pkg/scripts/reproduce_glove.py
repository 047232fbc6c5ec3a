"""Word-similarity experiments on GloVe-6B-300d.

Needs the GloVe text file and a directory with the twelve similarity files
(wordvectors.org naming, e.g. ``EN-MC-30.txt``). Nothing is downloaded.

    python scripts/reproduce_glove.py --glove glove.6B.300d.txt --simdir data/ \
        --table aggregated --dims 150 100 50
"""
import argparse
import os
import time

from wordfs.embedding_store import load_embeddings
from wordfs.evaluation import average_report, cross_validate, eval_similarity, format_csv
from wordfs.pipelines import ReductionSpec
from wordfs.simdatasets import load_pairs, save_pairs, scale_and_aggregate

SIM_FILES = (
    "EN-MC-30.txt", "EN-MEN-TR-3k.txt", "EN-MTurk-287.txt", "EN-MTurk-771.txt",
    "EN-RG-65.txt", "EN-RW-STANFORD.txt", "EN-SIMLEX-999.txt", "EN-VERB-143.txt",
    "EN-WS-353-ALL.txt", "EN-WS-353-REL.txt", "EN-WS-353-SIM.txt", "EN-YP-130.txt",
)

# Reference aggregated-dataset scores for GloVe-6B-300d, shown next to each run.
REFERENCE_AGG = {
    ("raw", 300): 45.74,
    ("pca-algo", 150): 53.48, ("pca-algo", 100): 49.35, ("pca-algo", 50): 42.61,
    ("wordfs-p-woP", 150): 48.23, ("wordfs-p-woP", 100): 48.39, ("wordfs-p-woP", 50): 48.22,
    ("wordfs-p-wP", 150): 54.69, ("wordfs-p-wP", 100): 52.60, ("wordfs-p-wP", 50): 47.29,
    ("wordfs-s-woP", 150): 55.85, ("wordfs-s-woP", 100): 54.45, ("wordfs-s-woP", 50): 49.32,
    ("wordfs-s-wP", 150): 56.76, ("wordfs-s-wP", 100): 54.73, ("wordfs-s-wP", 50): 50.11,
}


def method_specs(k):
    yield ReductionSpec("pca-algo", k)
    for method in ("wordfs-p", "wordfs-s"):
        for use_ppa in (False, True):
            yield ReductionSpec(method, k, use_ppa=use_ppa)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--glove", required=True)
    ap.add_argument("--simdir", required=True)
    ap.add_argument("--table", choices=["aggregated", "per-dataset"], default="aggregated")
    ap.add_argument("--dims", type=int, nargs="+", default=[150, 100, 50])
    ap.add_argument("--seeds", default="0,1,2,3,4")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()
    seeds = [int(s) for s in args.seeds.split(",")]

    t0 = time.perf_counter()
    table = load_embeddings(args.glove, "glove-text")
    print(f"loaded {table.n_words} x {table.d} in {time.perf_counter() - t0:.1f} s")
    datasets = [load_pairs(os.path.join(args.simdir, f)) for f in SIM_FILES]
    reports = []

    if args.table == "aggregated":
        agg = scale_and_aggregate(datasets)
        save_pairs(agg, "aggregated_pairs.txt")
        print(f"aggregated dataset: {len(agg)} unique pairs")
        raw = eval_similarity(table, agg)
        raw.method, raw.dim = "raw", table.d
        reports.append(raw)
        print(f"raw-300: {raw.spearman:.2f} (reference {REFERENCE_AGG[('raw', 300)]})")
        for k in args.dims:
            for spec in method_specs(k):
                rep = cross_validate(table, agg, spec, 5, seeds, threads=args.threads)
                reports.append(rep)
                ref = REFERENCE_AGG.get((spec.label, k))
                print(f"{spec.label}-{k}: {rep.spearman:.2f} (reference {ref})")
    else:
        rows = [eval_similarity(table, ds) for ds in datasets]
        for r in rows:
            r.method, r.dim = "raw", table.d
        reports.extend(rows + [average_report(rows)])
        for k in args.dims:
            for spec in method_specs(k):
                rows = [cross_validate(table, ds, spec, 5, seeds, threads=args.threads) for ds in datasets]
                reports.extend(rows + [average_report(rows)])
        for r in reports:
            print(f"{r.method:<14} {r.dim!s:>4} {r.dataset_name:<20} {r.spearman:6.2f}")

    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(format_csv(reports))


if __name__ == "__main__":
    main()
