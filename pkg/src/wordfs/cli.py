"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 numeric or
domain error. No environment variables are consulted and nothing is random
beyond the explicit ``--seeds``.
"""
from __future__ import annotations

import argparse
import hashlib
import logging
import sys
from typing import List, Optional

from wordfs import __version__
from wordfs.embedding_store import FORMATS, load_embeddings, save_embeddings
from wordfs.errors import DomainError, ParseError
from wordfs.evaluation import (
    DEFAULT_FOLDS,
    DEFAULT_SEEDS,
    average_report,
    cross_validate,
    eval_similarity,
    format_csv,
    format_report,
)
from wordfs.feature_select import RftConfig, save_selection
from wordfs.pipelines import METHODS, ReductionSpec, reduce
from wordfs.postprocess import DEFAULT_PPA_D, PpaConfig, ppa
from wordfs.simdatasets import aggregate, load_pairs, minmax_scale, save_pairs, scale_and_aggregate

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed_list(text):
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers, got {text!r}") from None
    if not seeds:
        raise argparse.ArgumentTypeError("at least one seed is required")
    return seeds


def _add_common(p):
    p.add_argument("--format", choices=FORMATS, default="glove-text", help="input embedding format")
    p.add_argument("--threads", type=_positive_int, default=1, help="cap on worker threads (results do not depend on it)")
    p.add_argument("--fold-case", action=argparse.BooleanOptionalAction, default=True,
                   help="retry lower-cased tokens on lookup misses")


def _add_method_flags(p):
    p.add_argument("--ppa", action=argparse.BooleanOptionalAction, default=True,
                   help="post-process before selection (wordfs methods)")
    p.add_argument("--ppa-d", type=_positive_int, default=DEFAULT_PPA_D, help="principal components removed by PPA")
    p.add_argument("--rft-bins", type=int, default=4, help="RFT segments, a power of two")
    p.add_argument("--abs", dest="use_abs", action="store_true",
                   help="rank spearman scores by magnitude")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordfs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wordfs {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", help="reduce embedding dimension")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--dim", type=_positive_int, required=True)
    p.add_argument("--pairs", action="extend", nargs="+", default=[],
                   help="supervision files; several are scaled and aggregated")
    _add_method_flags(p)
    p.add_argument("--output", required=True)
    p.add_argument("--output-format", choices=FORMATS, default=None)
    p.add_argument("--selection-out", default=None, help="write the dimension ranking sidecar here")
    p.add_argument("--report", default=None, help="write the provenance report here")

    p = sub.add_parser("eval", help="word-similarity evaluation")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.add_argument("--pairs", action="extend", nargs="+", required=True)
    p.add_argument("--cv", action="store_true", help="cross-validate a reduction method")
    p.add_argument("--method", choices=METHODS, default=None)
    p.add_argument("--dim", type=_positive_int, default=None)
    p.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    p.add_argument("--seeds", type=_seed_list, default=list(DEFAULT_SEEDS))
    _add_method_flags(p)
    p.add_argument("--report", default=None)
    p.add_argument("--csv", default=None)

    p = sub.add_parser("aggregate", help="scale and merge similarity datasets")
    p.add_argument("--inputs", action="extend", nargs="+", default=[])
    p.add_argument("--output", required=True)
    p.add_argument("--threads", type=_positive_int, default=1)

    p = sub.add_parser("ppa", help="post-process an embedding file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=FORMATS, default="glove-text")
    p.add_argument("--ppa-d", type=_positive_int, default=DEFAULT_PPA_D)
    p.add_argument("--threads", type=_positive_int, default=1)
    return parser


def _validate(args):
    """Flag checks that must pass before any file is opened."""
    if args.command in ("reduce", "eval"):
        try:
            args.rft_config = RftConfig.from_bins(args.rft_bins)
        except DomainError as exc:
            raise UsageError(f"--rft-bins: {exc}") from None
    if args.command == "reduce":
        if args.method in ("wordfs-p", "wordfs-s") and not args.pairs:
            raise UsageError(f"--method {args.method} requires at least one --pairs file")
    elif args.command == "eval":
        if args.cv:
            if args.method is None or args.dim is None:
                raise UsageError("--cv requires --method and --dim")
            if args.folds < 2:
                raise UsageError("--folds must be at least 2")
        elif args.method is not None or args.dim is not None:
            raise UsageError("--method/--dim only apply with --cv")
    elif args.command == "aggregate":
        if not args.inputs:
            raise UsageError("--inputs needs at least one file")


def _spec(args) -> ReductionSpec:
    return ReductionSpec(
        method=args.method,
        target_dim=args.dim,
        use_ppa=args.ppa,
        ppa=PpaConfig(args.ppa_d),
        rft=args.rft_config,
        fold_case=args.fold_case,
        use_abs=args.use_abs,
    )


def _digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


_INPUT_FLAGS = ("input", "pairs", "inputs")
_HIDDEN = {"command", "threads", "verbose", "rft_config", "handler"}


def provenance(args) -> List[tuple]:
    """Version, flags, seeds and input digests.

    ``--threads`` is left out on purpose: it cannot change any result, and
    leaving it out keeps output byte-identical across thread counts.
    """
    items = [("version", __version__), ("command", args.command)]
    for key in sorted(vars(args)):
        if key in _HIDDEN:
            continue
        value = getattr(args, key)
        if isinstance(value, list):
            value = ",".join(map(str, value))
        items.append((f"flag.{key}", value))
    if getattr(args, "seeds", None) is not None and getattr(args, "cv", False):
        items.append(("seeds", ",".join(map(str, args.seeds))))
    for key in _INPUT_FLAGS:
        value = getattr(args, key, None)
        if value is None:
            continue
        for path in value if isinstance(value, list) else [value]:
            items.append((f"sha256[{path}]", _digest(path)))
    return items


def _print_provenance(items, out):
    out.write("== provenance ==\n")
    for key, value in items:
        out.write(f"{key}: {value}\n")


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_reduce(args, out) -> int:
    spec = _spec(args)
    table = load_embeddings(args.input, args.format)
    ds = None
    if args.pairs:
        sets = [load_pairs(p) for p in args.pairs]
        ds = sets[0] if len(sets) == 1 else scale_and_aggregate(sets)
    result = reduce(table, spec, ds, threads=args.threads)
    save_embeddings(result.table, args.output, args.output_format or args.format)
    if args.selection_out and result.model is not None:
        save_selection(result.model, args.selection_out)
    prov = provenance(args)
    prov.append(("output.n_words", result.table.n_words))
    prov.append(("output.dim", result.table.d))
    if result.model is not None:
        prov.append(("selected_dims", " ".join(map(str, result.model.ranking[: spec.target_dim]))))
    _print_provenance(prov, out)
    if args.report:
        _write_text(args.report, format_report([], prov))
    return EXIT_OK


def _format_table(reports) -> str:
    width = max(len("dataset"), *(len(r.dataset_name) for r in reports))
    lines = [f"{'dataset':<{width}}  {'method':<14} {'dim':>5} {'spearman':>9} {'pairs':>7} {'oov':>6}"]
    for r in reports:
        dim = "-" if r.dim is None else str(r.dim)
        lines.append(
            f"{r.dataset_name:<{width}}  {r.method:<14} {dim:>5} {r.spearman:>9.2f} {r.kept_pairs:>7} {r.skipped_oov:>6}"
        )
    return "\n".join(lines) + "\n"


def cmd_eval(args, out) -> int:
    spec = _spec(args) if args.cv else None
    table = load_embeddings(args.input, args.format)
    datasets = [load_pairs(p) for p in args.pairs]
    reports = []
    for ds in datasets:
        if spec is None:
            rep = eval_similarity(table, ds, args.fold_case)
        else:
            rep = cross_validate(table, ds, spec, args.folds, args.seeds, threads=args.threads)
        reports.append(rep)
    if len(reports) > 1:
        reports.append(average_report(reports))
    prov = provenance(args)
    _print_provenance(prov, out)
    out.write(_format_table(reports))
    if args.report:
        _write_text(args.report, format_report(reports, prov))
    if args.csv:
        _write_text(args.csv, format_csv(reports))
    return EXIT_OK


def cmd_aggregate(args, out) -> int:
    scaled = []
    for path in args.inputs:
        try:
            scaled.append(minmax_scale(load_pairs(path)))
        except DomainError as exc:
            raise DomainError(f"{path}: {exc}") from None
    merged = aggregate(scaled)
    save_pairs(merged, args.output)
    _print_provenance(provenance(args), out)
    out.write(f"unique pairs: {len(merged)}\n")
    return EXIT_OK


def cmd_ppa(args, out) -> int:
    table = load_embeddings(args.input, args.format)
    result = ppa(table, PpaConfig(args.ppa_d))
    save_embeddings(result, args.output, args.format)
    _print_provenance(provenance(args), out)
    return EXIT_OK


COMMANDS = {"reduce": cmd_reduce, "eval": cmd_eval, "aggregate": cmd_aggregate, "ppa": cmd_ppa}


def _blas_limit(threads):
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # pragma: no cover
        import contextlib

        return contextlib.nullcontext()
    return threadpool_limits(limits=threads)


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        _validate(args)
    except UsageError as exc:
        print(f"wordfs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with _blas_limit(args.threads):
            return COMMANDS[args.command](args, out)
    except (ParseError, FileNotFoundError, IsADirectoryError, PermissionError, UnicodeDecodeError) as exc:
        print(f"wordfs {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"wordfs {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
