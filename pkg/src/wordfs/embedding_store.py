"""Word-embedding tables and their text file formats.

Two formats are supported:

- ``glove-text``: one ``token v1 v2 ... vd`` line per word.
- ``word2vec-text``: the same, preceded by a ``n_words d`` header line.

Values are held as float64. Files are written with the shortest decimal
representation that round-trips, so ``load(save(t))`` is bit-exact.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from wordfs.errors import DomainError, ParseError

logger = logging.getLogger(__name__)

FORMATS = ("glove-text", "word2vec-text")


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable vocabulary plus an ``n_words x d`` float64 matrix.

    Build instances with :meth:`from_arrays`, which validates the invariants
    and freezes the matrix buffer.
    """

    tokens: Tuple[str, ...]
    matrix: np.ndarray
    index: Dict[str, int] = field(repr=False)
    n_duplicates: int = 0

    @classmethod
    def from_arrays(cls, tokens: Iterable[str], matrix, n_duplicates: int = 0, *, copy: bool = True) -> "EmbeddingTable":
        """Validate and freeze. ``copy=False`` adopts a float64 array in place."""
        tokens = tuple(tokens)
        if copy or not isinstance(matrix, np.ndarray) or matrix.dtype != np.float64:
            matrix = np.array(matrix, dtype=np.float64, copy=True)
        if matrix.ndim != 2:
            raise DomainError(f"matrix must be 2-D, got shape {matrix.shape}")
        if matrix.shape[0] != len(tokens):
            raise DomainError(
                f"{len(tokens)} tokens but matrix has {matrix.shape[0]} rows"
            )
        if matrix.shape[1] < 1 and len(tokens) > 0:
            raise DomainError("dimension must be positive")
        if not np.isfinite(matrix).all():
            raise DomainError("matrix contains NaN or Inf")
        index = {tok: i for i, tok in enumerate(tokens)}
        if len(index) != len(tokens):
            raise DomainError("tokens must be unique")
        matrix.setflags(write=False)
        return cls(tokens=tokens, matrix=matrix, index=index, n_duplicates=n_duplicates)

    @property
    def n_words(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return self.n_words

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def with_matrix(self, matrix, *, copy: bool = True) -> "EmbeddingTable":
        """Same vocabulary, new values (row count must match)."""
        if matrix.shape[0] != self.n_words:
            raise DomainError(f"{self.n_words} tokens but matrix has {matrix.shape[0]} rows")
        if copy or matrix.dtype != np.float64:
            matrix = np.array(matrix, dtype=np.float64, copy=True)
        if not np.isfinite(matrix).all():
            raise DomainError("matrix contains NaN or Inf")
        matrix.setflags(write=False)
        # The vocabulary is unchanged, so the index is shared rather than rebuilt.
        return EmbeddingTable(self.tokens, matrix, self.index, 0)


def _split_fields(raw: str) -> List[str]:
    # Only ASCII space delimits; tokens may contain other whitespace (e.g. NBSP).
    return raw.rstrip("\r\n").rstrip(" ").split(" ")


def load_embeddings(path, format: str = "glove-text", limit: Optional[int] = None) -> EmbeddingTable:
    """Parse an embedding file.

    ``d`` is taken from the first data line. With ``limit``, only the first
    ``limit`` rows are kept. Duplicate tokens keep their first occurrence and
    are counted in ``EmbeddingTable.n_duplicates``.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    if limit is not None and limit < 1:
        raise ValueError("limit must be a positive integer")

    tokens: List[str] = []
    rows: List[np.ndarray] = []
    seen = set()
    n_dup = 0
    d = None
    header_n = None
    n_data = 0

    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            fields = _split_fields(raw)
            if fields == [""]:
                continue
            if format == "word2vec-text" and header_n is None:
                if len(fields) != 2:
                    raise ParseError("expected header 'n_words d'", path, lineno)
                try:
                    header_n, d = int(fields[0]), int(fields[1])
                except ValueError:
                    raise ParseError(f"non-integer header {raw.strip()!r}", path, lineno) from None
                if header_n < 0 or d < 1:
                    raise ParseError(f"invalid header {raw.strip()!r}", path, lineno)
                continue
            if limit is not None and n_data >= limit:
                break
            if len(fields) < 2:
                raise ParseError("line has no vector values", path, lineno)
            if d is None:
                d = len(fields) - 1
            elif len(fields) - 1 != d:
                raise ParseError(
                    f"expected {d} values, found {len(fields) - 1}", path, lineno
                )
            try:
                vec = np.array(fields[1:], dtype=np.float64)
            except ValueError:
                raise ParseError("non-numeric value", path, lineno) from None
            if not np.all(np.isfinite(vec)):
                raise ParseError("non-finite value", path, lineno)
            n_data += 1
            tok = fields[0]
            if tok in seen:
                n_dup += 1
                continue
            seen.add(tok)
            tokens.append(tok)
            rows.append(vec)

    if not tokens:
        raise ParseError("no embeddings found (empty file)", path)
    if (
        format == "word2vec-text"
        and limit is None
        and header_n is not None
        and n_data != header_n
    ):
        raise ParseError(f"header announces {header_n} rows but file has {n_data}", path)
    if n_dup:
        logger.warning("%s: skipped %d duplicate token(s)", path, n_dup)
    return EmbeddingTable.from_arrays(tokens, np.vstack(rows), n_duplicates=n_dup, copy=False)


def format_row(values) -> str:
    # repr() of a Python float is the shortest string that round-trips.
    return " ".join(map(repr, values))


def save_embeddings(table: EmbeddingTable, path, format: str = "glove-text") -> None:
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    if table.n_words == 0:
        raise DomainError("refusing to write an empty table")
    for tok in table.tokens:
        if " " in tok or "\n" in tok or not tok:
            raise DomainError(f"token {tok!r} cannot be written in a text format")
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        if format == "word2vec-text":
            fh.write(f"{table.n_words} {table.d}\n")
        for tok, row in zip(table.tokens, table.matrix.tolist()):
            fh.write(tok)
            fh.write(" ")
            fh.write(format_row(row))
            fh.write("\n")
    os.replace(tmp, path)


def lookup(table: EmbeddingTable, token: str, fold_case: bool = True) -> Optional[np.ndarray]:
    """Row vector for ``token``, retrying lower-cased when ``fold_case``."""
    row = resolve(table, token, fold_case)
    if row is None:
        return None
    return table.matrix[row]


def resolve(table: EmbeddingTable, token: str, fold_case: bool = True) -> Optional[int]:
    row = table.index.get(token)
    if row is None and fold_case:
        row = table.index.get(token.lower())
    return row


def select_columns(table: EmbeddingTable, dims: Sequence[int]) -> EmbeddingTable:
    """Keep columns ``dims`` in the given order."""
    dims = [int(j) for j in dims]
    if not dims:
        raise DomainError("at least one column must be selected")
    if len(set(dims)) != len(dims):
        raise DomainError("duplicate column index")
    bad = [j for j in dims if j < 0 or j >= table.d]
    if bad:
        raise DomainError(f"column index {bad[0]} out of range for d={table.d}")
    return table.with_matrix(table.matrix[:, dims], copy=False)
