import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import make_table, write
from wordfs.embedding_store import (
    EmbeddingTable,
    load_embeddings,
    lookup,
    save_embeddings,
    select_columns,
)
from wordfs.errors import DomainError, ParseError


def test_glove_three_lines(tmp_path):
    p = write(tmp_path / "e.txt", "a 1 2 3 4\nb 5 6 7 8\nc 0 0 0 1.5\n")
    t = load_embeddings(p, "glove-text")
    assert (t.n_words, t.d) == (3, 4)
    assert t.tokens == ("a", "b", "c")
    assert t.matrix[2, 3] == 1.5


def test_word2vec_header(tmp_path):
    p = write(tmp_path / "e.vec", "2 3\nx 1 2 3\ny 4 5 6\n")
    t = load_embeddings(p, "word2vec-text")
    assert (t.n_words, t.d) == (2, 3)


def test_word2vec_header_count_mismatch(tmp_path):
    p = write(tmp_path / "e.vec", "3 3\nx 1 2 3\ny 4 5 6\n")
    with pytest.raises(ParseError):
        load_embeddings(p, "word2vec-text")


def test_short_row_names_line(tmp_path):
    p = write(tmp_path / "e.txt", "a 1 2 3\nb 1 2\n")
    with pytest.raises(ParseError) as err:
        load_embeddings(p)
    assert err.value.line == 2
    assert ":2:" in str(err.value)


def test_non_numeric(tmp_path):
    p = write(tmp_path / "e.txt", "a 1 2 3\nb 1 x 3\n")
    with pytest.raises(ParseError, match="non-numeric"):
        load_embeddings(p)


def test_empty_file(tmp_path):
    p = write(tmp_path / "e.txt", "")
    with pytest.raises(ParseError):
        load_embeddings(p)


def test_limit_and_duplicates(tmp_path):
    p = write(tmp_path / "e.txt", "a 1 2\na 3 4\nb 5 6\nc 7 8\n")
    t = load_embeddings(p, limit=3)
    assert t.tokens == ("a", "b")
    assert t.n_duplicates == 1
    np.testing.assert_array_equal(t.matrix[0], [1, 2])


def test_crlf_and_trailing_space(tmp_path):
    p = tmp_path / "e.txt"
    p.write_bytes(b"a 1 2 \r\nb 3 4\r\n")
    t = load_embeddings(p)
    assert t.d == 2 and t.tokens == ("a", "b")


def test_nbsp_stays_inside_token(tmp_path):
    p = write(tmp_path / "e.txt", "a\u00a0b 1 2\n")
    assert load_embeddings(p).tokens == ("a\u00a0b",)


@pytest.mark.parametrize("fmt", ["glove-text", "word2vec-text"])
def test_round_trip_point_one(tmp_path, fmt):
    t = EmbeddingTable.from_arrays(["x", "y"], [[0.1, 1 / 3], [-2.5e-300, 7.0]])
    save_embeddings(t, tmp_path / "o.txt", fmt)
    back = load_embeddings(tmp_path / "o.txt", fmt)
    assert back.tokens == t.tokens
    assert back.matrix[0, 0] == 0.1
    np.testing.assert_array_equal(back.matrix, t.matrix)


def test_save_empty_table(tmp_path):
    t = EmbeddingTable.from_arrays([], np.zeros((0, 3)))
    with pytest.raises(DomainError):
        save_embeddings(t, tmp_path / "o.txt")


def test_save_writes_lf(tmp_path):
    save_embeddings(make_table([[1.0, 2.0]]), tmp_path / "o.txt")
    assert b"\r" not in (tmp_path / "o.txt").read_bytes()


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 5)), elements=finite))
def test_round_trip_property(tmp_path_factory, matrix):
    t = make_table(matrix, prefix="tok")
    path = tmp_path_factory.mktemp("rt") / "e.txt"
    save_embeddings(t, path)
    back = load_embeddings(path)
    assert back.tokens == t.tokens
    assert back.matrix.tobytes() == t.matrix.tobytes()


def test_invariants_rejected():
    with pytest.raises(DomainError):
        EmbeddingTable.from_arrays(["a", "a"], np.zeros((2, 2)))
    with pytest.raises(DomainError):
        EmbeddingTable.from_arrays(["a"], [[np.nan]])
    t = make_table([[1.0, 2.0]])
    with pytest.raises(ValueError):
        t.matrix[0, 0] = 3.0


def test_lookup():
    t = EmbeddingTable.from_arrays(["dog", "Cat"], [[1.0, 0.0], [0.0, 1.0]])
    np.testing.assert_array_equal(lookup(t, "dog", False), [1.0, 0.0])
    np.testing.assert_array_equal(lookup(t, "Dog", True), [1.0, 0.0])
    assert lookup(t, "Dog", False) is None
    assert lookup(t, "bird", True) is None
    # Folding only lowers the query.
    assert lookup(t, "cat", True) is None
    before = t.matrix.copy()
    lookup(t, "dog")
    np.testing.assert_array_equal(t.matrix, before)


def test_select_columns_cases():
    t = make_table([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    np.testing.assert_array_equal(select_columns(t, [0, 1, 2]).matrix, t.matrix)
    np.testing.assert_array_equal(select_columns(t, [2, 0]).matrix, [[3.0, 1.0], [6.0, 4.0]])
    assert select_columns(t, [2, 0]).tokens == t.tokens
    with pytest.raises(DomainError):
        select_columns(t, [3])
    with pytest.raises(DomainError):
        select_columns(t, [1, 1])


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_select_columns_composes(data):
    d = data.draw(st.integers(2, 8))
    p = data.draw(st.permutations(range(d)).map(list))
    p = p[: data.draw(st.integers(1, d))]
    q = data.draw(st.permutations(range(len(p))).map(list))
    q = q[: data.draw(st.integers(1, len(p)))]
    t = make_table(np.arange(3 * d, dtype=float).reshape(3, d))
    twice = select_columns(select_columns(t, p), q)
    once = select_columns(t, [p[j] for j in q])
    np.testing.assert_array_equal(twice.matrix, once.matrix)
