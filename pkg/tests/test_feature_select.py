import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import write
from oracles import naive_rft_loss, naive_spearman
from wordfs.errors import DomainError
from wordfs.feature_select import (
    RftConfig,
    SelectionModel,
    load_selection,
    rank_dimensions,
    rft_loss,
    rft_loss_flagged,
    save_selection,
    spearman_score,
    top_k,
)
from wordfs.pair_features import PairFeatureMatrix


def fm_of(columns, labels):
    features = np.column_stack(columns).astype(float)
    labels = np.asarray(labels, dtype=float)
    return PairFeatureMatrix(features, labels, tuple(range(len(labels))))


def test_default_four_bins():
    assert RftConfig().bins == 4
    assert RftConfig.from_bins(8).bin_exponent == 3
    for bad in (0, 1, 3, 6):
        with pytest.raises(DomainError):
            RftConfig.from_bins(bad)


def test_constant_labels_zero_loss(rng):
    assert rft_loss(rng.normal(size=20), np.full(20, 0.3)) == 0.0


def test_perfect_split():
    assert rft_loss([0, 0, 1, 1], [0, 0, 1, 1], RftConfig(2)) == 0.0


def test_constant_feature_returns_label_variance():
    y = np.array([0.0, 1.0, 2.0, 5.0])
    loss, flag = rft_loss_flagged(np.ones(4), y)
    assert flag
    assert loss == pytest.approx(np.var(y), abs=1e-15)


def test_rft_matches_oracle_exactly(rng):
    for _ in range(30):
        f = rng.standard_normal(50)
        y = rng.uniform(size=50)
        for k in (1, 2, 3):
            assert rft_loss(f, y, RftConfig(k)) == naive_rft_loss(f, y, 2 ** k)


def test_rft_errors():
    with pytest.raises(DomainError):
        rft_loss([1.0], [1.0])
    with pytest.raises(DomainError):
        rft_loss([1.0, np.inf], [1.0, 2.0])


vec = arrays(np.float64, 24, elements=st.floats(-10, 10))


@settings(max_examples=80, deadline=None)
@given(vec, vec, st.floats(0.01, 100), st.floats(-50, 50))
def test_rft_properties(f, y, scale, shift):
    l2, l4, l8 = (rft_loss(f, y, RftConfig(k)) for k in (1, 2, 3))
    var = math.fsum((y - y.mean()) ** 2) / y.size
    assert l4 <= var + 1e-12
    assert l8 <= l4 + 1e-15 and l4 <= l2 + 1e-15
    # Integer-valued features keep the affine map exact enough that no
    # sample crosses a threshold from rounding alone.
    fi = np.round(f)
    assert abs(rft_loss(3.0 * fi + 2.0, y) - rft_loss(fi, y)) <= 1e-12


def test_spearman_scorer():
    x = np.arange(6, dtype=float)
    assert spearman_score(x, x ** 2) == 1.0
    assert spearman_score(np.ones(6), x) == 0.0


def test_spearman_scorer_oracle(rng):
    for _ in range(20):
        f, y = rng.normal(size=40), rng.integers(0, 5, 40).astype(float)
        assert abs(spearman_score(f, y) - naive_spearman(f, y)) <= 1e-12


def test_rank_spearman_extremes():
    y = np.array([0.1, 0.5, 0.2, 0.9, 0.7])
    model = rank_dimensions(fm_of([y, -y, np.ones(5)], y), "spearman")
    assert model.ranking == (0, 1, 2)
    np.testing.assert_array_equal(model.scores, [1.0, -1.0, 0.0])
    assert model.degenerate_dims == {2}


def test_rank_rft_extremes():
    y = np.array([0.1, 0.5, 0.2, 0.9, 0.7])
    model = rank_dimensions(fm_of([y, -y, np.ones(5)], y), "rft")
    losses = [naive_rft_loss(c, y, 4) for c in (y, -y, np.ones(5))]
    np.testing.assert_array_equal(model.scores, losses)
    assert losses[0] < losses[2] and losses[1] < losses[2]
    assert model.ranking[-1] == 2


def test_rank_ties_by_index():
    y = np.array([0.3, 0.1, 0.8, 0.5])
    col = np.array([1.0, 2.0, 4.0, 3.0])
    for crit in ("rft", "spearman"):
        assert rank_dimensions(fm_of([col] * 5, y), crit).ranking == (0, 1, 2, 3, 4)


def test_degenerate_last_by_index():
    y = np.array([0.3, 0.1, 0.8, 0.5])
    good = np.array([1.0, 0.0, 3.0, 2.0])
    fm = fm_of([np.zeros(4), good, np.ones(4), -good], y)
    for crit in ("rft", "spearman"):
        assert rank_dimensions(fm, crit).ranking[-2:] == (0, 2)


def test_abs_variant():
    y = np.array([0.1, 0.5, 0.2, 0.9, 0.7])
    noise = np.array([1.0, 3.0, 2.0, 5.0, 0.0])
    fm = fm_of([noise, -y], y)
    assert rank_dimensions(fm, "spearman").ranking == (0, 1)
    assert rank_dimensions(fm, "spearman", use_abs=True).ranking == (1, 0)


def test_top_k():
    model = SelectionModel((2, 0, 1), np.zeros(3), "spearman")
    assert top_k(model, 3) == [2, 0, 1]
    assert top_k(model, 1) == [2]
    for bad in (0, 4):
        with pytest.raises(DomainError):
            top_k(model, bad)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["rft", "spearman"]))
def test_ranking_nested_and_permutation(seed, crit):
    rng = np.random.default_rng(seed)
    fm = fm_of(list(rng.normal(size=(9, 30)).round(1)), rng.uniform(size=30))
    model = rank_dimensions(fm, crit)
    assert sorted(model.ranking) == list(range(9))
    for k in range(1, 9):
        assert top_k(model, k) == top_k(model, k + 1)[:k]
    again = rank_dimensions(fm, crit, threads=4)
    assert again.ranking == model.ranking
    assert again.scores.tobytes() == model.scores.tobytes()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_spearman_ranking_label_transform(seed):
    rng = np.random.default_rng(seed)
    fm = fm_of(list(rng.normal(size=(6, 25))), rng.uniform(size=25))
    fm2 = PairFeatureMatrix(fm.features, np.exp(3 * fm.labels), fm.kept_pairs)
    assert rank_dimensions(fm, "spearman").ranking == rank_dimensions(fm2, "spearman").ranking


def test_sidecar_round_trip(tmp_path):
    y = np.array([0.1, 0.5, 0.2, 0.9, 0.7])
    model = rank_dimensions(fm_of([np.ones(5), y, -y], y), "rft", RftConfig(3))
    save_selection(model, tmp_path / "sel.txt")
    text = (tmp_path / "sel.txt").read_text().splitlines()
    assert text[0] == "# wordfs-selection v1"
    assert text[1] == "# criterion: rft" and text[2] == "# rft_bins: 8"
    back = load_selection(tmp_path / "sel.txt")
    assert back.ranking == model.ranking
    assert back.scores.tobytes() == model.scores.tobytes()
    assert back.degenerate_dims == model.degenerate_dims and back.bins == 8


def test_sidecar_rejects_garbage(tmp_path):
    from wordfs.errors import ParseError

    with pytest.raises(ParseError):
        load_selection(write(tmp_path / "x.txt", "hello\n"))
