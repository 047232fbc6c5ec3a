import numpy as np
import pytest

from conftest import make_table
from wordfs.errors import DomainError
from wordfs.linalg_core import fit_pca
from wordfs.postprocess import PpaConfig, ppa, ppa_matrix


def test_default_is_seven():
    assert PpaConfig().top_d == 7
    with pytest.raises(DomainError):
        PpaConfig(0)


def test_invariants_random(rng):
    t = make_table(rng.standard_normal((200, 20)) + 3.0)
    out, basis = ppa_matrix(t.matrix, 7)
    assert np.abs(out.mean(axis=0)).max() <= 1e-10
    norms = np.maximum(1.0, np.linalg.norm(t.matrix - t.matrix.mean(0), axis=1))
    proj = np.abs(out @ basis.components.T)
    assert np.all(proj <= 1e-8 * norms[:, None])
    res = ppa(t, PpaConfig(7))
    assert res.tokens == t.tokens and res.d == t.d


def test_exact_rank_gives_zero(rng):
    # Mean plus a rank-3 signal: removing 3 components leaves nothing.
    m = rng.standard_normal((50, 3)) @ rng.standard_normal((3, 8)) + rng.standard_normal(8)
    out = ppa(make_table(m), PpaConfig(3)).matrix
    assert np.abs(out).max() <= 1e-10


def test_planted_directions_removed(rng):
    n, d = 1000, 20
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    planted = q[:, :7].T
    strengths = np.array([100.0, 90, 80, 70, 60, 50, 40])
    m = (rng.standard_normal((n, 7)) * strengths) @ planted + 0.01 * rng.standard_normal((n, d))
    out = ppa(make_table(m), PpaConfig(7)).matrix
    centered = m - m.mean(0)
    for u in planted:
        before = np.var(centered @ u)
        after = np.var(out @ u)
        assert after < 1e-12 * before


def test_second_pass_keeps_first_subspace_clear(rng):
    t = make_table(rng.standard_normal((300, 15)) * np.linspace(5, 1, 15))
    out1, b1 = ppa_matrix(t.matrix, 4)
    out2, _ = ppa_matrix(out1, 4)
    assert np.abs(out2 @ b1.components.T).max() <= 1e-8


def test_too_small():
    with pytest.raises(DomainError):
        ppa(make_table(np.eye(7)), PpaConfig(7))
    with pytest.raises(DomainError):
        ppa(make_table(np.ones((3, 9))), PpaConfig(7))
