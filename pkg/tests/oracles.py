"""Slow reference implementations used only by the tests.

Each oracle follows a different route from the package code it checks:
pure-Python loops instead of numpy, covariance eigensolves instead of SVD,
O(m^2) ranking instead of sorting.
"""
import math

import numpy as np


def naive_ranks(values):
    values = [float(v) for v in values]
    ranks = []
    for v in values:
        below = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        # Positions below+1 .. below+equal, averaged.
        ranks.append(below + (equal + 1) / 2.0)
    return ranks


def naive_pearson(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        return 0.0
    return sxy / math.sqrt(sxx * syy)


def naive_spearman(x, y):
    return naive_pearson(naive_ranks(x), naive_ranks(y))


def naive_cosine(a, b):
    dot = sum(float(x) * float(y) for x, y in zip(a, b))
    na = math.sqrt(sum(float(x) ** 2 for x in a))
    nb = math.sqrt(sum(float(y) ** 2 for y in b))
    return dot / (na * nb)


def covariance_pca(matrix, r):
    """Top-r eigenvectors of the explicit sample covariance, sign-normalized."""
    matrix = np.asarray(matrix, dtype=np.float64)
    n, d = matrix.shape
    mean = [sum(matrix[:, j]) / n for j in range(d)]
    centered = matrix - np.array(mean)
    cov = np.zeros((d, d))
    for i in range(d):
        for j in range(i, d):
            cov[i, j] = cov[j, i] = float(np.dot(centered[:, i], centered[:, j])) / (n - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:r]
    comps = evecs[:, order].T.copy()
    for row in comps:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            row *= -1
    return comps, evals[order]


def _side_mse(ys):
    if not ys:
        return 0.0
    mu = math.fsum(ys) / len(ys)
    return math.fsum((y - mu) * (y - mu) for y in ys) / len(ys)


def naive_rft_loss(feature, labels, bins):
    """Enumerate the bins-1 uniform thresholds; left side is f <= t."""
    f = [float(v) for v in feature]
    y = [float(v) for v in labels]
    lo, hi = min(f), max(f)
    if lo == hi:
        return _side_mse(y)
    best = math.inf
    for b in range(1, bins):
        t = lo + (b / bins) * (hi - lo)
        left = [yy for ff, yy in zip(f, y) if ff <= t]
        right = [yy for ff, yy in zip(f, y) if ff > t]
        loss = (len(left) * _side_mse(left) + len(right) * _side_mse(right)) / len(f)
        best = min(best, loss)
    return best
