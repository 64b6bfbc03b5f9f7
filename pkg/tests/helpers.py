"""Shared instance builders for the test suite."""

import numpy as np

from ttp2 import Instance


def euclid_weights(m, seed, scale=1000.0):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, scale, (m, 2))
    return np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))


def unit_weights(m):
    return np.ones((m, m)) - np.eye(m)


def pair_cluster_instance(n, couples):
    """Euclidean instance whose optimal team matching is the consecutive
    pairs (0,1), (2,3), ... and whose optimal pairing of those pairs is
    exactly ``couples``.

    Three separation scales force uniqueness: ~1 between members of a
    team pair, ~1e3 between the two pair-centers of a couple, ~1e6
    between couples.
    """
    m = n // 2
    centers = {}
    for k, (i, j) in enumerate(couples):
        base = np.array([1e6 * (k + 1), 1e6 * (k + 1) ** 2])
        centers[i] = base
        centers[j] = base + np.array([1e3 + 17.0 * k, 13.0 * k])
    pts = np.zeros((n, 2))
    for p in range(m):
        off = np.array([1.0 + 0.01 * p, 0.0])
        pts[2 * p] = centers[p] - off
        pts[2 * p + 1] = centers[p] + off
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    return Instance(n=n, dist=d)


def block_as_days(fixtures):
    """Group a block's fixtures into consecutive day lists."""
    days = {}
    for f in fixtures:
        days.setdefault(f.day, []).append(f)
    return [days[k] for k in sorted(days)]
