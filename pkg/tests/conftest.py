"""Shared fixtures and seeded instance generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from tukeydepth.model import PointSet, build_system
from tukeydepth.oracle import GeneralPositionError, oracle_depth_general


def gaussian_system(seed: int, n: int, d: int, query=None):
    """Seeded Gaussian cloud shifted against the query (default origin),
    re-drawn until the enumeration oracle accepts it as general position."""

    for attempt in range(40):
        rng = np.random.default_rng(seed + 7919 * attempt)
        pts = rng.normal(size=(n, d))
        q = np.zeros(d) if query is None else np.asarray(query, dtype=float)
        sys_ = build_system(PointSet(d, pts, q))
        try:
            depth = oracle_depth_general(sys_)
        except GeneralPositionError:
            continue
        return sys_, depth, pts
    raise RuntimeError(f"no general-position draw for seed={seed} n={n} d={d}")


def outside_hull_system(seed: int, n: int, d: int):
    """Cloud with the query pushed strictly outside its convex hull."""

    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, d))
    direction = rng.normal(size=d)
    direction /= np.linalg.norm(direction)
    margin = 1.0 + rng.uniform(0.5, 2.0)
    q = direction * (float(np.max(pts @ direction)) + margin)
    return build_system(PointSet(d, pts, q))


@pytest.fixture
def simplex_sys():
    return build_system(PointSet(2, [[1, 0], [0, 1], [-1, -1]], [0, 0]))


@pytest.fixture
def square_sys():
    return build_system(
        PointSet(2, [[1, 1], [1, -1], [-1, 1], [-1, -1]], [0, 0]))


@pytest.fixture
def outside_sys():
    return build_system(PointSet(2, [[1, 0], [2, 0], [3, 1]], [0, 5]))
