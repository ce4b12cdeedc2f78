"""Shared test helpers."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from angleopt import LineConfig, WeightMode


def random_unit_rows(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """n random unit vectors in R^m, resampled away from the zero vector."""
    out = np.empty((n, m))
    for i in range(n):
        while True:
            v = rng.standard_normal(m)
            norm = np.linalg.norm(v)
            if norm > 1e-6:
                out[i] = v / norm
                break
    return out


def random_rotation(rng: np.random.Generator, m: int) -> np.ndarray:
    """Haar-ish random element of SO(m) via QR with sign fixing."""
    a = rng.standard_normal((m, m))
    q, r = np.linalg.qr(a)
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def uniform_probability_config(points: np.ndarray) -> LineConfig:
    n = len(points)
    w = Fraction(1, n)
    return LineConfig([(row, w) for row in points], WeightMode.PROBABILITY)
