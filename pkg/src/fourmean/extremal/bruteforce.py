"""Coarse mesh oracle for the normalized extremal problems.

The mesh runs over ``y = (1, y2, .., yn)`` with ``y_j`` on a uniform grid of
``[0, 1]`` and over the objective ``x1`` itself on the grid ``k / mesh``.  For
each node it decides exactly whether the remaining entries of ``x`` can be
completed:

* level 2: ``n - 1`` nonnegative numbers with sum ``S`` and product ``P`` exist
  iff ``S >= 0`` and ``0 <= P <= (S / (n-1))^(n-1)``;
* level 3 with ``n = 4``: three nonnegative numbers with prescribed elementary
  symmetric values ``a, b, c`` exist iff ``a, b, c >= 0`` and the cubic
  discriminant is ``>= 0``.

Neither test shares code with the structured or penalty searches.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np
from scipy.optimize import brentq

from ..tuples import NonnegTuple
from .types import BRUTE_FORCE, ExtremalResult, SearchConfig

_FEAS_TOL = 1e-9
_CHUNK = 4096


def _y_mesh(n: int, mesh: int) -> np.ndarray:
    grid = np.linspace(0.0, 1.0, mesh)
    tails = np.array(list(combinations_with_replacement(grid[::-1], n - 1)))
    return np.hstack((np.ones((tails.shape[0], 1)), tails))


def _mesh_signatures(y: np.ndarray):
    s = y.sum(axis=1)
    p = y.prod(axis=1)
    e = np.zeros(y.shape[0])
    for k in range(y.shape[1]):
        e += np.delete(y, k, axis=1).prod(axis=1)
    return s, p, e


def _feasible_level3(a, b, c):
    disc = 18 * a * b * c - 4 * a ** 3 * c + a ** 2 * b ** 2 - 4 * b ** 3 - 27 * c ** 2
    scale = np.maximum.reduce([np.ones_like(a), np.abs(a), np.sqrt(np.abs(b)),
                               np.cbrt(np.abs(c))]) ** 6
    return (a >= -_FEAS_TOL) & (b >= -_FEAS_TOL) & (c >= -_FEAS_TOL) & (disc >= -_FEAS_TOL * scale)


def _feasible_level2(rest_sum, rest_prod, m):
    s = np.maximum(rest_sum, 0.0)
    return (rest_sum >= -_FEAS_TOL) & (rest_prod >= -_FEAS_TOL) & \
        (rest_prod <= (s / m) ** m * (1 + _FEAS_TOL) + _FEAS_TOL)


def _node_feasible(level, n, S, P, E, X):
    if level == 3:
        a = S - X
        c = P / X
        b = (E - c) / X
        return _feasible_level3(a, b, c)
    return _feasible_level2(S - X, P / X, n - 1)


def _level2_completion(total: float, prod: float, m: int) -> list:
    total = max(total, 0.0)
    if prod <= 0 or total == 0:
        return [total] + [0.0] * (m - 1)
    # m-1 equal entries w and one entry total - (m-1) w
    h = lambda w: w ** (m - 1) * (total - (m - 1) * w) - prod
    w_max = total / m
    w = w_max if h(w_max) <= 0 else brentq(h, 0.0, w_max)
    return [total - (m - 1) * w] + [w] * (m - 1)


def brute_force_max(n: int, level: int, cfg: SearchConfig = SearchConfig()) -> ExtremalResult:
    """Largest mesh value of ``x1`` admitting a feasible completion."""
    if level == 3 and n != 4:
        raise ValueError("the level-3 mesh oracle is implemented for n = 4 only")
    if level == 2 and not 3 <= n <= 5:
        raise ValueError("the level-2 mesh oracle supports 3 <= n <= 5")
    if level not in (2, 3):
        raise ValueError(f"level must be 2 or 3, got {level}")
    mesh = cfg.mesh
    y = _y_mesh(n, mesh)
    s, p, e = _mesh_signatures(y)
    x1 = np.arange(1, n * mesh + 1) / mesh

    X = x1[None, :]
    best_per_y = np.full(y.shape[0], -np.inf)
    feasible_nodes = 0
    for lo in range(0, y.shape[0], _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        ok = _node_feasible(level, n, s[sl, None], p[sl, None], e[sl, None], X)
        feasible_nodes += int(ok.sum())
        best_per_y[sl] = np.where(ok, X, -np.inf).max(axis=1)
    k = int(np.argmax(best_per_y))
    value = float(best_per_y[k])

    if level == 3:
        c = p[k] / value
        rest = np.roots([1.0, -(s[k] - value), (e[k] - c) / value, -c])
        rest = np.clip(np.sort(rest.real)[::-1], 0.0, None).tolist()
    else:
        rest = _level2_completion(s[k] - value, p[k] / value, n - 1)
    witness_x = NonnegTuple((value, *rest))
    witness_y = NonnegTuple(tuple(y[k]))
    cert = {"mesh": mesh, "x1_step": 1.0 / mesh, "nodes": int(y.shape[0] * x1.size),
            "feasible_nodes": feasible_nodes, "expected": n - level + 1,
            "passed": bool(np.isfinite(value))}
    return ExtremalResult(value, witness_x, witness_y, BRUTE_FORCE, cert, n, level)
