"""Numerical maximization of ``x1`` under the matched-mean constraints.

The normalized problem fixes ``y1 = 1`` and ``0 <= y_j <= 1``; at level 2 the
sums and products of ``x`` and ``y`` agree, at level 3 the codimension-1
symmetric values agree too.  Three independent candidate sources feed the
maximum: structured interior critical points, boundary points with zeros,
and a penalty local search from random feasible starts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from ..tuples import NonnegTuple, codim1_symmetric, extremal_shape, signature
from .reduced import reduced_system_solve
from .sampling import feasible_pair_sample
from .types import (BOUNDARY_REDUCTION, PENALTY_SEARCH, STRUCTURED, ExtremalResult,
                    SearchConfig)

WITNESS_TOL = 1e-6
# penalty endpoints are only feasible to O(1/weight); judged on a looser scale
PENALTY_FEAS_TOL = 1e-6
PENALTY_EXCESS_TOL = 1e-6
_CLIP = 1e-12
_PRIORITY = {BOUNDARY_REDUCTION: 0, STRUCTURED: 1, PENALTY_SEARCH: 2}


@dataclass
class _Candidate:
    value: float
    x: np.ndarray
    y: np.ndarray
    method: str
    residual: float


def constraint_residual(x, y, level: int) -> float:
    """Largest mixed-relative mismatch among the level's matched quantities."""
    sx, sy = signature(x), signature(y)
    diffs = [abs(a - b) / max(1.0, abs(a), abs(b))
             for a, b in zip(sx.components(level), sy.components(level))]
    return float(max(diffs))


def _candidate(x, y, method, level):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return _Candidate(float(x.max()), x, y, method, constraint_residual(x, y, level))


# -- structured interior candidates ------------------------------------------

def _positive_roots(h, lo, hi, samples=4000):
    grid = np.geomspace(lo, hi, samples)
    vals = np.array([h(t) for t in grid])
    roots = [float(t) for t, v in zip(grid, vals) if v == 0]
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa * fb < 0:
            roots.append(brentq(h, a, b, xtol=1e-15, rtol=4e-16))
    return roots


def _three_mean_structured(n: int) -> list:
    # x = (x1, u, .., u); among y_2..y_n, k entries equal u and the rest equal 1
    out = []
    for k in range(n):
        if k == n - 1:
            # y = (1, u, .., u) forces x1 = 1 for every u
            u = 0.5
            out.append(([1.0] + [u] * (n - 1), [1.0] + [u] * (n - 1)))
            continue
        h = lambda u, k=k: u ** (k - n + 1) + (n - 1 - k) * u - (n - k)
        hi = 1.0 if k > 0 else float(n)
        for u in _positive_roots(h, 1e-6, hi) + [1.0]:
            x1 = u ** (k - n + 1)
            out.append(([x1] + [u] * (n - 1), [1.0] * (n - k) + [u] * k))
    return out


def _four_mean_structured(n: int, cfg: SearchConfig) -> list:
    out = []
    for r in range(1, n):
        for prof in reduced_system_solve(n, r, cfg):
            x, y = prof.tuples()
            out.append((x.values, y.values))
    return out


# -- boundary candidates -----------------------------------------------------

def _three_mean_boundary(n: int) -> list:
    # a zero in both tuples leaves only the sum constraint: x1 takes the whole sum
    out = []
    for zeros in range(1, n):
        y = [1.0] * (n - zeros) + [0.0] * zeros
        x = [float(n - zeros)] + [0.0] * (n - 1)
        out.append((x, y))
    return out


# -- penalty search ----------------------------------------------------------

def _elementary_grads(x: np.ndarray):
    n = x.size
    prefix = np.concatenate(([1.0], np.cumprod(x[:-1])))
    suffix = np.concatenate((np.cumprod(x[::-1][:-1])[::-1], [1.0]))
    dprod = prefix * suffix
    de = np.array([codim1_symmetric(np.delete(x, k)) for k in range(n)])
    return float(np.prod(x)), dprod, float(dprod.sum()), de


def _penalty_objective(z, n, level, mu):
    x = z[:n]
    y = np.concatenate(([1.0], z[n:]))
    px, dpx, ex, dex = _elementary_grads(x)
    py, dpy, ey, dey = _elementary_grads(y)
    res = [x.sum() - y.sum(), px - py, ex - ey][:level]
    gx = [np.ones(n), dpx, dex][:level]
    gy = [np.ones(n), dpy, dey][:level]
    val = -x[0] + mu * sum(r * r for r in res)
    grad = np.zeros_like(z)
    grad[0] -= 1.0
    for r, a, b in zip(res, gx, gy):
        grad[:n] += 2 * mu * r * a
        grad[n:] -= 2 * mu * r * b[1:]
    return val, grad


def _feasible_start(n, level, rng):
    for _ in range(200):
        pair = feasible_pair_sample(n, level, rng)
        if pair is not None:
            x, y = (t.as_array() for t in pair)
            scale = y.max()
            x = np.sort(x)[::-1] / scale
            y = np.sort(y)[::-1] / scale
            return np.concatenate((x, y[1:]))
    return np.concatenate((np.ones(n), np.ones(n - 1)))


def penalty_search(n: int, level: int, cfg: SearchConfig, lower: float = 0.0) -> list:
    """Quadratic-penalty local searches, one per restart.

    ``lower`` is a floor on every coordinate; a positive floor restricts the
    search to strictly positive tuples.  Returns one candidate per restart.
    """
    floor = max(lower, _CLIP)
    bounds = [(floor, float(n))] * n + [(floor, 1.0)] * (n - 1)
    out = []
    for k in range(cfg.restarts):
        rng = cfg.rng(n, level, k)
        z = np.clip(_feasible_start(n, level, rng), floor, None)
        z[:n] = np.minimum(z[:n], n)
        for mu in cfg.penalty_weight_schedule:
            sol = minimize(_penalty_objective, z, args=(n, level, mu), jac=True,
                           method="L-BFGS-B", bounds=bounds,
                           options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-12})
            z = sol.x
        x = z[:n]
        y = np.concatenate(([1.0], z[n:]))
        out.append(_candidate(x, y, PENALTY_SEARCH, level))
    return out


# -- assembly ----------------------------------------------------------------

def _select(cands, expected, n, level, cfg, extra_cert=None) -> ExtremalResult:
    feasible = [c for c in cands if c.residual <= cfg.tol]
    if not feasible:
        raise RuntimeError("no feasible candidate found")
    top = max(c.value for c in feasible)
    best = min((c for c in feasible if c.value >= top - cfg.tol),
               key=lambda c: _PRIORITY.get(c.method, 9))

    xs, ys = np.sort(best.x)[::-1], np.sort(best.y)[::-1]
    ex, ey = extremal_shape(n, level)
    witness_ok = bool(np.max(np.abs(xs - ex)) <= WITNESS_TOL and
                      np.max(np.abs(ys - ey)) <= WITNESS_TOL)
    above = [c for c in feasible if c.value > expected + cfg.tol]
    near = [c for c in cands if c.method == PENALTY_SEARCH and c.residual <= PENALTY_FEAS_TOL]
    penalty_excess = max((c.value - expected for c in near), default=None)
    penalty_ok = penalty_excess is None or penalty_excess <= PENALTY_EXCESS_TOL

    by_method = {}
    for c in cands:
        rec = by_method.setdefault(c.method, {"count": 0, "best": None, "best_residual": None,
                                              "feasible": 0})
        rec["count"] += 1
        rec["feasible"] += c.residual <= cfg.tol
        if rec["best"] is None or c.value > rec["best"]:
            rec["best"], rec["best_residual"] = c.value, c.residual

    cert = {
        "expected": expected,
        "gap": expected - best.value,
        "witness_residual": best.residual,
        "witness_matches_extremal": witness_ok,
        "exceeds_expected": len(above),
        "penalty_excess": penalty_excess,
        "methods": by_method,
        "passed": bool(abs(best.value - expected) <= cfg.tol and witness_ok and not above
                       and penalty_ok),
    }
    if extra_cert:
        cert.update(extra_cert)
    return ExtremalResult(best.value, NonnegTuple(tuple(xs)), NonnegTuple(tuple(ys)),
                          best.method, cert, n, level)


def three_mean_max(n: int, cfg: SearchConfig = SearchConfig(), penalty: bool = True) -> ExtremalResult:
    """Maximize ``x1`` when sums and products match; the optimum is ``n - 1``."""
    if n < 3:
        raise ValueError(f"three-mean problem needs n >= 3, got {n}")
    cands = [_candidate(x, y, STRUCTURED, 2) for x, y in _three_mean_structured(n)]
    cands += [_candidate(x, y, BOUNDARY_REDUCTION, 2) for x, y in _three_mean_boundary(n)]
    if penalty:
        cands += penalty_search(n, 2, cfg)
    return _select(cands, n - 1, n, 2, cfg)


def four_mean_max(n: int, cfg: SearchConfig = SearchConfig(), penalty: bool = True) -> ExtremalResult:
    """Maximize ``x1`` under all three matched quantities; the optimum is ``n - 2``.

    Boundary points carry a zero in both tuples; dropping it leaves a
    three-mean problem in dimension ``n - 1``, solved recursively.
    """
    if n < 4:
        raise ValueError(f"four-mean problem needs n >= 4, got {n}")
    cands = [_candidate(x, y, STRUCTURED, 3) for x, y in _four_mean_structured(n, cfg)]
    sub = three_mean_max(n - 1, cfg, penalty=penalty)
    bx = list(sub.witness_x.values) + [0.0]
    by = list(sub.witness_y.values) + [0.0]
    cands.append(_candidate(bx, by, BOUNDARY_REDUCTION, 3))
    if penalty:
        cands += penalty_search(n, 3, cfg)
    return _select(cands, n - 2, n, 3, cfg,
                   {"subproblem": {"n": n - 1, "value": sub.value, "passed": sub.certified}})


def extremal_max(n: int, level: int, cfg: SearchConfig = SearchConfig()) -> ExtremalResult:
    if level == 2:
        return three_mean_max(n, cfg)
    if level == 3:
        return four_mean_max(n, cfg)
    raise ValueError(f"level must be 2 or 3, got {level}")


def positive_penalty_best(n: int, cfg: SearchConfig, lower: float = 0.05) -> list:
    """Best ``x1`` per restart of the level-3 search restricted to entries >= lower."""
    return [c.value for c in penalty_search(n, 3, cfg, lower=lower)]
