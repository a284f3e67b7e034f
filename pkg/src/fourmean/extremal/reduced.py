"""The three-equation system left after the Lagrange reduction.

An interior critical point of the level-3 problem has ``x = (x1, u, .., u)``
and ``y`` made of ``n - r`` ones and ``r`` copies of ``v``.  The constraints
then read::

    x1 + (n-1) u        = n - r + r v
    x1 u^(n-1)          = v^r
    1/x1 + (n-1)/u      = n - r + r/v

(1, 1, 1) always solves it.  The Jacobian there has rank 1, so double
precision Newton only gets within ~1e-8 of it; converged iterates are
therefore polished in extended precision before they are reported.
"""

from __future__ import annotations

import mpmath
import numpy as np

from .types import CandidateProfile, SearchConfig

_NEWTON_ITERS = 200
_HALVINGS = 30
_DEDUP = 1e-7
_POLISH_DPS = 50
_POLISH_ITERS = 120
_BOUNDARY = 1e-4


def reduced_system_residual(p: CandidateProfile) -> tuple:
    n, r = p.n, p.r
    if p.x1 == 0 or p.u == 0 or p.v == 0:
        raise ZeroDivisionError("reciprocal residual needs x1, u, v > 0")
    return _residual(n, r, p.x1, p.u, p.v)


def _residual(n, r, x1, u, v):
    return (x1 + (n - 1) * u - (n - r) - r * v,
            x1 * u ** (n - 1) - v ** r,
            1 / x1 + (n - 1) / u - (n - r) - r / v)


def _jacobian(n, r, x1, u, v):
    return [[1, n - 1, -r],
            [u ** (n - 1), (n - 1) * x1 * u ** (n - 2), -r * v ** (r - 1)],
            [-1 / x1 ** 2, -(n - 1) / u ** 2, r / v ** 2]]


def _in_domain(z) -> bool:
    return z[0] > 0 and z[1] > 0 and 0 < z[2] <= 1


def _newton(n, r, z0):
    z = np.array(z0, dtype=float)
    f = np.array(_residual(n, r, *z))
    norm = np.linalg.norm(f)
    for _ in range(_NEWTON_ITERS):
        if norm <= 1e-15:
            break
        jac = np.array(_jacobian(n, r, *z), dtype=float)
        step = np.linalg.lstsq(jac, f, rcond=None)[0]
        lam = 1.0
        for _ in range(_HALVINGS):
            trial = z - lam * step
            if _in_domain(trial):
                ft = np.array(_residual(n, r, *trial))
                nt = np.linalg.norm(ft)
                if nt < norm:
                    break
            lam *= 0.5
        else:
            break
        z, f, norm = trial, ft, nt
    return z, norm


def _polish(n, r, z):
    with mpmath.workdps(_POLISH_DPS):
        x = mpmath.matrix([mpmath.mpf(float(c)) for c in z])
        tiny = mpmath.mpf(10) ** (-(_POLISH_DPS - 10))
        for _ in range(_POLISH_ITERS):
            f = mpmath.matrix(_residual(n, r, *x))
            if mpmath.norm(f) <= tiny:
                break
            jac = mpmath.matrix(_jacobian(n, r, *x))
            try:
                step = mpmath.lu_solve(jac, f)
            except ZeroDivisionError:
                break
            lam = mpmath.mpf(1)
            for _ in range(_HALVINGS):
                trial = x - lam * step
                if trial[0] > 0 and trial[1] > 0 and 0 < trial[2] <= 1:
                    if mpmath.norm(mpmath.matrix(_residual(n, r, *trial))) < mpmath.norm(f):
                        break
                lam /= 2
            else:
                break
            x = trial
        res = float(mpmath.norm(mpmath.matrix(_residual(n, r, *x))))
        return np.array([float(c) for c in x]), res


def _random_start(rng, n):
    return (rng.uniform(1e-3, n), rng.uniform(1e-3, 2.0), rng.uniform(1e-3, 1.0))


def reduced_system_solve(n: int, r: int, cfg: SearchConfig = SearchConfig(),
                         starts=None) -> list:
    """Multi-start damped Newton over ``(x1, u, v)``; returns distinct roots.

    Each restart draws its start from a private generator keyed on
    ``(cfg.seed, n, r, restart)``.  ``starts`` overrides the random starts.
    """
    return solve_detailed(n, r, cfg, starts)["roots"]


def solve_detailed(n: int, r: int, cfg: SearchConfig = SearchConfig(), starts=None) -> dict:
    """Like :func:`reduced_system_solve`, also reporting boundary drift.

    Iterates whose residual is small while some coordinate approaches zero
    are following a path out of the open domain rather than converging to a
    root; they are returned under ``boundary_limits`` and never as roots.
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    if not 1 <= r <= n - 1:
        raise ValueError(f"r must lie in 1..{n - 1}")
    if starts is None:
        starts = [_random_start(cfg.rng(n, r, k), n) for k in range(cfg.restarts)]

    roots, boundary, failed = [], [], 0
    for z0 in starts:
        if not _in_domain(z0):
            failed += 1
            continue
        z, norm = _newton(n, r, z0)
        if norm > 1e-8:
            failed += 1
            continue
        if min(z) < _BOUNDARY:
            boundary.append(tuple(float(c) for c in z))
            continue
        # a float residual of exactly 0 can still sit ~1e-6 from the singular root
        z, norm = _polish(n, r, z)
        if norm > 1e-30 or not _in_domain(z):
            failed += 1
            continue
        if any(np.linalg.norm(z - q) < _DEDUP for q in roots):
            continue
        roots.append(z)
    profiles = [CandidateProfile(float(z[0]), float(z[1]), min(float(z[2]), 1.0), r, n)
                for z in roots]
    return {"roots": profiles, "boundary_limits": boundary, "not_converged": failed}


def reduced_sweep(n_values, cfg: SearchConfig, x1_tol: float = 1e-8,
                  v_tol: float = 1e-8) -> dict:
    """Sweep every admissible ``r`` and collect roots that beat ``x1 = 1``."""
    rows, violations = [], []
    for n in n_values:
        for r in range(1, n):
            out = solve_detailed(n, r, cfg)
            roots = out["roots"]
            bad = [p for p in roots if p.v < 1 - v_tol and p.x1 > 1 + x1_tol]
            violations.extend(bad)
            rows.append({"n": n, "r": r, "starts": cfg.restarts, "roots": len(roots),
                         "max_x1": max((p.x1 for p in roots), default=None),
                         "boundary_limits": len(out["boundary_limits"]),
                         "not_converged": out["not_converged"],
                         "violations": len(bad)})
    return {"rows": rows, "violations": [p.to_json() for p in violations],
            "passed": not violations}
