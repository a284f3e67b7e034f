"""Random pairs of positive tuples with matching signatures.

A pair is built by drawing ``y`` and all but ``k`` entries of ``x``
(``k = 3`` at level 3, ``k = 2`` at level 2).  The missing entries are then
forced: their elementary symmetric values are fixed by the constraints, so
they are the roots of a monic cubic (or quadratic), found here from the
eigenvalues of its companion matrix.
"""

from __future__ import annotations

import numpy as np

from ..tuples import (NonnegTuple, codim1_symmetric, corollary_check, signature,
                      signatures_match)

SAMPLER_TOL = 1e-9
_IMAG_TOL = 1e-9


def completion_coeffs(free, target, level: int) -> list:
    """Monic coefficients (descending) whose roots complete ``free`` to ``target``.

    ``target`` is a MeanSignature.  Requires every free entry to be nonzero.
    """
    free = np.asarray(free, dtype=float)
    pf = float(np.prod(free))
    if pf == 0:
        raise ValueError("free entries must be nonzero")
    e1 = target.s - float(np.sum(free))
    e_top = target.p / pf
    if level == 2:
        return [1.0, -e1, e_top]
    if level == 3:
        e2 = (target.e - e_top * codim1_symmetric(free)) / pf
        return [1.0, -e1, e2, -e_top]
    raise ValueError(f"level must be 2 or 3, got {level}")


def companion_roots(desc_coeffs) -> np.ndarray:
    c = np.asarray(desc_coeffs, dtype=float)
    k = c.size - 1
    m = np.zeros((k, k))
    m[1:, :-1] = np.eye(k - 1)
    m[:, -1] = -c[:0:-1] / c[0]
    return np.linalg.eigvals(m)


def complete_tuple(free, target, level: int):
    """Solve for the forced entries; return the full x, or None if infeasible."""
    roots = companion_roots(completion_coeffs(free, target, level))
    scale = max(1.0, float(np.max(np.abs(roots))))
    if np.any(np.abs(roots.imag) > _IMAG_TOL * scale):
        return None
    re = roots.real
    if np.any(re < 0):
        return None
    return np.concatenate((np.sort(re)[::-1], np.asarray(free, dtype=float)))


def feasible_pair_sample(n: int, level: int, rng_seed=None):
    """Draw one positive pair matching at ``level``, or None on rejection.

    ``y`` has ``y1 = 1`` and the rest uniform on (0, 1]; the free entries of
    ``x`` are uniform on (0, 1].  ``rng_seed`` may be an int or a Generator.
    """
    if level not in (2, 3):
        raise ValueError(f"level must be 2 or 3, got {level}")
    if n < level + 1:
        raise ValueError(f"level {level} needs n >= {level + 1}, got {n}")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)

    y = np.concatenate(([1.0], 1.0 - rng.random(n - 1)))
    free = 1.0 - rng.random(n - level)
    target = signature(y)
    x = complete_tuple(free, target, level)
    if x is None or np.any(x <= 0):
        return None
    if not signatures_match(signature(x), target, SAMPLER_TOL, level):
        return None
    return NonnegTuple(tuple(x)), NonnegTuple(tuple(y))


def sample_pairs(n: int, level: int, count: int, seed: int = 0, max_attempts=None) -> dict:
    """Collect ``count`` accepted pairs from one seeded stream."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, level]))
    max_attempts = max_attempts or 100 * count
    pairs, attempts = [], 0
    while len(pairs) < count and attempts < max_attempts:
        attempts += 1
        pair = feasible_pair_sample(n, level, rng)
        if pair is not None:
            pairs.append(pair)
    return {"pairs": pairs, "attempts": attempts,
            "acceptance_rate": len(pairs) / attempts if attempts else 0.0}


def bulk_bound_run(n: int, level: int, count: int, seed: int = 0) -> dict:
    """Check the strict max (and, at level 3, min) ratio bound on sampled pairs."""
    out = sample_pairs(n, level, count, seed)
    bound = n - level + 1
    max_violations, min_violations, worst = 0, 0, 0.0
    for x, y in out["pairs"]:
        xa, ya = x.as_array(), y.as_array()
        worst = max(worst, xa.max() / ya.max())
        if level == 3:
            max_ok, min_ok = corollary_check(x, y)
        else:
            max_ok, min_ok = bool(xa.max() < bound * ya.max()), True
        max_violations += not max_ok
        min_violations += not min_ok
    return {"n": n, "level": level, "accepted": len(out["pairs"]),
            "attempts": out["attempts"], "acceptance_rate": out["acceptance_rate"],
            "bound": bound, "worst_ratio": worst, "max_violations": max_violations,
            "min_violations": min_violations,
            "passed": len(out["pairs"]) == count and max_violations == min_violations == 0}
