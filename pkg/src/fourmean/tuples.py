"""Nonnegative tuples, their mean signatures, and the max-ratio bounds.

Two N-tuples with equal sums have ``max x <= N max y``.  Matching products as
well tightens this to ``N - 1``, and matching the codimension-1 elementary
symmetric value on top of that tightens it to ``N - 2``.  The helpers here
compute the matched quantities and classify a pair against the bound for a
given matching level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_TOL = 1e-9

STRICT = "strict"
EQUALITY_CASE = "equality_case"
VIOLATED = "violated"
DEGENERATE_ZERO = "degenerate_zero"


class DimensionMismatch(ValueError):
    pass


class SignatureMismatch(ValueError):
    """The tuples do not share the signature components required by a level."""


class ZeroEntryError(ValueError):
    pass


@dataclass(frozen=True)
class NonnegTuple:
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 3:
            raise ValueError(f"need at least 3 entries, got {len(vals)}")
        for v in vals:
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"entries must be finite and >= 0, got {v!r}")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def scaled(self, c: float) -> "NonnegTuple":
        return NonnegTuple(tuple(c * v for v in self.values))

    def sorted_desc(self) -> tuple:
        return tuple(sorted(self.values, reverse=True))

    def to_json(self) -> list:
        return list(self.values)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


TupleLike = Union[NonnegTuple, Sequence[float], np.ndarray]


def as_tuple(t: TupleLike) -> NonnegTuple:
    if isinstance(t, NonnegTuple):
        return t
    return NonnegTuple(tuple(np.asarray(t, dtype=float).ravel()))


@dataclass(frozen=True)
class MeanSignature:
    n: int
    s: float
    p: float
    e: float

    def components(self, level: int = 3) -> tuple:
        return (self.s, self.p, self.e)[:level]

    def to_json(self) -> dict:
        return {"n": self.n, "sum": self.s, "product": self.p, "codim1": self.e}

    @classmethod
    def from_json(cls, d: dict) -> "MeanSignature":
        return cls(int(d["n"]), float(d["sum"]), float(d["product"]), float(d["codim1"]))


def codim1_symmetric(values: Iterable[float]) -> float:
    """Return ``sum_k prod_{j != k} x_j`` using prefix and suffix products.

    No division is performed, so entries equal to zero are handled exactly:
    with a single zero at index k the result is the product of the others.
    """
    x = np.asarray(list(values), dtype=float)
    if x.size == 0:
        return 0.0
    prefix = np.concatenate(([1.0], np.cumprod(x[:-1])))
    suffix = np.concatenate((np.cumprod(x[::-1][:-1])[::-1], [1.0]))
    return float(np.sum(prefix * suffix))


def signature(t: TupleLike) -> MeanSignature:
    t = as_tuple(t)
    x = t.as_array()
    return MeanSignature(t.n, float(np.sum(x)), float(np.prod(x)), codim1_symmetric(x))


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def signatures_match(a: MeanSignature, b: MeanSignature, tol: float = DEFAULT_TOL,
                     level: int = 3) -> bool:
    """Compare the first ``level`` components of (sum, product, codim1).

    Each component uses the mixed test ``|a - b| <= tol * max(1, |a|, |b|)``.
    """
    if a.n != b.n:
        raise DimensionMismatch(f"signature sizes differ: {a.n} vs {b.n}")
    if level not in (1, 2, 3):
        raise ValueError(f"level must be 1, 2 or 3, got {level}")
    return all(_close(u, v, tol) for u, v in zip(a.components(level), b.components(level)))


def classical_means(t: TupleLike) -> tuple:
    """Arithmetic, geometric and harmonic mean of a tuple.

    Raises ZeroEntryError when the tuple has a zero entry, since the harmonic
    mean is then undefined; use :func:`arithmetic_geometric` in that case.
    """
    t = as_tuple(t)
    am, gm = arithmetic_geometric(t)
    x = t.as_array()
    if np.any(x == 0):
        raise ZeroEntryError("harmonic mean requires strictly positive entries (zero entry)")
    hm = t.n / float(np.sum(1.0 / x))
    return am, gm, hm


def arithmetic_geometric(t: TupleLike) -> tuple:
    t = as_tuple(t)
    x = t.as_array()
    return float(np.mean(x)), float(np.prod(x)) ** (1.0 / t.n)


@dataclass(frozen=True)
class BoundVerdict:
    level: int
    bound: float
    ratio: float
    status: str

    @property
    def ok(self) -> bool:
        return self.status != VIOLATED

    def to_json(self) -> dict:
        return {"level": self.level, "bound": self.bound, "ratio": self.ratio,
                "status": self.status}


def bound_for(n: int, level: int) -> int:
    return n - level + 1


def extremal_shape(n: int, level: int, c: float = 1.0) -> tuple:
    """The decreasingly sorted extremal pair ``c(B,0,...,0)``, ``c(1,..,1,0,..,0)``.

    ``B = n - level + 1`` ones appear in the second tuple, followed by
    ``level - 1`` zeros.
    """
    b = bound_for(n, level)
    x = (c * b,) + (0.0,) * (n - 1)
    y = (c,) * b + (0.0,) * (level - 1)
    return x, y


def _min_n(level: int) -> int:
    return {1: 3, 2: 3, 3: 4}[level]


def bound_check(x: TupleLike, y: TupleLike, level: int = 3,
                tol: float = DEFAULT_TOL) -> BoundVerdict:
    """Classify ``max x / max y`` against the bound for a matching level.

    Level 1 matches sums, level 2 sums and products, level 3 adds the
    codimension-1 symmetric value.  Raises SignatureMismatch when the pair does
    not satisfy the constraints of the requested level.
    """
    x, y = as_tuple(x), as_tuple(y)
    if x.n != y.n:
        raise DimensionMismatch(f"tuple sizes differ: {x.n} vs {y.n}")
    if level not in (1, 2, 3):
        raise ValueError(f"level must be 1, 2 or 3, got {level}")
    n = x.n
    if n < _min_n(level):
        raise ValueError(f"level {level} needs n >= {_min_n(level)}, got {n}")
    if not signatures_match(signature(x), signature(y), tol, level):
        raise SignatureMismatch(f"signatures differ at level {level}")

    bound = float(bound_for(n, level))
    xs, ys = x.sorted_desc(), y.sorted_desc()
    if ys[0] <= tol:
        return BoundVerdict(level, bound, float("nan"), DEGENERATE_ZERO)
    ratio = xs[0] / ys[0]

    if _close(ratio, bound, tol):
        ex, ey = extremal_shape(n, level, ys[0])
        scale = tol * max(1.0, ys[0])
        matches = all(abs(a - b) <= scale * max(1.0, bound) for a, b in zip(xs, ex)) and \
            all(abs(a - b) <= scale for a, b in zip(ys, ey))
        if matches:
            return BoundVerdict(level, bound, ratio, EQUALITY_CASE)
        return BoundVerdict(level, bound, ratio, STRICT if ratio <= bound else VIOLATED)
    return BoundVerdict(level, bound, ratio, STRICT if ratio < bound else VIOLATED)


def corollary_check(x: TupleLike, y: TupleLike) -> tuple:
    """For strictly positive tuples, test both strict consequences of level 3.

    Returns ``(max x < (N-2) max y, min x > min y / (N-2))``.  The second is the
    first applied to the reciprocal tuples with roles exchanged.
    """
    x, y = as_tuple(x).as_array(), as_tuple(y).as_array()
    k = x.size - 2
    return bool(x.max() < k * y.max()), bool(x.min() > y.min() / k)


def equality_witness(n: int, c: float = 1.0) -> tuple:
    """Return the level-3 extremal pair ``c(n-2,0,..,0)`` and ``c(1,..,1,0,0)``."""
    if n < 4:
        raise ValueError(f"equality witness needs n >= 4, got {n}")
    if c < 0:
        raise ValueError("scale c must be >= 0")
    ex, ey = extremal_shape(n, 3, float(c))
    x, y = NonnegTuple(ex), NonnegTuple(ey)
    # products and codim1 vanish exactly; the sums agree up to summation rounding
    assert signatures_match(signature(x), signature(y), 4 * np.finfo(float).eps)
    if c > 0:
        assert _close(max(x) / max(y), n - 2, 4 * np.finfo(float).eps)
    return x, y
