"""Singular-value fields, the explicit 4x4 family, and the norm-ratio checks.

Two matrices have super-identical pseudospectra when every singular value of
``A - zI`` equals the corresponding one of ``B - zI`` at every complex ``z``.
For such a pair and any polynomial ``p`` the squared singular values of
``p(A)`` and ``p(B)`` share their sum, product and codimension-1 symmetric
value, which bounds ``||p(A)|| / ||p(B)||`` by ``sqrt(n - 2)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (RANK_TOL, Polynomial, as_matrix, batch_singular_values,
                     gram_char_coeffs, matrix_to_json, poly_eval,
                     singular_values)
from .tuples import MeanSignature, signature, signatures_match

IDENTITY_TOL = 1e-8
SUPER_TOL = 1e-8


# -- the explicit family -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class FRPair:
    alpha: float
    beta: float
    a: np.ndarray
    b: np.ndarray

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta,
                "a": matrix_to_json(self.a), "b": matrix_to_json(self.b)}


def _fr_matrix(s: float, t: float) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[0, 1] = 1 / math.cos(s)
    m[0, 3] = 1.0
    m[1, 2] = 1 / (math.cos(t) * math.sin(t))
    m[2, 3] = 1 / math.sin(s)
    return m


def fr_pair(alpha: float, beta: float) -> FRPair:
    """Nilpotent pair with super-identical pseudospectra, ``0 < alpha, beta <= pi/4``.

    ``a`` has ``sec(alpha)`` at (1,2), 1 at (1,4), ``sec(beta) csc(beta)`` at
    (2,3) and ``csc(alpha)`` at (3,4); ``b`` is ``a`` with the angles swapped.
    """
    for name, val in (("alpha", alpha), ("beta", beta)):
        if not 0 < val <= math.pi / 4 + 1e-15:
            raise ValueError(f"{name} must lie in (0, pi/4], got {val!r}")
    return FRPair(float(alpha), float(beta), _fr_matrix(alpha, beta), _fr_matrix(beta, alpha))


# -- grids and fields --------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    re_min: float = -3.0
    re_max: float = 3.0
    im_min: float = -3.0
    im_max: float = 3.0
    nx: int = 101
    ny: int = 101
    eps_levels: tuple = ()

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("grid bounds must satisfy min < max")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs nx, ny >= 2")
        levels = tuple(float(e) for e in self.eps_levels)
        _check_levels(levels)
        object.__setattr__(self, "eps_levels", levels)

    @property
    def re(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.nx)

    @property
    def im(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.ny)

    def points(self) -> np.ndarray:
        """Complex grid of shape ``(ny, nx)``; rows follow the imaginary axis."""
        re, im = np.meshgrid(self.re, self.im)
        return re + 1j * im


def _check_levels(levels):
    if any(e <= 0 for e in levels):
        raise ValueError("eps levels must be positive")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("eps levels must be strictly ascending")


@dataclass(frozen=True, eq=False)
class SingularField:
    grid: GridSpec
    data: np.ndarray  # (ny, nx, n), descending along the last axis

    @property
    def s_min(self) -> np.ndarray:
        return self.data[..., -1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = self.data.shape[-1]
        w.writerow(["re", "im"] + [f"s{j}" for j in range(1, n + 1)])
        pts = self.grid.points()
        for iy in range(pts.shape[0]):
            for ix in range(pts.shape[1]):
                z = pts[iy, ix]
                w.writerow([_fmt(z.real), _fmt(z.imag)] + [_fmt(s) for s in self.data[iy, ix]])
        return buf.getvalue()

    def to_json(self) -> dict:
        g = self.grid
        return {"grid": {"re_min": g.re_min, "re_max": g.re_max, "im_min": g.im_min,
                         "im_max": g.im_max, "nx": g.nx, "ny": g.ny},
                "values": self.data.tolist()}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _shifted_stack(m: np.ndarray, z: np.ndarray) -> np.ndarray:
    eye = np.eye(m.shape[0])
    return m[None, :, :] - z.reshape(-1)[:, None, None] * eye[None, :, :]


def singular_field(m, grid: GridSpec = GridSpec()) -> SingularField:
    """Descending singular values of ``m - zI`` at every grid point."""
    m = as_matrix(m)
    pts = grid.points()
    sv = batch_singular_values(_shifted_stack(m, pts))
    return SingularField(grid, sv.reshape(pts.shape + (m.shape[0],)))


# -- super-identical certificate ---------------------------------------------

def default_points(a, b) -> np.ndarray:
    """``(2n+1)^2`` Cartesian nodes covering the disc of radius ``2 max(||a||, ||b||)``.

    Each Gram coefficient is a polynomial of degree <= 2n in (Re z, Im z), so
    agreement on this many well-spread nodes is strong numerical evidence.
    """
    a, b = as_matrix(a), as_matrix(b)
    n = a.shape[0]
    radius = 2 * max(singular_values(a)[0], singular_values(b)[0], 0.5)
    t = np.linspace(-radius, radius, 2 * n + 1)
    re, im = np.meshgrid(t, t)
    return (re + 1j * im).ravel()


@dataclass
class SuperIdenticalReport:
    mode: str
    n_points: int
    max_deviation: float
    worst_point: complex
    tol: float
    passed: bool

    def to_json(self) -> dict:
        return {"mode": self.mode, "n_points": self.n_points,
                "max_deviation": self.max_deviation,
                "worst_point": [self.worst_point.real, self.worst_point.imag],
                "tol": self.tol, "passed": self.passed}


def super_identical_check(a, b, points=None, tol: float = SUPER_TOL,
                          mode: str = "singular") -> SuperIdenticalReport:
    """Compare ``a - zI`` and ``b - zI`` at each point.

    ``mode="singular"`` compares full singular spectra, scaling the deviation
    by ``1 + s1``.  ``mode="gram"`` compares the characteristic coefficients of
    the Gram matrices, scaling coefficient ``k`` by ``(1 + s1)^(2(n-k))``.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    pts = default_points(a, b) if points is None else np.asarray(points, dtype=complex).ravel()
    if pts.size == 0:
        raise ValueError("need at least one point")
    n = a.shape[0]
    sa = batch_singular_values(_shifted_stack(a, pts))
    sb = batch_singular_values(_shifted_stack(b, pts))
    s1 = np.maximum(sa[:, 0], sb[:, 0])
    if mode == "singular":
        dev = np.max(np.abs(sa - sb), axis=1) / (1 + s1)
    elif mode == "gram":
        powers = 2 * (n - np.arange(n))
        dev = np.empty(pts.size)
        for k, z in enumerate(pts):
            ca, cb = gram_char_coeffs(a, z), gram_char_coeffs(b, z)
            dev[k] = np.max(np.abs(ca - cb) / (1 + s1[k]) ** powers)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    k = int(np.argmax(dev))
    worst = float(dev[k])
    return SuperIdenticalReport(mode, int(pts.size), worst, complex(pts[k]), tol, worst <= tol)


# -- singular-value identities and the norm bound ----------------------------

@dataclass
class MeanIdentityReport:
    signature_a: MeanSignature
    signature_b: MeanSignature
    residuals: tuple
    tol: float
    passed: bool

    def to_json(self) -> dict:
        return {"signature_a": self.signature_a.to_json(),
                "signature_b": self.signature_b.to_json(),
                "residuals": {"sum": self.residuals[0], "product": self.residuals[1],
                              "codim1": self.residuals[2]},
                "tol": self.tol, "passed": self.passed}


def mean_identities_check(a, b, p: Polynomial, tol: float = IDENTITY_TOL) -> MeanIdentityReport:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    x = singular_values(poly_eval(p, a)) ** 2
    y = singular_values(poly_eval(p, b)) ** 2
    sx, sy = signature(x), signature(y)
    res = tuple(abs(u - v) / max(1.0, abs(u), abs(v))
                for u, v in zip(sx.components(), sy.components()))
    return MeanIdentityReport(sx, sy, res, tol, signatures_match(sx, sy, tol))


@dataclass
class NormBoundReport:
    norm_a: float
    norm_b: float
    ratio: float
    reciprocal: float
    bound: float
    zero_case: bool
    margin: float
    verdict: str

    def to_json(self) -> dict:
        return dict(self.__dict__)


def norm_bound_check(a, b, p: Polynomial, tol: float = 1e-10) -> NormBoundReport:
    """Compare ``||p(a)|| / ||p(b)||`` and its reciprocal with ``sqrt(n - 2)``.

    Both norms at most ``tol`` is the ``p(a) = p(b) = 0`` case and passes.
    """
    a, b = as_matrix(a), as_matrix(b)
    n = a.shape[0]
    if n < 4:
        raise ValueError("the sqrt(n-2) bound needs n >= 4")
    na = float(singular_values(poly_eval(p, a))[0])
    nb = float(singular_values(poly_eval(p, b))[0])
    bound = math.sqrt(n - 2)
    if na <= tol and nb <= tol:
        return NormBoundReport(na, nb, float("nan"), float("nan"), bound, True, float("nan"), "pass")
    ratio = na / nb if nb > 0 else math.inf
    recip = nb / na if na > 0 else math.inf
    ok = ratio < bound + tol and recip < bound + tol
    return NormBoundReport(na, nb, ratio, recip, bound, False, bound - max(ratio, recip),
                           "pass" if ok else "fail")


@dataclass
class SquareRatioReport:
    r1: float
    r2: float
    expected_r1: float
    expected_r2: float
    closed_form_a: tuple
    numeric_a: tuple
    max_error: float
    passed: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def fr_square_ratios(pair: FRPair, tol: float = 1e-10) -> tuple:
    """Top two singular-value ratios of ``A^2`` over ``B^2`` against closed forms.

    Returns ``(r1, r2, report)`` with ``r1 = s1(A^2)/s1(B^2)`` (expected
    ``cos(alpha)/cos(beta)``) and ``r2 = s2(A^2)/s2(B^2)`` (expected
    ``sin(alpha)/sin(beta)``).
    """
    sq = Polynomial.monomial(2)
    sa = singular_values(poly_eval(sq, pair.a))
    sb = singular_values(poly_eval(sq, pair.b))
    al, be = pair.alpha, pair.beta
    r1, r2 = float(sa[0] / sb[0]), float(sa[1] / sb[1])
    e1, e2 = math.cos(al) / math.cos(be), math.sin(al) / math.sin(be)
    sec_b_csc_b = 1 / (math.cos(be) * math.sin(be))
    closed = (sec_b_csc_b / math.sin(al), sec_b_csc_b / math.cos(al))
    errors = [abs(r1 - e1) / max(1.0, e1), abs(r2 - e2) / max(1.0, e2),
              abs(sa[0] - closed[0]) / closed[0], abs(sa[1] - closed[1]) / closed[1]]
    err = float(max(errors))
    report = SquareRatioReport(r1, r2, e1, e2, closed, (float(sa[0]), float(sa[1])),
                               err, err <= tol)
    return r1, r2, report


# -- similarity condition lower bound ----------------------------------------

@dataclass
class SimilarityBound:
    lower: float
    achieving_poly: Polynomial
    achieving_index: int
    infinite: bool = False
    skipped: int = 0

    def to_json(self) -> dict:
        return {"lower": self.lower, "achieving_poly": self.achieving_poly.to_json(),
                "achieving_index": self.achieving_index, "infinite": self.infinite,
                "skipped": self.skipped}


def similarity_cond_lower_bound(a, b, polys, rank_tol: float = RANK_TOL) -> SimilarityBound:
    """Lower bound on ``||W|| ||W^-1||`` over all ``W`` with ``b = W^-1 a W``.

    Any similarity gives ``s_j(p(b)) <= ||W^-1|| s_j(p(a)) ||W||`` and the same
    with ``a`` and ``b`` exchanged, so every ratio of matching singular values
    bounds the condition number from below.  Index pairs where both values
    are below ``rank_tol * s1`` are skipped; if only one is, the bound is
    infinite and flagged.  ``achieving_index`` is 1-based.
    """
    a, b = as_matrix(a), as_matrix(b)
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one polynomial")
    best = (1.0, polys[0], 1)
    infinite, skipped = False, 0
    for p in polys:
        sa = singular_values(poly_eval(p, a))
        sb = singular_values(poly_eval(p, b))
        cut = rank_tol * max(sa[0], sb[0])
        for j, (u, v) in enumerate(zip(sa, sb), start=1):
            small_u, small_v = u <= cut, v <= cut
            if small_u and small_v:
                skipped += 1
                continue
            if small_u or small_v:
                ratio = math.inf
            else:
                ratio = max(u / v, v / u)
            if ratio > best[0]:
                best = (ratio, p, j)
                infinite = math.isinf(ratio)
    return SimilarityBound(float(best[0]), best[1], best[2], infinite, skipped)


# -- polynomial battery ------------------------------------------------------

def default_poly_battery(seed: int = 0, count: int = 100, max_degree: int = 6) -> list:
    """``z``, ``z^2``, ``z^3`` followed by ``count`` seeded random polynomials.

    Random degrees are uniform on ``1..max_degree``; coefficients are standard
    complex normal.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x706F6C79]))
    out = [Polynomial.monomial(k) for k in (1, 2, 3)]
    for _ in range(count):
        deg = int(rng.integers(1, max_degree + 1))
        c = (rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)) / math.sqrt(2)
        out.append(Polynomial(tuple(c)))
    return out


def rank_agreement(a, b, polys, tol: float = RANK_TOL) -> bool:
    """Equal numerical rank of ``p(a)`` and ``p(b)`` for every polynomial.

    A single cutoff ``tol * max(||p(a)||, ||p(b)||)`` is shared by both sides;
    separate relative cutoffs can split a singular value common to both.
    """
    for p in polys:
        sa = singular_values(poly_eval(p, a))
        sb = singular_values(poly_eval(p, b))
        cut = tol * max(sa[0], sb[0])
        if int(np.sum(sa > cut)) != int(np.sum(sb > cut)):
            return False
    return True


# -- eps-level export --------------------------------------------------------

@dataclass
class ContourLevel:
    eps: float
    mask: np.ndarray
    segments: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"eps": self.eps, "mask": self.mask.astype(int).tolist(),
                "segments": self.segments}


def eps_contour_export(fld: SingularField, eps_levels) -> list:
    """Sub-level sets ``{z : s_min(A - zI) <= eps}`` as masks plus contour segments.

    Segments come from marching squares on ``s_min`` and are given in complex
    plane coordinates as ``[[re0, im0], [re1, im1]]``.
    """
    from skimage.measure import find_contours

    levels = tuple(float(e) for e in eps_levels)
    _check_levels(levels)
    smin = fld.s_min
    g = fld.grid
    dx = (g.re_max - g.re_min) / (g.nx - 1)
    dy = (g.im_max - g.im_min) / (g.ny - 1)
    out = []
    for eps in levels:
        segments = []
        for path in find_contours(smin, eps):
            pts = [[g.re_min + col * dx, g.im_min + row * dy] for row, col in path]
            segments.extend([p0, p1] for p0, p1 in zip(pts, pts[1:]))
        out.append(ContourLevel(eps, smin <= eps, segments))
    return out
