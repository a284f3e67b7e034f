"""Numerical certificates for the two auxiliary polynomial facts.

``f(t) = t^(2n-2) - (n-1) t^n + (n-1) t^(n-2) - 1`` has no positive zero other
than ``t = 1``, and ``g(u, v) = (n-1) u^n - (n-r) u^(n-1) - r v u^(n-1) + v^r``
is positive on the open triangle ``0 < u < v < 1``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

F_TOL = 1e-10
DIAG_TOL = 1e-12
MIN_G_MESH = 16


def poly_f_coeffs(n: int) -> list:
    """Ascending integer coefficients of ``f`` (degree ``2n - 2``)."""
    if n < 4:
        raise ValueError(f"f is defined for n >= 4, got {n}")
    c = [0] * (2 * n - 1)
    c[0] = -1
    c[n - 2] = n - 1
    c[n] = -(n - 1)
    c[2 * n - 2] = 1
    return c


def sign_variations(coeffs) -> int:
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def synthetic_division(coeffs, root):
    """Divide ascending ``coeffs`` by ``(t - root)``; return (quotient, remainder)."""
    desc = list(reversed(coeffs))
    out = [desc[0]]
    for c in desc[1:]:
        out.append(c + root * out[-1])
    remainder = out.pop()
    return list(reversed(out)), remainder


def _poly_eval(coeffs, t):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _derivative(coeffs):
    return [k * c for k, c in enumerate(coeffs)][1:]


def _strip(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_rem(a, b):
    a = [Fraction(x) for x in _strip(a)]
    b = [Fraction(x) for x in _strip(b)]
    while len(a) >= len(b) and a:
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for k, c in enumerate(b):
            a[k + shift] -= factor * c
        a = _strip(a)
    return a


def sturm_sequence(coeffs) -> list:
    """Sturm chain ``p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k)`` in exact rationals."""
    seq = [[Fraction(c) for c in _strip(coeffs)]]
    seq.append([Fraction(c) for c in _strip(_derivative(seq[0]))])
    while seq[-1] and len(seq[-1]) > 1:
        rem = _poly_rem(seq[-2], seq[-1])
        if not rem:
            break
        seq.append([-c for c in rem])
    return seq


def sturm_count(coeffs, a, b) -> int:
    """Number of distinct real roots in ``(a, b]`` via Sturm's theorem."""
    seq = sturm_sequence(coeffs)

    def variations(t):
        return sign_variations([_poly_eval(p, Fraction(t)) for p in seq])

    return variations(a) - variations(b)


def cauchy_root_bound(coeffs) -> Fraction:
    c = _strip(coeffs)
    lead = Fraction(c[-1])
    return 1 + max(abs(Fraction(x) / lead) for x in c[:-1])


@dataclass
class FLemmaReport:
    n: int
    coeffs: list
    derivative_residuals: list
    third_derivative: float
    descartes_count: int
    quotient: list
    quotient_sign_variations: int
    quotient_positive_roots: int
    certifier: str
    passed: bool
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def verify_f_lemma(n: int) -> FLemmaReport:
    """Check the triple root at 1 and the absence of other positive roots.

    After dividing out ``(t - 1)^3`` the quotient is certified root-free on
    ``(0, inf)``: directly when its coefficients have no sign change, else by a
    Sturm count on ``(0, R]`` with ``R`` the Cauchy root bound.
    """
    coeffs = poly_f_coeffs(n)
    failures = []

    residuals = []
    d = [float(c) for c in coeffs]
    for k in range(3):
        scale = sum(abs(c) * j ** k for j, c in enumerate(coeffs)) or 1.0
        residuals.append(abs(_poly_eval(d, 1.0)) / scale)
        d = _derivative(d)
    third = float(_poly_eval(d, 1.0))
    for k, res in enumerate(residuals):
        if res > F_TOL:
            failures.append(f"derivative {k} at t=1 has relative residual {res:.3e}")
    if third == 0:
        failures.append("third derivative vanishes at t=1; root multiplicity exceeds 3")

    descartes = sign_variations(coeffs)
    if descartes != 3:
        failures.append(f"Descartes count is {descartes}, expected 3")

    quotient = coeffs
    for _ in range(3):
        quotient, rem = synthetic_division(quotient, 1)
        if rem != 0:
            failures.append(f"division by (t-1) left remainder {rem}")
            break
    qvar = sign_variations(quotient)
    if qvar == 0:
        positive, certifier = 0, "descartes"
    else:
        positive = sturm_count(quotient, 0, cauchy_root_bound(quotient))
        certifier = "sturm"
    if positive != 0:
        failures.append(f"quotient has {positive} positive roots")

    return FLemmaReport(n=n, coeffs=coeffs, derivative_residuals=residuals,
                        third_derivative=third, descartes_count=descartes,
                        quotient=[int(q) for q in quotient], quotient_sign_variations=qvar,
                        quotient_positive_roots=positive, certifier=certifier,
                        passed=not failures, failures=failures)


def poly_g(n: int, r: int, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (n - 1) * u ** n - (n - r) * u ** (n - 1) - r * v * u ** (n - 1) + v ** r


def poly_g_dv(n: int, r: int, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return -r * u ** (n - 1) + r * v ** (r - 1)


@dataclass
class GLemmaReport:
    n: int
    r: int
    mesh: int
    samples: int
    min_interior: float
    min_dv: float
    min_diagonal: float
    max_abs_diagonal: float
    diagonal_identically_zero: bool
    passed: bool
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def verify_g_lemma(n: int, r: int, mesh: int = 64, max_reported: int = 20) -> GLemmaReport:
    """Sample ``g`` and ``dg/dv`` on a mesh over ``0 < u < v < 1``.

    Mesh nodes are ``k / (mesh + 1)`` for ``k = 1..mesh``.  Positivity is only
    certified at the nodes; the monotonicity check in ``v`` and the diagonal
    check together carry it to the rest of the triangle.
    """
    if n < 4:
        raise ValueError(f"g is defined for n >= 4, got {n}")
    if not 1 <= r <= n - 1:
        raise ValueError(f"r must lie in 1..{n - 1}, got {r}")
    if mesh < MIN_G_MESH:
        raise ValueError(f"mesh must be >= {MIN_G_MESH} (mesh too coarse), got {mesh}")

    t = np.arange(1, mesh + 1) / (mesh + 1)
    uu, vv = np.meshgrid(t, t, indexing="ij")
    inside = uu < vv
    u, v = uu[inside], vv[inside]
    g = poly_g(n, r, u, v)
    dv = poly_g_dv(n, r, u, v)
    diag = poly_g(n, r, t, t)

    violations = []
    for name, bad in (("g<=0", g <= 0), ("dg/dv<=0", dv <= 0)):
        for k in np.flatnonzero(bad)[:max_reported]:
            violations.append({"check": name, "u": float(u[k]), "v": float(v[k]),
                               "value": float(g[k] if name == "g<=0" else dv[k])})
    for k in np.flatnonzero(diag < -DIAG_TOL)[:max_reported]:
        violations.append({"check": "diagonal<0", "u": float(t[k]), "v": float(t[k]),
                           "value": float(diag[k])})

    return GLemmaReport(n=n, r=r, mesh=mesh, samples=int(u.size),
                        min_interior=float(g.min()), min_dv=float(dv.min()),
                        min_diagonal=float(diag.min()),
                        max_abs_diagonal=float(np.abs(diag).max()),
                        diagonal_identically_zero=(r == n - 1),
                        passed=not violations, violations=violations)
