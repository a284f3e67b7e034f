"""Small dense complex linear algebra.

Everything here targets desk-scale matrices (n <= 12).  Singular values use a
batched one-sided Jacobi iteration, so a whole grid of shifted matrices
``A - zI`` can be processed in a single call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RANK_TOL = 1e-8
CHAR_POLY_MAX_N = 12
_MAX_SWEEPS = 60


class ConvergenceError(RuntimeError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial with ascending coefficients.

    Trailing zeros are stripped on construction; the zero polynomial is the
    empty coefficient tuple.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        c = [complex(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "Polynomial":
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, a):
        return poly_eval(self, a)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        k = max(len(self.coeffs), len(other.coeffs))
        lhs = self.coeffs + (0,) * (k - len(self.coeffs))
        rhs = other.coeffs + (0,) * (k - len(other.coeffs))
        return Polynomial(tuple(u + v for u, v in zip(lhs, rhs)))

    def eval_scalar(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def to_json(self) -> list:
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        out = []
        for item in data:
            if isinstance(item, (list, tuple)):
                re, im = item
                out.append(complex(re, im))
            else:
                out.append(complex(item))
        return cls(tuple(out))

    def __str__(self):
        terms = [f"({c.real:g}{c.imag:+g}j)z^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(terms) if terms else "0"


def poly_eval(p: Polynomial, a) -> np.ndarray:
    """Evaluate ``p(a)`` by Horner's rule."""
    a = as_matrix(a)
    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    out = np.zeros((n, n), dtype=complex)
    for c in reversed(p.coeffs):
        out = out @ a + c * eye
    return out


def batch_singular_values(stack) -> np.ndarray:
    """Descending singular values of each matrix in a ``(..., m, n)`` stack.

    One-sided (Hestenes) Jacobi: column pairs are rotated until every pair is
    numerically orthogonal, which diagonalizes ``a^H a`` implicitly without
    forming it.  Singular values are the final column norms.
    """
    g = np.array(stack, dtype=complex)
    if g.ndim < 2:
        raise ValueError("expected at least a 2-d array")
    batch_shape = g.shape[:-2]
    m, n = g.shape[-2:]
    g = g.reshape((-1, m, n))
    if not np.all(np.isfinite(g)):
        raise ValueError("matrix has non-finite entries")
    tol = max(1e-15, n * np.finfo(float).eps)

    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp, gq = g[:, :, p], g[:, :, q]
                alpha = np.einsum("bi,bi->b", gp.conj(), gp).real
                beta = np.einsum("bi,bi->b", gq.conj(), gq).real
                gamma = np.einsum("bi,bi->b", gp.conj(), gq)
                mag = np.abs(gamma)
                active = mag > tol * np.sqrt(alpha * beta)
                if not np.any(active):
                    continue
                rotated = True
                safe = np.where(active, mag, 1.0)
                zeta = (beta - alpha) / (2.0 * safe)
                t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                c = np.where(active, c, 1.0)
                s = np.where(active, s, 0.0)
                phase = np.where(active, gamma / safe, 1.0)
                gq_t = gq * phase.conj()[:, None]
                new_p = c[:, None] * gp - s[:, None] * gq_t
                new_q = s[:, None] * gp + c[:, None] * gq_t
                g[:, :, p] = new_p
                g[:, :, q] = new_q
        if not rotated:
            sv = np.sqrt(np.einsum("bij,bij->bj", g.conj(), g).real)
            sv = -np.sort(-sv, axis=-1)
            if m < n:
                sv = sv[:, :m]
            return sv.reshape(batch_shape + (sv.shape[-1],))
    raise ConvergenceError(f"one-sided Jacobi did not converge in {_MAX_SWEEPS} sweeps")


def singular_values(a) -> np.ndarray:
    return batch_singular_values(as_matrix(a)[None])[0]


def operator_norm(a) -> float:
    return float(singular_values(a)[0])


def determinant(a) -> complex:
    """Determinant by LU factorization with partial pivoting."""
    u = as_matrix(a).copy()
    n = u.shape[0]
    det = 1.0 + 0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(u[k:, k])))
        if u[piv, k] == 0:
            return 0j
        if piv != k:
            u[[k, piv]] = u[[piv, k]]
            det = -det
        det *= u[k, k]
        u[k + 1:, k:] -= np.outer(u[k + 1:, k] / u[k, k], u[k, k:])
    return complex(det)


def numerical_rank(a, tol: float = RANK_TOL) -> int:
    s = singular_values(a)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def _faddeev_leverrier(a: np.ndarray) -> np.ndarray:
    # c[k] is the coefficient of z^k in det(zI - a)
    n = a.shape[0]
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        m = a @ m + c[n - k + 1] * eye
        c[n - k] = -np.trace(a @ m) / k
    return c


def char_poly(a) -> Polynomial:
    """Monic characteristic polynomial ``det(zI - a)`` (Faddeev-LeVerrier)."""
    a = as_matrix(a)
    if a.shape[0] > CHAR_POLY_MAX_N:
        raise ValueError(f"char_poly supports n <= {CHAR_POLY_MAX_N}, got {a.shape[0]}")
    return Polynomial(tuple(_faddeev_leverrier(a)))


def companion(coeffs) -> np.ndarray:
    """Companion matrix of the monic polynomial with ascending ``coeffs``.

    ``coeffs`` lists the non-leading coefficients ``c_0 .. c_{n-1}``.
    """
    c = np.asarray(coeffs, dtype=complex)
    n = c.size
    m = np.zeros((n, n), dtype=complex)
    m[1:, :-1] = np.eye(n - 1)
    m[:, -1] = -c
    return m


def gram_char_coeffs(a, z: complex = 0.0, imag_tol: float = 1e-12) -> np.ndarray:
    """Non-leading coefficients of ``det(tI - (a - zI)^H (a - zI))``.

    Two shifted matrices have the same singular values exactly when these
    real coefficient vectors agree.  Returned ascending, ``c_0 .. c_{n-1}``.
    """
    a = as_matrix(a)
    n = a.shape[0]
    shifted = a - z * np.eye(n)
    h = shifted.conj().T @ shifted
    h = 0.5 * (h + h.conj().T)
    c = _faddeev_leverrier(h)[:n]
    # coefficient k is a sum of products of n - k eigenvalues, each <= trace(h)
    scale = max(1.0, float(np.trace(h).real)) ** (n - np.arange(n))
    if np.any(np.abs(c.imag) > imag_tol * scale):
        raise ArithmeticError("Gram characteristic polynomial has a non-real coefficient")
    return c.real.copy()


def matrix_to_json(a) -> dict:
    a = as_matrix(a)
    return {"n": a.shape[0], "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}


def matrix_from_json(d: dict) -> np.ndarray:
    n = int(d["n"])
    re = np.asarray(d["re"], dtype=float).reshape(n, n)
    im = np.asarray(d.get("im", np.zeros(n * n)), dtype=float).reshape(n, n)
    return re + 1j * im
