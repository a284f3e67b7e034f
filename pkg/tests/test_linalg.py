import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourmean.linalg import (CHAR_POLY_MAX_N, Polynomial, batch_singular_values, char_poly,
                             companion, determinant, gram_char_coeffs, matrix_from_json,
                             matrix_to_json, numerical_rank, operator_norm, poly_eval,
                             singular_values)
from fourmean.pseudospectra import fr_pair
from oracles import lapack_singular_values, poly_ref, random_complex, random_unitary

sizes = st.integers(1, 8)
seeds = st.integers(0, 2 ** 32 - 1)
scales = st.sampled_from([1e-3, 1.0, 1e3])


def _matrix(n, seed, scale=1.0):
    return random_complex(np.random.default_rng(seed), n, scale)


class TestPolynomial:
    def test_trailing_zeros_stripped(self):
        assert Polynomial((1, 2, 0, 0)).coeffs == (1, 2)
        assert Polynomial((0, 0)).is_zero and Polynomial(()).is_zero
        assert Polynomial((0, 0)) == Polynomial(())

    def test_degree_and_monomial(self):
        assert Polynomial.monomial(3).degree == 3
        assert Polynomial.monomial(2, 2j).coeffs == (0, 0, 2j)

    def test_json_round_trip(self):
        p = Polynomial((1 + 2j, -3, 0.5j))
        assert p.to_json() == [[1.0, 2.0], [-3.0, 0.0], [0.0, 0.5]]
        assert Polynomial.from_json(p.to_json()) == p

    def test_addition_cancels_to_zero(self):
        p = Polynomial((1, 2, 3))
        q = Polynomial((0, 0, -3))
        assert (p + q).coeffs == (1, 2)


class TestPolyEval:
    def test_constant_gives_identity(self):
        a = _matrix(4, 0)
        np.testing.assert_array_equal(poly_eval(Polynomial((1,)), a), np.eye(4))

    def test_zero_polynomial(self):
        np.testing.assert_array_equal(poly_eval(Polynomial(()), _matrix(3, 1)), np.zeros((3, 3)))

    def test_degree_one_exact(self):
        a = _matrix(4, 2)
        out = poly_eval(Polynomial((2, 3)), a)
        np.testing.assert_array_equal(out, 3 * a + 2 * np.eye(4))

    def test_square_of_fr_matrix(self):
        al, be = 0.3, math.pi / 4
        a2 = poly_eval(Polynomial.monomial(2), fr_pair(al, be).a)
        want = np.zeros((4, 4))
        want[0, 2] = 1 / (math.cos(al) * math.cos(be) * math.sin(be))
        want[1, 3] = 1 / (math.sin(al) * math.cos(be) * math.sin(be))
        np.testing.assert_allclose(a2, want, rtol=1e-15, atol=0)

    @given(sizes, seeds, st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                     allow_infinity=False), max_size=7))
    def test_matches_explicit_powers(self, n, seed, coeffs):
        a = _matrix(n, seed)
        got = poly_eval(Polynomial(tuple(coeffs)), a)
        want = poly_ref(coeffs, a)
        scale = max(1.0, np.abs(want).max())
        assert np.abs(got - want).max() <= 1e-12 * scale * (1 + operator_norm(a)) ** len(coeffs)

    @given(sizes, seeds)
    def test_linearity(self, n, seed):
        rng = np.random.default_rng(seed)
        a = random_complex(rng, n)
        p = Polynomial(tuple(rng.standard_normal(4)))
        q = Polynomial(tuple(rng.standard_normal(6)))
        lhs = poly_eval(p + q, a)
        rhs = poly_eval(p, a) + poly_eval(q, a)
        assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())


class TestSingularValues:
    def test_identity(self):
        np.testing.assert_allclose(singular_values(np.eye(4)), np.ones(4), rtol=0, atol=1e-15)

    def test_diagonal(self):
        d = np.diag([3, 2j, 0, -1])
        np.testing.assert_allclose(singular_values(d), [3, 2, 1, 0], atol=1e-15)

    def test_fr_square_degenerate_angles(self):
        q = math.pi / 4
        s = singular_values(poly_eval(Polynomial.monomial(2), fr_pair(q, q).a))
        # both nonzero entries of A^2 are sec * sec * csc at pi/4, i.e. 2 sqrt(2)
        r = 2 * math.sqrt(2)
        np.testing.assert_allclose(s, [r, r, 0, 0], atol=1e-14)

    def test_rectangular_and_batched(self):
        rng = np.random.default_rng(5)
        stack = rng.standard_normal((3, 2, 6, 4)) + 1j * rng.standard_normal((3, 2, 6, 4))
        got = batch_singular_values(stack)
        assert got.shape == (3, 2, 4)
        np.testing.assert_allclose(got, np.linalg.svd(stack, compute_uv=False), rtol=1e-13)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            singular_values(np.array([[np.inf, 0], [0, 1]]))

    @given(sizes, seeds, scales)
    def test_against_lapack(self, n, seed, scale):
        a = _matrix(n, seed, scale)
        s = singular_values(a)
        assert np.all(np.diff(s) <= 0) and s[-1] >= 0
        np.testing.assert_allclose(s, lapack_singular_values(a), rtol=0, atol=1e-13 * s[0])

    @given(sizes, seeds)
    def test_frobenius_and_determinant(self, n, seed):
        a = _matrix(n, seed)
        s = singular_values(a)
        fro = np.linalg.norm(a) ** 2
        assert abs((s ** 2).sum() - fro) <= 1e-10 * fro
        assert abs(abs(determinant(a)) - np.prod(s)) <= 1e-8 * np.prod(s)

    @given(sizes, seeds)
    def test_unitary_invariance(self, n, seed):
        rng = np.random.default_rng(seed)
        a = random_complex(rng, n)
        u, v = random_unitary(rng, n), random_unitary(rng, n)
        s = singular_values(a)
        assert np.abs(singular_values(u @ a @ v) - s).max() <= 1e-10 * max(1.0, s[0])

    @given(sizes, seeds)
    def test_inverse_duality(self, n, seed):
        a = _matrix(n, seed)
        s = singular_values(a)
        inv = singular_values(np.linalg.inv(a))
        np.testing.assert_allclose(inv, 1 / s[::-1], rtol=1e-8)

    @given(st.integers(2, 8), seeds)
    def test_rank_deficient(self, n, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(1, n))
        a = random_complex(rng, n)[:, :k] @ random_complex(rng, n)[:k, :]
        assert numerical_rank(a) == k


class TestScalars:
    def test_identity(self):
        eye = np.eye(5)
        assert operator_norm(eye) == pytest.approx(1, abs=1e-15)
        assert determinant(eye) == 1
        assert numerical_rank(eye) == 5

    def test_zero(self):
        z = np.zeros((4, 4))
        assert operator_norm(z) == 0 and determinant(z) == 0 and numerical_rank(z) == 0

    def test_fr_square_rank(self):
        pair = fr_pair(0.3, math.pi / 4)
        sq = Polynomial.monomial(2)
        assert numerical_rank(poly_eval(sq, pair.a)) == numerical_rank(poly_eval(sq, pair.b)) == 2

    @given(sizes, seeds)
    def test_determinant_against_lapack(self, n, seed):
        a = _matrix(n, seed)
        d = np.linalg.det(a)
        assert abs(determinant(a) - d) <= 1e-10 * max(1.0, abs(d))

    def test_singular_determinant(self):
        a = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]], dtype=complex)
        assert abs(determinant(a)) < 1e-14


class TestCharPoly:
    def test_identity_2(self):
        assert char_poly(np.eye(2)).coeffs == (1, -2, 1)

    def test_fr_matrix_nilpotent(self):
        p = char_poly(fr_pair(0.3, math.pi / 4).a)
        assert p == Polynomial.monomial(4)

    def test_companion_round_trip_example(self):
        p = char_poly(companion([5, -2, 0]))
        np.testing.assert_allclose(p.coeffs, [5, -2, 0, 1], atol=1e-14)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            char_poly(np.eye(CHAR_POLY_MAX_N + 1))

    @given(sizes, seeds)
    def test_cayley_hamilton(self, n, seed):
        a = _matrix(n, seed)
        res = operator_norm(poly_eval(char_poly(a), a))
        assert res <= 1e-10 * operator_norm(a) ** n

    @given(sizes, seeds)
    def test_roots_are_eigenvalues(self, n, seed):
        a = _matrix(n, seed)
        p = char_poly(a)
        for lam in np.linalg.eigvals(a):
            assert abs(p.eval_scalar(lam)) <= 1e-9 * (1 + abs(lam)) ** n * max(map(abs, p.coeffs))

    @given(sizes, seeds)
    def test_companion_round_trip(self, n, seed):
        rng = np.random.default_rng(seed)
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        got = np.array(char_poly(companion(c)).coeffs)
        np.testing.assert_allclose(got[:n], c, rtol=0, atol=1e-10 * max(1.0, np.abs(c).max()))
        assert got[n] == 1


class TestGramCoefficients:
    def test_zero_matrix(self):
        np.testing.assert_array_equal(gram_char_coeffs(np.zeros((4, 4)), 0), np.zeros(4))

    @given(sizes, seeds, st.complex_numbers(max_magnitude=3, allow_nan=False))
    def test_real_and_encode_singular_values(self, n, seed, z):
        a = _matrix(n, seed)
        c = gram_char_coeffs(a, z)
        assert c.dtype == float and c.shape == (n,)
        s2 = lapack_singular_values(a - z * np.eye(n)) ** 2
        want = np.poly(s2)[::-1][:n]
        np.testing.assert_allclose(c, want.real, rtol=1e-9, atol=1e-9 * max(1.0, s2.max()) ** n)

    def test_fr_pair_agree(self):
        pair = fr_pair(0.3, math.pi / 4)
        ca = gram_char_coeffs(pair.a, 0.7 + 0.2j)
        cb = gram_char_coeffs(pair.b, 0.7 + 0.2j)
        np.testing.assert_allclose(ca, cb, rtol=1e-10)


def test_matrix_json_round_trip():
    a = _matrix(3, 9)
    d = matrix_to_json(a)
    assert d["n"] == 3 and len(d["re"]) == 9
    np.testing.assert_array_equal(matrix_from_json(d), a)
