import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fourmean.extremal import (CandidateProfile, ExtremalResult, SearchConfig, brute_force_max,
                               bulk_bound_run, complete_tuple, extremal_max,
                               feasible_pair_sample, four_mean_max, poly_f_coeffs, poly_g,
                               positive_penalty_best, reduced_system_residual,
                               reduced_system_solve, sample_pairs, three_mean_max,
                               verify_f_lemma, verify_g_lemma)
from fourmean.extremal.lemmas import (cauchy_root_bound, sign_variations, sturm_count,
                                      synthetic_division)
from fourmean.extremal.reduced import solve_detailed
from fourmean.extremal.sampling import companion_roots, completion_coeffs
from fourmean.extremal.solver import constraint_residual
from fourmean.tuples import extremal_shape, signature, signatures_match
from oracles import cubic_all_nonneg_real, exact_elementary, exact_signature

FAST = SearchConfig(seed=3, restarts=4)


class TestSearchConfig:
    def test_defaults_and_validation(self):
        cfg = SearchConfig()
        assert cfg.penalty_weight_schedule[0] == 10.0 and cfg.penalty_weight_schedule[-1] == 1e8
        for bad in ({"restarts": 0}, {"mesh": 7}, {"tol": 0.0}, {"penalty_weight_schedule": ()}):
            with pytest.raises(ValueError):
                SearchConfig(**bad)

    def test_json_round_trip(self, tmp_path):
        cfg = SearchConfig(seed=7, restarts=3, mesh=20, tol=1e-8)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.to_json()))
        assert SearchConfig.load(path) == cfg

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            SearchConfig.from_json({"seed": 1, "restart": 2})

    def test_substreams_independent_and_reproducible(self):
        cfg = SearchConfig(seed=11)
        a = cfg.rng(4, 1, 0).random(3)
        assert np.array_equal(a, cfg.rng(4, 1, 0).random(3))
        assert not np.array_equal(a, cfg.rng(4, 1, 1).random(3))


class TestReducedSystem:
    def test_all_ones_is_a_root(self):
        assert reduced_system_residual(CandidateProfile(1, 1, 1, 1, 4)) == (0, 0, 0)

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            reduced_system_residual(CandidateProfile(2, 0, 0.5, 1, 4))

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            CandidateProfile(1, 1, 1.5, 1, 4)
        with pytest.raises(ValueError):
            CandidateProfile(1, 1, 0.5, 4, 4)

    def test_profile_tuples(self):
        x, y = CandidateProfile(2.0, 0.5, 0.25, 2, 5).tuples()
        assert x.values == (2.0, 0.5, 0.5, 0.5, 0.5)
        assert y.values == (1.0, 1.0, 1.0, 0.25, 0.25)

    def test_start_at_trivial_root(self):
        roots = reduced_system_solve(4, 1, starts=[(1.0, 1.0, 1.0)])
        assert len(roots) == 1
        p = roots[0]
        assert (p.x1, p.u, p.v) == pytest.approx((1, 1, 1), abs=1e-12)

    @pytest.mark.parametrize("n,r", [(4, 2), (5, 1), (4, 1)])
    def test_no_root_beats_one(self, n, r):
        cfg = SearchConfig(seed=0, restarts=100)
        out = solve_detailed(n, r, cfg)
        for p in out["roots"]:
            assert max(abs(c) for c in reduced_system_residual(p)) <= 1e-10
            if p.v < 1 - 1e-8:
                assert p.x1 <= 1 + 1e-8
        assert out["roots"], "expected at least the trivial root"

    def test_boundary_drift_not_reported_as_root(self):
        # (2, 0+, 0+) solves the first two equations in the limit only
        out = solve_detailed(4, 1, starts=[(1.99, 1e-3, 1e-3)])
        assert all(p.u > 1e-4 and p.v > 1e-4 for p in out["roots"])


class TestFLemma:
    def test_coefficients(self):
        assert poly_f_coeffs(4) == [-1, 0, 3, 0, -3, 0, 1]
        c5 = poly_f_coeffs(5)
        assert len(c5) == 9 and {k: v for k, v in enumerate(c5) if v} == {0: -1, 3: 4, 5: -4, 8: 1}

    @pytest.mark.parametrize("n", range(4, 12))
    def test_shape(self, n):
        c = poly_f_coeffs(n)
        assert len(c) == 2 * n - 1 and sum(1 for v in c if v) == 4 and sum(c) == 0

    def test_small_n(self):
        with pytest.raises(ValueError):
            poly_f_coeffs(3)

    def test_n4_quotient(self):
        rep = verify_f_lemma(4)
        assert rep.passed and rep.quotient == [1, 3, 3, 1] and rep.quotient_sign_variations == 0

    @pytest.mark.parametrize("n", range(4, 11))
    def test_passes(self, n):
        rep = verify_f_lemma(n)
        assert rep.passed, rep.failures
        assert rep.descartes_count == 3 and rep.quotient_positive_roots == 0
        assert max(rep.derivative_residuals) <= 1e-10 and rep.third_derivative != 0

    @pytest.mark.parametrize("n", range(4, 11))
    def test_quotient_against_numpy_roots(self, n):
        q = verify_f_lemma(n).quotient
        roots = np.roots(q[::-1])
        real_pos = [z for z in roots if abs(z.imag) < 1e-9 and z.real > 0]
        assert not real_pos


class TestPolynomialTools:
    def test_synthetic_division(self):
        # t^2 - 3t + 2 = (t - 1)(t - 2)
        q, rem = synthetic_division([2, -3, 1], 1)
        assert q == [-2, 1] and rem == 0
        q, rem = synthetic_division([2, -3, 1], 3)
        assert rem == 2

    def test_sign_variations(self):
        assert sign_variations([1, 0, -1, 0, 2]) == 2
        assert sign_variations([1, 2, 3]) == 0

    @given(st.lists(st.integers(-6, 6), min_size=1, max_size=5, unique=True))
    def test_sturm_counts_distinct_roots(self, roots):
        # ascending integer coefficients of prod (t - r)
        coeffs = [1]
        for r in roots:
            shifted = [0] + coeffs
            scaled = [-r * c for c in coeffs] + [0]
            coeffs = [u + v for u, v in zip(shifted, scaled)]
        bound = cauchy_root_bound(coeffs)
        assert sturm_count(coeffs, -bound, bound) == len(roots)
        assert sturm_count(coeffs, 0, bound) == sum(1 for r in roots if r > 0)

    def test_sturm_on_f_counts_only_one(self):
        for n in range(4, 9):
            c = poly_f_coeffs(n)
            assert sturm_count(c, 0, cauchy_root_bound(c)) == 1


class TestGLemma:
    def test_diagonal_zero_when_r_is_n_minus_1(self):
        rep = verify_g_lemma(4, 3)
        assert rep.passed and rep.diagonal_identically_zero
        assert rep.max_abs_diagonal <= 1e-14

    def test_n4_r1(self):
        rep = verify_g_lemma(4, 1, mesh=64)
        assert rep.passed and rep.min_interior > 0 and rep.min_dv > 0

    def test_small_u_asymptotics(self):
        u = 0.001
        assert float(poly_g(5, 2, u, u)) / u ** 2 == pytest.approx(1, rel=0.1)

    def test_mesh_too_coarse(self):
        with pytest.raises(ValueError, match="mesh too coarse"):
            verify_g_lemma(4, 1, mesh=8)

    def test_bad_r(self):
        with pytest.raises(ValueError):
            verify_g_lemma(4, 4)

    @pytest.mark.parametrize("n", range(4, 11))
    def test_all_r(self, n):
        for r in range(1, n):
            rep = verify_g_lemma(n, r, mesh=64)
            assert rep.passed, rep.violations
            assert rep.min_diagonal >= -1e-12

    def test_report_flags_a_negative_function(self, monkeypatch):
        import fourmean.extremal.lemmas as lem
        monkeypatch.setattr(lem, "poly_g", lambda n, r, u, v: np.asarray(u) - 0.5)
        rep = lem.verify_g_lemma(4, 1, mesh=16)
        assert not rep.passed
        assert rep.violations and {"u", "v", "value", "check"} <= set(rep.violations[0])


class TestSampling:
    def test_identity_completion(self):
        y = np.array([1.0, 0.7, 0.4, 0.2, 0.9])
        x = complete_tuple(y[3:], signature(y), 3)
        np.testing.assert_allclose(np.sort(x), np.sort(y), rtol=1e-12)

    def test_level2_identity_completion(self):
        y = np.array([1.0, 0.5, 0.3, 0.8])
        x = complete_tuple(y[2:], signature(y), 2)
        np.testing.assert_allclose(np.sort(x), np.sort(y), rtol=1e-12)

    def test_completion_coefficients_are_elementary_symmetric(self):
        coeffs = completion_coeffs([2.0], signature([1.0, 2.0, 3.0, 5.0]), 3)
        rest = [Fraction(1), Fraction(3), Fraction(5)]
        want = [1, -exact_elementary(rest, 1), exact_elementary(rest, 2), -exact_elementary(rest, 3)]
        np.testing.assert_allclose(coeffs, [float(w) for w in want], rtol=1e-14)

    @given(st.lists(st.integers(1, 9), min_size=4, max_size=4),
           st.lists(st.integers(1, 9), min_size=1, max_size=1))
    def test_rejection_agrees_with_exact_discriminant(self, y, free):
        s, p, e = exact_signature(y)
        f0 = Fraction(free[0])
        a = s - f0
        c = p / f0
        b = (e - c) / f0
        disc = 18 * a * b * c - 4 * a ** 3 * c + a ** 2 * b ** 2 - 4 * b ** 3 - 27 * c ** 2
        assume(disc != 0)
        got = complete_tuple([float(f0)], signature([float(v) for v in y]), 3)
        assert (got is not None) == cubic_all_nonneg_real(a, b, c)

    def test_companion_roots(self):
        roots = np.sort(companion_roots([1, -6, 11, -6]).real)
        np.testing.assert_allclose(roots, [1, 2, 3], rtol=1e-12)

    @pytest.mark.parametrize("n,level", [(4, 3), (5, 3), (6, 3), (3, 2), (5, 2)])
    def test_accepted_pairs_match(self, n, level):
        out = sample_pairs(n, level, 200, seed=4)
        assert len(out["pairs"]) == 200
        for x, y in out["pairs"]:
            assert min(x) > 0 and min(y) > 0 and max(y) == 1.0
            assert signatures_match(signature(x), signature(y), 1e-9, level)

    def test_rejection_is_normal(self):
        results = [feasible_pair_sample(4, 3, s) for s in range(100)]
        assert any(r is None for r in results) and any(r is not None for r in results)

    def test_seed_reproducible(self):
        assert feasible_pair_sample(5, 3, 17) == feasible_pair_sample(5, 3, 17)

    def test_bad_level(self):
        with pytest.raises(ValueError):
            feasible_pair_sample(4, 1, 0)
        with pytest.raises(ValueError):
            feasible_pair_sample(3, 3, 0)

    def test_bulk_attempts_n4(self):
        out = sample_pairs(4, 3, 10 ** 4, seed=1, max_attempts=10 ** 4)
        assert out["attempts"] == 10 ** 4
        for x, y in out["pairs"]:
            assert max(x) < 2 * max(y)

    def test_bulk_level2_n6(self):
        rep = bulk_bound_run(6, 2, 10 ** 4, seed=2)
        assert rep["passed"] and rep["accepted"] == 10 ** 4 and rep["worst_ratio"] < 5


class TestSolver:
    def test_three_mean_n3(self):
        res = three_mean_max(3, FAST)
        assert res.value == pytest.approx(2, abs=1e-9) and res.certified
        assert res.witness_x.values == pytest.approx((2, 0, 0), abs=1e-9)
        assert res.witness_y.values == pytest.approx((1, 1, 0), abs=1e-9)

    def test_three_mean_n4(self):
        assert three_mean_max(4, FAST).value == pytest.approx(3, abs=1e-9)

    def test_four_mean_n4(self):
        res = four_mean_max(4, FAST)
        assert res.value == pytest.approx(2, abs=1e-9) and res.certified
        ex, ey = extremal_shape(4, 3)
        assert res.witness_x.values == pytest.approx(ex, abs=1e-6)
        assert res.witness_y.values == pytest.approx(ey, abs=1e-6)

    def test_four_mean_n7(self):
        res = four_mean_max(7, FAST)
        assert res.value == pytest.approx(5, abs=1e-9) and res.certified

    def test_result_invariants(self):
        res = four_mean_max(5, FAST)
        assert res.value == max(res.witness_x)
        assert constraint_residual(res.witness_x.values, res.witness_y.values, 3) <= FAST.tol
        d = res.to_json()
        assert d["value"] == res.value and d["certificate"]["passed"]
        json.dumps(d)

    def test_bad_n(self):
        with pytest.raises(ValueError):
            three_mean_max(2, FAST)
        with pytest.raises(ValueError):
            four_mean_max(3, FAST)
        with pytest.raises(ValueError):
            extremal_max(4, 1, FAST)

    def test_positive_search_stays_below_bound(self):
        best = positive_penalty_best(4, SearchConfig(seed=1, restarts=8))
        assert len(best) == 8 and max(best) < 2 - 1e-3

    def test_deterministic(self):
        a = four_mean_max(4, SearchConfig(seed=5, restarts=3)).to_json()
        b = four_mean_max(4, SearchConfig(seed=5, restarts=3)).to_json()
        assert a == b

    def test_failed_search_reported_not_accepted(self, monkeypatch):
        import fourmean.extremal.solver as solver
        monkeypatch.setattr(solver, "_three_mean_boundary", lambda n: [])
        monkeypatch.setattr(solver, "_three_mean_structured", lambda n: [([1.0] * n, [1.0] * n)])
        res = solver.three_mean_max(4, FAST, penalty=False)
        assert res.value == pytest.approx(1) and not res.certified


class TestBruteForce:
    def test_four_mean_n4(self):
        res = brute_force_max(4, 3, SearchConfig(mesh=40))
        assert 2 - 0.05 <= res.value <= 2 + 1 / 40
        assert isinstance(res, ExtremalResult)

    def test_three_mean_n4(self):
        res = brute_force_max(4, 2, SearchConfig(mesh=40))
        assert abs(res.value - 3) <= 0.05

    def test_three_mean_n3(self):
        assert brute_force_max(3, 2, SearchConfig(mesh=20)).value == pytest.approx(2, abs=0.05)

    def test_never_above_structured(self):
        for mesh in (10, 17, 25):
            res = brute_force_max(4, 3, SearchConfig(mesh=mesh))
            assert res.value <= four_mean_max(4, FAST).value + 1 / mesh + 1e-9

    def test_unsupported(self):
        with pytest.raises(ValueError):
            brute_force_max(5, 3)

    def test_witness_feasible(self):
        res = brute_force_max(4, 3, SearchConfig(mesh=20))
        assert constraint_residual(res.witness_x.values, res.witness_y.values, 3) <= 1e-6
