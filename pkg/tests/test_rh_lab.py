import math

import numpy as np
import pytest

from conftest import random_poly
from wsemigroup.eigen_families import make_f, make_h
from wsemigroup.hardy_core import CoeffVector, lin_comb, monomial, norm, polynomial
from wsemigroup.rh_lab import (IllConditionedError, dist_to_span, dist_to_span_lstsq, h_basis,
                               m_family_diagnostics, orbit_residual_profile, rh_distance_sweep)

D = 10**4


@pytest.fixture(scope="module")
def basis20():
    return h_basis(20, D)


@pytest.fixture(scope="module")
def sweep():
    return rh_distance_sweep(20, D)


class TestDistToSpan:
    def test_member(self, basis20):
        d, c, _ = dist_to_span(basis20[0], basis20[:4])
        assert d <= 1e-6
        np.testing.assert_allclose(c, [1, 0, 0, 0], atol=1e-10)

    def test_orthogonal_target(self):
        basis = [polynomial([1, 2, 0, 0]), polynomial([0, 1, 1, 0])]
        target = monomial(3)
        d, c, _ = dist_to_span(target, basis)
        assert d == pytest.approx(1.0) and np.allclose(c, 0)

    def test_agrees_with_lstsq_oracle(self, basis20):
        one = monomial(0)
        prev = math.inf
        for K in range(2, 21):
            res = dist_to_span(one, basis20[: K - 1])
            assert 0 < res.distance <= prev + 1e-12
            assert res.condition < 1e10
            assert res.distance == pytest.approx(dist_to_span_lstsq(one, basis20[: K - 1]), abs=1e-8)
            prev = res.distance

    def test_residual_orthogonal_to_basis(self, basis20):
        one = monomial(0)
        res = dist_to_span(one, basis20[:10])
        resid = lin_comb([(1, one)] + [(-c, b) for c, b in zip(res.coefficients, basis20[:10])])
        for b in basis20[:10]:
            assert abs(np.vdot(b.trusted(), resid.trusted())) <= 1e-8

    def test_scale_invariance(self, basis20, rng):
        one = monomial(0)
        alphas = rng.standard_normal(8) * 10 + 1j * rng.standard_normal(8)
        scaled = [lin_comb([(a, b)]) for a, b in zip(alphas, basis20[:8])]
        d1 = dist_to_span(one, basis20[:8]).distance
        d2 = dist_to_span(one, scaled).distance
        assert d1 == pytest.approx(d2, abs=1e-10)

    def test_singular_without_ridge(self):
        b = polynomial([1, 1, 0])
        with pytest.raises(IllConditionedError) as err:
            dist_to_span(monomial(0), [b, lin_comb([(2, b)])])
        assert err.value.condition > 1e12

    def test_ridge_rescues_singular(self):
        b = polynomial([1, 1, 0])
        res = dist_to_span(monomial(0), [b, lin_comb([(2, b)])], ridge=1e-10)
        assert res.ridge_used == 1e-10
        assert res.distance == pytest.approx(math.sqrt(0.5), abs=1e-6)

    def test_empty_basis(self):
        with pytest.raises(ValueError):
            dist_to_span(monomial(0), [])


class TestSweep:
    def test_d2_is_one_dimensional_projection(self, sweep, basis20):
        h2 = basis20[0]
        cstar = np.vdot(h2.trusted(), monomial(0).coeffs_upto(D)) / norm(h2).value ** 2
        direct = norm(lin_comb([(1, monomial(0)), (-cstar, h2)])).value
        assert sweep.distances[0] == pytest.approx(direct, abs=1e-12)

    def test_positive_monotone(self, sweep):
        assert sweep.K_values == list(range(2, 21))
        assert all(0 < d <= 1 for d in sweep.distances)
        assert sweep.monotone
        assert sweep.max_oracle_gap <= 1e-8

    def test_truncation_stability(self, sweep):
        # with coordinates 0..D only, d_K(D) <= d_K(2D) <= d_K(D) + sum |c_k| tail_k
        wide = rh_distance_sweep(20, 2 * D)
        basis = h_basis(20, D)
        for i, K in enumerate(sweep.K_values):
            c = dist_to_span(monomial(0), basis[: K - 1]).coefficients
            slack = float(np.sum(np.abs(c) * np.array([b.tail_bound for b in basis[: K - 1]])))
            assert sweep.distances[i] - 1e-12 <= wide.distances[i] <= sweep.distances[i] + slack

    def test_bad_kmax(self):
        with pytest.raises(ValueError):
            rh_distance_sweep(1, 100)


class TestMFamily:
    def test_single_difference(self):
        rep = m_family_diagnostics(3, 2000)
        assert rep.gram.effective_rank == 1 and rep.gram.dimension == 1
        assert rep.gram.labels == ["h_3-h_2"]

    @pytest.mark.parametrize("K", [4, 8, 12])
    def test_nesting(self, K):
        rep = m_family_diagnostics(K, 5000)
        assert rep.distance_M >= rep.distance_N - 1e-12
        assert rep.gram.full_rank
        assert "not computable" in rep.note

    def test_needs_three(self):
        with pytest.raises(ValueError):
            m_family_diagnostics(2, 100)


class TestOrbitResidual:
    def test_member_start(self):
        prof = orbit_residual_profile(2, make_h(2, D), 0, 6, D)
        assert prof.residuals[0] <= 1e-6

    def test_fixed_point(self, sweep):
        prof = orbit_residual_profile(3, monomial(0), 10, 20, D, start="1")
        dK = sweep.distances[-1]
        assert len(prof.residuals) == 11
        assert all(abs(r - dK) <= 1e-10 for r in prof.residuals)

    def test_operator_norm_bound(self, rng):
        f = random_poly(rng, 300)
        prof = orbit_residual_profile(2, f, 6, 8, 2000)
        for m, r in enumerate(prof.residuals):
            assert 0 <= r <= 2 ** (m / 2) * norm(f).value + 1e-12

    def test_exhaustion(self):
        f = make_f(2, 200)
        # the trusted range falls below the basis size before it runs out
        with pytest.raises(IllConditionedError):
            orbit_residual_profile(2, f, 12, 4, 200)
        prof = orbit_residual_profile(2, f, 12, 4, 200, ridge=1e-8)
        assert prof.exhausted and len(prof.residuals) == prof.steps + 1 < 13
