import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from freestates import algebra as A
from freestates import states as S
from freestates import words as W
from freestates.errors import NotAZero, RankMismatch, ZeroNotOnCircle, WeightsNotConvex

from conftest import reduced_words, w

unit = st.floats(-1, 1, allow_nan=False)


def phi_oracle(n, a, theta, code):
    """a^{|s| - 2 gamma} b^gamma e^{i tau theta}, with gamma counted from scratch."""
    b = (n * a * a - 1) / (n - 1)
    gamma = sum(1 for x, y in zip(code, code[1:]) if x < 0 < y)
    tau = sum(1 if x > 0 else -1 for x in code)
    return a ** (len(code) - 2 * gamma) * b**gamma * cmath.exp(1j * tau * theta)


class TestEvaluate:
    def test_generator_value(self):
        assert S.evaluate(S.phi_a(2, 0.3), w("1")) == pytest.approx(0.3)
        assert S.evaluate(S.phi_a(2, 0.3), W.identity(2)) == 1

    def test_psi_switch_value(self):
        assert S.evaluate(S.psi_ab(2, 0.3, -0.2), w("-1 2")) == pytest.approx(-0.2)

    def test_zero_case(self):
        assert S.evaluate(S.phi_a(2, 0.0), w("-1 2")) == pytest.approx(-1.0)
        assert S.evaluate(S.phi_a(2, 0.0), w("1")) == 0

    def test_negative_a_normalizes(self):
        spec = S.phi_a(2, -0.4)
        assert spec.a == 0.4 and spec.theta == pytest.approx(math.pi)
        assert S.evaluate(spec, w("1")) == pytest.approx(-0.4)

    @given(st.integers(2, 4), unit, st.floats(0, 2 * math.pi), st.data())
    def test_matches_oracle(self, n, a, theta, data):
        s = data.draw(reduced_words(n, 7))
        spec = S.phi_a(n, a, theta)
        want = phi_oracle(n, abs(a), theta + (math.pi if a < 0 else 0), s.code)
        assert S.evaluate(spec, s) == pytest.approx(want, abs=1e-12)
        codes, lengths = W.words_to_codes([s])
        assert S.evaluate_codes(spec, codes, lengths)[0] == pytest.approx(want, abs=1e-12)

    @given(unit, st.data())
    def test_hermitian(self, a, data):
        s = data.draw(reduced_words(2, 6))
        spec = S.phi_a(2, abs(a), 0.7)
        assert S.evaluate(spec, ~s) == pytest.approx(S.evaluate(spec, s).conjugate(), abs=1e-12)

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            S.evaluate(S.phi_a(3, 0.2), w("1"))

    def test_chi_z(self):
        z = cmath.exp(0.4j)
        spec = S.chi_z(2, z)
        for j in range(-10, 11):
            assert S.evaluate(spec, W.generator(2, 1, j)) == pytest.approx(z**j)
        assert S.evaluate(spec, w("1 2")) == 0

    def test_chi_z_off_circle(self):
        with pytest.raises(ZeroNotOnCircle):
            S.chi_z(2, 1.5)

    def test_sqrt_n_eigen_matches_phi(self):
        codes = W.sphere_array(3, 4)
        a = S.evaluate_codes(S.sqrt_n_eigen(3), codes)
        b = S.evaluate_codes(S.phi_a(3, 1 / math.sqrt(3)), codes)
        np.testing.assert_allclose(a, b, atol=1e-15)

    def test_u1_length(self):
        assert S.evaluate(S.u1_length_state(2, 0.5), w("1 2 -1 -2")) == pytest.approx(0.25)

    def test_spec_dict_round_trip(self):
        for spec in (S.phi_a(2, 0.3, 1.0), S.psi_ab(3, 0.1, 0.2), S.chi_z(2, 1j), S.u1_length_state(2, 0.4)):
            assert S.StateSpec.from_dict(spec.to_dict()) == spec


class TestEigenRelation:
    @pytest.mark.parametrize("n,a,theta,depth", [(2, 1 / math.sqrt(2), 0, 5), (2, 0.0, 0, 5), (3, 0.4, math.pi / 3, 4)])
    def test_examples(self, n, a, theta, depth):
        assert S.eigen_relation_residual(S.phi_a(n, a, theta), depth) <= 1e-12

    @given(st.integers(2, 3), unit, st.floats(0, 2 * math.pi))
    def test_through_group_algebra(self, n, a, theta):
        # phi(s X) = n a e^{i theta} phi(s), computed by convolution
        spec = S.phi_a(n, a, theta)
        X = A.generator_sum(n)
        for s in W.ball(n, 2):
            got = S.apply_linear(spec, A.delta(s) * X)
            assert got == pytest.approx(spec.eigenvalue * S.evaluate(spec, s), abs=1e-12)

    def test_psi_off_family_fails(self):
        assert S.eigen_relation_residual(S.phi_a(2, 0.5), 3) <= 1e-12
        spec = S.psi_ab(2, 0.5, 0.3)
        assert S.left_kernel_residual(spec, A.generator_sum(2) - 1.0) > 0.1


class TestLeftKernel:
    @given(st.floats(0, 1))
    def test_phi_kills_x_minus_eigenvalue(self, a):
        y = A.generator_sum(2) - 2 * a
        assert abs(S.left_kernel_residual(S.phi_a(2, a), y)) <= 1e-12

    @given(unit, unit)
    def test_psi_quadratic(self, a, b):
        y = A.generator_sum(2) - 2 * a
        assert S.left_kernel_residual(S.psi_ab(2, a, b), y) == pytest.approx(-4 * a * a + 2 + 2 * b, abs=1e-12)

    def test_chi_one(self):
        y = A.delta(w("1")) - 1.0
        assert abs(S.left_kernel_residual(S.chi_z(2, 1.0), y)) <= 1e-15


class TestClassify:
    def test_examples(self):
        c = S.classify(S.psi_ab(2, 0.5, 1.0))
        assert c.positive_definite and not c.reduced
        c = S.classify(S.psi_ab(2, 1 / math.sqrt(2), 0.0))
        assert c.positive_definite and c.reduced and not c.ell2
        assert not S.classify(S.psi_ab(2, 0.9, -0.9)).positive_definite

    def test_phi_family_is_pure(self):
        assert S.classify(S.phi_a(3, 0.3)).pure_family_member
        assert S.classify(S.phi_a(2, 0.3, math.pi)).positive_definite

    def test_complex_phi_rejected(self):
        with pytest.raises(ValueError):
            S.classify(S.phi_a(2, 0.3, 1.0))

    @given(st.integers(2, 4), unit, unit)
    def test_reduced_iff_lambda_plus(self, n, a, b):
        c = S.classify(S.psi_ab(n, a, b))
        lp, _ = S.growth_eigenvalues(n, a, b)
        assume(abs(lp - 1) > 1e-9)
        if c.positive_definite:
            assert c.reduced == (lp < 1)
        assert not c.ell2 or c.reduced


class TestGrowthSeries:
    def test_eigenvalues(self):
        assert S.growth_eigenvalues(2, 0.5, 0.25) == pytest.approx((0.75, 0.25))

    @given(st.integers(2, 3), unit, unit)
    def test_first_terms(self, n, a, b):
        assume(b != 0)
        g = S.growth_series_closed_form(S.psi_ab(n, a, b), 3)
        assert g.C[0] == 1
        assert g.A[1] == pytest.approx(n * a * a)
        assert g.B[1] == pytest.approx(n * a * a)

    def test_b_zero_case(self):
        g = S.growth_series_closed_form(S.psi_ab(2, 0.5, 0.0), 3)
        assert g.B[3] == pytest.approx(0.25)

    def test_zero_a(self):
        g = S.growth_series_brute(S.psi_ab(3, 0.0, -0.5), 2)
        assert g.C[1] == 0 and g.C[2] == pytest.approx(1.5)

    @pytest.mark.parametrize("n,a,b", [(2, 0.5, 0.25), (2, 0.5, 0.0), (3, 0.3, -0.2), (3, 0.0, -0.5), (2, -0.6, 0.5)])
    def test_brute_matches_closed(self, n, a, b):
        spec = S.psi_ab(n, a, b)
        br = S.growth_series_brute(spec, 6)
        cl = S.growth_series_closed_form(spec, 6)
        np.testing.assert_allclose(br.C, cl.C, rtol=1e-9, atol=1e-300)
        np.testing.assert_allclose(br.A[1:], cl.A[1:], rtol=1e-9, atol=1e-15)


class TestPolyKernel:
    def test_linear(self):
        assert S.poly_kernel_decomposition([-1, 1], [(1, 1.0)]).ok

    def test_square_roots_of_unity(self):
        rep = S.poly_kernel_decomposition([-1, 0, 1], [(1, 0.5), (-1, 0.5)])
        assert rep.ok
        assert S.evaluate(S.StateMixture(2, ((0.5, S.chi_z(2, 1)), (0.5, S.chi_z(2, -1)))), w("1")) == 0

    def test_not_a_zero(self):
        with pytest.raises(NotAZero):
            S.poly_kernel_decomposition([-1, 1], [(-1, 1.0)])

    def test_off_circle(self):
        with pytest.raises(ZeroNotOnCircle):
            S.poly_kernel_decomposition([-2, 1], [(2, 1.0)])

    def test_weights(self):
        with pytest.raises(WeightsNotConvex):
            S.poly_kernel_decomposition([-1, 0, 1], [(1, 0.5), (-1, 0.6)])

    @given(st.integers(1, 6), st.data())
    def test_roots_of_unity_mixtures(self, d, data):
        raw = data.draw(st.lists(st.floats(0.05, 1), min_size=d, max_size=d))
        total = sum(raw)
        roots = [cmath.exp(2j * math.pi * m / d) for m in range(d)]
        coeffs = [-1] + [0] * (d - 1) + [1]
        assert S.poly_kernel_decomposition(coeffs, [(z, x / total) for z, x in zip(roots, raw)]).ok
