"""Coordinates, jets, residue/contour duality, leading terms, f0."""
import math
from fractions import Fraction

import numpy as np
import pytest

from spinwhittaker.bessel import bessel_I, bessel_K
from spinwhittaker.contour import ContourFunction
from spinwhittaker.errors import ParameterError, PoleCollisionError
from spinwhittaker.evalfn import TCoords, c_jet, f0_quadrature, from_t, normalization, to_t
from spinwhittaker.mbseries import (
    annihilation_residuals,
    apply_euler_termwise,
    evaluate,
    evaluate_terms,
    residue_series,
    t2_sign_for,
)
from spinwhittaker.params import Character, HCParam, classify
from spinwhittaker.radial import (
    build_distinguished,
    exponents,
    make_exponent_system,
    ode_system,
    s3_op,
)

ES2 = make_exponent_system([6, 4])
ES4 = make_exponent_system([8, 6, 4, -2], [6, 0])


class TestCoords:
    def test_map(self):
        t = to_t((1.0, 1.0), Character(1.0, -2.0), 1)
        assert (t.t1, t.t2) == (1.0, 1.0)

    def test_round_trip(self):
        eta = Character(1.5, -0.7)
        for a in [(0.5, 2.0), (3.0, 0.25)]:
            t = to_t(a, eta, 1)
            back = from_t(t, eta, 1)
            assert abs(back[0] - a[0]) < 1e-14 and abs(back[1] - a[1]) < 1e-14

    def test_t1_positive(self):
        with pytest.raises(ParameterError):
            TCoords(-1.0, 1.0)


class TestNormalization:
    HC = HCParam.make([7, 3, 1, 5])

    def test_positive(self):
        dp = build_distinguished((6, 2, 1), 2, 2, window="max", q_2n4=(2,))
        val = normalization(dp, self.HC, (0.7, 1.3), Character(1.0, -2.0))
        assert val > 0

    def test_a1_exponent_is_minus_n_plus_1_plus_d(self):
        from spinwhittaker.radial import d_value

        dp = build_distinguished((6, 2, 1), 2, 2, window="max", q_2n4=(2,))
        eta = Character(1.0, -2.0)
        # vary a1 with the exponential factor frozen by scaling a2 along
        n1 = normalization(dp, self.HC, (1.0, 1.0), eta)
        n2 = normalization(dp, self.HC, (2.0, 2.0), eta)
        d = float(d_value(dp))
        expect = 2.0 ** (-3 + 1 + d) * 2.0 ** _a2_exponent(dp, self.HC)
        assert abs(n2 / n1 - expect) < 1e-12 * abs(expect)

    def test_jet_matches_finite_differences(self):
        """theta-jets of c = n * f via operator conjugation agree with log-step
        finite differences of the plain product."""
        dp = build_distinguished((6, 2, 1), 2, 2, window="max", q_2n4=(2,))
        eta = Character(1.0, -2.0)
        es = exponents(dp, self.HC)
        f = residue_series(2, "K", es, cutoff=40)
        a = (0.9, 1.1)
        jet = c_jet(f, dp, self.HC, eta, a, (1, 1))

        def c_at(a1, a2):
            ch = classify(self.HC)
            t = to_t((a1, a2), eta, ch.sign)
            return normalization(dp, self.HC, (a1, a2), eta) * evaluate(f, t.t1, t.t2)[0]

        h = 1e-6
        d1 = (c_at(a[0] * math.exp(h), a[1]) - c_at(a[0] * math.exp(-h), a[1])) / (2 * h)
        d2 = (c_at(a[0], a[1] * math.exp(h)) - c_at(a[0], a[1] * math.exp(-h))) / (2 * h)
        # theta_t = -theta_a for both variables
        assert abs(jet[(1, 0)] + d1) < 1e-6 * max(1.0, abs(d1))
        assert abs(jet[(0, 1)] + d2) < 1e-6 * max(1.0, abs(d2))
        assert abs(jet[(0, 0)] - c_at(*a)) < 1e-12 * abs(jet[(0, 0)])


def _a2_exponent(dp, hc):
    from spinwhittaker.evalfn import _norm_exponents

    return float(_norm_exponents(dp, hc, classify(hc))[1])


class TestDualMethod:
    @pytest.mark.parametrize("es", [ES2, ES4], ids=["N2=2", "N2=4"])
    def test_series_vs_contour_grid(self, es):
        for j in range(1, es.N2 + 1):
            for kind in ("K", "I"):
                f = residue_series(j, kind, es, cutoff=46)
                cf = ContourFunction.for_f(es, j, kind)
                for t1 in (0.5, 1.5, 4.0):
                    for t2 in (0.5, 1.5, 4.0):
                        sv, _ = evaluate(f, t1, t2)
                        cv, cerr = cf.evaluate(t1, t2)
                        assert abs(sv - cv) <= 1e-8 * abs(sv), (j, kind, t1, t2)

    def test_contour_crossing_point_independence(self):
        cf = ContourFunction.for_f(ES2, 1, "K")
        a, _ = cf.evaluate(1.0, 0.8, x0_frac=0.25, nodes=28)
        b, _ = cf.evaluate(1.0, 0.8, x0_frac=0.75, nodes=28)
        assert abs(a - b) <= 1e-9 * abs(a)

    def test_collision_refused_by_series_handled_by_contour(self):
        es_c = make_exponent_system([6, 6])
        with pytest.raises(PoleCollisionError):
            residue_series(1, "K", es_c)
        cf = ContourFunction.for_f(es_c, 1, "K")
        val, err = cf.evaluate(1.0, 1.0)
        assert np.isfinite(val.real) and err < 1e-6 * abs(val)
        # epsilon-extrapolation control: perturbed systems converge to it
        vals = []
        for eps in (1e-3, 5e-4):
            es_p = make_exponent_system([6 + eps, 6])
            vals.append(ContourFunction.for_f(es_p, 1, "K").evaluate(1.0, 1.0)[0])
        extrap = vals[1] + (vals[1] - vals[0])
        assert abs(extrap - val) < 1e-5 * abs(val)


class TestODEAnnihilation:
    @pytest.mark.parametrize("es", [ES2, ES4], ids=["N2=2", "N2=4"])
    def test_termwise(self, es):
        op1, op2 = ode_system(es)
        for j in range(1, es.N2 + 1):
            for kind in ("K", "I"):
                f = residue_series(j, kind, es, cutoff=34)
                for op in (op1, op2):
                    g = apply_euler_termwise(op, f, merge=False)
                    assert annihilation_residuals(g) <= 1e-10, (j, kind)

    def test_theta2_multiplies_by_s(self):
        from spinwhittaker.euler import EulerOp

        f = residue_series(2, "K", ES2, cutoff=5)
        g = apply_euler_termwise(EulerOp.theta(2), f)
        by_s = {t.s: t for t in f.terms}
        for t in g.terms:
            assert abs(t.coeff - by_s[t.s].coeff * float(t.s)) < 1e-14 * abs(t.coeff)


class TestBasisProxy:
    def test_collocation_matrix_nonsingular(self):
        es = ES4
        pts = [(0.7, 0.9), (1.3, 0.6), (0.9, 1.8), (2.0, 1.1), (1.1, 2.4), (1.7, 1.7), (2.4, 0.8), (0.6, 2.0)]
        rows = []
        for j in range(1, 5):
            for kind in ("K", "I"):
                f = residue_series(j, kind, es, cutoff=40)
                rows.append([evaluate(f, t1, t2)[0] for (t1, t2) in pts])
        M = np.array(rows)
        M /= np.linalg.norm(M, axis=1, keepdims=True)
        s = np.linalg.svd(M, compute_uv=False)
        assert s[-1] > 1e-6  # no two rows proportional / all independent


class TestLeadingTerms:
    # The subleading correction scales like t2 * B_{alpha-1}(t1)/B_alpha(t1)
    # / (alpha_1 - alpha_2 - 1), so the 1e-4 bound at t2 = 1e-3 needs a
    # far-from-walls system (large exponent spacing, as in the standing
    # hypothesis); the I-ratio converges from large t1, the K-ratio from
    # small t1.
    ES_FAR = make_exponent_system([23, 8])

    def test_gamma_ratio_constants_far_system(self):
        t2 = 1e-3
        for kind, t1 in (("K", 0.8), ("I", 150.0)):
            bfun = bessel_K if kind == "K" else bessel_I
            for j in (1, 2):
                f = residue_series(j, kind, self.ES_FAR, cutoff=46)
                val, _ = evaluate(f, t1, t2)
                aj = float(self.ES_FAR.alpha(j))
                sgn = t2_sign_for(j, kind)
                base = sgn * t2
                powv = np.exp(aj * (math.log(abs(base)) + (0 if base > 0 else 1j * math.pi)))
                got = val * powv / bfun(aj, t1)
                expect = _leading_constant(self.ES_FAR, j)
                assert abs(got - expect) <= 1e-4 * abs(expect), (j, kind)

    @pytest.mark.parametrize("es", [ES2, ES4], ids=["N2=2", "N2=4"])
    def test_gamma_ratio_constants_k_kind(self, es):
        t1, t2 = 0.8, 1e-3
        for j in range(1, es.N2 + 1):
            f = residue_series(j, "K", es, cutoff=46)
            val, _ = evaluate(f, t1, t2)
            aj = float(es.alpha(j))
            base = t2_sign_for(j, "K") * t2
            powv = np.exp(aj * (math.log(abs(base)) + (0 if base > 0 else 1j * math.pi)))
            got = val * powv / bessel_K(aj, t1)
            expect = _leading_constant(es, j)
            assert abs(got - expect) <= 1e-4 * abs(expect), j


def _leading_constant(es, j):
    out = 1.0
    if j == 1:
        for p in range(2, es.N2 + 1):
            out *= math.gamma(float(es.alpha(1) - es.alpha(p)))
        for p in range(3, es.N2 + 1):
            out /= math.gamma(float(es.alpha(1) - es.beta(p) + 1))
        return out
    for p in range(j + 1, es.N2 + 1):
        out *= math.gamma(float(es.alpha(j) - es.alpha(p)))
    for p in range(3, j + 1):
        out *= math.gamma(float(es.beta(p) - es.alpha(j)))
    for p in range(1, j):
        out /= math.gamma(float(1 + es.alpha(p) - es.alpha(j)))
    for p in range(j + 1, es.N2 + 1):
        out /= math.gamma(float(es.alpha(j) - es.beta(p) + 1))
    return out


class TestF0:
    def test_equals_two_gamma_series(self):
        f1 = residue_series(1, "K", ES2, cutoff=46)
        for (t1, t2) in [(1.0, 1.0), (0.6, 2.5), (3.0, 0.8)]:
            q = f0_quadrature(6, 4, TCoords(t1, t2))
            s, _ = evaluate(f1, t1, t2)
            assert abs(q - s) <= 1e-8 * abs(q)
            assert abs(s.imag) < 1e-12 * abs(s)

    def test_rapid_decay_along_ray(self):
        lams = np.linspace(2.0, 10.0, 20)
        vals = [f0_quadrature(6, 4, TCoords(l, l)) for l in lams]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_s3_f0_equals_f1(self):
        es3 = make_exponent_system([6, 4, -2], [0])
        f0s = residue_series(1, "K", make_exponent_system([6, 4]), cutoff=46)
        lhs = apply_euler_termwise(s3_op(es3), f0s)
        rhs = residue_series(1, "K", es3, cutoff=46)
        for (t1, t2) in [(1.0, 1.0), (0.8, 2.0)]:
            a = evaluate_terms(lhs.terms, t1, t2)
            b, _ = evaluate(rhs, t1, t2)
            assert abs(a - b) <= 1e-7 * abs(b)

    def test_needs_positive_t2(self):
        with pytest.raises(ParameterError):
            f0_quadrature(6, 4, TCoords(1.0, -1.0))
