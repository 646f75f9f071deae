"""Weyl dimensions, interlacing enumeration, Whittaker-model dimensions."""
import random

import pytest

from spinwhittaker.dims import (
    algebraic_whittaker_dim,
    continuous_whittaker_dim,
    interlacings,
    weyl_dim,
)
from spinwhittaker.errors import ParameterError
from spinwhittaker.gt import count_patterns
from spinwhittaker.halfint import HalfInt, half
from spinwhittaker.params import Character, HCParam, classify, contragredient

from test_params import random_param


class TestWeylDim:
    def test_b1_is_2mu_plus_1(self):
        for mu in range(5):
            assert weyl_dim(1, "B", (mu,)) == 2 * mu + 1
        assert weyl_dim(1, "B", (half(1),)) == 2

    def test_b2_spin_rep(self):
        assert weyl_dim(2, "B", (half(1), half(1))) == 4

    def test_d2_hand_value(self):
        assert weyl_dim(2, "D", (1, 1)) == 3

    def test_rank0_trivial(self):
        assert weyl_dim(0, "B", ()) == 1

    def test_agrees_with_gt_counts(self):
        for n in (2, 3):
            for d1 in range(0, 9):
                for d2 in range(d1 % 2, d1 + 1, 2):
                    if n == 2:
                        for s in (1, -1):
                            lam = (HalfInt(doubled=d1), HalfInt(doubled=s * d2))
                            assert weyl_dim(2, "D", lam) == count_patterns(lam)
                    else:
                        for d3 in range(-d2, d2 + 1, 2):
                            if (d3 - d1) % 2:
                                continue
                            lam = (HalfInt(doubled=d1), HalfInt(doubled=d2), HalfInt(doubled=d3))
                            assert weyl_dim(3, "D", lam) == count_patterns(lam)

    def test_non_dominant_rejected(self):
        with pytest.raises(ParameterError):
            weyl_dim(2, "B", (1, 2))
        with pytest.raises(ParameterError):
            weyl_dim(2, "B", (1, -1))


class TestInterlacings:
    def test_n2_single_empty_tuple(self):
        tuples = list(interlacings((5, 1), 2))
        assert len(tuples) == 1
        assert tuples[0].mu == () and tuples[0].mu_prime == ()

    def test_n3_m2(self):
        tuples = list(interlacings((5, 3, 1), 2))
        vals = sorted(float(t.mu_prime[0]) for t in tuples)
        assert vals == [1.0, 2.0, 3.0]

    def test_n3_m3(self):
        tuples = list(interlacings((5, 3, 1), 3))
        vals = sorted(float(t.mu[0]) for t in tuples)
        assert vals == [3.0, 4.0, 5.0]

    def test_negative_lambda_n_uses_abs(self):
        tuples = list(interlacings((5, 3, -1), 2))
        assert sorted(float(t.mu_prime[0]) for t in tuples) == [1.0, 2.0, 3.0]


class TestWhittakerDims:
    def test_n2_total_is_four(self):
        lam = HCParam.make([7, 2, 4])
        res = algebraic_whittaker_dim(lam)
        assert res.raw_sum == 1 and res.total == 4

    def test_n3_worked_example(self):
        # Blattner lambda = (5,3,1): Lambda = (6,4,1; Lambda_4), m=2
        lam = HCParam.make([6, 4, 1, 5])
        ch = classify(lam)
        assert (ch.m, ch.sign) == (2, 1)
        res = algebraic_whittaker_dim(lam)
        assert res.raw_sum == 3 + 5 + 7 == 15
        assert res.total == 60

    def test_no_models_outside_2_to_n(self):
        lam = HCParam.make([5, 3, 1])  # m = n+1
        res = algebraic_whittaker_dim(lam)
        assert res.total == 0 and "no Whittaker models" in res.status

    def test_contragredient_symmetry(self):
        rng = random.Random(17)
        done = 0
        while done < 50:
            lam = random_param(rng, rng.choice((2, 3, 4)))
            ch = classify(lam)
            if not 2 <= ch.m <= lam.n:
                continue
            a = algebraic_whittaker_dim(lam).total
            b = algebraic_whittaker_dim(contragredient(lam)).total
            assert a == b, lam
            done += 1

    def test_continuous_is_quarter_of_algebraic_under_favorable_sign(self):
        rng = random.Random(19)
        done = 0
        while done < 20:
            lam = random_param(rng, rng.choice((2, 3, 4)))
            ch = classify(lam)
            if not 2 <= ch.m <= lam.n:
                continue
            favorable = Character(1.0, -ch.sign * 2.0)
            unfavorable = Character(1.0, ch.sign * 2.0)
            alg = algebraic_whittaker_dim(lam)
            cont = continuous_whittaker_dim(lam, favorable)
            assert alg.total == 4 * cont and cont == alg.raw_sum
            assert continuous_whittaker_dim(lam, unfavorable) == 0
            done += 1

    def test_worked_example_signs(self):
        lam = HCParam.make([6, 4, 1, 5])  # chamber (2, +)
        assert continuous_whittaker_dim(lam, Character(1.0, -1.0)) == 15
        assert continuous_whittaker_dim(lam, Character(1.0, 1.0)) == 0
