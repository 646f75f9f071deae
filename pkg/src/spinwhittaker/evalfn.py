"""Coordinates, normalization, jets, and the continuous-model quadrature.

The radial variables are t1 = eta1/a1 and t2 = -sign * eta1 eta2 / (2 a2)
(upper reading of the displayed -+ for the + chamber); coefficient functions
c(Q; a) and the normalized f(Q, m'; t) = n(Q, m'; a)^{-1} c(Q; a) are
related by the monomial-times-exponential factor n built from d_{m'}(Q) and
the l-coordinates, so theta-jets of c are obtained from f-series by exact
operator conjugation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bessel import bessel_K
from .errors import ParameterError
from .euler import EulerOp
from .gt import l_coord
from .mbseries import MBSeries, apply_euler_termwise, evaluate_terms
from .params import Chamber, Character, HCParam, blattner, classify
from .radial import DistinguishedPattern, d_value


@dataclass(frozen=True)
class TCoords:
    t1: float
    t2: float

    def __post_init__(self):
        if self.t1 <= 0:
            raise ParameterError("t1 = eta1/a1 must be positive")


def to_t(a: tuple[float, float], eta: Character, sign: int) -> TCoords:
    """(a1, a2) -> (t1, t2) = (eta1/a1, -sign*eta1*eta2/(2 a2))."""
    a1, a2 = a
    if a1 <= 0 or a2 <= 0:
        raise ParameterError("a1, a2 must be positive")
    return TCoords(eta.eta1 / a1, -sign * eta.eta1 * eta.eta2 / (2.0 * a2))


def from_t(t: TCoords, eta: Character, sign: int) -> tuple[float, float]:
    a1 = eta.eta1 / t.t1
    a2 = -sign * eta.eta1 * eta.eta2 / (2.0 * t.t2)
    if a2 <= 0:
        raise ParameterError("t2 sign inconsistent with the chamber/eta2 signs")
    return a1, a2


def _norm_exponents(dp: DistinguishedPattern, lam_hc: HCParam, chamber: Chamber) -> tuple[Fraction, Fraction]:
    """(exponent of a1, exponent of a2) in n(Q, m'; a)."""
    n = dp.n
    s = chamber.sign
    bw = blattner(lam_hc, chamber)
    e1 = Fraction(-n + 1) + d_value(dp).as_fraction()
    e2 = Fraction(0)
    for p in range(1, chamber.m):
        e2 -= l_coord(dp.Q, 2 * n - 1, p).as_fraction()
    for p in range(1, chamber.m - 1):
        e2 += l_coord(dp.Q, 2 * n - 2, p).as_fraction()
    e2 -= s * (lam_hc.entries[n - 1].as_fraction() + bw.lam_np1.as_fraction())
    e2 += -chamber.m + 2
    return e1, e2


def normalization(
    dp: DistinguishedPattern,
    lam_hc: HCParam,
    a: tuple[float, float],
    eta: Character,
    chamber: Chamber | None = None,
) -> float:
    """n(Q, m'; a) = a1^{-n+1+d} a2^{E2} exp(sign * eta2 a1 / (2 a2))."""
    if chamber is None:
        chamber = classify(lam_hc)
    e1, e2 = _norm_exponents(dp, lam_hc, chamber)
    a1, a2 = a
    return (
        a1 ** float(e1)
        * a2 ** float(e2)
        * math.exp(chamber.sign * eta.eta2 * a1 / (2.0 * a2))
    )


def conjugation_shifts(
    dp: DistinguishedPattern, lam_hc: HCParam, chamber: Chamber | None = None
) -> tuple[EulerOp, EulerOp]:
    """(w1, w2) with th_i(c) jets obtained from f via th_i -> th_i + w_i:
    w1 = (n - 1 - d) + t2/t1,  w2 = -E2 - t2/t1  (exact monomials)."""
    if chamber is None:
        chamber = classify(lam_hc)
    e1, e2 = _norm_exponents(dp, lam_hc, chamber)
    ratio = EulerOp.monomial(1, -1, 1)  # t2/t1
    w1 = EulerOp.const(-e1) + ratio
    w2 = EulerOp.const(-e2) - ratio
    return w1, w2


def c_jet(
    f_series: MBSeries,
    dp: DistinguishedPattern,
    lam_hc: HCParam,
    eta: Character,
    a: tuple[float, float],
    orders: tuple[int, int],
    chamber: Chamber | None = None,
    scale: complex = 1.0,
) -> dict[tuple[int, int], complex]:
    """theta-jet of c = scale * n(Q,m';a) f(t) at the point a, exact through
    operator conjugation: th1^i th2^j c = n * (th1+w1)^i (th2+w2)^j f."""
    if chamber is None:
        chamber = classify(lam_hc)
    t = to_t(a, eta, chamber.sign)
    w1, w2 = conjugation_shifts(dp, lam_hc, chamber)
    nval = normalization(dp, lam_hc, a, eta, chamber) * scale
    jet: dict[tuple[int, int], complex] = {}
    s1 = EulerOp.theta(1) + w1
    s2 = EulerOp.theta(2) + w2
    for i in range(orders[0] + 1):
        for j in range(orders[1] + 1):
            op = EulerOp.const(1)
            for _ in range(i):
                op = op * s1
            for _ in range(j):
                op = op * s2
            g = apply_euler_termwise(op, f_series)
            jet[(i, j)] = nval * evaluate_terms(g.terms, t.t1, t.t2)
    return jet


def zero_jet(orders: tuple[int, int]) -> dict[tuple[int, int], complex]:
    return {(i, j): 0.0 for i in range(orders[0] + 1) for j in range(orders[1] + 1)}


def f0_quadrature(alpha1, alpha2, t: TCoords, tol: float = 1e-11) -> float:
    """f0(t) = int_0^inf exp(-u - t1^2/4u) (2 t2 u / t1)^{-(a1+a2)/2}
    K_{a1-a2}(2 sqrt(2 t2 u / t1)) du/u, by the trapezoid rule in log u
    (the integrand decays doubly exponentially both ways).  Needs t2 > 0."""
    if t.t2 <= 0:
        raise ParameterError("f0 needs t2 > 0 (favorable character sign)")
    a1f, a2f = float(alpha1), float(alpha2)
    delta = a1f - a2f
    power = -(a1f + a2f) / 2.0
    c = 2.0 * t.t2 / t.t1

    def log_integrand(v: np.ndarray) -> np.ndarray:
        u = np.exp(v)
        w = c * u
        out = np.empty_like(v)
        for idx, wi in enumerate(w):
            out[idx] = (
                -u[idx]
                - t.t1 ** 2 / (4.0 * u[idx])
                + power * math.log(wi)
                + complex(bessel_K(delta, 2.0 * math.sqrt(wi), log_form=True)).real
            )
        return out

    h = 0.08
    # expand symmetric range until negligible
    lo, hi = -3.0, 3.0
    while -t.t1 ** 2 / 4.0 * math.exp(-lo) + abs(power) * abs(lo + math.log(c)) > -60:
        lo -= 1.0
    while -math.exp(hi) + abs(power) * (hi + abs(math.log(c))) > -60:
        hi += 1.0
    v = np.arange(lo, hi + h, h)
    logs = log_integrand(v)
    m = np.max(logs)
    return float(math.exp(m) * np.sum(np.exp(logs - m)) * h)
