"""Residue series of the Mellin-Barnes solutions and their term calculus.

A term represents  coeff * (s t2)^s * log(s t2)^L * t1^a * (d/dnu)^D B_nu(t1)
with exact rational s and nu (s is the t2_sign branch).  The f_j series have
one pole family (alpha_j) for j >= 2 and two (alpha_1, alpha_2) for j = 1;
since K-integrality forces alpha_1 - alpha_2 into the integers, the j = 1
expansion meets double poles at depth alpha_1 - alpha_2 and picks up log t2
and dK/dnu (dI/dnu) terms there.  Euler operators act exactly on terms via
th2 (s t2)^s = s (s t2)^s and the Bessel derivative/three-term recurrences,
which is what the ODE-annihilation and shift-operator checks consume.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np
from scipy.special import digamma

from .bessel import bessel_I, bessel_K
from .errors import ParameterError, PoleCollisionError, UnsupportedLogTermError
from .euler import EulerOp
from .radial import ExponentSystem


def t2_sign_for(j: int, kind: str) -> int:
    """(+t2)^s or (-t2)^s per the f_j displays: f_1^K and f_j^I (j>=2) use
    +t2; f_1^I and f_j^K (j>=2) use -t2."""
    if kind not in ("K", "I"):
        raise ParameterError("kind must be 'K' or 'I'")
    if j == 1:
        return 1 if kind == "K" else -1
    return -1 if kind == "K" else 1


@dataclass(frozen=True)
class MBTerm:
    coeff: complex
    s: Fraction
    kind: str                   # 'K' or 'I'
    t2_sign: int                # branch family (+-t2)^s
    log_power: int = 0          # power of log(+-t2)
    nu: Optional[Fraction] = None  # Bessel order, default -s
    t1_pow: int = 0
    dnu_power: int = 0

    def order(self) -> Fraction:
        return -self.s if self.nu is None else self.nu


@dataclass
class MBSeries:
    terms: list[MBTerm]
    t2_sign: int
    kind: str
    cutoff: int
    # per-family data for tail estimates: (family alpha, next k, next coeff)
    tails: list[tuple[Fraction, int, complex]] = field(default_factory=list)
    # highest usable t2-exponent for interior (cancellation-complete) checks
    interior_top: Optional[Fraction] = None
    error_bound: float = 0.0

    def scaled(self, c: complex) -> "MBSeries":
        return MBSeries(
            [replace(t, coeff=t.coeff * c) for t in self.terms],
            self.t2_sign,
            self.kind,
            self.cutoff,
            [(a, k, cc * c) for a, k, cc in self.tails],
            self.interior_top,
            self.error_bound * abs(c),
        )


# ---------------------------------------------------------------------------
# residue construction
# ---------------------------------------------------------------------------

def _poly_from_pairs(es: ExponentSystem, p_from: int) -> list[Fraction]:
    """Roots -q of R(s) = prod_{p >= p_from} prod_{q=alpha_p+1}^{beta_p-1} (-s-q):
    returns the list of q's (so R(s) = prod (-(s + q)))."""
    qs: list[Fraction] = []
    for p in range(max(p_from, 3), es.N2 + 1):
        q = es.alpha(p) + 1
        while q <= es.beta(p) - 1:
            qs.append(q)
            q += 1
    return qs


def _poly_eval(qs: Iterable[Fraction], s: Fraction) -> Fraction:
    out = Fraction(1)
    for q in qs:
        out *= -(s + q)
    return out


def _poly_eval_deriv(qs: list[Fraction], s: Fraction) -> Fraction:
    out = Fraction(0)
    for i in range(len(qs)):
        part = Fraction(-1)
        for jj, q in enumerate(qs):
            if jj != i:
                part *= -(s + q)
        out += part
    return out


def _log_fact(k: int) -> float:
    return math.lgamma(k + 1)


def residue_series(j: int, kind: str, es: ExponentSystem, cutoff: int = 48) -> MBSeries:
    """Residue expansion of f_j^{kind} for the exponent system es.

    For j >= 2 the only pole family inside the contour is alpha_j (the
    p > j gamma ratios cancel to polynomials).  For j = 1 the families
    alpha_1, alpha_2 contribute; at integer spacing delta = alpha_1-alpha_2
    the expansion meets double poles from depth delta on and emits log- and
    order-derivative terms.  alpha_1 = alpha_2 is refused (PoleCollision);
    contour quadrature covers it.
    """
    if not 1 <= j <= es.N2:
        raise ParameterError(f"j={j} outside 1..{es.N2}")
    sgn_t2 = t2_sign_for(j, kind)
    terms: list[MBTerm] = []
    tails: list[tuple[Fraction, int, complex]] = []

    if j >= 2:
        alpha = es.alpha(j)
        qs = _poly_from_pairs(es, j + 1)

        def coeff_at(k: int) -> complex:
            logmag = -_log_fact(k)
            for p in range(3, j + 1):
                logmag += math.lgamma(float(es.beta(p) - alpha + k))
            for p in range(1, j):
                logmag -= math.lgamma(float(1 + es.alpha(p) - alpha + k))
            r = _poly_eval(qs, Fraction(k) - alpha)
            if r == 0:
                return 0.0
            sign = (-1.0) ** k * (1.0 if r > 0 else -1.0)
            return sign * math.exp(logmag + math.log(abs(float(r))))

        for k in range(cutoff):
            c = coeff_at(k)
            if c != 0.0:
                terms.append(MBTerm(c, Fraction(k) - alpha, kind, sgn_t2))
        tails.append((alpha, cutoff, coeff_at(cutoff)))
        top = Fraction(cutoff - 1) - alpha
        return MBSeries(terms, sgn_t2, kind, cutoff, tails, top)

    a1, a2 = es.alpha(1), es.alpha(2)
    delta_f = a1 - a2
    qs = _poly_from_pairs(es, 3)
    if delta_f == 0:
        raise PoleCollisionError("alpha_1 = alpha_2: use contour quadrature")
    if delta_f.denominator != 1 or delta_f < 0:
        # disjoint pole lattices: two independent simple families
        for alpha, other in ((a1, a2), (a2, a1)):
            def simple(k: int, alpha=alpha, other=other) -> complex:
                g = math.lgamma(float(other - alpha + k)) if other - alpha + k > 0 else None
                if g is None:
                    raise PoleCollisionError("gamma pole in simple family")
                r = _poly_eval(qs, Fraction(k) - alpha)
                if r == 0:
                    return 0.0
                sign = (-1.0) ** k * (1.0 if r > 0 else -1.0)
                return sign * math.exp(-_log_fact(k) + g + math.log(abs(float(r))))

            for k in range(cutoff):
                c = simple(k)
                if c != 0.0:
                    terms.append(MBTerm(c, Fraction(k) - alpha, kind, sgn_t2))
            tails.append((alpha, cutoff, simple(cutoff)))
        top = min(Fraction(cutoff - 1) - a1, Fraction(cutoff - 1) - a2)
        return MBSeries(terms, sgn_t2, kind, cutoff, tails, top)

    delta = int(delta_f)

    def simple_coeff(k: int) -> complex:
        r = _poly_eval(qs, Fraction(k) - a1)
        if r == 0:
            return 0.0
        sign = (-1.0) ** k * (1.0 if r > 0 else -1.0)
        return sign * math.exp(-_log_fact(k) + math.lgamma(delta - k) + math.log(abs(float(r))))

    for k in range(min(delta, cutoff)):
        c = simple_coeff(k)
        if c != 0.0:
            terms.append(MBTerm(c, Fraction(k) - a1, kind, sgn_t2))
    if cutoff <= delta:
        tails.append((a1, cutoff, simple_coeff(cutoff)))
        top = Fraction(cutoff - 1) - a1
        return MBSeries(terms, sgn_t2, kind, cutoff, tails, top)

    def double_parts(m: int) -> tuple[complex, complex]:
        """(-C (R' - (psi1+psi2) R), -C R) at s_m = m - alpha_2."""
        s_m = Fraction(m) - a2
        logC = -_log_fact(m + delta) - _log_fact(m)
        C = (-1.0) ** delta * math.exp(logC)
        r = float(_poly_eval(qs, s_m))
        rp = float(_poly_eval_deriv(qs, s_m))
        psis = float(digamma(m + delta + 1) + digamma(m + 1))
        return (-C * (rp - psis * r), -C * r)

    for m in range(cutoff - delta):
        s_m = Fraction(m) - a2
        main, logc = double_parts(m)
        if main != 0.0:
            terms.append(MBTerm(main, s_m, kind, sgn_t2))
        if logc != 0.0:
            terms.append(MBTerm(logc, s_m, kind, sgn_t2, log_power=1))
            terms.append(MBTerm(-logc, s_m, kind, sgn_t2, dnu_power=1))
    tails.append((a2, cutoff - delta, double_parts(cutoff - delta)[0]))
    tails.append((a2, cutoff - delta, double_parts(cutoff - delta)[1]))
    top = Fraction(cutoff - delta - 1) - a2
    return MBSeries(terms, sgn_t2, kind, cutoff, tails, top)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _branch_log(t2_sign: int, t2: float) -> complex:
    v = t2_sign * t2
    if v == 0:
        raise ParameterError("t2 must be nonzero")
    if v > 0:
        return complex(math.log(v))
    return complex(math.log(-v), math.pi)


def evaluate_terms(terms: Iterable[MBTerm], t1: float, t2: float) -> complex:
    groups: dict[tuple[str, int], list[MBTerm]] = {}
    for term in terms:
        groups.setdefault((term.kind, term.dnu_power), []).append(term)
    total: complex = 0.0
    for (kind, dnu), batch in groups.items():
        orders = np.array([complex(float(t.order()), 0.0) for t in batch])
        if kind == "K":
            bvals = bessel_K(orders, t1, dnu=dnu)
        else:
            bvals = bessel_I(orders, t1, dnu=dnu)
        for term, b in zip(batch, np.atleast_1d(bvals)):
            L = _branch_log(term.t2_sign, t2)
            val = term.coeff * np.exp(float(term.s) * L)
            if term.log_power:
                val *= L ** term.log_power
            if term.t1_pow:
                val *= t1 ** term.t1_pow
            total += val * b
    return complex(total)


def evaluate(series: MBSeries, t1: float, t2: float) -> tuple[complex, float]:
    """Series value at (t1, t2) with a tail estimate from the first dropped
    coefficient of each family (factorial decay makes one term a safe
    proxy up to the factor 2 applied)."""
    value = evaluate_terms(series.terms, t1, t2)
    err = 0.0
    for alpha, k_next, c_next in series.tails:
        if c_next == 0.0:
            continue
        probe = MBTerm(abs(c_next), Fraction(k_next) - alpha, series.kind, series.t2_sign)
        err += 2.0 * abs(evaluate_terms([probe], t1, abs(t2)))
    return value, err


# ---------------------------------------------------------------------------
# Euler-operator action on terms
# ---------------------------------------------------------------------------

def _theta2_on(term: MBTerm) -> list[MBTerm]:
    out = [replace(term, coeff=term.coeff * complex(float(term.s)))]
    if term.log_power:
        out.append(replace(term, coeff=term.coeff * term.log_power, log_power=term.log_power - 1))
    return out


def _theta1_on(term: MBTerm) -> list[MBTerm]:
    eps = -0.5 if term.kind == "K" else 0.5
    nu = term.order()
    out = []
    if term.t1_pow:
        out.append(replace(term, coeff=term.coeff * term.t1_pow))
    out.append(replace(term, coeff=term.coeff * eps, nu=nu - 1, t1_pow=term.t1_pow + 1))
    out.append(replace(term, coeff=term.coeff * eps, nu=nu + 1, t1_pow=term.t1_pow + 1))
    return out


def apply_euler_termwise(op: EulerOp, series: MBSeries, merge: bool = True) -> MBSeries:
    """Exact symbolic action of an Euler operator on the series, using
    th2 (s t2)^s = s (...)^s, th2 log = 1, and the Bessel derivative
    recurrences B' = eps (B_{nu-1} + B_{nu+1}) (eps = -1/2 for K, +1/2 for I).
    Output terms carry shifted orders and explicit t1 powers."""
    out: list[MBTerm] = []
    for (e1, e2, d1, d2), c in op.terms.items():
        for term in series.terms:
            work = [replace(term, coeff=term.coeff * complex(Fraction(c)))]
            for _ in range(d2):
                work = [w2 for w in work for w2 in _theta2_on(w)]
            for _ in range(d1):
                work = [w2 for w in work for w2 in _theta1_on(w)]
            for w in work:
                sign_fix = (series.t2_sign) ** (e2 % 2) if e2 else 1
                out.append(
                    replace(
                        w,
                        coeff=w.coeff * sign_fix,
                        s=w.s + e2,
                        nu=w.order(),
                        t1_pow=w.t1_pow + e1,
                    )
                )
    new_top = None if series.interior_top is None else series.interior_top + min(
        (k[1] for k in op.terms), default=0
    )
    if merge:
        merged: dict[tuple, complex] = {}
        for t in out:
            key = (t.s, t.log_power, t.nu, t.t1_pow, t.dnu_power)
            merged[key] = merged.get(key, 0.0) + t.coeff
        out = [
            MBTerm(cf, s, series.kind, series.t2_sign, lp, nu, tp, dp)
            for (s, lp, nu, tp, dp), cf in merged.items()
            if cf != 0.0
        ]
    return MBSeries(out, series.t2_sign, series.kind, series.cutoff, [], new_top)


# ---------------------------------------------------------------------------
# recurrence reduction and annihilation residuals
# ---------------------------------------------------------------------------

def _reduce_group(terms: list[MBTerm], kind: str) -> tuple[dict, float]:
    """Reduce a fixed-(s, log) group to the basis {B_{nu0}, B_{nu0+1},
    dB_{nu0}, dB_{nu0+1}} with Laurent-in-t1 coefficients; returns
    ({(tag, du, t1pow): coeff}, positive scale accumulator).

    kappa = +1 for K (K_{nu+1} = K_{nu-1} + (2nu/x) K_nu), -1 for I.
    """
    kappa = 1.0 if kind == "K" else -1.0
    nu0 = min(t.order() for t in terms)
    acc: dict[tuple[int, int, int], complex] = {}
    acc_abs: dict[tuple[int, int, int], float] = {}

    work = [(t.order(), t.dnu_power, t.t1_pow, t.coeff, abs(t.coeff)) for t in terms]
    while work:
        nu, du, tp, c, mag = work.pop()
        if du > 1:
            raise UnsupportedLogTermError("second order-derivatives unsupported")
        k = nu - nu0
        if k in (0, 1):
            key = (int(k), du, tp)
            acc[key] = acc.get(key, 0.0) + c
            acc_abs[key] = acc_abs.get(key, 0.0) + mag
            continue
        if k > 1:
            # B_nu = B_{nu-2} + kappa 2(nu-1)/x B_{nu-1}
            mid = nu - 1
            work.append((nu - 2, du, tp, c, mag))
            f = kappa * 2.0 * float(mid)
            work.append((mid, du, tp - 1, c * f, mag * abs(f)))
            if du == 1:
                work.append((mid, 0, tp - 1, c * kappa * 2.0, mag * 2.0))
        else:
            # B_nu = B_{nu+2} - kappa 2(nu+1)/x B_nu+1
            mid = nu + 1
            work.append((nu + 2, du, tp, c, mag))
            f = -kappa * 2.0 * float(mid)
            work.append((mid, du, tp - 1, c * f, mag * abs(f)))
            if du == 1:
                work.append((mid, 0, tp - 1, -c * kappa * 2.0, mag * 2.0))
    return acc, acc_abs


def annihilation_residuals(series: MBSeries, floor: float = 0.0) -> float:
    """Largest interior relative residual of the (already operator-applied)
    series: group by (s, log power), Bessel-reduce, and compare each basis
    coefficient against the positive-part sum of its contributions.  Groups
    above the recorded interior_top are truncation-contaminated and skipped;
    groups whose scale falls below floor times the global scale are roundoff
    debris from earlier merged operator applications and are skipped too."""
    groups: dict[tuple[Fraction, int], list[MBTerm]] = {}
    for t in series.terms:
        if series.interior_top is not None and t.s > series.interior_top:
            continue
        groups.setdefault((t.s, t.log_power), []).append(t)
    reduced = []
    global_scale = 0.0
    for (_, _), batch in groups.items():
        acc, acc_abs = _reduce_group(batch, series.kind)
        scale = max(acc_abs.values(), default=0.0)
        global_scale = max(global_scale, scale)
        reduced.append((acc, scale))
    worst = 0.0
    for acc, scale in reduced:
        if scale <= floor * global_scale or scale == 0.0:
            continue
        resid = max((abs(c) for c in acc.values()), default=0.0)
        worst = max(worst, resid / scale)
    return worst
