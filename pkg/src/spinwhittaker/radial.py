"""Radial structure attached to distinguished Gelfand-Tsetlin patterns.

For patterns satisfying the three distinguished-shape conditions at a level
m' the coefficient function of the Whittaker system obeys two scalar Euler
ODEs whose characteristic exponents (alpha, beta) are read off K-sets of
valid shifts.  This module builds those objects exactly, together with the
shift operators S1, S2, S3 and the two rational summation identities used
to derive the second ODE.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InternalConsistencyError, ParameterError
from .euler import EulerOp, divided_bracket, product_theta2
from .gt import GTPattern, apply_shift, compose_shifts, l_coord, tau, tau_valid
from .halfint import HalfInt
from .params import Chamber, HCParam, blattner, classify


# ---------------------------------------------------------------------------
# distinguished patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistinguishedPattern:
    """A pattern satisfying the flat-top condition (rows 2n-2, 2n-3, 2n-4
    agree on [1, m-2]), the q_{2n-4} window, and the level-m' shape."""

    Q: GTPattern
    m: int
    m_prime: int

    def __post_init__(self):
        n = self.Q.n
        if not 2 <= self.m <= n:
            raise ParameterError(f"need 2 <= m <= n, got m={self.m}")
        if not self.m - 1 <= self.m_prime <= n - 1:
            raise ParameterError(f"need m-1 <= m' <= n-1, got m'={self.m_prime}")
        if not self.Q.is_valid():
            raise ParameterError("pattern is not a valid GT pattern")
        ok, why = check_distinguished(self.Q, self.m, self.m_prime)
        if not ok:
            raise ParameterError(f"pattern is not distinguished at level {self.m_prime}: {why}")

    @property
    def n(self) -> int:
        return self.Q.n

    @property
    def lam(self) -> tuple[HalfInt, ...]:
        return self.Q.lam

    def window_value(self) -> HalfInt:
        return self.Q.q(2 * self.n - 2, self.m_prime)


def _cond_flat_top(Q: GTPattern, m: int) -> tuple[bool, str]:
    n = Q.n
    if n == 2:
        return True, ""
    for p in range(1, m - 1):
        if not (Q.q(2 * n - 2, p) == Q.q(2 * n - 3, p) == Q.q(2 * n - 4, p)):
            return False, f"rows 2n-2..2n-4 differ at p={p}"
    return True, ""


def _cond_window(Q: GTPattern, m: int) -> tuple[bool, str]:
    n = Q.n
    if n == 2:
        return True, ""
    lam = Q.lam
    for k in range(1, m - 1):
        if not (lam[k - 1] >= Q.q(2 * n - 4, k) >= lam[k]):
            return False, f"q_{{2n-4,{k}}} outside [lambda_{k + 1}, lambda_{k}]"
    for k in range(m - 1, n - 2):
        if not (lam[k] >= Q.q(2 * n - 4, k) >= lam[k + 1]):
            return False, f"q_{{2n-4,{k}}} outside [lambda_{k + 2}, lambda_{k + 1}]"
    if not (lam[n - 2] >= Q.q(2 * n - 4, n - 2) >= abs(lam[n - 1])):
        return False, "q_{2n-4,n-2} outside [|lambda_n|, lambda_{n-1}]"
    return True, ""


def _cond_level_shape(Q: GTPattern, m: int, mp: int) -> tuple[bool, str]:
    n = Q.n
    lam = Q.lam
    for p in range(m - 1, mp):
        if Q.q(2 * n - 2, p) != lam[p]:
            return False, f"q_{{2n-2,{p}}} != lambda_{p + 1}"
        if n > 2 and Q.q(2 * n - 3, p) != Q.q(2 * n - 4, p):
            return False, f"q_{{2n-3,{p}}} != q_{{2n-4,{p}}}"
    for p in range(mp + 1, n):
        if Q.q(2 * n - 2, p) != lam[p - 1]:
            return False, f"q_{{2n-2,{p}}} != lambda_{p}"
        if Q.q(2 * n - 3, p) != Q.q(2 * n - 4, p - 1):
            return False, f"q_{{2n-3,{p}}} != q_{{2n-4,{p - 1}}}"
    v = Q.q(2 * n - 2, mp)
    if Q.q(2 * n - 3, mp) != v:
        return False, f"q_{{2n-2,{mp}}} != q_{{2n-3,{mp}}}"
    if mp >= m:
        lo, hi = lam[mp], Q.q(2 * n - 4, mp - 1)
    else:  # mp = m - 1
        lo, hi = lam[m - 1], lam[m - 2]
    if not (lo <= v <= hi):
        return False, f"window value {v} outside [{lo}, {hi}]"
    return True, ""


def check_distinguished(Q: GTPattern, m: int, m_prime: int) -> tuple[bool, str]:
    for cond in (_cond_flat_top(Q, m), _cond_window(Q, m), _cond_level_shape(Q, m, m_prime)):
        if not cond[0]:
            return cond
    return True, ""


def _max_fill_below(rows_above: list, r_top: int) -> list:
    """Complete rows r_top-1 .. 1 with the maximal allowed entries."""
    from .gt import row_width

    rows = list(rows_above)
    for r in range(r_top - 1, 0, -1):
        above = rows[0]
        w = row_width(r)
        rows.insert(0, tuple(above[j] for j in range(w)))
    return rows


def build_distinguished(
    lam: Sequence,
    m: int,
    m_prime: int,
    window: Sequence | str = "max",
    q_2n4: Sequence | None = None,
) -> DistinguishedPattern:
    """A canonical distinguished pattern: q_{2n-4} defaults to the maximum of
    its windows, the level value to 'max' (= Q_{m'}^+), 'min' (= Q_{m'}^-) or
    an explicit half-integer; lower rows are filled maximally."""
    lam_t = [x if isinstance(x, HalfInt) else HalfInt(x) for x in lam]
    n = len(lam_t)
    if n == 2:
        if m != 2 or m_prime != 1:
            raise ParameterError("n = 2 has only (m, m') = (2, 1)")
        if window == "max":
            v = lam_t[0]
        elif window == "min":
            v = lam_t[1]
        else:
            v = window if isinstance(window, HalfInt) else HalfInt(window)
        rows = [(v,), (v,), tuple(lam_t)]
        return DistinguishedPattern(GTPattern(rows), m, m_prime)

    if q_2n4 is None:
        # maximal entry of each (5.11)-window; for m = n the k = n-2 windows
        # overlap and the intersection collapses to lambda_{n-1}
        vals = []
        for k in range(1, n - 1):
            uppers = []
            if k <= m - 2:
                uppers.append(lam_t[k - 1])
            if m - 1 <= k <= n - 3:
                uppers.append(lam_t[k])
            if k == n - 2:
                uppers.append(lam_t[n - 2])
            vals.append(min(uppers))
        q_2n4 = vals
    q4 = [x if isinstance(x, HalfInt) else HalfInt(x) for x in q_2n4]

    if window == "max":
        v = q4[m_prime - 2] if m_prime >= m else lam_t[m - 2]
    elif window == "min":
        v = lam_t[m_prime] if m_prime >= m else lam_t[m - 1]
    else:
        v = window if isinstance(window, HalfInt) else HalfInt(window)

    row2n2 = []
    row2n3 = []
    for p in range(1, n):
        if p <= m - 2:
            row2n2.append(q4[p - 1])
            row2n3.append(q4[p - 1])
        elif p < m_prime:
            row2n2.append(lam_t[p])
            row2n3.append(q4[p - 1])
        elif p == m_prime:
            row2n2.append(v)
            row2n3.append(v)
        else:
            row2n2.append(lam_t[p - 1])
            row2n3.append(q4[p - 2])
    rows_top = [tuple(q4), tuple(row2n3), tuple(row2n2), tuple(lam_t)]
    rows = _max_fill_below(rows_top, 2 * n - 4)
    return DistinguishedPattern(GTPattern(rows), m, m_prime)


def corner_plus(lam: Sequence, m: int, m_prime: int | None = None) -> DistinguishedPattern:
    """Q_{m'}^+ (default m' = n-1, the corner vector)."""
    n = len(list(lam))
    return build_distinguished(lam, m, n - 1 if m_prime is None else m_prime, window="max")


def corner_minus(lam: Sequence, m: int, m_prime: int | None = None) -> DistinguishedPattern:
    n = len(list(lam))
    return build_distinguished(lam, m, n - 1 if m_prime is None else m_prime, window="min")


# ---------------------------------------------------------------------------
# K-sets, J, d
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KSets:
    K1: tuple[int, ...]
    K2: tuple[int, ...]
    K3: tuple[int, ...]
    K4: tuple[int, ...]
    K5: tuple[int, ...]
    K6: tuple[int, ...]
    K7: tuple[int, ...]
    J: tuple[int, ...]
    I1: tuple[int, ...]
    I2: tuple[int, ...]


def build_ksets(dp: DistinguishedPattern) -> KSets:
    Q, n, mp, m = dp.Q, dp.n, dp.m_prime, dp.m
    K1 = tuple(p for p in range(1, mp) if tau_valid(Q, p, 0))
    K2 = tuple(p for p in range(1, mp) if p not in K1)
    K3 = tuple(p for p in range(-n + 2, -mp + 1) if tau_valid(Q, p, 0))
    K4 = tuple(p for p in range(-n + 2, -mp + 1) if p not in K3)
    K5 = tuple(p - 1 for p in K3)
    K6 = tuple(
        j
        for j in list(range(m - 1, mp + 1)) + list(range(-n + 1, -mp + 1))
        if tau_valid(Q, 0, j)
    )
    K7 = tuple(
        [p for p in range(m - 1, mp) if p + 1 in K6]
        + [p for p in range(-n + 1, -mp) if p in K6]
    )
    J = tuple(list(range(-n + 1, -mp)) + list(range(m - 1, mp)))
    I1 = tuple(sorted(set(K1) | set(K5) | {0}))
    tail = -n + 1 if tau_valid(Q, -n + 1, 0) else n - 1
    I2 = tuple(sorted(set(K1) | set(K3) | {tail}))
    return KSets(K1, K2, K3, K4, K5, K6, K7, J, I1, I2)


def d_value(dp: DistinguishedPattern) -> HalfInt:
    """d_{m'}(Q) = sum_{p in J u {m'}} l_{2n-2,-p} + sum_{p in J} l_{2n-3,p}."""
    Q, n, mp = dp.Q, dp.n, dp.m_prime
    J = list(range(-n + 1, -mp)) + list(range(dp.m - 1, mp))
    total = HalfInt(0)
    for p in J + [mp]:
        total = total + l_coord(Q, 2 * n - 2, -p)
    for p in J:
        total = total + l_coord(Q, 2 * n - 3, p)
    return total


# ---------------------------------------------------------------------------
# exponent systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentSystem:
    """Characteristic exponents of the two scalar equations at (Q, m')."""

    N1: int
    N2: int
    alphas: tuple[Fraction, ...]          # alpha_1 .. alpha_{N2}
    betas: tuple[Fraction, ...]           # beta_3 .. beta_{N2}
    d: HalfInt
    sign: int                             # chamber sign (+1 upper readings)
    m_prime: int
    js: tuple[int, ...] = ()              # j_3..j_{N1} in K6 cap [m, m']
    ks: tuple[int, ...] = ()              # k_{N1+1}..k_{N2}
    l_slot: Optional[Fraction] = None     # sign*Lambda_n + l_{2n-2,m'} - 1

    def alpha(self, p: int) -> Fraction:
        return self.alphas[p - 1]

    def beta(self, p: int) -> Fraction:
        return self.betas[p - 3]

    def beta_list(self) -> list[Fraction]:
        return list(self.betas)

    def validate_ordering(self) -> None:
        """alpha_1 >= alpha_2 >= beta_3 > alpha_3 >= ... > alpha_{N1} > 0
        >= beta_{N1+1} > alpha_{N1+1} >= ... with beta_p - alpha_p >= 2."""
        a, N1, N2 = self.alphas, self.N1, self.N2
        ok = len(a) == N2 and len(self.betas) == N2 - 2 and a[0] >= a[1]
        for p in range(3, N2 + 1):
            b = self.beta(p)
            ok = ok and (a[p - 2] >= b > a[p - 1]) and (b - a[p - 1] >= 2)
        ok = ok and a[N1 - 1] > 0
        if N2 > N1:
            ok = ok and 0 >= self.beta(N1 + 1)
        if not ok:
            raise InternalConsistencyError(f"exponent ordering violated: {self}")


def exponents(dp: DistinguishedPattern, lam_hc: HCParam, chamber: Chamber | None = None) -> ExponentSystem:
    """alpha/beta exponents for the scalar system of (Q, m')."""
    if chamber is None:
        chamber = classify(lam_hc)
    if chamber.m != dp.m:
        raise ParameterError(f"chamber index m={chamber.m} does not match dp.m={dp.m}")
    n, mp, m = dp.n, dp.m_prime, dp.m
    Q = dp.Q
    s = chamber.sign
    Ln = lam_hc.entries[n - 1].as_fraction() * s
    Lnp1 = lam_hc.entries[n].as_fraction() * s
    ks = build_ksets(dp)
    js = tuple(sorted(j for j in ks.K6 if m <= j <= mp))
    kneg = tuple(sorted(k for k in ks.K6 if -n + 1 <= k <= -mp - 1))
    N1 = 2 + len(js)
    N2 = N1 + len(kneg)

    lv = lambda r, j: l_coord(Q, r, j).as_fraction()
    alphas: list[Fraction] = []
    betas: list[Fraction] = []
    if mp >= m:
        alphas.append(Ln + Lnp1)
        alphas.append(Ln + lv(2 * n - 2, m - 1) - 1)
        for j in js:
            alphas.append(Ln + lv(2 * n - 2, j) - 1)
        for k in kneg:
            alphas.append(Ln + lv(2 * n - 2, k) - 1)
        for j in js:
            betas.append(Ln + lv(2 * n - 3, j - 1))
        for k in kneg:
            betas.append(Ln + lv(2 * n - 3, k))
    else:
        other = Ln + lv(2 * n - 2, m - 1) - 1
        first = Ln + Lnp1
        alphas.append(max(first, other))
        alphas.append(min(first, other))
        for k in kneg:
            alphas.append(Ln + lv(2 * n - 2, k) - 1)
        for k in kneg:
            betas.append(Ln + lv(2 * n - 3, k))
    es = ExponentSystem(
        N1,
        N2,
        tuple(alphas),
        tuple(betas),
        d_value(dp),
        s,
        mp,
        js,
        kneg,
        Ln + lv(2 * n - 2, mp) - 1,
    )
    es.validate_ordering()
    return es


def make_exponent_system(alphas: Sequence, betas: Sequence = (), sign: int = 1, d: int = 0, m_prime: int = 1) -> ExponentSystem:
    """Free-standing system (for tests and the CLI), ordering-checked."""
    a = tuple(Fraction(x) for x in alphas)
    b = tuple(Fraction(x) for x in betas)
    N2 = len(a)
    N1 = sum(1 for x in a if x > 0)  # alpha_{N1} > 0 > alpha_{N1+1}
    es = ExponentSystem(N1, N2, a, b, HalfInt(d), sign, m_prime)
    es.validate_ordering()
    return es


# ---------------------------------------------------------------------------
# the two scalar equations and the shift operators
# ---------------------------------------------------------------------------

def ode_system(es: ExponentSystem) -> tuple[EulerOp, EulerOp]:
    """(th1^2 - th2^2 - t1^2,
        prod(th2 + alpha_p) + (t2/t1)(th1 - th2) prod(th2 + beta_p))."""
    op1 = (
        EulerOp.theta(1) ** 2
        - EulerOp.theta(2) ** 2
        - EulerOp.monomial(1, 2, 0)
    )
    op2 = product_theta2(es.alphas) + EulerOp.monomial(1, -1, 1) * (
        EulerOp.theta(1) - EulerOp.theta(2)
    ) * product_theta2(es.betas)
    return op1, op2


def s1_op(dp: DistinguishedPattern, es: ExponentSystem) -> EulerOp:
    """First shift operator S1(m', Q), singling out the alpha slot equal to
    sign*Lambda_n + l_{2n-2,m'}(Q) - 1 (= alpha_{N1} generically; = alpha_1
    in the m' = m-1 regime past the max/min swap)."""
    Q, n, mp = dp.Q, dp.n, dp.m_prime
    if compose_shifts(Q, [(2 * n - 3, mp), (2 * n - 2, mp)]) is None:
        raise ParameterError("tau_{m',m'} Q is not a valid pattern; S1 undefined")
    slot = es.l_slot
    try:
        idx = es.alphas.index(slot)
    except ValueError as exc:
        raise ParameterError(f"slot exponent {slot} not among alphas {es.alphas}") from exc
    first = EulerOp.monomial(1, -1, -1) * (EulerOp.theta(1) + EulerOp.theta(2)) * product_theta2(
        [a for p, a in enumerate(es.alphas) if p != idx]
    )
    return first + divided_bracket(es.betas, es.alphas[idx])


def s2_op_range(q_from, q_to, lam_n_signed, n: int, m_prime: int) -> EulerOp:
    """prod_{q=q_from}^{q_to} (th2 + sign*Lambda_n - q - n + m'); identity
    when the range is empty."""
    out = EulerOp.const(1)
    th2 = EulerOp.theta(2)
    lo = Fraction(q_from if not isinstance(q_from, HalfInt) else q_from.as_fraction())
    hi = Fraction(q_to if not isinstance(q_to, HalfInt) else q_to.as_fraction())
    Ln = Fraction(lam_n_signed if not isinstance(lam_n_signed, HalfInt) else lam_n_signed.as_fraction())
    q = lo
    while q <= hi:
        out = out * (th2 + EulerOp.const(Ln - q - n + m_prime))
        q += 1
    return out


def s2_op(dp: DistinguishedPattern, lam_hc: HCParam, chamber: Chamber | None = None) -> EulerOp:
    """S2(m'): moves Q_{m'}^+ to Q_{m'-1}^- (requires m' >= m)."""
    if chamber is None:
        chamber = classify(lam_hc)
    n, mp = dp.n, dp.m_prime
    if mp < dp.m:
        raise ParameterError("S2 needs m' >= m")
    lam = dp.lam
    q_lo = dp.Q.q(2 * n - 4, mp - 1).as_fraction() if n > 2 else lam[0].as_fraction()
    q_hi = lam[mp - 1].as_fraction() - 1
    Ln = lam_hc.entries[n - 1].as_fraction() * chamber.sign
    return s2_op_range(q_lo, q_hi, Ln, n, mp)


def s3_op(es: ExponentSystem) -> EulerOp:
    """S3 = prod_{p=3}^{N2} prod_{q=alpha_p+1}^{beta_p-1} (-th2 - q)."""
    out = EulerOp.const(1)
    th2 = EulerOp.theta(2)
    for p in range(3, es.N2 + 1):
        q = es.alpha(p) + 1
        while q <= es.beta(p) - 1:
            out = out * (-th2 - EulerOp.const(q))
            q += 1
    return out


# ---------------------------------------------------------------------------
# the rational summation identities
# ---------------------------------------------------------------------------

def check_summation_identity(which: int, xs: Sequence, ys: Sequence, z) -> Fraction:
    """Exact residual (LHS - RHS) of the two partial-fraction identities:

    (1)  sum_i prod_j (x_i+y_j) prod_{i'!=i} (z-x_{i'}) / prod_{i'!=i}(x_i-x_{i'})
           = prod_i (z+y_i)                       (y has k-1 entries)
    (2)  sum_i prod_j (x_i+y_j) / [(z+x_i) prod_{i'!=i}(x_i-x_{i'})]
           = 1 - prod(z-y_i)/prod(z+x_i)          (y has k entries)
    """
    xs = [Fraction(x) for x in xs]
    ys = [Fraction(y) for y in ys]
    z = Fraction(z)
    k = len(xs)
    if which == 1:
        if len(ys) != k - 1:
            raise ParameterError("identity 1 needs k-1 y-values")
        lhs = Fraction(0)
        for i in range(k):
            num = math.prod([xs[i] + y for y in ys], start=Fraction(1))
            num *= math.prod([z - xs[ip] for ip in range(k) if ip != i], start=Fraction(1))
            den = math.prod([xs[i] - xs[ip] for ip in range(k) if ip != i], start=Fraction(1))
            if den == 0:
                raise ParameterError("coincident x-values")
            lhs += num / den
        rhs = math.prod([z + y for y in ys], start=Fraction(1))
        return lhs - rhs
    if which == 2:
        if len(ys) != k:
            raise ParameterError("identity 2 needs k y-values")
        lhs = Fraction(0)
        for i in range(k):
            num = math.prod([xs[i] + y for y in ys], start=Fraction(1))
            den = (z + xs[i]) * math.prod(
                [xs[i] - xs[ip] for ip in range(k) if ip != i], start=Fraction(1)
            )
            if den == 0:
                raise ParameterError("pole configuration rejected")
            lhs += num / den
        denom = math.prod([z + x for x in xs], start=Fraction(1))
        if denom == 0:
            raise ParameterError("pole configuration rejected")
        rhs = 1 - math.prod([z - y for y in ys], start=Fraction(1)) / denom
        return lhs - rhs
    raise ParameterError("identity index must be 1 or 2")
