"""Numeric residuals of the first-order relations between coefficient
functions of neighboring patterns.

Each relation is assembled as a list of (scalar, EulerOp, pattern) triples:
scalar carries the a-coefficient products and explicit i factors, the
operator the D1/D2 pieces (exact monomials in t, since eta2 a1 / 2 a2 =
-sign t2/t1 and eta1/a1 = t1), and the pattern names whose theta-jet the
term consumes.  Supplied jets are never differentiated numerically.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import ParameterError
from .euler import EulerOp, product_theta2
from .gt import GTPattern, a_coeff, compose_shifts, l_coord, tau
from .halfint import HalfInt
from .params import Chamber, HCParam, blattner, classify
from .radial import DistinguishedPattern, build_ksets, d_value
from .evalfn import TCoords, to_t

RELATIONS = (
    "5.14(1)",
    "5.15(1)",
    "5.15(2)",
    "5.19(1)",
    "5.22",
    "5.9(2)",
    "5.10(2)",
    "5.10(3)",
)

Term = tuple[complex, EulerOp, Optional[GTPattern]]  # None pattern = dropped


@dataclass
class RelationContext:
    dp: DistinguishedPattern
    lam_hc: HCParam
    chamber: Chamber

    def __post_init__(self):
        self.n = self.dp.n
        self.m = self.chamber.m
        self.s = self.chamber.sign
        self.Q = self.dp.Q
        self.mp = self.dp.m_prime
        self.bw = blattner(self.lam_hc, self.chamber)
        self.u = EulerOp.monomial(-self.s, -1, 1)  # eta2 a1/(2 a2) = -sign t2/t1
        self.t1 = EulerOp.monomial(1, 1, 0)        # eta1/a1
        self.inv_t1 = EulerOp.monomial(1, -1, 0)   # a1/eta1

    def lf(self, r: int, j: int) -> Fraction:
        return l_coord(self.Q, r, j).as_fraction()

    def D1(self, sigma: int) -> EulerOp:
        return -EulerOp.theta(1) + EulerOp.const(self.n - 1) + sigma * self.u

    def D2(self, sigma: int) -> EulerOp:
        c = Fraction(self.m - 2)
        for p in range(1, self.m):
            c += self.lf(2 * self.n - 1, p)
        for p in range(1, self.m - 1):
            c -= self.lf(2 * self.n - 2, p)
        c += sigma * self.bw.lam_np1.as_fraction()
        return -EulerOp.theta(2) + EulerOp.const(c) + sigma * self.u

    # -- coefficient functions ----------------------------------------------
    def a_val(self, Q: GTPattern, r: int, j: int) -> complex:
        return a_coeff(Q, r, j).value

    def A(self, j: int) -> complex:
        n, m = self.n, self.m
        Qj = tau(self.Q, 0, j)
        if Qj is None:
            return 0.0
        num = self.a_val(Qj, 2 * n - 2, -j)
        frac = Fraction(1)
        for p in range(1, m - 1):
            frac *= self.lf(2 * n - 2, j) - self.lf(2 * n - 2, p)
        for p in range(1, m):
            den = self.lf(2 * n - 2, j) + self.lf(2 * n - 1, -p)
            if den == 0:
                raise ParameterError("vanishing denominator in A_j")
            frac /= den
        return num * float(frac)

    def B(self, jp: int, j: int) -> complex:
        n, m = self.n, self.m
        Qjp = tau(self.Q, 0, jp)
        if Qjp is None:
            return 0.0
        num = self.a_val(Qjp, 2 * n - 2, -jp)
        frac = Fraction(1)
        for p in list(range(-n + 1, -m + 2)) + list(range(0, n)):
            if p == j:
                continue
            frac *= self.lf(2 * n - 2, jp) - self.lf(2 * n - 2, p)
        for p in list(range(-n, 0)) + list(range(m, n + 1)):
            den = self.lf(2 * n - 2, jp) + self.lf(2 * n - 1, p)
            if den == 0:
                raise ParameterError("vanishing denominator in B_j'")
            frac /= den
        return num * float(frac)

    def V_terms(self, jp: int, sigma: int) -> list[Term]:
        """V_{j'}^sigma(Q; a) as (scalar, op, pattern) terms."""
        n = self.n
        out: list[Term] = [
            (1.0, self.D1(sigma) + EulerOp.const(self.lf(2 * n - 2, jp)), tau(self.Q, 0, jp))
        ]
        for i in [x for x in range(-n + 1, n) if x != 0]:
            Qij = compose_shifts(self.Q, [(2 * n - 3, i), (2 * n - 2, jp)])
            if Qij is None:
                continue
            a = self.a_val(Qij, 2 * n - 3, -i)
            if a == 0:
                continue
            den = self.lf(2 * n - 3, i) - self.lf(2 * n - 2, jp)
            out.append((1j * a / float(den), self.t1, Qij))
        return out


def _divided_difference(roots: Sequence[Fraction], x: Fraction, X: EulerOp) -> EulerOp:
    """[prod (X - r) - prod (x - r)] / (X - x) as a polynomial in the
    operator X: sum_i prod_{j<i}(X - r_j) * prod_{j>i}(x - r_j)."""
    out = EulerOp.zero()
    for i in range(len(roots)):
        piece = EulerOp.const(1)
        for r in roots[:i]:
            piece = piece * (X - EulerOp.const(r))
        scal = Fraction(1)
        for r in roots[i + 1:]:
            scal *= x - r
        out = out + piece * scal
    return out


def relation_terms(relation: str, ctx: RelationContext, index: int | None = None) -> list[Term]:
    """(scalar, operator, pattern) terms of the named relation, as LHS - RHS
    of the corresponding display; the residual of a true solution is 0."""
    n, m, mp, s = ctx.n, ctx.m, ctx.mp, ctx.s
    Q = ctx.Q
    lf = ctx.lf
    J = list(range(-n + 1, -mp)) + list(range(m - 1, mp))
    d = d_value(ctx.dp).as_fraction()
    lam_n = lf(2 * n - 1, n)

    if relation == "5.14(1)":
        Qi = tau(Q, -mp, 0)
        if Qi is None:
            raise ParameterError("tau_{-m',0} Q invalid; relation vacuous")
        num = ctx.a_val(Qi, 2 * n - 3, mp)
        frac = Fraction(1)
        for p in J:
            frac *= lf(2 * n - 3, -mp) - lf(2 * n - 3, p)
        for p in J + [0]:
            frac /= lf(2 * n - 3, -mp) + lf(2 * n - 2, -p)
        lhs: list[Term] = [(-1j * num * float(frac), ctx.t1, Qi)]
        rhs_op = (
            s * lf(2 * n - 1, n) / lf(2 * n - 2, -mp) * ctx.D2(s)
            + ctx.D1(-s)
            + EulerOp.const(-d + lf(2 * n - 2, -mp))
        )
        return lhs + [(-1.0, rhs_op, Q)]

    if relation == "5.15(1)":
        Qmm = compose_shifts(Q, [(2 * n - 3, -mp), (2 * n - 2, -mp)])
        Qi = tau(Q, -mp, 0)
        if Qmm is None or Qi is None:
            raise ParameterError("required shifted patterns invalid")
        Bv = _B_on(ctx, Qmm, mp, mp)  # B_{m'}(m', tau_{-m',-m'} Q)
        if Bv == 0:
            raise ParameterError("vanishing B_{m'}")
        frac = (2 * lf(2 * n - 2, -mp) + 1)
        for p in J:
            frac *= lf(2 * n - 2, -mp) + lf(2 * n - 3, p)
        for p in J + [0]:
            frac /= lf(2 * n - 2, -mp) - lf(2 * n - 2, -p)
        lhs = [
            (
                -s * 1j / Bv * float(frac),
                (ctx.D2(s) - EulerOp.const(lf(2 * n - 2, -mp))),
                Qmm,
            )
        ]
        op1 = (
            -s * lam_n / lf(2 * n - 2, -mp) * ctx.D2(s)
            + ctx.D1(-s)
            + EulerOp.const(-d - lf(2 * n - 2, -mp) - 1)
        )
        a0 = ctx.a_val(Q, 2 * n - 3, -mp)
        frac2 = (2 * lf(2 * n - 3, mp) - 2)
        for p in J:
            frac2 *= lf(2 * n - 3, mp) - lf(2 * n - 3, p) - 1
        for p in J + [0, mp]:
            frac2 /= lf(2 * n - 3, mp) + lf(2 * n - 2, -p) - 1
        rhs = [(1.0, op1, Qi), (1j * a0 * float(frac2), ctx.t1, Q)]
        return lhs + [(-c, op, pat) for c, op, pat in rhs]

    if relation == "5.15(2)":
        Qmm = compose_shifts(Q, [(2 * n - 3, -mp), (2 * n - 2, -mp)])
        Qi = tau(Q, -mp, 0)
        if Qmm is None or Qi is None:
            raise ParameterError("required shifted patterns invalid")
        denom_a = ctx.a_val(Qmm, 2 * n - 2, mp) * ctx.a_val(Qi, 2 * n - 3, mp)
        if denom_a == 0:
            raise ParameterError("vanishing a-products in 5.15(2)")
        frac = lf(2 * n - 3, -mp) - lf(2 * n - 2, -mp) + 1
        for p in list(range(-n, 0)) + list(range(m, n + 1)):
            frac *= lf(2 * n - 2, -mp) + lf(2 * n - 1, p)
        for p in list(range(-n + 1, -m + 2)) + list(range(0, n)):
            if p == -mp:
                continue
            frac /= lf(2 * n - 2, -mp) - lf(2 * n - 2, p)
        scalar = -s / denom_a * float(frac)
        rhs_op = ctx.inv_t1 * (ctx.D2(s) + EulerOp.const(lf(2 * n - 2, -mp)))
        return [(1.0, EulerOp.const(1), Qmm), (-scalar, rhs_op, Q)]

    if relation == "5.19(1)":
        if index is None:
            raise ParameterError("5.19(1) needs the K6 index k")
        k = index
        Qk = tau(Q, 0, k)
        if Qk is None:
            raise ParameterError("tau_{0,k} Q invalid")
        Bv = _B_on(ctx, Qk, -k, -k)
        if Bv == 0:
            raise ParameterError("vanishing B_{-k}")
        frac = Fraction(1)
        for p in J + [-mp]:
            frac *= lf(2 * n - 2, k) + lf(2 * n - 3, p)
        for p in J + [0]:
            frac /= lf(2 * n - 2, k) - lf(2 * n - 2, -p)
        lhs = [
            (-s * 1j / Bv * float(frac), ctx.D2(s) - EulerOp.const(lf(2 * n - 2, k)), Qk)
        ]
        rhs_op = (
            -s * lam_n / lf(2 * n - 2, k) * ctx.D2(s)
            + ctx.D1(-s)
            + EulerOp.const(-d - lf(2 * n - 2, k))
        )
        return lhs + [(-1.0, rhs_op, Q)]

    if relation == "5.22":
        if index is None:
            raise ParameterError("5.22 needs the K6 index j")
        j = index
        ks = build_ksets(ctx.dp)
        if j not in ks.K6:
            raise ParameterError(f"j={j} not in K6")
        Qj = tau(Q, 0, j)
        Aj = ctx.A(j)
        prod_scal = Fraction(1)
        for p in ks.K6:
            if p != j:
                prod_scal *= lf(2 * n - 2, j) - lf(2 * n - 2, p)
        lhs = [(-1j * Aj * float(prod_scal), ctx.u, Qj)]
        bigLam = ctx.lam_hc.entries[n].as_fraction()
        op_a = EulerOp.const(1)
        for p in ks.K6:
            if p != j:
                op_a = op_a * (ctx.D2(s) - EulerOp.const(lf(2 * n - 2, p) - 1))
        op_a = op_a * (ctx.D2(s) - EulerOp.const(s * bigLam))
        roots = [lf(2 * n - 3, p) for p in ks.K7]
        dd = _divided_difference(roots, lf(2 * n - 2, j), ctx.D2(s))
        mid = dd * (ctx.D1(-s) - ctx.D2(s) + EulerOp.const(-d - s * lam_n))
        const2 = Fraction(1)
        for p in ks.K7:
            const2 *= lf(2 * n - 2, j) - lf(2 * n - 3, p)
        tailc = (lf(2 * n - 2, j) - s * lam_n) / lf(2 * n - 2, j) * const2
        op_b = ctx.u * (mid - EulerOp.const(tailc)) * s
        return lhs + [(-1.0, op_a + op_b, Q)]

    if relation == "5.9(2)":
        if index is None:
            raise ParameterError("5.9(2) needs j in [1, m-1]")
        j = index
        bigLam = ctx.lam_hc.entries[n].as_fraction()
        op = (
            ctx.D2(s)
            + EulerOp.const(-lf(2 * n - 2, m - 1) + lf(2 * n - 2, j) - s * bigLam)
            - s * ctx.u
        )
        out: list[Term] = [(1.0, op, Q)]
        for jp in [j] + list(range(m, n)) + list(range(-n + 1, 1)):
            Qjp = tau(Q, 0, jp)
            if Qjp is None:
                continue
            a = ctx.a_val(Qjp, 2 * n - 2, -jp)
            if a == 0:
                continue
            frac = Fraction(1)
            for p in range(1, m):
                if p == j:
                    continue
                frac *= lf(2 * n - 2, jp) - lf(2 * n - 2, p)
            for p in range(1, m):
                frac /= lf(2 * n - 2, jp) + lf(2 * n - 1, -p)
            out.append((1j * a * float(frac), ctx.u, Qjp))
        return out

    if relation == "5.10(2)":
        if index is None:
            raise ParameterError("5.10(2) needs j")
        j = index
        if ctx.B(j, j) == 0:
            # the elimination behind the display degenerates (this happens on
            # the distinguished family at j = -m', where the resolved form is
            # exactly relation 5.15(2))
            raise ParameterError("degenerate pivot B_j(j, Q) = 0; use the resolved form")
        out = [(1.0, ctx.D2(s) + EulerOp.const(lf(2 * n - 2, j)), Q)]
        for jp in [j] + list(range(-m + 2, 0)):
            Bv = ctx.B(jp, j)
            if Bv == 0:
                continue
            for c, op, pat in ctx.V_terms(jp, -s):
                if pat is None:
                    continue
                out.append((-s * 1j * Bv * c, op, pat))
        return out

    if relation == "5.10(3)":
        out = [(1.0, ctx.D2(s), Q)]
        for jp in range(-m + 2, 0):
            Bv = ctx.B(jp, 0)
            if Bv == 0:
                continue
            for c, op, pat in ctx.V_terms(jp, -s):
                if pat is None:
                    continue
                out.append((-s * 1j * Bv * c, op, pat))
        frac = Fraction(1)
        for p in range(1, n):
            frac *= lf(2 * n - 3, p)
        for p in range(m, n + 1):
            frac /= lf(2 * n - 1, p)
        for p in range(1, m - 1):
            frac /= -lf(2 * n - 2, -p)
        out.append((-s * float(frac), ctx.D1(-s), Q))
        for i in [x for x in range(-n + 1, n) if x != 0]:
            Qi = tau(Q, i, 0)
            if Qi is None:
                continue
            a = ctx.a_val(Qi, 2 * n - 3, -i)
            if a == 0:
                continue
            out.append((-s * float(frac) * 1j * a / float(lf(2 * n - 3, i)), ctx.t1, Qi))
        return out

    raise ParameterError(f"unknown relation {relation!r}; known: {RELATIONS}")


def _B_on(ctx: RelationContext, base: GTPattern, jp: int, j: int) -> complex:
    """B_{j'}(j, base) with l-coordinates of base."""
    n, m = ctx.n, ctx.m
    lfb = lambda r, k: l_coord(base, r, k).as_fraction()
    Qjp = tau(base, 0, jp)
    if Qjp is None:
        return 0.0
    num = a_coeff(Qjp, 2 * n - 2, -jp).value
    frac = Fraction(1)
    for p in list(range(-n + 1, -m + 2)) + list(range(0, n)):
        if p == j:
            continue
        frac *= lfb(2 * n - 2, jp) - lfb(2 * n - 2, p)
    for p in list(range(-n, 0)) + list(range(m, n + 1)):
        frac /= lfb(2 * n - 2, jp) + lfb(2 * n - 1, p)
    return num * float(frac)


def relation_residual(
    relation: str,
    dp: DistinguishedPattern,
    lam_hc: HCParam,
    eta,
    point_a: tuple[float, float],
    values: Mapping[GTPattern, Mapping[tuple[int, int], complex]],
    index: int | None = None,
    chamber: Chamber | None = None,
) -> tuple[complex, float]:
    """(residual, scale) of the relation at the point, using the supplied
    theta-jets of the referenced coefficient functions (missing patterns
    raise KeyError; patterns outside GT(lambda) should be supplied as zero
    jets or omitted only if their coefficient factor vanishes)."""
    if chamber is None:
        chamber = classify(lam_hc)
    ctx = RelationContext(dp, lam_hc, chamber)
    t = to_t(point_a, eta, chamber.sign)
    total: complex = 0.0
    scale = 0.0
    for c, op, pat in relation_terms(relation, ctx, index=index):
        if pat is None:
            continue
        if pat not in values:
            raise KeyError(f"missing jet for pattern {pat}")
        val = c * op.apply_to_jet(values[pat], t.t1, t.t2)
        total += val
        scale += abs(val)
    return total, scale
