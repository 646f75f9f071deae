"""Exact algebra of Euler-operator polynomials.

An element is a finite sum of terms  c * t1^e1 t2^e2 * th1^d1 th2^d2  with
exact rational c, Laurent exponents e and non-negative powers d; th_i is the
Euler derivative t_i d/dt_i, acting before the monomial multiplies.  The
normal-ordering rule th^d t^e = t^e (th + e)^d makes composition exact, which
is what the shift operators and the change-of-variable checks need; floating
point enters only when an operator is evaluated against numeric data.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import InternalConsistencyError

Key = tuple[int, int, int, int]  # (e1, e2, d1, d2)
Scalar = Union[int, Fraction]


class EulerOp:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, Fraction] | None = None):
        self.terms: dict[Key, Fraction] = {}
        if terms:
            for key, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    self.terms[key] = self.terms.get(key, Fraction(0)) + c
            self.terms = {k: c for k, c in self.terms.items() if c != 0}

    # -- constructors ---------------------------------------------------------
    @staticmethod
    def zero() -> "EulerOp":
        return EulerOp()

    @staticmethod
    def const(c: Scalar) -> "EulerOp":
        return EulerOp({(0, 0, 0, 0): Fraction(c)})

    @staticmethod
    def theta(i: int) -> "EulerOp":
        if i == 1:
            return EulerOp({(0, 0, 1, 0): Fraction(1)})
        if i == 2:
            return EulerOp({(0, 0, 0, 1): Fraction(1)})
        raise IndexError("theta index must be 1 or 2")

    @staticmethod
    def monomial(c: Scalar, e1: int = 0, e2: int = 0) -> "EulerOp":
        return EulerOp({(e1, e2, 0, 0): Fraction(c)})

    # -- ring operations -------------------------------------------------------
    def __add__(self, other: "EulerOp | Scalar") -> "EulerOp":
        other = other if isinstance(other, EulerOp) else EulerOp.const(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return EulerOp(out)

    __radd__ = __add__

    def __neg__(self) -> "EulerOp":
        return EulerOp({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "EulerOp | Scalar") -> "EulerOp":
        return self + (-(other if isinstance(other, EulerOp) else EulerOp.const(other)))

    def __rsub__(self, other: Scalar) -> "EulerOp":
        return EulerOp.const(other) - self

    def __mul__(self, other: "EulerOp | Scalar") -> "EulerOp":
        """Operator composition self o other (self applied after other)."""
        if not isinstance(other, EulerOp):
            return EulerOp({k: c * Fraction(other) for k, c in self.terms.items()})
        out: dict[Key, Fraction] = {}
        for (e1, e2, d1, d2), c in self.terms.items():
            for (f1, f2, g1, g2), b in other.terms.items():
                cc = c * b
                # th1^d1 th2^d2 * t1^f1 t2^f2 = t1^f1 t2^f2 (th1+f1)^d1 (th2+f2)^d2
                for i1 in range(d1 + 1):
                    c1 = cc * math.comb(d1, i1) * Fraction(f1) ** (d1 - i1)
                    if c1 == 0:
                        continue
                    for i2 in range(d2 + 1):
                        c2 = c1 * math.comb(d2, i2) * Fraction(f2) ** (d2 - i2)
                        if c2 == 0:
                            continue
                        key = (e1 + f1, e2 + f2, i1 + g1, i2 + g2)
                        out[key] = out.get(key, Fraction(0)) + c2
        return EulerOp(out)

    def __rmul__(self, other: Scalar) -> "EulerOp":
        return self * other

    def __pow__(self, k: int) -> "EulerOp":
        if k < 0:
            raise ValueError("negative operator power")
        out = EulerOp.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EulerOp):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "EulerOp(0)"
        bits = []
        for (e1, e2, d1, d2), c in sorted(self.terms.items()):
            mono = []
            if c != 1 or (e1 == e2 == d1 == d2 == 0):
                mono.append(str(c))
            for sym, e in (("t1", e1), ("t2", e2)):
                if e:
                    mono.append(f"{sym}^{e}")
            for sym, d in (("th1", d1), ("th2", d2)):
                if d:
                    mono.append(f"{sym}^{d}" if d > 1 else sym)
            bits.append("*".join(mono))
        return "EulerOp(" + " + ".join(bits) + ")"

    # -- structure -------------------------------------------------------------
    def theta2_poly(self) -> list[Fraction]:
        """Coefficients [c_0, c_1, ...] when the operator is a pure polynomial
        in th2 (raises otherwise)."""
        coeffs: dict[int, Fraction] = {}
        for (e1, e2, d1, d2), c in self.terms.items():
            if e1 or e2 or d1:
                raise InternalConsistencyError("operator is not a polynomial in th2 alone")
            coeffs[d2] = coeffs.get(d2, Fraction(0)) + c
        deg = max(coeffs, default=0)
        return [coeffs.get(i, Fraction(0)) for i in range(deg + 1)]

    def substitute_thetas(self, w1: "EulerOp", w2: "EulerOp") -> "EulerOp":
        """The conjugated operator with th1 -> th1 + w1, th2 -> th2 + w2
        (w_i multiplication operators); composition order preserved."""
        s1 = EulerOp.theta(1) + w1
        s2 = EulerOp.theta(2) + w2
        out = EulerOp.zero()
        for (e1, e2, d1, d2), c in self.terms.items():
            piece = EulerOp.monomial(c, e1, e2)
            for _ in range(d1):
                piece = piece * s1
            for _ in range(d2):
                piece = piece * s2
            out = out + piece
        return out

    # -- evaluation --------------------------------------------------------------
    def apply_to_jet(self, jet: Mapping[tuple[int, int], complex], t1: float, t2: float) -> complex:
        """Evaluate (self f)(t) from the theta-jet of f at t:
        jet[(i, j)] = (th1^i th2^j f)(t)."""
        total: complex = 0.0
        for (e1, e2, d1, d2), c in self.terms.items():
            if (d1, d2) not in jet:
                raise KeyError(f"jet entry {(d1, d2)} missing")
            total += float(c) * (t1 ** e1) * (t2 ** e2) * jet[(d1, d2)]
        return total

    def max_theta_orders(self) -> tuple[int, int]:
        d1 = max((k[2] for k in self.terms), default=0)
        d2 = max((k[3] for k in self.terms), default=0)
        return d1, d2

    def max_t2_shift(self) -> int:
        return max((k[1] for k in self.terms), default=0)


def product_theta2(shifts: Iterable[Scalar]) -> EulerOp:
    """prod (th2 + shift) over the iterable (empty product = identity)."""
    out = EulerOp.const(1)
    th2 = EulerOp.theta(2)
    for s in shifts:
        out = out * (th2 + EulerOp.const(Fraction(s)))
    return out


def divided_bracket(betas: Sequence[Scalar], alpha: Scalar) -> EulerOp:
    """[prod(th2 + beta_p) - prod(beta_p - alpha - 1)] / (th2 + alpha + 1),
    carried out as exact polynomial division in th2; the bracket vanishes at
    th2 = -(alpha+1), so the remainder must be zero."""
    alpha = Fraction(alpha)
    bracket = product_theta2(betas) - EulerOp.const(
        math.prod([Fraction(b) - alpha - 1 for b in betas], start=Fraction(1))
    )
    coeffs = bracket.theta2_poly()
    root = -(alpha + 1)
    # synthetic division by (th2 - root)
    out: list[Fraction] = [Fraction(0)] * max(len(coeffs) - 1, 1)
    carry = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[i] + carry
        out[i - 1] = carry
        carry = carry * root
    remainder = coeffs[0] + carry
    if remainder != 0:
        raise InternalConsistencyError(f"bracket not divisible: remainder {remainder}")
    return EulerOp({(0, 0, 0, i): c for i, c in enumerate(out)})
