"""Gelfand-Tsetlin combinatorics for so(2n).

Patterns index an orthonormal-style basis of the irreducible representation
with highest weight lambda.  A pattern is a stack of rows q_1 .. q_{2n-1}
(bottom up); row i holds floor((i+1)/2) entries, row 2n-1 equals lambda.
Everything here is exact: entries are half-integers stored doubled, action
coefficients are signed square roots of exact rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import InternalConsistencyError, ParameterError, ShapeError
from .halfint import HalfInt, uniform_parity

NEG_INF = float("-inf")


def row_width(i: int) -> int:
    return (i + 1) // 2


def _as_rows(raw: Sequence[Sequence]) -> tuple[tuple[HalfInt, ...], ...]:
    return tuple(
        tuple(x if isinstance(x, HalfInt) else HalfInt(x) for x in row) for row in raw
    )


class GTPattern:
    """Immutable lambda-Gelfand-Tsetlin pattern; rows[i-1] is q_i."""

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, rows: Sequence[Sequence]):
        rows = _as_rows(rows)
        if len(rows) % 2 == 0 or len(rows) < 3:
            raise ShapeError(f"need an odd number >= 3 of rows, got {len(rows)}")
        self.n = (len(rows) + 1) // 2
        for i, row in enumerate(rows, start=1):
            if len(row) != row_width(i):
                raise ShapeError(f"row {i} must hold {row_width(i)} entries, got {len(row)}")
        self.rows = rows
        self._hash = hash(tuple(tuple(e.doubled for e in row) for row in rows))

    # -- access -------------------------------------------------------------
    @property
    def lam(self) -> tuple[HalfInt, ...]:
        return self.rows[-1]

    def row(self, r: int) -> tuple[HalfInt, ...]:
        """Row q_r, 1-indexed; r = 2n gives the embedded Spin(2n+1) top row
        (lambda_1+1, ..., lambda_{n-1}+1, |lambda_n|+1)."""
        if r == 2 * self.n:
            lam = self.lam
            return tuple([lam[j] + 1 for j in range(self.n - 1)] + [abs(lam[self.n - 1]) + 1])
        if not 1 <= r <= 2 * self.n - 1:
            raise IndexError(f"row index {r} out of range")
        return self.rows[r - 1]

    def q(self, r: int, j: int) -> HalfInt:
        return self.row(r)[j - 1]

    # -- serialization ------------------------------------------------------
    def to_doubled(self) -> list[list[int]]:
        return [[e.doubled for e in row] for row in self.rows]

    @staticmethod
    def from_doubled(data: Sequence[Sequence[int]]) -> "GTPattern":
        return GTPattern([[HalfInt(doubled=int(d)) for d in row] for row in data])

    # -- dunder ---------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, GTPattern) and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "GTPattern(" + "; ".join(",".join(map(str, row)) for row in self.rows) + ")"

    # -- validity -------------------------------------------------------------
    def is_valid(self) -> bool:
        rows = self.rows
        if not uniform_parity([e for row in rows for e in row]):
            return False
        n = self.n
        for i in range(1, n):  # even row 2i below odd row 2i+1: (3) and (4)
            lo, hi = rows[2 * i - 1], rows[2 * i]
            for j in range(1, i):
                if not (hi[j - 1] >= lo[j - 1] >= hi[j]):
                    return False
            if not (hi[i - 1] >= lo[i - 1] >= abs(hi[i])):
                return False
        for i in range(1, n):  # odd row 2i-1 below even row 2i: (5) and (6)
            lo, hi = rows[2 * i - 2], rows[2 * i - 1]
            for j in range(1, i):
                if not (hi[j - 1] >= lo[j - 1] >= hi[j]):
                    return False
            if not (hi[i - 1] >= lo[i - 1] >= -hi[i - 1]):
                return False
        return True


def validate_pattern(rows: Sequence[Sequence], lam: Sequence | None = None) -> bool:
    """True iff the raw table is a valid pattern (with top row lam, if given).

    Shape problems raise ShapeError; an ill-shaped table is not merely an
    invalid pattern.
    """
    pattern = GTPattern(rows)
    if lam is not None:
        lam_t = tuple(x if isinstance(x, HalfInt) else HalfInt(x) for x in lam)
        if len(lam_t) != pattern.n:
            raise ShapeError(f"lambda must have {pattern.n} entries, got {len(lam_t)}")
        if pattern.lam != lam_t:
            return False
    return pattern.is_valid()


def is_dominant(lam: Sequence) -> bool:
    vals = [x if isinstance(x, HalfInt) else HalfInt(x) for x in lam]
    return (
        uniform_parity(vals)
        and all(vals[i] >= vals[i + 1] for i in range(len(vals) - 2))
        and (len(vals) < 2 or vals[-2] >= abs(vals[-1]))
    )


def enumerate_patterns(lam: Sequence) -> Iterator[GTPattern]:
    """All patterns with top row lam, generated row by row from the top.

    Each entry of a row ranges in an interval that depends only on the row
    above, so the walk is a plain product DFS; memory stays at one pattern.
    """
    lam_t = tuple(x if isinstance(x, HalfInt) else HalfInt(x) for x in lam)
    n = len(lam_t)
    if n < 2:
        raise ParameterError("need n >= 2")
    if not is_dominant(lam_t):
        raise ParameterError(f"lambda {lam_t} is not dominant for so({2 * n})")

    def bounds_for(above: tuple[HalfInt, ...], r: int) -> list[tuple[HalfInt, HalfInt]]:
        w = row_width(r)
        out = []
        for j in range(1, w + 1):
            hi = above[j - 1]
            if j < w:
                lo = above[j]
            elif len(above) == w + 1:  # even row below odd row: last bound |.|
                lo = abs(above[w])
            else:  # odd row below even row of equal width
                lo = -above[w - 1]
            out.append((lo, hi))
        return out

    def descend(stack: list[tuple[HalfInt, ...]], r: int) -> Iterator[list[tuple[HalfInt, ...]]]:
        if r == 0:
            yield stack
            return
        bounds = bounds_for(stack[0], r)
        w = row_width(r)

        def fill(j: int, acc: list[HalfInt]) -> Iterator[list[tuple[HalfInt, ...]]]:
            if j > w:
                yield from descend([tuple(acc)] + stack, r - 1)
                return
            lo, hi = bounds[j - 1]
            d = hi.doubled
            while d >= lo.doubled:
                acc.append(HalfInt(doubled=d))
                yield from fill(j + 1, acc)
                acc.pop()
                d -= 2

        yield from fill(1, [])

    for rows in descend([lam_t], 2 * n - 2):
        yield GTPattern(rows)


def count_patterns(lam: Sequence) -> int:
    return sum(1 for _ in enumerate_patterns(lam))


class PatternBasis:
    """Enumerated GT(lambda) with an index lookup, for matrix work."""

    def __init__(self, lam: Sequence):
        self.patterns = list(enumerate_patterns(lam))
        self.index = {p: i for i, p in enumerate(self.patterns)}
        self.n = self.patterns[0].n

    def __len__(self) -> int:
        return len(self.patterns)


# ---------------------------------------------------------------------------
# l-coordinates
# ---------------------------------------------------------------------------

def l_coord(Q: GTPattern, r: int, j: int) -> HalfInt:
    """l_{2i-1,j} = q_{2i-1,j}+i-j,  l_{2i,j} = q_{2i,j}+i+1-j  (j>0),
    l_{2i-1,-j} = -l_{2i-1,j},  l_{2i,-j} = -l_{2i,j}+1,  l_{2i,0} = 0.

    Row r = 2n refers to the embedded Spin(2n+1) top row.
    """
    if r % 2 == 1:
        i = (r + 1) // 2
        if j == 0 or abs(j) > i:
            raise IndexError(f"l_{{{r},{j}}}: index out of range")
        if j > 0:
            return Q.q(r, j) + i - j
        return -(Q.q(r, -j) + i + j)
    i = r // 2
    if abs(j) > i:
        raise IndexError(f"l_{{{r},{j}}}: index out of range")
    if j == 0:
        return HalfInt(0)
    if j > 0:
        return Q.row(r)[j - 1] + i + 1 - j
    return -(Q.row(r)[-j - 1] + i + 1 + j) + 1


# ---------------------------------------------------------------------------
# shifts
# ---------------------------------------------------------------------------

def apply_shift(Q: GTPattern, a: int, b: int) -> Optional[GTPattern]:
    """sigma_{a,b}: add sgn(b) to q_{a,|b|}; None when the result is invalid.

    b = 0 is the identity.  Shifting the top row 2n-1 yields a pattern for
    lambda +/- e_{|b|}, checked for validity with that new top weight.
    """
    if b == 0:
        return Q
    if not 1 <= a <= 2 * Q.n - 1:
        raise IndexError(f"row index {a} out of range")
    if abs(b) > row_width(a):
        raise IndexError(f"entry index {b} out of range for row {a}")
    rows = [list(row) for row in Q.rows]
    rows[a - 1][abs(b) - 1] = rows[a - 1][abs(b) - 1] + (1 if b > 0 else -1)
    shifted = GTPattern(rows)
    return shifted if shifted.is_valid() else None


def tau(Q: GTPattern, i: int, j: int) -> Optional[GTPattern]:
    """tau_{i,j} = sigma_{2n-3,i} sigma_{2n-2,j} (either index may be 0)."""
    n = Q.n
    out: Optional[GTPattern] = Q
    if i != 0:
        out = apply_shift(out, 2 * n - 3, i)
        if out is None:
            return None
    if j != 0:
        out = apply_shift(out, 2 * n - 2, j)
    return out


def tau_valid(Q: GTPattern, i: int, j: int) -> bool:
    return tau(Q, i, j) is not None


def top_shift_embedded_valid(Q: GTPattern, k: int) -> bool:
    """Validity of sigma_{2n-1,k} Q inside the embedded Spin(2n+1) pattern
    (Q, q_{2n}), i.e. including interlacing of the shifted top row with the
    fixed row q_{2n} = (lambda_1+1, ..., |lambda_n|+1).

    Far from the walls this coincides with membership in GT(lambda + e_k);
    at wall-adjacent lambda it is strictly stronger, and it is the criterion
    the a_{2n-1,k} product formula actually vanishes by.
    """
    n = Q.n
    target = apply_shift(Q, 2 * n - 1, k)
    if target is None:
        return False
    ceiling = Q.row(2 * n)  # of the *original* lambda
    new_top = target.lam
    for j in range(1, n):
        if not (ceiling[j - 1] >= new_top[j - 1] >= ceiling[j]):
            return False
    return ceiling[n - 1] >= new_top[n - 1] >= -ceiling[n - 1]


def compose_shifts(Q: GTPattern, moves: Sequence[tuple[int, int]]) -> Optional[GTPattern]:
    """Apply several sigma_{a,b} increments at once; only the final pattern is
    checked for validity (intermediate patterns may be invalid)."""
    rows = [list(row) for row in Q.rows]
    for a, b in moves:
        if b == 0:
            continue
        rows[a - 1][abs(b) - 1] = rows[a - 1][abs(b) - 1] + (1 if b > 0 else -1)
    shifted = GTPattern(rows)
    return shifted if shifted.is_valid() else None


# ---------------------------------------------------------------------------
# action coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ActionCoefficient:
    """Signed square root of an exact rational radicand.

    value = sign * exp(log_abs), times i when the radicand is negative (the
    even-row j = 0 coefficients are purely imaginary; combinations like
    i*A_0(Q) are the real quantities downstream).  value is 0 exactly when
    the null-point criterion holds (then sign = 0, log_abs = -inf).
    """

    sign: int
    log_abs: float
    value: complex
    radicand: Fraction

    @staticmethod
    def zero() -> "ActionCoefficient":
        return ActionCoefficient(0, NEG_INF, 0.0, Fraction(0))

    @staticmethod
    def from_radicand(sign: int, radicand: Fraction) -> "ActionCoefficient":
        if radicand == 0 or sign == 0:
            return ActionCoefficient.zero()
        unit: complex = 1.0
        if radicand < 0:
            unit = 1j
            radicand_abs = -radicand
        else:
            radicand_abs = radicand
        log_abs = (math.log(radicand_abs.numerator) - math.log(radicand_abs.denominator)) / 2.0
        return ActionCoefficient(sign, log_abs, sign * unit * math.exp(log_abs), radicand)


def a_radicand(Q: GTPattern, r: int, j: int) -> Optional[Fraction]:
    """The exact rational under the square root of a_{r,j}(Q), or None when
    a denominator factor vanishes (only possible at null points)."""
    f = lambda row, k: l_coord(Q, row, k).as_fraction()
    if r % 2 == 1:
        i = (r + 1) // 2
        if j == 0 or abs(j) > i:
            raise IndexError(f"a_{{{r},{j}}}: index out of range")
        lj = f(r, j)
        num = Fraction(1)
        for k in range(1, i):
            num *= (lj + f(r - 1, k)) * (lj + f(r - 1, -k))
        for k in range(1, i + 1):
            num *= (lj + f(r + 1, k)) * (lj + f(r + 1, -k))
        den = Fraction(4)
        for k in range(-i, i + 1):
            if k == 0 or k == j or k == -j:
                continue
            den *= (lj + f(r, k)) * (lj + f(r, k) + 1)
        if den == 0:
            return None
        return -num / den
    i = r // 2
    if abs(j) > i or r >= 2 * Q.n:
        raise IndexError(f"a_{{{r},{j}}}: index out of range")
    lj = f(r, j)
    num = Fraction(1)
    for k in range(1, i + 1):
        num *= (lj + f(r - 1, k)) * (lj + f(r - 1, -k))
    for k in range(1, i + 2):
        num *= (lj + f(r + 1, k)) * (lj + f(r + 1, -k))
    den = 4 * lj * lj - 1
    for k in range(-i, i + 1):
        if k == j or k == -j:
            continue
        den *= (lj + f(r, k)) * (lj - f(r, k))
    if den == 0:
        return None
    return -num / den


def a_coeff(Q: GTPattern, r: int, j: int) -> ActionCoefficient:
    """a_{r,j}(Q) per the closed product formulas.

    Null points (the shifted pattern falls outside GT, or the even-row j=0
    sign factor vanishes) give an exact zero; the formula is evaluated only
    on valid shifts, where its denominators cannot vanish.
    """
    if r % 2 == 1:
        i = (r + 1) // 2
        if j == 0 or abs(j) > i:
            raise IndexError(f"a_{{{r},{j}}}: index out of range")
        shift_ok = (
            top_shift_embedded_valid(Q, j) if r == 2 * Q.n - 1 else apply_shift(Q, r, j) is not None
        )
        if not shift_ok:
            return ActionCoefficient.zero()
        rad = a_radicand(Q, r, j)
        if rad is None:
            raise InternalConsistencyError(f"vanishing denominator at valid shift a_{{{r},{j}}}({Q})")
        return ActionCoefficient.from_radicand(1 if j > 0 else -1, rad)
    i = r // 2
    if abs(j) > i or r >= 2 * Q.n:
        raise IndexError(f"a_{{{r},{j}}}: index out of range")
    if j == 0:
        eps = Q.q(r - 1, i).sign() * Q.q(r + 1, i + 1).sign()
        if eps == 0:
            return ActionCoefficient.zero()
        rad = a_radicand(Q, r, 0)
        if rad is None:
            raise InternalConsistencyError(f"vanishing denominator at a_{{{r},0}}({Q})")
        return ActionCoefficient.from_radicand(eps, rad)
    if apply_shift(Q, r, j) is None:
        return ActionCoefficient.zero()
    rad = a_radicand(Q, r, j)
    if rad is None:
        raise InternalConsistencyError(f"vanishing denominator at valid shift a_{{{r},{j}}}({Q})")
    return ActionCoefficient.from_radicand(1 if j > 0 else -1, rad)


# ---------------------------------------------------------------------------
# chain generators and Casimir scalars
# ---------------------------------------------------------------------------

def apply_generator(k: int, vec: Sequence[complex], basis: PatternBasis) -> list[complex]:
    """Apply tau_lambda(F_{k+1,k}) to a coefficient vector over GT(lambda).

    k = 2i   -> sum over 1 <= |j| <= i of a_{2i-1,j}(Q) sigma_{2i-1,j} Q,
    k = 2i+1 -> sum over 0 <= |j| <= i of a_{2i,j}(Q)  sigma_{2i,j} Q.
    F_{2,1} is diagonal with eigenvalue i*q_{1,1} (so(2) weight).
    """
    if len(vec) != len(basis):
        raise ParameterError(f"vector length {len(vec)} != dim {len(basis)}")
    n = basis.n
    if not 1 <= k <= 2 * n - 1:
        raise IndexError(f"generator F_{{{k + 1},{k}}} out of range")
    out: list[complex] = [0.0] * len(basis)
    for idx, Q in enumerate(basis.patterns):
        c = vec[idx]
        if c == 0:
            continue
        if k == 1:
            out[idx] += c * 1j * float(Q.q(1, 1))
            continue
        if k % 2 == 0:
            r, i = k - 1, k // 2
            js = [j for j in range(-i, i + 1) if j != 0]
        else:
            r, i = k - 1, (k - 1) // 2
            js = list(range(-i, i + 1))
        for j in js:
            coeff = a_coeff(Q, r, j)
            if coeff.value == 0.0:
                continue
            target = Q if j == 0 else apply_shift(Q, r, j)
            if target is None:
                continue
            out[basis.index[target]] += c * coeff.value
    return out


def generator_matrix(basis: PatternBasis, k: int) -> list[list[complex]]:
    """Matrix of tau_lambda(F_{k+1,k}) in the GT basis."""
    dim = len(basis)
    cols = []
    for idx in range(dim):
        e: list[complex] = [0.0] * dim
        e[idx] = 1.0
        cols.append(apply_generator(k, e, basis))
    return [[cols[c][r] for c in range(dim)] for r in range(dim)]


def casimir_scalar(q_prev: Sequence, k: int) -> Fraction:
    """Scalar of C_k = sum_{1<=j<i<=k} F_ij^2 on the V_{q_{k-1}} piece:
    -(|q_{k-1}|^2 + 2<q_{k-1}, rho_k>) with 2 rho_k = (k-2, k-4, ...)."""
    if k < 2:
        raise ParameterError("need k >= 2")
    q = [x if isinstance(x, HalfInt) else HalfInt(x) for x in q_prev]
    if len(q) != k // 2:
        raise ShapeError(f"q_{{k-1}} must hold {k // 2} entries for k={k}")
    total = Fraction(0)
    for j, entry in enumerate(q, start=1):
        v = entry.as_fraction()
        total += v * v + v * (k - 2 * j)
    return -total


# ---------------------------------------------------------------------------
# projections  pr_{k,+-}
# ---------------------------------------------------------------------------

def _row_action(Q: GTPattern, r: int) -> list[tuple[int, GTPattern, complex]]:
    """Terms (j, sigma_{r,j}Q, a_{r,j}(Q)) of the generator acting through
    row r (F_{2i+1,2i} for odd r = 2i-1, F_{2i+2,2i+1} for even r = 2i)."""
    w = (r + 1) // 2
    js = [j for j in range(-w, w + 1) if (r % 2 == 0 or j != 0)]
    out = []
    for j in js:
        a = a_coeff(Q, r, j)
        if a.value == 0:
            continue
        target = Q if j == 0 else apply_shift(Q, r, j)
        if target is None:
            continue
        out.append((j, target, a.value))
    return out


def _pr_v2n(Q: GTPattern, k: int) -> dict[GTPattern, complex]:
    a_top = a_coeff(Q, 2 * Q.n - 1, k)
    if a_top.value == 0:
        return {}
    return {apply_shift(Q, 2 * Q.n - 1, k): a_top.value}


def _gen_on_coeffs(coeffs: dict[GTPattern, complex], r: int) -> dict[GTPattern, complex]:
    out: dict[GTPattern, complex] = {}
    for pat, c in coeffs.items():
        for _, target, a in _row_action(pat, r):
            out[target] = out.get(target, 0.0) + c * a
    return out


def _pr_v(Q: GTPattern, source: int, k: int) -> dict[GTPattern, complex]:
    """pr_k(Q (x) v_source) for source in {2n, 2n-1, 2n-2}, built from the
    v_{2n} anchor by the intertwining recursion

        pr(Q (x) v_{s-1}) = -F pr(Q (x) v_s) + sum a(Q) pr(sigma Q (x) v_s),

    with F = F_{s,s-1} acting through row s-1 on the target module.  This is
    how the displayed closed forms arise, and it stays finite in the
    degenerate configurations where their denominators vanish.
    """
    n = Q.n
    if source == 2 * n:
        return _pr_v2n(Q, k)
    row = source - 1  # F_{source+1, source} acts through row source - 1
    prev = _pr_v(Q, source + 1, k)
    out = {pat: -c for pat, c in _gen_on_coeffs(prev, row).items()}
    for _, sQ, a in _row_action(Q, row):
        for pat, c in _pr_v(sQ, source + 1, k).items():
            out[pat] = out.get(pat, 0.0) + a * c
    return {pat: c for pat, c in out.items() if abs(c) > 1e-13}


def projection_coeff(
    Q: GTPattern,
    source: int,
    spin2: int,
    k: int,
    pm: int,
) -> dict[GTPattern, complex]:
    """Coefficients of pr_{k,pm}(Q (x) (v_source^{2n} (x) v_spin2^2)).

    source is 2n, 2n-1 or 2n-2; spin2 is 1 or 2; k = +-1..+-n; pm = +-1.
    Keys are patterns in GT(lambda + e_k).  Values agree with the displayed
    sums (a-products over l-coordinate differences) wherever those are
    regular, and remain finite at the degenerate configurations where the
    displayed denominators vanish.  The spin2 = 1 case is -(pm) i times the
    spin2 = 2 case.
    """
    n = Q.n
    if source not in (2 * n, 2 * n - 1, 2 * n - 2):
        raise ParameterError(f"source vector v_{source} not covered")
    if spin2 not in (1, 2):
        raise ParameterError("spin2 index must be 1 or 2")
    if not 1 <= abs(k) <= n or pm not in (1, -1):
        raise ParameterError("need 1 <= |k| <= n and pm = +-1")
    factor: complex = 1.0 if spin2 == 2 else (-1j if pm == 1 else 1j)
    return {pat: factor * c for pat, c in _pr_v(Q, source, k).items()}


def projection_coeff_displayed(Q: GTPattern, source: int, k: int) -> dict[GTPattern, complex]:
    """The literal displayed sums for pr_k(Q (x) v_source); raises
    ZeroDivisionError at degenerate configurations (vanishing denominator, or
    a null intermediate in front of a valid composite, where the displayed
    factorization breaks down).  Kept as the cross-check route for
    projection_coeff."""
    n = Q.n
    l_top = l_coord(Q, 2 * n - 1, k).as_fraction()

    def composite_ok(moves) -> bool:
        target = compose_shifts(Q, moves)
        if target is None:
            return False
        ceiling = Q.row(2 * n)
        new_top = target.lam
        ok = all(ceiling[p - 1] >= new_top[p - 1] >= ceiling[p] for p in range(1, n))
        return ok and ceiling[n - 1] >= new_top[n - 1] >= -ceiling[n - 1]

    out: dict[GTPattern, complex] = {}
    if source == 2 * n:
        return dict(_pr_v2n(Q, k))
    if source == 2 * n - 1:
        for j in range(-(n - 1), n):
            a1 = a_coeff(Q, 2 * n - 2, j)
            Qj = tau(Q, 0, j)
            if a1.value == 0 or Qj is None:
                if j != 0 and composite_ok([(2 * n - 2, j), (2 * n - 1, k)]):
                    raise ZeroDivisionError("degenerate displayed factorization")
                continue
            a2 = a_coeff(Qj, 2 * n - 1, k)
            if a2.value == 0:
                continue
            den = l_coord(Q, 2 * n - 2, j).as_fraction() - l_top
            target = apply_shift(Qj, 2 * n - 1, k)
            out[target] = out.get(target, 0.0) + a1.value * a2.value / float(den)
        return out
    for i in [x for x in range(-(n - 1), n) if x != 0]:
        a1 = a_coeff(Q, 2 * n - 3, i)
        Qi = tau(Q, i, 0)
        for j in range(-(n - 1), n):
            bad = a1.value == 0 or Qi is None
            a2 = a_coeff(Qi, 2 * n - 2, j) if not bad else None
            Qij = tau(Qi, 0, j) if not bad else None
            bad = bad or a2.value == 0 or Qij is None
            if bad:
                if j != 0 and composite_ok([(2 * n - 3, i), (2 * n - 2, j), (2 * n - 1, k)]):
                    raise ZeroDivisionError("degenerate displayed factorization")
                continue
            a3 = a_coeff(Qij, 2 * n - 1, k)
            if a3.value == 0:
                continue
            d1 = l_coord(Q, 2 * n - 3, i).as_fraction() - l_coord(Q, 2 * n - 2, j).as_fraction() + 1
            d2 = l_coord(Q, 2 * n - 2, j).as_fraction() - l_top
            target = apply_shift(Qij, 2 * n - 1, k)
            out[target] = out.get(target, 0.0) + a1.value * a2.value * a3.value / float(d1 * d2)
    return {pat: c for pat, c in out.items() if abs(c) > 1e-13}
