"""Dimension computations.

Weyl dimension formulas for types B and D in exact rational arithmetic, the
interlacing enumeration over Spin(2n-3) highest weights, and the algebraic /
continuous Whittaker-model dimensions they assemble into.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import ParameterError
from .halfint import HalfInt, uniform_parity
from .params import BlattnerWeight, Chamber, Character, HCParam, blattner, classify


def _coerce_weight(mu: Sequence) -> list[Fraction]:
    out = []
    for x in mu:
        if isinstance(x, HalfInt):
            out.append(x.as_fraction())
        else:
            out.append(Fraction(x))
    return out


def weyl_dim(rank: int, series: str, mu: Sequence) -> int:
    """dim V_mu for so(2*rank+1) (series 'B') or so(2*rank) (series 'D'),
    via prod <mu+rho, alpha> / <rho, alpha> over positive roots, exactly.

    rank 0 means the trivial group: dimension 1.
    """
    if series not in ("B", "D"):
        raise ParameterError(f"series must be 'B' or 'D', got {series!r}")
    w = _coerce_weight(mu)
    if len(w) != rank:
        raise ParameterError(f"weight must have {rank} entries, got {len(w)}")
    if rank == 0:
        return 1
    dominant = all(w[i] >= w[i + 1] for i in range(rank - 2 if series == "D" else rank - 1))
    if series == "D" and rank >= 2:
        dominant = dominant and w[rank - 2] >= abs(w[rank - 1])
    if series == "B":
        dominant = dominant and w[rank - 1] >= 0
    if not dominant or not uniform_parity(w):
        raise ParameterError(f"{mu} is not a dominant weight for {series}_{rank}")

    if series == "B":
        rho = [Fraction(2 * (rank - i) + 1, 2) for i in range(1, rank + 1)]
    else:
        rho = [Fraction(rank - i) for i in range(1, rank + 1)]
    a = [w[i] + rho[i] for i in range(rank)]

    num = Fraction(1)
    den = Fraction(1)
    for i in range(rank):
        for j in range(i + 1, rank):
            num *= (a[i] - a[j]) * (a[i] + a[j])
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j])
        if series == "B":
            num *= a[i]
            den *= rho[i]
    value = num / den
    if value.denominator != 1:
        raise ParameterError(f"Weyl dimension of {mu} is not an integer: {value}")
    return int(value)


@dataclass(frozen=True)
class InterlacingTuple:
    """One summand of the branching sum: mu interlaces lambda_1..lambda_{m-1},
    mu' interlaces lambda_m..lambda_{n-1}, |lambda_n|."""

    mu: tuple[HalfInt, ...]
    mu_prime: tuple[HalfInt, ...]

    def weight(self) -> tuple[HalfInt, ...]:
        return self.mu + self.mu_prime


@dataclass(frozen=True)
class DimResult:
    per_tuple: tuple[tuple[InterlacingTuple, int], ...]
    raw_sum: int       # the interlacing sum itself
    total: int         # 4 x raw_sum (the Bernstein-degree constant is four)
    status: str = "ok"


def interlacings(lam: Sequence, m: int) -> Iterator[InterlacingTuple]:
    """Tuples (mu, mu') with
    lambda_1 >= mu_1 >= ... >= mu_{m-2} >= lambda_{m-1} and
    lambda_m >= mu'_1 >= ... >= mu'_{n-m} >= |lambda_n|, stepping within the
    integrality class of lambda."""
    lam_t = [x if isinstance(x, HalfInt) else HalfInt(x) for x in lam]
    n = len(lam_t)
    if not 2 <= m <= n:
        raise ParameterError(f"need 2 <= m <= n, got m={m}, n={n}")

    def ranges(pairs: list[tuple[HalfInt, HalfInt]]) -> Iterator[tuple[HalfInt, ...]]:
        if not pairs:
            yield ()
            return
        lo, hi = pairs[0]
        d = hi.doubled
        while d >= lo.doubled:
            head = HalfInt(doubled=d)
            for rest in ranges(pairs[1:]):
                yield (head,) + rest
            d -= 2

    mu_pairs = [(lam_t[i], lam_t[i - 1]) for i in range(1, m - 1)]
    mup_pairs = [(lam_t[i], lam_t[i - 1]) for i in range(m, n - 1)]
    if m <= n - 1:
        mup_pairs.append((abs(lam_t[n - 1]), lam_t[n - 2]))
    for mu in ranges(mu_pairs):
        for mup in ranges(mup_pairs):
            yield InterlacingTuple(mu, mup)


def algebraic_whittaker_dim(lam: HCParam) -> DimResult:
    """Dimension of the space of algebraic Whittaker models of pi_Lambda:
    4 * sum over interlacing tuples of dim V^{Spin(2n-3)}_{(mu, mu')}."""
    chamber = classify(lam)
    n = lam.n
    if not 2 <= chamber.m <= n:
        return DimResult((), 0, 0, status=f"no Whittaker models in chamber {chamber}")
    bw = blattner(lam, chamber)
    parts = []
    raw = 0
    for tup in interlacings(bw.lam, chamber.m):
        w = tup.weight()
        if any(w[i] < w[i + 1] for i in range(len(w) - 1)):
            raise ParameterError(f"interlacing produced a non-dominant weight {w}")
        d = weyl_dim(n - 2, "B", w)
        parts.append((tup, d))
        raw += d
    return DimResult(tuple(parts), raw, 4 * raw)


def continuous_whittaker_dim(lam: HCParam, eta: Character) -> int:
    """Dimension of the continuous intertwining space: the interlacing sum
    when the sign condition (-chamber.sign) * eta_2 > 0 holds, else 0."""
    chamber = classify(lam)
    if not 2 <= chamber.m <= lam.n:
        return 0
    if -chamber.sign * eta.eta2 <= 0:
        return 0
    return algebraic_whittaker_dim(lam).raw_sum
