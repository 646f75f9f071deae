"""Harish-Chandra parameter bookkeeping for Spin(2n,2).

The 2n+2 positive systems containing the compact one split the parameter
space into chambers (m, +-); the chamber determines the minimal K-type
(Blattner) weight, the Gelfand-Kirillov dimension, and whether Whittaker
models exist at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParameterError
from .halfint import HalfInt, uniform_parity


Root = tuple[int, int, int, int]  # (i, si, j, sj) for si*e_i + sj*e_j, i < j


def _roots_compact(n: int) -> list[Root]:
    return [(i, 1, j, s, ) for i in range(1, n) for j in range(i + 1, n + 1) for s in (1, -1)]


def positive_system(n: int, m: int, sign: int) -> list[Root]:
    """Delta_{m,sign}^+ as explicit roots s_i e_i + s_j e_j of D_{n+1}."""
    if not 1 <= m <= n + 1 or sign not in (1, -1):
        raise ParameterError(f"no positive system ({m}, {sign:+d})")
    roots = _roots_compact(n)
    np1 = n + 1
    if sign == 1 or m <= n:
        for i in range(1, m):
            roots += [(i, 1, np1, 1), (i, 1, np1, -1)]
        for i in range(m, n + 1):
            # e_{n+1} +- e_i for the plus chamber, -e_{n+1} +- e_i for minus
            roots += [(i, 1, np1, sign), (i, -1, np1, sign)]
        return roots
    # m = n+1, sign = -1: e_i +- e_{n+1} for i <= n-1 and -e_n +- e_{n+1}
    for i in range(1, n):
        roots += [(i, 1, np1, 1), (i, 1, np1, -1)]
    roots += [(n, -1, np1, 1), (n, -1, np1, -1)]
    return roots


def all_positive_systems(n: int) -> dict[tuple[int, int], list[Root]]:
    out = {}
    for m in range(1, n + 2):
        for sign in (1, -1):
            out[(m, sign)] = positive_system(n, m, sign)
    return out


@dataclass(frozen=True)
class Chamber:
    m: int
    sign: int  # +1 or -1

    def __str__(self) -> str:
        return f"Xi_{{{self.m},{'+' if self.sign > 0 else '-'}}}"


@dataclass(frozen=True)
class HCParam:
    """Harish-Chandra parameter Lambda = (Lambda_1..Lambda_n; Lambda_{n+1})."""

    n: int
    entries: tuple[HalfInt, ...]

    @staticmethod
    def make(entries: Sequence, n: int | None = None) -> "HCParam":
        vals = tuple(x if isinstance(x, HalfInt) else HalfInt(x) for x in entries)
        if n is None:
            n = len(vals) - 1
        if len(vals) != n + 1 or n < 2:
            raise ParameterError(f"need n+1 entries with n >= 2, got {len(vals)}")
        return HCParam(n, vals)

    def pairing(self, root: Root) -> HalfInt:
        i, si, j, sj = root
        return self.entries[i - 1] * si + self.entries[j - 1] * sj

    def validate(self) -> None:
        """Regularity, Delta_c^+-dominance, and K-analytic integrality."""
        n, e = self.n, self.entries
        if not uniform_parity(e):
            raise ParameterError(
                "Lambda + rho is not analytically integral: entries mix integers and half-integers"
            )
        for i in range(1, n + 1):
            for j in range(i + 1, n + 2):
                for sj in (1, -1):
                    if e[i - 1] + e[j - 1] * sj == 0:
                        raise ParameterError(
                            f"Lambda is singular on the root e_{i} {'+' if sj > 0 else '-'} e_{j}"
                        )
        for i in range(1, n):
            for sj in (1, -1):
                if e[i - 1] + e[i] * sj < 0:
                    raise ParameterError(
                        f"Lambda is not dominant on the compact root e_{i} {'+' if sj > 0 else '-'} e_{i + 1}"
                    )

    def as_floats(self) -> list[float]:
        return [float(x) for x in self.entries]


@dataclass(frozen=True)
class BlattnerWeight:
    lam: tuple[HalfInt, ...]
    lam_np1: HalfInt
    far_from_walls: bool


@dataclass(frozen=True)
class Character:
    """Non-degenerate unitary character data (eta_1, eta_2)."""

    eta1: float
    eta2: float

    def __post_init__(self):
        if not (self.eta1 > 0) or self.eta2 == 0:
            raise ParameterError("need eta_1 > 0 and eta_2 != 0")


def classify(lam: HCParam) -> Chamber:
    """The unique (m, sign) with <Lambda, beta> >= 0 on Delta_{m,sign}^+."""
    lam.validate()
    found = []
    for (m, sign), roots in all_positive_systems(lam.n).items():
        if all(lam.pairing(r) >= 0 for r in roots):
            found.append(Chamber(m, sign))
    if len(found) != 1:
        raise ParameterError(f"Lambda lies in {len(found)} chambers; it must be irregular")
    return found[0]


def blattner(lam: HCParam, chamber: Chamber, *, allow_near_walls: bool = True) -> BlattnerWeight:
    """Blattner parameter of pi_Lambda for Lambda in Xi_{m,+-}, m <= n:
    lambda_i = Lambda_i - n + i + 1 (i < m), Lambda_i - n + i (m <= i <= n),
    lambda_{n+1} = Lambda_{n+1} +- (n - m + 1)."""
    n, m = lam.n, chamber.m
    if m == n + 1:
        raise ParameterError("Blattner parameter for m = n+1 is out of scope")
    if not 1 <= m <= n:
        raise ParameterError(f"bad chamber index m={m}")
    parts = []
    for i in range(1, n + 1):
        shift = -n + i + 1 if i < m else -n + i
        parts.append(lam.entries[i - 1] + shift)
    lam_np1 = lam.entries[n] + chamber.sign * (n - m + 1)
    far = all(parts[i] - parts[i + 1] >= 2 for i in range(n - 2))
    far = far and (n < 2 or parts[n - 2] - abs(parts[n - 1]) >= 2) and abs(parts[n - 1]) >= 2
    bw = BlattnerWeight(tuple(parts), lam_np1, far)
    if not allow_near_walls and not far:
        raise ParameterError("Blattner parameter is too close to the walls")
    return bw


def contragredient(lam: HCParam) -> HCParam:
    """Lambda* = (Lambda_1, ..., Lambda_{n-1}, (-1)^n Lambda_n; -Lambda_{n+1})."""
    n = lam.n
    entries = list(lam.entries)
    if n % 2 == 1:
        entries[n - 1] = -entries[n - 1]
    entries[n] = -entries[n]
    return HCParam(n, tuple(entries))


def gk_dimension(chamber: Chamber, n: int) -> int:
    """Gelfand-Kirillov dimension of pi_Lambda by chamber."""
    if chamber.m == 1:
        return 2 * n
    if chamber.m == n + 1:
        return 4 * n - 3
    return 4 * n - 2


def has_algebraic_whittaker(chamber: Chamber, n: int | None = None) -> bool:
    """Non-trivial algebraic Whittaker models exist iff 2 <= m <= n, i.e.
    iff the GK dimension reaches dim n = 4n-2."""
    if n is None:
        return chamber.m >= 2  # caller promises m <= n
    return 2 <= chamber.m <= n
