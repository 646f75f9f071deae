"""Loop-contour evaluation of the Mellin-Barnes solutions.

The contour is the truncated clockwise loop around the half-line
s >= -alpha_j: two horizontal legs at Im s = +-c joined by a vertical
segment through the crossing point x0 in (-alpha_j - 1, -alpha_j).  The
integrand decays like exp(-2 u log u) along the legs, so a fixed composite
Gauss-Legendre rule with adaptive truncation converges quickly.  Euler
operators act on the integrand symbolically (th2 multiplies by s, th1 uses
the Bessel derivative recurrence), which is how shift-operator chains are
evaluated on the contour path - including the alpha_1 = alpha_2 collisions
that the residue expansion refuses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.special import loggamma

from .bessel import bessel_I, bessel_K
from .errors import ParameterError
from .euler import EulerOp
from .mbseries import t2_sign_for
from .radial import ExponentSystem


@dataclass(frozen=True)
class _CTerm:
    poly: tuple[complex, ...]  # coefficients, ascending, of P(s)
    k: int                     # shift of the (+-t2)^{s+k} factor
    a: int                     # explicit t1 power
    l: int                     # Bessel order is -s + l


def _poly_mul_linear(poly: tuple[complex, ...], c0: complex) -> tuple[complex, ...]:
    """(s + c0) * P(s)."""
    out = [0j] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i] += c * c0
        out[i + 1] += c
    return tuple(out)


def _poly_eval(poly: tuple[complex, ...], s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s, dtype=complex)
    for c in reversed(poly):
        out = out * s + c
    return out


@dataclass
class ContourFunction:
    """A finite combination sum_r P_r(s) (+-t2)^{s+k_r} t1^{a_r} B_{-s+l_r}(t1)
    integrated against the f_j gamma ratio over the loop C_j."""

    es: ExponentSystem
    j: int
    kind: str
    terms: tuple[_CTerm, ...]

    @staticmethod
    def for_f(es: ExponentSystem, j: int, kind: str) -> "ContourFunction":
        if not 1 <= j <= es.N2:
            raise ParameterError(f"j={j} outside 1..{es.N2}")
        return ContourFunction(es, j, kind, ( _CTerm((1.0 + 0j,), 0, 0, 0), ))

    @property
    def t2_sign(self) -> int:
        return t2_sign_for(self.j, self.kind)

    # -- symbolic operator action ------------------------------------------
    def apply(self, op: EulerOp) -> "ContourFunction":
        eps = -0.5 if self.kind == "K" else 0.5
        sgn = self.t2_sign
        out: list[_CTerm] = []
        for (e1, e2, d1, d2), c in op.terms.items():
            for term in self.terms:
                work = [replace(term, poly=tuple(cc * complex(Fraction(c)) for cc in term.poly))]
                for _ in range(d2):
                    work = [replace(w, poly=_poly_mul_linear(w.poly, complex(w.k))) for w in work]
                for _ in range(d1):
                    nxt = []
                    for w in work:
                        if w.a:
                            nxt.append(replace(w, poly=tuple(cc * w.a for cc in w.poly)))
                        base = tuple(cc * eps for cc in w.poly)
                        nxt.append(replace(w, poly=base, a=w.a + 1, l=w.l - 1))
                        nxt.append(replace(w, poly=base, a=w.a + 1, l=w.l + 1))
                    work = nxt
                for w in work:
                    sign_fix = sgn ** (e2 % 2) if e2 else 1
                    out.append(
                        replace(
                            w,
                            poly=tuple(cc * sign_fix for cc in w.poly),
                            k=w.k + e2,
                            a=w.a + e1,
                        )
                    )
        return ContourFunction(self.es, self.j, self.kind, tuple(out))

    # -- evaluation ------------------------------------------------------------
    def _log_gamma_ratio(self, s: np.ndarray) -> np.ndarray:
        es, j = self.es, self.j
        total = np.zeros_like(s, dtype=complex)
        for p in range(j, es.N2 + 1):
            total += loggamma(-float(es.alpha(p)) - s)
        for p in range(3, j + 1):
            total += loggamma(float(es.beta(p)) + s)
        for p in range(1, j):
            total -= loggamma(1 + float(es.alpha(p)) + s)
        for p in range(max(j + 1, 3), es.N2 + 1):
            total -= loggamma(1 - float(es.beta(p)) - s)
        return total

    def _integrand(self, s: np.ndarray, t1: float, log_t2: complex) -> np.ndarray:
        logG = self._log_gamma_ratio(s)
        total = np.zeros_like(s, dtype=complex)
        by_l: dict[int, np.ndarray] = {}
        for term in self.terms:
            if term.l not in by_l:
                nu = -s + term.l
                if self.kind == "K":
                    by_l[term.l] = bessel_K(nu, t1, log_form=True)
                else:
                    with np.errstate(divide="ignore"):
                        by_l[term.l] = np.log(np.asarray(bessel_I(nu, t1), dtype=complex))
            logB = by_l[term.l]
            expo = logG + (s + term.k) * log_t2 + logB + term.a * math.log(t1)
            vals = np.where(np.isneginf(expo.real), 0.0, np.exp(expo))
            total += _poly_eval(term.poly, s) * vals
        return total

    def evaluate(
        self,
        t1: float,
        t2: float,
        tol: float = 1e-10,
        nodes: int = 16,
        height: float = 0.75,
        max_panels: int = 90,
        x0_frac: float = 0.5,
    ) -> tuple[complex, float]:
        """(value, error estimate) of (1/2 pi i) times the loop integral.
        x0_frac in (0, 1) places the crossing point at -alpha_j - x0_frac;
        Cauchy's theorem makes the value independent of the choice."""
        if t1 <= 0 or t2 == 0:
            raise ParameterError("need t1 > 0 and t2 != 0")
        if not 0.0 < x0_frac < 1.0:
            raise ParameterError("crossing point must lie in (-alpha_j - 1, -alpha_j)")
        v = self.t2_sign * t2
        log_t2 = complex(math.log(abs(v)), 0.0 if v > 0 else math.pi)
        x0 = -float(self.es.alpha(self.j)) - x0_frac

        def quad(run_nodes: int) -> complex:
            xg, wg = np.polynomial.legendre.leggauss(run_nodes)
            total = 0j
            # vertical connector traversed downward: int_{+h}^{-h} f i dy
            y = height * xg
            total += -1j * height * np.sum(self._integrand(x0 + 1j * y, t1, log_t2) * wg)
            # horizontal legs, panel by panel until negligible
            scale = abs(total) + 1e-300
            quiet = 0
            for p in range(max_panels):
                a, b = x0 + p, x0 + p + 1
                xm, xr = (a + b) / 2.0, (b - a) / 2.0
                xs = xm + xr * xg
                upper = self._integrand(xs + 1j * height, t1, log_t2)
                lower = self._integrand(xs - 1j * height, t1, log_t2)
                # upper leg traversed right-to-left, lower left-to-right
                contrib = np.sum((lower - upper) * wg) * xr
                total += contrib
                scale = max(scale, abs(total))
                if abs(contrib) < 0.25 * tol * scale:
                    quiet += 1
                    if quiet >= 3:
                        break
                else:
                    quiet = 0
            # the legs above trace the loop counterclockwise; C_j is clockwise
            return -total / (2j * math.pi)

        coarse = quad(nodes)
        fine = quad(nodes + 12)
        return fine, abs(fine - coarse)
