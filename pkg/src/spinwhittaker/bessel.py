"""Complex log-gamma and modified Bessel functions of complex order.

K_nu is computed from the symmetric integral

    K_nu(x) = integral_0^inf exp(-x cosh u) cosh(nu u) du     (x > 0),

whose integrand decays doubly exponentially, so the equal-step trapezoid
rule converges geometrically in 1/h; the order-derivative dK/dnu uses the
same grid with the kernel u sinh(nu u).  I_nu comes from the ascending
series with complex log-gamma, with the I_{-m} = I_m limit at negative
integer orders handled through the vanishing 1/Gamma factors.  Everything
accepts numpy arrays of orders for one fixed argument.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np
from scipy.special import digamma as _digamma
from scipy.special import loggamma as _loggamma

from .errors import ParameterError, PoleError

_LOG2 = math.log(2.0)


def log_gamma(z: complex) -> complex:
    """Principal-branch log Gamma; poles are signalled, not returned as inf."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise PoleError(f"log_gamma pole at {z}")
    return complex(_loggamma(z))


def _log_cosh(z: np.ndarray) -> np.ndarray:
    """log cosh(z), stable for large |Re z|."""
    a = np.where(z.real >= 0, z, -z)
    return a + np.log1p(np.exp(-2.0 * a)) - _LOG2


def _log_sinh(z: np.ndarray) -> np.ndarray:
    """log sinh(z) (complex log; sinh zeros give -inf+phase, callers avoid)."""
    a = np.where(z.real >= 0, z, -z)
    sign = np.where(z.real >= 0, 1.0, -1.0)
    with np.errstate(divide="ignore"):
        val = a + np.log1p(-np.exp(-2.0 * a)) - _LOG2
    return val + np.where(sign > 0, 0.0, 1j * np.pi)


def _k_grid(nu_max_re: float, nu_max_im: float, x: float):
    h = min(0.1, 0.35 / math.sqrt(max(x, 1.0))) / (1.0 + nu_max_im / 4.0)
    # truncate where x cosh u - |Re nu| u overwhelms the peak by ~55 digits
    u_peak = math.asinh(max(nu_max_re, 1.0) / x) if nu_max_re > 0 else 0.0
    peak_log = nu_max_re * u_peak - x * math.cosh(u_peak)
    U = max(u_peak, 1.0)
    while -x * math.cosh(U) + nu_max_re * U > peak_log - 130.0:
        U += 0.5
    m = int(U / h) + 1
    return h, np.arange(m + 1) * h


def bessel_K(nu, x: float, *, log_form: bool = False, dnu: int = 0):
    """K_nu(x) (dnu=0) or d/dnu K_nu(x) (dnu=1) for one real x > 0 and a
    scalar or array of complex orders.  log_form returns log K elementwise
    (value = exp of it), which callers combine with log-gamma factors to
    avoid overflow."""
    if x <= 0:
        raise ParameterError(f"bessel_K needs x > 0, got {x}")
    if dnu not in (0, 1):
        raise ParameterError("dnu must be 0 or 1")
    nu_arr = np.atleast_1d(np.asarray(nu, dtype=complex))
    scalar = np.ndim(nu) == 0
    h, u = _k_grid(float(np.max(np.abs(nu_arr.real))), float(np.max(np.abs(nu_arr.imag))), x)
    zu = np.multiply.outer(nu_arr, u)
    if dnu == 0:
        logg = _log_cosh(zu)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            logg = _log_sinh(zu) + np.log(u)
        logg[..., 0] = -np.inf
        logg = np.where(np.isnan(logg), -np.inf, logg)
    logg = logg - x * np.cosh(u)
    m = np.max(logg.real, axis=-1, keepdims=True)
    m = np.where(np.isneginf(m), 0.0, m)  # identically-zero integrand (nu = 0, dnu = 1)
    weights = np.ones_like(u)
    weights[0] = 0.5
    with np.errstate(invalid="ignore"):
        terms = np.exp(logg - m)
    terms = np.where(np.isnan(terms), 0.0, terms)
    s = np.sum(terms * weights, axis=-1)
    with np.errstate(divide="ignore"):
        log_val = m[..., 0] + np.log(s) + math.log(h)
    if log_form:
        return log_val[0] if scalar else log_val
    out = np.exp(log_val)
    return complex(out[0]) if scalar else out


def bessel_K_scaled(nu, x: float):
    """e^x K_nu(x), safe for large x."""
    log_val = bessel_K(nu, x, log_form=True)
    return np.exp(np.asarray(log_val) + x) if np.ndim(nu) else complex(np.exp(log_val + x))


def _gamma_inv(z: np.ndarray) -> np.ndarray:
    """1/Gamma(z) elementwise, zero at non-positive integers."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    ok = ~pole
    out[ok] = np.exp(-_loggamma(z[ok]))
    return out


def _psi_over_gamma(z: np.ndarray) -> np.ndarray:
    """psi(z)/Gamma(z) with the finite limit (-1)^{k+1} k! at z = -k."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    ok = ~pole
    out[ok] = _digamma(z[ok]) * np.exp(-_loggamma(z[ok]))
    if np.any(pole):
        k = np.round(-z[pole].real).astype(int)
        out[pole] = np.array([(-1.0) ** (kk + 1) * math.factorial(kk) for kk in k])
    return out


def bessel_I(nu, x: float, *, dnu: int = 0):
    """I_nu(x) (dnu=0) or d/dnu I_nu(x) (dnu=1) by the ascending series,
    for one real x > 0 and scalar/array complex order.  All gamma factors
    are combined in log space before exponentiating, so large arguments and
    orders stay in range.

    d/dnu I_nu = I_nu log(x/2) - sum (x/2)^{nu+2m} psi(nu+m+1) / (m! Gamma(nu+m+1)).
    """
    if x <= 0:
        raise ParameterError(f"bessel_I needs x > 0, got {x}")
    nu_arr = np.atleast_1d(np.asarray(nu, dtype=complex))
    scalar = np.ndim(nu) == 0
    lh = math.log(x / 2.0)
    mmax = int(30 + x + 2 * np.max(np.abs(nu_arr)))
    m = np.arange(mmax + 1)
    log_m_fact = np.concatenate(([0.0], np.cumsum(np.log(m[1:]))))
    args = np.add.outer(nu_arr, m + 1.0)
    pole = (args.imag == 0) & (args.real <= 0) & (args.real == np.round(args.real))
    safe = np.where(pole, 1.0, args)
    log_terms = (
        np.multiply.outer(nu_arr, np.ones(mmax + 1)) * lh
        + (2 * m) * lh
        - log_m_fact
        - _loggamma(safe)
    )
    log_terms = np.where(pole, -np.inf, log_terms)
    peak = np.max(log_terms.real, axis=-1, keepdims=True)
    peak = np.where(np.isneginf(peak), 0.0, peak)
    with np.errstate(invalid="ignore"):
        terms = np.exp(log_terms - peak)
    terms = np.where(np.isnan(terms), 0.0, terms)
    series = np.exp(peak[..., 0]) * np.sum(terms, axis=-1)
    if dnu == 0:
        out = series
    else:
        # psi/Gamma has the finite limit (-1)^{k+1} k! at args = -k
        psi_part = np.empty_like(args)
        psi_part[~pole] = _digamma(args[~pole])
        correction = np.where(pole, 0.0, terms * np.where(pole, 0.0, psi_part))
        if np.any(pole):
            kk = np.round(-args[pole].real).astype(int)
            lim = np.array([(-1.0) ** (k + 1) * math.exp(math.lgamma(k + 1)) for k in kk])
            extra = np.zeros_like(args)
            # exp(prefactor log) * psi/Gamma limit, with the 1/Gamma removed
            pref = (
                np.multiply.outer(nu_arr, np.ones(mmax + 1)) * lh + (2 * m) * lh - log_m_fact
            )
            extra[pole] = np.exp(pref[pole] - peak[..., 0, None].repeat(mmax + 1, -1)[pole]) * lim
            correction = correction + extra
        out = series * lh - np.exp(peak[..., 0]) * np.sum(correction, axis=-1)
    return complex(out[0]) if scalar else out


def bessel_I_log(nu, x: float):
    """log I_nu(x); for the rare exact zeros returns -inf."""
    val = np.asarray(bessel_I(nu, x), dtype=complex)
    with np.errstate(divide="ignore"):
        out = np.log(val)
    return out if np.ndim(nu) else complex(out)
