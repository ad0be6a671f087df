"""
Exponentially scaled modified Bessel and Struve functions.

The densities in this package multiply Bessel-type functions of argument
``w`` by ``exp(-lambda*t)`` with ``lambda*t`` in the thousands, so the raw
functions overflow long before the products do.  Everything here therefore
returns scaled values ``exp(-z) * F(z)``, which stay in ``[0, 1]``.

Evaluation strategy
-------------------
* ``z <= 25``: power series with term-ratio stopping.  All terms are
  positive, so there is no cancellation.
* ``z > 25``: Hankel's large-argument expansion for ``I_nu``, and for
  ``L_0`` the relation ``L_0 = I_0 - M_0`` with the asymptotic series of
  ``M_0(z) ~ 2/(pi z) * sum ((2k-1)!!)^2 / z^(2k)``.

:func:`struve_l0_scaled_bessel_sum` evaluates ``L_0`` by the alternating
series over odd-order Bessel functions instead.  It shares no code with
:func:`struve_l0_scaled` and is kept as an independent cross-check.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = [
    "SERIES_CUTOFF",
    "ScaledValue",
    "bessel_i",
    "bessel_i_scaled",
    "log_bessel_i",
    "struve_l0_scaled",
    "struve_l0_scaled_bessel_sum",
    "bessel_i_scaled_sequence",
]

SERIES_CUTOFF = 25.0
_SERIES_RTOL = 1e-16
_ASYMP_RTOL = 1e-17
_MAX_TERMS = 1000


class ScaledValue:
    """A non-negative number stored as ``value * exp(scale_exponent)``."""

    __slots__ = ("value", "scale_exponent")

    def __init__(self, value: float, scale_exponent: float):
        if not value >= 0.0 or not math.isfinite(value):
            raise DomainError(f"scaled value must be finite and >= 0, got {value!r}")
        self.value = float(value)
        self.scale_exponent = float(scale_exponent)

    def log(self) -> float:
        if self.value == 0.0:
            return -math.inf
        return math.log(self.value) + self.scale_exponent

    def __float__(self) -> float:
        return self.value * math.exp(self.scale_exponent)

    def __repr__(self):
        return f"ScaledValue({self.value!r}, {self.scale_exponent!r})"


def _check_order(nu) -> int:
    if isinstance(nu, (bool, np.bool_)) or int(nu) != nu:
        raise DomainError(f"order must be a non-negative integer, got {nu!r}")
    nu = int(nu)
    if nu < 0:
        raise DomainError(f"order must be non-negative, got {nu}")
    return nu


def _check_argument(z):
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)) or np.any(z < 0):
        raise DomainError("argument must be >= 0")
    return z


def _wrap(out, scalar):
    return float(out[0]) if scalar else out


def _series_i(nu, z):
    """exp(-z) I_nu(z) from the power series; suitable for moderate z."""
    q = 0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(_MAX_TERMS):
        term = term * q / ((k + 1.0) * (k + 1.0 + nu))
        total = total + term
        if np.all(term <= _SERIES_RTOL * total):
            break
    with np.errstate(divide="ignore"):
        log_pre = nu * np.log(0.5 * z) - math.lgamma(nu + 1.0) - z if nu else -z
    return np.exp(log_pre) * total


def _log_series_i(nu, z):
    """exp(-z) I_nu(z) by summing the series in log space (any z, any nu)."""
    out = np.empty_like(z)
    for i, zi in enumerate(z.flat):
        if zi == 0.0:
            out.flat[i] = 1.0 if nu == 0 else 0.0
            continue
        k = np.arange(int(zi + 20.0 * math.sqrt(zi) + 60.0))
        log_terms = (2 * k + nu) * math.log(0.5 * zi) - _lgamma(k + 1.0) - _lgamma(k + nu + 1.0) - zi
        top = log_terms.max()
        out.flat[i] = math.exp(top) * np.exp(log_terms - top).sum()
    return out


_lgamma = np.vectorize(math.lgamma, otypes=[float])


def _asymptotic_i(nu, z):
    """
    Hankel expansion of exp(-z) I_nu(z).

    Returns the values and a mask of entries where the truncated series
    did not reach the requested tolerance before its terms started growing.
    """
    mu = 4.0 * nu * nu
    term = np.ones_like(z)
    total = np.ones_like(z)
    done = np.zeros(z.shape, dtype=bool)
    failed = np.zeros(z.shape, dtype=bool)
    for k in range(1, _MAX_TERMS):
        new = term * (-(mu - (2 * k - 1) ** 2) / (8.0 * k * z))
        growing = np.abs(new) > np.abs(term)
        failed |= growing & ~done
        done |= growing
        active = ~done
        total = np.where(active, total + new, total)
        term = np.where(active, new, term)
        done |= np.abs(new) <= _ASYMP_RTOL * np.abs(total)
        if np.all(done):
            break
    return total / np.sqrt(2.0 * np.pi * z), failed


def bessel_i_scaled(nu: int, z):
    """
    Exponentially scaled modified Bessel function ``exp(-z) * I_nu(z)``.

    Parameters
    ----------
    nu : int
        Non-negative integer order.
    z : float or array_like
        Non-negative argument(s).

    Returns
    -------
    float or ndarray
        Values in ``(0, 1]`` for ``nu == 0`` and ``[0, 1)`` for ``nu >= 1``.
    """
    nu = _check_order(nu)
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(_check_argument(z))
    out = np.empty_like(z)
    small = z <= SERIES_CUTOFF
    if np.any(small):
        out[small] = _series_i(nu, z[small])
    large = ~small
    if np.any(large):
        zl = z[large]
        vals, failed = _asymptotic_i(nu, zl)
        if np.any(failed):
            vals[failed] = _log_series_i(nu, zl[failed])
        out[large] = vals
    return _wrap(out, scalar)


def log_bessel_i(nu: int, z):
    """Natural log of ``I_nu(z)``; ``-inf`` for ``nu >= 1`` at ``z == 0``."""
    scaled = bessel_i_scaled(nu, z)
    with np.errstate(divide="ignore"):
        out = np.log(scaled) + np.asarray(z, dtype=float)
    return float(out) if np.ndim(out) == 0 else out


def bessel_i(nu: int, z: float) -> ScaledValue:
    """``I_nu(z)`` for scalar ``z`` as an overflow-free :class:`ScaledValue`."""
    return ScaledValue(bessel_i_scaled(nu, float(z)), float(z))


def _series_l0(z):
    q = 0.25 * z * z
    term = 2.0 * z / np.pi  # (z/2) / Gamma(3/2)^2
    total = term.copy()
    for k in range(_MAX_TERMS):
        term = term * q / ((k + 1.5) ** 2)
        total = total + term
        if np.all(term <= _SERIES_RTOL * total):
            break
    return np.exp(-z) * total


def _asymptotic_m0(z):
    """``I_0(z) - L_0(z)`` by its large-argument series."""
    zz = z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    done = np.zeros(z.shape, dtype=bool)
    for k in range(_MAX_TERMS):
        new = term * (2 * k + 1.0) ** 2 / zz
        done |= np.abs(new) > np.abs(term)
        active = ~done
        total = np.where(active, total + new, total)
        term = np.where(active, new, term)
        done |= new <= _ASYMP_RTOL * total
        if np.all(done):
            break
    return 2.0 / (np.pi * z) * total


def struve_l0_scaled(z):
    """
    Exponentially scaled modified Struve function ``exp(-z) * L_0(z)``.

    Parameters
    ----------
    z : float or array_like
        Non-negative argument(s).
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(_check_argument(z))
    out = np.empty_like(z)
    small = z <= SERIES_CUTOFF
    if np.any(small):
        out[small] = _series_l0(z[small])
    large = ~small
    if np.any(large):
        zl = z[large]
        out[large] = bessel_i_scaled(0, zl) - np.exp(-zl) * _asymptotic_m0(zl)
    return _wrap(out, scalar)


def bessel_i_scaled_sequence(z: float, n_max: int) -> np.ndarray:
    """
    ``exp(-z) I_k(z)`` for ``k = 0..n_max`` by Miller's backward recurrence.

    The recurrence ``I_{k-1} = (2k/z) I_k + I_{k+1}`` is started far above
    ``n_max`` and normalised with ``I_0 + 2 sum_{k>=1} I_k = exp(z)``, so no
    other Bessel evaluation is involved.
    """
    z = float(_check_argument(z))
    n_max = _check_order(n_max)
    if z == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    start = max(n_max, int(z + 15.0 * math.sqrt(z))) + 60
    vals = np.zeros(start + 2)
    vals[start] = 1e-30
    for k in range(start, 0, -1):
        vals[k - 1] = (2.0 * k / z) * vals[k] + vals[k + 1]
        if vals[k - 1] > 1e250:
            vals[k - 1:] *= 1e-250
    norm = vals[0] + 2.0 * vals[1:].sum()
    return vals[: n_max + 1] / norm


def struve_l0_scaled_bessel_sum(z: float) -> float:
    """
    ``exp(-z) L_0(z)`` from ``(4/pi) sum_k (-1)^k I_{2k+1}(z) / (2k+1)``.

    Scalar only.  The sum is truncated once the next term drops below
    ``1e-16`` of the running total; being alternating with decreasing terms,
    the truncation error is bounded by that first omitted term.
    """
    z = float(_check_argument(z))
    if z == 0.0:
        return 0.0
    n_max = int(z + 15.0 * math.sqrt(z)) + 40
    seq = bessel_i_scaled_sequence(z, n_max)
    total = 0.0
    for k in range((n_max - 1) // 2 + 1):
        term = seq[2 * k + 1] / (2 * k + 1)
        if k > 0 and term < _SERIES_RTOL * abs(total):
            break
        total += -term if k % 2 else term
    return 4.0 / math.pi * total
