"""
Transition densities of the telegraph process and the planar random flight.

Both laws have a singular part of mass ``exp(-lambda*t)`` carried by paths
with no direction change: the two endpoints ``+-ct`` for the telegraph
process, the circle of radius ``ct`` for the planar flight.  Those parts are
reported as probability masses (:class:`DensitySplit`), the absolutely
continuous parts as ordinary density values.

Every Bessel/Struve product is evaluated as ``exp(w - lambda*t) * F_hat(w)``
with ``F_hat(w) = exp(-w) F(w)`` and ``w = (lambda/c) sqrt(c^2 t^2 - x^2)``.
The exponent ``w - lambda*t`` is never positive, so nothing overflows.

The array-valued helpers (``telegraph_ac``, ``marginal_pdf``, ...) accept
numpy arrays in ``x`` and are what the analysis and Monte Carlo code use;
the named operations wrap them for single points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special_functions import bessel_i_scaled, struve_l0_scaled

BOUNDARY_RTOL = 1e-12


@dataclass(frozen=True)
class FlightParams:
    """Speed ``c`` and Poisson switching rate ``lam`` shared by both processes."""

    c: float
    lam: float

    def __post_init__(self):
        for name in ("c", "lam"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a finite positive number, got {v!r}")


@dataclass(frozen=True)
class DensitySplit:
    """
    Density at a point split into its absolutely continuous value and the
    total mass of the singular component at that time.

    ``on_boundary`` marks points on the edge of the support (``|x| = ct`` or
    ``||x|| = ct``), where the singular mass sits and ``ac`` is reported as 0.
    """

    ac: float
    singular_mass: float
    in_support: bool
    on_boundary: bool = False


@dataclass(frozen=True)
class PlanarPoint:
    x1: float
    x2: float

    @property
    def norm(self) -> float:
        return math.hypot(self.x1, self.x2)


def _check_time(t):
    if not (np.all(np.isfinite(t)) and np.all(np.asarray(t) > 0)):
        raise DomainError(f"time must be positive and finite, got {t!r}")


def _gap(x, t, p):
    """``sqrt(c^2 t^2 - x^2)`` written as a product to keep precision near ``|x| = ct``."""
    ct = p.c * t
    ax = np.abs(x)
    return np.sqrt((ct - ax) * (ct + ax))


def exponent(x, t, p: FlightParams):
    """``w - lambda*t``, computed without cancellation; always ``<= 0``."""
    ct = p.c * t
    s = _gap(x, t, p)
    return -(p.lam / p.c) * (x * x) / (s + ct)


def _interior(x, t, p):
    ct = p.c * t
    return np.abs(x) < ct * (1.0 - BOUNDARY_RTOL)


def _require_interior(x, t, p):
    if not np.all(_interior(x, t, p)):
        raise DomainError(f"x must satisfy |x| < ct = {p.c * t!r}")


# -- array kernels on the open support; callers guarantee |x| < ct ----------

def _telegraph_from_gap(s, expo, t, p):
    w = (p.lam / p.c) * s
    ct = p.c * t
    return (p.lam / (2.0 * p.c)) * np.exp(expo) * (
        bessel_i_scaled(0, w) + (ct / s) * bessel_i_scaled(1, w)
    )


def _marginal_from_gap(s, expo, t, p):
    w = (p.lam / p.c) * s
    return np.exp(-p.lam * t) / (np.pi * s) + (p.lam / (2.0 * p.c)) * np.exp(expo) * (
        bessel_i_scaled(0, w) + struve_l0_scaled(w)
    )


def telegraph_ac(x, t: float, p: FlightParams):
    """Absolutely continuous telegraph density; zero off the open support."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    inside = _interior(x, t, p)
    out = np.zeros(np.shape(x))
    if np.any(inside):
        xi = x[inside]
        out[inside] = _telegraph_from_gap(_gap(xi, t, p), exponent(xi, t, p), t, p)
    return float(out) if out.ndim == 0 else out


def marginal_pdf(x, t: float, p: FlightParams):
    """Marginal density of the planar flight; raises unless ``|x| < ct``."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    _require_interior(x, t, p)
    out = _marginal_from_gap(_gap(x, t, p), exponent(x, t, p), t, p)
    return float(out) if np.ndim(out) == 0 else out


def planar_ac_radial(r, t: float, p: FlightParams):
    """Absolutely continuous planar density at distance ``r`` from the origin."""
    _check_time(t)
    r = np.asarray(r, dtype=float)
    inside = _interior(r, t, p)
    out = np.zeros(np.shape(r))
    if np.any(inside):
        ri = r[inside]
        s = _gap(ri, t, p)
        out[inside] = (p.lam / (2.0 * np.pi * p.c)) * np.exp(exponent(ri, t, p)) / s
    return float(out) if out.ndim == 0 else out


# -- named point operations ---------------------------------------------------

def telegraph_density(x: float, t: float, p: FlightParams) -> DensitySplit:
    """
    Telegraph density at ``x``: AC value plus the endpoint atoms.

    The singular mass ``exp(-lambda t)`` is split evenly over ``+-ct``.
    """
    _check_time(t)
    ct = p.c * t
    mass = math.exp(-p.lam * t)
    if abs(x) >= ct * (1.0 - BOUNDARY_RTOL):
        return DensitySplit(0.0, mass, False, abs(x) <= ct * (1.0 + BOUNDARY_RTOL))
    return DensitySplit(telegraph_ac(x, t, p), mass, True)


def telegraph_density_derivative_form(x: float, t: float, p: FlightParams) -> float:
    """
    AC telegraph density written as ``e^{-lt}/(2c) [l I0(w) + d/dt I0(w)]``.

    The time derivative is expanded as ``I1(w) * dw/dt`` with
    ``dw/dt = lambda c t / sqrt(c^2 t^2 - x^2)``.
    """
    _check_time(t)
    _require_interior(x, t, p)
    s = float(_gap(x, t, p))
    w = (p.lam / p.c) * s
    dw_dt = p.lam * p.c * t / s
    scale = math.exp(float(exponent(x, t, p))) / (2.0 * p.c)
    return scale * (p.lam * bessel_i_scaled(0, w) + bessel_i_scaled(1, w) * dw_dt)


def planar_density(pt: PlanarPoint, t: float, p: FlightParams) -> DensitySplit:
    """Planar density at ``pt``; the singular mass is uniform on the circle ``ct``."""
    _check_time(t)
    r = pt.norm
    ct = p.c * t
    mass = math.exp(-p.lam * t)
    if r >= ct * (1.0 - BOUNDARY_RTOL):
        return DensitySplit(0.0, mass, False, r <= ct * (1.0 + BOUNDARY_RTOL))
    return DensitySplit(planar_ac_radial(r, t, p), mass, True)


def marginal_density(x: float, t: float, p: FlightParams) -> float:
    """Density of either coordinate of the planar flight (no singular part)."""
    return marginal_pdf(float(x), t, p)


def tail_R(x, t: float, p: FlightParams):
    """Bessel-``I1`` part of the telegraph density that is not shared with ``g``."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    _require_interior(x, t, p)
    s = _gap(x, t, p)
    w = (p.lam / p.c) * s
    out = 0.5 * p.lam * t * np.exp(exponent(x, t, p)) / s * bessel_i_scaled(1, w)
    return float(out) if np.ndim(out) == 0 else out


def tail_Q(x, t: float, p: FlightParams):
    """Circle-projection and Struve part of the marginal density not shared with ``f``."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    _require_interior(x, t, p)
    s = _gap(x, t, p)
    w = (p.lam / p.c) * s
    out = np.exp(-p.lam * t) / (np.pi * s) + (p.lam / (2.0 * p.c)) * np.exp(
        exponent(x, t, p)
    ) * struve_l0_scaled(w)
    return float(out) if np.ndim(out) == 0 else out


def common_term(x, t: float, p: FlightParams):
    """``(lambda/2c) e^{-lambda t} I0(w)``, shared by both densities."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    _require_interior(x, t, p)
    w = (p.lam / p.c) * _gap(x, t, p)
    out = (p.lam / (2.0 * p.c)) * np.exp(exponent(x, t, p)) * bessel_i_scaled(0, w)
    return float(out) if np.ndim(out) == 0 else out


def leading_term(t: float, p: FlightParams) -> float:
    """Common large-time limit ``(1/2c) sqrt(lambda / (2 pi t))`` of ``R`` and ``Q``."""
    _check_time(t)
    return math.sqrt(p.lam / (2.0 * math.pi * t)) / (2.0 * p.c)
