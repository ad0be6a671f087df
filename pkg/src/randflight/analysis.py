"""
Quadrature, distribution functions and the comparisons built on them.

All one-dimensional integrals are taken in the angle variable
``x = ct sin(theta)``.  With ``s = sqrt(c^2 t^2 - x^2) = ct cos(theta)`` the
``1/s`` singularity of the marginal density at ``+-ct`` cancels against
``dx = s dtheta``, leaving smooth bounded integrands on ``[-pi/2, pi/2]``.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.stats import kstwobign

from .densities import (
    FlightParams,
    marginal_pdf,
    tail_Q,
    tail_R,
    telegraph_ac,
)
from .errors import DomainError
from .montecarlo import PLANAR, SampleBatch
from .special_functions import bessel_i_scaled, struve_l0_scaled

TELEGRAPH_AC = "telegraph_ac"
MARGINAL = "marginal"
PLANAR_RADIAL = "planar_radial"
TELEGRAPH = "telegraph"

QUAD_TOL = 1e-10
QUAD_BUDGET = 10 ** 6

# 15-point Kronrod rule and its embedded 7-point Gauss rule on [-1, 1].
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[[13, 11, 9]] = _WG[:3]
_GW[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class DiffRow:
    t: float
    f: float
    g: float
    abs_diff: float


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    points: int


class GridRow(NamedTuple):
    x: float
    f: float
    g: float


# -- integrands in the angle variable ----------------------------------------

def _theta_integrand(which, t, p):
    ct = p.c * t
    k = p.lam / (2.0 * p.c)

    if which == TELEGRAPH_AC:
        def fn(theta):
            cos = np.cos(theta)
            s = ct * cos
            w = p.lam * t * cos
            damp = np.exp(-2.0 * p.lam * t * np.sin(0.5 * theta) ** 2)
            return k * damp * (s * bessel_i_scaled(0, w) + ct * bessel_i_scaled(1, w))
    elif which == MARGINAL:
        atom = math.exp(-p.lam * t) / math.pi

        def fn(theta):
            cos = np.cos(theta)
            s = ct * cos
            w = p.lam * t * cos
            damp = np.exp(-2.0 * p.lam * t * np.sin(0.5 * theta) ** 2)
            return atom + k * damp * s * (bessel_i_scaled(0, w) + struve_l0_scaled(w))
    elif which == PLANAR_RADIAL:
        # 2 pi r p_ac(r) dr with r = ct sin(theta)
        def fn(theta):
            damp = np.exp(-2.0 * p.lam * t * np.sin(0.5 * theta) ** 2)
            return p.lam * t * np.sin(theta) * damp
    else:
        raise DomainError(f"unknown density {which!r}")
    return fn


def _to_theta(v, ct):
    return np.arcsin(np.clip(v / ct, -1.0, 1.0))


def gauss_kronrod(fn, a: float, b: float, tol: float = QUAD_TOL,
                  budget: int = QUAD_BUDGET) -> QuadratureResult:
    """
    Adaptive 7/15-point Gauss-Kronrod quadrature by interval halving.

    The interval with the largest ``|K15 - G7|`` is bisected until the summed
    estimate drops below ``tol`` or ``budget`` integrand evaluations are used.
    ``fn`` must accept an array of abscissae.
    """
    def rule(lo, hi):
        half = 0.5 * (hi - lo)
        vals = fn(0.5 * (lo + hi) + half * _NODES)
        k = half * float(_KW @ vals)
        g = half * float(_GW @ vals)
        return k, abs(k - g)

    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    k, e = rule(a, b)
    evals = 15
    heap = [(-e, a, b, k)]
    total, err = k, e
    while err > tol and evals + 30 <= budget:
        neg_e, lo, hi, k = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            heapq.heappush(heap, (neg_e, lo, hi, k))
            break
        k1, e1 = rule(lo, mid)
        k2, e2 = rule(mid, hi)
        evals += 30
        heapq.heappush(heap, (-e1, lo, mid, k1))
        heapq.heappush(heap, (-e2, mid, hi, k2))
        total += k1 + k2 - k
        err += e1 + e2 + neg_e
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    return QuadratureResult(total, err, evals)


def integrate_density(which: str, t: float, p: FlightParams, a: float, b: float,
                      tol: float = QUAD_TOL) -> QuadratureResult:
    """
    Integrate ``telegraph_ac``, ``marginal`` or ``planar_radial`` over ``[a, b]``.

    For ``planar_radial`` the bounds are radii in ``[0, ct]`` and the result
    is the AC mass of the annulus ``a <= ||x|| <= b``.
    """
    if not t > 0:
        raise DomainError(f"time must be positive, got {t!r}")
    ct = p.c * t
    slack = 1e-12 * ct
    lo_bound = 0.0 if which == PLANAR_RADIAL else -ct
    if not (lo_bound - slack <= a <= b <= ct + slack):
        raise DomainError(f"[{a}, {b}] is not inside the support [{lo_bound}, {ct}]")
    fn = _theta_integrand(which, t, p)
    return gauss_kronrod(fn, float(_to_theta(a, ct)), float(_to_theta(b, ct)), tol=tol)


# -- distribution functions ---------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_BACKBONE = 1024


def _cumulative_from_left(fn, theta):
    """
    ``int_{-pi/2}^{theta_i} fn`` for sorted ``theta`` by composite Gauss-Legendre.

    A fixed backbone of ``_BACKBONE`` equal cells keeps every panel narrow
    whatever the query points are.
    """
    backbone = np.linspace(-0.5 * np.pi, 0.5 * np.pi, _BACKBONE + 1)
    knots = np.union1d(backbone, theta)
    lo, hi = knots[:-1], knots[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    vals = fn((mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()).reshape(-1, _GL_X.size)
    panels = half * (vals @ _GL_W)
    cum = np.concatenate([[0.0], np.cumsum(panels)])
    return cum[np.searchsorted(knots, theta)]


def cdf(which: str, x, t: float, p: FlightParams, side: str = "right"):
    """
    Distribution function of the telegraph process or of a planar marginal.

    ``side="right"`` gives ``P(X <= x)``; ``side="left"`` gives ``P(X < x)``.
    The two differ only at the telegraph endpoint atoms ``+-ct``, each of
    mass ``exp(-lambda t)/2``.  Arguments outside ``[-ct, ct]`` clamp to 0 or 1.
    """
    if which not in (TELEGRAPH, MARGINAL):
        raise DomainError(f"unknown distribution {which!r}")
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if not t > 0:
        raise DomainError(f"time must be positive, got {t!r}")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ct = p.c * t
    tol = 1e-12 * ct
    at_lo = np.abs(x + ct) <= tol
    at_hi = np.abs(x - ct) <= tol
    below = (x < -ct) & ~at_lo
    above = (x > ct) & ~at_hi
    inner = ~(at_lo | at_hi | below | above)

    atom = 0.5 * math.exp(-p.lam * t) if which == TELEGRAPH else 0.0
    out = np.empty_like(x)
    out[below] = 0.0
    out[above] = 1.0
    out[at_lo] = atom if side == "right" else 0.0
    out[at_hi] = 1.0 if side == "right" else 1.0 - atom
    if np.any(inner):
        theta = _to_theta(x[inner], ct)
        order = np.argsort(theta)
        fn = _theta_integrand(TELEGRAPH_AC if which == TELEGRAPH else MARGINAL, t, p)
        vals = np.empty(theta.size)
        vals[order] = _cumulative_from_left(fn, theta[order])
        out[inner] = np.clip(atom + vals, 0.0, 1.0)
    return float(out[0]) if scalar else out


def quantile(which: str, q: float, t: float, p: FlightParams) -> float:
    """Smallest ``x`` with ``cdf(which, x) >= q``."""
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {q!r}")
    ct = p.c * t
    if q <= cdf(which, -ct, t, p):
        return -ct
    if q > cdf(which, ct, t, p, side="left"):
        return ct
    return brentq(lambda v: cdf(which, v, t, p) - q, -ct, ct, xtol=1e-13 * ct, rtol=1e-15)


def ks_distance(batch: SampleBatch, which: str, t: float, p: FlightParams) -> float:
    """
    Sup distance between the batch's empirical CDF and ``cdf(which, .)``.

    Both one-sided limits are compared at every distinct sample value, which
    keeps the statistic exact when the law has atoms.
    """
    if batch.kind == PLANAR:
        raise DomainError("KS distance needs scalar positions; project the batch first")
    if batch.params != p or batch.horizon != t:
        raise DomainError("batch parameters/horizon do not match the requested law")
    values, counts = np.unique(batch.positions, return_counts=True)
    n = batch.positions.size
    emp_right = np.cumsum(counts) / n
    emp_left = emp_right - counts / n
    theo_right = cdf(which, values, t, p, side="right")
    theo_left = theo_right.copy()
    # one-sided limits differ only at the support endpoints
    edge = np.abs(np.abs(values) - p.c * t) <= 1e-12 * p.c * t
    if np.any(edge):
        theo_left[edge] = cdf(which, values[edge], t, p, side="left")
    return float(max(np.max(np.abs(emp_right - theo_right)),
                     np.max(np.abs(emp_left - theo_left))))


def ks_critical(n: int, alpha: float) -> float:
    """Asymptotic Kolmogorov critical value ``K_{1-alpha} / sqrt(n)``."""
    return float(kstwobign.isf(alpha)) / math.sqrt(n)


# -- comparisons of f and g ---------------------------------------------------

TABLE1_TIMES = (5, 10, 20, 50, 100, 150, 200, 300, 400, 500, 1000)


def difference_table(x: float, p: FlightParams, ts: Sequence[float]) -> List[DiffRow]:
    """``f``, ``g`` and ``|f - g|`` at a fixed point for each time in ``ts``."""
    rows = []
    for t in ts:
        if not abs(x) < p.c * t:
            raise DomainError(f"|x| = {abs(x)} must be below ct = {p.c * t}")
        f = float(telegraph_ac(x, t, p))
        g = float(marginal_pdf(x, t, p))
        rows.append(DiffRow(float(t), f, g, abs(f - g)))
    return rows


def fit_loglog(ts: Sequence[float], values: Sequence[float]) -> RateFit:
    """Unweighted least-squares line through ``(log t, log value)``."""
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = values > 0
    if keep.sum() < 3:
        raise DomainError("need at least 3 positive values for a log-log fit")
    lx, ly = np.log(ts[keep]), np.log(values[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return RateFit(float(slope), float(intercept), min(max(r2, 0.0), 1.0), int(keep.sum()))


def fit_convergence_rate(x: float, p: FlightParams, ts: Sequence[float],
                         quantity: str = "difference") -> RateFit:
    """
    Log-log slope of ``|f - g|`` (default), ``R`` or ``Q`` at ``x`` against ``t``.

    Differences that vanish to machine precision are dropped before fitting.
    """
    ts = [float(t) for t in ts]
    if len(ts) < 3 or any(b <= a for a, b in zip(ts, ts[1:])):
        raise DomainError("ts needs at least 3 strictly increasing times")
    if not abs(x) < p.c * ts[0]:
        raise DomainError(f"|x| must be below c * min(ts) = {p.c * ts[0]}")
    if quantity == "difference":
        rows = difference_table(x, p, ts)
        values = [r.abs_diff if r.abs_diff > 4 * np.finfo(float).eps * max(r.f, r.g) else 0.0
                  for r in rows]
    elif quantity == "R":
        values = [tail_R(x, t, p) for t in ts]
    elif quantity == "Q":
        values = [tail_Q(x, t, p) for t in ts]
    else:
        raise DomainError(f"unknown quantity {quantity!r}")
    return fit_loglog(ts, values)


def figure_grid(t: float, p: FlightParams, n_points: int, eps: float = 1e-3) -> List[GridRow]:
    """
    Both densities on a uniform grid over ``(-ct(1-eps), ct(1-eps))``.

    The grid is built exactly antisymmetric, so rows at ``x`` and ``-x``
    carry identical density values.
    """
    if int(n_points) != n_points or n_points < 2:
        raise DomainError(f"n_points must be an integer >= 2, got {n_points!r}")
    u = np.linspace(-1.0, 1.0, int(n_points))
    u = 0.5 * (u - u[::-1])
    xs = p.c * t * (1.0 - eps) * u
    f = telegraph_ac(xs, t, p)
    g = marginal_pdf(xs, t, p)
    return [GridRow(float(a), float(b), float(c)) for a, b, c in zip(xs, f, g)]
