"""
Independent extended-precision oracles.

These sum the defining power series directly with mpmath at 50 digits and
never call into the package, so they can check it.
"""
import mpmath as mp

DPS = 50


def bessel_i_series(nu, z, terms=None):
    with mp.workdps(DPS):
        z = mp.mpf(z)
        half = z / 2
        n = terms if terms is not None else int(2 * z) + 60
        return mp.fsum(half ** (2 * k + nu) / (mp.factorial(k) * mp.factorial(k + nu)) for k in range(n))


def struve_l0_series(z, terms=None):
    with mp.workdps(DPS):
        z = mp.mpf(z)
        half = z / 2
        n = terms if terms is not None else int(2 * z) + 60
        return mp.fsum(half ** (2 * k + 1) / mp.gamma(k + mp.mpf(3) / 2) ** 2 for k in range(n))


def _w(x, t, lam, c):
    return mp.mpf(lam) / c * mp.sqrt(mp.mpf(c) ** 2 * t ** 2 - mp.mpf(x) ** 2)


def telegraph_ac(x, t, lam, c):
    with mp.workdps(DPS):
        s = mp.sqrt(mp.mpf(c) ** 2 * t ** 2 - mp.mpf(x) ** 2)
        w = _w(x, t, lam, c)
        return lam * mp.exp(-lam * mp.mpf(t)) / (2 * mp.mpf(c)) * (
            bessel_i_series(0, w) + c * mp.mpf(t) / s * bessel_i_series(1, w))


def marginal(x, t, lam, c):
    with mp.workdps(DPS):
        s = mp.sqrt(mp.mpf(c) ** 2 * t ** 2 - mp.mpf(x) ** 2)
        w = _w(x, t, lam, c)
        e = mp.exp(-lam * mp.mpf(t))
        return e / (mp.pi * s) + lam * e / (2 * mp.mpf(c)) * (bessel_i_series(0, w) + struve_l0_series(w))


def tail_q(x, t, lam, c):
    with mp.workdps(DPS):
        s = mp.sqrt(mp.mpf(c) ** 2 * t ** 2 - mp.mpf(x) ** 2)
        w = _w(x, t, lam, c)
        e = mp.exp(-lam * mp.mpf(t))
        return e / (mp.pi * s) + lam * e / (2 * mp.mpf(c)) * struve_l0_series(w)
