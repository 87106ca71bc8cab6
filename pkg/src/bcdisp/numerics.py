"""Special functions: Gaussian tail, regularized incomplete beta, sphere caps.

All functions accept scalars or numpy arrays and broadcast. Scalar input
returns a Python float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, erfc, log_ndtr, ndtri

_SQRT2 = math.sqrt(2.0)
_FPMIN = 1e-300
_CF_EPS = 1e-16
_CF_MAX_ITER = 2000


@dataclass(frozen=True)
class Tolerance:
    abs: float = 0.0
    rel: float = 0.0

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs == 0 and self.rel == 0:
            raise ValueError("at least one of abs, rel must be positive")

    def close(self, a, b) -> bool:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return bool(np.all(np.abs(a - b) <= self.abs + self.rel * np.abs(b)))


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def qfunc(x):
    """Gaussian tail probability Q(x) = P{N(0,1) > x}."""
    x = np.asarray(x, dtype=float)
    return _out(0.5 * erfc(x / _SQRT2))


def log_qfunc(x):
    """log Q(x), finite far into the upper tail where Q underflows."""
    x = np.asarray(x, dtype=float)
    return _out(log_ndtr(-x))


def qfunc_inv(p):
    """Inverse of :func:`qfunc` on the open interval (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0) & (p < 1))):
        raise ValueError("qfunc_inv requires 0 < p < 1")
    return _out(-ndtri(p))


def _betacf(a, b, x):
    # modified Lentz evaluation of the continued fraction for I_x(a, b)
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
    d = 1.0 / d
    h = d.copy()
    result = np.empty_like(x)
    idx = np.arange(x.size)
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        h = h * d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        done = np.abs(delta - 1.0) <= _CF_EPS
        if done.any():
            result[idx[done]] = h[done]
            keep = ~done
            if not keep.any():
                return result
            idx, h, c, d = idx[keep], h[keep], c[keep], d[keep]
            a, b, x = a[keep], b[keep], x[keep]
            qab, qap, qam = qab[keep], qap[keep], qam[keep]
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def reg_inc_beta(x, a, b):
    """Regularized incomplete beta function I_x(a, b).

    Continued fraction with the usual switch to ``1 - I_{1-x}(b, a)`` when
    ``x > (a + 1) / (a + b + 2)``.
    """
    x, a, b = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    )
    if np.any(~((x >= 0) & (x <= 1))):
        raise ValueError("reg_inc_beta requires 0 <= x <= 1")
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise ValueError("reg_inc_beta requires a > 0 and b > 0")
    out = np.empty(x.shape, dtype=float)
    out[x == 0] = 0.0
    out[x == 1] = 1.0
    inner = (x > 0) & (x < 1)
    if inner.any():
        xi, ai, bi = x[inner], a[inner], b[inner]
        flip = xi > (ai + 1.0) / (ai + bi + 2.0)
        xs = np.where(flip, 1.0 - xi, xi)
        As = np.where(flip, bi, ai)
        Bs = np.where(flip, ai, bi)
        log_front = As * np.log(xs) + Bs * np.log1p(-xs) - betaln(As, Bs)
        val = np.exp(log_front) * _betacf(As, Bs, xs) / As
        out[inner] = np.where(flip, 1.0 - val, val)
    return _out(np.clip(out, 0.0, 1.0))


def sphere_cap_tail(n: int, c):
    """P{W_1 >= c} for W uniform on the unit sphere in R^n."""
    if n < 2:
        raise ValueError("sphere_cap_tail requires n >= 2")
    c = np.asarray(c, dtype=float)
    out = np.empty(c.shape, dtype=float)
    out[c > 1] = 0.0
    out[c <= -1] = 1.0
    inner = (c > -1) & (c <= 1)
    if inner.any():
        ci = c[inner]
        ac = np.abs(ci)
        x = (1.0 - ac) * (1.0 + ac)
        half = 0.5 * reg_inc_beta(x, 0.5 * (n - 1), 0.5)
        out[inner] = np.where(ci >= 0, half, 1.0 - half)
    return _out(out)


def sphere_projection_logpdf(n: int, rho):
    """Log density of one coordinate of a uniform point on the unit sphere in R^n."""
    rho = np.asarray(rho, dtype=float)
    return (0.5 * (n - 3)) * np.log1p(-rho * rho) - betaln(0.5, 0.5 * (n - 1))
