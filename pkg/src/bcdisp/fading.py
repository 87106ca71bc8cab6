"""Quasi-static fading: gain laws, outage probabilities, outage region, normal-approximation bound."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, optimize, stats

from .analysis import RatePair, RegionBoundary, capacity, dispersion_v1, dispersion_v2
from .model import ChannelConfig, FadingSpec, validate_config
from .numerics import qfunc
from .rng import TAG_FADING, stream

OUTAGE_METHODS = ("closed_form", "quadrature", "monte_carlo")
DISPERSION_GAIN_CHOICES = ("cross", "own")


@dataclass(frozen=True)
class OutageReport:
    user: int
    rate: float
    outage_prob: float
    method: str
    std_error: float = 0.0

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "outage_report", **asdict(self)}


def _check_spec(spec: FadingSpec) -> None:
    problems = spec.problems()
    if problems:
        raise ValueError("; ".join(problems))


def sample_gain(spec: FadingSpec, rng: np.random.Generator, size=None):
    """Draw amplitude gain(s) H."""
    _check_spec(spec)
    if spec.family == "deterministic":
        return spec.gain if size is None else np.full(size, spec.gain)
    if spec.family == "rayleigh":
        return np.sqrt(rng.exponential(spec.scale, size))
    k, omega = spec.k_factor, spec.scale
    los = math.sqrt(k * omega / (k + 1.0))
    sigma = math.sqrt(omega / (2.0 * (k + 1.0)))
    re = los + sigma * rng.standard_normal(size)
    im = sigma * rng.standard_normal(size)
    return np.hypot(re, im)


def _rice_to_ncx2(spec: FadingSpec) -> tuple[float, float]:
    # 2(K+1)/Omega * H^2 is noncentral chi-square with 2 dof and noncentrality 2K
    return 2.0 * (spec.k_factor + 1.0) / spec.scale, 2.0 * spec.k_factor


def gain_sq_cdf(spec: FadingSpec, q):
    """P{H^2 <= q}."""
    q = np.asarray(q, dtype=float)
    if spec.family == "deterministic":
        out = (q >= spec.gain**2).astype(float)
    elif spec.family == "rayleigh":
        out = np.where(q > 0, -np.expm1(-np.maximum(q, 0.0) / spec.scale), 0.0)
    else:
        f, nc = _rice_to_ncx2(spec)
        out = np.where(q > 0, stats.ncx2.cdf(np.maximum(q, 0.0) * f, 2, nc), 0.0)
    return float(out) if out.ndim == 0 else out


def gain_sq_pdf(spec: FadingSpec, q):
    q = np.asarray(q, dtype=float)
    if spec.family == "rayleigh":
        out = np.where(q >= 0, np.exp(-np.maximum(q, 0.0) / spec.scale) / spec.scale, 0.0)
    elif spec.family == "rice":
        f, nc = _rice_to_ncx2(spec)
        out = np.where(q >= 0, f * stats.ncx2.pdf(np.maximum(q, 0.0) * f, 2, nc), 0.0)
    else:
        raise ValueError("deterministic gain has no density")
    return float(out) if out.ndim == 0 else out


def gain_sq_quantile(spec: FadingSpec, p: float) -> float:
    """q with P{H^2 <= q} = p; closed form where available, else bisection on the cdf."""
    _check_spec(spec)
    if not 0 < p < 1:
        raise ValueError("quantile level must lie in (0, 1)")
    if spec.family == "deterministic":
        return spec.gain**2
    if spec.family == "rayleigh":
        return -spec.scale * math.log1p(-p)
    hi = spec.scale
    while gain_sq_cdf(spec, hi) < p:
        hi *= 2.0
    return optimize.brentq(lambda q: gain_sq_cdf(spec, q) - p, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def outage_threshold(cfg: ChannelConfig, user: int, rate: float) -> float:
    """Largest squared gain that is still in outage at ``rate`` (inf if always in outage)."""
    if rate < 0:
        raise ValueError("rate must be nonnegative")
    e = math.expm1(2.0 * rate)
    if user == 1:
        return cfg.beta * e / cfg.power1
    if user == 2:
        denom = cfg.power2 - cfg.power1 * e
        return e / denom if denom > 0 else math.inf
    raise ValueError("user must be 1 or 2")


def user_capacity(cfg: ChannelConfig, user: int, gain_sq):
    g = np.asarray(gain_sq, dtype=float)
    if user == 1:
        return capacity(g * cfg.power1 / cfg.beta)
    return capacity(g * cfg.power2 / (g * cfg.power1 + 1.0))


def outage_prob(cfg: ChannelConfig, spec: FadingSpec, user: int, rate: float,
                method: str = "closed_form", samples: int = 10**6, seed: int = 0) -> OutageReport:
    """P{C_user(H) <= rate} for the user's fading law."""
    validate_config(cfg)
    _check_spec(spec)
    if method not in OUTAGE_METHODS:
        raise ValueError(f"unknown method {method!r}")
    q = outage_threshold(cfg, user, rate)
    if method == "monte_carlo":
        h = sample_gain(spec, stream(seed, TAG_FADING, user), samples)
        hits = np.asarray(h) ** 2 <= q
        p = float(hits.mean())
        return OutageReport(user, rate, p, method, math.sqrt(p * (1 - p) / samples))
    if math.isinf(q):
        return OutageReport(user, rate, 1.0, method)
    if method == "quadrature" and spec.family != "deterministic":
        val, _ = integrate.quad(lambda g: gain_sq_pdf(spec, g), 0.0, q, epsabs=1e-14, epsrel=1e-12, limit=200)
        return OutageReport(user, rate, min(max(val, 0.0), 1.0), method)
    return OutageReport(user, rate, gain_sq_cdf(spec, q), method)


def outage_rate(cfg: ChannelConfig, spec: FadingSpec, user: int, eps: float) -> float:
    """Largest rate with outage probability at most ``eps``, via the gain quantile."""
    q = gain_sq_quantile(spec, eps)
    return float(user_capacity(cfg, user, q))


def outage_region(cfg: ChannelConfig, spec1: FadingSpec, spec2: FadingSpec,
                  eps1: float, eps2: float) -> RegionBoundary:
    """Outage capacity rectangle for per-user outage targets."""
    validate_config(cfg)
    for e in (eps1, eps2):
        if not 0 < e < 1:
            raise ValueError("outage targets must lie in (0, 1)")
    r1 = outage_rate(cfg, spec1, 1, eps1)
    r2 = outage_rate(cfg, spec2, 2, eps2)
    pts = [RatePair(0.0, r2), RatePair(r1, r2), RatePair(r1, 0.0)]
    meta = {"eps1": eps1, "eps2": eps2, "corner": [r1, r2], "alpha": cfg.alpha,
            "P": cfg.total_power, "beta": cfg.beta,
            "fading1": asdict(spec1), "fading2": asdict(spec2)}
    return RegionBoundary("outage", pts, meta)


def _q_term(cfg: ChannelConfig, user: int, n: int, log_m: float, g_rate, g_disp):
    """Q((n C(g_rate) - log M) / sqrt(n V(g_disp))) elementwise."""
    g_rate = np.asarray(g_rate, dtype=float)
    g_disp = np.asarray(g_disp, dtype=float)
    if user == 1:
        cap = capacity(g_rate * cfg.power1 / cfg.beta)
        v = dispersion_v1(g_disp * cfg.power1, cfg.beta, cfg.zeta1)
    else:
        cap = capacity(g_rate * cfg.power2 / (g_rate * cfg.power1 + 1.0))
        v = dispersion_v2(g_disp * cfg.power2, g_disp * cfg.power1, 1.0, cfg.zeta2)
    num = n * np.asarray(cap) - log_m
    den = np.sqrt(n * np.asarray(v))
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, -np.inf))
    return np.asarray(qfunc(arg))


def theorem3_bound(cfg: ChannelConfig, spec: FadingSpec, user: int, n: int, log_m: float,
                   samples: int = 200_000, seed: int = 0, method: str = "quadrature",
                   spec_other: FadingSpec | None = None,
                   dispersion_gain: str = "cross") -> tuple[float, float]:
    """Fading-averaged normal approximation E_H[Q((n C(H) - log M) / sqrt(n V(H)))].

    For user 1, ``dispersion_gain="cross"`` evaluates the dispersion at the
    other user's gain; ``dispersion_gain="own"`` uses the strong user's gain.
    ``spec_other`` is that other user's law (defaults to ``spec``).
    Returns (value, std_error); std_error is 0 for quadrature.
    """
    validate_config(cfg)
    _check_spec(spec)
    if n < 1:
        raise ValueError("n must be >= 1")
    if user not in (1, 2):
        raise ValueError("user must be 1 or 2")
    if dispersion_gain not in DISPERSION_GAIN_CHOICES:
        raise ValueError(f"dispersion_gain must be one of {DISPERSION_GAIN_CHOICES}")
    if method not in ("quadrature", "monte_carlo"):
        raise ValueError(f"unknown method {method!r}")
    other = spec if spec_other is None else spec_other
    cross = user == 1 and dispersion_gain == "cross"

    if method == "monte_carlo":
        rng = stream(seed, TAG_FADING, 10 + user)
        g = np.asarray(sample_gain(spec, rng, samples)) ** 2
        gd = np.asarray(sample_gain(other, rng, samples)) ** 2 if cross else g
        vals = _q_term(cfg, user, n, log_m, g, gd)
        return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))

    thr = outage_threshold(cfg, user, log_m / n) if log_m >= 0 else 0.0

    def over_rate_gain(g_disp=None) -> float:
        def f(g):
            return float(_q_term(cfg, user, n, log_m, g, g if g_disp is None else g_disp))
        if spec.family == "deterministic":
            return f(spec.gain**2)
        pieces = [(0.0, thr), (thr, math.inf)] if math.isfinite(thr) and thr > 0 else [(0.0, math.inf)]
        total = 0.0
        for a, b in pieces:
            val, _ = integrate.quad(lambda g: f(g) * gain_sq_pdf(spec, g), a, b,
                                    epsabs=1e-13, epsrel=1e-11, limit=400)
            total += val
        return total

    if not cross:
        return min(max(over_rate_gain(), 0.0), 1.0), 0.0
    if other.family == "deterministic":
        return min(max(over_rate_gain(other.gain**2), 0.0), 1.0), 0.0
    val, _ = integrate.quad(lambda gd: over_rate_gain(gd) * gain_sq_pdf(other, gd), 0.0, math.inf,
                            epsabs=1e-12, epsrel=1e-10, limit=200)
    return min(max(val, 0.0), 1.0), 0.0
