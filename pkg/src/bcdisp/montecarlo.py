"""Ensemble error-probability simulation and numerical RCU bounds.

Two simulation methods are offered. ``direct`` draws codebooks and decodes.
``conditional`` draws only the transmitted codewords and noise, then computes
the exact probability (over the remaining random codewords) that the SIC
decoders err; it has no codebook-size limit.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import betaln

from .analysis import capacity
from .codec import DensityParams, gen_spherical_codebook
from .fading import sample_gain
from .model import ChannelConfig, FadingSpec, sample_noise, validate_config
from .numerics import qfunc_inv, sphere_cap_tail
from .rng import TAG_CODEBOOK, TAG_RCU, TAG_TRIAL, stream

MAX_N = 1024
MAX_JOINT_SIZE = 1 << 20
DECODERS = ("sic", "jnn")
METHODS = ("direct", "conditional")
BOUND_KINDS = ("user2_sep", "user1_sep_sic", "user1_sep_jnn", "jep_sic", "jep_jnn")

# trials per JNN distance tensor slice
_JNN_ELEMS = 1 << 22
# points of the coarse scan that locates the support of the projection integrand
_SCAN = 257
_SUPPORT_RATIO = 1e-30


class SizeLimitError(ValueError):
    """Requested run exceeds the desk-scale guards."""


def fingerprint(payload) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=_jsonable)
    return hashlib.sha256(text.encode()).hexdigest()


def _jsonable(obj):
    if hasattr(obj, "__dataclass_fields__"):
        return asdict(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def codebook_size(log_m: float) -> int:
    if not math.isfinite(log_m) or log_m < 0:
        raise ValueError(f"log M must be finite and >= 0, got {log_m}")
    if log_m > 700:
        raise SizeLimitError(f"log M = {log_m} is too large to materialize")
    return max(1, round(math.exp(log_m)))


def confidence_interval(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    z = qfunc_inv((1.0 - level) / 2.0)
    p = successes / trials
    z2n = z * z / trials
    centre = (p + z2n / 2.0) / (1.0 + z2n)
    half = z * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials)) / (1.0 + z2n)
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


def _mean_interval(mean: float, se: float, level: float = 0.95) -> tuple[float, float]:
    z = qfunc_inv((1.0 - level) / 2.0)
    return max(0.0, mean - z * se), min(1.0, mean + z * se)


@dataclass(frozen=True)
class SimReport:
    trials: int
    err1: float
    err2: float
    errJ: float
    est1: float
    est2: float
    estJ: float
    ci1: tuple[float, float]
    ci2: tuple[float, float]
    ciJ: tuple[float, float]
    se1: float
    se2: float
    seJ: float
    seed: int
    config_fingerprint: str
    decoder: str
    n: int
    log_m1: float
    log_m2: float
    m1: int
    m2: int
    method: str = "direct"
    batch: int = 100

    def to_json(self) -> dict:
        d = asdict(self)
        d["ci1"], d["ci2"], d["ciJ"] = list(self.ci1), list(self.ci2), list(self.ciJ)
        return {"schema": 1, "kind": "sim_report", **d}


@dataclass(frozen=True)
class RcuEstimate:
    value: float
    std_error: float
    samples: int
    bound_kind: str
    seed: int = 0
    n: int = 0
    log_m1: float = 0.0
    log_m2: float = 0.0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"RCU value {self.value} outside [0, 1]")

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "rcu_estimate", **asdict(self)}


# ---------------------------------------------------------------- g-terms

def _cosine(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise cosine; a zero row gives -inf (every competitor ties or wins)."""
    num = np.sum(a * b, axis=-1)
    den = np.linalg.norm(a, axis=-1) * np.linalg.norm(b, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), -np.inf)


def _cap(n: int, c):
    c = np.asarray(c, dtype=float)
    return np.asarray(sphere_cap_tail(n, np.clip(c, -2.0, 2.0)))


def g_cap(t: float, center, params: DensityParams, n: int) -> float:
    """P{mismatched_density(U', center) >= t} for U' uniform on the radius-sqrt(nS) sphere."""
    center = np.asarray(center, dtype=float)
    if center.shape != (n,):
        raise ValueError(f"center must have length {n}")
    if t == -math.inf:
        return 1.0
    if t == math.inf:
        return 0.0
    S, D = params.signal_power, params.effective_noise
    if S == 0:
        raise ValueError("signal power 0 makes the density constant; threshold is not informative")
    c2 = float(center @ center)
    base = n * capacity(S / D)
    if c2 == 0:
        return float(base - n * S / (2.0 * D) >= t)
    theta = D * (t - base) - D * c2 / (2.0 * (S + D)) + (c2 + n * S) / 2.0
    return float(_cap(n, theta / (math.sqrt(c2) * math.sqrt(n * S))))


def _projection_integral(n: int, lo, hi, fn, nodes: int) -> np.ndarray:
    """Row-wise integral of dens_n(rho) fn(rho) over rho = sin(theta), theta in [lo, hi].

    ``fn`` maps an (B, K) array of rho values to probabilities. A coarse scan
    finds where the integrand is non-negligible; Gauss-Legendre then covers
    that sub-interval.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    log_norm = betaln(0.5, 0.5 * (n - 1))

    def weighted(theta):
        cos = np.maximum(np.cos(theta), 0.0)
        with np.errstate(divide="ignore"):
            lw = (n - 2) * np.log(cos) - log_norm if n > 2 else np.zeros_like(cos) - log_norm
        return np.exp(lw) * fn(np.sin(theta))

    s = np.linspace(0.0, 1.0, _SCAN)
    grid = lo[:, None] + (hi - lo)[:, None] * s[None, :]
    vals = weighted(grid)
    peak = vals.max(axis=1)
    mask = vals >= (peak * _SUPPORT_RATIO)[:, None]
    first = np.argmax(mask, axis=1)
    last = _SCAN - 1 - np.argmax(mask[:, ::-1], axis=1)
    rows = np.arange(len(lo))
    a = grid[rows, np.maximum(first - 1, 0)]
    b = grid[rows, np.minimum(last + 1, _SCAN - 1)]
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (b - a)
    theta = 0.5 * (a + b)[:, None] + half[:, None] * x[None, :]
    out = half * (weighted(theta) @ w)
    out = np.where((peak > 0) & (hi > lo), out, 0.0)
    if not np.all(np.isfinite(out)):
        raise ArithmeticError("quadrature produced a non-finite value")
    return np.clip(out, 0.0, 1.0)


def _joint_prob(n: int, y_norm, r2, radius_v: float, radius_u: float, nodes: int) -> np.ndarray:
    """P{||y - U' - V'||^2 <= r2} for independent spherical U', V' (row-wise)."""
    y_norm = np.asarray(y_norm, dtype=float)
    r2 = np.asarray(r2, dtype=float)

    def fn(rho):
        w2 = np.maximum(y_norm[:, None] ** 2 + radius_v**2 - 2.0 * rho * y_norm[:, None] * radius_v, 0.0)
        wn = np.sqrt(w2)
        num = w2 + radius_u**2 - r2[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            c = np.where(wn > 0, num / (2.0 * np.where(wn > 0, wn, 1.0) * radius_u),
                         np.where(num <= 0, -np.inf, np.inf))
        return _cap(n, c)

    half_pi = np.full(len(y_norm), 0.5 * math.pi)
    out = _projection_integral(n, -half_pi, half_pi, fn, nodes)
    return np.where(r2 < 0, 0.0, out)


def g_joint(t: float, y1, cfg: ChannelConfig, n: int, quad_nodes: int = 200) -> float:
    """P{joint mismatched density of (U', V') given y1 >= t} for independent spherical U', V'."""
    y1 = np.asarray(y1, dtype=float)
    if y1.shape != (n,):
        raise ValueError(f"y1 must have length {n}")
    if n < 2:
        raise ValueError("n must be >= 2")
    if t == -math.inf:
        return 1.0
    if t == math.inf:
        return 0.0
    P, beta = cfg.total_power, cfg.beta
    y2 = float(y1 @ y1)
    r2 = 2.0 * beta * (n * capacity(P / beta) + y2 / (2.0 * (P + beta)) - t)
    if r2 < 0:
        return 0.0
    return float(_joint_prob(n, np.array([math.sqrt(y2)]), np.array([r2]),
                             math.sqrt(n * cfg.power1), math.sqrt(n * cfg.power2), quad_nodes)[0])


# ---------------------------------------------------------------- RCU

def _log_count(m: int) -> float:
    return math.log(m - 1) if m > 1 else -math.inf


def _scaled(log_factor: float, g: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        lg = np.log(g)
    return np.where(g > 0, np.exp(np.minimum(log_factor + lg, 50.0)), 0.0)


def _spherical(rng: np.random.Generator, n: int, power: float) -> np.ndarray:
    g = rng.standard_normal(n)
    return g * (math.sqrt(n * power) / np.linalg.norm(g))


def rcu_bound(cfg: ChannelConfig, n: int, log_m1: float, log_m2: float, bound_kind: str,
              samples: int, seed: int, quad_nodes: int = 200) -> RcuEstimate:
    """Monte Carlo average of the RCU expression min{1, sum (M-1) g} over transmitted words and noise.

    Pairwise terms are evaluated at the density of the transmitted word; the
    resulting cap thresholds are formed directly from cosines, which is the
    same quantity as :func:`g_cap` without the cancellation of large terms.
    """
    validate_config(cfg)
    if bound_kind not in BOUND_KINDS:
        raise ValueError(f"bound_kind must be one of {BOUND_KINDS}, got {bound_kind!r}")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    if n < 2:
        raise ValueError("n must be >= 2")
    for lm in (log_m1, log_m2):
        if not math.isfinite(lm) or lm < 0:
            raise ValueError("log M must be finite and >= 0")
    lc1 = _log_count(max(1, round(math.exp(log_m1)))) if log_m1 < 700 else log_m1
    lc2 = _log_count(max(1, round(math.exp(log_m2)))) if log_m2 < 700 else log_m2

    U = np.empty((samples, n))
    V = np.empty((samples, n))
    Z1 = np.empty((samples, n))
    Z2 = np.empty((samples, n))
    for i in range(samples):
        rng = stream(seed, TAG_RCU, i)
        U[i] = _spherical(rng, n, cfg.power2)
        V[i] = _spherical(rng, n, cfg.power1)
        Z1[i] = sample_noise(cfg.noise1, n, rng)
        Z2[i] = sample_noise(cfg.noise2, n, rng)
    y1 = U + V + Z1
    y2 = U + V + Z2

    need = {
        "user2_sep": ("g3",),
        "user1_sep_sic": ("tin", "own"),
        "user1_sep_jnn": ("own", "cross", "joint"),
        "jep_sic": ("own", "tin", "g3"),
        "jep_jnn": ("own", "cross", "joint", "g3"),
    }[bound_kind]
    total = np.zeros(samples)
    if "g3" in need:
        total += _scaled(lc2, _cap(n, _cosine(y2, U)))
    if "tin" in need:
        total += _scaled(lc2, _cap(n, _cosine(y1, U)))
    if "own" in need:
        total += _scaled(lc1, _cap(n, _cosine(y1 - U, V)))
    if "cross" in need:
        total += _scaled(lc2, _cap(n, _cosine(y1 - V, U)))
    if "joint" in need and lc1 > -math.inf and lc2 > -math.inf:
        r2 = np.sum((y1 - U - V) ** 2, axis=1)
        g12 = np.concatenate([
            _joint_prob(n, np.linalg.norm(y1[s:s + 512], axis=1), r2[s:s + 512],
                        math.sqrt(n * cfg.power1), math.sqrt(n * cfg.power2), quad_nodes)
            for s in range(0, samples, 512)
        ])
        total += _scaled(lc1 + lc2, g12)
    vals = np.minimum(total, 1.0)
    value = float(min(max(vals.mean(), 0.0), 1.0))
    return RcuEstimate(value, float(vals.std(ddof=1) / math.sqrt(samples)), samples, bound_kind,
                       seed, n, log_m1, log_m2)


# ---------------------------------------------------------------- simulation

@dataclass(frozen=True)
class _Job:
    cfg: ChannelConfig
    n: int
    m1: int
    m2: int
    decoder: str
    method: str
    trials: int
    batch: int
    seed: int
    fading: tuple[FadingSpec, FadingSpec] | None
    noise_scale: float
    quad_nodes: int


def _trial_draws(job: _Job, lo: int, hi: int, with_words: bool):
    """Per-trial messages (direct) or codewords (conditional), noise and gains."""
    cfg, n = job.cfg, job.n
    k = hi - lo
    Z1, Z2 = np.empty((k, n)), np.empty((k, n))
    h1, h2 = np.ones(k), np.ones(k)
    W1, W2 = np.zeros(k, dtype=np.int64), np.zeros(k, dtype=np.int64)
    U = V = None
    if with_words:
        U, V = np.empty((k, n)), np.empty((k, n))
    for j, t in enumerate(range(lo, hi)):
        rng = stream(job.seed, TAG_TRIAL, t)
        if with_words:
            U[j] = _spherical(rng, n, cfg.power2)
            V[j] = _spherical(rng, n, cfg.power1)
        else:
            W1[j] = rng.integers(job.m1)
            W2[j] = rng.integers(job.m2)
        Z1[j] = sample_noise(cfg.noise1, n, rng)
        Z2[j] = sample_noise(cfg.noise2, n, rng)
        if job.fading is not None:
            h1[j] = sample_gain(job.fading[0], rng)
            h2[j] = sample_gain(job.fading[1], rng)
    return U, V, W1, W2, Z1 * job.noise_scale, Z2 * job.noise_scale, h1, h2


def _nn_rows(Y: np.ndarray, words: np.ndarray, h: np.ndarray) -> np.ndarray:
    # ||y - h w||^2 up to the per-row constant ||y||^2
    d = (h * h)[:, None] * np.sum(words * words, axis=1)[None, :] - 2.0 * h[:, None] * (Y @ words.T)
    return np.argmin(d, axis=1)


def _direct_batch(job: _Job, b: int) -> tuple:
    lo, hi = b * job.batch, min((b + 1) * job.batch, job.trials)
    cfg, n = job.cfg, job.n
    rng = stream(job.seed, TAG_CODEBOOK, b)
    U = gen_spherical_codebook(job.m2, n, cfg.power2, rng).words
    V = gen_spherical_codebook(job.m1, n, cfg.power1, rng).words
    _, _, W1, W2, Z1, Z2, h1, h2 = _trial_draws(job, lo, hi, with_words=False)
    X = U[W2] + V[W1]
    Y1 = h1[:, None] * X + Z1
    Y2 = h2[:, None] * X + Z2
    w2_hat = _nn_rows(Y2, U, h2)
    if job.decoder == "sic":
        w2_bar = _nn_rows(Y1, U, h1)
        w1_hat = _nn_rows(Y1 - h1[:, None] * U[w2_bar], V, h1)
    else:
        w1_hat, w2_bar = _jnn_rows(Y1, U, V, h1)
    e2 = w2_hat != W2
    e1 = (w1_hat != W1) | (w2_bar != W2)
    eJ = e1 | e2
    return (int(e1.sum()), int(e2.sum()), int(eJ.sum()), 0.0, 0.0, 0.0)


def _jnn_rows(Y: np.ndarray, U: np.ndarray, V: np.ndarray, h: np.ndarray):
    m1, m2 = V.shape[0], U.shape[0]
    base = np.sum(V * V, axis=1)[:, None] + np.sum(U * U, axis=1)[None, :] + 2.0 * (V @ U.T)
    a = Y @ U.T
    bv = Y @ V.T
    w1 = np.empty(len(Y), dtype=np.int64)
    w2 = np.empty(len(Y), dtype=np.int64)
    step = max(1, _JNN_ELEMS // (m1 * m2))
    for s in range(0, len(Y), step):
        hs = h[s:s + step]
        d = (hs * hs)[:, None, None] * base[None] - 2.0 * hs[:, None, None] * (
            bv[s:s + step, :, None] + a[s:s + step, None, :])
        k = np.argmin(d.reshape(len(hs), -1), axis=1)
        w1[s:s + step], w2[s:s + step] = k // m2, k % m2
    return w1, w2


def _power_miss(log_count: float, p: np.ndarray) -> np.ndarray:
    """log P{none of the competitors hits} = (M-1) log(1 - p)."""
    if log_count == -math.inf:
        return np.zeros_like(p)
    with np.errstate(divide="ignore"):
        return math.exp(log_count) * np.log1p(-np.minimum(p, 1.0))


def _cap_difference(n: int, c_small, c_big, cos_phi, nodes: int) -> np.ndarray:
    """Measure of {<e_s, W> >= c_small} minus {<e_b, W> >= c_big}, where <e_s, e_b> = cos_phi."""
    c_small = np.asarray(c_small, dtype=float)
    c_big = np.asarray(c_big, dtype=float)
    cos_phi = np.clip(np.asarray(cos_phi, dtype=float), -1.0, 1.0)
    sin_phi = np.sqrt(np.maximum(1.0 - cos_phi * cos_phi, 0.0))

    def fn(rho):
        s = np.sqrt(np.maximum(1.0 - rho * rho, 0.0)) * sin_phi[:, None]
        num = c_big[:, None] - rho * cos_phi[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = np.where(s > 0, num / np.where(s > 0, s, 1.0), np.where(num > 0, np.inf, -np.inf))
        return 1.0 - _cap(n - 1, arg)

    lo = np.arcsin(np.clip(c_small, -1.0, 1.0))
    hi = np.full(len(lo), 0.5 * math.pi)
    out = _projection_integral(n, lo, hi, fn, nodes)
    return np.where(c_small > 1, 0.0, out)


def _conditional_batch(job: _Job, b: int) -> tuple:
    lo, hi = b * job.batch, min((b + 1) * job.batch, job.trials)
    n = job.n
    U, V, _, _, Z1, Z2, h1, h2 = _trial_draws(job, lo, hi, with_words=True)
    X = U + V
    Y1 = h1[:, None] * X + Z1
    Y2 = h2[:, None] * X + Z2
    lc1, lc2 = _log_count(job.m1), _log_count(job.m2)
    c3 = _cosine(Y2, U)
    ca = _cosine(Y1, U)
    cb = _cosine(Y1 - h1[:, None] * U, V)
    p3, pa, pb = _cap(n, c3), _cap(n, ca), _cap(n, cb)
    log_ok1 = _power_miss(lc2, pa) + _power_miss(lc1, pb)
    pe2 = -np.expm1(_power_miss(lc2, p3))
    pe1 = -np.expm1(log_ok1)
    # union of the two caps for competing weak-user codewords
    cos_phi = _cosine(Y1, Y2)
    small_is_a = pa <= p3
    c_small = np.where(small_is_a, ca, c3)
    c_big = np.where(small_is_a, c3, ca)
    extra = _cap_difference(n, c_small, c_big, cos_phi, job.quad_nodes) if lc2 > -math.inf else np.zeros(len(pa))
    p_union = np.minimum(np.maximum(pa, p3) + extra, 1.0)
    peJ = -np.expm1(_power_miss(lc2, p_union) + _power_miss(lc1, pb))
    peJ = np.minimum(np.maximum(peJ, np.maximum(pe1, pe2)), pe1 + pe2)
    return (float(pe1.sum()), float(pe2.sum()), float(peJ.sum()),
            float((pe1 * pe1).sum()), float((pe2 * pe2).sum()), float((peJ * peJ).sum()))


def _run_batch(args):
    job, b = args
    return _conditional_batch(job, b) if job.method == "conditional" else _direct_batch(job, b)


def run_simulation(cfg: ChannelConfig, n: int, log_m1: float, log_m2: float, decoder: str,
                   trials: int, seed: int, batch: int = 100, workers: int = 1,
                   method: str = "direct", fading: tuple[FadingSpec, FadingSpec] | None = None,
                   noise_scale: float = 1.0, quad_nodes: int = 200) -> SimReport:
    """Estimate the ensemble error probabilities of both users.

    In ``direct`` mode each block of ``batch`` trials shares freshly drawn
    codebooks and every trial draws its own uniform message pair. ``conditional``
    mode (SIC only) averages the exact error probability given the
    transmitted codewords and noise; its counts are expected counts.
    ``noise_scale`` multiplies both noise draws.
    """
    validate_config(cfg)
    if decoder not in DECODERS:
        raise ValueError(f"decoder must be one of {DECODERS}, got {decoder!r}")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if trials < 1 or batch < 1 or workers < 1:
        raise ValueError("trials, batch and workers must be >= 1")
    if not 2 <= n <= MAX_N:
        raise SizeLimitError(f"n must lie in [2, {MAX_N}], got {n}")
    if noise_scale < 0:
        raise ValueError("noise_scale must be nonnegative")
    if fading is not None:
        for spec in fading:
            if spec.problems():
                raise ValueError("; ".join(spec.problems()))
    if method == "conditional":
        if decoder != "sic":
            raise ValueError("conditional method supports the sic decoder only")
        if n < 3:
            raise ValueError("conditional method needs n >= 3")
        m1 = max(1, round(math.exp(log_m1))) if 0 <= log_m1 <= 700 else codebook_size(log_m1)
        m2 = max(1, round(math.exp(log_m2))) if 0 <= log_m2 <= 700 else codebook_size(log_m2)
    else:
        m1, m2 = codebook_size(log_m1), codebook_size(log_m2)
        if m1 * m2 > MAX_JOINT_SIZE:
            raise SizeLimitError(
                f"M1*M2 = {m1 * m2} exceeds {MAX_JOINT_SIZE}; use the rcu command or the conditional method")

    job = _Job(cfg, n, m1, m2, decoder, method, trials, batch, seed, fading, noise_scale, quad_nodes)
    n_batches = -(-trials // batch)
    tasks = [(job, b) for b in range(n_batches)]
    if workers == 1 or n_batches == 1:
        parts = [_run_batch(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_batch, tasks))

    sums = [0.0] * 6
    for part in parts:  # merge in batch order
        for k in range(6):
            sums[k] += part[k]
    fp = fingerprint({"cfg": cfg, "n": n, "log_m1": log_m1, "log_m2": log_m2, "decoder": decoder,
                      "trials": trials, "seed": seed, "batch": batch, "method": method,
                      "fading": fading, "noise_scale": noise_scale})
    if method == "direct":
        counts = [int(s) for s in sums[:3]]
        ests = [c / trials for c in counts]
        cis = [confidence_interval(c, trials) for c in counts]
        ses = [math.sqrt(p * (1 - p) / trials) for p in ests]
    else:
        counts = sums[:3]
        ests = [c / trials for c in counts]
        ses = []
        for s, sq in zip(sums[:3], sums[3:]):
            mean = s / trials
            var = max(sq / trials - mean * mean, 0.0) * trials / max(trials - 1, 1)
            ses.append(math.sqrt(var / trials))
        cis = [_mean_interval(m, se) for m, se in zip(ests, ses)]
    return SimReport(trials, counts[0], counts[1], counts[2], ests[0], ests[1], ests[2],
                     cis[0], cis[1], cis[2], ses[0], ses[1], ses[2], seed, fp, decoder, n,
                     log_m1, log_m2, m1, m2, method, batch)
