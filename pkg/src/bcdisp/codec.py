"""Spherical codebooks, superposition encoding, mismatched densities and NN decoders.

Message indices are 0-based. Decoders break (measure-zero) ties toward the
lowest index, and the JNN decoder toward the lexicographically smallest
(w1, w2) pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import capacity
from .model import ChannelConfig

# JNN literal scan processes this many (w1, w2, symbol) entries at a time
_JNN_CHUNK_ELEMS = 1 << 22


@dataclass(frozen=True)
class Codebook:
    words: np.ndarray
    per_word_power: float

    def __post_init__(self):
        self.words.setflags(write=False)

    @property
    def size(self) -> int:
        return self.words.shape[0]

    @property
    def n(self) -> int:
        return self.words.shape[1]


@dataclass(frozen=True)
class DensityParams:
    """Signal power S and interference-plus-noise power D of a mismatched density."""

    signal_power: float
    effective_noise: float

    def __post_init__(self):
        if not self.effective_noise > 0:
            raise ValueError("effective noise power must be positive")
        if not self.signal_power >= 0:
            raise ValueError("signal power must be nonnegative")


def user2_params(cfg: ChannelConfig, gain: float = 1.0) -> DensityParams:
    """Weak user treating the strong user's signal as noise."""
    g2 = gain * gain
    return DensityParams(cfg.power2 * g2, cfg.power1 * g2 + 1.0)


def user1_tin_params(cfg: ChannelConfig, gain: float = 1.0) -> DensityParams:
    """Strong user decoding the weak user's codeword, first SIC stage."""
    g2 = gain * gain
    return DensityParams(cfg.power2 * g2, cfg.power1 * g2 + cfg.beta)


def user1_own_params(cfg: ChannelConfig, gain: float = 1.0) -> DensityParams:
    """Strong user's own codeword after cancellation."""
    return DensityParams(cfg.power1 * gain * gain, cfg.beta)


def user1_cross_params(cfg: ChannelConfig, gain: float = 1.0) -> DensityParams:
    """Weak user's codeword with the strong user's codeword known."""
    return DensityParams(cfg.power2 * gain * gain, cfg.beta)


def user1_joint_params(cfg: ChannelConfig, gain: float = 1.0) -> DensityParams:
    return DensityParams(cfg.total_power * gain * gain, cfg.beta)


def gen_spherical_codebook(m: int, n: int, power: float, rng: np.random.Generator) -> Codebook:
    """``m`` i.i.d. codewords uniform on the sphere of radius sqrt(n * power)."""
    if m < 1:
        raise ValueError("codebook needs m >= 1")
    if n < 2:
        raise ValueError("spherical codebook needs n >= 2")
    if not power > 0:
        raise ValueError("codeword power must be positive")
    g = rng.standard_normal((m, n))
    g *= (math.sqrt(n * power) / np.linalg.norm(g, axis=1))[:, None]
    return Codebook(g, float(power))


def encode(w1: int, w2: int, cb_v: Codebook, cb_u: Codebook) -> np.ndarray:
    if not 0 <= w1 < cb_v.size:
        raise IndexError(f"w1={w1} outside [0, {cb_v.size})")
    if not 0 <= w2 < cb_u.size:
        raise IndexError(f"w2={w2} outside [0, {cb_u.size})")
    return cb_v.words[w1] + cb_u.words[w2]


def mismatched_density(u, y, params: DensityParams):
    """n-letter mismatched information density of input ``u`` given output ``y``.

    ``u`` may be a single length-n vector or an ``(m, n)`` stack of candidates.
    """
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    if u.shape[-1] != y.shape[-1]:
        raise ValueError(f"length mismatch: {u.shape[-1]} vs {y.shape[-1]}")
    n = y.shape[-1]
    S, D = params.signal_power, params.effective_noise
    dist = np.sum((y - u) ** 2, axis=-1)
    out = n * capacity(S / D) + np.sum(y * y, axis=-1) / (2.0 * (S + D)) - dist / (2.0 * D)
    return float(out) if np.ndim(out) == 0 else out


def _nn(y: np.ndarray, words: np.ndarray) -> int:
    if words.shape[0] == 0:
        raise ValueError("empty codebook")
    return int(np.argmin(np.sum((y - words) ** 2, axis=1)))


def nn_decode_user2(y2, cb_u: Codebook, gain: float = 1.0) -> int:
    """argmin_w ||y2 - gain * U(w)||^2."""
    return _nn(np.asarray(y2, dtype=float), gain * cb_u.words)


def sic_decode_user1(y1, cb_u: Codebook, cb_v: Codebook, gain: float = 1.0) -> tuple[int, int]:
    """Decode the weak user's codeword, cancel it, then decode the own codeword."""
    y1 = np.asarray(y1, dtype=float)
    w2 = _nn(y1, gain * cb_u.words)
    w1 = _nn(y1 - gain * cb_u.words[w2], gain * cb_v.words)
    return w1, w2


def jnn_decode_user1(y1, cb_u: Codebook, cb_v: Codebook, gain: float = 1.0) -> tuple[int, int]:
    """Exhaustive joint minimum-distance search over all (w1, w2)."""
    y1 = np.asarray(y1, dtype=float)
    m1, m2, n = cb_v.size, cb_u.size, y1.shape[0]
    if m1 == 0 or m2 == 0:
        raise ValueError("empty codebook")
    resid = y1 - gain * cb_u.words  # (m2, n)
    gv = gain * cb_v.words
    chunk = max(1, _JNN_CHUNK_ELEMS // (m2 * n))
    best, best_pair = np.inf, (0, 0)
    for start in range(0, m1, chunk):
        block = gv[start:start + chunk]
        d = np.sum((resid[None, :, :] - block[:, None, :]) ** 2, axis=2)  # (c, m2)
        k = int(np.argmin(d))
        if d.flat[k] < best:
            best = d.flat[k]
            best_pair = (start + k // m2, k % m2)
    return best_pair
