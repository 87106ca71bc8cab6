"""Problem instance: powers, power split, noise laws and fading laws."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NOISE_FAMILIES = ("gaussian", "laplace", "uniform", "scaled_rademacher_mixture")
FADING_FAMILIES = ("rayleigh", "rice", "deterministic")

# kurtosis reachable by the mixture with atoms and uniform on a common support
_UNIFORM_KURTOSIS = 1.8


class ConfigError(ValueError):
    """Raised with every violated constraint, one message per entry."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def _mixture_params(variance: float, moment4: float) -> tuple[float, float, float]:
    """Closed-form (w, c, a) for ``w*Rademacher(+-c) + (1-w)*Uniform[-a, a]``.

    Kurtosis up to 1.8 puts the atoms on the edge of the uniform support
    (a = c); above 1.8 the atoms and the uniform part carry half the
    variance each and the atoms move outward.
    """
    kappa = moment4 / variance**2
    if kappa < 1.0 - 1e-12:
        raise ConfigError(f"moment4 {moment4} below variance^2 {variance**2}")
    kappa = max(kappa, 1.0)
    if kappa <= _UNIFORM_KURTOSIS:
        w = (36.0 - 20.0 * kappa + math.sqrt(max(1296.0 - 720.0 * kappa, 0.0))) / (40.0 * kappa)
        w = min(max(w, 0.0), 1.0)
        c = math.sqrt(3.0 * variance / (1.0 + 2.0 * w))
        return w, c, c
    disc = (20.0 * kappa - 4.0) ** 2 - 400.0 * kappa
    w = ((20.0 * kappa - 4.0) - math.sqrt(disc)) / (40.0 * kappa)
    c = math.sqrt(variance / (2.0 * w))
    a = math.sqrt(1.5 * variance / (1.0 - w))
    return w, c, a


def _analytic_moments(family: str, variance: float, moment4: float | None) -> tuple[float, float, float]:
    s2 = variance
    if family == "gaussian":
        return s2, 3.0 * s2**2, 15.0 * s2**3
    if family == "laplace":
        return s2, 6.0 * s2**2, 90.0 * s2**3
    if family == "uniform":
        return s2, 9.0 * s2**2 / 5.0, 27.0 * s2**3 / 7.0
    if family == "scaled_rademacher_mixture":
        if moment4 is None:
            raise ConfigError("scaled_rademacher_mixture needs moment4")
        w, c, a = _mixture_params(s2, moment4)
        m4 = w * c**4 + (1.0 - w) * a**4 / 5.0
        m6 = w * c**6 + (1.0 - w) * a**6 / 7.0
        return s2, m4, m6
    raise ConfigError(f"unsupported noise family {family!r}")


@dataclass(frozen=True)
class NoiseSpec:
    family: str
    variance: float
    moment4: float
    moment6: float

    @classmethod
    def make(cls, family: str, variance: float, moment4: float | None = None) -> "NoiseSpec":
        """Build a spec whose moments are the family's analytic values.

        ``moment4`` is only free for ``scaled_rademacher_mixture``; for the
        other families it is derived from the variance.
        """
        if family not in NOISE_FAMILIES:
            raise ConfigError(f"unsupported noise family {family!r}")
        if not variance > 0:
            raise ConfigError(f"noise variance must be positive, got {variance}")
        _, m4, m6 = _analytic_moments(family, variance, moment4)
        if moment4 is not None and abs(m4 - moment4) > 1e-9 * max(1.0, abs(m4)):
            raise ConfigError(f"{family} noise with variance {variance} has moment4 {m4}, not {moment4}")
        return cls(family, float(variance), float(m4), float(m6))

    @classmethod
    def gaussian(cls, variance: float) -> "NoiseSpec":
        return cls.make("gaussian", variance)

    def problems(self) -> list[str]:
        out = []
        if self.family not in NOISE_FAMILIES:
            return [f"unsupported noise family {self.family!r}"]
        if not self.variance > 0:
            return [f"noise variance must be positive, got {self.variance}"]
        if not (math.isfinite(self.moment4) and math.isfinite(self.moment6)):
            out.append("noise moments must be finite")
        if self.moment4 < self.variance**2 * (1 - 1e-12):
            out.append(f"moment4 {self.moment4} < variance^2 {self.variance**2}")
        try:
            _, m4, m6 = _analytic_moments(self.family, self.variance, self.moment4)
        except ConfigError as exc:
            return out + exc.problems
        if abs(m4 - self.moment4) > 1e-9 * max(1.0, m4) or abs(m6 - self.moment6) > 1e-9 * max(1.0, m6):
            out.append(f"moments of {self.family} noise do not match its analytic values")
        return out


def noise_moments(spec: NoiseSpec) -> tuple[float, float, float]:
    """Exact (E Z^2, E Z^4, E Z^6) for the spec's family and variance."""
    return _analytic_moments(spec.family, spec.variance, spec.moment4)


def sample_noise(spec: NoiseSpec, n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Draw ``n`` i.i.d. noise samples (or a ``size x n`` array)."""
    if n < 1:
        raise ValueError("sample_noise requires n >= 1")
    shape = (n,) if size is None else (size, n)
    s2 = spec.variance
    if spec.family == "gaussian":
        return rng.normal(0.0, math.sqrt(s2), shape)
    if spec.family == "laplace":
        return rng.laplace(0.0, math.sqrt(s2 / 2.0), shape)
    if spec.family == "uniform":
        a = math.sqrt(3.0 * s2)
        return rng.uniform(-a, a, shape)
    if spec.family == "scaled_rademacher_mixture":
        w, c, a = _mixture_params(s2, spec.moment4)
        atom = rng.random(shape) < w
        signs = np.where(rng.random(shape) < 0.5, -c, c)
        return np.where(atom, signs, rng.uniform(-a, a, shape))
    raise ConfigError(f"unsupported noise family {spec.family!r}")


@dataclass(frozen=True)
class FadingSpec:
    """Fading law of the amplitude gain H.

    ``scale`` is E[H^2] for rayleigh and rice; ``k_factor`` is the Rice
    K-factor; ``gain`` is the fixed amplitude for deterministic.
    """

    family: str
    scale: float = 1.0
    k_factor: float = 0.0
    gain: float = 1.0

    def problems(self) -> list[str]:
        if self.family not in FADING_FAMILIES:
            return [f"unsupported fading family {self.family!r}"]
        out = []
        if self.family in ("rayleigh", "rice") and not self.scale > 0:
            out.append(f"fading scale must be positive, got {self.scale}")
        if self.family == "rice" and not self.k_factor >= 0:
            out.append(f"rice K-factor must be nonnegative, got {self.k_factor}")
        if self.family == "deterministic" and not self.gain > 0:
            out.append(f"deterministic gain must be positive, got {self.gain}")
        return out


@dataclass(frozen=True)
class ChannelConfig:
    total_power: float
    alpha: float
    beta: float
    noise1: NoiseSpec = field(default=None)  # type: ignore[assignment]
    noise2: NoiseSpec = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        # Gaussian noise by default, matching the variances the model requires
        if self.noise1 is None and self.beta > 0:
            object.__setattr__(self, "noise1", NoiseSpec.gaussian(self.beta))
        if self.noise2 is None:
            object.__setattr__(self, "noise2", NoiseSpec.gaussian(1.0))

    @property
    def alpha_bar(self) -> float:
        return 1.0 - self.alpha

    @property
    def power1(self) -> float:
        """Per-symbol power of the strong user's codewords (alpha * P)."""
        return self.alpha * self.total_power

    @property
    def power2(self) -> float:
        """Per-symbol power of the weak user's codewords ((1 - alpha) * P)."""
        return self.alpha_bar * self.total_power

    @property
    def zeta1(self) -> float:
        return self.noise1.moment4

    @property
    def zeta2(self) -> float:
        return self.noise2.moment4


def config_problems(cfg: ChannelConfig) -> list[str]:
    out = []
    if not (math.isfinite(cfg.total_power) and cfg.total_power > 0):
        out.append(f"total_power must be > 0, got {cfg.total_power}")
    if not 0 < cfg.alpha < 1:
        out.append(f"alpha must lie in (0, 1), got {cfg.alpha}")
    if not 0 < cfg.beta < 1:
        out.append(f"beta must lie in (0, 1), got {cfg.beta}")
    if cfg.noise1 is None:
        out.append("noise1 missing")
    else:
        out += [f"noise1: {p}" for p in cfg.noise1.problems()]
        if abs(cfg.noise1.variance - cfg.beta) > 1e-12:
            out.append(f"noise1 variance {cfg.noise1.variance} must equal beta {cfg.beta}")
    out += [f"noise2: {p}" for p in cfg.noise2.problems()]
    if abs(cfg.noise2.variance - 1.0) > 1e-12:
        out.append(f"noise2 variance {cfg.noise2.variance} must equal 1")
    return out


def validate_config(cfg: ChannelConfig) -> ChannelConfig:
    """Return ``cfg`` unchanged if every constraint holds, else raise ConfigError."""
    problems = config_problems(cfg)
    if problems:
        raise ConfigError(problems)
    return cfg


def example_config() -> ChannelConfig:
    """P=5, alpha=0.3, beta=0.6 with zeta1=0.3888 and Gaussian weak-user noise."""
    return ChannelConfig(
        total_power=5.0,
        alpha=0.3,
        beta=0.6,
        noise1=NoiseSpec.make("scaled_rademacher_mixture", 0.6, 0.3888),
        noise2=NoiseSpec.gaussian(1.0),
    )
