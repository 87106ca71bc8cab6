"""Second-order rate regions and finite-blocklength simulation for the two-user broadcast channel."""

from .analysis import (
    RatePair,
    RegionBoundary,
    SecondOrderPair,
    capacities,
    capacity,
    dispersion_v1,
    dispersion_v2,
    dispersions,
    first_order_region,
    jep_second_order_boundary,
    normal_approx_log_m,
    sep_second_order_point,
    sep_tradeoff_boundary,
)
from .model import ChannelConfig, ConfigError, FadingSpec, NoiseSpec, validate_config

__version__ = "0.1.0"

__all__ = [
    "ChannelConfig", "ConfigError", "FadingSpec", "NoiseSpec", "RatePair", "RegionBoundary",
    "SecondOrderPair", "capacities", "capacity", "dispersion_v1", "dispersion_v2", "dispersions",
    "first_order_region", "jep_second_order_boundary", "normal_approx_log_m",
    "sep_second_order_point", "sep_tradeoff_boundary", "validate_config",
]
