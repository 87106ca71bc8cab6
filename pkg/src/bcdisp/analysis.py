"""Capacities, dispersions and the first/second-order rate regions."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .model import ChannelConfig, validate_config
from .numerics import qfunc, qfunc_inv

CRITERIA = ("first_order", "sep", "jep", "outage")
DEFAULT_GRID_POINTS = 201
# split grid reaches within this relative distance of both asymptotes
_ASYMPTOTE_REACH = 1e-10


class RatePair(NamedTuple):
    r1: float
    r2: float


class SecondOrderPair(NamedTuple):
    l1: float
    l2: float


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x)) if not math.isfinite(x) else format(float(x), ".17g")


@dataclass
class RegionBoundary:
    """Ordered boundary points of a region plus the parameters that produced it.

    ``point_eps`` optionally carries a per-point (eps1, eps2) label, used by
    the SEP trade-off curve where the error split varies along the curve.
    """

    criterion: str
    points: list
    metadata: dict = field(default_factory=dict)
    point_eps: list | None = None

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")

    def xs(self) -> np.ndarray:
        return np.array([p[0] for p in self.points], dtype=float)

    def ys(self) -> np.ndarray:
        return np.array([p[1] for p in self.points], dtype=float)

    def csv_rows(self) -> list[list[str]]:
        rows = []
        for i, (x, y) in enumerate(self.points):
            if self.point_eps is not None:
                e1, e2 = self.point_eps[i]
            else:
                e1 = self.metadata.get("eps1", self.metadata.get("eps"))
                e2 = self.metadata.get("eps2", self.metadata.get("eps"))
            rows.append([self.criterion, _fmt(e1), _fmt(e2), _fmt(x), _fmt(y)])
        return rows

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "points": [[float(x), float(y)] for x, y in self.points],
            "point_eps": None if self.point_eps is None else [list(map(float, e)) for e in self.point_eps],
            "metadata": self.metadata,
        }


CSV_HEADER = ["criterion", "eps1", "eps2", "x", "y"]


def boundaries_to_csv(boundaries: Sequence[RegionBoundary], comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for b in boundaries:
        writer.writerows(b.csv_rows())
    return buf.getvalue()


def read_region_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        rows.append({
            "criterion": rec["criterion"],
            "eps1": float(rec["eps1"]) if rec["eps1"] else None,
            "eps2": float(rec["eps2"]) if rec["eps2"] else None,
            "x": float(rec["x"]),
            "y": float(rec["y"]),
        })
    return rows


def capacity(snr):
    """Gaussian capacity 0.5*ln(1 + snr) in nats."""
    snr = np.asarray(snr, dtype=float)
    if np.any(snr < 0):
        raise ValueError("capacity requires snr >= 0")
    out = 0.5 * np.log1p(snr)
    return float(out) if out.ndim == 0 else out


def dispersion_v1(p, beta, zeta):
    """Dispersion of the strong user's own-message decoding."""
    p, beta, zeta = (np.asarray(v, dtype=float) for v in (p, beta, zeta))
    if np.any(p < 0) or np.any(beta <= 0) or np.any(zeta < beta**2 * (1 - 1e-12)):
        raise ValueError("dispersion_v1 requires p >= 0, beta > 0, zeta >= beta^2")
    num = p**2 * (zeta - beta**2) + 4.0 * p * beta**3
    out = num / (4.0 * beta**2 * (p + beta) ** 2)
    return float(out) if out.ndim == 0 else out


def dispersion_v2(p, p_bar, beta, zeta):
    """Dispersion of decoding the weak user's message with interference power ``p_bar``."""
    p, p_bar, beta, zeta = (np.asarray(v, dtype=float) for v in (p, p_bar, beta, zeta))
    if np.any(p < 0) or np.any(p_bar < 0) or np.any(beta <= 0) or np.any(zeta < beta**2 * (1 - 1e-12)):
        raise ValueError("dispersion_v2 requires p, p_bar >= 0, beta > 0, zeta >= beta^2")
    num = p**2 * (zeta - beta**2 + 4.0 * p_bar) + 4.0 * p * (p_bar + beta) ** 3
    out = num / (4.0 * (p_bar + beta) ** 2 * (p + p_bar + beta) ** 2)
    return float(out) if out.ndim == 0 else out


def capacities(cfg: ChannelConfig) -> RatePair:
    """(C(alpha P / beta), C(alpha_bar P / (alpha P + 1))) for the configured split."""
    return RatePair(
        capacity(cfg.power1 / cfg.beta),
        capacity(cfg.power2 / (cfg.power1 + 1.0)),
    )


def dispersions(cfg: ChannelConfig) -> tuple[float, float]:
    """Diagonal of the dispersion matrix, (V1(alpha P), V2(alpha_bar P, alpha P))."""
    return (
        dispersion_v1(cfg.power1, cfg.beta, cfg.zeta1),
        dispersion_v2(cfg.power2, cfg.power1, 1.0, cfg.zeta2),
    )


def first_order_corner(total_power: float, alpha: float, beta: float) -> RatePair:
    return RatePair(
        capacity(alpha * total_power / beta),
        capacity((1.0 - alpha) * total_power / (alpha * total_power + 1.0)),
    )


def default_alpha_grid(points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    return np.linspace(0.0, 1.0, points + 2)[1:-1]


def first_order_region(cfg: ChannelConfig, alpha_grid=None) -> RegionBoundary:
    """Upper-right frontier of the union over alpha of the rate rectangles.

    The limiting corners (0, C(P)) and (C(P/beta), 0) close the curve.
    """
    validate_config(cfg)
    grid = default_alpha_grid() if alpha_grid is None else np.asarray(alpha_grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0) or np.any((grid <= 0) | (grid >= 1)):
        raise ValueError("alpha grid must be nonempty, strictly increasing, inside (0, 1)")
    P, beta = cfg.total_power, cfg.beta
    pts = [RatePair(0.0, capacity(P))]
    pts += [first_order_corner(P, a, beta) for a in grid]
    pts.append(RatePair(capacity(P / beta), 0.0))
    # corners move right and down as alpha grows, so all of them are on the frontier
    return RegionBoundary("first_order", pts, {"P": P, "beta": beta, "alpha_points": int(grid.size)})


def sep_second_order_point(cfg: ChannelConfig, eps1: float, eps2: float) -> SecondOrderPair:
    """Corner of the second-order SEP region (same for SIC and JNN)."""
    validate_config(cfg)
    v1, v2 = dispersions(cfg)
    return SecondOrderPair(math.sqrt(v1) * qfunc_inv(eps1), math.sqrt(v2) * qfunc_inv(eps2))


def _split_fractions(points: int) -> np.ndarray:
    # logistic grid: log-spaced toward both 0 and 1
    reach = math.log(1.0 / _ASYMPTOTE_REACH)
    u = np.linspace(-reach, reach, points)
    return 1.0 / (1.0 + np.exp(-u))


def jep_l2_given_l1(v1: float, v2: float, eps: float, l1):
    """Smallest l2 with (1 - Q(l1/sqrt v1)) (1 - Q(l2/sqrt v2)) = 1 - eps."""
    q1 = np.asarray(qfunc(np.asarray(l1, dtype=float) / math.sqrt(v1)))
    with np.errstate(divide="ignore"):
        q2 = 1.0 - (1.0 - eps) / (1.0 - q1)
    out = np.full(q1.shape, np.inf)
    ok = q2 > 0
    out[ok] = math.sqrt(v2) * np.asarray(qfunc_inv(q2[ok]))
    return float(out) if out.ndim == 0 else out


def default_jep_l1_grid(cfg: ChannelConfig, eps: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """l1 values whose user-1 failure probability sweeps (0, eps), dense near both ends."""
    v1, _ = dispersions(cfg)
    q1 = eps * _split_fractions(points)[::-1]
    return math.sqrt(v1) * np.asarray(qfunc_inv(q1))


def jep_second_order_boundary(cfg: ChannelConfig, eps: float, l1_grid=None) -> RegionBoundary:
    """Boundary of the second-order JEP region.

    The dispersion matrix is diagonal, so the joint Gaussian cdf factorises
    into the product of the two marginal cdfs.
    """
    validate_config(cfg)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    v1, v2 = dispersions(cfg)
    a1 = math.sqrt(v1) * qfunc_inv(eps)
    grid = default_jep_l1_grid(cfg, eps) if l1_grid is None else np.asarray(l1_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("l1 grid must be nonempty")
    bad = grid[grid < a1]
    if bad.size:
        raise ValueError(f"l1 = {bad[0]!r} lies below the asymptote {a1!r}: no l2 is feasible")
    grid = np.sort(grid)
    l2 = np.atleast_1d(jep_l2_given_l1(v1, v2, eps, grid))
    pts = [SecondOrderPair(float(x), float(y)) for x, y in zip(grid, l2)]
    meta = {"eps": eps, "alpha": cfg.alpha, "P": cfg.total_power, "beta": cfg.beta,
            "zeta1": cfg.zeta1, "zeta2": cfg.zeta2, "V1": v1, "V2": v2,
            "asymptote_l1": a1, "asymptote_l2": math.sqrt(v2) * qfunc_inv(eps)}
    return RegionBoundary("jep", pts, meta)


def sep_tradeoff_boundary(cfg: ChannelConfig, eps: float, points: int = DEFAULT_GRID_POINTS) -> RegionBoundary:
    """SEP corners over all splits eps1 + eps2 = eps, sorted by l1."""
    validate_config(cfg)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    s = _split_fractions(points)
    eps1 = eps * s
    eps2 = eps - eps1
    v1, v2 = dispersions(cfg)
    l1 = math.sqrt(v1) * np.asarray(qfunc_inv(eps1))
    l2 = math.sqrt(v2) * np.asarray(qfunc_inv(eps2))
    order = np.argsort(l1)
    pts = [SecondOrderPair(float(l1[i]), float(l2[i])) for i in order]
    labels = [(float(eps1[i]), float(eps2[i])) for i in order]
    meta = {"eps": eps, "alpha": cfg.alpha, "P": cfg.total_power, "beta": cfg.beta, "V1": v1, "V2": v2}
    return RegionBoundary("sep", pts, meta, point_eps=labels)


def jep_product(cfg: ChannelConfig, l1: float, l2: float) -> float:
    """Probability that the limiting Gaussian pair stays below (l1, l2)."""
    v1, v2 = dispersions(cfg)
    return (1.0 - qfunc(l1 / math.sqrt(v1))) * (1.0 - qfunc(l2 / math.sqrt(v2)))


def normal_approx_log_m(cfg: ChannelConfig, n: int, eps1: float, eps2: float,
                        criterion: str = "sep") -> tuple[float, float]:
    """Codebook sizes log M_i = n C_i - sqrt(n) L_i, dropping O(log n) terms.

    ``sep`` uses the SEP corner for (eps1, eps2). ``jep-corner`` keeps the
    SEP value of l1 and takes l2 from the JEP boundary with joint target
    eps1 + eps2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    l1, l2 = sep_second_order_point(cfg, eps1, eps2)
    if criterion == "jep-corner":
        if not eps1 + eps2 < 1:
            raise ValueError("jep-corner needs eps1 + eps2 < 1")
        v1, v2 = dispersions(cfg)
        l2 = jep_l2_given_l1(v1, v2, eps1 + eps2, l1)
    elif criterion != "sep":
        raise ValueError(f"unknown criterion {criterion!r}")
    c1, c2 = capacities(cfg)
    rn = math.sqrt(n)
    log_m1 = n * c1 - rn * l1
    log_m2 = n * c2 - rn * l2
    if log_m1 < 0 or log_m2 < 0:
        raise ValueError(
            f"blocklength n={n} too small for the targets: log M = ({log_m1:.4g}, {log_m2:.4g})"
        )
    return log_m1, log_m2


def region_json(boundaries: Sequence[RegionBoundary]) -> str:
    return json.dumps({"schema": 1, "boundaries": [b.to_json() for b in boundaries]}, indent=2)
