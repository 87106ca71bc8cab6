import math

import numpy as np
import pytest
from scipy import stats

from bcdisp.analysis import capacities, dispersions, first_order_corner
from bcdisp.fading import (
    gain_sq_cdf,
    gain_sq_quantile,
    outage_prob,
    outage_region,
    outage_threshold,
    sample_gain,
    theorem3_bound,
)
from bcdisp.model import ChannelConfig, FadingSpec
from bcdisp.numerics import qfunc
from oracles import bisect_outage_rate

RAY = FadingSpec("rayleigh", scale=1.0)
# mpmath, 40 digits
Q_01 = 0.10536051565782630123
R1_STAR = 0.11690375992957565053
R2_STAR = 0.13822307088993991131
OUT_R1_011687 = 0.099969290829072851303


def test_sample_gain_deterministic():
    spec = FadingSpec("deterministic", gain=1.0)
    assert sample_gain(spec, np.random.default_rng(0)) == 1.0
    assert np.all(sample_gain(spec, np.random.default_rng(0), 10) == 1.0)


def test_rayleigh_mean_square():
    h = sample_gain(RAY, np.random.default_rng(1), 10**6)
    assert np.mean(h**2) == pytest.approx(1.0, abs=0.01)
    assert np.all(h >= 0)


def test_rice_k0_is_rayleigh():
    a = sample_gain(FadingSpec("rice", 1.0, 0.0), np.random.default_rng(2), 10**5)
    b = sample_gain(RAY, np.random.default_rng(3), 10**5)
    d = stats.ks_2samp(a, b).statistic
    crit = 1.628 * math.sqrt(2 / 10**5)  # 1% two-sample critical value
    assert d < crit


def test_rice_mean_square_and_cdf():
    spec = FadingSpec("rice", 2.0, 4.0)
    h2 = sample_gain(spec, np.random.default_rng(4), 10**6) ** 2
    assert h2.mean() == pytest.approx(2.0, abs=0.01)
    for q in (0.5, 1.5, 3.0):
        emp = np.mean(h2 <= q)
        assert abs(gain_sq_cdf(spec, q) - emp) < 4 * math.sqrt(emp * (1 - emp) / h2.size)


def test_quantiles():
    assert gain_sq_quantile(RAY, 0.1) == pytest.approx(Q_01, rel=1e-14)
    assert gain_sq_quantile(RAY, 0.5) == pytest.approx(math.log(2), rel=1e-14)
    assert gain_sq_quantile(FadingSpec("rayleigh", 2.0), 0.5) == pytest.approx(2 * math.log(2), rel=1e-14)
    det = FadingSpec("deterministic", gain=0.7)
    for p in (0.01, 0.5, 0.99):
        assert gain_sq_quantile(det, p) == pytest.approx(0.49)
    # rice uses bisection on the cdf; K=0 reduces to the exponential law
    assert gain_sq_quantile(FadingSpec("rice", 1.0, 0.0), 0.1) == pytest.approx(Q_01, rel=1e-9)
    spec = FadingSpec("rice", 1.0, 5.0)
    for p in (0.05, 0.3, 0.9):
        assert gain_sq_cdf(spec, gain_sq_quantile(spec, p)) == pytest.approx(p, abs=1e-12)
    with pytest.raises(ValueError):
        gain_sq_quantile(RAY, 0.0)
    with pytest.raises(ValueError):
        gain_sq_quantile(RAY, 1.0)


def test_outage_examples(gauss_cfg):
    for spec in (RAY, FadingSpec("rice", 1.0, 2.0)):
        for user in (1, 2):
            assert outage_prob(gauss_cfg, spec, user, 0.0).outage_prob == 0.0
    rep = outage_prob(gauss_cfg, RAY, 1, 0.11687)
    assert rep.outage_prob == pytest.approx(OUT_R1_011687, rel=1e-12)
    assert outage_prob(gauss_cfg, RAY, 1, R1_STAR).outage_prob == pytest.approx(0.1, rel=1e-12)
    assert rep.method == "closed_form" and rep.std_error == 0.0
    ceiling = 0.5 * math.log1p(3.5 / 1.5)
    assert outage_prob(gauss_cfg, RAY, 2, ceiling + 1e-3).outage_prob == 1.0
    with pytest.raises(ValueError):
        outage_prob(gauss_cfg, RAY, 1, -0.1)
    with pytest.raises(ValueError):
        outage_prob(gauss_cfg, RAY, 3, 0.1)
    assert outage_threshold(gauss_cfg, 2, 10.0) == math.inf


@pytest.mark.parametrize("spec", [RAY, FadingSpec("rice", 1.5, 3.0)])
@pytest.mark.parametrize("user,rate", [(1, 0.1), (1, 0.4), (2, 0.05), (2, 0.3)])
def test_outage_methods_agree(gauss_cfg, spec, user, rate):
    cf = outage_prob(gauss_cfg, spec, user, rate, "closed_form").outage_prob
    qd = outage_prob(gauss_cfg, spec, user, rate, "quadrature").outage_prob
    mc = outage_prob(gauss_cfg, spec, user, rate, "monte_carlo", samples=10**6, seed=5)
    assert qd == pytest.approx(cf, abs=1e-10)
    assert abs(mc.outage_prob - cf) <= 4 * mc.std_error + 1e-12


def test_outage_deterministic(gauss_cfg):
    det = FadingSpec("deterministic", gain=1.0)
    c1, c2 = capacities(gauss_cfg)
    assert outage_prob(gauss_cfg, det, 1, c1 - 1e-9).outage_prob == 0.0
    assert outage_prob(gauss_cfg, det, 1, c1 + 1e-9).outage_prob == 1.0
    assert outage_prob(gauss_cfg, det, 2, c2 + 1e-9, "quadrature").outage_prob == 1.0


def test_outage_monotonicity(gauss_cfg):
    rates = np.linspace(0, 0.6, 40)
    for user in (1, 2):
        vals = [outage_prob(gauss_cfg, RAY, user, r).outage_prob for r in rates]
        assert np.all(np.diff(vals) >= 0)
        # stronger average gain dominates stochastically
        ladder = [outage_prob(gauss_cfg, FadingSpec("rayleigh", s), user, 0.2).outage_prob for s in (0.5, 1, 2, 4)]
        assert np.all(np.diff(ladder) <= 0)


def test_outage_region_corner(gauss_cfg):
    b = outage_region(gauss_cfg, RAY, RAY, 0.1, 0.1)
    r1, r2 = b.metadata["corner"]
    assert r1 == pytest.approx(R1_STAR, abs=1e-14)
    assert r2 == pytest.approx(R2_STAR, abs=1e-14)
    assert r1 == pytest.approx(bisect_outage_rate(gauss_cfg, RAY, 1, 0.1), abs=1e-8)
    assert r2 == pytest.approx(bisect_outage_rate(gauss_cfg, RAY, 2, 0.1), abs=1e-8)
    assert b.criterion == "outage"
    assert np.all(np.diff(b.xs()) >= 0) and np.all(np.diff(b.ys()) <= 0)


def test_outage_region_rice_matches_bisection(gauss_cfg):
    spec = FadingSpec("rice", 1.0, 3.0)
    r1, r2 = outage_region(gauss_cfg, spec, spec, 0.05, 0.2).metadata["corner"]
    assert r1 == pytest.approx(bisect_outage_rate(gauss_cfg, spec, 1, 0.05), abs=1e-8)
    assert r2 == pytest.approx(bisect_outage_rate(gauss_cfg, spec, 2, 0.2), abs=1e-8)


def test_outage_region_limits_and_monotonicity(gauss_cfg):
    tiny = outage_region(gauss_cfg, RAY, RAY, 1e-12, 1e-12).metadata["corner"]
    assert tiny == pytest.approx([0.0, 0.0], abs=1e-10)
    corners = [outage_region(gauss_cfg, RAY, RAY, e, e).metadata["corner"] for e in (0.01, 0.05, 0.1, 0.3)]
    assert np.all(np.diff([c[0] for c in corners]) > 0)
    assert np.all(np.diff([c[1] for c in corners]) > 0)
    for h in (0.5, 1.0, 2.0):
        det = FadingSpec("deterministic", gain=h)
        got = outage_region(gauss_cfg, det, det, 0.1, 0.1).metadata["corner"]
        assert got == pytest.approx(list(first_order_corner(5.0 * h * h, 0.3, 0.6)), rel=1e-14)
    with pytest.raises(ValueError):
        outage_region(gauss_cfg, RAY, RAY, 0.0, 0.1)


def test_theorem3_deterministic(gauss_cfg):
    det = FadingSpec("deterministic", gain=1.0)
    c1, c2 = capacities(gauss_cfg)
    v1, v2 = dispersions(gauss_cfg)
    n = 200
    assert theorem3_bound(gauss_cfg, det, 1, n, n * c1)[0] == pytest.approx(0.5, abs=1e-12)
    for user, c, v in ((1, c1, v1), (2, c2, v2)):
        for logm in (0.8 * n * c, 0.95 * n * c, 1.05 * n * c):
            expect = qfunc((n * c - logm) / math.sqrt(n * v))
            assert theorem3_bound(gauss_cfg, det, user, n, logm)[0] == pytest.approx(expect, abs=1e-12)


def test_theorem3_quadrature_matches_monte_carlo(gauss_cfg):
    for user in (1, 2):
        for gain_choice in ("cross", "own"):
            q, _ = theorem3_bound(gauss_cfg, RAY, user, 200, 200 * 0.12, dispersion_gain=gain_choice)
            m, se = theorem3_bound(gauss_cfg, RAY, user, 200, 200 * 0.12, samples=200_000, seed=2,
                                   method="monte_carlo", dispersion_gain=gain_choice)
            assert abs(q - m) <= 4 * se + 1e-9
            assert 0 <= q <= 1


def test_theorem3_dispersion_switch_only_affects_user1(gauss_cfg):
    other = FadingSpec("rayleigh", 3.0)
    a = theorem3_bound(gauss_cfg, RAY, 1, 100, 12.0, spec_other=other)[0]
    b = theorem3_bound(gauss_cfg, RAY, 1, 100, 12.0, spec_other=other, dispersion_gain="own")[0]
    assert a != pytest.approx(b, abs=1e-6)
    c = theorem3_bound(gauss_cfg, RAY, 2, 100, 12.0, spec_other=other)[0]
    d = theorem3_bound(gauss_cfg, RAY, 2, 100, 12.0, spec_other=other, dispersion_gain="own")[0]
    assert c == d


@pytest.mark.parametrize("user,rate", [(1, R1_STAR), (2, R2_STAR), (1, 0.3)])
def test_theorem3_gap_to_outage_shrinks(gauss_cfg, user, rate):
    out = outage_prob(gauss_cfg, RAY, user, rate).outage_prob
    gaps = [abs(theorem3_bound(gauss_cfg, RAY, user, n, n * rate)[0] - out) for n in (100, 400, 1600)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_theorem3_errors(gauss_cfg):
    with pytest.raises(ValueError):
        theorem3_bound(gauss_cfg, RAY, 1, 0, 1.0)
    with pytest.raises(ValueError):
        theorem3_bound(gauss_cfg, RAY, 3, 10, 1.0)
    with pytest.raises(ValueError):
        theorem3_bound(gauss_cfg, RAY, 1, 10, 1.0, dispersion_gain="other")


def test_outage_report_json(gauss_cfg):
    doc = outage_prob(gauss_cfg, RAY, 1, 0.1).to_json()
    assert doc["schema"] == 1 and doc["user"] == 1 and 0 <= doc["outage_prob"] <= 1
