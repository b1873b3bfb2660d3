"""Tests for the inequality verifiers."""
import math

import numpy as np
import pytest

from warplab.cutoff import make_hessian_cutoff
from warplab.errors import ConfigurationError, PreconditionError
from warplab.green import build_green
from warplab.radial import (
    TestCorpus,
    generate_corpus,
    smooth_bump,
    smooth_plateau,
    warped_tail,
)
from warplab.verify import (
    InequalityReport,
    density_probe,
    hardy_window,
    verify_cz2,
    verify_hardy,
    verify_hardy2,
    verify_weight_embedding,
)


@pytest.fixture(scope="module")
def g0(m_alpha0):
    return build_green(m_alpha0, 2.0)


@pytest.fixture(scope="module")
def hardy_members(m_alpha0, g0):
    inner = max(1.0, 1.02 * g0.r_K)
    return generate_corpus(TestCorpus(seed=5, size=9), m_alpha0, inner, green=g0)


@pytest.fixture(scope="module")
def plain_members(m_alpha1):
    return generate_corpus(TestCorpus(seed=11, size=6), m_alpha1, inner_radius=1.0)


# ---------------------------------------------------------------- hardy


def test_hardy_holds_at_sharp_constant(m_alpha0, g0, hardy_members):
    rep = verify_hardy(m_alpha0, g0, 2.0, 0.0, hardy_members)
    assert rep.verdict == "holds"
    assert rep.sharp_constant == pytest.approx(4.0)
    assert rep.empirical_constant <= 4.0 * (1.0 + 1e-8)
    assert len(rep.records) == len(hardy_members)
    for rec in rep.records:
        assert rec["ratio"] <= 4.0 * (1.0 + 1e-8)
        assert rec["lhs"] > 0.0 and rec["rhs"] > 0.0
        assert rec["margin"] == pytest.approx(rec["bound"] - rec["ratio"])
    assert rep.empirical_constant == max(r["ratio"] for r in rep.records)


def test_hardy_extremal_family_near_sharp(m_alpha0, g0, hardy_members):
    rep = verify_hardy(m_alpha0, g0, 2.0, 0.0, hardy_members)
    ext = [r["ratio"] for r in rep.records if "extremal" in r["label"]]
    assert len(ext) == 4
    assert max(ext) >= 0.5 * 4.0
    # nested windows widen toward the sharp constant
    assert ext == sorted(ext)


def test_hardy_weighted_beta(m_alpha0, g0, hardy_members):
    rep = verify_hardy(m_alpha0, g0, 2.0, 0.5, hardy_members[:5])
    assert rep.verdict == "holds"
    assert rep.beta == 0.5
    assert all(r["ratio"] <= 4.0 * (1.0 + 1e-8) for r in rep.records)


def test_hardy_other_p(m_alpha0, hardy_members):
    G = build_green(m_alpha0, 3.0)
    # reuse only the plain bumps; the extremal members embed the p = 2 Green
    plain = [f for f in hardy_members if "extremal" not in f.label]
    rep = verify_hardy(m_alpha0, G, 3.0, 0.0, plain)
    assert rep.verdict == "holds"
    assert rep.sharp_constant == pytest.approx((3.0 / 2.0) ** 3)


def test_hardy_window_and_preconditions(m_alpha0, g0):
    lo, hi = hardy_window(g0)
    assert lo == g0.r_K
    assert hi == pytest.approx(0.9 * min(m_alpha0.t_max, m_alpha0.t_grid_max))
    inside = smooth_bump(10.0, 2.0)
    outside = smooth_bump(0.5 * lo, 0.3 * lo)
    with pytest.raises(PreconditionError):
        verify_hardy(m_alpha0, g0, 2.0, 0.0, [inside, outside])
    with pytest.raises(ConfigurationError):
        verify_hardy(m_alpha0, g0, 1.0, 0.0, [inside])
    with pytest.raises(ConfigurationError):
        verify_hardy(m_alpha0, g0, 2.0, -1.0, [inside])


def test_report_to_dict(m_alpha0, g0, hardy_members):
    rep = verify_hardy(m_alpha0, g0, 2.0, 0.0, hardy_members[:2])
    d = rep.to_dict()
    assert d["name"] == "hardy"
    assert d["verdict"] == "holds"
    assert isinstance(d["records"], list) and len(d["records"]) == 2
    assert d["sharp_constant"] == 4.0
    import json

    json.dumps(d)  # JSON-serializable as-is


# ---------------------------------------------------------------- hardy2


def test_hardy2_chain(m_alpha0, g0, hardy_members):
    rep = verify_hardy2(m_alpha0, g0, 2.0, 0.0, hardy_members[:6])
    assert rep.verdict == "report-only"
    assert rep.sharp_constant is None
    assert rep.extra["chain_step"] == pytest.approx(4.0)
    bound = rep.extra["chain_bound"]
    assert bound == pytest.approx(16.0 * rep.extra["c_log"], rel=1e-12)
    for rec in rep.records:
        # the two-step estimate dominates every measured ratio
        assert rec["lhs"] <= bound * rec["rhs"] * (1.0 + 1e-8)
        assert rec["grad_weighted"] > 0.0 and rec["grad_green"] > 0.0
        assert rec["c_log"] <= rep.extra["c_log"] * (1.0 + 1e-12)


# ---------------------------------------------------------------- embedding


def test_weight_embedding_holds(m_alpha1, plain_members):
    rep = verify_weight_embedding(m_alpha1, plain_members, 2.0, 1.0, 1.0)
    assert rep.verdict == "holds"
    sweep2 = rep.extra["sweep_second_order"]
    sweep1 = rep.extra["sweep_first_order"]
    assert len(sweep2) == len(rep.extra["sweep_R"]) == 4
    assert all(b < a for a, b in zip(sweep2, sweep2[1:]))
    assert sweep2[-1] <= 1e-3 * sweep2[0]
    assert sweep1[-1] <= 1e-3 * sweep1[0]
    for rec in rep.records:
        assert 0.0 < rec["ratio"]
        assert 0.0 < rec["first_ratio"]


def test_weight_embedding_guards(m_alpha1, m_flat, plain_members):
    with pytest.raises(ConfigurationError):
        verify_weight_embedding(m_alpha1, plain_members, 2.0, 1.5, 1.0)  # growth too fast
    with pytest.raises(ConfigurationError):
        verify_weight_embedding(m_flat, plain_members, 2.0, 0.5, 1.0)
    with pytest.raises(ConfigurationError):
        verify_weight_embedding(m_alpha1, plain_members, 0.5, 1.0, 1.0)
    with pytest.raises(ConfigurationError):
        verify_weight_embedding(m_alpha1, plain_members, 2.0, 1.0, -1.0)
    with pytest.raises(ConfigurationError):
        verify_weight_embedding(m_alpha1, plain_members, 2.0, 1.0, 20.0)  # no sweep room


# ---------------------------------------------------------------- cz2


def test_cz2_identity_and_pareto(m_alpha1, plain_members):
    rep = verify_cz2(m_alpha1, plain_members)
    assert rep.verdict == "report-only"
    for rec in rep.records:
        assert rec["bochner_residual"] < 1e-6
        assert rec["ratio"] > 0.0
        assert rec["weight_l2"] > 0.0
    pareto = rep.extra["pareto"]
    assert [e for e, _ in pareto] == [0.5, 0.25, 0.125, 0.0625]
    a1s = [a for _, a in pareto]
    # smaller epsilon shifts weight back onto A1: front is nondecreasing
    assert all(b >= a - 1e-12 for a, b in zip(a1s, a1s[1:]))
    assert rep.extra["a2"] == 1.0


def test_cz2_flat_hessian_identity(m_flat):
    # flat space: int (Lap phi)^2 = int |Hess phi|^2 exactly (no curvature term)
    members = [smooth_bump(6.0, 3.0), smooth_plateau(3.0, 9.0, 2.0, 2.0)]
    rep = verify_cz2(m_flat, members)
    for rec in rep.records:
        assert rec["bochner_residual"] < 1e-9


def test_cz2_epsilon_validation(m_flat):
    with pytest.raises(ConfigurationError):
        verify_cz2(m_flat, [smooth_bump(6.0, 3.0)], epsilons=(0.5, 0.0))


# ---------------------------------------------------------------- density


def test_density_probe_decays(m_alpha1):
    R_list = [4.0, 8.0, 16.0]
    gmax = m_alpha1.t_grid_max
    probe = warped_tail(m_alpha1, 2.0, 7.0, lo=2.0, hi=0.96 * gmax, ramp_lo=1.0, ramp_hi=0.03 * gmax)
    cuts = [make_hessian_cutoff(m_alpha1, R) for R in R_list]
    rep = density_probe(m_alpha1, probe, cuts, 2.0, R_list)
    assert rep.verdict == "holds"
    for col in ("remainder", "first_order", "second_order"):
        vals = [rec[col] for rec in rep.records]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= 1e-3 * vals[0]
    assert [rec["label"] for rec in rep.records] == ["R=4", "R=8", "R=16"]


def test_density_probe_violated_with_stuck_cutoff(m_alpha1):
    # reusing the R = 8 cutoff for every radius leaves the truncation error
    # nearly constant, so the strict-decay assertion fails honestly
    R_list = [8.0, 16.0, 32.0]
    gmax = m_alpha1.t_grid_max
    probe = warped_tail(m_alpha1, 2.0, 7.0, lo=2.0, hi=0.96 * gmax, ramp_lo=1.0, ramp_hi=0.03 * gmax)
    stuck = make_hessian_cutoff(m_alpha1, 8.0)
    rep = density_probe(m_alpha1, probe, [stuck] * 3, 2.0, R_list)
    assert rep.verdict == "violated"


def test_density_probe_validation(m_alpha1):
    probe = warped_tail(m_alpha1, 2.0, 5.5, lo=2.0, hi=50.0, ramp_lo=1.0, ramp_hi=2.0)
    chi = make_hessian_cutoff(m_alpha1, 8.0)
    with pytest.raises(ConfigurationError):
        density_probe(m_alpha1, probe, [chi], 2.0, [8.0, 16.0])
    with pytest.raises(ConfigurationError):
        density_probe(m_alpha1, probe, [chi, chi], 2.0, [16.0, 8.0])
    with pytest.raises(ConfigurationError):
        density_probe(m_alpha1, probe, [chi], 2.0, [60.0])
