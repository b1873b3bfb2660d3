"""Tests for the radial p-Green function engine."""
import math

import numpy as np
import pytest

from warplab.curvature import Flat, PowerLaw
from warplab.errors import ConstructionError, DomainError
from warplab.geometry import build_model
from warplab.green import (
    build_green,
    green_from_dict,
    green_to_dict,
    hardy_weight,
    superharmonicity_residual,
)


@pytest.fixture(scope="module")
def g_flat(m_flat):
    return build_green(m_flat, 2.0)


@pytest.fixture(scope="module")
def g_alpha0(m_alpha0):
    return build_green(m_alpha0, 2.0)


# ---------------------------------------------------------------- closed forms


def test_flat_n3_p2_closed_form(g_flat):
    # flat n = 3, p = 2: G = 1/t (up to normalization), z = t, log G = -log t
    ts = np.linspace(0.2, 50.0, 200)
    np.testing.assert_allclose(g_flat.z_at(ts), ts, rtol=1e-9)
    shift = g_flat.logG_at(1.0)  # normalization constant, should be ~0
    assert abs(shift) < 1e-9
    np.testing.assert_allclose(g_flat.logG_at(ts), -np.log(ts), rtol=1e-9, atol=1e-9)
    assert g_flat.r_K == pytest.approx(math.e, rel=1e-9)
    assert g_flat.m == pytest.approx(2.0)


def test_flat_n4_p3_closed_form():
    # m = (n-1)/(p-1) = 3/2: G = t^(-1/2) * 2, z = t (p-1)/(n-p) = 2 t
    M = build_model(4, Flat(), t_max=40.0, tol=1e-11)
    G = build_green(M, 3.0)
    ts = np.linspace(0.5, 30.0, 50)
    np.testing.assert_allclose(G.z_at(ts), 2.0 * ts, rtol=1e-9)
    dlog = G.logG_at(ts) - G.logG_at(1.0)
    np.testing.assert_allclose(dlog, -0.5 * np.log(ts), rtol=1e-9, atol=1e-9)


def test_constant_curvature_p2_closed_form(g_alpha0):
    # kappa = 1, n = 3, p = 2: G = coth(t) - 1, |G'| = 1/sinh^2
    ts = np.linspace(0.5, 40.0, 120)
    z_exact = 0.5 * (1.0 - np.exp(-2.0 * ts))  # e^{-t} sinh t
    np.testing.assert_allclose(g_alpha0.z_at(ts), z_exact, rtol=1e-8)
    # coth t - 1 = 2 e^{-2t} / (1 - e^{-2t}), stable in log form
    logG_exact = math.log(2.0) - 2.0 * ts - np.log1p(-np.exp(-2.0 * ts))
    np.testing.assert_allclose(g_alpha0.logG_at(ts), logG_exact, rtol=1e-7, atol=1e-7)


# ---------------------------------------------------------------- invariants


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_residual_small_on_powerlaw(m_alpha1, p):
    G = build_green(m_alpha1, p)
    assert superharmonicity_residual(G) < 1e-7


def test_residual_small_flat(g_flat, g_alpha0):
    assert superharmonicity_residual(g_flat) < 1e-7
    assert superharmonicity_residual(g_alpha0) < 1e-7


def test_logG_strictly_decreasing(g_alpha0):
    assert np.all(np.diff(g_alpha0.logG) < 0.0)


def test_seed_insensitivity(m_alpha2):
    # moving the asymptotic seed inward leaves the interior tabulation alone
    G1 = build_green(m_alpha2, 2.0)
    G2 = build_green(m_alpha2, 2.0, seed_frac=0.5)
    ts = np.linspace(0.5, 20.0, 40)
    np.testing.assert_allclose(G1.logG_at(ts), G2.logG_at(ts), rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(G1.z_at(ts), G2.z_at(ts), rtol=1e-9)


def test_r_K_solves_threshold(m_alpha1):
    G = build_green(m_alpha1, 2.5)
    assert G.logG_at(G.r_K) == pytest.approx(-1.0, abs=1e-10)
    assert G.logG_at(G.r_K * 0.99) > -1.0 > G.logG_at(G.r_K * 1.01)


# ---------------------------------------------------------------- hardy weight


def test_hardy_weight_values(g_flat):
    # flat n = 3, p = 2: weight = (1/t) (log t)^beta for t >= r_K = e
    ts = np.linspace(3.0, 40.0, 25)
    np.testing.assert_allclose(hardy_weight(g_flat, 0.0, ts), 1.0 / ts, rtol=1e-9)
    np.testing.assert_allclose(
        hardy_weight(g_flat, 1.0, ts), np.log(ts) / ts, rtol=1e-9
    )


def test_hardy_weight_domain(g_flat):
    with pytest.raises(DomainError):
        hardy_weight(g_flat, -1.0, 5.0)
    with pytest.raises(DomainError):
        hardy_weight(g_flat, 0.0, 0.5 * g_flat.r_K)


# ---------------------------------------------------------------- validation


def test_flat_parabolic_rejected(m_flat):
    # flat model with p >= n has no positive Green function
    with pytest.raises(ConstructionError):
        build_green(m_flat, 3.0)
    with pytest.raises(ConstructionError):
        build_green(m_flat, 4.0)


def test_p_validation(m_alpha0):
    with pytest.raises(ConstructionError):
        build_green(m_alpha0, 1.0)
    with pytest.raises(ConstructionError):
        build_green(m_alpha0, 0.5)
    with pytest.raises(ConstructionError):
        build_green(m_alpha0, 2.0, seed_frac=0.01)


def test_r_K_needs_enough_range():
    # flat: G = 1/t crosses 1/e only at t = e, beyond this grid
    M = build_model(3, Flat(), t_max=2.0, tol=1e-10)
    with pytest.raises(ConstructionError):
        build_green(M, 2.0)


# ---------------------------------------------------------------- serialization


def test_green_dict_round_trip(m_alpha1):
    G = build_green(m_alpha1, 2.0)
    back = green_from_dict(m_alpha1, green_to_dict(G))
    ts = np.linspace(0.5, 30.0, 20)
    np.testing.assert_array_equal(back.z_at(ts), G.z_at(ts))
    np.testing.assert_array_equal(back.logG_at(ts), G.logG_at(ts))
    assert back.r_K == G.r_K
    with pytest.raises(ConstructionError):
        green_from_dict(m_alpha1, {"schema": "nope"})
