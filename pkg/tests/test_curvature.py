"""Tests for the curvature-profile family."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from warplab.curvature import (
    Flat,
    IteratedLog,
    PowerLaw,
    Tabulated,
    iterated_logs,
    kappa,
    lambda_antiderivative,
    lambda_profile,
    lambda_profile_d1,
    profile_from_dict,
    profile_to_dict,
)
from warplab.errors import ConstructionError, DomainError, RangeError


# ---------------------------------------------------------------- lambda


def test_lambda_k0_is_linear():
    t = np.linspace(0.5, 40.0, 17)
    np.testing.assert_allclose(lambda_profile(3.0, 0, t), 3.0 * t, rtol=1e-15)
    assert lambda_profile(2.0, 0, 5.0) == 10.0


def test_lambda_k1_k2_closed_forms():
    t = np.array([3.0, 10.0, 100.0])
    np.testing.assert_allclose(lambda_profile(1.5, 1, t), 1.5 * t * np.log(t), rtol=1e-15)
    t2 = np.array([4.0, 30.0])
    expect = 0.5 * t2 * np.log(t2) * np.log(np.log(t2))
    np.testing.assert_allclose(lambda_profile(0.5, 2, t2), expect, rtol=1e-15)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_lambda_d1_matches_finite_difference(k):
    lo = {0: 0.5, 1: 1.5, 2: 3.2}[k]
    t = np.linspace(lo, 50.0, 23)
    h = 1e-6 * t
    fd = (lambda_profile(1.0, k, t + h) - lambda_profile(1.0, k, t - h)) / (2 * h)
    np.testing.assert_allclose(lambda_profile_d1(1.0, k, t), fd, rtol=1e-8)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_antiderivative_differentiates_to_reciprocal(k):
    lo = {0: 0.5, 1: 1.5, 2: 3.2}[k]
    t = np.linspace(lo, 50.0, 23)
    h = 1e-6 * t
    fd = (lambda_antiderivative(2.0, k, t + h) - lambda_antiderivative(2.0, k, t - h)) / (2 * h)
    np.testing.assert_allclose(fd, 1.0 / lambda_profile(2.0, k, t), rtol=1e-7)


def test_antiderivative_unbounded():
    # partial integrals of 1/lambda grow without bound for every depth
    for k in range(3):
        vals = [lambda_antiderivative(1.0, k, 10.0 ** (m + 2)) for m in range(4)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_lambda_domain_errors():
    with pytest.raises(DomainError):
        lambda_profile(0.0, 0, 1.0)
    with pytest.raises(DomainError):
        lambda_profile(1.0, -1, 1.0)
    with pytest.raises(DomainError):
        lambda_profile(1.0, 0, 0.0)
    with pytest.raises(DomainError):
        lambda_profile(1.0, 1, 1.0)  # log(1) = 0
    with pytest.raises(DomainError):
        lambda_profile(1.0, 2, 2.0)  # log(log(2)) < 0
    with pytest.raises(DomainError):
        iterated_logs(-1.0, 0)


@given(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=4.0, max_value=1e4))
def test_lambda_k1_increasing(a, t):
    assert lambda_profile(a, 1, 1.01 * t) > lambda_profile(a, 1, t)


# ---------------------------------------------------------------- profiles


def test_powerlaw_values():
    p = PowerLaw(A=2.0, alpha=3.0)
    assert p.kappa(0.0) == 0.0
    assert p.kappa(2.0) == pytest.approx(4.0 * 8.0, rel=1e-15)
    t = np.linspace(0.0, 5.0, 11)
    np.testing.assert_allclose(p.kappa(t), 4.0 * t**3, rtol=1e-15)
    # alpha = 0 is the constant-curvature case
    assert PowerLaw(A=1.5, alpha=0.0).kappa(7.0) == pytest.approx(2.25)


def test_powerlaw_validation():
    with pytest.raises(ConstructionError):
        PowerLaw(A=0.0, alpha=1.0)
    with pytest.raises(ConstructionError):
        PowerLaw(A=-1.0, alpha=1.0)
    with pytest.raises(ConstructionError):
        PowerLaw(A=1.0, alpha=-0.5)
    with pytest.raises(DomainError):
        PowerLaw(A=1.0, alpha=1.0).kappa(-1.0)


def test_flat_is_zero():
    f = Flat()
    assert f.kappa(3.0) == 0.0
    np.testing.assert_array_equal(f.kappa(np.linspace(0, 9, 5)), np.zeros(5))
    with pytest.raises(DomainError):
        f.kappa(-2.0)


def test_iteratedlog_structure():
    prof = IteratedLog(a=1.0, k=1)
    onset = prof.t_onset
    assert onset == pytest.approx(2.0 * math.e)
    # constant at and below onset/2
    c0 = lambda_profile(1.0, 1, onset) ** 2
    assert prof.kappa(0.0) == pytest.approx(c0)
    assert prof.kappa(onset / 2.0) == pytest.approx(c0)
    # equal to lambda^2 from onset on
    for t in [onset, 2 * onset, 10 * onset]:
        assert prof.kappa(t) == pytest.approx(lambda_profile(1.0, 1, t) ** 2, rel=1e-14)
    # continuous through the blend: max step shrinks linearly with the mesh
    steps = []
    for m in (400, 800):
        ts = np.linspace(onset / 2.0 - 0.1, onset + 0.1, m)
        steps.append(np.abs(np.diff(prof.kappa(ts))).max())
    assert steps[1] < 0.6 * steps[0]


def test_iteratedlog_validation():
    with pytest.raises(ConstructionError):
        IteratedLog(a=0.0, k=1)
    with pytest.raises(ConstructionError):
        IteratedLog(a=1.0, k=-1)
    with pytest.raises(ConstructionError):
        IteratedLog(a=1.0, k=1.5)
    with pytest.raises(ConstructionError):
        IteratedLog(a=1.0, k=2, t_onset=2.0)  # blend region leaves the domain


def test_tabulated_interp_and_range():
    tab = Tabulated(t_points=(0.0, 1.0, 2.0), kappa_points=(0.0, 4.0, 4.0))
    assert tab.kappa(0.5) == pytest.approx(2.0)
    assert tab.kappa(1.7) == pytest.approx(4.0)
    with pytest.raises(RangeError):
        tab.kappa(2.5)
    with pytest.raises(RangeError):
        tab.kappa(np.array([0.5, -0.1]))


def test_tabulated_validation():
    with pytest.raises(ConstructionError):
        Tabulated(t_points=(0.0,), kappa_points=(1.0,))
    with pytest.raises(ConstructionError):
        Tabulated(t_points=(0.0, 1.0), kappa_points=(1.0,))
    with pytest.raises(ConstructionError):
        Tabulated(t_points=(1.0, 1.0), kappa_points=(0.0, 0.0))
    with pytest.raises(ConstructionError):
        Tabulated(t_points=(0.0, 1.0), kappa_points=(0.0, -1.0))


def test_kappa_free_function():
    assert kappa(PowerLaw(A=1.0, alpha=2.0), 3.0) == pytest.approx(9.0)
    assert kappa(Flat(), 3.0) == 0.0


# ---------------------------------------------------------------- dict round-trip


@pytest.mark.parametrize(
    "prof",
    [
        PowerLaw(A=1.0, alpha=2.0),
        PowerLaw(A=0.3, alpha=0.0),
        Flat(),
        IteratedLog(a=1.25, k=1),
        Tabulated(t_points=(0.0, 0.5, 2.0), kappa_points=(1.0, 0.25, 0.0)),
    ],
)
def test_profile_dict_round_trip(prof):
    back = profile_from_dict(profile_to_dict(prof))
    assert back == prof
    # evaluation round-trips bit-exactly as well
    t = 1.5
    assert back.kappa(t) == prof.kappa(t)


def test_profile_from_dict_errors():
    with pytest.raises(ConstructionError):
        profile_from_dict({})
    with pytest.raises(ConstructionError):
        profile_from_dict({"kind": "mystery"})
    with pytest.raises(ConstructionError):
        profile_from_dict(None)
