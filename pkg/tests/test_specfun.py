"""Log-domain Bessel evaluation against library references and its own branches."""

import math

import pytest
import scipy.special as sp
from hypothesis import given, strategies as st

from warplab.errors import DomainError
from warplab.specfun import X_SWITCH, _log_iv_series, gamma, log_bessel_i


def ref_log_iv(nu, x):
    # scaled Bessel from scipy keeps the reference finite at large x
    return math.log(sp.ive(nu, x)) + x


def ref_ratio(nu, x):
    return 0.5 * (sp.ive(nu - 1.0, x) + sp.ive(nu + 1.0, x)) / sp.ive(nu, x)


@pytest.mark.parametrize("nu", [0.2, 0.25, 1.0 / 3.0, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("x", [1e-3, 0.1, 1.0, 7.5, 29.0, 31.0, 80.0, 1e4])
def test_log_value_against_scipy(nu, x):
    ev = log_bessel_i(nu, x)
    assert abs(ev.log_value - ref_log_iv(nu, x)) <= 1e-12 * max(1.0, abs(ev.log_value))


@pytest.mark.parametrize("nu", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("x", [0.5, 5.0, 29.0, 35.0, 200.0])
def test_ratio_against_scipy(nu, x):
    ev = log_bessel_i(nu, x)
    assert ev.ratio == pytest.approx(ref_ratio(nu, x), rel=1e-12)


def test_branch_switch_is_where_documented():
    assert log_bessel_i(0.5, X_SWITCH).branch == "series"
    assert log_bessel_i(0.5, X_SWITCH * 1.001).branch == "asymptotic"


def test_branches_agree_on_overlap():
    # the series stays usable beyond the switch; compare it there against
    # the asymptotic branch actually returned
    for nu in (0.25, 0.5, 1.0):
        for x in (31.0, 40.0, 55.0):
            lv_series = _log_iv_series(nu, x)
            lv = log_bessel_i(nu, x).log_value
            assert abs(lv - lv_series) <= 1e-12 * abs(lv)


def test_origin_limits():
    ev = log_bessel_i(0.5, 0.0)
    assert ev.log_value == -math.inf
    assert ev.ratio == math.inf


def test_domain_errors():
    with pytest.raises(DomainError):
        log_bessel_i(0.0, 1.0)
    with pytest.raises(DomainError):
        log_bessel_i(1.5, 1.0)
    with pytest.raises(DomainError):
        log_bessel_i(0.5, -1.0)
    with pytest.raises(DomainError):
        log_bessel_i(0.5, math.inf)
    with pytest.raises(DomainError):
        gamma(0.0)


def test_gamma_matches_math():
    for x in (0.5, 1.0, 2.5, 10.0):
        assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-14)


@given(
    nu=st.floats(min_value=0.05, max_value=1.0),
    x=st.floats(min_value=1e-6, max_value=1e5),
)
def test_value_and_ratio_are_positive_and_growing(nu, x):
    ev = log_bessel_i(nu, x)
    assert math.isfinite(ev.log_value)
    assert ev.ratio > 0.0
    bigger = log_bessel_i(nu, x * 1.5)
    assert bigger.log_value > ev.log_value
