"""Shared model fixtures, built once per session.

The t_max = 60 family at tol = 1e-11 serves the geometry, green, verify,
and acceptance tests; heavier special-purpose models are built inside the
tests that need them.
"""

import pytest

from warplab.curvature import Flat, PowerLaw
from warplab.geometry import build_model


@pytest.fixture(scope="session")
def m_flat():
    return build_model(3, Flat(), 60.0, 1e-11)


@pytest.fixture(scope="session")
def m_alpha0():
    return build_model(3, PowerLaw(A=1.0, alpha=0.0), 60.0, 1e-11)


@pytest.fixture(scope="session")
def m_alpha1():
    return build_model(3, PowerLaw(A=1.0, alpha=1.0), 60.0, 1e-11)


@pytest.fixture(scope="session")
def m_alpha2():
    return build_model(3, PowerLaw(A=1.0, alpha=2.0), 60.0, 1e-11)
