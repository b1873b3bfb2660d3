"""Rotationally symmetric model manifolds.

A model of dimension n with radial curvature profile kappa is determined by
the warping function j solving j'' = kappa j, j(0) = 0, j'(0) = 1.  Because j
grows like exp(const * t^(1+alpha/2)) for power-law profiles, the engine never
integrates j itself.  It tabulates three bounded-rate quantities:

* ``w = j'/j``            Riccati form,          w' = kappa - w^2
* ``logj``                log warping,           (logj)' = w
* ``y = (int_0^t j^(n-1)) / j^(n-1)``  volume ratio,  y' = 1 - (n-1) w y

all started from their small-t series at t ~ 1e-6 (w ~ 1/t, logj ~ log t,
y ~ t/n).  The Riccati slow manifold w ~ sqrt(kappa) is strongly attracting
(rate 2w), which makes the system stiff for growing profiles; integration
uses a stiffness-switching multistep method with the exact 3x3 Jacobian.
The attraction also means local roundoff in kappa - w^2 is self-correcting.

The system is integrated in tau = log t using the conditioned variables
(w t, logj - log t, y / t), which are O(1) and smooth across the pole
region.  Near t = 0 all three sit within an absolute tolerance of their
limits, so the recovered logj = (logj - log t) + tau is smooth to roundoff;
tabulating logj directly instead leaves interpolation jitter of order
rtol |log t| that downstream finite differences amplify by 1/dtau^2.

Tabulation lives on a grid uniform in log t that always contains t = 1 as a
node; queries interpolate with cubic Hermite polynomials whose node slopes
are the exact ODE right-hand sides, giving O((t dtau)^4) interpolation error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import curvature as _curv
from .errors import ConfigurationError, ConstructionError, IntegrationError, RangeError
from .numerics import HermiteTable

T_SERIES_START = 1e-6


def sphere_area_log(n: int) -> float:
    """log of the area of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2)."""
    return math.log(2.0) + 0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n)


def _series_seed(profile, n: int, t: float):
    """Two-term small-t expansions of (w t, logj - log t, y/t) at the start.

    For kappa ~ A^2 t^alpha near zero the corrections are
    w t = 1 + kappa t^2/(alpha+3),
    logj - log t = kappa t^2/((alpha+2)(alpha+3)),
    y/t = (1/n)(1 - (n-1) kappa t^2 / ((alpha+3)(n+alpha+2))); alpha = 0
    covers every profile that tends to a constant at the pole.
    """
    alpha = profile.alpha if isinstance(profile, _curv.PowerLaw) else 0.0
    k0 = float(profile.kappa(t))
    W0 = 1.0 + k0 * t * t / (alpha + 3.0)
    L0 = k0 * t * t / ((alpha + 2.0) * (alpha + 3.0))
    Y0 = (1.0 - (n - 1.0) * k0 * t * t / ((alpha + 3.0) * (n + alpha + 2.0))) / n
    return W0, L0, Y0


@dataclass
class ModelManifold:
    """Tabulated model manifold; construct with :func:`build_model`."""

    n: int
    profile: _curv.CurvatureProfile
    t_max: float
    tol: float
    t: np.ndarray
    w: np.ndarray
    logj: np.ndarray
    y: np.ndarray
    _tables: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        kap = np.asarray(self.profile.kappa(self.t), dtype=float)
        self.kappa_nodes = kap
        self.dw_nodes = kap - self.w * self.w
        self.dy_nodes = 1.0 - (self.n - 1.0) * self.w * self.y
        self._tables = {
            "w": HermiteTable(self.t, self.w, self.dw_nodes),
            "logj": HermiteTable(self.t, self.logj, self.w),
            "y": HermiteTable(self.t, self.y, self.dy_nodes),
        }

    # --- interpolated queries -------------------------------------------
    def w_at(self, t, nu: int = 0):
        return self._tables["w"](t, nu)

    def logj_at(self, t, nu: int = 0):
        return self._tables["logj"](t, nu)

    def y_at(self, t, nu: int = 0):
        return self._tables["y"](t, nu)

    def kappa_at(self, t):
        return self.profile.kappa(t)

    @property
    def t_grid_max(self) -> float:
        return float(self.t[-1])


def build_model(n: int, profile: _curv.CurvatureProfile, t_max: float, tol: float) -> ModelManifold:
    """Integrate the model system and tabulate (w, logj, y) on [1e-6, t_max].

    n must be an integer >= 2, t_max > 1, and tol a relative tolerance in
    [1e-13, 1e-4].  Raises IntegrationError if the integrator fails or the
    computed w is not everywhere positive.
    """
    if int(n) != n or n < 2:
        raise ConstructionError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    if not t_max > 1.0:
        raise ConstructionError(f"t_max must exceed 1, got {t_max!r}")
    if not (1e-13 <= tol <= 1e-4):
        raise ConfigurationError(f"tol must lie in [1e-13, 1e-4], got {tol!r}")

    # log-uniform grid through tau = 0, endpoints padded to cover the range
    dtau = min(max(0.002 * (tol / 1e-10) ** 0.25, 5e-4), 0.004)
    k_lo = math.floor(math.log(T_SERIES_START) / dtau)
    k_hi = math.ceil(math.log(t_max) / dtau)
    taus = dtau * np.arange(k_lo, k_hi + 1)
    grid = np.exp(taus)

    W0, L0, Y0 = _series_seed(profile, n, float(grid[0]))

    nm1 = float(n - 1)

    # conditioned system in tau = log t: s = (w t, logj - log t, y/t)
    def rhs(q, s):
        W, _, Y = s
        t = math.exp(q)
        return (W + t * t * profile.kappa(t) - W * W, W - 1.0, 1.0 - (nm1 * W + 1.0) * Y)

    def jac(q, s):
        W, _, Y = s
        return np.array(
            [[1.0 - 2.0 * W, 0.0, 0.0], [1.0, 0.0, 0.0], [-nm1 * Y, 0.0, -(nm1 * W + 1.0)]]
        )

    sol = solve_ivp(
        rhs,
        (float(taus[0]), float(taus[-1])),
        (W0, L0, Y0),
        method="LSODA",
        t_eval=taus,
        rtol=max(tol * 0.1, 3e-14),
        atol=(1e-16, 1e-18, 1e-16),
        jac=jac,
        dense_output=False,
    )
    if not sol.success:
        raise IntegrationError(f"model integration failed: {sol.message}")
    w = sol.y[0] / grid
    logj = sol.y[1] + taus
    y = sol.y[2] * grid
    if not np.all(w > 0.0):
        bad = float(grid[np.argmax(w <= 0.0)])
        raise IntegrationError(f"w = j'/j lost positivity near t = {bad:g}")
    if not np.all(y > 0.0):
        bad = float(grid[np.argmax(y <= 0.0)])
        raise IntegrationError(f"volume ratio lost positivity near t = {bad:g}")
    return ModelManifold(n=n, profile=profile, t_max=float(t_max), tol=float(tol),
                         t=grid, w=w, logj=logj, y=y)


def laplacian_distance(M: ModelManifold, t):
    """Laplacian of the distance-to-pole function: (n-1) j'/j."""
    return (M.n - 1.0) * M.w_at(t)


def log_area(M: ModelManifold, t):
    """log of the boundary-sphere area: log|S^(n-1)| + (n-1) logj(t)."""
    return sphere_area_log(M.n) + (M.n - 1.0) * M.logj_at(t)


def model_to_dict(M: ModelManifold) -> dict:
    """Serialize (exact float round-trip; queries reproduce bit-for-bit)."""
    return {
        "schema": "warplab-model/1",
        "n": M.n,
        "t_max": M.t_max,
        "tol": M.tol,
        "profile": _curv.profile_to_dict(M.profile),
        "t": M.t.tolist(),
        "w": M.w.tolist(),
        "logj": M.logj.tolist(),
        "y": M.y.tolist(),
    }


def model_from_dict(data: dict) -> ModelManifold:
    """Rebuild a tabulated model without re-integrating."""
    if data.get("schema") != "warplab-model/1":
        raise ConstructionError(f"unsupported model schema {data.get('schema')!r}")
    return ModelManifold(
        n=int(data["n"]),
        profile=_curv.profile_from_dict(data["profile"]),
        t_max=float(data["t_max"]),
        tol=float(data["tol"]),
        t=np.asarray(data["t"], dtype=float),
        w=np.asarray(data["w"], dtype=float),
        logj=np.asarray(data["logj"], dtype=float),
        y=np.asarray(data["y"], dtype=float),
    )
