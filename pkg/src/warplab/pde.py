"""Radial elliptic solves on model manifolds.

Four probes built on one second-order finite-difference core:

* :func:`solve_dirichlet_exhaustion` solves (-Lap + 1) v = psi on nested
  balls with v = 0 at each radius.  The discretization lives on a grid
  uniform in tau = log t (one global step for all levels), so meshes for
  successive radii share every node below the smaller radius: the discrete
  comparison principle applies verbatim between levels and the reported
  monotonicity defect is rounding, not interpolation error.  Uniform-in-tau
  stencils also make the truncation error a smooth multiple of dtau^2,
  which bisection-plus-Richardson then cancels cleanly.
* :func:`exterior_eigenfunction` tabulates the decaying positive solution
  of Lap v = v outside a ball by backward integration of the logarithmic
  slope s = v'/v (backward is the stable direction for that branch).
* :func:`classify_stochastic_completeness` runs a doubling test on the
  volume-ratio integral u(T) = int_0^T y dt, whose Laplacian is exactly 1.
* :func:`positivity_probe` pairs two exhaustion solves against a family of
  cutoffs and tracks the pairing terms over a radius sweep.

Every linear system is a tridiagonal M-matrix, checked structurally before
each solve; Richardson extrapolation on a bisected companion mesh upgrades
the solved values to fourth order at the shared nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from .curvature import lambda_profile
from .cutoff import make_hessian_cutoff
from .errors import (
    ConfigurationError,
    PreconditionError,
    RangeError,
    SolverError,
)
from .geometry import ModelManifold, sphere_area_log
from .numerics import HermiteTable, fd5_loggrid
from .quadrature import integrate_family
from .radial import RadialFunction, lp_norm
from .verify import InequalityReport

_POLE_T0 = 1e-5
# Four-point Gauss-Legendre rule on [-1, 1], used per grid panel.
_GL_X = np.array([-0.8611363115940526, -0.3399810435848563,
                  0.3399810435848563, 0.8611363115940526])
_GL_W = np.array([0.34785484513745385, 0.6521451548625461,
                  0.6521451548625461, 0.34785484513745385])


def _tau_grid(M: ModelManifold, R_last: float, mesh_points: int):
    """Global log-uniform grid step for a solve family ending at R_last.

    dtau obeys the cell Peclet bound |(n-1) w t - 1| dtau <= 1.6 (keeps the
    drift stencil's off-diagonals nonpositive) and is then snapped to an
    exact divisor of log 2, so radii in power-of-two ratios land on shared
    grid nodes.  Returns (taus, dtau) with taus ending exactly at log R_last.
    """
    span = np.log(R_last) - np.log(_POLE_T0)
    ts = np.geomspace(_POLE_T0, R_last, 2049)
    c_max = float(np.max(np.abs((M.n - 1.0) * M.w_at(ts) * ts - 1.0)))
    dtau = min(span / mesh_points, 1.6 / max(c_max, 1e-12), 0.02)
    m = int(np.ceil(np.log(2.0) / dtau))
    dtau = np.log(2.0) / m
    count = int(np.ceil(span / dtau))
    if count > 2_000_000:
        raise SolverError(
            f"drift needs {count} nodes per level at dtau = {dtau:.3g}; "
            "reduce the radius or the model's t_max"
        )
    tau0 = np.log(R_last) - count * dtau
    return tau0 + dtau * np.arange(count + 1), dtau


def _level_taus(taus: np.ndarray, dtau: float, radii, R: float) -> np.ndarray:
    """Nodes (in tau) for the ball of radius R: the uniform grid below
    log R plus the exact log R_j for every radius R_j <= R.  Inserted and
    surviving nodes depend only on the global grid and on radii below R, so
    level meshes nest node for node."""
    extras = [np.log(Rj) for Rj in radii if Rj <= R * (1.0 + 1e-12)]
    sel = taus[taus < np.log(R) - 0.25 * dtau]
    for x in extras:
        sel = sel[np.abs(sel - x) > 0.25 * dtau]
    return np.sort(np.concatenate([sel, np.asarray(extras)]))


def _bisect(mesh: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(mesh) - 1)
    out[0::2] = mesh
    out[1::2] = 0.5 * (mesh[:-1] + mesh[1:])
    return out


def _plain_values(f: RadialFunction, t: np.ndarray) -> np.ndarray:
    return f.coeff(t, 0) * np.exp(f.log_scale(t))


def _solve_level(M: ModelManifold, tau_mesh: np.ndarray,
                 psi_vals: np.ndarray) -> np.ndarray:
    """Second-order solve of -(v'' + (n-1) w v') + v = psi on a tau mesh.

    In tau = log t the operator is -a v_tt - c v_t + v with a = 1/t^2 and
    c = ((n-1) w t - 1)/t^2.  The pole row imposes the reflecting closure
    v_0 = v_1 (the flux there is O(t_0^2)); the last row is the Dirichlet
    boundary.  Raises SolverError if the assembled matrix is not an
    M-matrix (positive diagonal, nonpositive off-diagonals).
    """
    tau = tau_mesh
    m = len(tau)
    t = np.exp(tau)
    a = 1.0 / (t * t)
    c = ((M.n - 1.0) * M.w_at(t) * t - 1.0) / (t * t)
    hm = tau[1:-1] - tau[:-2]
    hp = tau[2:] - tau[1:-1]
    den = hm + hp
    ai, ci = a[1:-1], c[1:-1]
    low = (ci * hp - 2.0 * ai) / (hm * den)
    upp = -(ci * hm + 2.0 * ai) / (hp * den)
    dia = 1.0 + (2.0 * ai - ci * (hp - hm)) / (hm * hp)
    if np.any(low > 0.0) or np.any(upp > 0.0) or np.any(dia <= 0.0):
        i = int(np.argmax(low))
        raise SolverError(
            "mesh too coarse: discrete maximum principle fails near "
            f"t = {t[1 + i]:.6g} (drift {ci[i] * t[1 + i] ** 2:.4g}, "
            f"dtau {hp[i]:.4g})"
        )
    # Unit-diagonal row scaling: raw entries span ~1/(t^2 dtau^2) from the
    # pole to the bulk, and equilibration keeps elimination rounding at the
    # component level (levels must agree to ~1e-15 sup for the monotonicity
    # defect to read as zero).
    ab = np.zeros((3, m))
    ab[1, 0] = 1.0
    ab[0, 1] = -1.0
    ab[1, 1:-1] = 1.0
    ab[0, 2:] = upp / dia
    ab[2, 0:m - 2] = low / dia
    ab[1, -1] = 1.0
    rhs = np.asarray(psi_vals, dtype=float).copy()
    rhs[1:-1] /= dia
    rhs[0] = 0.0
    rhs[-1] = 0.0
    return solve_banded((1, 1), ab, rhs)


def _simpson_weights(fine: np.ndarray) -> np.ndarray:
    """Composite Simpson weights for a bisected mesh (even indices are the
    coarse nodes, odd indices their exact midpoints)."""
    w = np.zeros(len(fine))
    h = fine[2::2] - fine[0:-2:2]
    w[0:-2:2] += h / 6.0
    w[1::2] += 4.0 * h / 6.0
    w[2::2] += h / 6.0
    return w


# Values below the smallest normal double carry no information (the banded
# solves are backward stable in a relative sense, which subnormals break);
# they are treated as exact zeros wherever logs meet large volume weights.
_LOG_FLOOR = -707.0


def _nodal_lp(M: ModelManifold, fine_tau: np.ndarray, weights: np.ndarray,
              vals: np.ndarray, p: float) -> float:
    """(int |vals|^p dV)^{1/p} by Simpson in tau; the exponent sum keeps
    tiny values times huge volume weights from producing 0 * inf."""
    t = np.exp(fine_tau)
    logdv = (M.n - 1.0) * M.logj_at(t) + sphere_area_log(M.n) + fine_tau
    with np.errstate(divide="ignore"):
        lg = np.log(np.abs(vals))
    lg = np.where(lg > _LOG_FLOOR, lg, -np.inf)
    integ = np.exp(p * lg + logdv)
    return float(np.sum(weights * integ) ** (1.0 / p))


def _check_nonnegative(f: RadialFunction, lo: float, hi: float, what: str):
    ts = np.linspace(max(lo, _POLE_T0), hi, 2049)
    vals = f.coeff(ts, 0)
    floor = -1e-12 * max(float(np.max(np.abs(vals))), 1.0)
    if float(np.min(vals)) < floor:
        i = int(np.argmin(vals))
        raise PreconditionError(
            f"{what} must be nonnegative; sampled {vals[i]:.3g} at "
            f"t = {ts[i]:.6g}"
        )


@dataclass
class ExhaustionSolution:
    """Nested Dirichlet solves of (-Lap + 1) v = psi.

    values[k] holds the Richardson-extrapolated solution at the nodes of
    meshes[k]; norms maps each requested p to the per-level L^p norms and
    sup_norms holds the per-level sup norms.  monotone_defect is the largest
    pointwise decrease between consecutive levels at shared nodes, measured
    relative to the final sup norm.  convergence_gap compares the last two
    levels the same way; converged means it fell below 1e-8.
    """

    radii: tuple
    meshes: list
    values: list
    norms: dict
    sup_norms: list
    psi_norms: Optional[dict]
    richardson_gaps: list
    monotone_defect: float
    convergence_gap: float
    converged: bool
    gradient_constants: dict
    label: str = ""
    _splines: dict = field(default_factory=dict, repr=False)

    def evaluate(self, level: int, t):
        """Cubic-spline evaluation of level k at arbitrary radii; zero
        beyond the level's boundary.  The spline runs in tau = log t, the
        variable in which the nodes are (essentially) uniform."""
        sp = self._splines.get(level)
        if sp is None:
            sp = CubicSpline(np.log(self.meshes[level]), self.values[level])
            self._splines[level] = sp
        tq = np.asarray(t, dtype=float)
        mesh = self.meshes[level]
        out = np.asarray(sp(np.log(np.clip(tq, mesh[0], mesh[-1]))))
        out = np.where(tq > mesh[-1], 0.0, out)
        return float(out) if tq.ndim == 0 else out

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "radii": [float(r) for r in self.radii],
            "nodes": [int(len(m)) for m in self.meshes],
            "norms": {str(p): [float(x) for x in v]
                      for p, v in self.norms.items()},
            "sup_norms": [float(x) for x in self.sup_norms],
            "psi_norms": None if self.psi_norms is None else
                         {str(k): float(v) for k, v in self.psi_norms.items()},
            "richardson_gaps": [float(g) for g in self.richardson_gaps],
            "monotone_defect": float(self.monotone_defect),
            "convergence_gap": float(self.convergence_gap),
            "converged": bool(self.converged),
            "gradient_constants": {str(q): float(c) for q, c in
                                   self.gradient_constants.items()},
        }


def solve_dirichlet_exhaustion(
    M: ModelManifold,
    psi: RadialFunction,
    radii,
    p_list=(1.0, 2.0, 4.0),
    mesh_points: int = 2000,
    require_support: bool = True,
) -> ExhaustionSolution:
    """Solve (-Lap + 1) v = psi on the balls B_{R_k} with v(R_k) = 0.

    The pole condition v'(0+) = 0 enters through a reflecting closure at
    the first node (t ~ 1e-5).  Each level is solved twice, on the level
    mesh and on its bisection, and combined by Richardson extrapolation;
    the bisected mesh also carries the Simpson rule for the L^p norms.
    psi must be nonnegative and (unless require_support is False, the
    whole-space test mode) supported inside the smallest radius.
    """
    radii = [float(R) for R in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ConfigurationError(f"radii must be strictly increasing, got {radii}")
    if radii[0] <= 10.0 * _POLE_T0:
        raise ConfigurationError(f"smallest radius {radii[0]:g} is too close to the pole")
    if radii[-1] > M.t_grid_max * (1.0 + 1e-12):
        raise RangeError(
            f"largest radius {radii[-1]:g} exceeds the tabulated grid "
            f"(ends at {M.t_grid_max:g})"
        )
    for p in p_list:
        if not p >= 1.0:
            raise ConfigurationError(f"norm exponents must satisfy p >= 1, got {p!r}")
    s0, s1 = psi.support
    _check_nonnegative(psi, s0, min(s1, radii[-1]), "source")
    if require_support and s1 > radii[0] * (1.0 + 1e-9):
        raise PreconditionError(
            f"source support ends at {s1:g}, beyond the smallest radius "
            f"{radii[0]:g}"
        )

    taus, dtau = _tau_grid(M, radii[-1], mesh_points)
    tau_meshes, meshes, values, rich = [], [], [], []
    norms = {float(p): [] for p in p_list}
    sup_norms = []
    grad_const = {}
    for R in radii:
        mesh_tau = _level_taus(taus, dtau, radii, R)
        fine_tau = _bisect(mesh_tau)
        mesh_t = np.exp(mesh_tau)
        fine_t = np.exp(fine_tau)
        vc = _solve_level(M, mesh_tau, _plain_values(psi, mesh_t))
        vf = _solve_level(M, fine_tau, _plain_values(psi, fine_t))
        v_star = (4.0 * vf[0::2] - vc) / 3.0
        v_star[-1] = 0.0
        sup = float(np.max(np.abs(vf)))
        rich.append(float(np.max(np.abs(vf[0::2] - vc))) / max(sup, 1e-300))
        weights = _simpson_weights(fine_tau)
        for p in p_list:
            norms[float(p)].append(
                _nodal_lp(M, fine_tau, weights, vf, float(p)))
        sup_norms.append(sup)
        tau_meshes.append(mesh_tau)
        meshes.append(mesh_t)
        values.append(v_star)
        if R == radii[-1]:
            dv = np.gradient(vf, fine_t)
            resid = vf - _plain_values(psi, fine_t)
            for q in p_list:
                if 1.0 < q <= 2.0:
                    denom = (_nodal_lp(M, fine_tau, weights, vf, float(q))
                             + _nodal_lp(M, fine_tau, weights, resid, float(q)))
                    grad_const[float(q)] = (
                        _nodal_lp(M, fine_tau, weights, dv, float(q))
                        / max(denom, 1e-300)
                    )

    scale = max(sup_norms[-1], 1e-300)
    defect = 0.0
    conv_gap = 0.0
    for k in range(len(radii) - 1):
        idx = np.searchsorted(tau_meshes[k + 1], tau_meshes[k])
        idx = np.clip(idx, 0, len(tau_meshes[k + 1]) - 1)
        if not np.array_equal(tau_meshes[k + 1][idx], tau_meshes[k]):
            raise SolverError("level meshes failed to nest; spacing rules drifted")
        diff = values[k] - values[k + 1][idx]
        defect = max(defect, float(np.max(diff)) / scale)
        gap = float(np.max(np.abs(diff)))
        beyond = values[k + 1][idx[-1]:]
        conv_gap = max(gap, float(np.max(np.abs(beyond)))) / scale
    converged = len(radii) > 1 and conv_gap < 1e-8

    psi_norms = None
    if require_support:
        psi_norms = {float(p): lp_norm(M, psi, float(p)) for p in p_list}
        ts = np.linspace(max(s0, _POLE_T0), min(s1, radii[-1]), 4097)
        psi_norms["sup"] = float(np.max(np.abs(_plain_values(psi, ts))))

    return ExhaustionSolution(
        radii=tuple(radii),
        meshes=meshes,
        values=values,
        norms=norms,
        sup_norms=sup_norms,
        psi_norms=psi_norms,
        richardson_gaps=rich,
        monotone_defect=defect,
        convergence_gap=conv_gap,
        converged=converged,
        gradient_constants=grad_const,
        label=f"exhaustion[{psi.label},K={len(radii)}]",
    )


def exterior_eigenfunction(M: ModelManifold, r0: float) -> RadialFunction:
    """Decaying positive solution of v'' + (n-1) w v' = v on [r0, t_max],
    normalized to v(r0) = 1.

    The logarithmic slope s = v'/v solves s' = 1 - (n-1) w s - s^2 and is
    integrated backward from the attracting root at the far end of the
    grid; backward integration contracts seed error exponentially.  log v
    then accumulates by per-panel Gauss quadrature of the slope table.
    """
    if not (M.t[0] < r0 < 0.9 * M.t_grid_max):
        raise RangeError(
            f"r0 = {r0!r} outside the usable grid "
            f"({M.t[0]:g}, {0.9 * M.t_grid_max:g})"
        )
    i0 = int(np.searchsorted(M.t, r0 * (1.0 + 1e-12), side="right")) - 1
    ts = M.t[i0:]
    nm1 = M.n - 1.0

    bT = nm1 * float(M.w_at(ts[-1]))
    s_end = -0.5 * (bT + np.sqrt(bT * bT + 4.0))
    assert np.isfinite(s_end) and s_end < 0.0

    def rhs(tau, s):
        t = np.exp(tau)
        return t * (1.0 - nm1 * M.w_at(t) * s[0] - s[0] * s[0])

    def jac(tau, s):
        t = np.exp(tau)
        return np.array([[t * (-nm1 * M.w_at(t) - 2.0 * s[0])]])

    taus = np.log(ts)
    sol = solve_ivp(
        rhs, (taus[-1], taus[0]), [s_end], method="LSODA",
        t_eval=taus[::-1], rtol=min(max(M.tol, 1e-13), 1e-9),
        atol=1e-13 * max(1.0, -s_end), jac=jac,
    )
    if not sol.success:
        raise SolverError(f"slope integration failed: {sol.message}")
    s_nodes = sol.y[0][::-1]
    ds_nodes = 1.0 - nm1 * M.w_at(ts) * s_nodes - s_nodes * s_nodes
    s_table = HermiteTable(ts, s_nodes, ds_nodes)

    # log v by 4-point Gauss per panel, in tau so ds/dt integrates as s e^tau
    mid = 0.5 * (taus[:-1] + taus[1:])
    half = 0.5 * (taus[1:] - taus[:-1])
    panels = np.zeros(len(ts) - 1)
    for x, wgt in zip(_GL_X, _GL_W):
        tg = np.exp(mid + half * x)
        panels += wgt * s_table(tg) * tg
    panels *= half
    logv = np.concatenate([[0.0], np.cumsum(panels)])
    l_table = HermiteTable(ts, logv, s_nodes)
    l0 = float(l_table(r0))

    lo, hi = float(r0), float(M.t_grid_max)

    def coeff(t, nu):
        t_in = np.asarray(t, dtype=float)
        t = np.atleast_1d(t_in)
        inside = (t >= lo * (1.0 - 1e-12)) & (t <= hi * (1.0 + 1e-12))
        out = np.zeros_like(t)
        if np.any(inside):
            ti = np.clip(t[inside], ts[0], ts[-1])
            if nu == 0:
                out[inside] = 1.0
            elif nu == 1:
                out[inside] = s_table(ti)
            else:
                sv = s_table(ti)
                out[inside] = s_table(ti, 1) + sv * sv
        return out if t_in.ndim else out[0]

    def log_scale(t):
        t_in = np.asarray(t, dtype=float)
        t = np.atleast_1d(t_in)
        out = l_table(np.clip(t, ts[0], ts[-1])) - l0
        return out if t_in.ndim else float(out[0])

    return RadialFunction(
        coeff=coeff,
        log_scale=log_scale,
        support=(lo, hi),
        label=f"exterior_eig[r0={r0:g}]",
    )


def li_yau_ratio(M: ModelManifold, v: RadialFunction, lam, R: float,
                 gamma: float, samples: int = 2049) -> float:
    """sup over [R, gamma R] of |v'| / (lambda(R) v) for a positive radial
    function v; lam = (a, k) selects the slow-growth profile."""
    a, k = lam
    if not gamma > 1.0:
        raise ConfigurationError(f"gamma must exceed 1, got {gamma!r}")
    s0, s1 = v.support
    if R < s0 * (1.0 - 1e-12) or gamma * R > s1 * (1.0 + 1e-12):
        raise RangeError(
            f"annulus [{R:g}, {gamma * R:g}] outside the domain "
            f"({s0:g}, {s1:g}) of {v.label}"
        )
    lam_R = float(lambda_profile(a, k, R))
    if not lam_R > 0.0:
        raise ConfigurationError(f"lambda profile not positive at R = {R:g}")
    ts = np.geomspace(R, gamma * R, samples)
    c0 = np.asarray(v.coeff(ts, 0), dtype=float)
    c1 = np.asarray(v.coeff(ts, 1), dtype=float)
    if np.any(c0 <= 0.0):
        raise PreconditionError(f"{v.label} is not positive on the annulus")
    return float(np.max(np.abs(c1) / c0) / lam_R)


@dataclass(frozen=True)
class StochasticReport:
    """Doubling-test outcome for the mass function u(T) = int_0^T y dt."""

    classification: str
    tail_ratios: tuple
    u_samples: tuple          # ((T, u(T)), ...) at the three test radii
    laplacian_residual: float
    tol: float
    delta: float

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "tail_ratios": [float(r) for r in self.tail_ratios],
            "u_samples": [[float(T), float(u)] for T, u in self.u_samples],
            "laplacian_residual": float(self.laplacian_residual),
            "tol": float(self.tol),
            "delta": float(self.delta),
        }


def classify_stochastic_completeness(
    M: ModelManifold, tol: float = 0.10, delta: float = 0.12
) -> StochasticReport:
    """Classify the model by the growth of u(T) = int_0^T y dt.

    u solves Lap u = 1 exactly, so u(T) tracks the mass the heat flow can
    spread by time ~T.  If the last two doublings of T each add less than
    tol * u(T), u is Cauchy and the verdict is incomplete; if each doubling
    grows u by at least delta * u(T), the verdict is complete; anything in
    between is inconclusive.  The Laplacian identity is rechecked by finite
    differences of the tabulated y as an independent residual.
    """
    if M.t_grid_max < 100.0 * (1.0 - 1e-9):
        raise PreconditionError(
            f"classification needs the grid to reach 100, got {M.t_grid_max:g}"
        )
    ts = M.t
    taus = np.log(ts)
    mid = 0.5 * (taus[:-1] + taus[1:])
    half = 0.5 * (taus[1:] - taus[:-1])
    panels = np.zeros(len(ts) - 1)
    for x, wgt in zip(_GL_X, _GL_W):
        tg = np.exp(mid + half * x)
        panels += wgt * M.y_at(tg) * tg
    panels *= half
    u = np.concatenate([[0.0], np.cumsum(panels)]) + 0.5 * M.y[0] * ts[0]

    dtau = taus[1] - taus[0]
    steps = int(round(np.log(2.0) / dtau))
    i2 = len(ts) - 1
    i1 = i2 - steps
    i0 = i1 - steps
    if i0 <= 4:
        raise PreconditionError("grid too short for two tail doublings")
    r1 = (u[i1] - u[i0]) / u[i0]
    r2 = (u[i2] - u[i1]) / u[i1]

    dy, _ = fd5_loggrid(ts, M.y)
    w_in = M.w[2:-2]
    resid = float(np.max(np.abs(dy + (M.n - 1.0) * w_in * M.y[2:-2] - 1.0)))

    if r1 < tol and r2 < tol:
        verdict = "incomplete"
    elif r1 >= delta and r2 >= delta:
        verdict = "complete"
    else:
        verdict = "inconclusive"
    return StochasticReport(
        classification=verdict,
        tail_ratios=(float(r1), float(r2)),
        u_samples=((float(ts[i0]), float(u[i0])),
                   (float(ts[i1]), float(u[i1])),
                   (float(ts[i2]), float(u[i2]))),
        laplacian_residual=resid,
        tol=tol,
        delta=delta,
    )


def _log_interp(mesh: np.ndarray, vals: np.ndarray):
    """Piecewise-linear interpolant of log |vals|.  Zeros and subnormal
    junk map to -1e9, which any realistic volume weight cannot cancel."""
    with np.errstate(divide="ignore"):
        lg = np.log(np.abs(vals))
    lg = np.where(lg > _LOG_FLOOR, lg, -1e9)

    def at(t):
        return np.interp(t, mesh, lg)

    return at


def positivity_probe(
    M: ModelManifold,
    mu: RadialFunction,
    p: float,
    R_probe: float,
    psi: Optional[RadialFunction] = None,
    sweep_doublings: int = 3,
    quadrature_tol: float = 1e-10,
) -> InequalityReport:
    """Sign preservation of (-Lap + 1)^{-1} plus the cutoff pairing sweep.

    Solves (-Lap + 1) u = mu and checks min u >= -1e-8 sup u.  With v the
    solve for psi (default: psi = mu) and chi_R the polynomial cutoffs, the
    identity

        int chi u psi = int mu v chi + 2 int u v' chi' + int u v (Lap chi)

    holds for every R; the probe reports the gradient and Laplacian terms
    over R, 2R, 4R, ..., asserting both fade below 1e-3 of the limiting
    pairing int u psi, so the boundary terms of the pairing argument are
    negligible in the limit.  Products are accumulated in log space because
    u, v and the volume weight individually overflow where their product is
    negligible.
    """
    s0, s1 = mu.support
    _check_nonnegative(mu, s0, s1, "probe source")
    if psi is None:
        psi = mu
    sweep = [R_probe * 2.0 ** i for i in range(sweep_doublings + 1)]
    if 2.0 * sweep[-1] > M.t_grid_max * (1.0 + 1e-12):
        raise RangeError(
            f"pairing sweep needs the grid to reach {2.0 * sweep[-1]:g}, "
            f"got {M.t_grid_max:g}"
        )
    R_dom = 0.998 * M.t_grid_max
    sol_u = solve_dirichlet_exhaustion(M, mu, [R_dom], p_list=(max(p, 1.0),))
    sol_v = sol_u if psi is mu else solve_dirichlet_exhaustion(
        M, psi, [R_dom], p_list=(max(p, 1.0),))
    mesh = sol_u.meshes[0]
    u = sol_u.values[0]
    v = sol_v.values[0]
    sup_u = float(np.max(np.abs(u)))
    min_u = float(np.min(u))
    min_ok = min_u >= -1e-8 * sup_u

    log_u = _log_interp(mesh, u)
    log_v = _log_interp(mesh, v)
    dv = np.gradient(v, mesh)
    log_vp = _log_interp(mesh, dv)

    def dvol(t):
        return (M.n - 1.0) * M.logj_at(t) + sphere_area_log(M.n)

    def f_target(t):
        return np.exp(log_u(t) + dvol(t)) * _plain_values(psi, t)

    q0, q1 = max(psi.support[0], _POLE_T0), min(psi.support[1], R_dom)
    target = float(integrate_family([f_target], q0, q1,
                                    rel_tol=quadrature_tol).values[0])

    records = []
    for R in sweep:
        chi = make_hessian_cutoff(M, R)

        def f_source(t, chi=chi):
            return np.exp(log_u(t) + dvol(t)) * _plain_values(psi, t) \
                * chi.coeff(t, 0)

        def f_grad(t, chi=chi):
            return 2.0 * np.exp(log_u(t) + log_vp(t) + dvol(t)) \
                * np.abs(chi.coeff(t, 1))

        def f_lap(t, chi=chi):
            lap = chi.coeff(t, 2) + (M.n - 1.0) * M.w_at(t) * chi.coeff(t, 1)
            return np.exp(log_u(t) + log_v(t) + dvol(t)) * lap

        fam = integrate_family([f_grad, f_lap], R, 2.0 * R,
                               rel_tol=quadrature_tol, abs_tol=1e-300)
        t_source = float(integrate_family([f_source], q0, q1,
                                          rel_tol=quadrature_tol).values[0])
        t_grad = float(fam.values[0])
        t_lap = float(fam.values[1])
        records.append({
            "label": f"R={R:g}",
            "source_term": t_source,
            "gradient_term": t_grad,
            "laplacian_term": t_lap,
            "total": t_source - t_grad - t_lap,
        })

    grads = np.array([abs(r["gradient_term"]) for r in records])
    laps = np.array([abs(r["laplacian_term"]) for r in records])
    totals = np.array([r["total"] for r in records])
    if target == 0.0:
        ok = bool(np.all(grads == 0.0) and np.all(laps == 0.0)
                  and np.all(totals == 0.0))
    else:
        ok = (grads[-1] <= 1e-3 * target
              and laps[-1] <= 1e-3 * target
              and grads[-1] <= 0.5 * max(grads[0], 1e-300)
              and laps[-1] <= 0.5 * max(laps[0], 1e-300)
              and abs(totals[-1] - target) <= 2e-3 * target)
    verdict = "holds" if (ok and min_ok) else "violated"
    worst = 0.0 if target == 0.0 else float(
        max(grads[-1], laps[-1]) / target)
    return InequalityReport(
        name="positivity",
        p=float(p),
        beta=None,
        epsilon=None,
        records=records,
        sharp_constant=None,
        empirical_constant=worst,
        verdict=verdict,
        quadrature_tol=quadrature_tol,
        extra={
            "target": target,
            "min_u": min_u,
            "sup_u": sup_u,
            "sweep": [float(R) for R in sweep],
            "solve": sol_u.to_dict(),
        },
    )
