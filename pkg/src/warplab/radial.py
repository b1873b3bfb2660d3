"""Radial test functions and their calculus on a model manifold.

A radial function is stored in factored form f = c(t) e^{E(t)} with explicit
evaluators for the first two derivative coefficients: f' = c1 e^E and
f'' = c2 e^E where c1 = c' + c E' and c2 = c'' + 2 c' E' + c (E'' + E'^2).
Plain bumps have E = 0; members built from Green functions or the warped
volume carry exponents of order hundreds, and keeping them symbolic lets
norm integrands combine exponents analytically before a single exp call,
which is what keeps Hardy ratios finite when e^E alone would underflow and
the volume factor alone would overflow.

Norms use the warped measure dV = |S^{n-1}| e^{(n-1) logj} dt; the Hessian
of a radial function has eigenvalues f'' (radial) and w f' (spherical), so
|Hess f|^2 = f''^2 + (n-1) (w f')^2 and the Laplacian is f'' + (n-1) w f'.

The corpus generator draws each member from an independent per-index random
stream, so corpora with the same seed agree member-by-member regardless of
size (prefix stability), and regeneration is exactly reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConfigurationError,
    ConstructionError,
    DomainError,
    RangeError,
)
from .geometry import ModelManifold, sphere_area_log
from .green import GreenFunction
from .numerics import smoothstep, smoothstep_d1, smoothstep_d2
from .quadrature import integrate_family


@dataclass(frozen=True)
class RadialFunction:
    """Factored radial function c(t) e^{E(t)} with C^2 compact support.

    coeff(t, nu) returns c_nu(t) with f^{(nu)} = c_nu e^E for nu in {0,1,2};
    log_scale(t) returns E(t).  Both accept and return numpy arrays.  The
    coefficients vanish at and outside the support endpoints, except that a
    left endpoint of 0 marks pole-regular members (cutoffs equal to 1 near
    the pole), which only vanish at the right endpoint.
    """

    coeff: Callable
    log_scale: Callable
    support: tuple
    label: str

    def __call__(self, t, nu: int = 0):
        t_arr = np.asarray(t, dtype=float)
        out = self.coeff(t_arr, nu) * np.exp(self.log_scale(t_arr))
        return float(out) if np.isscalar(t) else out


def _zero_like(t):
    return np.zeros_like(np.asarray(t, dtype=float))


def _window(t, s0, lo, hi, s1, nu):
    """C^2 plateau window: 0 off [s0, s1], 1 on [lo, hi], quintic ramps."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    ramp_lo = lo - s0
    ramp_hi = s1 - hi
    rise = (t > s0) & (t < lo)
    fall = (t > hi) & (t < s1)
    if nu == 0:
        out[(t >= lo) & (t <= hi)] = 1.0
        if ramp_lo > 0.0:
            out[rise] = smoothstep((t[rise] - s0) / ramp_lo)
        if ramp_hi > 0.0:
            out[fall] = smoothstep((s1 - t[fall]) / ramp_hi)
    elif nu == 1:
        if ramp_lo > 0.0:
            out[rise] = smoothstep_d1((t[rise] - s0) / ramp_lo) / ramp_lo
        if ramp_hi > 0.0:
            out[fall] = -smoothstep_d1((s1 - t[fall]) / ramp_hi) / ramp_hi
    elif nu == 2:
        if ramp_lo > 0.0:
            out[rise] = smoothstep_d2((t[rise] - s0) / ramp_lo) / ramp_lo**2
        if ramp_hi > 0.0:
            out[fall] = smoothstep_d2((s1 - t[fall]) / ramp_hi) / ramp_hi**2
    else:
        raise DomainError(f"derivative order must be 0, 1 or 2, got {nu!r}")
    return out


def _check_window(lo, hi, ramp_lo, ramp_hi):
    if not (ramp_lo > 0.0 and ramp_hi > 0.0 and lo - ramp_lo >= 0.0 and hi > lo):
        raise ConstructionError(
            f"invalid plateau window lo={lo!r} hi={hi!r} "
            f"ramps=({ramp_lo!r}, {ramp_hi!r})"
        )


def smooth_plateau(
    lo: float,
    hi: float,
    ramp_lo: float,
    ramp_hi: float,
    amplitude: float = 1.0,
    oscillations: int = 0,
    label: Optional[str] = None,
) -> RadialFunction:
    """Bump equal to amplitude on [lo, hi], C^2 ramps, optional modulation.

    oscillations = q modulates by cos of q full periods across the support,
    exploring the second-derivative-dominant regime of the inequalities.
    """
    _check_window(lo, hi, ramp_lo, ramp_hi)
    s0, s1 = lo - ramp_lo, hi + ramp_hi
    om = 2.0 * math.pi * oscillations / (s1 - s0) if oscillations else 0.0

    def coeff(t, nu):
        t = np.asarray(t, dtype=float)
        if not oscillations:
            return amplitude * _window(t, s0, lo, hi, s1, nu)
        ph = om * (t - s0)
        c, s = np.cos(ph), np.sin(ph)
        w0 = _window(t, s0, lo, hi, s1, 0)
        if nu == 0:
            return amplitude * w0 * c
        w1 = _window(t, s0, lo, hi, s1, 1)
        if nu == 1:
            return amplitude * (w1 * c - w0 * om * s)
        w2 = _window(t, s0, lo, hi, s1, 2)
        return amplitude * (w2 * c - 2.0 * w1 * om * s - w0 * om * om * c)

    if label is None:
        label = (
            f"plateau[lo={lo:.6g},hi={hi:.6g},ramps=({ramp_lo:.6g},{ramp_hi:.6g}),"
            f"a={amplitude:.6g},q={oscillations}]"
        )
    return RadialFunction(coeff=coeff, log_scale=_zero_like, support=(s0, s1), label=label)


def smooth_bump(
    center: float,
    half_width: float,
    amplitude: float = 1.0,
    oscillations: int = 0,
    plateau_frac: float = 0.5,
    label: Optional[str] = None,
) -> RadialFunction:
    """Symmetric plateau bump centered at center with support half_width."""
    if not (0.0 < plateau_frac < 1.0):
        raise ConstructionError(f"plateau_frac must lie in (0,1), got {plateau_frac!r}")
    ramp = (1.0 - plateau_frac) * half_width
    if label is None:
        label = (
            f"bump[c={center:.6g},h={half_width:.6g},a={amplitude:.6g},"
            f"q={oscillations}]"
        )
    return smooth_plateau(
        center - plateau_frac * half_width,
        center + plateau_frac * half_width,
        ramp,
        ramp,
        amplitude,
        oscillations,
        label=label,
    )


def zero_function(support=(1.0, 2.0)) -> RadialFunction:
    return RadialFunction(
        coeff=lambda t, nu: _zero_like(t),
        log_scale=_zero_like,
        support=(float(support[0]), float(support[1])),
        label="zero",
    )


def windowed_power(
    exponent: float,
    lo: float,
    hi: float,
    ramp_lo: float,
    ramp_hi: float,
    scale: float = 1.0,
    label: Optional[str] = None,
) -> RadialFunction:
    """scale * t^exponent on [lo, hi], brought to zero by C^2 ramps."""
    _check_window(lo, hi, ramp_lo, ramp_hi)
    if not lo - ramp_lo > 0.0:
        raise ConstructionError("power profile needs support away from t = 0")
    s0, s1 = lo - ramp_lo, hi + ramp_hi
    e = float(exponent)

    def coeff(t, nu):
        t = np.asarray(t, dtype=float)
        ts = np.where(t > 0.0, t, 1.0)  # windows vanish at t <= 0 anyway
        p0 = scale * ts**e
        w0 = _window(t, s0, lo, hi, s1, 0)
        if nu == 0:
            return p0 * w0
        p1 = e * p0 / ts
        w1 = _window(t, s0, lo, hi, s1, 1)
        if nu == 1:
            return p1 * w0 + p0 * w1
        p2 = e * (e - 1.0) * p0 / (ts * ts)
        w2 = _window(t, s0, lo, hi, s1, 2)
        return p2 * w0 + 2.0 * p1 * w1 + p0 * w2

    if label is None:
        label = f"power[e={e:.6g},lo={lo:.6g},hi={hi:.6g},s={scale:.6g}]"
    return RadialFunction(coeff=coeff, log_scale=_zero_like, support=(s0, s1), label=label)


def warped_tail(
    M: ModelManifold,
    p: float,
    gamma: float,
    lo: float,
    hi: float,
    ramp_lo: float,
    ramp_hi: float,
    scale: float = 1.0,
    label: Optional[str] = None,
) -> RadialFunction:
    """Slow-decay W^{2,p} surrogate t^{-gamma} e^{-(n-1) logj / p} on a window.

    The exponential factor cancels the volume growth in |f|^p dV, leaving a
    t^{-gamma p} dt tail, so the function lies in W^{2,p} with norms
    dominated by the outer region; it plays the unbounded-support role in
    density probes while living on the finite grid.
    """
    _check_window(lo, hi, ramp_lo, ramp_hi)
    if not lo - ramp_lo > 0.0:
        raise ConstructionError("tail profile needs support away from t = 0")
    s0, s1 = lo - ramp_lo, hi + ramp_hi
    q = (M.n - 1.0) / float(p)

    def log_scale(t):
        t = np.asarray(t, dtype=float)
        inside = (t >= s0) & (t <= s1)
        out = np.zeros_like(t)
        if np.any(inside):
            out[inside] = -q * M.logj_at(t[inside])
        return out

    def coeff(t, nu):
        t = np.asarray(t, dtype=float)
        ts = np.where(t > 0.0, t, 1.0)
        m0 = scale * ts ** (-gamma)
        w0 = _window(t, s0, lo, hi, s1, 0)
        if nu == 0:
            return m0 * w0
        inside = (t >= s0) & (t <= s1)
        Ed1 = np.zeros_like(t)
        Ed2 = np.zeros_like(t)
        if np.any(inside):
            wi = M.w_at(t[inside])
            Ed1[inside] = -q * wi
            Ed2[inside] = -q * (M.kappa_at(t[inside]) - wi * wi)
        m1 = -gamma * m0 / ts
        w1 = _window(t, s0, lo, hi, s1, 1)
        c0 = m0 * w0
        c0d = m1 * w0 + m0 * w1
        if nu == 1:
            return c0d + c0 * Ed1
        m2 = gamma * (gamma + 1.0) * m0 / (ts * ts)
        w2 = _window(t, s0, lo, hi, s1, 2)
        c0dd = m2 * w0 + 2.0 * m1 * w1 + m0 * w2
        return c0dd + 2.0 * c0d * Ed1 + c0 * (Ed2 + Ed1 * Ed1)

    if label is None:
        label = f"tail[g={gamma:.6g},p={p:.6g},lo={lo:.6g},hi={hi:.6g}]"
    return RadialFunction(coeff=coeff, log_scale=log_scale, support=(s0, s1), label=label)


def _t_at_logG(G: GreenFunction, target: float) -> float:
    """Radius where log G crosses target (log G is strictly decreasing)."""
    logG = G.logG
    if not logG[0] >= target >= logG[-1]:
        raise RangeError(
            f"log G target {target:g} outside tabulated range "
            f"[{logG[-1]:g}, {logG[0]:g}]"
        )
    lo, hi = 0, len(logG) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if logG[mid] <= target:
            hi = mid
        else:
            lo = mid
    a, b = float(G.t[lo]), float(G.t[hi])
    for _ in range(80):
        mid = 0.5 * (a + b)
        if G.logG_at(mid) <= target:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


def green_power_profile(
    G: GreenFunction,
    exponent: float,
    u_lo: float,
    u_hi: float,
    ramp_lo: float,
    ramp_hi: float,
    amplitude: float = 1.0,
    label: Optional[str] = None,
) -> RadialFunction:
    """G^exponent truncated by a C^2 plateau in u = -log G coordinates.

    With exponent = (p-1)/p these are the near-extremal Hardy family: in the
    u variable the weighted Hardy ratio reduces to a one-dimensional problem
    whose plateau members approach the sharp constant from below as the
    window [u_lo, u_hi] widens.  exponent = 1 reproduces the Green function
    itself (p-harmonic on the plateau interior).
    """
    if not (ramp_lo > 0.0 and ramp_hi > 0.0 and u_hi > u_lo >= ramp_lo):
        raise ConstructionError(
            f"invalid u-window ({u_lo!r}, {u_hi!r}) with ramps "
            f"({ramp_lo!r}, {ramp_hi!r}); need 0 <= u_lo - ramp_lo"
        )
    v0, v1 = u_lo - ramp_lo, u_hi + ramp_hi
    s0 = _t_at_logG(G, -v0) if v0 > 0.0 else float(G.t[0])
    s1 = _t_at_logG(G, -v1)
    e = float(exponent)

    def u_of(t):
        return -G.logG_at(t)

    def log_scale(t):
        t = np.asarray(t, dtype=float)
        inside = (t >= s0) & (t <= s1)
        out = np.zeros_like(t)
        if np.any(inside):
            out[inside] = -e * u_of(t[inside])
        return out

    def coeff(t, nu):
        t = np.asarray(t, dtype=float)
        u = np.full_like(t, v1 + 1.0)  # off-support fill lands outside the window
        inside = (t >= s0) & (t <= s1)
        if np.any(inside):
            u[inside] = u_of(t[inside])
        w0 = amplitude * _window(u, v0, u_lo, u_hi, v1, 0)
        if nu == 0:
            return w0
        z = np.ones_like(t)
        zp = np.zeros_like(t)
        if np.any(inside):
            ti = t[inside]
            zi = G.z_at(ti)
            z[inside] = zi
            zp[inside] = -1.0 + G.m * G.M.w_at(ti) * zi
        du = 1.0 / z                      # u' = -(log G)' = 1/z
        d2u = -zp / (z * z)
        Ed1 = -e * du
        Ed2 = -e * d2u
        w1 = amplitude * _window(u, v0, u_lo, u_hi, v1, 1)
        c1 = w1 * du + w0 * Ed1
        if nu == 1:
            return c1
        w2 = amplitude * _window(u, v0, u_lo, u_hi, v1, 2)
        c0dd = w2 * du * du + w1 * d2u
        return c0dd + 2.0 * (w1 * du) * Ed1 + w0 * (Ed2 + Ed1 * Ed1)

    if label is None:
        label = (
            f"greenpow[e={e:.6g},u=({u_lo:.6g},{u_hi:.6g}),"
            f"ramps=({ramp_lo:.6g},{ramp_hi:.6g})]"
        )
    return RadialFunction(coeff=coeff, log_scale=log_scale, support=(s0, s1), label=label)


def multiply(f: RadialFunction, g: RadialFunction, label: Optional[str] = None) -> RadialFunction:
    """Pointwise product with product-rule coefficients; supports intersect."""
    s0 = max(f.support[0], g.support[0])
    s1 = min(f.support[1], g.support[1])
    if not s1 > s0:
        raise ConstructionError(
            f"empty support intersection of {f.label!r} and {g.label!r}"
        )

    def coeff(t, nu):
        if nu == 0:
            return f.coeff(t, 0) * g.coeff(t, 0)
        if nu == 1:
            return f.coeff(t, 1) * g.coeff(t, 0) + f.coeff(t, 0) * g.coeff(t, 1)
        return (
            f.coeff(t, 2) * g.coeff(t, 0)
            + 2.0 * f.coeff(t, 1) * g.coeff(t, 1)
            + f.coeff(t, 0) * g.coeff(t, 2)
        )

    def log_scale(t):
        return f.log_scale(t) + g.log_scale(t)

    return RadialFunction(
        coeff=coeff,
        log_scale=log_scale,
        support=(s0, s1),
        label=label if label is not None else f"({f.label})*({g.label})",
    )


def shift_scale(f: RadialFunction, factor: float, offset_label: str = "") -> RadialFunction:
    """factor * f with the same support."""

    def coeff(t, nu):
        return factor * f.coeff(t, nu)

    return replace(f, coeff=coeff, label=f"{factor:.6g}*({f.label}){offset_label}")


def derivative_consistency(f: RadialFunction, ts, h_frac: float = 0.02) -> float:
    """Worst ratio of finite-difference residual to its truncation budget.

    Centered differences act on the coefficient representation with the
    local e^E factored out, so the check is meaningful even where e^E is
    extreme.  The members are only C^2, so near plateau joins the second
    difference legitimately misses d2 by O(h * third-derivative jump); the
    budget estimates the local third and fourth derivative scales from the
    stored d2 samples, which keeps the ratio O(1) at joins while a wrong
    sign, factor, or term in the evaluators still produces a large value.
    Returns the max ratio over the samples; consistent evaluators stay
    below 1.  Points whose stencil cannot fit in the support are skipped.
    """
    s0, s1 = f.support
    worst = 0.0
    for t in np.atleast_1d(np.asarray(ts, dtype=float)):
        d0 = float(f.coeff(np.array([t]), 0)[0])
        d1 = float(f.coeff(np.array([t]), 1)[0])
        d2 = float(f.coeff(np.array([t]), 2)[0])
        r_feat = math.sqrt((abs(d0) + 1e-300) / (abs(d2) + 1e-300))
        h = h_frac * min(t - s0, s1 - t, max(1.0, abs(t)), max(r_feat, 1e-3))
        h = max(h, 1e-7 * max(1.0, abs(t)))
        if not (t - h > s0 and t + h < s1):
            continue
        E0 = float(f.log_scale(np.array([t]))[0])

        def at(tt, nu=0):
            return float(
                f.coeff(np.array([tt]), nu)[0]
                * math.exp(float(f.log_scale(np.array([tt]))[0]) - E0)
            )

        cm, cp = at(t - h), at(t + h)
        d2m, d2p = at(t - h, 2), at(t + h, 2)
        fd1 = (cp - cm) / (2.0 * h)
        fd2 = (cp - 2.0 * d0 + cm) / (h * h)
        m3 = (abs(d2p - d2) + abs(d2 - d2m)) / h
        m4 = abs(d2p - 2.0 * d2 + d2m) / (h * h)
        scale1 = max(abs(d1), abs(d0), 1e-12)
        scale2 = max(abs(d2), abs(d1), abs(d0), 1e-12)
        budget1 = 2.0 * h * h * m3 + 1e-8 * scale1 + 4e-16 * abs(d0) / h
        budget2 = 1.5 * h * m3 + 0.5 * h * h * m4 + 1e-8 * scale2 + 1.6e-15 * abs(d0) / (h * h)
        worst = max(worst, abs(fd1 - d1) / budget1, abs(fd2 - d2) / budget2)
    return worst


_DERIV_KINDS = ("value", "gradient", "hessian", "laplacian")


def _norm_integrand(M: ModelManifold, f: RadialFunction, p: float, deriv: str, weight=None):
    """Vectorized weight(t) |.|^p e^{p E + (n-1) logj + log|S|} integrand.

    The optional weight is an O(1)-representable plain factor; huge or tiny
    factors must instead enter through the function's log_scale so the
    exponents combine before the single exp call.
    """
    nm1 = M.n - 1.0
    log_sphere = sphere_area_log(M.n)

    def integrand(t):
        t = np.asarray(t, dtype=float)
        if deriv == "value":
            c = np.abs(f.coeff(t, 0))
        elif deriv == "gradient":
            c = np.abs(f.coeff(t, 1))
        elif deriv == "hessian":
            c1 = f.coeff(t, 1)
            c2 = f.coeff(t, 2)
            wc = M.w_at(t) * c1
            c = np.sqrt(c2 * c2 + nm1 * wc * wc)
        else:  # laplacian
            c = np.abs(f.coeff(t, 2) + nm1 * M.w_at(t) * f.coeff(t, 1))
        ex = p * f.log_scale(t) + nm1 * M.logj_at(t) + log_sphere
        out = c**p * np.exp(ex)
        if weight is not None:
            out = out * weight(t)
        return out

    return integrand


def _support_on_grid(M: ModelManifold, f: RadialFunction):
    s0, s1 = f.support
    if s1 > M.t_grid_max * (1.0 + 1e-12) or s1 <= 0.0:
        raise RangeError(
            f"support [{s0:g}, {s1:g}] of {f.label!r} leaves the grid "
            f"[{M.t[0]:g}, {M.t_grid_max:g}]"
        )
    return max(s0, float(M.t[0])), min(s1, M.t_grid_max)


def _guard_exponent(M: ModelManifold, f: RadialFunction, p: float, a: float, b: float):
    ts = np.exp(np.linspace(math.log(a), math.log(b), 129))
    ex = p * f.log_scale(ts) + (M.n - 1.0) * M.logj_at(ts) + sphere_area_log(M.n)
    top = float(np.max(ex))
    if top > 690.0:
        raise RangeError(
            f"norm integrand of {f.label!r} reaches exp({top:.0f}); "
            "shrink the support or t_max"
        )


def lp_norm(
    M: ModelManifold,
    f: RadialFunction,
    p: float,
    deriv: str = "value",
    rel_tol: float = 1e-10,
) -> float:
    """(integral of |.|^p dV)^{1/p} for the value, gradient, Hessian norm
    |Hess f| = sqrt(f''^2 + (n-1)(w f')^2), or Laplacian f'' + (n-1) w f'.
    """
    if deriv not in _DERIV_KINDS:
        raise DomainError(f"deriv must be one of {_DERIV_KINDS}, got {deriv!r}")
    if not p >= 1.0:
        raise DomainError(f"need p >= 1, got {p!r}")
    a, b = _support_on_grid(M, f)
    if not b > a:
        return 0.0
    _guard_exponent(M, f, p, a, b)
    res = integrate_family([_norm_integrand(M, f, p, deriv)], a, b, rel_tol=rel_tol)
    return float(max(res.values[0], 0.0)) ** (1.0 / p)


def laplacian_value(M: ModelManifold, f: RadialFunction, t) -> float:
    """Pointwise Laplacian f'' + (n-1) w f' (plain, unfactored value)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    val = (f.coeff(t_arr, 2) + (M.n - 1.0) * M.w_at(t_arr) * f.coeff(t_arr, 1)) * np.exp(
        f.log_scale(t_arr)
    )
    return float(val[0]) if np.isscalar(t) else val


def p_laplacian(M: ModelManifold, f: RadialFunction, p: float, t: float) -> float:
    """Radial p-Laplacian |f'|^{p-2} (f' (n-1) w + (p-1) f'') at a point.

    For p < 2 at a critical point f'(t) = 0 the prefactor |f'|^{p-2} is
    undefined; the singular case is flagged by returning NaN rather than
    raising, so sweeps can tabulate it.
    """
    if not p > 1.0:
        raise DomainError(f"need p > 1, got {p!r}")
    s0, s1 = f.support
    if not (s0 < t < s1):
        raise DomainError(f"t = {t:g} outside the open support ({s0:g}, {s1:g})")
    t_arr = np.array([float(t)])
    E = float(f.log_scale(t_arr)[0])
    d1 = float(f.coeff(t_arr, 1)[0]) * math.exp(E)
    d2 = float(f.coeff(t_arr, 2)[0]) * math.exp(E)
    w = float(M.w_at(t))
    if d1 == 0.0:
        if p < 2.0:
            return math.nan
        if p == 2.0:
            return d2 + (M.n - 1.0) * w * d1
        return 0.0
    return abs(d1) ** (p - 2.0) * (d1 * (M.n - 1.0) * w + (p - 1.0) * d2)


@dataclass(frozen=True)
class BumpDescriptor:
    kind: str
    center: float
    width: float
    amplitude: float
    oscillations: int


@dataclass
class TestCorpus:
    """Reproducible corpus request; families is filled by generate_corpus."""

    __test__ = False  # "test functions" in the analysis sense; not a test case

    seed: int
    size: int
    families: tuple = field(default=())


def corpus_descriptors(seed: int, size: int, window) -> tuple:
    """Deterministic bump descriptors inside window = (inner, outer).

    Member i is drawn from default_rng([seed, i]), so corpora sharing a seed
    agree on their common prefix.  Every third member oscillates.
    """
    inner, outer = float(window[0]), float(window[1])
    if not outer > inner * 1.1:
        raise ConfigurationError(
            f"support window [{inner:g}, {outer:g}] too narrow for a corpus"
        )
    lo, hi = math.log(inner * 1.02), math.log(outer / 1.02)
    span = hi - lo
    out = []
    for i in range(int(size)):
        rng = np.random.default_rng([int(seed), i])
        c = math.exp(lo + span * (0.08 + 0.84 * rng.random()))
        max_half = min(c - inner, outer - c)
        half = max_half * (0.35 + 0.6 * rng.random())
        amp = math.exp(math.log(0.5) + math.log(4.0) * rng.random())
        osc = int(rng.integers(1, 7)) if i % 3 == 2 else 0
        out.append(
            BumpDescriptor(
                kind="oscillatory" if osc else "plateau",
                center=c,
                width=half,
                amplitude=amp,
                oscillations=osc,
            )
        )
    return tuple(out)


def generate_corpus(
    corpus: TestCorpus,
    M: ModelManifold,
    inner_radius: float,
    green: Optional[GreenFunction] = None,
    outer_frac: float = 0.9,
    extremal_count: int = 4,
) -> list:
    """Realize the corpus as RadialFunctions supported in the feasible window.

    With a Green function attached, appends the near-extremal family: nested
    u-plateau members of green_power_profile with exponent (p-1)/p, widening
    toward the sharp Hardy constant.  Fills corpus.families as a side effect
    so the parameter list can be persisted and compared across runs.
    """
    outer = outer_frac * min(M.t_max, M.t_grid_max)
    if not outer > inner_radius * 1.1:
        raise ConfigurationError(
            f"empty feasible support window: inner {inner_radius:g}, outer {outer:g}"
        )
    desc = corpus_descriptors(corpus.seed, corpus.size, (inner_radius, outer))
    members = [
        smooth_bump(
            d.center,
            d.width,
            d.amplitude,
            d.oscillations,
            label=(
                f"{d.kind}{i:03d}[c={d.center:.6g},h={d.width:.6g},"
                f"a={d.amplitude:.6g},q={d.oscillations}]"
            ),
        )
        for i, d in enumerate(desc)
    ]
    if green is not None:
        u_in = -float(green.logG_at(max(inner_radius, green.r_K)))
        u_out = -float(green.logG_at(outer))
        if not u_out > 4.0 * max(u_in, 0.25):
            raise ConfigurationError(
                f"u-window [{u_in:g}, {u_out:g}] too narrow for the "
                "near-extremal family; enlarge t_max"
            )
        q = (green.p - 1.0) / green.p
        # Wide ramps: the one-dimensional reduction charges int |phi'|^p over
        # each ramp, so a ramp of width d costs O(d^{1-p}) and must grow with
        # the window for the plateau term to dominate at large p.
        span = 0.92 * u_out - u_in
        u1 = u_in + max(0.5, 0.06 * span)
        ramp_lo = 0.85 * (u1 - u_in)
        for jlev in range(extremal_count - 1, -1, -1):
            u2 = u1 + (0.92 * u_out - u1) * 0.5 ** jlev
            ramp_hi = min(0.35 * (u2 - u1) + 0.1, 0.95 * (u_out - u2))
            members.append(
                green_power_profile(
                    green,
                    q,
                    u1,
                    u2,
                    ramp_lo,
                    ramp_hi,
                    label=f"extremal[{extremal_count - 1 - jlev:d}]"
                    f"[u=({u1:.6g},{u2:.6g}),p={green.p:.6g}]",
                )
            )
        desc = desc + tuple(
            BumpDescriptor("extremal", 0.0, 0.0, 1.0, 0) for _ in range(extremal_count)
        )
    corpus.families = desc
    return members
