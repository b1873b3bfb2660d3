"""Cutoff families with certified derivative bounds.

Two constructions.  The Hessian cutoff chi_R(t) = S(2 - t/R), with S the
clamped quintic smoothstep, equals 1 on [0, R], vanishes beyond 2R, and has
exact radial derivative bounds sup|chi'| = (15/8)/R and sup|chi''| =
(10/sqrt(3))/R^2.  The Laplacian cutoff reparametrizes the transition region
by the antiderivative of 1/lambda for the slow-growth family lambda(t) =
a t log t ... log^[k] t, which keeps |grad chi| lambda(R) and, on matched
profiles, |Lap chi| uniformly bounded as R grows.

Certificates are scale-free combinations sampled over the transition
annulus; on a profile kappa ~ t^beta the Hessian certificate pairs with the
weight exponent beta so that sup|Hess chi_R| R^{1 - beta/2} stays bounded.
"""

from __future__ import annotations

import numpy as np

from .curvature import lambda_antiderivative, lambda_profile, lambda_profile_d1
from .errors import ConfigurationError, RangeError
from .geometry import ModelManifold
from .numerics import smoothstep, smoothstep_d1, smoothstep_d2
from .radial import RadialFunction, _zero_like

__all__ = [
    "make_hessian_cutoff",
    "certify_cutoff",
    "make_laplacian_cutoff",
]


def make_hessian_cutoff(M: ModelManifold, R: float) -> RadialFunction:
    """Pole-regular cutoff chi_R = S(2 - t/R): 1 on [0, R], 0 beyond 2R."""
    if not R > 0.0:
        raise ConfigurationError(f"cutoff radius must be positive, got {R!r}")
    if 2.0 * R > M.t_grid_max * (1.0 + 1e-12):
        raise RangeError(
            f"cutoff transition [{R:g}, {2.0 * R:g}] leaves the tabulated grid "
            f"(ends at {M.t_grid_max:g})"
        )
    R = float(R)

    def coeff(t, nu):
        x = 2.0 - np.asarray(t, dtype=float) / R
        if nu == 0:
            return smoothstep(x)
        if nu == 1:
            return -smoothstep_d1(x) / R
        return smoothstep_d2(x) / (R * R)

    return RadialFunction(
        coeff=coeff,
        log_scale=_zero_like,
        support=(0.0, 2.0 * R),
        label=f"hessian_cutoff[R={R:g}]",
    )


def certify_cutoff(M: ModelManifold, chi: RadialFunction, beta: float) -> tuple:
    """Scale-free certificates (sup|grad chi| R, sup|Hess chi| R^{1-beta/2}).

    chi must come from make_hessian_cutoff, so its transition annulus is
    [R, 2R] with R = support[1]/2.  The Hessian norm of a radial function is
    sqrt(chi''^2 + (n-1)(w chi')^2); both sups are sampled on a dense uniform
    grid that contains the interior maximum of |chi'| exactly.
    """
    s1 = chi.support[1]
    if s1 > M.t_grid_max * (1.0 + 1e-12):
        raise RangeError("cutoff support leaves the tabulated grid")
    R = 0.5 * s1
    ts = np.linspace(R, s1, 4097)
    g = np.abs(chi.coeff(ts, 1))
    c2 = chi.coeff(ts, 2)
    hess = np.sqrt(c2 * c2 + (M.n - 1.0) * (M.w_at(ts) * g) ** 2)
    return float(np.max(g)) * R, float(np.max(hess)) * R ** (1.0 - 0.5 * beta)


def make_laplacian_cutoff(
    M: ModelManifold,
    R: float,
    gamma: float = 2.0,
    a: float = 1.0,
    k: int = 0,
) -> tuple:
    """Cutoff adapted to the slow-growth profile lambda(t) = a t ... log^[k] t.

    chi_R(t) = S(1 - h(t)/H_R) with h(t) = int_R^t ds/lambda(s) evaluated in
    closed form (the antiderivative is log^[k+1](t)/a), so chi_R is 1 on
    [0, R] and 0 beyond gamma R.  Returns (chi, certificates) where the
    certificates record sup|grad chi| lambda(R) and sup|Lap chi| over the
    transition annulus together with the transition mass H_R.

    Raises ConfigurationError when H_R falls below 1e-6 (transition too thin
    to resolve) and RangeError when gamma R leaves the grid.
    """
    if not gamma > 1.0:
        raise ConfigurationError(f"gamma must exceed 1, got {gamma!r}")
    if not R > 0.0:
        raise ConfigurationError(f"cutoff radius must be positive, got {R!r}")
    if gamma * R > M.t_grid_max * (1.0 + 1e-12):
        raise RangeError(
            f"cutoff transition [{R:g}, {gamma * R:g}] leaves the tabulated grid "
            f"(ends at {M.t_grid_max:g})"
        )
    lam_R = float(lambda_profile(a, k, R))
    if not lam_R > 0.0:
        raise ConfigurationError(
            f"lambda profile (a={a:g}, k={k}) is not positive at R={R:g}"
        )
    anti_R = float(lambda_antiderivative(a, k, R))
    H = float(lambda_antiderivative(a, k, gamma * R)) - anti_R
    if not H >= 1e-6:
        raise ConfigurationError(
            f"transition mass H_R = {H:g} below 1e-6; widen gamma or lower R"
        )
    R = float(R)
    s1 = gamma * R

    def coeff(t, nu):
        t_in = np.asarray(t, dtype=float)
        t = np.atleast_1d(t_in)
        # h is only defined where lambda > 0; outside the transition the
        # clamped smoothstep gives the exact value anyway.
        inside = (t > R) & (t < s1)
        x = np.where(t <= R, 1.0, 0.0)
        if np.any(inside):
            ti = t[inside]
            x[inside] = 1.0 - (lambda_antiderivative(a, k, ti) - anti_R) / H
        if nu == 0:
            out = smoothstep(x)
        else:
            lam = np.ones_like(x)
            if np.any(inside):
                lam[inside] = lambda_profile(a, k, t[inside])
            if nu == 1:
                out = -smoothstep_d1(x) / (H * lam)
            else:
                d1 = np.zeros_like(x)
                if np.any(inside):
                    d1[inside] = lambda_profile_d1(a, k, t[inside])
                out = smoothstep_d2(x) / (H * lam) ** 2 + smoothstep_d1(x) * d1 / (
                    H * lam * lam
                )
        return out if t_in.ndim else out[0]

    chi = RadialFunction(
        coeff=coeff,
        log_scale=_zero_like,
        support=(0.0, s1),
        label=f"laplacian_cutoff[R={R:g},gamma={gamma:g},a={a:g},k={k}]",
    )

    ts = np.linspace(R, s1, 4097)
    grad = np.abs(chi.coeff(ts, 1))
    lap = np.abs(chi.coeff(ts, 2) + (M.n - 1.0) * M.w_at(ts) * chi.coeff(ts, 1))
    certificates = {
        "grad_times_lambda": float(np.max(grad)) * lam_R,
        "sup_laplacian": float(np.max(lap)),
        "transition_mass": H,
        "lambda_at_R": lam_R,
    }
    return chi, certificates
