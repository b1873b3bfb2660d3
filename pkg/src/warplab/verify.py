"""Inequality verifiers pairing tabulated model data with adaptive quadrature.

Each operation integrates the competing sides of one functional inequality
over a shared panel mesh (quadrature.integrate_family), so the dominant
panel-level quadrature errors are correlated and cancel in the reported
ratios.  Results come back as an InequalityReport whose verdict compares the
worst empirical ratio with the sharp constant, allowing a slack of ten
quadrature tolerances; operations without a sharp constant are report-only
and never yield a failing verdict.

All integrands are assembled in factored form: mantissa combinations are
multiplied in ordinary arithmetic while every large or tiny exponential
factor (test-function scale, volume growth) is summed in log space first.
O(1)-representable weights such as (-log G)^{beta p} or bounded powers of t
enter as plain factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .curvature import Flat, PowerLaw
from .errors import ConfigurationError, PreconditionError
from .geometry import ModelManifold, sphere_area_log
from .green import GreenFunction
from .numerics import smoothstep
from .quadrature import integrate_family
from .radial import RadialFunction, _norm_integrand, warped_tail

__all__ = [
    "InequalityReport",
    "hardy_window",
    "verify_hardy",
    "verify_hardy2",
    "verify_weight_embedding",
    "verify_cz2",
    "density_probe",
]


@dataclass
class InequalityReport:
    """Outcome of one verification run.

    records holds one dict per test member (or per sweep radius) with at
    least label/lhs/rhs/ratio keys; empirical_constant is the worst ratio.
    verdict is "holds" or "violated" when a sharp constant is asserted and
    "report-only" otherwise; extra carries op-specific sweeps and fits.
    """

    name: str
    p: Optional[float]
    beta: Optional[float]
    epsilon: Optional[tuple]
    records: list
    sharp_constant: Optional[float]
    empirical_constant: float
    verdict: str
    quadrature_tol: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "beta": self.beta,
            "epsilon": None if self.epsilon is None else list(self.epsilon),
            "records": [dict(r) for r in self.records],
            "sharp_constant": self.sharp_constant,
            "empirical_constant": self.empirical_constant,
            "verdict": self.verdict,
            "quadrature_tol": self.quadrature_tol,
            "extra": self.extra,
        }


def hardy_window(G: GreenFunction) -> tuple:
    """Admissible support window [r_K, 0.9 min(t_max, grid max)] for test members."""
    M = G.M
    return (G.r_K, 0.9 * min(M.t_max, M.t_grid_max))


def _require_supports(members: Sequence[RadialFunction], lo: float, hi: float, op: str):
    for f in members:
        s0, s1 = f.support
        if s0 < lo * (1.0 - 1e-9) or s1 > hi * (1.0 + 1e-9):
            raise PreconditionError(
                f"{op}: member {f.label!r} supported on [{s0:g}, {s1:g}] "
                f"leaves the admissible window [{lo:g}, {hi:g}]"
            )


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0.0:
        return lhs / rhs
    return 0.0 if lhs == 0.0 else math.inf


def _verdict(ratios, sharp: float, qtol: float) -> str:
    slack = sharp * (1.0 + 10.0 * qtol)
    return "holds" if all(r <= slack for r in ratios) else "violated"


def verify_hardy(
    M: ModelManifold,
    G: GreenFunction,
    p: float,
    beta: float,
    members: Sequence[RadialFunction],
    quadrature_tol: float = 1e-10,
) -> InequalityReport:
    """Weighted Hardy inequality against the sharp constant (p/(p-1))^p.

    For each member f the two sides

        lhs = int (1/z)^p u^{beta p} |f|^p dV,   u = -log G,
        rhs = int u^{beta p} |f'|^p dV,

    are integrated on a shared mesh over the member's support, which must lie
    inside the window [r_K, 0.9 t_max] where u >= 1 keeps the weight regular.
    """
    if not p > 1.0:
        raise ConfigurationError(f"verify_hardy needs p > 1, got {p!r}")
    if not beta >= 0.0:
        raise ConfigurationError(f"verify_hardy needs beta >= 0, got {beta!r}")
    lo, hi = hardy_window(G)
    _require_supports(members, lo, hi, "verify_hardy")
    sharp = (p / (p - 1.0)) ** p
    bp = beta * p

    records = []
    for f in members:
        def w_lhs(t):
            u = -G.logG_at(t)
            return (u**bp) / G.z_at(t) ** p

        def w_rhs(t):
            return (-G.logG_at(t)) ** bp

        fam = integrate_family(
            [
                _norm_integrand(M, f, p, "value", weight=w_lhs),
                _norm_integrand(M, f, p, "gradient", weight=w_rhs),
            ],
            f.support[0],
            f.support[1],
            rel_tol=quadrature_tol,
        )
        lhs, rhs = float(fam.values[0]), float(fam.values[1])
        r = _ratio(lhs, rhs)
        records.append(
            {
                "label": f.label,
                "lhs": lhs,
                "rhs": rhs,
                "ratio": r,
                "bound": sharp,
                "margin": sharp - r,
            }
        )

    ratios = [rec["ratio"] for rec in records]
    return InequalityReport(
        name="hardy",
        p=p,
        beta=beta,
        epsilon=None,
        records=records,
        sharp_constant=sharp,
        empirical_constant=max(ratios, default=0.0),
        verdict=_verdict(ratios, sharp, quadrature_tol),
        quadrature_tol=quadrature_tol,
    )


def verify_hardy2(
    M: ModelManifold,
    G: GreenFunction,
    p: float,
    beta: float,
    members: Sequence[RadialFunction],
    quadrature_tol: float = 1e-10,
) -> InequalityReport:
    """Second-order companion: Hardy left side against the full Hessian norm.

    Report-only; no sharp constant is asserted.  Each record also carries the
    two intermediate gradient integrals of the chained estimate

        lhs <= C_p int u^{beta p} |f'|^p dV
            <= C_p C_log int (1/z)^p |f'|^p dV <= C_p^2 C_log rhs,

    with C_p = (p/(p-1))^p and the fitted weight-comparison constant
    C_log = sup (u^beta z)^p over the member supports.
    """
    if not p > 1.0:
        raise ConfigurationError(f"verify_hardy2 needs p > 1, got {p!r}")
    if not beta >= 0.0:
        raise ConfigurationError(f"verify_hardy2 needs beta >= 0, got {beta!r}")
    lo, hi = hardy_window(G)
    _require_supports(members, lo, hi, "verify_hardy2")
    step = (p / (p - 1.0)) ** p
    bp = beta * p

    records = []
    c_log = 0.0
    for f in members:
        def w_lhs(t):
            u = -G.logG_at(t)
            return (u**bp) / G.z_at(t) ** p

        def w_u(t):
            return (-G.logG_at(t)) ** bp

        def w_z(t):
            return G.z_at(t) ** (-p)

        fam = integrate_family(
            [
                _norm_integrand(M, f, p, "value", weight=w_lhs),
                _norm_integrand(M, f, p, "hessian"),
                _norm_integrand(M, f, p, "gradient", weight=w_u),
                _norm_integrand(M, f, p, "gradient", weight=w_z),
            ],
            f.support[0],
            f.support[1],
            rel_tol=quadrature_tol,
        )
        lhs, rhs, mid_u, mid_z = (float(v) for v in fam.values)
        ts = np.geomspace(f.support[0], f.support[1], 257)
        member_clog = float(np.max(((-G.logG_at(ts)) ** beta * G.z_at(ts)) ** p))
        c_log = max(c_log, member_clog)
        records.append(
            {
                "label": f.label,
                "lhs": lhs,
                "rhs": rhs,
                "ratio": _ratio(lhs, rhs),
                "grad_weighted": mid_u,
                "grad_green": mid_z,
                "c_log": member_clog,
            }
        )

    ratios = [rec["ratio"] for rec in records]
    return InequalityReport(
        name="hardy2",
        p=p,
        beta=beta,
        epsilon=None,
        records=records,
        sharp_constant=None,
        empirical_constant=max(ratios, default=0.0),
        verdict="report-only",
        quadrature_tol=quadrature_tol,
        extra={"chain_step": step, "chain_bound": step * step * c_log, "c_log": c_log},
    )


def _weight_growth_limit(M: ModelManifold) -> float:
    if isinstance(M.profile, PowerLaw):
        return M.profile.alpha
    if isinstance(M.profile, Flat):
        return 0.0
    return 0.0


def _ramp_weight(alpha: float, start: float, width_frac: float = 0.25):
    """t^alpha switched on smoothly over [start, (1+width_frac) start]."""
    width = width_frac * start

    def weight(t):
        t = np.asarray(t, dtype=float)
        return t**alpha * smoothstep((t - start) / width)

    return weight


def verify_weight_embedding(
    M: ModelManifold,
    members: Sequence[RadialFunction],
    p: float,
    alpha: float,
    inner_radius: float,
    quadrature_tol: float = 1e-10,
) -> InequalityReport:
    """Weighted L^p against Sobolev norms, plus an outer-support sweep.

    Per member: ||w f||_p / ||f||_{W^{2,p}} with w = t^alpha switched on past
    inner_radius, and the first-order variant t^{alpha/2} against W^{1,p}.
    A slow-decay probe is then measured against weights w_R supported outside
    the ball of radius R for a doubling sweep of R; the sweep must decrease
    strictly to below 1e-3 of its initial value, and that assertion alone
    determines the verdict.
    """
    if not p >= 1.0:
        raise ConfigurationError(f"verify_weight_embedding needs p >= 1, got {p!r}")
    if not inner_radius > 0.0:
        raise ConfigurationError("inner_radius must be positive")
    limit = _weight_growth_limit(M)
    if alpha > limit + 1e-12:
        raise ConfigurationError(
            f"weight growth t^{alpha:g} exceeds the profile's verified window "
            f"(max exponent {limit:g})"
        )
    outer = 0.9 * min(M.t_max, M.t_grid_max)
    if not outer > 4.0 * inner_radius:
        raise ConfigurationError("model domain too small for the weight sweep")

    w_full = _ramp_weight(alpha, inner_radius)
    w_half = _ramp_weight(0.5 * alpha, inner_radius)

    records = []
    for f in members:
        def wf_p(t):
            return w_full(t) ** p

        def wh_p(t):
            return w_half(t) ** p

        fam = integrate_family(
            [
                _norm_integrand(M, f, p, "value", weight=wf_p),
                _norm_integrand(M, f, p, "value"),
                _norm_integrand(M, f, p, "gradient"),
                _norm_integrand(M, f, p, "hessian"),
                _norm_integrand(M, f, p, "value", weight=wh_p),
            ],
            f.support[0],
            f.support[1],
            rel_tol=quadrature_tol,
        )
        iw, iv, ig, ih, iwh = (float(v) ** (1.0 / p) for v in fam.values)
        w2 = iv + ig + ih
        w1 = iv + ig
        records.append(
            {
                "label": f.label,
                "lhs": iw,
                "rhs": w2,
                "ratio": _ratio(iw, w2),
                "first_lhs": iwh,
                "first_rhs": w1,
                "first_ratio": _ratio(iwh, w1),
            }
        )

    # Outer-support sweep on a probe whose p-mass sits in its far tail; the
    # combined integrand decays like t^((alpha - gamma) p) dt, so three
    # doublings of R leave well under 1e-3 of the initial value.
    gamma = 0.5 * alpha + 7.0
    probe = warped_tail(
        M,
        p,
        gamma,
        lo=1.35 * inner_radius,
        hi=0.85 * outer,
        ramp_lo=0.3 * inner_radius,
        ramp_hi=0.1 * outer,
    )
    sweep_R = [1.6 * inner_radius * 2.0**i for i in range(4)]
    if not 1.35 * sweep_R[-1] < probe.support[1]:
        raise ConfigurationError(
            "model domain too small to double the sweep radius three times"
        )
    fs = []
    for R in sweep_R:
        for a in (alpha, 0.5 * alpha):
            wr = _ramp_weight(a, R, width_frac=0.3)
            fs.append(
                _norm_integrand(M, probe, p, "value", weight=lambda t, wr=wr: wr(t) ** p)
            )
    fam = integrate_family(fs, sweep_R[0], probe.support[1], rel_tol=quadrature_tol)
    swept = [float(v) ** (1.0 / p) for v in fam.values]
    sweep_second = swept[0::2]
    sweep_first = swept[1::2]

    ok = True
    for col in (sweep_second, sweep_first):
        ok = ok and all(b < a for a, b in zip(col, col[1:]))
        ok = ok and col[-1] <= 1e-3 * col[0]

    ratios = [rec["ratio"] for rec in records]
    return InequalityReport(
        name="embedding",
        p=p,
        beta=alpha,
        epsilon=None,
        records=records,
        sharp_constant=None,
        empirical_constant=max(ratios, default=0.0),
        verdict="holds" if ok else "violated",
        quadrature_tol=quadrature_tol,
        extra={
            "sweep_R": sweep_R,
            "sweep_second_order": sweep_second,
            "sweep_first_order": sweep_first,
            "probe": probe.label,
            "inner_radius": inner_radius,
        },
    )


def verify_cz2(
    M: ModelManifold,
    members: Sequence[RadialFunction],
    epsilons: Sequence[float] = (0.5, 0.25, 0.125, 0.0625),
    quadrature_tol: float = 1e-10,
) -> InequalityReport:
    """L^2 Hessian-vs-Laplacian comparison with its curvature identity.

    Per member phi: ratio ||Hess phi||_2 / (||Lap phi||_2 + ||phi||_2) and
    the integrated curvature-identity residual

        | int (Lap phi)^2 - int |Hess phi|^2 + (n-1) int kappa phi'^2 | / scale,

    all five integrals sharing one mesh.  The weighted variant fits, per
    epsilon in the grid, the minimal A1 so that

        ||Hess phi||^2 <= A1^2 (||Lap phi|| + ||phi||)^2 + eps^2 ||t^beta phi||^2

    holds across the corpus with the second constant declared A2 = 1; the
    (epsilon, A1) pairs form the reported Pareto front.  Report-only.
    """
    nm1 = M.n - 1.0
    beta = _weight_growth_limit(M)
    eps = tuple(float(e) for e in epsilons)
    if any(e <= 0.0 for e in eps):
        raise ConfigurationError("epsilon grid must be positive")

    records = []
    fits = []  # per member: (I_hess, rhs_norm, I_weight)
    for f in members:
        fam = integrate_family(
            [
                _norm_integrand(M, f, 2.0, "value"),
                _norm_integrand(M, f, 2.0, "laplacian"),
                _norm_integrand(M, f, 2.0, "hessian"),
                _norm_integrand(M, f, 2.0, "gradient", weight=M.kappa_at),
                _norm_integrand(M, f, 2.0, "value", weight=lambda t: t ** (2.0 * beta)),
            ],
            f.support[0],
            f.support[1],
            rel_tol=quadrature_tol,
        )
        i_phi, i_lap, i_hess, i_kgrad, i_wphi = (float(v) for v in fam.values)
        scale = abs(i_lap) + abs(i_hess) + nm1 * abs(i_kgrad)
        resid = abs(i_lap - i_hess + nm1 * i_kgrad) / scale if scale > 0.0 else 0.0
        lhs = math.sqrt(i_hess)
        rhs = math.sqrt(i_lap) + math.sqrt(i_phi)
        records.append(
            {
                "label": f.label,
                "lhs": lhs,
                "rhs": rhs,
                "ratio": _ratio(lhs, rhs),
                "bochner_residual": resid,
                "weight_l2": math.sqrt(i_wphi),
            }
        )
        fits.append((i_hess, rhs, i_wphi))

    pareto = []
    for e in eps:
        a1_sq = 0.0
        for i_hess, rhs, i_wphi in fits:
            if rhs > 0.0:
                a1_sq = max(a1_sq, max(0.0, i_hess - e * e * i_wphi) / (rhs * rhs))
        pareto.append((e, math.sqrt(a1_sq)))

    ratios = [rec["ratio"] for rec in records]
    return InequalityReport(
        name="cz2",
        p=2.0,
        beta=beta,
        epsilon=eps,
        records=records,
        sharp_constant=None,
        empirical_constant=max(ratios, default=0.0),
        verdict="report-only",
        quadrature_tol=quadrature_tol,
        extra={"pareto": pareto, "a2": 1.0},
    )


def density_probe(
    M: ModelManifold,
    f: RadialFunction,
    cutoffs: Sequence[RadialFunction],
    p: float,
    R_list: Sequence[float],
    quadrature_tol: float = 1e-10,
) -> InequalityReport:
    """Truncation error of cutoff approximations chi_R f in W^{2,p}.

    For each R the three columns

        remainder     = ||(chi_R - 1) f||_p
        first_order   = ||f grad chi_R||_p + ||(chi_R - 1) f'||_p
        second_order  = 2 ||f' grad chi_R||_p + ||(chi_R - 1) Hess f||_p
                        + ||f Hess chi_R||_p

    are integrated over [R, s1] where chi_R < 1 meets the support of f.  The
    verdict asserts strict decrease down every column with the final entry
    below 1e-3 of the initial one.
    """
    if len(cutoffs) != len(R_list):
        raise ConfigurationError("cutoffs and R_list must align")
    R_vals = [float(R) for R in R_list]
    if any(b <= a for a, b in zip(R_vals, R_vals[1:])):
        raise ConfigurationError("R_list must increase strictly")
    s1 = f.support[1]
    if not R_vals[-1] < s1:
        raise ConfigurationError(
            f"largest truncation radius {R_vals[-1]:g} must stay inside the "
            f"probe support (ends at {s1:g})"
        )
    nm1 = M.n - 1.0

    records = []
    for R, chi in zip(R_vals, cutoffs):
        def mk(kind, chi=chi):
            def weightless(t):
                t = np.asarray(t, dtype=float)
                c0 = chi.coeff(t, 0)
                if kind == "rem":
                    return np.abs((c0 - 1.0) * f.coeff(t, 0))
                c1 = chi.coeff(t, 1)
                if kind == "f_grad_chi":
                    return np.abs(f.coeff(t, 0) * c1)
                if kind == "rem_grad":
                    return np.abs((c0 - 1.0) * f.coeff(t, 1))
                if kind == "cross":
                    return np.abs(f.coeff(t, 1) * c1)
                if kind == "rem_hess":
                    f1, f2 = f.coeff(t, 1), f.coeff(t, 2)
                    w = M.w_at(t)
                    return np.abs(c0 - 1.0) * np.sqrt(f2 * f2 + nm1 * (w * f1) ** 2)
                # f times the cutoff Hessian norm
                c2 = chi.coeff(t, 2)
                w = M.w_at(t)
                return np.abs(f.coeff(t, 0)) * np.sqrt(c2 * c2 + nm1 * (w * c1) ** 2)

            def integrand(t):
                t = np.asarray(t, dtype=float)
                ex = p * f.log_scale(t) + nm1 * M.logj_at(t) + sphere_area_log(M.n)
                return weightless(t) ** p * np.exp(ex)

            return integrand

        kinds = ["rem", "f_grad_chi", "rem_grad", "cross", "rem_hess", "f_hess_chi"]
        fam = integrate_family([mk(k) for k in kinds], R, s1, rel_tol=quadrature_tol)
        n_rem, n_fgc, n_rg, n_cross, n_rh, n_fhc = (
            float(v) ** (1.0 / p) for v in fam.values
        )
        records.append(
            {
                "label": f"R={R:g}",
                "remainder": n_rem,
                "first_order": n_fgc + n_rg,
                "second_order": 2.0 * n_cross + n_rh + n_fhc,
            }
        )

    ok = True
    for col in ("remainder", "first_order", "second_order"):
        vals = [rec[col] for rec in records]
        ok = ok and all(b < a for a, b in zip(vals, vals[1:]))
        ok = ok and vals[-1] <= 1e-3 * vals[0]

    worst = max(
        (rec["remainder"] + rec["first_order"] + rec["second_order"] for rec in records),
        default=0.0,
    )
    return InequalityReport(
        name="density",
        p=p,
        beta=None,
        epsilon=None,
        records=records,
        sharp_constant=None,
        empirical_constant=worst,
        verdict="holds" if ok else "violated",
        quadrature_tol=quadrature_tol,
        extra={"probe": f.label, "R_list": R_vals},
    )
