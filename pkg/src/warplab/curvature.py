"""Radial curvature profiles.

A profile prescribes kappa(t) >= 0, the magnitude of the (nonpositive) radial
sectional curvature -kappa(t) of a rotationally symmetric model.  Four kinds
are supported:

* ``PowerLaw(A, alpha)``        kappa = A^2 t^alpha
* ``IteratedLog(a, k, t_onset)`` kappa = lambda(t)^2 beyond t_onset, where
  lambda(t) = a t log(t) log(log(t)) ... (k nested logs); below t_onset the
  profile is a C^2 blend down to a constant so it is defined at the pole.
* ``Flat()``                    kappa = 0
* ``Tabulated(t_points, kappa_points)``  linear interpolation, hard range.

The iterated-log family satisfies int^inf dt/lambda = infinity (the partial
integrals are log^[k+1], unbounded), which is what makes it useful as a
growth envelope for completeness-type probes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ConstructionError, DomainError, RangeError
from .numerics import smoothstep


def _exp_tower(k: int) -> float:
    """exp applied k times to 1 (exp_tower(0) = 1)."""
    v = 1.0
    for _ in range(k):
        v = math.exp(v)
    return v


def iterated_logs(t, k: int):
    """The nested logs [log t, log log t, ...] up to depth k, all required > 0.

    Raises DomainError if any level is undefined or nonpositive anywhere.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise DomainError("iterated logs need t > 0")
    levels = []
    cur = t
    for j in range(k):
        cur = np.log(cur)
        if np.any(cur <= 0.0):
            raise DomainError(f"log^[{j + 1}](t) <= 0 for some t; need t > {_exp_tower(j + 1):g}")
        levels.append(cur)
    return levels


def lambda_profile(a: float, k: int, t):
    """lambda(t) = a * t * prod_{j=1}^{k} log^[j](t).

    Strictly increasing on its domain; the domain is t > exp_tower(k-1) for
    k >= 1 (all nested logs positive) and t > 0 for k = 0.
    """
    if not a > 0.0:
        raise DomainError(f"scale a must be positive, got {a!r}")
    if k < 0 or int(k) != k:
        raise DomainError(f"log depth k must be a nonnegative integer, got {k!r}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0.0):
        raise DomainError("lambda_profile needs t > 0")
    out = a * t_arr
    for lvl in iterated_logs(t_arr, int(k)):
        out = out * lvl
    return float(out) if np.isscalar(t) else out


def lambda_profile_d1(a: float, k: int, t):
    """Exact derivative of lambda_profile in t (used by Laplacian cutoffs)."""
    t_arr = np.asarray(t, dtype=float)
    lam = lambda_profile(a, k, t_arr)
    levels = iterated_logs(t_arr, int(k))
    # lambda'/lambda = 1/t * (1 + sum_j 1 / (L_1 ... L_j))
    acc = np.ones_like(t_arr)
    prod = np.ones_like(t_arr)
    for lvl in levels:
        prod = prod * lvl
        acc = acc + 1.0 / prod
    out = lam * acc / t_arr
    return float(out) if np.isscalar(t) else out


def lambda_antiderivative(a: float, k: int, t):
    """Closed-form antiderivative of 1/lambda:  log^[k+1](t) / a."""
    t_arr = np.asarray(t, dtype=float)
    iterated_logs(t_arr, int(k))  # domain check
    cur = t_arr
    for _ in range(int(k) + 1):
        cur = np.log(cur)
    out = cur / a
    return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class PowerLaw:
    """kappa(t) = A^2 t^alpha with A > 0, alpha >= 0."""

    A: float
    alpha: float

    def __post_init__(self):
        if not self.A > 0.0:
            raise ConstructionError(f"PowerLaw needs A > 0, got {self.A!r}")
        if not self.alpha >= 0.0:
            raise ConstructionError(f"PowerLaw needs alpha >= 0, got {self.alpha!r}")

    def kappa(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0.0):
            raise DomainError("kappa needs t >= 0")
        out = self.A * self.A * t_arr**self.alpha
        return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class Flat:
    """kappa identically zero (Euclidean model)."""

    def kappa(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0.0):
            raise DomainError("kappa needs t >= 0")
        out = np.zeros_like(t_arr)
        return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class IteratedLog:
    """kappa(t) = lambda_profile(a, k, t)^2 past t_onset, blended to a constant.

    The blend is a quintic-smoothstep interpolation on [t_onset/2, t_onset]
    between the constant lambda(t_onset)^2 and the curve, so kappa is C^2
    everywhere, constant near the pole, and equal to lambda^2 from t_onset on.
    """

    a: float
    k: int
    t_onset: float = field(default=0.0)

    def __post_init__(self):
        if not self.a > 0.0:
            raise ConstructionError(f"IteratedLog needs a > 0, got {self.a!r}")
        if self.k < 0 or int(self.k) != self.k:
            raise ConstructionError(f"IteratedLog needs integer k >= 0, got {self.k!r}")
        onset = self.t_onset
        if onset == 0.0:
            onset = 2.0 * _exp_tower(int(self.k))
            object.__setattr__(self, "t_onset", onset)
        # the blend region must sit inside lambda's domain
        lo = _exp_tower(max(int(self.k) - 1, 0)) if self.k >= 1 else 0.0
        if not onset / 2.0 > lo:
            raise ConstructionError(
                f"t_onset/2 = {onset / 2.0:g} not inside the lambda domain (> {lo:g})"
            )

    def kappa(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0.0):
            raise DomainError("kappa needs t >= 0")
        c0 = float(lambda_profile(self.a, self.k, self.t_onset)) ** 2
        out = np.full_like(t_arr, c0)
        mask = t_arr > self.t_onset / 2.0
        if np.any(mask):
            lam = lambda_profile(self.a, self.k, t_arr[mask])
            s = smoothstep((t_arr[mask] - self.t_onset / 2.0) / (self.t_onset / 2.0))
            out[mask] = c0 + s * (lam * lam - c0)
        return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear kappa from sampled values; queries clamp nowhere."""

    t_points: tuple
    kappa_points: tuple

    def __post_init__(self):
        tp = tuple(float(v) for v in self.t_points)
        kp = tuple(float(v) for v in self.kappa_points)
        if len(tp) != len(kp) or len(tp) < 2:
            raise ConstructionError("Tabulated needs matching arrays of length >= 2")
        if any(b <= a for a, b in zip(tp, tp[1:])):
            raise ConstructionError("Tabulated t_points must be strictly increasing")
        if any(v < 0.0 for v in kp):
            raise ConstructionError("Tabulated kappa values must be >= 0")
        object.__setattr__(self, "t_points", tp)
        object.__setattr__(self, "kappa_points", kp)

    def kappa(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.t_points[0]) or np.any(t_arr > self.t_points[-1]):
            raise RangeError(
                f"query outside tabulated range [{self.t_points[0]:g}, {self.t_points[-1]:g}]"
            )
        out = np.interp(t_arr, self.t_points, self.kappa_points)
        return float(out) if np.isscalar(t) else out


CurvatureProfile = Union[PowerLaw, Flat, IteratedLog, Tabulated]


def kappa(profile: CurvatureProfile, t):
    """Evaluate a profile; free-function form of profile.kappa."""
    return profile.kappa(t)


def profile_to_dict(profile: CurvatureProfile) -> dict:
    """Serialize a profile to a plain dict (exact float round-trip)."""
    if isinstance(profile, PowerLaw):
        return {"kind": "powerlaw", "A": profile.A, "alpha": profile.alpha}
    if isinstance(profile, Flat):
        return {"kind": "flat"}
    if isinstance(profile, IteratedLog):
        return {"kind": "iteratedlog", "a": profile.a, "k": int(profile.k), "t_onset": profile.t_onset}
    if isinstance(profile, Tabulated):
        return {
            "kind": "tabulated",
            "t_points": list(profile.t_points),
            "kappa_points": list(profile.kappa_points),
        }
    raise ConstructionError(f"unknown profile type {type(profile).__name__}")


def profile_from_dict(data: dict) -> CurvatureProfile:
    """Inverse of profile_to_dict."""
    try:
        kind = data["kind"]
    except (TypeError, KeyError) as exc:
        raise ConstructionError(f"profile dict needs a 'kind' field: {data!r}") from exc
    if kind == "powerlaw":
        return PowerLaw(A=float(data["A"]), alpha=float(data["alpha"]))
    if kind == "flat":
        return Flat()
    if kind == "iteratedlog":
        return IteratedLog(a=float(data["a"]), k=int(data["k"]), t_onset=float(data.get("t_onset", 0.0)))
    if kind == "tabulated":
        return Tabulated(t_points=tuple(data["t_points"]), kappa_points=tuple(data["kappa_points"]))
    raise ConstructionError(f"unknown profile kind {kind!r}")
