"""Small numerical primitives shared across modules.

Contains the quintic smoothstep used by every C^2 envelope and cutoff, cubic
Hermite interpolation on tabulated arrays (node values plus exact node
derivatives), and high-order finite-difference stencils on log-uniform grids.
"""
from __future__ import annotations

import numpy as np

from .errors import RangeError


def smoothstep(x):
    """Quintic smoothstep S(x) = 6x^5 - 15x^4 + 10x^3, clamped to [0, 1].

    S is C^2 across the clamp points: S(0)=S'(0)=S''(0)=0, S(1)=1,
    S'(1)=S''(1)=0.  max S' = 15/8 at x=1/2, max |S''| = 10/sqrt(3).
    """
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0)


def smoothstep_d1(x):
    """First derivative of the clamped quintic smoothstep (0 outside [0,1])."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0.0) & (x < 1.0)
    xc = np.clip(x, 0.0, 1.0)
    d = 30.0 * xc * xc * (xc - 1.0) * (xc - 1.0)
    return np.where(inside, d, 0.0)


def smoothstep_d2(x):
    """Second derivative of the clamped quintic smoothstep (0 outside [0,1])."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0.0) & (x < 1.0)
    xc = np.clip(x, 0.0, 1.0)
    d = 60.0 * xc * (2.0 * xc - 1.0) * (xc - 1.0)
    return np.where(inside, d, 0.0)


class HermiteTable:
    """Cubic Hermite interpolant on a grid uniform in tau = log t.

    Node derivatives are supplied by the caller (exact ODE right-hand sides,
    not finite differences), so the interpolation error is O(h^4) with
    h = t * dtau.  Lookup is O(1) arithmetic because the grid is log-uniform.
    """

    def __init__(self, t: np.ndarray, values: np.ndarray, derivs: np.ndarray):
        if t.ndim != 1 or len(t) < 2:
            raise ValueError("need at least two nodes")
        self.t = t
        self.values = values
        self.derivs = derivs
        self._tau0 = np.log(t[0])
        self._dtau = (np.log(t[-1]) - self._tau0) / (len(t) - 1)

    def _locate(self, tq: np.ndarray) -> np.ndarray:
        idx = np.floor((np.log(tq) - self._tau0) / self._dtau).astype(int)
        return np.clip(idx, 0, len(self.t) - 2)

    def __call__(self, tq, nu: int = 0):
        """Evaluate the interpolant (nu=0) or its first derivative (nu=1)."""
        scalar = np.isscalar(tq)
        tq = np.atleast_1d(np.asarray(tq, dtype=float))
        if tq.size and (tq.min() < self.t[0] * (1 - 1e-12) or tq.max() > self.t[-1] * (1 + 1e-12)):
            raise RangeError(
                f"query in [{tq.min():g}, {tq.max():g}] outside tabulated "
                f"range [{self.t[0]:g}, {self.t[-1]:g}]"
            )
        tq = np.clip(tq, self.t[0], self.t[-1])
        i = self._locate(tq)
        t0 = self.t[i]
        h = self.t[i + 1] - t0
        s = (tq - t0) / h
        v0, v1 = self.values[i], self.values[i + 1]
        d0, d1 = self.derivs[i] * h, self.derivs[i + 1] * h
        if nu == 0:
            h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
            h10 = s * (1.0 - s) ** 2
            h01 = s * s * (3.0 - 2.0 * s)
            h11 = s * s * (s - 1.0)
            out = h00 * v0 + h10 * d0 + h01 * v1 + h11 * d1
        elif nu == 1:
            g00 = 6.0 * s * (s - 1.0)
            g10 = (1.0 - s) * (1.0 - 3.0 * s)
            g01 = -6.0 * s * (s - 1.0)
            g11 = s * (3.0 * s - 2.0)
            out = (g00 * v0 + g10 * d0 + g01 * v1 + g11 * d1) / h
        else:
            raise ValueError("nu must be 0 or 1")
        return float(out[0]) if scalar else out


def fd5_loggrid(t: np.ndarray, g: np.ndarray):
    """Fourth-order first and second t-derivatives of nodal data on a
    log-uniform grid, via 5-point central stencils in tau = log t.

    Returns (dg, d2g) on the interior slice [2:-2]; edge nodes are excluded.
    """
    dtau = (np.log(t[-1]) - np.log(t[0])) / (len(t) - 1)
    gt = (g[:-4] - 8.0 * g[1:-3] + 8.0 * g[3:-1] - g[4:]) / (12.0 * dtau)
    gtt = (-g[:-4] + 16.0 * g[1:-3] - 30.0 * g[2:-2] + 16.0 * g[3:-1] - g[4:]) / (
        12.0 * dtau * dtau
    )
    tm = t[2:-2]
    dg = gt / tm
    d2g = (gtt - gt) / (tm * tm)
    return dg, d2g


def logsumexp_weighted(logf: np.ndarray, weights: np.ndarray, axis=None):
    """log(sum(weights * exp(logf))) with the usual max-shift, weights >= 0.

    Entries with logf = -inf contribute zero.  Returns -inf for an all-empty
    sum.
    """
    logf = np.asarray(logf, dtype=float)
    m = np.max(logf, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    s = np.sum(weights * np.exp(logf - m), axis=axis)
    with np.errstate(divide="ignore"):
        out = np.squeeze(m, axis=axis) if axis is not None else float(np.squeeze(m))
        return out + np.log(s)
