"""Vectorized one-dimensional quadrature.

Two rules are provided:

``integrate``
    Adaptive 15-point Gauss-Kronrod with bisection.  Semi-infinite ranges
    ``[a, inf)`` are mapped onto ``[0, 1)`` with ``u = a + t / (1 - t)``.
``tanh_sinh``
    Double-exponential rule for integrable endpoint singularities on
    ``[a, b]``, switching to the exp-sinh map when ``b`` is infinite.

Integrands are called with a 1-D ``numpy`` array of abscissae and must
return an array of the same length (real or complex).  Complex integrands
are integrated component-wise on a single shared set of panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NonFinite

__all__ = ["QuadratureResult", "integrate", "tanh_sinh"]

_EPS = np.finfo(float).eps

# Kronrod abscissae on [-1, 1] (positive half, descending) with weights;
# the Gauss 7-point rule uses every other node.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[1:7:2] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_GWEIGHTS[9:14:2] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of a numerical integration.

    Attributes
    ----------
    value : complex
        Integral estimate.
    abs_error_estimate : float
        Non-negative estimate of ``|value - exact|``.
    u_max : float
        Truncation (or splitting) point of the integration variable.
    panels : int
        Number of panels (or tanh-sinh levels) that were evaluated.
    """

    value: complex
    abs_error_estimate: float
    u_max: float
    panels: int

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            self.value + other.value,
            self.abs_error_estimate + other.abs_error_estimate,
            max(self.u_max, other.u_max),
            self.panels + other.panels,
        )


def _check_finite(values):
    if not np.all(np.isfinite(values)):
        raise NonFinite("integrand returned NaN or Inf")


def integrate(f, a, b, tol=1e-10, *, abs_tol=0.0, max_panels=100_000, initial_panels=1):
    """Adaptive Gauss-Kronrod (G7/K15) quadrature of a vectorized integrand.

    Parameters
    ----------
    f : callable
        Vectorized integrand ``f(u_array) -> array``.
    a, b : float
        Limits; ``b`` may be ``numpy.inf``.
    tol : float
        Relative tolerance on the whole integral.  Each panel must satisfy
        ``err <= tol * |I| * width / total_width`` (or ``abs_tol`` scaled the
        same way).
    abs_tol : float
        Absolute tolerance floor, useful when the integral may vanish.
    max_panels : int
        Budget of evaluated panels before :class:`NoConvergence` is raised.
    initial_panels : int
        Number of equal panels to start from.

    Returns
    -------
    QuadratureResult
    """
    a = float(a)
    infinite = math.isinf(b)
    if infinite:
        if b < 0:
            raise ValueError("only [a, +inf) semi-infinite ranges are supported")
        lo, hi = 0.0, 1.0

        def g(t):
            one_minus = 1.0 - t
            return f(a + t / one_minus) / (one_minus * one_minus)
    else:
        lo, hi = a, float(b)
        g = f
    if hi == lo:
        return QuadratureResult(0.0 + 0.0j, 0.0, float(b), 0)

    total_width = hi - lo
    edges = np.linspace(lo, hi, initial_panels + 1)
    pending_a, pending_b = edges[:-1], edges[1:]
    accepted_val = 0.0 + 0.0j
    accepted_err = 0.0
    evaluated = 0
    while pending_a.size:
        evaluated += pending_a.size
        if evaluated > max_panels:
            raise NoConvergence(f"panel budget {max_panels} exceeded")
        centre = 0.5 * (pending_a + pending_b)
        half = 0.5 * (pending_b - pending_a)
        nodes = centre[:, None] + half[:, None] * _NODES[None, :]
        vals = np.asarray(g(nodes.ravel())).reshape(nodes.shape)
        _check_finite(vals)
        kron = half * (vals @ _KWEIGHTS)
        gauss = half * (vals @ _GWEIGHTS)
        resabs = np.abs(half) * (np.abs(vals) @ _KWEIGHTS)
        err = np.abs(kron - gauss)
        estimate = accepted_val + kron.sum()
        scale = max(tol * abs(estimate), abs_tol)
        share = scale * np.abs(pending_b - pending_a) / total_width
        ok = (err <= share) | (err <= 50 * _EPS * resabs) | (np.abs(half) < 1e-15 * (1 + np.abs(centre)))
        accepted_val += kron[ok].sum()
        accepted_err += err[ok].sum()
        split_a, split_b, mid = pending_a[~ok], pending_b[~ok], centre[~ok]
        pending_a = np.concatenate([split_a, mid])
        pending_b = np.concatenate([mid, split_b])
    return QuadratureResult(complex(accepted_val), float(accepted_err), float(b), evaluated)


def _ts_abscissae(t):
    """Distance-to-endpoint and weight factor of the tanh-sinh map at ``t >= 0``."""
    s = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * s)
    dist = 2.0 * e / (1.0 + e)  # 1 - tanh(s), free of cancellation
    weight = 0.5 * math.pi * np.cosh(t) * 4.0 * e / (1.0 + e) ** 2
    return dist, weight


def tanh_sinh(f, a, b, tol=1e-10, *, max_level=12, t_lo=-6.5, t_hi=None):
    """Double-exponential quadrature, robust to endpoint singularities.

    On a finite ``[a, b]`` the tanh-sinh substitution is used; for
    ``b = inf`` the exp-sinh map ``u = a + exp(pi/2 sinh t)`` is used.  The
    step is halved until two successive estimates agree to ``tol``
    (relative), reusing all previous abscissae.  On ``[a, inf)`` the map
    parameter runs over ``[t_lo, t_hi]``; integrands should return zero
    beyond the point where they are negligible.

    Returns
    -------
    QuadratureResult
        ``panels`` reports the number of halving levels performed.
    """
    a = float(a)
    infinite = math.isinf(b)
    if infinite:
        t_hi = 3.5 if t_hi is None else t_hi

        def sample(t):
            x = a + np.exp(0.5 * math.pi * np.sinh(t))
            w = 0.5 * math.pi * np.cosh(t) * np.exp(0.5 * math.pi * np.sinh(t))
            keep = np.isfinite(x) & (x - a > 0) & (w > 0) & np.isfinite(w)
            out = np.zeros(t.shape, dtype=complex)
            if keep.any():
                vals = np.asarray(f(x[keep]), dtype=complex)
                _check_finite(vals)
                out[keep] = vals * w[keep]
            return out

        def level_sum(t):
            return sample(t).sum()
    else:
        b = float(b)
        half = 0.5 * (b - a)
        t_hi = 6.5 if t_hi is None else t_hi

        def level_sum(t):
            t = t[t >= 0]
            dist, w = _ts_abscissae(t)
            keep = dist * half > 0
            # the right end is assumed regular: drop nodes that round onto b
            keep_right = half * dist > _EPS * max(abs(b), half)
            dist, w, tt = dist[keep], w[keep], t[keep]
            right = b - half * dist
            left = a + half * dist
            at_zero = tt == 0
            keep_right = keep_right[keep]
            xs = np.concatenate([right[keep_right], left[~at_zero]])
            ws = np.concatenate([w[keep_right], w[~at_zero]])
            vals = np.asarray(f(xs), dtype=complex)
            _check_finite(vals)
            return half * np.dot(vals, ws)

    h = 1.0
    if infinite:
        t = np.arange(t_lo, t_hi + 0.5 * h, h)
    else:
        t = np.arange(0.0, t_hi + 0.5 * h, h)
    total = level_sum(t)
    estimate = h * total
    for level in range(1, max_level + 1):
        h *= 0.5
        # new abscissae are the odd multiples of the halved step
        if infinite:
            t = np.arange(t_lo + h, t_hi, 2 * h)
        else:
            t = np.arange(h, t_hi, 2 * h)
        total += level_sum(t)
        new = h * total
        err = abs(new - estimate)
        estimate = new
        if err <= tol * abs(new) and level >= 3:
            return QuadratureResult(complex(new), float(err), float(b), level)
    raise NoConvergence(f"tanh-sinh did not reach tol={tol:g} in {max_level} levels")
