"""Direct numerical evaluation of the index integral (the quadrature oracle).

The integrand does not decay exponentially: for large ``u`` it behaves like
``u^-2`` times a bounded oscillation (``(x_max/x_min)^(iu)`` and similar), so
no finite cut of the real axis reaches ``1e-9``.  The oracle therefore
integrates the real axis up to a split point ``U`` and replaces the
remaining ``[U, inf)`` by vertical rays in the complex ``u`` plane.

Writing ``W = A(mu) M_mu + A(-mu) M_-mu`` with ``A(mu) = Gamma(-2mu)/Gamma(c-mu)``,
``c = 1/2 - kappa`` and ``mu = iu``, the integrand splits exactly into four
analytic pieces

* ``P``  ~ ``M_mu(x_max) M_mu(x_min)``, decays towards ``-i inf``;
* ``Q``  ~ ``M_-mu(x_max) M_-mu(x_min)``, decays towards ``+i inf``;
* ``C = (pi/2)/(s+u^2) M_mu(x_max) M_-mu(x_min)``, decays towards ``+i inf``;
* ``D = (pi/2)/(s+u^2) M_-mu(x_max) M_mu(x_min)``, decays towards ``-i inf``.

By Cauchy's theorem

    int_U^inf f du = i int_0^inf [Q + C](U + it) dt - i int_0^inf [P + D](U - it) dt

provided ``U`` clears every singularity (the gamma poles sit on
``Re u = Im kappa``, the ``s``-pole on ``Re u = -+Im sqrt(s)``).  ``P`` and ``Q``
fall off faster than exponentially along their rays; ``C`` and ``D`` only like
``t^-2`` when ``x = x0``, so their rays are integrated to infinity with the
algebraic map of :func:`integrate`.
"""

from __future__ import annotations

import cmath
import math
import warnings

import numpy as np

from .confluent import _log_rgamma_sum, _phi_series, whittaker_w_terms
from .errors import NonFinite, TailWarning
from .index_integral import SPECIAL_CASE_WEIGHTS, IntegralParams, principal_sqrt, x_ordering
from .quadrature import QuadratureResult, integrate
from .specfun import loggamma_array

__all__ = [
    "U_CANDIDATES",
    "integrand_I",
    "kernel_k2",
    "oracle_I",
    "oracle_special_case",
    "special_case_integrand",
    "truncate_u",
]

U_CANDIDATES = (10.0, 15.0, 20.0, 30.0, 40.0, 60.0)
_LOG2 = math.log(2.0)


def _log_u_sinh(u):
    """ln[u sinh(2 pi u)] for complex ``u``; the product is even in ``u``."""
    u = np.asarray(u, dtype=complex)
    u = np.where(u.real < 0, -u, u)
    with np.errstate(divide="ignore"):
        return np.log(u) + 2.0 * math.pi * u - _LOG2 + np.log(-np.expm1(-4.0 * math.pi * u))


def _log_w_scaled(kappa, mu, z):
    """W_{kappa,mu}(z) as ``(L, w)`` with ``W = exp(L) * w`` and ``|w|`` of order one."""
    lc1, phi1, lc2, phi2 = whittaker_w_terms(kappa, mu, z)
    top = np.maximum(lc1.real, lc2.real)
    return top, np.exp(lc1 - top) * phi1 + np.exp(lc2 - top) * phi2


def integrand_I(p: IntegralParams, u):
    """Integrand of the index integral on the real ``u`` axis (vectorized).

    The gamma pair, ``u sinh(2 pi u)`` and the exponents of both ``W``
    factors are summed as logarithms and exponentiated once.

    Raises
    ------
    NonFinite
        If the assembled value overflows.
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    at_zero = u == 0
    # the integrand vanishes at u = 0; evaluate elsewhere to keep logs finite
    u_eval = np.where(at_zero, 1.0, u)
    mu = 1j * u_eval
    c = 0.5 - p.kappa
    lx, wx = _log_w_scaled(p.kappa, mu, p.x)
    lx0, wx0 = _log_w_scaled(p.kappa, mu, p.x0)
    log_gg = -_log_rgamma_sum(c, -mu) - _log_rgamma_sum(c, mu)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_pref = _log_u_sinh(u_eval) + log_gg - np.log(p.s + u_eval * u_eval) + lx + lx0
        value = np.exp(log_pref) * wx * wx0
    value = np.where(at_zero, 0.0, value)
    if not np.all(np.isfinite(value)):
        raise NonFinite("integrand overflowed after log-space assembly")
    return complex(value[0]) if scalar else value


def _m_log(kappa, mu, z):
    """M_{kappa,mu}(z) as ``(log prefactor, Phi)``."""
    phi, _ = _phi_series((0.5 - kappa) + mu, 1.0 + 2.0 * mu, z)
    return (mu + 0.5) * math.log(z) - 0.5 * z, phi


def _tail_parts(p: IntegralParams, u, which):
    """The pieces of the integrand continued to complex ``u``.

    ``which`` is a subset of ``"PQCD"``; the selected pieces are summed.
    """
    u = np.asarray(u, dtype=complex)
    mu = 1j * u
    c = 0.5 - p.kappa
    x_min, x_max = x_ordering(p.x, p.x0)
    log_den = np.log(p.s + u * u)
    out = np.zeros(u.shape, dtype=complex)
    if "C" in which or "P" in which:
        lp_max, fp_max = _m_log(p.kappa, mu, x_max)
    if "D" in which or "Q" in which:
        lm_max, fm_max = _m_log(p.kappa, -mu, x_max)
    if "C" in which or "Q" in which:
        lm_min, fm_min = _m_log(p.kappa, -mu, x_min)
    if "D" in which or "P" in which:
        lp_min, fp_min = _m_log(p.kappa, mu, x_min)
    log_half_pi = math.log(0.5 * math.pi)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if "C" in which:
            out += np.exp(log_half_pi - log_den + lp_max + lm_min) * fp_max * fm_min
        if "D" in which:
            out += np.exp(log_half_pi - log_den + lm_max + lp_min) * fm_max * fp_min
        if "P" in which or "Q" in which:
            log_us = _log_u_sinh(u) - log_den
            # Gamma(c-mu) Gamma(c+mu) A(+-mu)^2 = Gamma(-+2mu)^2 Gamma(c+-mu) / Gamma(c-+mu)
            lr_plus = _log_rgamma_sum(c, mu)
            lr_minus = _log_rgamma_sum(c, -mu)
            if "P" in which:
                lg = 2.0 * loggamma_array(-2.0 * mu) + lr_minus - lr_plus
                out += np.exp(log_us + lg + lp_max + lp_min) * fp_max * fp_min
            if "Q" in which:
                lg = 2.0 * loggamma_array(2.0 * mu) + lr_plus - lr_minus
                out += np.exp(log_us + lg + lm_max + lm_min) * fm_max * fm_min
    return out


def truncate_u(p: IntegralParams, tol: float = 1e-9) -> float:
    """Split point ``U`` between the real-axis part and the ray tail.

    The smallest ``U`` in ``(10, 15, 20, 30, 40, 60)`` that clears the
    singularities of the split pieces by a margin of 2 and satisfies
    ``U >= sqrt(x x0)`` (below that the ``P``/``Q`` pieces still grow along
    their rays before decaying).  ``tol`` does not enter: the tail is
    integrated, not dropped.  A :class:`TailWarning` is issued if even
    ``U = 60`` does not satisfy the conditions.
    """
    need = max(
        8.0,
        math.sqrt(p.x * p.x0),
        abs(p.kappa.imag) + 2.0,
        abs(principal_sqrt(p.s).imag) + 2.0,
    )
    for cand in U_CANDIDATES:
        if cand >= need:
            return cand
    warnings.warn(f"no split point clears the requirement U >= {need:.3g}; using 60", TailWarning, stacklevel=2)
    return U_CANDIDATES[-1]


def _ray_cut(p: IntegralParams, U: float, pieces: str, sign: int) -> float:
    """Parameter ``T`` beyond which the super-exponentially decaying piece is negligible."""
    t = np.arange(0.0, 400.0, 2.0)
    vals = np.abs(_tail_parts(p, U + sign * 1j * t, pieces))
    vals = np.where(np.isfinite(vals), vals, np.inf)
    peak = vals.max()
    if not np.isfinite(peak):
        raise NonFinite("ray integrand overflowed")
    below = np.flatnonzero((vals < 1e-18 * peak) & (t > 0))
    if below.size == 0:
        return float(t[-1])
    # first point after which everything stays small
    for i in below:
        if np.all(vals[i:] < 1e-18 * peak):
            return float(t[i])
    return float(t[-1])


def _tail(p: IntegralParams, U: float, tol: float, abs_tol: float, scale=1.0) -> QuadratureResult:
    def up_fast(t):
        return 1j * scale * _tail_parts(p, U + 1j * t, "QC")

    def up_slow(t):
        return 1j * scale * _tail_parts(p, U + 1j * t, "C")

    def down_fast(t):
        return -1j * scale * _tail_parts(p, U - 1j * t, "PD")

    def down_slow(t):
        return -1j * scale * _tail_parts(p, U - 1j * t, "D")

    t_up = _ray_cut(p, U, "Q", +1)
    t_down = _ray_cut(p, U, "P", -1)
    res = integrate(up_fast, 0.0, t_up, tol, abs_tol=abs_tol)
    res = res + integrate(up_slow, t_up, math.inf, tol, abs_tol=abs_tol)
    res = res + integrate(down_fast, 0.0, t_down, tol, abs_tol=abs_tol)
    res = res + integrate(down_slow, t_down, math.inf, tol, abs_tol=abs_tol)
    return res


def _scale_hint(f, U):
    """Rough magnitude of an integral, for absolute-tolerance floors."""
    u = np.linspace(U / 64, U, 64)
    return float(np.max(np.abs(f(u)))) * U


def _oracle(p: IntegralParams, f_real, tol: float, scale: float) -> QuadratureResult:
    U = truncate_u(p, tol)
    # the absolute floor only matters when the integral nearly vanishes
    abs_tol = 1e-3 * tol * _scale_hint(f_real, U)
    body = integrate(f_real, 0.0, U, tol, abs_tol=abs_tol, initial_panels=8)
    tail = _tail(p, U, tol, abs_tol, scale)
    total = body + tail
    return QuadratureResult(total.value, total.abs_error_estimate, U, total.panels)


def oracle_I(p: IntegralParams, tol: float = 1e-9) -> QuadratureResult:
    """Index integral by direct quadrature (real axis plus complex ray tail).

    ``u_max`` in the result is the split point ``U``.
    """
    return _oracle(p, lambda u: integrand_I(p, u), tol, 1.0)


def kernel_k2(u, x, x0):
    """``u sinh(pi u) / ((1+4u^2)(9+4u^2)) W_{2,iu}(x0) W_{2,iu}(x)``.

    The common factor of the ``kappa = 2`` shortcut integrand (divided by
    ``s + u^2``) and of the Comptonization Green's function (multiplied by
    ``exp(-u^2 y)``).
    """
    u = np.asarray(u, dtype=float)
    mu = 1j * u
    lx, wx = _log_w_scaled(2.0, mu, x)
    lx0, wx0 = _log_w_scaled(2.0, mu, x0)
    with np.errstate(divide="ignore"):
        log_sinh = np.log(np.abs(u)) + math.pi * np.abs(u) - _LOG2 + np.log(-np.expm1(-2.0 * math.pi * np.abs(u)))
    poly = (1.0 + 4.0 * u * u) * (9.0 + 4.0 * u * u)
    value = np.exp(log_sinh + lx + lx0) * wx * wx0 / poly
    return np.where(u == 0, 0.0, value)


def _special_integrand_k0(u, s, x, x0):
    u = np.asarray(u, dtype=float)
    mu = 1j * u
    lx, wx = _log_w_scaled(0.0, mu, x)
    lx0, wx0 = _log_w_scaled(0.0, mu, x0)
    with np.errstate(divide="ignore"):
        log_sinh = np.log(u) + math.pi * u - _LOG2 + np.log(-np.expm1(-2.0 * math.pi * u))
    return np.where(u == 0, 0.0, np.exp(log_sinh + lx + lx0) * wx * wx0 / (s + u * u))


def _special_integrand_k1(u, s, x, x0):
    u = np.asarray(u, dtype=float)
    mu = 1j * u
    lx, wx = _log_w_scaled(1.0, mu, x)
    lx0, wx0 = _log_w_scaled(1.0, mu, x0)
    with np.errstate(divide="ignore"):
        log_sinh = np.log(u) + math.pi * u - _LOG2 + np.log(-np.expm1(-2.0 * math.pi * u))
    value = np.exp(log_sinh + lx + lx0) * wx * wx0 / ((1.0 + 4.0 * u * u) * (s + u * u))
    return np.where(u == 0, 0.0, value)


def special_case_integrand(kappa: int, u, s: complex, x: float, x0: float):
    """Left-hand-side integrand of the ``kappa = 0, 1, 2`` shortcut formulas."""
    if kappa == 0:
        return _special_integrand_k0(u, s, x, x0)
    if kappa == 1:
        return _special_integrand_k1(u, s, x, x0)
    if kappa == 2:
        u = np.asarray(u, dtype=float)
        return kernel_k2(u, x, x0) / (s + u * u)
    raise ValueError("kappa must be 0, 1 or 2")


def oracle_special_case(kappa: int, s: complex, x: float, x0: float, tol: float = 1e-9) -> QuadratureResult:
    """Quadrature of a shortcut-formula left-hand side.

    The real-axis part integrates the literal integrand; the ray tail uses
    the analytic split of the general integrand divided by the constant
    weight relating the two.
    """
    p = IntegralParams(kappa, s, x, x0)
    weight = SPECIAL_CASE_WEIGHTS[kappa]
    return _oracle(p, lambda u: special_case_integrand(kappa, u, p.s, x, x0), tol, 1.0 / weight)
