"""Gamma-family functions of complex argument and the Macdonald function K_nu.

Every function accepts a Python scalar or a ``numpy`` array.  Scalars come
back as Python ``complex`` (``float`` for :func:`bessel_k`); arrays come
back as ``complex128`` arrays of the broadcast shape.

The gamma function uses a 15-term Lanczos sum with ``g = 607/128``.  The
logarithm is assembled from the logarithms of the individual Lanczos
factors, and left of ``Re z = 1/2`` it is continued with the upward
recurrence ``ln Gamma(z) = ln Gamma(z + N) - sum_k ln(z + k)``, so the branch
is continuous everywhere except across the negative real axis.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "EULER_GAMMA",
    "POLE_TOL",
    "bessel_k",
    "cgamma",
    "clog_gamma",
    "digamma",
    "pochhammer",
]

EULER_GAMMA = 0.57721566490153286060651209008240243
POLE_TOL = 1e-12

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Bernoulli numbers B_2 .. B_16 for the digamma asymptotic series
_BERNOULLI = np.array([1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510])


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return complex(arr) if scalar else arr


def pole_distance(z):
    """Distance from ``z`` to the nearest non-positive integer (vectorized)."""
    z = np.asarray(z, dtype=complex)
    nearest = np.minimum(np.round(z.real), 0.0)
    return np.abs(z - nearest)


def _check_poles(z, what="gamma"):
    near = pole_distance(z) < POLE_TOL
    if np.any(near):
        bad = np.asarray(z)[near].ravel()[0]
        raise PoleError(f"{what} has a pole at z = {complex(bad)}")


def _lanczos_log(z):
    """ln Gamma(z) for Re z >= 1/2, as a sum of logs of the Lanczos factors."""
    w = z - 1.0
    acc = np.full(w.shape, _LANCZOS_C[0], dtype=complex)
    for k in range(1, _LANCZOS_C.size):
        acc = acc + _LANCZOS_C[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (w + 0.5) * np.log(t) - t + np.log(acc)


def loggamma_array(z):
    """Unchecked, vectorized ln Gamma on a complex array (internal fast path)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if right.all():
        return _lanczos_log(z)
    out[right] = _lanczos_log(z[right])
    left = z[~right]
    shift = np.ceil(0.5 - left.real)
    steps = int(shift.max())
    acc = np.zeros(left.shape, dtype=complex)
    for k in range(steps):
        active = k < shift
        acc[active] += np.log(left[active] + k)
    out[~right] = _lanczos_log(left + shift) - acc
    return out


def rgamma_array(z):
    """1/Gamma(z) on a complex array; exactly zero on (and within tolerance of) the poles."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    regular = pole_distance(z) >= POLE_TOL
    out[regular] = np.exp(-loggamma_array(z[regular]))
    return out


def cgamma(z):
    """Gamma function of a complex argument.

    Raises
    ------
    PoleError
        If ``z`` lies within ``1e-12`` of a non-positive integer.
    """
    arr, scalar = _as_complex(z)
    _check_poles(arr)
    return _out(np.exp(loggamma_array(arr)), scalar)


def clog_gamma(z):
    """Continuous branch of ln Gamma(z), overflow-free for large ``|Im z|``."""
    arr, scalar = _as_complex(z)
    _check_poles(arr)
    return _out(loggamma_array(arr), scalar)


def _digamma_right(z):
    # shift to Re z >= 10 with psi(z) = psi(z + 1) - 1/z, then use the asymptotic series
    acc = np.zeros(z.shape, dtype=complex)
    w = z.copy()
    while True:
        low = w.real < 10.0
        if not low.any():
            break
        acc[low] -= 1.0 / w[low]
        w[low] += 1.0
    inv2 = 1.0 / (w * w)
    series = np.zeros(w.shape, dtype=complex)
    power = inv2.copy()
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * power
        power = power * inv2
    return acc + np.log(w) - 0.5 / w - series


def digamma(z):
    """Logarithmic derivative of the gamma function, psi(z)."""
    arr, scalar = _as_complex(z)
    _check_poles(arr, "digamma")
    out = np.empty(arr.shape, dtype=complex)
    right = arr.real >= 0.5
    out[right] = _digamma_right(arr[right])
    left = arr[~right]
    if left.size:
        # reflection: psi(z) = psi(1 - z) - pi cot(pi z)
        out[~right] = _digamma_right(1.0 - left) - math.pi / np.tan(math.pi * left)
    return _out(out, scalar)


def pochhammer(a, n):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), by direct product.

    The product form stays finite when Gamma(a) has a pole; for example
    ``pochhammer(-3, 3) == -6``.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"pochhammer needs a non-negative integer n, got {n!r}")
    arr, scalar = _as_complex(a)
    out = np.ones(arr.shape, dtype=complex)
    for k in range(int(n)):
        out = out * (arr + k)
    return _out(out, scalar)


def bessel_k(nu, z, tol=1e-13):
    """Modified Bessel function of the second kind K_nu(z) for real nu and z > 0.

    Evaluated from ``K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt``.  The
    range is cut where the integrand drops below ``1e-18`` of its peak.
    """
    from .quadrature import integrate

    nu = abs(float(nu))
    z = float(z)
    if not z > 0:
        raise DomainError(f"bessel_k needs z > 0, got {z}")

    def log_integrand(t):
        # log of exp(-z cosh t) cosh(nu t), stable for large nu t
        return -z * np.cosh(t) + nu * t + np.log1p(np.exp(-2 * nu * t)) - math.log(2.0)

    # the peak of the log-integrand sits at sinh(t) ~ nu / z
    peak_t = math.asinh(nu / z)
    peak = float(log_integrand(np.array(peak_t)))
    t_max = max(peak_t, 0.25)
    while float(log_integrand(np.array(t_max))) - peak > math.log(1e-18):
        t_max += 0.25
    res = integrate(lambda t: np.exp(log_integrand(t)), 0.0, t_max, tol)
    return float(res.value.real)
