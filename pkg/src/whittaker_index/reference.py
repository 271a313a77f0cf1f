"""Classical integrals of Whittaker-function products, used as independent checks.

Each ``check_*`` function returns the quadrature value of the left-hand side
together with the closed form of the right-hand side.

* :func:`check_eq70` integrates ``W_{k,m} W_{s,m} / x`` over ``x``.  The closed
  form carries a factor ``pi / sin(2 pi m)``; some printed versions of it lack
  the ``pi``, and :func:`eq70_rhs_without_pi` reproduces that variant so the
  tests can show it is wrong.
* :func:`check_eq71` integrates ``x^(sigma-1) W_{k,m} W_{-k,m}`` over ``x``.
* :func:`check_eq72` integrates over the first index,
  ``Gamma(k-iu) Gamma(k+iu) W_{iu,k-1/2}(x) W_{-iu,k-1/2}(x0)``, giving a
  modified Bessel function.
* :func:`check_eq73` is the ``k = 1/2`` case of the previous one.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple

import numpy as np

from .confluent import whittaker_w
from .errors import DomainError, NoConvergence
from .quadrature import integrate, tanh_sinh
from .specfun import bessel_k, cgamma, loggamma_array, rgamma_array

__all__ = [
    "ReferenceCheck",
    "check_eq70",
    "check_eq71",
    "check_eq72",
    "check_eq73",
    "eq70_rhs_without_pi",
]

# upper end of the x integrals: the integrands fall off like e^-x
X_CUT = 45.0
# tanh-sinh nodes below this are dropped; with |Re mu| < 1/2 the integrable
# x^(-2|mu|) singularity contributes less than 1e-25 there
X_TINY = 1e-250
# the u integrals are scanned in steps of U_SCAN_STEP for their cut-off
U_SCAN_STEP = 2.0
U_SCAN_MAX = 400.0
# the u integrand is cut once it stays below this fraction of its peak
U_CUT_RATIO = 1e-14
QUAD_TOL = 1e-11


class ReferenceCheck(NamedTuple):
    lhs: complex
    rhs: complex

    @property
    def rel_error(self) -> float:
        return abs(self.lhs - self.rhs) / abs(self.rhs)


def _x_integral(f) -> complex:
    """int_0^X_CUT f(x) dx with an integrable singularity allowed at 0."""

    def guarded(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        ok = x > X_TINY
        out[ok] = f(x[ok])
        return out

    head = tanh_sinh(guarded, 0.0, 1.0, QUAD_TOL)
    body = integrate(f, 1.0, X_CUT, QUAD_TOL, abs_tol=1e-14 * max(abs(head.value), 1e-300))
    return head.value + body.value


def _eq70_bracket(kappa, sigma, mu):
    args = np.array([0.5 - kappa + mu, 0.5 - sigma - mu, 0.5 - kappa - mu, 0.5 - sigma + mu], dtype=complex)
    r = rgamma_array(args)
    return (r[0] * r[1] - r[2] * r[3]) / (kappa - sigma)


def _check_eq70_domain(kappa, sigma, mu):
    if not abs(mu.real) < 0.5:
        raise DomainError("the integral needs |Re mu| < 1/2")
    if kappa == sigma:
        raise DomainError("the closed form needs kappa != sigma")
    two_mu = 2.0 * mu
    if abs(two_mu - round(two_mu.real)) < 1e-9:
        raise DomainError("2 mu is an integer: sin(2 pi mu) vanishes and the closed form needs a limit")


def check_eq70(kappa: complex, sigma: complex, mu: complex) -> ReferenceCheck:
    """``int_0^inf W_{k,m}(x) W_{s,m}(x) dx / x``.

    Closed form::

        pi / ((k - s) sin(2 pi m)) * [ 1/(G(1/2-k+m) G(1/2-s-m)) - 1/(G(1/2-k-m) G(1/2-s+m)) ]

    Raises
    ------
    DomainError
        Unless ``|Re m| < 1/2``, ``k != s`` and ``2m`` is not an integer.
    """
    kappa, sigma, mu = complex(kappa), complex(sigma), complex(mu)
    _check_eq70_domain(kappa, sigma, mu)
    rhs = math.pi / cmath.sin(2.0 * math.pi * mu) * _eq70_bracket(kappa, sigma, mu)

    def f(x):
        return whittaker_w(kappa, mu, x) * whittaker_w(sigma, mu, x) / x

    return ReferenceCheck(_x_integral(f), complex(rhs))


def eq70_rhs_without_pi(kappa: complex, sigma: complex, mu: complex) -> complex:
    """The closed form of :func:`check_eq70` with the factor ``pi`` dropped.

    Kept only to show that this variant is off by exactly ``pi``.
    """
    kappa, sigma, mu = complex(kappa), complex(sigma), complex(mu)
    _check_eq70_domain(kappa, sigma, mu)
    return 1.0 / cmath.sin(2.0 * math.pi * mu) * _eq70_bracket(kappa, sigma, mu)


def check_eq71(kappa: complex, mu: complex, sigma: complex) -> ReferenceCheck:
    """``int_0^inf x^(sigma-1) W_{k,m}(x) W_{-k,m}(x) dx``.

    Closed form::

        G(sigma+1) G(sigma/2+1/2+m) G(sigma/2+1/2-m) / (2 G(sigma/2+1+k) G(sigma/2+1-k))

    Raises
    ------
    DomainError
        Unless ``Re sigma > 2 |Re m| - 1``.
    """
    kappa, mu, sigma = complex(kappa), complex(mu), complex(sigma)
    if not sigma.real > 2.0 * abs(mu.real) - 1.0:
        raise DomainError("the integral needs Re sigma > 2 |Re mu| - 1")
    half = 0.5 * sigma
    num = loggamma_array(np.array([sigma + 1.0, half + 0.5 + mu, half + 0.5 - mu]))
    den = rgamma_array(np.array([half + 1.0 + kappa, half + 1.0 - kappa]))
    rhs = 0.5 * cmath.exp(num.sum()) * den[0] * den[1]

    def f(x):
        return np.exp((sigma - 1.0) * np.log(x)) * whittaker_w(kappa, mu, x) * whittaker_w(-kappa, mu, x)

    return ReferenceCheck(_x_integral(f), complex(rhs))


def _u_integral(f) -> complex:
    """Real part of int_0^inf f(u) du for an exponentially decaying integrand.

    The integrands satisfy ``f(-u) = conj(f(u))``, so the real part equals
    half the integral over the whole line, which is what the closed forms
    give.  The imaginary part does not vanish when ``x != x0``.
    """
    peak = abs(f(np.array([0.5]))[0])
    cut = U_SCAN_MAX
    for start in np.arange(0.0, U_SCAN_MAX, U_SCAN_STEP * 8):
        grid = start + U_SCAN_STEP * np.arange(1, 9)
        vals = np.abs(f(grid))
        peak = max(peak, vals.max())
        small = vals < U_CUT_RATIO * peak
        if small[-3:].all():
            cut = float(grid[np.argmax(np.flip(np.cumprod(np.flip(small))).astype(bool))])
            break
    else:
        raise NoConvergence(f"u integrand not negligible by u = {U_SCAN_MAX}")

    def real_part(u):
        return np.asarray(f(u)).real

    return complex(integrate(real_part, 0.0, cut, QUAD_TOL, initial_panels=8).value.real)


def check_eq72(k: float, x: float, x0: float) -> ReferenceCheck:
    """``Re int_0^inf G(k-iu) G(k+iu) W_{iu,k-1/2}(x) W_{-iu,k-1/2}(x0) du``.

    The real part is taken because only it equals the closed form; see
    :func:`_u_integral`.

    Closed form ``sqrt(pi) G(2k) (x x0)^k (x+x0)^(1/2-2k) K_{2k-1/2}((x+x0)/2)``.

    Raises
    ------
    DomainError
        Unless ``k > 0`` and ``x, x0 > 0``.
    """
    k = float(k)
    if not k > 0:
        raise DomainError("k must be positive so that Gamma(k +- iu) has no pole on the path")
    if not (x > 0 and x0 > 0):
        raise DomainError("x and x0 must be positive")
    m = k - 0.5
    rhs = (
        math.sqrt(math.pi) * cgamma(2.0 * k).real * (x * x0) ** k * (x + x0) ** (0.5 - 2.0 * k)
        * bessel_k(2.0 * k - 0.5, 0.5 * (x + x0))
    )

    def f(u):
        u = np.asarray(u, dtype=float)
        # split the decaying gamma factor between the two growing W factors
        half_gg = np.exp(0.5 * (loggamma_array(k - 1j * u) + loggamma_array(k + 1j * u)))
        return (half_gg * whittaker_w(1j * u, m, x)) * (half_gg * whittaker_w(-1j * u, m, x0))

    return ReferenceCheck(_u_integral(f), complex(rhs))


def check_eq73(x: float, x0: float) -> ReferenceCheck:
    """``Re int_0^inf sech(pi u) W_{iu,0}(x) W_{-iu,0}(x0) du = sqrt(x x0)/(x+x0) e^(-(x+x0)/2)``.

    Equal to the ``k = 1/2`` case of :func:`check_eq72` divided by ``pi``,
    since ``Gamma(1/2-iu) Gamma(1/2+iu) = pi sech(pi u)``.
    """
    if not (x > 0 and x0 > 0):
        raise DomainError("x and x0 must be positive")
    rhs = math.sqrt(x * x0) / (x + x0) * math.exp(-0.5 * (x + x0))

    def f(u):
        u = np.asarray(u, dtype=float)
        e = np.exp(-2.0 * math.pi * u)
        root_sech = np.sqrt(2.0 * np.sqrt(e) / (1.0 + e))
        return (root_sech * whittaker_w(1j * u, 0.0, x)) * (root_sech * whittaker_w(-1j * u, 0.0, x0))

    return ReferenceCheck(_u_integral(f), complex(rhs))

