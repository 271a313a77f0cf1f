"""Time-dependent Green's function for thermal Comptonization.

A photon population injected at dimensionless energy ``x0`` into a hot
Maxwellian plasma evolves under the Kompaneets equation.  Its Green's
function is

    f_G(x, x0, y) = (32/pi) e^(-9y/4) x0^-2 x^-2 e^((x0-x)/2)
                    * int_0^inf e^(-u^2 y) k2(u; x, x0) du
                    + e^(-x)/2 + e^(-x-2y)/2 (2-x)(2-x0)/(x0 x)

with ``k2`` the kernel :func:`whittaker_index.oracle.kernel_k2` shared with the
``kappa = 2`` shortcut formula.  Its Laplace transform in ``y`` has the
closed form implemented by :func:`laplace_F`, which the tests use to check
``f_G`` numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .confluent import whittaker_m, whittaker_w
from .errors import DomainError, PoleError
from .oracle import kernel_k2
from .quadrature import integrate, tanh_sinh
from .specfun import clog_gamma, pole_distance

__all__ = [
    "ELECTRON_REST_ENERGY_KEV",
    "SPEED_OF_LIGHT_CM_S",
    "THOMSON_CROSS_SECTION_CM2",
    "GreensParams",
    "PhysicalParams",
    "check_normalization",
    "convolve_spectrum",
    "greens_function",
    "laplace_F",
    "load_spectrum",
    "to_dimensionless",
]

# CODATA 2018
THOMSON_CROSS_SECTION_CM2 = 6.6524587321e-25
SPEED_OF_LIGHT_CM_S = 2.99792458e10
ELECTRON_REST_ENERGY_KEV = 510.99895000

# the u-integral is cut where exp(-u^2 y) < exp(-U_EXPONENT)
U_EXPONENT = 40.0
# absolute accuracy floor of f_G
F_G_FLOOR = 1e-20
# lower end of the x quadrature in the normalization check
X_LOW = 1e-4


@dataclass(frozen=True)
class GreensParams:
    """Dimensionless photon energy ``x``, injection energy ``x0`` and time ``y``."""

    x: float
    x0: float
    y: float

    def __post_init__(self):
        if not (self.x > 0 and self.x0 > 0):
            raise DomainError("x and x0 must be positive")
        if not self.y >= 0:
            raise DomainError("y must be non-negative")


@dataclass(frozen=True)
class PhysicalParams:
    """Physical inputs.

    Energies (``epsilon``, ``epsilon0``, ``kTe``) are in keV, ``n_e`` in
    cm^-3 and times in seconds.
    """

    epsilon: float
    epsilon0: float
    kTe: float
    n_e: float
    t: float
    t0: float = 0.0


def to_dimensionless(p: PhysicalParams) -> GreensParams:
    """Photon energies in units of ``kTe`` and the Compton ``y`` parameter."""
    if not p.kTe > 0:
        raise DomainError("electron temperature kTe must be positive")
    if p.t < p.t0:
        raise DomainError("t must not precede the injection time t0")
    y = p.n_e * THOMSON_CROSS_SECTION_CM2 * SPEED_OF_LIGHT_CM_S * (p.kTe / ELECTRON_REST_ENERGY_KEV) * (p.t - p.t0)
    return GreensParams(p.epsilon / p.kTe, p.epsilon0 / p.kTe, y)


def _closed_terms(x: float, x0: float, y: float) -> float:
    return 0.5 * math.exp(-x) + 0.5 * math.exp(-x - 2.0 * y) * (2.0 - x) * (2.0 - x0) / (x0 * x)


def greens_function(g: GreensParams, tol: float = 1e-10) -> float:
    """Green's function ``f_G(x, x0, y)`` for ``y > 0``.

    The ``u`` integral is cut at ``sqrt(40/y)``, where ``exp(-u^2 y)`` has
    fallen below ``e^-40``.

    Raises
    ------
    DomainError
        At ``y = 0``, where the Green's function is the distribution
        ``x0^-2 delta(x - x0)`` and has no pointwise value.
    """
    if g.y == 0:
        raise DomainError("y = 0 is the delta-function initial condition x0^-2 delta(x - x0); no pointwise value")
    x, x0, y = g.x, g.x0, g.y
    log_pref = math.log(32.0 / math.pi) - 2.25 * y - 2.0 * math.log(x0 * x) + 0.5 * (x0 - x)
    closed = _closed_terms(x, x0, y)
    u_max = math.sqrt(U_EXPONENT / y)

    def integrand(u):
        return np.exp(-u * u * y) * kernel_k2(u, x, x0).real

    # absolute floor, in u-integral units: a fraction tol of the equilibrium
    # term, but never below F_G_FLOOR, the rounding level left by the
    # cancellation inside W at large x
    abs_tol = max(tol * 0.5 * math.exp(-x), F_G_FLOOR) * math.exp(-log_pref)
    res = integrate(integrand, 0.0, u_max, tol, abs_tol=abs_tol, initial_panels=4)
    return float(math.exp(log_pref) * res.value.real + closed)


def laplace_F(x: float, x0: float, s: complex) -> complex:
    """Laplace transform of the Green's function in ``y``.

    Raises
    ------
    PoleError
        Within ``1e-9`` of the poles of ``Gamma(mu - 3/2)``, ``mu = sqrt(s + 9/4)``
        (``s = 0`` and ``s = -2`` among them).
    """
    if not (x > 0 and x0 > 0):
        raise DomainError("x and x0 must be positive")
    mu = cmath.sqrt(complex(s) + 2.25)
    if pole_distance(mu - 1.5) < 1e-9:
        raise PoleError(f"Gamma(mu - 3/2) has a pole at s = {s}")
    x_min, x_max = min(x, x0), max(x, x0)
    ratio = cmath.exp(clog_gamma(mu - 1.5) - clog_gamma(1.0 + 2.0 * mu))
    pref = math.exp(-2.0 * math.log(x0 * x) + 0.5 * (x0 - x))
    return pref * ratio * whittaker_m(2.0, mu, x_min) * whittaker_w(2.0, mu, x_max)


def _x_upper(x0: float, y: float, tol: float) -> float:
    """First ``x`` beyond the peak where ``x^2 f_G`` drops below ``1e-14``."""
    x = max(2.0 * x0, 10.0)
    while x < 50.0:
        if x * x * abs(greens_function(GreensParams(x, x0, y), tol)) < 1e-14:
            return x
        x += 5.0
    return 50.0


def check_normalization(x0: float, y: float, tol: float = 1e-10) -> float:
    """Photon number ``int_0^inf x^2 f_G(x, x0, y) dx``; should equal one.

    The range is cut above where ``x^2 f_G < 1e-14``.  Below ``X_LOW`` the
    integrand is replaced by the power law ``A x^p`` fitted at ``X_LOW`` and
    ``X_LOW/2`` and integrated exactly.  (Closer to zero the ``u`` integrand
    oscillates like ``x^(2iu)`` and direct quadrature becomes wasteful.)
    """
    if not y > 0:
        raise DomainError("normalization needs y > 0")
    x_hi = _x_upper(x0, y, tol)

    def photon_density(x):
        return x * x * greens_function(GreensParams(x, x0, y), tol)

    def integrand(xs):
        return np.array([photon_density(x) for x in xs])

    g1 = photon_density(X_LOW)
    g2 = photon_density(0.5 * X_LOW)
    head = 0.0
    if g1 != 0.0 and g2 != 0.0 and g1 * g2 > 0:
        power = math.log2(g1 / g2)
        if power > -1.0:
            head = g1 * X_LOW / (power + 1.0)
    # split at x0 so the peak at small y sits on a panel edge
    lo = max(x0, 2.0 * X_LOW)
    res = tanh_sinh(integrand, X_LOW, lo, 1e-9) + tanh_sinh(integrand, lo, x_hi, 1e-9)
    return float(head + res.value.real)


def load_spectrum(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column ``x0 value`` table; ``#`` starts a comment."""
    data = np.loadtxt(Path(path), comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError("spectrum file must have exactly two columns: x0 value")
    x0, values = data[:, 0], data[:, 1]
    if np.any(np.diff(x0) <= 0):
        raise ValueError("x0 column must be strictly ascending")
    if x0[0] <= 0:
        raise DomainError("x0 values must be positive")
    return x0, values


def convolve_spectrum(x0_grid, values, x: float, y: float, tol: float = 1e-8) -> float:
    """Occupation at ``(x, y)`` for an arbitrary initial spectrum.

    With ``f(x0, 0)`` given on ``x0_grid`` (linearly interpolated, zero
    outside the table) the solution is
    ``f(x, y) = int f_G(x, x0, y) f(x0, 0) x0^2 dx0``.
    """
    x0_grid = np.asarray(x0_grid, dtype=float)
    values = np.asarray(values, dtype=float)

    def integrand(x0s):
        init = np.interp(x0s, x0_grid, values)
        return np.array([
            g * x0 * x0 * greens_function(GreensParams(x, x0, y), tol)
            for x0, g in zip(x0s, init)
        ])

    res = integrate(integrand, x0_grid[0], x0_grid[-1], 1e-8, abs_tol=1e-14, initial_panels=len(x0_grid) - 1)
    return float(res.value.real)
