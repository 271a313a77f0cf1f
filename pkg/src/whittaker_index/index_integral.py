"""Closed-form evaluation of the index integral

    I(s) = int_0^inf u sinh(2 pi u) Gamma(1/2-k-iu) Gamma(1/2-k+iu) / (s + u^2)
           * W_{k,iu}(x) W_{k,iu}(x0) du

by residues: one leading term from the pole at ``u = i sqrt(s)`` plus one
term per gamma-function pole ``u_n = i(k - 1/2 - n)`` in the upper half
plane.  When ``s`` coincides with one of the ``s_m = (k - 1/2 - m)^2`` the two
poles merge and the double-pole limit ``K`` replaces the pair.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .confluent import laguerre, whittaker_m, whittaker_w
from .errors import ConditioningWarning, DegenerateCase, DomainError, ZeroProduct
from .specfun import EULER_GAMMA, clog_gamma, digamma, pochhammer, pole_distance

__all__ = [
    "EvalResult",
    "IntegralParams",
    "Pole",
    "PoleSet",
    "SPECIAL_CASE_WEIGHTS",
    "degenerate_index",
    "enumerate_poles",
    "eval_I",
    "eval_I_degenerate",
    "eval_special_case",
    "leading_term",
    "numerical_H",
    "principal_sqrt",
    "quadratic_norm",
    "residue_term",
    "x_ordering",
]

EDGE_TOL = 1e-9
DEGENERATE_TOL = 1e-10
CONDITIONING_TOL = 1e-6

# ratio between the general integrand and the integrands of the kappa = 0, 1, 2
# shortcut formulas (gamma reflection identities folded in)
SPECIAL_CASE_WEIGHTS = {0: 2.0 * math.pi, 1: 8.0 * math.pi, 2: 32.0 * math.pi}


def principal_sqrt(s: complex) -> complex:
    """Square root with ``Re >= 0``; the cut runs along the negative real axis."""
    return cmath.sqrt(complex(s))


def _near_positive_half_integer(kappa: complex) -> bool:
    r = kappa.real - 0.5
    return r > -EDGE_TOL and abs(r - round(r)) < EDGE_TOL


@dataclass(frozen=True)
class IntegralParams:
    """Parameters ``(kappa, s, x, x0)`` of the index integral.

    Validation rejects ``s`` on the closed negative real axis and the
    half-integer lines of ``Re kappa`` where the integral diverges.  With
    ``allow_edge=True`` the half-integer checks are skipped (the caller takes
    responsibility for convergence).
    """

    kappa: complex
    s: complex
    x: float
    x0: float
    allow_edge: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kappa", complex(self.kappa))
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "x0", float(self.x0))
        if not (self.x > 0 and self.x0 > 0):
            raise DomainError("x and x0 must be positive")
        if not all(map(math.isfinite, (self.kappa.real, self.kappa.imag, self.s.real, self.s.imag))):
            raise DomainError("kappa and s must be finite")
        if self.s.real < 0 and abs(self.s.imag) < 1e-12:
            raise DomainError("s lies on the negative real semiaxis, where the integral is not defined")
        if self.allow_edge:
            return
        if _near_positive_half_integer(self.kappa):
            if self.kappa.imag != 0:
                raise DomainError("Re kappa is a positive half-integer while Im kappa != 0: the integral diverges")
            if self.s == 0:
                raise DomainError("s = 0 with Re kappa a positive half-integer: the integral diverges")
            raise DomainError(
                "Re kappa is within 1e-9 of a positive half-integer (rejected by default, use allow_edge=True or --allow-edge)"
            )

    @property
    def x_min(self) -> float:
        return min(self.x, self.x0)

    @property
    def x_max(self) -> float:
        return max(self.x, self.x0)


@dataclass(frozen=True)
class Pole:
    n: int
    u_n: complex
    alpha_n: complex

    @property
    def s_n(self) -> complex:
        """Value of ``s`` at which the ``1/(s+u^2)`` pole meets this one."""
        return (self.alpha_n / 2.0) ** 2


@dataclass(frozen=True)
class PoleSet:
    entries: tuple[Pole, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


@dataclass
class EvalResult:
    """Value of I(s) with its decomposition."""

    value: complex
    leading_term: complex
    residue_terms: list[complex] = field(default_factory=list)
    degenerate: bool = False
    K_term: complex | None = None
    m: int | None = None

    @property
    def method(self) -> str:
        return "degenerate" if self.degenerate else "closed"


def enumerate_poles(kappa: complex) -> PoleSet:
    """Gamma-function poles of the integrand in the upper half ``u`` plane."""
    kappa = complex(kappa)
    if kappa.real < 0.5:
        return PoleSet(())
    top = math.floor(kappa.real - 0.5)
    entries = []
    for n in range(top + 1):
        alpha = 2.0 * kappa - 2.0 * n - 1.0
        entries.append(Pole(n, 1j * (kappa - 0.5 - n), alpha))
    return PoleSet(tuple(entries))


def x_ordering(x: float, x0: float) -> tuple[float, float]:
    """Return ``(x_min, x_max)``."""
    return (x, x0) if x <= x0 else (x0, x)


def _log_gamma_shifted(p: IntegralParams, root: complex, g_arg: complex) -> complex:
    """ln Gamma(1/2 - kappa + sqrt(s)), accurate when the argument nears a pole.

    Close to ``s_m`` the argument is ``-m + delta`` with a tiny ``delta``.
    Forming it from ``sqrt(s)`` would leave an absolute rounding error of
    order ``1e-16``, i.e. a relative error ``1e-16/delta`` that survives the
    cancellation against the matching residue term.  Instead ``delta`` is
    taken from ``(s - s_m) / (sqrt(s) + sqrt(s_m))`` and
    ``Gamma(-m + delta) = Gamma(1 + delta) / prod_{j=0}^{m} (delta - j)``.
    """
    m = round(-g_arg.real)
    if m < 0 or abs(g_arg + m) > 1e-2:
        return clog_gamma(g_arg)
    root_m = p.kappa - 0.5 - m
    if root_m.real < 0:
        return clog_gamma(g_arg)
    delta = (p.s - root_m**2) / (root + root_m)
    out = clog_gamma(1.0 + delta)
    for j in range(m + 1):
        out -= cmath.log(delta - j)
    return out


def leading_term(p: IntegralParams) -> complex:
    """Residue at ``u = i sqrt(s)``.

    Raises
    ------
    DegenerateCase
        When ``1/2 - kappa + sqrt(s)`` is within ``1e-9`` of a non-positive
        integer, i.e. ``s`` sits on one of the ``s_m``.
    """
    root = principal_sqrt(p.s)
    g_arg = 0.5 - p.kappa + root
    if pole_distance(g_arg) < EDGE_TOL:
        raise DegenerateCase(f"s = {p.s} coincides with a gamma-function pole; use the double-pole limit")
    x_min, x_max = x_ordering(p.x, p.x0)
    log_ratio = _log_gamma_shifted(p, root, g_arg) - clog_gamma(1.0 + 2.0 * root)
    w = whittaker_w(p.kappa, root, x_max)
    m = whittaker_m(p.kappa, root, x_min)
    return math.pi**2 * cmath.exp(log_ratio) * w * m


def _residue_factor(kappa: complex, n: int, x: float, x0: float) -> complex:
    """Everything in the n-th residue term except ``-1/(4s - alpha^2)``."""
    # canonical order keeps the result bit-for-bit symmetric in (x, x0)
    x, x0 = x_ordering(x, x0)
    alpha = 2.0 * kappa - 2.0 * n - 1.0
    log_part = (
        -0.5 * (x + x0)
        + math.lgamma(n + 1)
        - clog_gamma(alpha + n + 1.0)
        + 0.5 * (alpha + 1.0) * cmath.log(x * x0)
    )
    return 4.0 * math.pi**2 * alpha * cmath.exp(log_part) * laguerre(n, alpha, x) * laguerre(n, alpha, x0)


def residue_term(p: IntegralParams, n: int) -> complex:
    """Contribution of the gamma-function pole ``u_n``.

    Raises
    ------
    DomainError
        If ``n`` is outside ``0 .. floor(Re kappa - 1/2)``.
    DegenerateCase
        If ``|4s - alpha^2| < 1e-10 max(1, |4s|)``.
    """
    poles = enumerate_poles(p.kappa)
    if not 0 <= n < len(poles):
        raise DomainError(f"pole index n = {n} outside 0..{len(poles) - 1}")
    alpha = poles[n].alpha_n
    denom = 4.0 * p.s - alpha**2
    if abs(denom) < DEGENERATE_TOL * max(1.0, abs(4.0 * p.s)):
        raise DegenerateCase(f"s = {p.s} coincides with s_{n}; use the double-pole limit")
    return -_residue_factor(p.kappa, n, p.x, p.x0) / denom


def degenerate_index(p: IntegralParams) -> tuple[int | None, float]:
    """Index ``m`` of the nearest ``s_m`` and the relative distance to it."""
    best, dist = None, math.inf
    for pole in enumerate_poles(p.kappa):
        d = abs(p.s - pole.s_n) / max(1.0, abs(p.s))
        if d < dist:
            best, dist = pole.n, d
    return best, dist


def eval_I(p: IntegralParams) -> EvalResult:
    """Closed-form value of the index integral.

    Degenerate ``s`` (relative distance below ``1e-10`` from some ``s_m``) is
    routed to :func:`eval_I_degenerate`.  Between ``1e-10`` and ``1e-6`` the
    simple-pole formula is still used and a :class:`ConditioningWarning` is
    issued.
    """
    m, dist = degenerate_index(p)
    if m is not None and dist < DEGENERATE_TOL:
        return eval_I_degenerate(p, m)
    if m is not None and dist < CONDITIONING_TOL:
        warnings.warn(
            f"s is within {dist:.1e} (relative) of the double pole s_{m}; digits are lost to cancellation",
            ConditioningWarning,
            stacklevel=2,
        )
    lead = leading_term(p)
    residues = [residue_term(p, pole.n) for pole in enumerate_poles(p.kappa)]
    return EvalResult(lead + sum(residues), lead, residues)


def _log_product(kappa, beta, x_min, x_max):
    return cmath.log(whittaker_w(kappa, beta, x_max) * whittaker_m(kappa, beta, x_min))


def _richardson_central(f, beta, h):
    d1 = (f(beta + h) - f(beta - h)) / (2.0 * h)
    d2 = (f(beta + h / 2) - f(beta - h / 2)) / h
    return (4.0 * d2 - d1) / 3.0


def numerical_H(kappa: complex, s_m: complex, x_min: float, x_max: float) -> complex:
    """Derivative of ``ln[W_{k,b}(x_max) M_{k,b}(x_min)]`` in ``b`` at ``b = sqrt(s_m)``.

    Central differences with ``h = 1e-4 max(1, |b|)`` refined by one
    Richardson step at ``h/2``.

    Raises
    ------
    ZeroProduct
        If ``|W M| < 1e-300`` at any stencil point.
    """
    kappa = complex(kappa)
    beta = principal_sqrt(s_m)
    h = 1e-4 * max(1.0, abs(beta))
    for b in (beta - h, beta - h / 2, beta, beta + h / 2, beta + h):
        prod = whittaker_w(kappa, b, x_max) * whittaker_m(kappa, b, x_min)
        if abs(prod) < 1e-300:
            raise ZeroProduct(f"W*M vanishes at beta = {b}; its logarithmic derivative is undefined")
    # branch-safe: differentiate the log of the ratio to the central value
    centre = whittaker_w(kappa, beta, x_max) * whittaker_m(kappa, beta, x_min)
    return _richardson_central(
        lambda b: cmath.log(whittaker_w(kappa, b, x_max) * whittaker_m(kappa, b, x_min) / centre), beta, h
    )


def _product_derivative(kappa: complex, beta: complex, x_min: float, x_max: float) -> complex:
    """d/db of W_{k,b}(x_max) M_{k,b}(x_min), same stencil as :func:`numerical_H`."""
    h = 1e-4 * max(1.0, abs(beta))
    return _richardson_central(
        lambda b: whittaker_w(kappa, b, x_max) * whittaker_m(kappa, b, x_min), beta, h
    )


def harmonic_bracket(m: int) -> float:
    """The harmonic-number piece ``-1/(m+1) + sum_{n=1}^{m+1} 1/n`` of the K bracket."""
    return -1.0 / (m + 1) + sum(1.0 / n for n in range(1, m + 2))


def _k_term(kappa: complex, m: int, x: float, x0: float) -> complex:
    lam = 2.0 * kappa - 2.0 * m - 1.0
    x_min, x_max = x_ordering(x, x0)
    pref_log = math.lgamma(m + 1) - clog_gamma(lam + m + 1.0)
    envelope = cmath.exp(-0.5 * (x_min + x_max) + 0.5 * (lam + 1.0) * cmath.log(x_min * x_max))
    lag = laguerre(m, lam, x_min) * laguerre(m, lam, x_max)
    bracket = -EULER_GAMMA + 1.0 / lam - 2.0 * digamma(lam + 1.0) + harmonic_bracket(m)
    # envelope*lag*H written as a derivative of W*M itself, which stays finite
    # where a Laguerre factor vanishes and ln(W M) is singular
    scale = (-1) ** m * pochhammer(lam + 1.0, m) / math.factorial(m) ** 2
    h_part = scale * _product_derivative(kappa, lam / 2.0, x_min, x_max)
    return math.pi**2 * cmath.exp(pref_log) * (envelope * lag * bracket + h_part)


def eval_I_degenerate(p: IntegralParams, m: int) -> EvalResult:
    """Value of the integral at ``s = s_m`` from the double-pole limit.

    The result combines ``K`` with the simple-pole terms ``n != m``; ``p.s``
    itself is replaced by the exact ``s_m``.

    Raises
    ------
    DomainError
        If ``m`` is outside ``0 .. floor(Re kappa - 1/2)``.
    """
    poles = enumerate_poles(p.kappa)
    if not 0 <= m < len(poles):
        raise DomainError(f"m = {m} outside the range 0..{len(poles) - 1} of double-pole indices")
    s_m = poles[m].s_n
    exact = IntegralParams(p.kappa, s_m, p.x, p.x0, allow_edge=p.allow_edge)
    k_term = _k_term(p.kappa, m, p.x, p.x0)
    residues = [residue_term(exact, pole.n) for pole in poles if pole.n != m]
    return EvalResult(k_term + sum(residues), 0j, residues, degenerate=True, K_term=k_term, m=m)


def quadratic_norm(kappa: complex, s: complex, x: float) -> EvalResult:
    """The diagonal case ``x0 = x``."""
    return eval_I(IntegralParams(kappa, s, x, x))


def eval_special_case(kappa: int, s: complex, x: float, x0: float) -> complex:
    """Shortcut formulas for ``kappa = 0, 1, 2``.

    These evaluate integrals whose integrands equal the general one divided
    by ``SPECIAL_CASE_WEIGHTS[kappa]``, namely

    * ``k=0``: ``u sinh(pi u) / (s+u^2) W W``
    * ``k=1``: ``u sinh(pi u) / ((1+4u^2)(s+u^2)) W W``
    * ``k=2``: ``u sinh(pi u) / ((9+4u^2)(1+4u^2)(s+u^2)) W W``

    Raises
    ------
    DegenerateCase
        At ``s = 1/4`` (``k = 1, 2``) and ``s = 9/4`` (``k = 2``).
    """
    if kappa not in SPECIAL_CASE_WEIGHTS:
        raise DomainError("shortcut formulas exist for kappa in {0, 1, 2} only")
    p = IntegralParams(kappa, s, x, x0)
    s = p.s
    x_min, x_max = x_ordering(x, x0)
    root = principal_sqrt(s)
    excluded = {0: (), 1: (0.25,), 2: (0.25, 2.25)}[kappa]
    for point in excluded:
        if abs(s - point) < DEGENERATE_TOL * max(1.0, abs(s)):
            raise DegenerateCase(f"s = {point} must be treated with the double-pole limit")
    wm = whittaker_w(kappa, root, x_max) * whittaker_m(kappa, root, x_min)
    ratio = cmath.exp(clog_gamma(root + 0.5 - kappa) - clog_gamma(1.0 + 2.0 * root))
    env = x * x0 * math.exp(-0.5 * (x + x0))
    if kappa == 0:
        return math.pi / 2 * ratio * wm
    if kappa == 1:
        return math.pi / 8 * ratio * wm - math.pi / 2 * env / (4.0 * s - 1.0)
    return math.pi / 32 * ratio * wm - math.pi / 16 * env * (
        x * x0 / (4.0 * s - 9.0) + (2.0 - x) * (2.0 - x0) / (4.0 * s - 1.0)
    )
