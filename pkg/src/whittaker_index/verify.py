"""Invariant suites: closed forms against quadrature, identities, reference integrals.

Each suite returns a list of :class:`CheckRow`, one per named check, holding
the worst relative error seen and the tolerance it was held to.  The grids
are module constants so the test-suite and the command line run exactly the
same points.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .comptonization import GreensParams, check_normalization, greens_function, laplace_F
from .confluent import whittaker_at_pole, whittaker_m, whittaker_w
from .errors import WhittakerIndexError
from .index_integral import (
    SPECIAL_CASE_WEIGHTS,
    IntegralParams,
    enumerate_poles,
    eval_I,
    eval_I_degenerate,
    eval_special_case,
    quadratic_norm,
)
from .oracle import oracle_I, oracle_special_case
from .quadrature import integrate
from .reference import check_eq70, check_eq71, check_eq72, check_eq73, eq70_rhs_without_pi
from .specfun import loggamma_array

__all__ = [
    "CheckRow",
    "SUITES",
    "MAIN_GRID",
    "SPECIAL_POINTS",
    "DEGENERATE_POINTS",
    "DIAGONAL_POINTS",
    "format_table",
    "main_grid_params",
    "richardson_limit",
    "run",
    "suite_compton",
    "suite_identities",
    "suite_oracle",
    "suite_reference",
]

MAIN_KAPPAS = (-1.3, 0.0, 0.7, 1.0, 2.0, 2.4)
MAIN_S = (0.3, 1.0, 2.0 + 1.5j, 0.5 - 2.0j, 0.0)
MAIN_XX0 = ((0.5, 0.5), (1.0, 2.0), (2.0, 5.0))
MAIN_GRID = [(k, s, x, x0) for k in MAIN_KAPPAS for s in MAIN_S for (x, x0) in MAIN_XX0]

SPECIAL_POINTS = [
    (0.3, 1.0, 2.0),
    (1.0, 0.5, 0.5),
    (2.0 + 1.5j, 2.0, 5.0),
    (0.5 - 2.0j, 1.0, 1.0),
    (3.0, 0.7, 1.6),
    (0.6 + 0.4j, 4.0, 2.5),
]

# (kappa, m, x, x0)
DEGENERATE_POINTS = [(k, m, x, x0) for (k, m) in ((1, 0), (2, 0), (2, 1)) for (x, x0) in ((1.0, 1.0), (1.0, 2.0))]
DEGENERATE_EPS = (1e-3, 1e-4, 1e-5)

# (kappa, s, x) with x0 = x
DIAGONAL_POINTS = [
    (0.0, 1.0, 1.0),
    (0.7, 0.3, 2.0),
    (2.0, 2.0 + 1.5j, 0.5),
    (-1.3, 1.0, 3.0),
    (1.0, 0.5 - 2.0j, 1.0),
    (2.4, 0.3, 2.0),
]

EQ70_POINTS = [(0.3, -0.2, 0.1), (0.5, 0.2, 0.3), (1.2, -0.7, 0.25 + 0.1j)]
EQ71_POINTS = [(0.5, 0.2, 1.0), (0.0, 0.0, 1.0), (0.3, 0.1, 0.5)]
EQ72_POINTS = [(1.0, 1.0, 2.0), (0.75, 2.0, 5.0)]
EQ73_POINTS = [(1.0, 1.0), (2.0, 5.0)]

CONSERVATION_POINTS = [(y, x0) for y in (0.5, 1.0, 3.0) for x0 in (0.5, 2.0)]
LAPLACE_POINTS = [(s, x, x0) for s in (1.0, 2.0, 1.0 + 1.0j) for (x, x0) in ((1.0, 2.0), (3.0, 0.8))]
LONG_TIME_Y = 50.0

IDENTITY_TOL = 1e-10
CONNECTION_TOL = 1e-8
LAGUERRE_TOL = 1e-7
MAIN_TOL = 1e-6
SPECIAL_ORACLE_TOL = 1e-7
WEIGHT_TOL = 1e-10
COMPTON_TOL = 1e-4
LONG_TIME_TOL = 1e-8
ORACLE_TOL = 1e-9
RANDOM_SEED = 20250101


@dataclass
class CheckRow:
    """Outcome of one named check."""

    suite: str
    name: str
    max_rel_error: float
    tol: float
    points: int
    seconds: float = 0.0
    failure: str = ""

    @property
    def passed(self) -> bool:
        return not self.failure and self.max_rel_error <= self.tol


def _rel(a, b) -> float:
    return float(abs(a - b) / abs(b))


def _timed(suite: str, name: str, tol: float, body: Callable[[], list[float]]) -> CheckRow:
    start = time.perf_counter()
    try:
        errors = body()
    except WhittakerIndexError as exc:
        return CheckRow(suite, name, math.inf, tol, 0, time.perf_counter() - start, f"{type(exc).__name__}: {exc}")
    errors = np.asarray(errors, dtype=float)
    return CheckRow(suite, name, float(errors.max()), tol, errors.size, time.perf_counter() - start)


def main_grid_params() -> list[IntegralParams]:
    """The closed-form-versus-quadrature grid, minus points outside the domain.

    ``s = 0`` is only valid for ``Re kappa < 1/2``.
    """
    out = []
    for k, s, x, x0 in MAIN_GRID:
        if s == 0 and k >= 0.5:
            continue
        out.append(IntegralParams(k, s, x, x0))
    return out


def richardson_limit(f: Callable[[float], complex], eps=DEGENERATE_EPS) -> complex:
    """Limit ``eps -> 0`` of ``f`` from a geometric sequence of steps.

    The error is assumed to be a power series in ``eps``; with ratio ``r``
    between successive steps each level removes one power.
    """
    vals = [f(e) for e in eps]
    ratio = eps[0] / eps[1]
    level = 1
    while len(vals) > 1:
        factor = ratio**level
        vals = [(factor * vals[i + 1] - vals[i]) / (factor - 1.0) for i in range(len(vals) - 1)]
        level += 1
    return vals[0]


# ---------------------------------------------------------------- identities


def _identity_rows() -> list[CheckRow]:
    suite = "identities"
    rows = []
    u20 = np.linspace(0.05, 20.0, 400)
    u10 = np.linspace(0.0, 10.0, 201)

    def reflection():
        lhs = np.exp(loggamma_array(1.0 + 2j * u20) + loggamma_array(-2j * u20))
        rhs = math.pi * 1j / np.sinh(2.0 * math.pi * u20)
        return np.abs(lhs - rhs) / np.abs(rhs)

    def half_shift(c, poly):
        def body():
            u = u20 if c == 0.5 else u10
            lhs = np.exp(loggamma_array(c - 1j * u) + loggamma_array(c + 1j * u)) * np.cosh(math.pi * u)
            rhs = poly(u)
            return np.abs(lhs - rhs) / np.abs(rhs)

        return body

    def double_angle():
        lhs = np.sinh(2.0 * math.pi * u10)
        rhs = 2.0 * np.sinh(math.pi * u10) * np.cosh(math.pi * u10)
        return np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300)

    rows.append(_timed(suite, "gamma reflection G(1+2iu)G(-2iu)", IDENTITY_TOL, reflection))
    rows.append(_timed(suite, "G(1/2-iu)G(1/2+iu) cosh(pi u) = pi", IDENTITY_TOL,
                       half_shift(0.5, lambda u: np.full(u.shape, math.pi))))
    rows.append(_timed(suite, "sinh(2 pi u) = 2 sinh cosh", IDENTITY_TOL, double_angle))
    rows.append(_timed(suite, "G(-1/2-iu)G(-1/2+iu) cosh(pi u)", IDENTITY_TOL,
                       half_shift(-0.5, lambda u: 4.0 * math.pi / (1.0 + 4.0 * u**2))))
    rows.append(_timed(suite, "G(-3/2-iu)G(-3/2+iu) cosh(pi u)", IDENTITY_TOL,
                       half_shift(-1.5, lambda u: 16.0 * math.pi / ((9.0 + 4.0 * u**2) * (1.0 + 4.0 * u**2)))))
    return rows


def _symmetry_body():
    rng = np.random.default_rng(RANDOM_SEED)
    n = 500
    kappa = rng.uniform(-3.0, 3.0, n)
    u = rng.uniform(0.05, 5.0, n)
    x = rng.uniform(0.2, 10.0, n)
    plus = whittaker_w(kappa, 1j * u, x)
    minus = whittaker_w(kappa, -1j * u, x)
    return np.abs(plus - minus) / np.abs(plus)


def _connection_samples(n=500):
    rng = np.random.default_rng(RANDOM_SEED + 1)
    kappa = rng.uniform(-3.0, 3.0, n) + 1j * rng.uniform(-3.0, 3.0, n)
    mu = rng.uniform(-2.0, 2.0, n) + 1j * rng.uniform(-5.0, 5.0, n)
    z = rng.uniform(0.2, 10.0, n)
    two_mu = 2.0 * mu
    keep = np.abs(two_mu - np.round(two_mu.real)) > 0.05
    return kappa[keep], mu[keep], z[keep]


def _connection_body():
    """W assembled from two M functions against the direct W evaluation."""
    kappa, mu, z = _connection_samples()
    errors = []
    for k, m, x in zip(kappa, mu, z):
        lg = loggamma_array(np.array([-2.0 * m, 0.5 - m - k, 2.0 * m, 0.5 + m - k]))
        c1 = np.exp(lg[0] - lg[1])
        c2 = np.exp(lg[2] - lg[3])
        t1 = c1 * whittaker_m(k, m, x)
        t2 = c2 * whittaker_m(k, -m, x)
        direct = whittaker_w(k, m, x)
        # a double-precision sum of the two terms cancels; it can only be
        # held to rounding of its largest term
        scale = max(abs(direct), abs(t1), abs(t2))
        errors.append(abs(t1 + t2 - direct) / scale)
    return errors


def _laguerre_body():
    z = np.linspace(0.2, 10.0, 50)
    errors = []
    for kappa in (1.0, 2.0, 2.4, 3.1 + 0.4j):
        for n in range(len(enumerate_poles(kappa))):
            mu = kappa - 0.5 - n
            for which, direct in (("W", whittaker_w(kappa, mu, z)), ("M", whittaker_m(kappa, mu, z))):
                closed = whittaker_at_pole(kappa, n, z, which)
                # P_n has real zeros on the grid: scale by the row maximum
                errors.extend(np.abs(direct - closed) / np.abs(closed).max())
    return errors


def suite_identities() -> list[CheckRow]:
    rows = _identity_rows()
    rows.append(_timed("identities", "W symmetry in mu (500 samples)", IDENTITY_TOL, _symmetry_body))
    rows.append(_timed("identities", "connection W = sum of two M (random)", CONNECTION_TOL, _connection_body))
    rows.append(_timed("identities", "Laguerre form at the poles", LAGUERRE_TOL, _laguerre_body))
    return rows


# -------------------------------------------------------------------- oracle


def _main_grid_body():
    return [_rel(eval_I(p).value, oracle_I(p, ORACLE_TOL).value) for p in main_grid_params()]


def _special_oracle_body():
    errors = []
    for kappa in SPECIAL_CASE_WEIGHTS:
        for s, x, x0 in SPECIAL_POINTS:
            closed = eval_special_case(kappa, s, x, x0)
            errors.append(_rel(closed, oracle_special_case(kappa, s, x, x0, ORACLE_TOL).value))
    return errors


def _special_weight_body():
    errors = []
    for kappa, weight in SPECIAL_CASE_WEIGHTS.items():
        for s, x, x0 in SPECIAL_POINTS:
            general = eval_I(IntegralParams(kappa, s, x, x0)).value
            errors.append(_rel(weight * eval_special_case(kappa, s, x, x0), general))
    return errors


def degenerate_errors() -> list[float]:
    errors = []
    for kappa, m, x, x0 in DEGENERATE_POINTS:
        s_m = (kappa - 0.5 - m) ** 2
        exact = eval_I_degenerate(IntegralParams(kappa, s_m, x, x0), m).value
        limit = richardson_limit(lambda e: eval_I(IntegralParams(kappa, s_m + e, x, x0)).value)
        errors.append(_rel(limit, exact))
    return errors


def _diagonal_body():
    errors = []
    for kappa, s, x in DIAGONAL_POINTS:
        closed = quadratic_norm(kappa, s, x).value
        errors.append(_rel(closed, oracle_I(IntegralParams(kappa, s, x, x), ORACLE_TOL).value))
    return errors


def suite_oracle() -> list[CheckRow]:
    return [
        _timed("oracle", "closed form vs quadrature (main grid)", MAIN_TOL, _main_grid_body),
        _timed("oracle", "shortcut formulas vs quadrature", SPECIAL_ORACLE_TOL, _special_oracle_body),
        _timed("oracle", "shortcut formulas vs general path", WEIGHT_TOL, _special_weight_body),
        _timed("oracle", "double-pole limit vs Richardson", MAIN_TOL, degenerate_errors),
        _timed("oracle", "diagonal x = x0 vs quadrature", MAIN_TOL, _diagonal_body),
    ]


# ----------------------------------------------------------------- reference


def _erratum_body():
    # the variant without pi must miss by a factor pi; report |ratio/pi - 1|
    errors = []
    for args in EQ70_POINTS:
        lhs = check_eq70(*args).lhs
        errors.append(abs(lhs / eq70_rhs_without_pi(*args) / math.pi - 1.0))
    return errors


def _reduction_body():
    return [_rel(check_eq72(0.5, x, x0).lhs / math.pi, check_eq73(x, x0).rhs) for x, x0 in EQ73_POINTS]


def suite_reference() -> list[CheckRow]:
    def grid(fn, points):
        return lambda: [fn(*a).rel_error for a in points]

    return [
        _timed("reference", "W W / x over x", MAIN_TOL, grid(check_eq70, EQ70_POINTS)),
        _timed("reference", "missing-pi variant off by pi (1%)", 1e-2, _erratum_body),
        _timed("reference", "x^(sigma-1) W W over x", MAIN_TOL, grid(check_eq71, EQ71_POINTS)),
        _timed("reference", "first-index integral, Bessel K", MAIN_TOL, grid(check_eq72, EQ72_POINTS)),
        _timed("reference", "k = 1/2 reduction", MAIN_TOL, _reduction_body),
        _timed("reference", "sech-weighted first-index integral", MAIN_TOL, grid(check_eq73, EQ73_POINTS)),
    ]


# ------------------------------------------------------------------- compton


def _conservation_body():
    return [abs(check_normalization(x0, y) - 1.0) for y, x0 in CONSERVATION_POINTS]


def laplace_by_quadrature(x: float, x0: float, s: complex) -> complex:
    """``int_0^inf e^(-s y) f_G(x, x0, y) dy``, cut where ``e^(-Re s y) < e^-40``."""
    y_max = 40.0 / complex(s).real

    def f(ys):
        return np.array([np.exp(-s * y) * greens_function(GreensParams(x, x0, y), 1e-9) if y > 0 else 0.0
                         for y in ys])

    return integrate(f, 0.0, y_max, 1e-8, abs_tol=1e-12).value


def _laplace_body():
    return [_rel(laplace_by_quadrature(x, x0, s), laplace_F(x, x0, s)) for s, x, x0 in LAPLACE_POINTS]


def _long_time_body():
    xs = np.linspace(0.1, 10.0, 100)
    errors = []
    for x0 in (0.5, 2.0):
        for x in xs:
            errors.append(abs(greens_function(GreensParams(x, x0, LONG_TIME_Y)) - 0.5 * math.exp(-x)))
    return errors


def suite_compton() -> list[CheckRow]:
    return [
        _timed("compton", "photon number conservation", COMPTON_TOL, _conservation_body),
        _timed("compton", "Laplace transform in y", COMPTON_TOL, _laplace_body),
        _timed("compton", "long-time limit e^-x/2 (abs)", LONG_TIME_TOL, _long_time_body),
    ]


SUITES: dict[str, Callable[[], list[CheckRow]]] = {
    "identities": suite_identities,
    "oracle": suite_oracle,
    "reference": suite_reference,
    "compton": suite_compton,
}


def run(name: str) -> list[CheckRow]:
    """Run one suite, or every suite for ``name == "all"``."""
    if name == "all":
        return [row for suite in SUITES.values() for row in suite()]
    return SUITES[name]()


def format_table(rows: list[CheckRow]) -> str:
    header = f"{'suite':<11} {'check':<42} {'points':>6} {'max rel err':>12} {'tol':>8} {'time':>7}  result"
    lines = [header, "-" * len(header)]
    for r in rows:
        result = "pass" if r.passed else "FAIL"
        err = "-" if math.isinf(r.max_rel_error) else f"{r.max_rel_error:.2e}"
        lines.append(f"{r.suite:<11} {r.name:<42} {r.points:>6} {err:>12} {r.tol:>8.0e} {r.seconds:>6.1f}s  {result}")
        if r.failure:
            lines.append(f"{'':<11} {r.failure}")
    return "\n".join(lines)

