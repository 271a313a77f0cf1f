"""Kummer and Whittaker functions with complex parameters and real argument.

Conventions::

    M_{k,m}(z) = z^(m+1/2) e^(-z/2) Phi(1/2+m-k, 1+2m; z)
    W_{k,m}(z) = z^(m+1/2) e^(-z/2) Psi(1/2+m-k, 1+2m; z)

``Psi`` (and hence ``W``) is assembled from two ``Phi`` series through the
connection formula

    Psi(a,b,z) = Gamma(1-b)/Gamma(a-b+1) Phi(a,b,z)
               + Gamma(b-1)/Gamma(a) z^(1-b) Phi(a-b+1, 2-b, z).

The two terms can cancel (large ``z``, large ``|kappa|``).  The cancellation
is measured on every evaluation; when more than ``RETRY_DIGITS`` digits are
lost the value is recomputed in extended precision (``mpmath``) with enough
guard digits.  When ``b`` is within ``INTEGER_B_TOL`` of an integer the
connection formula is singular and the value is taken from the symmetric
average at ``b +- delta`` followed by one Richardson step.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, NoConvergence, PoleError, PrecisionLoss
from .specfun import POLE_TOL, loggamma_array, pole_distance

__all__ = [
    "WhittakerIndices",
    "kummer_phi",
    "kummer_psi",
    "laguerre",
    "whittaker_at_pole",
    "whittaker_m",
    "whittaker_w",
    "whittaker_w_terms",
]

INTEGER_B_TOL = 1e-8
INTEGER_B_DELTA = 1e-5
LOSS_DIGITS = 6.0
RETRY_DIGITS = 3.0
MP_OFFSET_DIGITS = 25
SERIES_CAP = 10_000
MAX_ARGUMENT = 60.0
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class WhittakerIndices:
    """First and second Whittaker indices with the Kummer parameters they map to."""

    kappa: complex
    mu: complex

    @property
    def a(self) -> complex:
        return 0.5 + self.mu - self.kappa

    @property
    def b(self) -> complex:
        return 1.0 + 2.0 * self.mu

    @property
    def integer_b(self) -> bool:
        return _integer_distance(self.b) < INTEGER_B_TOL

    def m(self, z):
        return whittaker_m(self, z)

    def w(self, z):
        return whittaker_w(self, z)


def _integer_distance(b):
    b = np.asarray(b, dtype=complex)
    return np.abs(b - np.round(b.real))


def _log_rgamma(z):
    """-ln Gamma(z), with -inf where 1/Gamma vanishes."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, complex(-np.inf, 0.0))
    regular = pole_distance(z) >= POLE_TOL
    if regular.any():
        out[regular] = -loggamma_array(z[regular])
    return out


def _log_rgamma_sum(c, d):
    """-ln Gamma(c + d), accurate when ``c + d`` is close to a pole.

    Near ``-N`` the sum is re-formed as ``w = (c + N) + d`` (exact for
    moderate ``c`` with a short binary expansion, such as ``1/2 - kappa``
    for decimal ``kappa``) and the recurrence
    ``1/Gamma(w - N) = prod_{j=0}^{N} (w - j) / Gamma(w + 1)`` is applied,
    so the distance to the pole keeps its full relative accuracy.
    """
    c, d = np.broadcast_arrays(np.asarray(c, dtype=complex), np.asarray(d, dtype=complex))
    z = c + d
    shift = np.round(-z.real)
    near = (shift >= 0) & (np.abs(z + shift) < 0.25)
    out = _log_rgamma(z)
    if near.any():
        n = shift[near]
        w = (c[near] + n) + d[near]
        acc = -loggamma_array(w + 1.0)
        with np.errstate(divide="ignore"):
            for j in range(int(n.max()) + 1):
                active = j <= n
                acc[active] += np.log(w[active] - j)
        out[near] = acc
    return out


def _phi_series(a, b, z):
    """Vectorized Phi(a,b,z) by its power series.

    Returns the sum and the largest term magnitude met, which measures the
    internal cancellation of the series.
    """
    a, b, z = np.broadcast_arrays(
        np.asarray(a, dtype=complex), np.asarray(b, dtype=complex), np.asarray(z, dtype=complex)
    )
    term = np.ones(a.shape, dtype=complex)
    total = term.copy()
    biggest = np.ones(a.shape)
    active = np.ones(a.shape, dtype=bool)
    n = 0
    while active.any():
        if n >= SERIES_CAP:
            raise NoConvergence(f"Phi series did not converge in {SERIES_CAP} terms")
        ratio = (a[active] + n) / (b[active] + n) * z[active] / (n + 1)
        t = term[active] * ratio
        term[active] = t
        total[active] += t
        mag = np.abs(t)
        biggest[active] = np.maximum(biggest[active], mag)
        # stop once the term is negligible and the tail is geometrically bounded
        done = ((mag <= 0.25 * _EPS * np.abs(total[active])) & (np.abs(ratio) < 0.5)) | (t == 0)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        n += 1
    return total, biggest


def _check_argument(z):
    if np.any(np.abs(np.asarray(z)) > MAX_ARGUMENT):
        raise NoConvergence(f"argument beyond {MAX_ARGUMENT:g} is outside the series range")


def kummer_phi(a, b, z):
    """Kummer's confluent hypergeometric function Phi(a, b, z) = 1F1(a; b; z).

    Raises
    ------
    PoleError
        If ``b`` is a non-positive integer and the series does not terminate
        before reaching the pole.
    NoConvergence
        If ``|z| > 60`` or the 10000-term cap is hit.
    """
    a_arr = np.asarray(a, dtype=complex)
    b_arr = np.asarray(b, dtype=complex)
    scalar = a_arr.ndim == 0 and b_arr.ndim == 0 and np.ndim(z) == 0
    _check_argument(z)
    a_arr = a_arr.copy() if a_arr.ndim else a_arr.reshape(1).copy()
    a_arr, b_arr = np.broadcast_arrays(a_arr, b_arr)
    a_arr = a_arr.copy()
    b_pole = pole_distance(b_arr) < POLE_TOL
    if b_pole.any():
        a_int = pole_distance(a_arr) < POLE_TOL
        ok = a_int & (np.round(a_arr.real) > np.round(b_arr.real))
        if not np.all(ok[b_pole]):
            raise PoleError("Phi(a, b, z) is undefined at non-positive integer b")
        a_arr[a_int] = np.round(a_arr[a_int].real)
    value, _ = _phi_series(a_arr, b_arr, z)
    if scalar:
        return complex(value.ravel()[0])
    return value


def _psi_parts(c, mu, logz):
    """Log-coefficients and Phi factors of the connection formula (double precision).

    Parameters are ``a = c + mu`` and ``b = 1 + 2 mu``.  Keeping ``c`` and
    ``mu`` separate means that ``a``, ``a - b + 1 = c - mu`` and ``b - 1 = 2 mu``
    are each formed by a single rounding, so none of them suffers
    cancellation when it is small.
    """
    z = np.exp(logz).real
    phi1, big1 = _phi_series(c + mu, 1.0 + 2.0 * mu, z)
    phi2, big2 = _phi_series(c - mu, 1.0 - 2.0 * mu, z)
    lc1 = loggamma_array(-2.0 * mu) + _log_rgamma_sum(c, -mu)
    lc2 = loggamma_array(2.0 * mu) + _log_rgamma_sum(c, mu) - 2.0 * mu * logz
    return lc1, phi1, big1, lc2, phi2, big2


def _connection_double(c, mu, logz, extra_log):
    """exp(extra_log) * Psi(c + mu, 1 + 2 mu, z) and its digit loss."""
    lc1, phi1, big1, lc2, phi2, big2 = _psi_parts(c, mu, logz)
    l1 = lc1 + extra_log
    l2 = lc2 + extra_log
    c1 = np.exp(l1)
    c2 = np.exp(l2)
    value = c1 * phi1 + c2 * phi2
    # rounding in each term: the series (largest partial term) plus the
    # coefficient, whose relative error grows with the size of its logarithm
    with np.errstate(invalid="ignore"):
        noise = (np.abs(c1) * np.maximum(big1, np.abs(phi1)) * (1.0 + np.nan_to_num(np.abs(l1), posinf=0.0))
                 + np.abs(c2) * np.maximum(big2, np.abs(phi2)) * (1.0 + np.nan_to_num(np.abs(l2), posinf=0.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        loss = np.log10(noise / np.abs(value))
    loss = np.where(np.isfinite(loss), loss, 16.0)
    return value, loss


def _near_integer_double(c, mu, logz, extra_log):
    """Richardson-refined symmetric average about an integer ``2 mu``."""
    def averaged(delta):
        hi, loss_hi = _connection_double(c, mu + 0.5 * delta, logz, extra_log + 0.5 * delta * logz)
        lo, loss_lo = _connection_double(c, mu - 0.5 * delta, logz, extra_log - 0.5 * delta * logz)
        return 0.5 * (hi + lo), np.maximum(loss_hi, loss_lo)

    coarse, loss_c = averaged(INTEGER_B_DELTA)
    fine, loss_f = averaged(0.5 * INTEGER_B_DELTA)
    return (4.0 * fine - coarse) / 3.0, np.maximum(loss_c, loss_f)


# -- extended precision ------------------------------------------------------

def _phi_series_mp(a, b, z):
    term = mpmath.mpc(1)
    total = mpmath.mpc(1)
    biggest = mpmath.mpf(1)
    eps = mpmath.eps
    n = 0
    while True:
        if n >= SERIES_CAP:
            raise NoConvergence(f"Phi series did not converge in {SERIES_CAP} terms")
        ratio = (a + n) / (b + n) * z / (n + 1)
        term *= ratio
        total += term
        mag = abs(term)
        biggest = max(biggest, mag)
        n += 1
        if term == 0 or (mag <= eps * abs(total) and abs(ratio) < 0.5):
            return total, biggest


def _connection_mp(c, mu, z, extra_log):
    phi1, big1 = _phi_series_mp(c + mu, 1 + 2 * mu, z)
    phi2, big2 = _phi_series_mp(c - mu, 1 - 2 * mu, z)
    scale = mpmath.exp(extra_log)
    c1 = mpmath.gamma(-2 * mu) * mpmath.rgamma(c - mu) * scale
    c2 = mpmath.gamma(2 * mu) * mpmath.rgamma(c + mu) * mpmath.power(z, -2 * mu) * scale
    value = c1 * phi1 + c2 * phi2
    noise = abs(c1) * big1 + abs(c2) * big2
    loss = float(mpmath.log10(noise / abs(value))) if value != 0 else float(mpmath.mp.dps)
    return value, loss


def _psi_scaled_mp(c, mu, z, extra_log, near_integer):
    delta = mpmath.mpf(10) ** (-MP_OFFSET_DIGITS)
    two_mu = 2 * mu
    if not near_integer or abs(two_mu - mpmath.nint(two_mu.real)) >= delta:
        # off the integer the MP_OFFSET_DIGITS guard digits absorb the cancellation
        return _connection_mp(c, mu, z, extra_log)
    # on it, a single evaluation at an offset far below the target accuracy
    # replaces the symmetric average: the error is O(offset)
    return _connection_mp(c, mu + delta, z, extra_log + delta * mpmath.log(z))


def _extended(c, mu, z, extra_log, near_integer, loss_hint):
    """Recompute one value with enough working digits to absorb the cancellation."""
    dps = int(30 + max(loss_hint, 0.0) + (MP_OFFSET_DIGITS if near_integer else 0))
    for _ in range(6):
        with mpmath.workdps(dps):
            value, loss = _psi_scaled_mp(
                mpmath.mpc(c), mpmath.mpc(mu), mpmath.mpf(z), mpmath.mpc(extra_log), near_integer
            )
        if loss + 20 < dps:
            return complex(value), loss
        dps = int(loss + 40)
    return complex(value), loss


def _psi_driver(c, mu, z, extra_log, extended, what):
    """Shared evaluator for Psi and W: routing, loss control, extended retry.

    Returns ``exp(extra_log) * Psi(c + mu, 1 + 2 mu, z)`` and the digit loss.
    """
    c, mu, z, extra_log = np.broadcast_arrays(
        np.asarray(c, dtype=complex), np.asarray(mu, dtype=complex),
        np.asarray(z, dtype=float), np.asarray(extra_log, dtype=complex),
    )
    if np.any(z <= 0):
        raise DomainError(f"{what} requires z > 0")
    _check_argument(z)
    c1, mu1, z1, e1 = (np.array(np.ravel(v)) for v in (c, mu, z, extra_log))
    logz = np.log(z1).astype(complex)
    value = np.empty(c1.shape, dtype=complex)
    loss = np.empty(c1.shape)
    near = _integer_distance(2.0 * mu1) < INTEGER_B_TOL
    generic = ~near
    if generic.any():
        value[generic], loss[generic] = _connection_double(c1[generic], mu1[generic], logz[generic], e1[generic])
    if near.any():
        # snap 2 mu onto the integer; the prefactor z^(mu) moves with it
        mu_int = 0.5 * np.round(2.0 * mu1[near].real) + 0j
        e_int = e1[near] + (mu_int - mu1[near]) * logz[near]
        value[near], loss[near] = _near_integer_double(c1[near], mu_int, logz[near], e_int)
    # the Richardson-averaged value is good to about 1e-10 in double precision,
    # so near-integer points always take the extended path when allowed
    if extended:
        for i in np.flatnonzero((loss > RETRY_DIGITS) | near):
            value[i], _ = _extended(c1[i], mu1[i], z1[i], e1[i], bool(near[i]), loss[i])
    elif np.any(loss > LOSS_DIGITS):
        warnings.warn(
            f"{what}: up to {loss.max():.1f} digits lost to cancellation",
            PrecisionLoss,
            stacklevel=3,
        )
    return value.reshape(c.shape), loss.reshape(c.shape)


def kummer_psi(a, b, z, *, extended=True):
    """Tricomi's function Psi(a, b, z) = U(a, b, z) for real ``z > 0``.

    Near-integer ``b`` (within ``1e-8``) is handled by a symmetric average at
    ``b +- 1e-5`` refined with one Richardson step.  Loss of more than three
    digits to cancellation triggers an extended-precision retry; with
    ``extended=False`` no retry is made and a :class:`PrecisionLoss` warning
    is issued when more than six digits are lost.
    """
    scalar = all(np.ndim(v) == 0 for v in (a, b, z))
    mu = 0.5 * (np.asarray(b, dtype=complex) - 1.0)
    value, _ = _psi_driver(np.asarray(a, dtype=complex) - mu, mu, z, 0.0, extended, "kummer_psi")
    return complex(value) if scalar else value


def _unpack(kappa, mu, z):
    """Accept either ``(kappa, mu, z)`` or ``(WhittakerIndices, z)``."""
    if isinstance(kappa, WhittakerIndices):
        return kappa.kappa, kappa.mu, mu
    if z is None:
        raise TypeError("missing argument z")
    return kappa, mu, z


def whittaker_m(kappa, mu, z=None):
    """Whittaker's M_{kappa,mu}(z) for real ``z > 0`` and complex indices.

    Also callable as ``whittaker_m(WhittakerIndices(kappa, mu), z)``.
    """
    kappa, mu, z = _unpack(kappa, mu, z)
    scalar = all(np.ndim(v) == 0 for v in (kappa, mu, z))
    kappa, mu, z = np.broadcast_arrays(
        np.asarray(kappa, dtype=complex), np.asarray(mu, dtype=complex), np.asarray(z, dtype=float)
    )
    if np.any(z <= 0):
        raise DomainError("whittaker_m requires z > 0")
    phi = kummer_phi((0.5 - kappa) + mu, 1.0 + 2.0 * mu, z)
    value = np.exp((mu + 0.5) * np.log(z) - 0.5 * z) * phi
    return complex(value) if scalar else value


def whittaker_w(kappa, mu, z=None, *, extended=True, return_loss=False):
    """Whittaker's W_{kappa,mu}(z) for real ``z > 0`` and complex indices.

    Also callable as ``whittaker_w(WhittakerIndices(kappa, mu), z)``.

    Parameters
    ----------
    kappa, mu : complex or array_like
        First and second indices.
    z : float or array_like
        Positive real argument, at most 60.
    extended : bool
        Recompute in extended precision where cancellation costs more than
        three digits.  With ``False`` no retry is made and a
        :class:`PrecisionLoss` warning is raised past six lost digits.
    return_loss : bool
        Also return the number of decimal digits lost in double precision.
    """
    kappa, mu, z = _unpack(kappa, mu, z)
    scalar = all(np.ndim(v) == 0 for v in (kappa, mu, z))
    kappa = np.asarray(kappa, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    zf = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        extra = (mu + 0.5) * np.log(zf) - 0.5 * zf
    value, loss = _psi_driver(0.5 - kappa, mu, zf, extra, extended, "whittaker_w")
    if scalar:
        value, loss = complex(value), float(loss)
    return (value, loss) if return_loss else value


def whittaker_w_terms(kappa, mu, z):
    """Two-term log-space form of W from the connection formula.

    Returns ``(log_c1, phi1, log_c2, phi2)`` with
    ``W = exp(log_c1) * phi1 + exp(log_c2) * phi2`` where ``exp(log_c1)*phi1``
    is the ``M_{kappa,mu}`` term and ``exp(log_c2)*phi2`` the
    ``M_{kappa,-mu}`` term.  Callers combine several such factors by adding
    logarithms before exponentiating, which avoids overflow when the
    gamma-function prefactors are individually huge or tiny.  No routing
    around integer ``2 mu`` is done here.
    """
    kappa, mu, z = np.broadcast_arrays(
        np.asarray(kappa, dtype=complex), np.asarray(mu, dtype=complex), np.asarray(z, dtype=float)
    )
    if np.any(z <= 0):
        raise DomainError("whittaker_w_terms requires z > 0")
    _check_argument(z)
    logz = np.log(z)
    c = 0.5 - kappa
    phi1, _ = _phi_series(c + mu, 1.0 + 2.0 * mu, z)
    phi2, _ = _phi_series(c - mu, 1.0 - 2.0 * mu, z)
    lc1 = loggamma_array(-2.0 * mu) + _log_rgamma_sum(c, -mu) + (mu + 0.5) * logz - 0.5 * z
    lc2 = loggamma_array(2.0 * mu) + _log_rgamma_sum(c, mu) + (0.5 - mu) * logz - 0.5 * z
    return lc1, phi1, lc2, phi2


def laguerre(n, alpha, x):
    """Generalized Laguerre polynomial P_n^(alpha)(x) by three-term recurrence."""
    if int(n) != n or n < 0:
        raise DomainError(f"laguerre needs a non-negative integer degree, got {n!r}")
    n = int(n)
    scalar = np.ndim(alpha) == 0 and np.ndim(x) == 0
    alpha = np.asarray(alpha, dtype=complex)
    x = np.asarray(x, dtype=complex)
    prev = np.ones(np.broadcast(alpha, x).shape, dtype=complex)
    if n == 0:
        return complex(prev) if scalar else prev
    cur = 1.0 + alpha - x + 0 * prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return complex(cur) if scalar else cur


def whittaker_at_pole(kappa, n, z, which="W"):
    """Closed Laguerre form of M or W at ``mu = kappa - 1/2 - n``.

    With ``alpha = 2 kappa - 2 n - 1``::

        M = n! / (alpha+1)_n  e^(-z/2) z^((alpha+1)/2) P_n^(alpha)(z)
        W = (-1)^n n!         e^(-z/2) z^((alpha+1)/2) P_n^(alpha)(z)
    """
    if int(n) != n or n < 0:
        raise DomainError(f"pole index must be a non-negative integer, got {n!r}")
    n = int(n)
    which = which.upper()
    if which not in ("M", "W"):
        raise ValueError("which must be 'M' or 'W'")
    scalar = np.ndim(kappa) == 0 and np.ndim(z) == 0
    kappa = np.asarray(kappa, dtype=complex)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("whittaker_at_pole requires z > 0")
    alpha = 2.0 * kappa - 2.0 * n - 1.0
    base = math.factorial(n) * np.exp(-0.5 * z + 0.5 * (alpha + 1.0) * np.log(z)) * laguerre(n, alpha, z)
    if which == "W":
        value = (-1) ** n * base
    else:
        poch = np.ones(alpha.shape, dtype=complex)
        for k in range(n):
            poch = poch * (alpha + 1.0 + k)
        if np.any(np.abs(poch) < POLE_TOL):
            raise PoleError("(alpha+1)_n vanishes: M has no finite pole limit here")
        value = base / poch
    return complex(value) if scalar else value
