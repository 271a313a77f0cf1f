"""Kummer and Whittaker functions.

Frozen reference values were computed with mpmath (``hyp1f1``, ``hyperu``,
``whitm``, ``whitw``) at 40 significant digits.
"""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whittaker_index.confluent import (
    WhittakerIndices,
    kummer_phi,
    kummer_psi,
    laguerre,
    whittaker_at_pole,
    whittaker_m,
    whittaker_w,
)
from whittaker_index.specfun import cgamma, rgamma_array
from whittaker_index.errors import DomainError, NoConvergence, PoleError, PrecisionLoss


def rel(a, b):
    return abs(a - b) / abs(b)


# ------------------------------------------------------------------ Kummer


@pytest.mark.parametrize("a, b", [(0.3, 1.7), (2 - 1j, 0.5 + 2j), (-4.0, 3.0)])
def test_kummer_phi_at_zero(a, b):
    assert kummer_phi(a, b, 0.0) == 1.0


@pytest.mark.parametrize("b, z", [(3.0, 1.5), (0.5 + 1j, 2.0), (7.0, 10.0)])
def test_kummer_phi_linear_polynomial(b, z):
    assert rel(kummer_phi(-1.0, b, z), 1.0 - z / b) < 1e-15


def test_kummer_phi_quadratic_polynomial():
    assert kummer_phi(-2.0, 3.0, 1.5) == pytest.approx(0.1875, rel=1e-15)


def test_kummer_phi_polynomial_with_negative_b():
    # a = -2 terminates before the zero of (b)_n at n = 4
    expected = 1.0 + (-2.0) / (-3.0) * 1.5 + (-2.0) * (-1.0) / ((-3.0) * (-2.0)) * 1.5**2 / 2.0
    assert rel(kummer_phi(-2.0, -3.0, 1.5), expected) < 1e-15


def test_kummer_phi_generic_complex():
    expected = -57.590522795401361274 - 84.563400692326885733j
    assert rel(kummer_phi(1.5 - 0.5j, 2.2 + 1j, 6.0), expected) < 1e-13


def test_kummer_phi_pole_in_b():
    with pytest.raises(PoleError):
        kummer_phi(0.5, -2.0, 1.0)


def test_kummer_phi_refuses_large_argument():
    with pytest.raises(NoConvergence):
        kummer_phi(0.5, 1.5, 61.0)


@pytest.mark.parametrize("z", [0.3, 2.5, 9.0])
def test_kummer_psi_one_two(z):
    assert rel(kummer_psi(1.0, 2.0, z), 1.0 / z) < 1e-13


def test_kummer_psi_generic_complex():
    expected = -0.72489555815390858712 + 0.81780149471802332789j
    assert rel(kummer_psi(0.5 - 1.4j, 1 + 1.4j, 3.0), expected) < 1e-12


@pytest.mark.parametrize("n", [0, 1, 3])
def test_kummer_psi_laguerre_degeneration(n):
    # a = -n: U(-n, alpha+1, z) = (-1)^n n! L_n^alpha(z)
    alpha, z = 0.7, 1.9
    expected = (-1) ** n * math.factorial(n) * laguerre(n, alpha, z)
    assert rel(kummer_psi(-float(n), alpha + 1.0, z), expected) < 1e-11


# ---------------------------------------------------------------- Whittaker


def test_whittaker_m_small_argument():
    kappa, mu, z = 0.4 + 0.2j, 0.3 - 0.5j, 1e-6
    ratio = whittaker_m(kappa, mu, z) / (math.exp(-z / 2) * z ** (mu + 0.5))
    assert abs(ratio - 1.0) < 1e-5


def test_whittaker_m_sinh():
    assert rel(whittaker_m(0.0, 0.5, 1.0), 2.0 * math.sinh(0.5)) < 1e-14


def test_whittaker_m_frozen():
    assert rel(whittaker_m(2.0, 1.5, 2.0), 1.4715177646857692864) < 1e-13


@pytest.mark.parametrize("z", [0.2, 1.0, 7.5])
def test_whittaker_w_exponential(z):
    assert rel(whittaker_w(0.0, 0.5, z), math.exp(-z / 2)) < 1e-13


@pytest.mark.parametrize(
    "kappa, mu, z, expected",
    [
        (2.0, 0.4j, 1.0, -0.5839409625980844656),
        (0.7, 1.3j, 2.0, 0.25838664300571803318),
        (-1.3 + 0.4j, 0.7 - 2j, 4.5, 0.0049800253858396785702 + 0.0016441881442628343611j),
        (2.3, 0.8, 1.7, -0.76678886502044524507),
        # integer 2 mu: handled by the near-integer path
        (1.0, 0.5, 3.0, 0.6693904804452894868),
        (0.3, 0.0, 0.8, 0.60718220062112052375),
        # heavy cancellation, recovered by the extended-precision retry
        (-5.0, 0.3, 30.0, 5.3646333337215341782e-15),
        (30j, 0.3, 2.0, -175437610452675.31095 + 1775992027956906.384j),
    ],
)
def test_whittaker_w_frozen(kappa, mu, z, expected):
    assert rel(whittaker_w(kappa, mu, z), expected) < 1e-12


def test_whittaker_w_close_to_integer_two_mu():
    # 2 mu = 1 + 2e-9 sits inside the near-integer band
    assert rel(whittaker_w(2.0, 0.5 + 1e-9, 1.4), -0.41713165498614992429) < 1e-12


def test_precision_loss_warns_without_retry():
    with pytest.warns(PrecisionLoss):
        value, loss = whittaker_w(-5.0, 0.3, 30.0, extended=False, return_loss=True)
    assert loss > 6.0


def test_no_warning_with_retry():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        whittaker_w(-5.0, 0.3, 30.0)


def test_whittaker_rejects_nonpositive_argument():
    with pytest.raises(DomainError):
        whittaker_w(0.3, 0.2, 0.0)


def test_indices_object():
    idx = WhittakerIndices(0.7, 0.5)
    assert idx.a == pytest.approx(0.3)
    assert idx.b == pytest.approx(2.0)
    assert idx.integer_b
    assert not WhittakerIndices(0.7, 0.3).integer_b
    assert idx.w(1.3) == whittaker_w(0.7, 0.5, 1.3)
    assert idx.m(1.3) == whittaker_m(0.7, 0.5, 1.3)
    assert whittaker_w(idx, 1.3) == whittaker_w(0.7, 0.5, 1.3)


def test_vectorized_matches_scalar():
    z = np.array([0.5, 1.0, 4.0])
    vec = whittaker_w(0.7, 1.3j, z)
    assert np.allclose(vec, [whittaker_w(0.7, 1.3j, v) for v in z], rtol=1e-15)


def test_symmetry_example():
    assert rel(whittaker_w(0.7, 1.3j, 2.0), whittaker_w(0.7, -1.3j, 2.0)) < 1e-10


@settings(max_examples=150, deadline=None)
@given(
    st.floats(-3.0, 3.0),
    st.floats(0.05, 5.0),
    st.floats(0.2, 10.0),
)
def test_symmetry_and_realness(kappa, u, x):
    plus = whittaker_w(kappa, 1j * u, x)
    minus = whittaker_w(kappa, -1j * u, x)
    assert abs(plus - minus) <= 1e-10 * abs(plus)
    assert abs(plus.imag) <= 1e-12 * max(1.0, abs(plus))


@settings(max_examples=100, deadline=None)
@given(
    st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
    st.floats(-2.0, 2.0),
    st.floats(-5.0, 5.0),
    st.floats(0.2, 10.0),
)
def test_connection_formula(kappa, re_mu, im_mu, z):
    mu = complex(re_mu, im_mu)
    if abs(2 * mu - round(2 * re_mu)) <= 0.05:
        return
    r = rgamma_array(np.array([0.5 - mu - kappa, 0.5 + mu - kappa]))
    t1 = cgamma(-2 * mu) * r[0] * whittaker_m(kappa, mu, z)
    t2 = cgamma(2 * mu) * r[1] * whittaker_m(kappa, -mu, z)
    direct = whittaker_w(kappa, mu, z)
    assert abs(t1 + t2 - direct) <= 1e-8 * max(abs(direct), abs(t1), abs(t2))


# ----------------------------------------------------------------- Laguerre


@pytest.mark.parametrize("alpha", [0.3, 2 + 1j])
def test_laguerre_seeds(alpha):
    assert laguerre(0, alpha, 1.7) == 1.0
    assert laguerre(1, alpha, 1.7) == pytest.approx(1 + alpha - 1.7)


def test_laguerre_matches_linear_factor():
    assert laguerre(1, 1.0, 2.0) == 0.0
    for x in (0.3, 1.0, 4.0):
        assert laguerre(1, 1.0, x) == pytest.approx(2.0 - x)


def _explicit_laguerre(n, alpha, x):
    from whittaker_index.specfun import cgamma

    total = 0.0
    for k in range(n + 1):
        binom = cgamma(n + alpha + 1) / (cgamma(n - k + 1) * cgamma(alpha + k + 1))
        total += (-1) ** k * binom * x**k / math.factorial(k)
    return total


@pytest.mark.parametrize("n", range(9))
@pytest.mark.parametrize("alpha", [-0.5, 1.0, 3 + 0.2j])
@pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
def test_laguerre_recurrence_vs_explicit_sum(n, alpha, x):
    expected = _explicit_laguerre(n, alpha, x)
    assert abs(laguerre(n, alpha, x) - expected) <= 1e-11 * max(1.0, abs(expected))


# -------------------------------------------------------------- pole values


@pytest.mark.parametrize("which", ["W", "M"])
@pytest.mark.parametrize("kappa, z", [(0.8, 1.0), (2.2 + 0.3j, 3.5)])
def test_at_pole_n0(which, kappa, z):
    expected = math.exp(-z / 2) * z**kappa
    assert rel(whittaker_at_pole(kappa, 0, z, which), expected) < 1e-14


def test_at_pole_hand_value():
    assert whittaker_at_pole(2.0, 1, 1.0, "W") == pytest.approx(-math.exp(-0.5), rel=1e-14)


def test_at_pole_generic_path():
    kappa, z = 2.3, 1.7
    assert rel(whittaker_at_pole(kappa, 1, z, "W"), whittaker_w(kappa, kappa - 1.5, z)) < 1e-9
    assert rel(whittaker_at_pole(kappa, 1, z, "M"), whittaker_m(kappa, kappa - 1.5, z)) < 1e-9


@pytest.mark.parametrize("kappa, n", [(2.3, 1), (3.1, 2), (1.0, 0)])
def test_at_pole_is_limit_of_generic_path(kappa, n):
    z = 2.2
    mu0 = kappa - 0.5 - n

    def symmetric(e):
        # the average over +-e is even in e, so Richardson works in e^2
        return 0.5 * (whittaker_w(kappa, mu0 + e, z) + whittaker_w(kappa, mu0 - e, z))

    limit = (100.0 * symmetric(1e-4) - symmetric(1e-3)) / 99.0
    assert rel(limit, whittaker_at_pole(kappa, n, z, "W")) < 1e-7


def test_at_pole_m_branch_pole():
    # alpha + 1 = 2 (kappa - n) = -1, so (alpha+1)_2 = (-1)(0) vanishes
    with pytest.raises(PoleError):
        whittaker_at_pole(1.5, 2, 1.0, "M")


def test_at_pole_rejects_bad_index():
    with pytest.raises(DomainError):
        whittaker_at_pole(2.0, -1, 1.0)
