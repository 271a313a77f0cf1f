"""Closed-form evaluation of the index integral.

Frozen values come from an independent mpmath transcription of the closed
form at 40 digits; the degenerate ones from that transcription evaluated at
``s_m + 1e-35`` with 80 digits.  Agreement with direct quadrature is tested
in ``test_quadrature.py`` and ``test_acceptance.py``.
"""

import cmath
import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whittaker_index.confluent import whittaker_m, whittaker_w
from whittaker_index.errors import ConditioningWarning, DegenerateCase, DomainError
from whittaker_index.index_integral import (
    SPECIAL_CASE_WEIGHTS,
    IntegralParams,
    degenerate_index,
    enumerate_poles,
    eval_I,
    eval_I_degenerate,
    eval_special_case,
    harmonic_bracket,
    leading_term,
    numerical_H,
    quadratic_norm,
    residue_term,
    x_ordering,
)
from whittaker_index.specfun import cgamma


def rel(a, b):
    return abs(a - b) / abs(b)


# ------------------------------------------------------------- validation


@pytest.mark.parametrize(
    "kappa, s, x, x0, fragment",
    [
        (0.3, -1.0, 1.0, 1.0, "negative real"),
        (0.3, -1e-3 + 1e-14j, 1.0, 1.0, "negative real"),
        (0.3, 1.0, 0.0, 1.0, "positive"),
        (0.3, 1.0, 1.0, -2.0, "positive"),
        (1.5 + 0.2j, 1.0, 1.0, 1.0, "Im kappa"),
        (2.5, 0.0, 1.0, 1.0, "s = 0"),
        (0.5, 1.0, 1.0, 1.0, "half-integer"),
    ],
)
def test_params_validation(kappa, s, x, x0, fragment):
    with pytest.raises(DomainError, match=fragment):
        IntegralParams(kappa, s, x, x0)


def test_allow_edge_skips_half_integer_rule():
    p = IntegralParams(1.5, 1.0, 1.0, 1.0, allow_edge=True)
    assert p.kappa == 1.5


def test_complex_s_near_negative_axis_is_accepted():
    IntegralParams(0.3, -1.0 + 1e-6j, 1.0, 1.0)


# ----------------------------------------------------------------- poles


def test_poles_kappa_two():
    poles = enumerate_poles(2.0)
    assert len(poles) == 2
    assert [p.s_n for p in poles] == [pytest.approx(2.25), pytest.approx(0.25)]
    assert poles[0].u_n == pytest.approx(1.5j)
    assert poles[1].u_n == pytest.approx(0.5j)


def test_no_poles_below_one_half():
    assert len(enumerate_poles(0.3)) == 0
    assert len(enumerate_poles(-1.3 + 2j)) == 0


def test_poles_complex_kappa():
    poles = enumerate_poles(2.4 + 0.5j)
    assert [p.n for p in poles] == [0, 1]
    assert poles[0].u_n == pytest.approx(1j * (1.9 + 0.5j))
    assert poles[1].u_n == pytest.approx(1j * (0.9 + 0.5j))
    for p in poles:
        assert p.alpha_n == pytest.approx(-2j * p.u_n)


@pytest.mark.parametrize("x, x0, expected", [(2, 5, (2, 5)), (5, 2, (2, 5)), (3, 3, (3, 3))])
def test_x_ordering(x, x0, expected):
    assert x_ordering(x, x0) == expected


# ---------------------------------------------------------- closed values


@pytest.mark.parametrize(
    "kappa, s, x, x0, expected",
    [
        (2, 1, 1, 2, 0.38301844005621709543),
        (0, 1, 1, 1, 4.2161640508675090508),
        (2.4 + 0.5j, 2 + 1.5j, 0.5, 3, -0.52237376354689030659 - 1.0917050121157369091j),
        (0.7, 0.3, 2, 2, 13.121444882609643116),
        (-1.3, 0, 1, 2, 1.6060880252539892729),
        (1, 0.5 - 2j, 1, 5, -0.89438542263111605268 - 0.037906873689153502009j),
    ],
)
def test_eval_I_frozen(kappa, s, x, x0, expected):
    res = eval_I(IntegralParams(kappa, s, x, x0))
    assert rel(res.value, expected) < 1e-11
    assert res.value == pytest.approx(res.leading_term + sum(res.residue_terms), rel=1e-15)
    assert res.method == "closed"


def test_leading_term_kappa_zero_components():
    p = IntegralParams(0, 1, 1, 1)
    expected = math.pi**2 * cgamma(1.5) / cgamma(3.0) * whittaker_w(0, 1, 1.0) * whittaker_m(0, 1, 1.0)
    assert rel(leading_term(p), expected) < 1e-14
    assert eval_I(p).residue_terms == []


def test_leading_term_raises_on_double_pole():
    with pytest.raises(DegenerateCase):
        leading_term(IntegralParams(1, 0.25, 1, 1))


def test_residue_kappa_one():
    # kappa = 1, n = 0, alpha = 1: -pi^2 x x0 e^{-(x+x0)/2} 4 / (4s - 1)
    x, x0, s = 0.8, 1.7, 2.0
    expected = -4.0 * math.pi**2 * x * x0 * math.exp(-(x + x0) / 2) / (4 * s - 1)
    assert rel(residue_term(IntegralParams(1, s, x, x0), 0), expected) < 1e-14


def test_residue_laguerre_factor_kappa_two():
    # n = 1, alpha = 1: factor (2 - x)(2 - x0) vanishes at x = 2
    assert residue_term(IntegralParams(2, 1.0, 2.0, 0.7), 1) == 0


def test_residue_vanishes_at_small_arguments():
    assert abs(residue_term(IntegralParams(2, 1.0, 1e-8, 1e-8), 0)) < 1e-20


def test_residue_index_out_of_range():
    with pytest.raises(DomainError):
        residue_term(IntegralParams(2, 1.0, 1, 1), 2)


def test_residue_on_double_pole():
    with pytest.raises(DegenerateCase):
        residue_term(IntegralParams(2, 2.25, 1, 1), 0)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-2.0, 3.0).filter(lambda k: abs(k - round(k - 0.5) - 0.5) > 1e-3),
    st.floats(0.05, 4.0),
    st.floats(-3.0, 3.0),
    st.floats(0.2, 6.0),
    st.floats(0.2, 6.0),
)
def test_symmetries(kappa, re_s, im_s, x, x0):
    s = complex(re_s, im_s)
    p = IntegralParams(kappa, s, x, x0)
    if degenerate_index(p)[1] < 1e-3:
        return
    value = eval_I(p).value
    assert eval_I(IntegralParams(kappa, s, x0, x)).value == value
    conj = eval_I(IntegralParams(kappa, s.conjugate(), x, x0)).value
    assert abs(conj - value.conjugate()) <= 1e-10 * abs(value)


# ------------------------------------------------------------- degenerate


@pytest.mark.parametrize(
    "kappa, m, x, x0, expected",
    [
        (1, 0, 1, 1, 4.2728849981203147972),
        (1, 0, 1, 2, 2.9810651029555414644),
        (2, 0, 1, 2, 0.032285083741553277824),
        (2, 1, 1, 2, 1.1011032053083582279),
    ],
)
def test_degenerate_frozen(kappa, m, x, x0, expected):
    s_m = (kappa - 0.5 - m) ** 2
    res = eval_I_degenerate(IntegralParams(kappa, s_m, x, x0), m)
    assert res.degenerate and res.m == m
    assert rel(res.value, expected) < 1e-8
    assert res.value == pytest.approx(res.K_term + sum(res.residue_terms), rel=1e-15)
    assert len(res.residue_terms) == len(enumerate_poles(kappa)) - 1


def test_eval_I_routes_to_degenerate():
    res = eval_I(IntegralParams(2, 0.25 + 1e-12, 1, 2))
    assert res.method == "degenerate" and res.m == 1


def test_conditioning_warning_near_double_pole():
    with pytest.warns(ConditioningWarning):
        eval_I(IntegralParams(2, 0.25 + 1e-8, 1, 2))


def test_no_warning_away_from_double_pole():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        eval_I(IntegralParams(2, 0.25 + 1e-4, 1, 2))


def test_degenerate_continuity():
    exact = eval_I_degenerate(IntegralParams(2, 0.25, 1, 2), 1).value
    near = eval_I(IntegralParams(2, 0.25 + 1e-5, 1, 2)).value
    assert rel(near, exact) < 1e-3


def test_degenerate_index_out_of_range():
    with pytest.raises(DomainError):
        eval_I_degenerate(IntegralParams(1, 0.25, 1, 1), 1)


def test_numerical_H_frozen():
    # mpmath derivative of ln(W M) in the second index
    value = numerical_H(1, 0.25, 1.0, 1.0)
    assert rel(value, 1.5996203229953586595) < 1e-6
    assert abs(value.imag) < 1e-8


def test_numerical_H_step_refinement():
    from whittaker_index.index_integral import _richardson_central

    f = lambda b: cmath.log(whittaker_w(2, b, 2.0) * whittaker_m(2, b, 1.0))
    beta = 1.5
    coarse = _richardson_central(f, beta, 1e-4 * beta)
    fine = _richardson_central(f, beta, 0.25e-4 * beta)
    assert rel(coarse, fine) < 1e-6


@pytest.mark.parametrize("m", range(11))
def test_harmonic_bracket(m):
    literal = -Fraction(1, m + 1) + sum(Fraction(1, n) for n in range(1, m + 2))
    simplified = sum(Fraction(1, n) for n in range(1, m + 1))
    assert literal == simplified
    assert harmonic_bracket(m) == pytest.approx(float(simplified), abs=1e-15)


# ------------------------------------------------------- special cases


@pytest.mark.parametrize("kappa", [-1.3, 0.7, 2.0])
def test_quadratic_norm_is_diagonal(kappa):
    assert quadratic_norm(kappa, 0.9, 1.3).value == eval_I(IntegralParams(kappa, 0.9, 1.3, 1.3)).value


def test_quadratic_norm_squares_laguerre():
    # at x = 2 the n = 1 Laguerre factor (2 - x) vanishes, squared
    res = quadratic_norm(2, 0.9, 2.0)
    assert res.residue_terms[1] == 0


@pytest.mark.parametrize("kappa", [0, 1, 2])
@pytest.mark.parametrize("s, x, x0", [(0.3, 1, 2), (2 + 1.5j, 2, 5), (0.5 - 2j, 1, 1), (3.0, 0.7, 1.6)])
def test_special_case_weights(kappa, s, x, x0):
    general = eval_I(IntegralParams(kappa, s, x, x0)).value
    assert rel(SPECIAL_CASE_WEIGHTS[kappa] * eval_special_case(kappa, s, x, x0), general) < 1e-10


def test_special_case_kappa_two_literal():
    s, x, x0 = 1.0, 1.0, 1.0
    root = 1.0
    wm = whittaker_w(2, root, x) * whittaker_m(2, root, x0)
    lead = math.pi / 32 * cgamma(root - 1.5) / cgamma(1 + 2 * root) * wm
    poles = -(math.pi / 16) * x * x0 * math.exp(-(x + x0) / 2) * (x * x0 / (4 * s - 9) + (2 - x) * (2 - x0) / (4 * s - 1))
    assert rel(eval_special_case(2, s, x, x0), lead + poles) < 1e-13


def test_special_case_kappa_zero_literal():
    s, x, x0 = 0.7, 1.2, 2.5
    r = math.sqrt(s)
    expected = math.pi / 2 * cgamma(0.5 + r) / cgamma(1 + 2 * r) * whittaker_w(0, r, x0) * whittaker_m(0, r, x)
    assert rel(eval_special_case(0, s, x, x0), expected) < 1e-13


@pytest.mark.parametrize("kappa, s", [(1, 0.25), (2, 0.25), (2, 2.25)])
def test_special_case_excluded_points(kappa, s):
    with pytest.raises(DegenerateCase):
        eval_special_case(kappa, s, 1.0, 1.0)


def test_special_case_kappa_out_of_set():
    with pytest.raises(DomainError):
        eval_special_case(3, 1.0, 1.0, 1.0)
