"""Comptonization Green's function.

Frozen values come from an independent mpmath evaluation (40 digits) of the
``u`` integral and of the Laplace-domain closed form.  The full
conservation and Laplace grids run in ``test_acceptance.py``.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whittaker_index import comptonization, oracle
from whittaker_index.comptonization import (
    ELECTRON_REST_ENERGY_KEV,
    SPEED_OF_LIGHT_CM_S,
    THOMSON_CROSS_SECTION_CM2,
    GreensParams,
    PhysicalParams,
    check_normalization,
    convolve_spectrum,
    greens_function,
    laplace_F,
    load_spectrum,
    to_dimensionless,
)
from whittaker_index.errors import DomainError, PoleError


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize(
    "x, x0, y, expected",
    [
        (1.0, 2.0, 0.3, 0.21014678518875525859),
        (0.4, 2.0, 1.0, 0.33187198225830070176),
    ],
)
def test_greens_frozen(x, x0, y, expected):
    assert rel(greens_function(GreensParams(x, x0, y)), expected) < 1e-9


def test_y_zero_is_delta():
    with pytest.raises(DomainError, match="delta"):
        greens_function(GreensParams(1.0, 2.0, 0.0))


@pytest.mark.parametrize("kwargs", [dict(x=0.0, x0=1.0, y=1.0), dict(x=1.0, x0=-1.0, y=1.0), dict(x=1.0, x0=1.0, y=-0.1)])
def test_params_validate(kwargs):
    with pytest.raises(DomainError):
        GreensParams(**kwargs)


@pytest.mark.parametrize("x", [0.3, 1.0, 4.0, 12.0])
def test_long_time_limit(x):
    assert abs(greens_function(GreensParams(x, 2.0, 50.0)) - 0.5 * math.exp(-x)) <= 1e-8


@settings(max_examples=15, deadline=None)
@given(
    x=st.floats(0.05, 20.0),
    x0=st.floats(0.1, 10.0),
    y=st.floats(0.2, 5.0),
)
def test_positive(x, x0, y):
    assert greens_function(GreensParams(x, x0, y)) > -1e-12


def test_conservation_single_point():
    assert abs(check_normalization(2.0, 1.0) - 1.0) < 1e-4


def test_kernel_is_shared_with_oracle():
    assert comptonization.kernel_k2 is oracle.kernel_k2


# ------------------------------------------------------------- Laplace


@pytest.mark.parametrize(
    "x, x0, s, expected",
    [
        (1.0, 2.0, 1.0, 0.18073275283682522602),
        (3.0, 0.8, 1 + 1j, 0.0050212544977440566282 - 0.010372086023011748471j),
    ],
)
def test_laplace_frozen(x, x0, s, expected):
    assert rel(laplace_F(x, x0, s), expected) < 1e-10


def test_laplace_symmetric_after_weighting():
    # F e^((x-x0)/2) is symmetric in (x, x0)
    a = laplace_F(1.0, 2.0, 1.5)
    b = laplace_F(2.0, 1.0, 1.5)
    ratio = (a * math.exp(0.5 * 1.0 - 0.5 * 2.0)) / (b * math.exp(0.5 * 2.0 - 0.5 * 1.0))
    assert ratio == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("s", [0.0, -2.0])
def test_laplace_poles(s):
    with pytest.raises(PoleError):
        laplace_F(1.0, 2.0, s)


# ------------------------------------------------------------- physical units


def test_to_dimensionless():
    p = PhysicalParams(epsilon=10.0, epsilon0=20.0, kTe=5.0, n_e=1e20, t=2.0, t0=1.0)
    g = to_dimensionless(p)
    y = 1e20 * THOMSON_CROSS_SECTION_CM2 * SPEED_OF_LIGHT_CM_S * 5.0 / ELECTRON_REST_ENERGY_KEV
    assert (g.x, g.x0) == (2.0, 4.0)
    assert g.y == pytest.approx(y, rel=1e-15)


def test_to_dimensionless_rejects_bad_input():
    with pytest.raises(DomainError):
        to_dimensionless(PhysicalParams(1.0, 1.0, 0.0, 1e20, 1.0))
    with pytest.raises(DomainError):
        to_dimensionless(PhysicalParams(1.0, 1.0, 1.0, 1e20, 1.0, t0=2.0))


# ------------------------------------------------------------- spectra


def test_load_spectrum(tmp_path):
    path = tmp_path / "spectrum.txt"
    path.write_text("# x0 value\n0.5 1.0\n1.0 2.0\n2.0 0.5\n")
    x0, v = load_spectrum(path)
    np.testing.assert_array_equal(x0, [0.5, 1.0, 2.0])
    np.testing.assert_array_equal(v, [1.0, 2.0, 0.5])


@pytest.mark.parametrize(
    "text, exc",
    [
        ("1 2 3\n2 3 4\n", ValueError),
        ("2 1\n1 1\n", ValueError),
        ("-1 1\n1 1\n", DomainError),
    ],
)
def test_load_spectrum_rejects(tmp_path, text, exc):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(exc):
        load_spectrum(path)


def test_convolve_narrow_spectrum_approaches_greens():
    # a narrow unit-area bump around x0 = 2 weighted by x0^-2 reproduces f_G
    x0 = np.array([1.98, 2.0, 2.02])
    height = 1.0 / (0.02 * 4.0)
    values = np.array([0.0, height, 0.0])
    got = convolve_spectrum(x0, values, 1.0, 1.0)
    assert got == pytest.approx(greens_function(GreensParams(1.0, 2.0, 1.0)), rel=1e-3)
