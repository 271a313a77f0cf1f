"""Closed-form integrals over the second index of the Whittaker W function.

The package evaluates

    I(s) = int_0^inf u sinh(2 pi u) / (s + u^2)
           * G(1/2 - kappa + iu) G(1/2 - kappa - iu) W_{kappa,iu}(x) W_{kappa,iu}(x0) du

in closed form (a leading Gamma-ratio term plus a finite residue sum, with a
separate double-pole limit), checks it against direct quadrature, and builds
the time-dependent Green's function of thermal Comptonization on top of it.
"""

from .comptonization import (
    GreensParams,
    PhysicalParams,
    check_normalization,
    convolve_spectrum,
    greens_function,
    laplace_F,
    load_spectrum,
    to_dimensionless,
)
from .confluent import (
    WhittakerIndices,
    kummer_phi,
    kummer_psi,
    laguerre,
    whittaker_at_pole,
    whittaker_m,
    whittaker_w,
)
from .errors import (
    ConditioningWarning,
    DegenerateCase,
    DomainError,
    NoConvergence,
    NonFinite,
    PoleError,
    PrecisionLoss,
    TailWarning,
    WhittakerIndexError,
    ZeroProduct,
)
from .index_integral import (
    EvalResult,
    IntegralParams,
    Pole,
    PoleSet,
    degenerate_index,
    enumerate_poles,
    eval_I,
    eval_I_degenerate,
    eval_special_case,
    leading_term,
    numerical_H,
    quadratic_norm,
    residue_term,
)
from .oracle import integrand_I, oracle_I, oracle_special_case, truncate_u
from .quadrature import QuadratureResult, integrate, tanh_sinh
from .reference import ReferenceCheck, check_eq70, check_eq71, check_eq72, check_eq73
from .specfun import bessel_k, cgamma, clog_gamma, digamma, pochhammer

__version__ = "0.1.0"
