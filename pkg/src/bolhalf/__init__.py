"""Half-integral weight Bol-style operators.

Exact q-series constructions (theta series, theta-twisted derivative
operators, Rankin-Cohen brackets, the Selberg lift), numerical automorphy
and Fricke certification on the upper half-plane, and a Laplace-side
L-series laboratory (functional equations, test-function transports,
multiplier operators, half-integer Bessel closed forms).
"""

__version__ = "0.1.0"

from .exactnum import QQi
from .forms import FormMeta, HalfWeight
from .characters import (DirichletCharacter, kronecker, kronecker_character,
                         make_character, trivial_character)
from .qseries import QSeries, delta_cusp, from_coeff_dict
from .thetas import (ThetaContext, enumerate_serre_stark,
                     fricke_theta_constants, theta_series)
from .bol_ops import (classical_bol, delta0_closed_form, delta_a,
                      rankin_cohen, selberg_lift, theta_map_half)
from .modular_verify import (automorphy_residual, fricke_residual,
                             sample_pairs, slash_value)
from .lseries import (SCParams, TestFunction, alpha_apply, b_factor,
                      bessel_half, bump, fe_constant, fe_residual, indicator,
                      invert_laplace, laplace, lseries_value,
                      make_testfunction, sc_residual, testfn_fricke)

__all__ = [
    "QQi", "FormMeta", "HalfWeight", "DirichletCharacter", "kronecker",
    "kronecker_character", "make_character", "trivial_character", "QSeries",
    "delta_cusp", "from_coeff_dict", "ThetaContext", "enumerate_serre_stark",
    "fricke_theta_constants", "theta_series", "classical_bol",
    "delta0_closed_form", "delta_a", "rankin_cohen", "selberg_lift",
    "theta_map_half", "automorphy_residual", "fricke_residual",
    "sample_pairs", "slash_value", "SCParams", "TestFunction", "alpha_apply",
    "b_factor", "bessel_half", "bump", "fe_constant", "fe_residual",
    "indicator", "invert_laplace", "laplace", "lseries_value",
    "make_testfunction", "sc_residual", "testfn_fricke",
]
