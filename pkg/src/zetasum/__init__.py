"""Numerical study of sums of zeta derivatives over the nontrivial zeros,
sum_{0<gamma<=T} zeta^(n)(rho) X^rho, against their explicit formulae."""

from .arith import RationalX
from .constants import LaurentTable, a_oracle, israilov_A, laurent_table, stieltjes_C
from .errors import ZetasumError
from .expansions import (
    ExpansionBreakdown,
    corollary_integer_rhs,
    explicit2_rhs,
    fujii_integer_rhs,
    fujii_shanks_rhs,
    general_sc_rhs,
    landau_rhs,
    s_asymptotic,
    theorem1_rhs,
)
from .numkern import (
    PrecisionContext,
    chi,
    functional_equation_residual,
    hardy_Z,
    zeta,
    zeta_derivative,
)
from .zeros import ZeroTable, count_zeros_rvm, export_zeros, find_zeros, import_zeros, safe_truncation_height
from .zerosum import ComparisonReport, compare, landau_lhs, lhs_zero_sum

__version__ = "0.1.0"

__all__ = [
    "RationalX",
    "LaurentTable",
    "a_oracle",
    "israilov_A",
    "laurent_table",
    "stieltjes_C",
    "ZetasumError",
    "ExpansionBreakdown",
    "corollary_integer_rhs",
    "explicit2_rhs",
    "fujii_integer_rhs",
    "fujii_shanks_rhs",
    "general_sc_rhs",
    "landau_rhs",
    "s_asymptotic",
    "theorem1_rhs",
    "PrecisionContext",
    "chi",
    "functional_equation_residual",
    "hardy_Z",
    "zeta",
    "zeta_derivative",
    "ZeroTable",
    "count_zeros_rvm",
    "export_zeros",
    "find_zeros",
    "import_zeros",
    "safe_truncation_height",
    "ComparisonReport",
    "compare",
    "landau_lhs",
    "lhs_zero_sum",
]
