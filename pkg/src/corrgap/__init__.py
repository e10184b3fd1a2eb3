"""Exact extensions of set functions and their correlation gaps.

Everything is computed in exact rational arithmetic: set functions are value
tables over bitmasks, and the LP-defined extensions are solved by an exact
simplex that returns both an optimal distribution and a dual certificate.
"""

from .closedform import (
    Region,
    dual_table_n3,
    f_plus_n2,
    f_plus_n3,
    f_pp_n2,
    f_pp_n3,
    f_pp_rank1,
    kuniform_identical,
    kuniform_ratio_bound,
    omega_bounds_n3,
    pairwise_family_n3,
    region_n3,
)
from .distributions import (
    check_pairwise_independent,
    construct_large,
    construct_small,
    covariance_signs,
    cylinder_signature,
    identical_n4,
    product_distribution,
    region_distribution_n3,
)
from .exact_lp import LinearProgram, LpSolution, solve
from .extensions import (
    CapExceeded,
    DualCertificate,
    Distribution,
    Extension,
    all_extensions,
    check_dual_feasible,
    concave_closure,
    convex_closure,
    lower_pairwise,
    multilinear,
    upper_pairwise,
)
from .gap import GapReport, ScanResult, applicable_bounds, gap_report, scan
from .rational import fmt, to_fraction
from .setfn import (
    SetFunction,
    Subpolytope,
    check_monotone,
    check_submodular,
    classify_subpolytope,
    from_json,
    from_set_order,
    make_setfn,
    normalize,
    uniform_matroid_rank,
    weighted_coverage,
)

__all__ = [
    "CapExceeded",
    "Distribution",
    "DualCertificate",
    "Extension",
    "GapReport",
    "LinearProgram",
    "LpSolution",
    "Region",
    "ScanResult",
    "SetFunction",
    "Subpolytope",
    "all_extensions",
    "applicable_bounds",
    "check_dual_feasible",
    "check_monotone",
    "check_pairwise_independent",
    "check_submodular",
    "classify_subpolytope",
    "concave_closure",
    "construct_large",
    "construct_small",
    "convex_closure",
    "covariance_signs",
    "cylinder_signature",
    "dual_table_n3",
    "f_plus_n2",
    "f_plus_n3",
    "f_pp_n2",
    "f_pp_n3",
    "f_pp_rank1",
    "fmt",
    "from_json",
    "from_set_order",
    "gap_report",
    "identical_n4",
    "kuniform_identical",
    "kuniform_ratio_bound",
    "lower_pairwise",
    "make_setfn",
    "multilinear",
    "normalize",
    "omega_bounds_n3",
    "pairwise_family_n3",
    "product_distribution",
    "region_distribution_n3",
    "region_n3",
    "scan",
    "solve",
    "to_fraction",
    "uniform_matroid_rank",
    "upper_pairwise",
    "weighted_coverage",
]
