"""Exact (max,+) kernel conjugations, irreducible elements and isomorphisms of kernel ranges."""
from .core import (
    NEG_INF,
    POS_INF,
    ArchClassOrder,
    TropVector,
    archimedean_equivalent,
    archimedean_leq,
    ext,
    hilbert_distance,
    hilbert_seminorm,
    lower_add,
    pointwise_inf,
    pointwise_sup,
    upper_add,
)
from .irreducible import (
    ReductionReport,
    archimedean_classes,
    archimedean_maximal,
    essential_columns,
    fully_reduced,
    is_minimal_in_S,
    min_S_candidate,
    refute_inf_irreducible,
    refute_sup_irreducible,
    relative_inf,
)
from .isophi import (
    AffineReparam,
    IsoSpec,
    KernelConjugacy,
    apply_iso,
    decompose_iso,
    dual_value,
    find_kernel_conjugacy,
    hilbert_obstruction,
    hilbert_profile,
    invert_iso,
    is_max_plus_iso,
    primal_value,
    push_through_generators,
)
from .kernel import (
    Kernel,
    check_anti_involution,
    combine,
    conjugate,
    e_x_vector,
    in_inf_closure,
    is_symmetric,
    project,
    range_membership,
    residual_coefficients,
    separates_points,
    strict_trop_monotone,
    transpose_conjugate,
)
from .metrics import (
    WeakMetric,
    dirac_kernel,
    from_metric,
    from_weak_metric,
    funk_weak_metric,
    inner_product_kernel,
    metric_from_graph,
    semiconvex_kernel,
)

__version__ = "0.1.0"
