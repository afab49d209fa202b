"""Lower bounds on bipartite entanglement measures from projector
expectation values, with the underlying separability criterion and
entanglement-robustness thresholds.

The workflow: build a state (states), pick a subspace and settle its
product-overlap supremum lam_sup (subspace), then read off concurrence and
convex-roof negativity bounds (bounds) and how stable a detection is under
perturbations or mixing (robustness). All heavy lifting is dense numpy on
systems up to a few dozen dimensions per factor.
"""

from .bounds import (
    BoundReport,
    SeparabilityResult,
    baseline_ppt_realignment,
    bound_report,
    concurrence_lower,
    concurrence_lower_optimized,
    concurrence_lower_sharp,
    cren_lower,
    cren_lower_optimized,
    ensemble_separability_check,
    projector_expectation,
    separability_test,
    sharp_bound_comparison,
)
from .errors import (
    CertificationRequiredError,
    DimensionMismatchError,
    DomainError,
    EntboundsError,
    HermiticityError,
    InvalidMatrixError,
    InvalidPerturbationError,
    NetBudgetError,
    NotDetectedError,
    ParseError,
    UnsupportedFamilyError,
)
from .linalg import (
    BipartiteOperator,
    DensityOperator,
    density_ky_fan,
    hermitian_eigensystem,
    hermitian_expectation,
    ky_fan_norm,
    partial_trace_a,
    partial_trace_b,
    partial_transpose_a,
    partial_transpose_b,
    realign,
    singular_values,
    trace_norm,
    trace_pairing_bounds,
)
from .measures import (
    FvResult,
    MeasureValue,
    concurrence_exact_family,
    concurrence_pure,
    concurrence_upper_from_ensemble,
    cren_exact_family,
    cren_upper_from_ensemble,
    fully_entangled_fraction_v,
    negativity,
    negativity_pure_schmidt,
)
from .robustness import (
    MixingThreshold,
    PerturbationGate,
    PerturbationVerdict,
    check_perturbation,
    mixing_threshold,
    noise_overlap_bounds,
    perturbation_gate,
)
from .states import (
    EnsembleDecomposition,
    PureState,
    antisym_basis,
    eigen_ensemble,
    isotropic,
    load_state,
    max_entangled,
    mixture_antisym_phi_plus,
    mixture_defining_ensemble,
    random_density,
    random_ensemble,
    random_pure,
    save_state,
    schmidt_decompose,
    werner,
)
from .subspace import (
    LambdaSup,
    SeesawOptions,
    Subspace,
    best_overlap_in_v,
    lambda_sup_certified,
    lambda_sup_closed_form,
    lambda_sup_seesaw,
    load_subspace,
    orthogonal_complement,
    projector,
    resolve_lambda_sup,
    save_subspace,
)

__version__ = "0.1.0"
