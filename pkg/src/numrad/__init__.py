"""numrad: operator norms, numerical radii and minimal projections on l^p_n."""

from .spaces import (
    LpSpace,
    Vector,
    Functional,
    lp_norm,
    dual_exponent,
    ext_functionals,
    pair,
    sphere_sample,
)
from .eigen import jacobi_eigh
from .operators import (
    Operator,
    RadiusResult,
    operator_norm,
    numerical_radius,
    numerical_range_sample,
    numerical_index_estimate,
)
from .projections import (
    ProjectionProblem,
    Parametrization,
    ExtremalPair,
    Certificate,
    OptimizerConfig,
    MinimalProjection,
    annihilator_basis,
    parametrize,
    minimal_projection,
    extremal_pairs,
    invariance_certificate,
)
from .symmetry import (
    IsometryGroup,
    GroupReport,
    FourierGrid,
    cyclic_shift_group,
    sign_change_group,
    trivial_group,
    grid_translation_group,
    verify_group,
    rudin_average,
    commutant_projections_dimension,
    trig_basis,
    fourier_projection,
    interpolation_projection,
    lebesgue_constant,
    marcinkiewicz_average,
)
from .unicity import (
    UnicityEstimate,
    Dim4Instance,
    BuiltinInstance,
    strong_unicity_estimate,
    dim4_lambda,
    builtin_instances,
)
from .verify import run_acceptance, AcceptanceReport, CriterionResult

__version__ = "0.1.0"
