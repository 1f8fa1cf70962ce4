"""statgeom: numerical verification of statistical-manifold geometry.

Coordinate-chart metrics, affine connections and almost product structures
are given as expression fields with exact first and second derivatives; from
these the package derives conjugate connections, curvature tensors, Fisher
and α-connection geometry, and O'Neill submersion tensors, and certifies or
refutes the structural identities relating them at deterministically sampled
points.
"""

from .expr import (
    Dual2,
    EvaluationError,
    ParseError,
    ScalarField,
    eval2,
    eval_value,
    fd_check,
    format_expression,
    parse_expression,
)
from .geometry import (
    ChartSpec,
    CheckResult,
    ConstantCurvatureFit,
    CurvatureAtPoint,
    DEFAULT_POINT_COUNT,
    DEFAULT_TOLERANCE,
    DegeneratePlaneError,
    ExpressionConnection,
    ManifoldSpec,
    MetricError,
    MetricField,
    check_dual_curvature_identity,
    check_statistical_structure,
    conjugate_connection,
    curvature_at,
    difference_tensor_at,
    fit_kurose_constant,
    levi_civita,
    metric_matrices_at,
    metric_signature,
    sample_points,
    sectional_curvature,
    statistical_curvature_at,
)
from .product import (
    AdjointStructure,
    Certification,
    ExpressionProductStructure,
    TheoremOutcome,
    adjoint_structure,
    check_almost_product,
    check_pairing_identities,
    check_para_kahler_like,
    check_space_form,
    conjugate_parallelism_check,
    covariant_derivative_P_at,
    fit_space_form_constant,
    verify_flatness_theorem,
)
from .expfam import (
    AlphaConnection,
    ExpFamilyModel,
    alpha_connection,
    builtin_model,
    exp_para_structures,
    fisher_metric,
)
from .submersion import (
    CoordinateBasisField,
    ExpressionVectorField,
    HorizontalLiftField,
    OneillTensors,
    ProjectedField,
    StructureImageField,
    SubmersionError,
    SubmersionSpec,
    check_fundamental_tensor_identities,
    check_para_holomorphic,
    check_semi_riemannian_submersion,
    check_statistical_submersion,
    horizontal_lift_at,
    induced_fiber_connections,
    induced_fiber_manifold,
    isometric_fibers_residual,
    lie_bracket_at,
    oneill_tensors_at,
    projectors_at,
    verify_submersion_theorems,
)
from .manifest import Manifest, ManifestError, build_context, load_manifest, parse_manifest
from .report import CheckOutcome, VerificationReport, canonical_json, emit_report
from .suite import CHECKS, DEFAULT_TOLERANCES, run_suite
from .fixtures import (
    curved_product_manifest,
    fixture_ids,
    flat_product_manifest,
    load_fixture,
    model_manifest,
    registry_manifests,
    submersion_manifest,
)

__version__ = "0.1.0"
