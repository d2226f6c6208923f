"""Log-convex decay diagnostics for matrix generators of u' + Au = 0."""
from .analysis import (
    ClassificationReport,
    ClassifyConfig,
    CriterionWitness,
    SearchConfig,
    classify,
    counterexample_search,
    criterion_gap,
    criterion_minimize,
    hyponormality_defect,
    numerical_abscissa,
    restricted_hyponormality_defect,
    sectoriality_probe,
    spectral_abscissa,
    variational_criterion_gap,
)
from .dynamics import (
    decay_envelope,
    height_derivatives,
    logconvex_scan,
    logconvexity_gap,
    propagate,
    short_time_check,
    three_point_check,
    trajectory_scan,
)
from .operators import DiscretizationSpec, assemble_advection_diffusion, assemble_form, gallery
from .linalg import adjoint, eig_general, eig_hermitian, matexp
from .sphere import SphereConfig
from .tolerances import Tolerances

__version__ = "0.1.0"
