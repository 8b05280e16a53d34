"""Fair necklace splitting, loop splitting and inscribed quadrilaterals.

- curves: polylines with arc-length parametrization, builtin loops
- features / registry: functions on [0,1] fed to the splitter, by kind name
- partitions: canonical labelings of the intervals, color constraints
- splitter: the multi-start fair-split solver and its special forms
- geometry: inscribed parallelograms and rectangles, loop splitting
- verify: independent checks and the brute-force discrete oracle
- formats: curve, problem and result files
- plotting: SVG figures (imported on demand, needs matplotlib)
"""

from .curves import Curve, build_curve, builtin_curve, rotate_curve, transform_curve
from .errors import (
    ConstraintError,
    ContractError,
    DomainError,
    InputFileError,
    InvalidCurveError,
    NonConvergenceError,
    ResourceError,
    SplitterError,
)
from .features import discrete_necklace_features
from .geometry import (
    find_anchored_parallelogram,
    find_balanced_rectangle,
    find_parallelogram,
    find_rectangle,
    is_rectangle,
    reassemble,
    split_loop,
    split_loop_colored,
)
from .models import (
    ColorConstraint,
    DiscreteDivision,
    InscribedQuadrilateral,
    LoopSplit,
    ResidualReport,
    SolverOptions,
    SplitConfiguration,
    SplitError,
    VerificationReport,
)
from .partitions import enumerate_partitions
from .protocol import Feature
from .registry import FeatureRegistry, default_registry, make_feature
from .splitter import (
    SplitProblem,
    canonicalize_alternating,
    compose_splittings,
    residual,
    solve_alternating_4,
    solve_colored,
    solve_hobby_rice,
    solve_split,
)
from .verify import (
    brute_force_discrete_split,
    check_loop_split,
    check_split,
    density_probe,
    density_probe_async,
    round_to_beads,
)

__all__ = [
    "Curve",
    "build_curve",
    "builtin_curve",
    "rotate_curve",
    "transform_curve",
    "Feature",
    "FeatureRegistry",
    "default_registry",
    "make_feature",
    "discrete_necklace_features",
    "enumerate_partitions",
    "SplitProblem",
    "residual",
    "solve_split",
    "solve_colored",
    "solve_hobby_rice",
    "solve_alternating_4",
    "canonicalize_alternating",
    "compose_splittings",
    "is_rectangle",
    "find_parallelogram",
    "find_rectangle",
    "find_balanced_rectangle",
    "find_anchored_parallelogram",
    "split_loop",
    "split_loop_colored",
    "reassemble",
    "check_split",
    "check_loop_split",
    "brute_force_discrete_split",
    "round_to_beads",
    "density_probe",
    "density_probe_async",
    "ColorConstraint",
    "DiscreteDivision",
    "InscribedQuadrilateral",
    "LoopSplit",
    "ResidualReport",
    "SolverOptions",
    "SplitConfiguration",
    "SplitError",
    "VerificationReport",
    "SplitterError",
    "InvalidCurveError",
    "DomainError",
    "ContractError",
    "ConstraintError",
    "InputFileError",
    "NonConvergenceError",
    "ResourceError",
]
