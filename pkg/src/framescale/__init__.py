"""Scalings of finite frames in R^n.

Decide and construct standard scalings (one constant per vector) and
piecewise scalings (separate constants for the two parts of an
orthogonal splitting) that turn a frame into a Parseval frame, verify
candidate scalings, transport them by unitaries, and certify
non-scalability for clustered families.
"""

__version__ = "0.1.0"

from .frames import (
    DEFAULT_TOL,
    Frame,
    FrameBounds,
    InternalInconsistencyError,
    VerificationReport,
    apply_unitary,
    canonical_parseval,
    frame_bounds,
    frame_operator,
    normalize_columns,
    verify_parseval,
)
from .projections import (
    OrthogonalProjection,
    canonical_projection,
    complement,
    projection_from_basis,
    projection_from_matrix,
    random_projection,
    validate_projection,
)
from .nnls import NNLSResult, nnls
from .scaling import (
    ScalabilityVerdict,
    StandardScaling,
    open_quadrant_certificate,
    solve_standard_scaling,
)
from .piecewise import (
    PiecewiseReport,
    PiecewiseScaling,
    R3Construction,
    construct_from_orthogonal_split,
    construct_r2,
    construct_r3,
    construct_r3_detailed,
    construct_r4_special,
    cross_operator,
    scaled_family,
    search_piecewise,
    verify_piecewise,
)
from .transport import intertwiner, to_canonical, transport_scaling
from .obstructions import (
    ObstructionReport,
    check_constant_bounds,
    closeness_obstruction,
    dichotomy_check,
    normalization_gap_bound,
    pairwise_closeness,
)
from .fileio import FrameFormatError, load_frame, load_matrix, save_frame

__all__ = [
    "DEFAULT_TOL",
    "Frame",
    "FrameBounds",
    "FrameFormatError",
    "InternalInconsistencyError",
    "NNLSResult",
    "ObstructionReport",
    "OrthogonalProjection",
    "PiecewiseReport",
    "PiecewiseScaling",
    "R3Construction",
    "ScalabilityVerdict",
    "StandardScaling",
    "VerificationReport",
    "apply_unitary",
    "canonical_parseval",
    "canonical_projection",
    "check_constant_bounds",
    "closeness_obstruction",
    "complement",
    "construct_from_orthogonal_split",
    "construct_r2",
    "construct_r3",
    "construct_r3_detailed",
    "construct_r4_special",
    "cross_operator",
    "dichotomy_check",
    "frame_bounds",
    "frame_operator",
    "intertwiner",
    "load_frame",
    "load_matrix",
    "nnls",
    "normalization_gap_bound",
    "normalize_columns",
    "open_quadrant_certificate",
    "pairwise_closeness",
    "projection_from_basis",
    "projection_from_matrix",
    "random_projection",
    "save_frame",
    "scaled_family",
    "search_piecewise",
    "solve_standard_scaling",
    "to_canonical",
    "transport_scaling",
    "validate_projection",
    "verify_parseval",
    "verify_piecewise",
]
