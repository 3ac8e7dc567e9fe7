"""Core-EP inverses of complex matrices: computation, law verification and the core-EP order."""

from .errors import (
    CoreEPError,
    InconsistentSpec,
    MatrixFormatError,
    NoBCInverse,
    NoGroupInverse,
    NumericalFailure,
    OrderViolation,
    RouteMismatch,
    ShapeError,
)
from .gen_inverses import (
    bc_inverse,
    core_ep,
    core_ep_decompose,
    core_ep_inverse,
    core_inverse,
    drazin,
    group_inverse,
    index,
    projection_characterization,
)
from .matcore import DEFAULT_TOL, ToleranceConfig, load_matrix, pinv, save_matrix
from .order import order_holds, thm44_assemble, thm44_decompose

__version__ = "0.1.0"

__all__ = [
    "CoreEPError", "InconsistentSpec", "MatrixFormatError", "NoBCInverse", "NoGroupInverse",
    "NumericalFailure", "OrderViolation", "RouteMismatch", "ShapeError",
    "bc_inverse", "core_ep", "core_ep_decompose", "core_ep_inverse", "core_inverse", "drazin",
    "group_inverse", "index", "projection_characterization",
    "DEFAULT_TOL", "ToleranceConfig", "load_matrix", "pinv", "save_matrix",
    "order_holds", "thm44_assemble", "thm44_decompose",
]
