"""Problem data model, objective oracle and instance codec."""

from .objective import (
    augmented_lagrangian,
    eval_gradient,
    eval_objective,
    lagrangian_gradient,
    lipschitz_estimate,
)
from .serialization import (
    InstanceDocument,
    InstanceFormatError,
    dump_instance,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    spec_from_dict,
    spec_to_dict,
)
from .types import (
    Box,
    ConvexSetX,
    DimensionError,
    Halfspace,
    LeastSquares,
    Matrix,
    Objective,
    ProblemSpec,
    QuadraticForm,
    QuadRisk,
    SemicontinuousSet,
    Vector,
    as_matrix,
    as_vector,
)

__all__ = [
    "Box",
    "ConvexSetX",
    "DimensionError",
    "Halfspace",
    "InstanceDocument",
    "InstanceFormatError",
    "LeastSquares",
    "Matrix",
    "Objective",
    "ProblemSpec",
    "QuadRisk",
    "QuadraticForm",
    "SemicontinuousSet",
    "Vector",
    "as_matrix",
    "as_vector",
    "augmented_lagrangian",
    "dump_instance",
    "eval_gradient",
    "eval_objective",
    "instance_from_dict",
    "instance_to_dict",
    "lagrangian_gradient",
    "lipschitz_estimate",
    "load_instance",
    "spec_from_dict",
    "spec_to_dict",
]
