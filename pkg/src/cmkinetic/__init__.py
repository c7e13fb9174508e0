"""Complete monotonicity of classical and fractional kinetic relaxation functions."""

from .errors import (
    BranchError,
    CMKineticError,
    DomainError,
    EvaluationError,
    InvalidOrder,
    NonConvergence,
    QuadratureFailure,
)
from .relaxation import EvalSeries, ModelKind, ModelParams, memory, permittivity_law, phi, phi_laplace
from .specfun import (
    MLOrder,
    SeriesResult,
    kilbas_saigo_series,
    kilbas_saigo_stretched,
    mittag_leffler2,
    mittag_leffler3,
    pochhammer,
    reciprocal_gamma,
    schneider_F,
    wright2,
)

__version__ = "0.1.0"

__all__ = [
    "BranchError",
    "CMKineticError",
    "DomainError",
    "EvaluationError",
    "InvalidOrder",
    "NonConvergence",
    "QuadratureFailure",
    "EvalSeries",
    "ModelKind",
    "ModelParams",
    "memory",
    "permittivity_law",
    "phi",
    "phi_laplace",
    "MLOrder",
    "SeriesResult",
    "kilbas_saigo_series",
    "kilbas_saigo_stretched",
    "mittag_leffler2",
    "mittag_leffler3",
    "pochhammer",
    "reciprocal_gamma",
    "schneider_F",
    "wright2",
    "__version__",
]
