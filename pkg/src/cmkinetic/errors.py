"""Exception hierarchy shared by every module of the package."""


class CMKineticError(Exception):
    """Base class for all package errors."""


class InvalidOrder(CMKineticError, ValueError):
    """Mittag-Leffler/Wright parameters outside the supported range."""


class DomainError(CMKineticError, ValueError):
    """Argument or model parameter outside the domain of a function."""


class BranchError(CMKineticError, ValueError):
    """Evaluation requested on the negative real axis (branch cut)."""


class NonConvergence(CMKineticError, ArithmeticError):
    """A series hit its term cap without meeting its error target."""


class QuadratureFailure(CMKineticError, ArithmeticError):
    """An integral could not be resolved to the requested tolerance."""


class EvaluationError(CMKineticError, ArithmeticError):
    """A transform could not be evaluated at any probe point."""
