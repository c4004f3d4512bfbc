"""Exception hierarchy.

Contract violations derive from :class:`ContractError` and convergence
problems from :class:`ConvergenceError`; the CLI maps them to exit codes 2
and 3 respectively.
"""


class SlithypError(Exception):
    """Base class for all package errors."""


class ContractError(SlithypError, ValueError):
    """An input violates an operation's preconditions."""


class ConvergenceError(SlithypError, RuntimeError):
    """A numerical procedure did not converge within its budget."""


class PointOutsideDomain(ContractError):
    pass


class BasePointNotOnCircle(ContractError):
    pass


class SingularPoint(ContractError):
    pass


class InvalidSequence(ContractError):
    pass


class TruncationUnderflow(ContractError):
    pass


class InvalidParameter(ContractError):
    pass


class InvalidInterval(ContractError):
    pass


class CurveExitsDomain(ContractError):
    pass


class NotAnAutomorphism(ContractError):
    pass


class SelfMapViolation(ContractError):
    pass


class NonJordanBoundary(ContractError):
    pass


class FileFormatError(ContractError):
    pass


class QuadratureNonconvergence(ConvergenceError):
    pass


class PointsDisconnectedAtResolution(ConvergenceError):
    """The grid is too coarse to route between the points; refine it."""


class FitDiverged(ConvergenceError):
    pass


class InversionDiverged(ConvergenceError):
    pass


class ConvergenceFailure(ConvergenceError):
    pass
