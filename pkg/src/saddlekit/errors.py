"""Exception types shared across saddlekit modules."""


class SaddlekitError(Exception):
    """Base class for all saddlekit errors."""


class DimensionMismatchError(SaddlekitError, ValueError):
    """A vector's dimension does not match what the domain/objective declares."""


class UnsupportedDomainError(SaddlekitError, ValueError):
    """Operation requires a convex domain and got a nonconvex one."""


class EvaluationError(SaddlekitError, ArithmeticError):
    """Objective evaluation produced a non-finite value.

    Carries the offending inputs so the failure is reproducible.
    """

    def __init__(self, message, x=None, y=None):
        super().__init__(message)
        self.x = x
        self.y = y


class MembershipError(SaddlekitError, ValueError):
    """A point claimed to belong to a domain does not."""


class DegenerateGameError(SaddlekitError, ValueError):
    """Quadratic game has no finite reduction (rank-0 curvature with coupling)."""


class ProblemFormatError(SaddlekitError, ValueError):
    """CLI problem file failed strict parsing.

    `location` names the offending field for the diagnostic line.
    """

    def __init__(self, message, location=""):
        super().__init__(message)
        self.location = location
