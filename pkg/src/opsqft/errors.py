class OpsQftError(Exception):
    pass


class ValidationError(OpsQftError, ValueError):
    """Input violates a documented precondition."""


class QuaternionDomainError(OpsQftError, ValueError):
    pass


class QuaternionParseError(ValidationError):
    pass


class AxisUndefinedError(QuaternionDomainError):
    """Raised when the axis of a (numerically) real quaternion is requested."""


class DegenerateError(OpsQftError, ValueError):
    pass


class BranchError(OpsQftError, ValueError):
    """Generic-branch formula requested on a degenerate (g = +-f) context."""


class FormatError(OpsQftError, ValueError):
    pass
