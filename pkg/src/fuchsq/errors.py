"""Exception hierarchy shared by every module of the package."""


class FuchsianError(Exception):
    """Base class for all errors raised by fuchsq."""


class ValuationOfZero(FuchsianError, ValueError):
    pass


class FactorizationOutOfRange(FuchsianError, ValueError):
    pass


class GeometryError(FuchsianError, ValueError):
    """Input vectors do not have the geometric type an operation needs."""


class InputError(FuchsianError, ValueError):
    """A construction input violates its ordering or square-class constraints."""


class SteeringError(FuchsianError, RuntimeError):
    pass


class InvariantViolation(FuchsianError, AssertionError):
    """An internal invariant failed; this indicates a bug, not bad input."""


class CriterionError(FuchsianError, ValueError):
    pass


class SearchExhausted(FuchsianError, RuntimeError):
    pass


class CertificateError(FuchsianError, ValueError):
    pass


class SchemaError(FuchsianError, ValueError):
    pass
