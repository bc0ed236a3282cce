"""Exception types raised by phasecov."""


class PhaseCovError(Exception):
    """Base class for all library errors."""


class DimensionError(PhaseCovError, ValueError):
    """Matrix or subsystem dimensions are inconsistent."""


class DomainError(PhaseCovError, ValueError):
    """A parameter lies outside its mathematical domain."""


class ContractError(PhaseCovError, ValueError):
    """An input violates a documented precondition (e.g. Hermiticity)."""


class InvariantError(PhaseCovError, ValueError):
    """A constructed object fails one of its invariants."""


class MachineMismatchError(PhaseCovError, ValueError):
    """Operation called with a machine of the wrong dimension."""


class ConvergenceError(PhaseCovError, RuntimeError):
    pass


class AuditError(PhaseCovError, RuntimeError):
    """A sweep's closed-form column disagrees with the brute-force recomputation."""
