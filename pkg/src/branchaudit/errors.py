"""Exception hierarchy shared by every module."""


class BranchAuditError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BranchAuditError, ValueError):
    """Input outside the domain of a function (e.g. log of zero)."""


class PoleError(DomainError):
    """Evaluation at a pole of a rational map."""


class RangeError(BranchAuditError, OverflowError):
    """Result would overflow double precision."""


class SingularError(DomainError):
    """A closed-form expression has a vanishing denominator."""


class ParameterError(BranchAuditError, ValueError):
    """Invalid construction parameter (phase, guard, window, grid...)."""


class SpuriousBracketError(BranchAuditError):
    """A bracketed jump vanished under refinement."""


class AuditFailure(BranchAuditError):
    """An audit found a component on which f is not constant.

    The partially assembled report is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class EmptyInputError(BranchAuditError, ValueError):
    """An operation that needs data received none."""


class ConfigError(ParameterError):
    """Invalid run configuration (CLI exit code 3)."""
