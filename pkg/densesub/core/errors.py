"""
DenseSub - Errors
=================

Exception hierarchy shared by every module. Library code raises these; the
CLI turns them into exit codes and translated messages.
"""


class DenseSubError(RuntimeError):
    """Base class for all DenseSub failures."""


class GraphError(DenseSubError):
    """A graph violates a structural invariant (self-loop, range, bipartition)."""


class GraphFormatError(DenseSubError):
    """Edge-list text could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(DenseSubError):
    """An operation was called outside its documented domain."""


class MissingBipartitionError(PreconditionError):
    """The operation needs a declared bipartition."""


class CapExceededError(DenseSubError):
    """An enumeration would exceed its explicit cap."""

    def __init__(self, what, required, cap):
        self.what = what
        self.required = required
        self.cap = cap
        super().__init__(f"{what}: {required} exceeds cap {cap}")


class HypothesisError(PreconditionError):
    """A bound hypothesis needed by a strict call does not hold."""


class SelectionError(DenseSubError):
    """No qualifying selection exists among the supplied structures."""


class SplitExhaustedError(DenseSubError):
    """No partition passed validation within the allowed attempts."""

    def __init__(self, attempts, best, diagnostics):
        self.attempts = attempts
        self.best = best
        self.diagnostics = diagnostics
        super().__init__(f"no passing partition after {attempts} attempts")


class RegularizationError(DenseSubError):
    """Degree-class regularization produced no usable selection."""


class CertificateFormatError(DenseSubError):
    """Certificate or partition text could not be parsed."""


class SpecError(DenseSubError):
    """An experiment specification failed validation."""
