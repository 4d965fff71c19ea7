"""Exception hierarchy.  Anything derived from ValidationError is a bad input."""


class ValidationError(ValueError):
    pass


class SymmetryError(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class BlockStructureError(ValidationError):
    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class NotPositiveError(ValidationError):
    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class CriterionError(ValidationError):
    """A formula was requested outside the hypothesis it is valid under."""


class HypothesisNotCertified(RuntimeError):
    """No invertible path was found, so the loop-family test cannot decide."""
