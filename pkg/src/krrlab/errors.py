"""Exception and warning types shared across krrlab."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class BracketError(DomainError):
    """A monotone search could not bracket its target on the allowed interval."""


class DivergenceError(RuntimeError):
    """A truncated series flagged as non-convergent inside an experiment cell."""

    def __init__(self, message, p=None, m=None):
        super().__init__(message)
        self.p = p
        self.m = m


class DivergenceWarning(UserWarning):
    pass


class TruncationWarning(UserWarning):
    pass


class ConditioningWarning(UserWarning):
    pass
