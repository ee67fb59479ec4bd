"""Exception types raised by the library.

Each class carries a short ``kind`` tag that the CLI prints as a
machine-parsable prefix.
"""


class FreeFibError(ValueError):
    kind = "error"


class DegenerateInputError(FreeFibError):
    kind = "degenerate-input"


class WrongShapeError(FreeFibError):
    kind = "wrong-shape"


class WrongDomainError(FreeFibError):
    kind = "wrong-domain"


class LegalityError(FreeFibError):
    kind = "illegal-prescription"

    def __init__(self, index, message):
        super().__init__(f"index {index}: {message}")
        self.index = index


class AdjustmentExponentError(FreeFibError):
    kind = "adjustment-exponent-too-small"


class ResourceBoundError(FreeFibError):
    kind = "cap-exceeded"


class DivergenceError(FreeFibError):
    kind = "divergence"


class UnsupportedSequenceError(FreeFibError):
    kind = "unsupported-sequence"
