"""Exception types shared across the package."""


class NimcellError(ValueError):
    """Base class for every error raised by nimcell."""


class DimensionMismatch(NimcellError):
    pass


class NonnegativeSumMove(NimcellError):
    def __init__(self, move):
        super().__init__(f"move {tuple(move)} does not decrease the total match count")
        self.move = tuple(move)


class DuplicateMove(NimcellError):
    def __init__(self, move):
        super().__init__(f"move {tuple(move)} listed more than once")
        self.move = tuple(move)


class InvalidModularMove(NimcellError):
    pass


class BoxMismatch(NimcellError):
    pass


class BoxTooSmall(NimcellError):
    pass


class ShapeMismatch(NimcellError):
    pass


class InvalidRule(NimcellError):
    pass


class UnboundShift(NimcellError):
    pass


class ShiftOutOfRange(NimcellError):
    pass


class LeafAtRoot(NimcellError):
    pass


class LayoutViolation(NimcellError):
    pass


class GadgetTooSmall(NimcellError):
    pass
