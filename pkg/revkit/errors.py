"""Exception hierarchy shared by every revkit module."""


class RevkitError(Exception):
    """Base class for all revkit failures."""


class NegativeValueError(RevkitError):
    def __init__(self, paper: int, reviewer: int, value: float):
        self.paper = paper
        self.reviewer = reviewer
        self.value = value
        super().__init__(
            f"Negative affinity {value} for paper {paper + 1}, reviewer {reviewer + 1}"
        )


class NonFiniteValueError(RevkitError):
    pass


class DimensionMismatchError(RevkitError):
    pass


class InvalidKError(RevkitError):
    pass


class InvalidCapacityError(RevkitError):
    pass


class UnknownReviewerError(RevkitError):
    pass


class InvalidAllocationError(RevkitError):
    def __init__(self, message: str, violations=()):
        self.violations = tuple(violations)
        super().__init__(message)


class InvalidOrderError(RevkitError):
    pass


class TooLargeError(RevkitError):
    pass


class ElementPresentError(RevkitError):
    pass


class UnboundedAlphaError(RevkitError):
    """A sampled append drove USW_RRR from positive to zero; no finite alpha exists."""

    def __init__(self, order, paper: int, usw_before: float):
        self.order = tuple(order)
        self.paper = paper
        self.usw_before = usw_before
        super().__init__(
            f"No finite alpha: appending paper {paper + 1} to order "
            f"{[p + 1 for p in self.order]} drops USW from {usw_before} to 0"
        )


class UnboundedGammaError(RevkitError):
    """Some triple has a non-positive gain on X but a positive gain on Y."""

    def __init__(self, x, y, element, gain_x: float, gain_y: float):
        self.witness = (x, y, element)
        self.gain_x = gain_x
        self.gain_y = gain_y
        super().__init__(
            f"Gamma unbounded: gain {gain_x} on X but {gain_y} on Y for element {element}"
        )


class NoValidSamplesError(RevkitError):
    pass


class AllZeroScoresError(RevkitError):
    pass


class ParseError(RevkitError):
    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        self.row = row
        self.col = col
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {col})" if col is not None else ")")
        super().__init__(message + where)


class InvalidParamsError(RevkitError):
    pass
