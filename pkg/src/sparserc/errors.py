"""Exception types raised across the package."""


class SparseRCError(Exception):
    pass


class InvalidConfig(SparseRCError, ValueError):
    pass


class ShapeMismatch(SparseRCError, ValueError):
    pass


class DegenerateInput(SparseRCError, ValueError):
    pass


class NotADag(SparseRCError, ValueError):
    pass


class TooLarge(SparseRCError, ValueError):
    pass


class NonFinite(SparseRCError, FloatingPointError):
    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"loss became non-finite at iteration {iteration}")


class ParseError(SparseRCError, ValueError):
    def __init__(self, path, row, column, message):
        self.path = path
        self.row = row
        self.column = column
        super().__init__(f"{path}: row {row}, column {column}: {message}")


class SolverTimeout(SparseRCError, TimeoutError):
    def __init__(self, iteration):
        self.iteration = iteration
        super().__init__(f"wall-clock limit reached at iteration {iteration}")
