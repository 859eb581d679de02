class OptimizationError(Exception):
    """
    Base class for every error raised by the solver library.
    """


class DimensionMismatchError(OptimizationError, ValueError):
    """
    Two operands do not share the same dimension.
    """

    def __init__(self, expected, actual, what="vector"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} has dimension {actual}, expected {expected}")


class NonFiniteError(OptimizationError, ArithmeticError):
    """
    An iterate or a result contains NaN or Inf.
    """

    def __init__(self, message, iteration=None):
        self.iteration = iteration
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)


class ProxError(OptimizationError):
    """
    A proximal step could not be computed.
    """


class ConvergenceError(OptimizationError):
    """
    An inner iterative routine hit its iteration cap.

    The best iterate found so far is kept so the caller can still inspect it.
    """

    def __init__(self, message, best_iterate=None, iterations=None):
        self.best_iterate = best_iterate
        self.iterations = iterations
        super().__init__(message)


class GenerationError(OptimizationError):
    """
    A problem generator could not produce a valid instance.
    """


class MissingConstantsError(OptimizationError, ValueError):
    """
    A bound evaluator needs constants that were not supplied.
    """

    def __init__(self, names):
        self.names = tuple(names)
        super().__init__("missing constants: " + ", ".join(self.names))


class AssumptionError(OptimizationError, ValueError):
    """
    A structural assumption of the method does not hold for the problem.
    """


class ReturnsFormatError(OptimizationError, ValueError):
    """
    A returns CSV file is malformed.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column!r}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class ConfigError(OptimizationError, ValueError):
    """
    An experiment configuration is invalid.
    """


class HypothesisWarning(UserWarning):
    """
    A standing hypothesis of a theoretical bound is violated.
    """
