"""
Exceptions shared by every app of the engine.

Each exception carries the process exit code that the management commands translate it to:
    - 1: usage errors (bad flags, invalid configuration)
    - 2: data errors (unparseable or inconsistent input files)
    - 3: numerical failures (non-convergence, divergence, non-finite gradients)
"""

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class MedianGNNError(Exception):
    """
    Base class for all engine errors.

    Attributes:
        exit_code (int): The exit code used when the error reaches a management command.
    """

    exit_code = EXIT_USAGE


class DataError(MedianGNNError):
    """Raised when an input file or in-memory dataset is malformed."""

    exit_code = EXIT_DATA


class NumericalError(MedianGNNError):
    """Raised when a numerical routine fails."""

    exit_code = EXIT_NUMERICAL


class GraphParseError(DataError):
    """
    Raised when an edge-list line cannot be parsed.

    Attributes:
        line_number (int): 1-based line number of the offending line.
    """

    def __init__(self, line_number, message):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class GraphValidationError(DataError):
    """Raised when a graph violates its invariants (bad node ids, duplicate arcs, self-loops)."""


class EmptyGraphError(DataError):
    """Raised when a graph has no edges where at least one is required."""


class DatasetFormatError(DataError):
    """Raised when a dataset file does not follow the header/sample line format."""


class LabelError(DataError):
    """Raised when a class label is outside 0..C-1."""


class SplitError(DataError):
    """Raised when a requested split would leave one side empty."""


class CorpusError(DataError):
    """Raised when a corpus directory or function-word list is unusable."""


class ShapeError(MedianGNNError, ValueError):
    """Raised when array dimensions do not match the operation's contract."""


class StaleCacheError(MedianGNNError, RuntimeError):
    """Raised when a backward pass is given a cache that does not match the current parameters."""


class NoSpectralRadiusError(NumericalError):
    """Raised when the spectral radius of a zero matrix is requested."""


class ConvergenceError(NumericalError):
    """
    Raised when power iteration does not converge within its iteration budget.

    Attributes:
        last_iterate (float): The last spectral radius estimate.
    """

    def __init__(self, last_iterate, iterations):
        self.last_iterate = last_iterate
        self.iterations = iterations
        super().__init__(
            f"power iteration did not converge in {iterations} iterations "
            f"(last estimate {last_iterate!r})"
        )


class NonFiniteGradientError(NumericalError):
    """
    Raised when an optimizer receives a gradient with NaN or infinite entries.

    Attributes:
        parameter (str): Name of the parameter tensor whose gradient is not finite.
    """

    def __init__(self, parameter):
        self.parameter = parameter
        super().__init__(f"non-finite gradient for parameter '{parameter}'")


class DivergenceError(NumericalError):
    """
    Raised when the training loss becomes non-finite.

    Attributes:
        epoch (int): 1-based epoch in which the loss diverged.
    """

    def __init__(self, epoch):
        self.epoch = epoch
        super().__init__(f"training loss diverged in epoch {epoch}")


class NonFiniteSignalError(NumericalError):
    """Raised when a signal batch handed to the network holds NaN or infinite values."""


class CheckpointError(DataError):
    """Raised when a model checkpoint cannot be read or does not match its declared shapes."""


class RoundError(MedianGNNError):
    """
    Wraps an error raised inside one experiment round, keeping the original exit code.

    Attributes:
        round_index (int): 0-based round in which the error occurred.
        error (Exception): The original error.
    """

    def __init__(self, round_index, error):
        self.round_index = round_index
        self.error = error
        self.exit_code = getattr(error, "exit_code", EXIT_USAGE)
        super().__init__(f"round {round_index}: {error}")
