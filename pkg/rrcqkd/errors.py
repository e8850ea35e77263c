class RrcQkdError(Exception):
    """Base class for numerical failures. ``exit_code`` is what the CLI exits with."""

    exit_code = 1


class DegeneratePulseError(RrcQkdError):
    def __init__(self, message="degenerate pulse"):
        super().__init__(message)


class TruncationError(RrcQkdError):
    exit_code = 3

    def __init__(self, message="truncation covers pulse support incompletely"):
        super().__init__(message)


class NotConvergedError(RrcQkdError):
    exit_code = 3

    def __init__(self, message="ISI tail not converged", tail_bound=None):
        super().__init__(message)
        self.tail_bound = tail_bound


class UnphysicalStateError(RrcQkdError):
    exit_code = 3

    def __init__(self, message="unphysical symplectic eigenvalue"):
        super().__init__(message)


class NoPositiveKeyError(RrcQkdError):
    exit_code = 4

    def __init__(self, message="no positive key across the requested sweep"):
        super().__init__(message)
