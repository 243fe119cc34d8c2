"""Exception types shared across the toolkit."""


class WindowLengthError(ValueError):
    """Window length outside the admissible range 1 < L < N."""


class MissingValueError(ValueError):
    """A series contains missing samples where none are allowed."""


class NonForecastableError(ValueError):
    """The chosen component subspace is vertical (nu^2 = 1), so no
    governing recurrence of order L-1 exists and forecasting is impossible."""


class GroupingOverlapError(ValueError):
    """Two named groups claim the same eigentriple index."""


class GapStructureError(ValueError):
    """Gap layout leaves too little intact data for subspace estimation."""


class SvdConvergenceError(RuntimeError):
    """Iterative SVD did not converge within its iteration budget.

    Partial results, when available, are attached as ``sigma``,
    ``left_vectors`` and ``right_vectors``.
    """

    def __init__(self, message, sigma=None, left_vectors=None, right_vectors=None):
        super().__init__(message)
        self.sigma = sigma
        self.left_vectors = left_vectors
        self.right_vectors = right_vectors
