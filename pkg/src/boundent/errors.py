class PreconditionError(ValueError):
    """A hypothesis of a construction or check does not hold.

    ``hypothesis`` is a short machine-readable tag naming the failed condition.
    """

    def __init__(self, message: str, hypothesis: str = ""):
        super().__init__(message)
        self.hypothesis = hypothesis


class EmptyFamily(LookupError):
    """No product vector with the requested supports lies in the range."""
