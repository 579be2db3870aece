"""Exceptions raised by celloffset."""


class ParameterError(ValueError):
    """One or more inputs violate a documented invariant."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message, residual=None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (residual {residual:.3g})"
        super().__init__(message)


class QuadratureError(NumericalError):
    """Adaptive quadrature exhausted its subdivision budget."""


class EmptyConditioningError(NumericalError):
    """The conditioning event of an expectation has (numerically) zero probability."""


class ConvergenceError(NumericalError):
    """An iteration ran out of budget before settling."""

    def __init__(self, message, last_iterate=None, residual=None):
        self.last_iterate = last_iterate
        super().__init__(f"{message}, last iterate {last_iterate}", residual)


class ConsistencyError(RuntimeError):
    """A result contradicts a guarantee the solver relies on; indicates a tolerance bug."""
