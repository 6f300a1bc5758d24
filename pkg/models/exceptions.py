"""models/exceptions.py: Exception hierarchy for the snake gait toolkit."""


class SnakeGaitError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(SnakeGaitError, ValueError):
    """Malformed configuration or a value object built with invalid fields."""


class NumericalFailure(SnakeGaitError, RuntimeError):
    """Base class for numerical problems (CLI exit code 2)."""


class SingularSystemError(NumericalFailure):
    """The assembled Newton-Euler system is rank-deficient."""


class NotPositiveDefiniteError(NumericalFailure):
    """A regularized control Hessian failed the Cholesky test in the backward pass."""

    def __init__(self, step: int, reg: float):
        super().__init__(f'Q_uu not positive definite at step {step} (reg={reg:.3e})')
        self.step = step
        self.reg = reg


class NonFiniteStateError(NumericalFailure):
    """A rollout produced NaN or inf entries."""

    def __init__(self, step: int, message: str = ''):
        detail = f': {message}' if message else ''
        super().__init__(f'Non-finite state at step {step}{detail}')
        self.step = step


class NonFiniteExpansionError(NumericalFailure):
    """The quadratic expansion of the backward pass overflowed."""

    def __init__(self, step: int):
        super().__init__(f'Non-finite Q expansion at step {step}')
        self.step = step
