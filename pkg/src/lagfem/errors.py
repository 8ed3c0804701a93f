"""Exception types shared across the solver."""


class PositivityViolation(ValueError):
    """Raised when specific volume or temperature is not strictly positive."""

    def __init__(self, field, index=None, value=None, message=None):
        self.field = field
        self.index = index
        self.value = value
        if message is None:
            where = f" at element {index}" if index is not None else ""
            message = f"nonpositive {field}{where} (value={value!r})"
        super().__init__(message)


class StepFailure(RuntimeError):
    """Raised when the time stepper cannot produce an admissible step."""

    def __init__(self, t, dt, retries, cause=None):
        self.t = t
        self.dt = dt
        self.retries = retries
        self.cause = cause
        detail = ""
        if isinstance(cause, PositivityViolation):
            detail = f"; offending field {cause.field!r}, element {cause.index}"
        super().__init__(
            f"step failed at t={t!r} after {retries} retries (dt={dt!r}){detail}"
        )


class ConfigError(ValueError):
    """Invalid run configuration."""
