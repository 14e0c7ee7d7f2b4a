"""Exception hierarchy shared by every vqelab module."""


class VQELabError(Exception):
    """Base class for all vqelab errors."""


class DimensionError(VQELabError, ValueError):
    """Operands act on different numbers of qubits."""


class CapacityError(VQELabError, ValueError):
    """Requested size exceeds the dense-simulation cap."""


class ValidationError(VQELabError, ValueError):
    """Input violates a type invariant (range, hermiticity, shape)."""


class ParseError(VQELabError, ValueError):
    """Malformed input text; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MetricError(VQELabError, ValueError):
    """A metric is undefined for the given inputs."""


class ConfigError(VQELabError, ValueError):
    """Inconsistent experiment configuration."""


class OptimizerError(VQELabError, RuntimeError):
    """The objective returned a non-finite value."""
