"""Exception types shared across the package.

The CLI maps these onto process exit codes: config problems exit 2,
numeric contract violations exit 3, resource guards exit 4.
"""


class ConfigError(ValueError):
    """Invalid configuration / schema violation. Carries the offending field path."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{message} (field: {field})"
        super().__init__(message)


class InfeasibleSectorError(ValueError):
    """A total-number constraint that no occupation tuple can satisfy."""


class StateNotInBasisError(KeyError):
    """Lookup of an occupation tuple that is not an element of the basis."""


class DegenerateGeneratorsError(ValueError):
    """Generator set is numerically linearly dependent; lists the suspects."""

    def __init__(self, labels):
        self.labels = list(labels)
        super().__init__(
            "generator set is linearly dependent; involved: " + ", ".join(self.labels)
        )


class NumericContractError(RuntimeError):
    """A numeric guarantee (hermiticity, unitarity, ...) was violated."""


class ResourceGuardError(RuntimeError):
    """Projected problem size exceeds the configured dense-solver limit."""


class TruncationLeakageWarning(UserWarning):
    """State has accumulated weight near a truncated basis boundary."""
