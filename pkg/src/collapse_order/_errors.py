"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class ParameterError(ValueError):
    """A numerical control parameter is out of its allowed range."""


class GridRangeError(ValueError):
    """A grid or plotting range does not cover the required interval."""


class UnsupportedStateError(TypeError):
    """An operation was given a state whose branch structure it cannot handle."""


class StateError(RuntimeError):
    """A state is not in the condition an operation requires (e.g. unnormalized)."""


class DomainWarning(UserWarning):
    """Input is outside the physically meaningful range but the result is still built."""
