"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Raw data has the wrong triangular shape (distinct from an invalid pattern)."""


class ParameterError(ValueError):
    """A Harish-Chandra parameter or character violates its preconditions."""


class PoleError(ValueError):
    """log-gamma evaluated at a non-positive integer."""


class PoleCollisionError(ValueError):
    """Residue expansion refused: colliding leading exponents (alpha_1 == alpha_2)."""


class InternalConsistencyError(RuntimeError):
    """An identity the theory guarantees failed; indicates a bug or an
    out-of-hypothesis input."""


class UnsupportedLogTermError(NotImplementedError):
    """Operation does not support log/order-derivative terms."""
