"""Exception hierarchy shared by all bottlab modules."""


class BottlabError(Exception):
    """Base class for all errors raised by bottlab."""


class InvalidMatrix(BottlabError):
    """Matrix entries are non-finite or violate a structural invariant."""


class DimensionError(BottlabError):
    """Operands have incompatible dimensions."""


class NumericalError(BottlabError):
    """A numerical routine failed to reach its accuracy contract."""


class GapClosedError(BottlabError):
    """Spectrum approaches 1/2; the spectral projection is not certified."""


class NonIntegerIndexError(BottlabError):
    """Raw index trace is too far from an integer; numerics broke down."""


class NotAProjection(BottlabError):
    """Input matrix is not a projection within tolerance."""


class WindowError(BottlabError):
    """Fourier truncation window is too small for the requested operation."""


class StabilityError(BottlabError):
    """Recomputation at a larger window changed a certified integer."""


class SampleError(BottlabError):
    """Loop sampling produced a near-singular or inconsistent value."""


class ModelInconsistencyError(BottlabError):
    """Two constructions that must agree exactly have drifted apart."""
