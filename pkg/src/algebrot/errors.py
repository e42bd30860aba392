"""Exception types shared across the package."""


class AlgebrotError(Exception):
    """Base class for all errors raised by this package."""


class DimensionTooSmall(AlgebrotError):
    """Algebras must have dimension at least 2."""


class DimensionTooLarge(AlgebrotError):
    """Dense structure-constant storage is capped at dimension 64."""


class NonFiniteEntry(AlgebrotError):
    """A structure constant or coordinate is NaN or infinite."""


class DimensionMismatch(AlgebrotError):
    """An element's length does not match the algebra's dimension."""


class LevelTooLarge(AlgebrotError):
    """Cayley-Dickson doubling is capped at level 6 (dimension 64)."""


class UnsupportedFamily(AlgebrotError):
    """The requested operation is not defined for this table family."""


class AlgebraFormatError(AlgebrotError):
    """An algebra description file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SquareInequalityUnavailable(AlgebrotError):
    """No positive square-inequality floor exists, so escape cannot be certified."""


class OutOfRange(AlgebrotError):
    """A pixel index lies outside the raster."""


class RasterTooLarge(AlgebrotError):
    """width * height exceeds the raster resource guard."""


class DegenerateSlice(AlgebrotError):
    """Slice axes are (numerically) linearly dependent."""


class OrbitOverflow(AlgebrotError):
    """Orbit coordinates became non-finite; carries the truncated trace."""

    def __init__(self, step: int, trace: list):
        self.step = step
        self.trace = trace
        super().__init__(f"orbit coordinates became non-finite at step {step}")
