__all__ = [
    "GravBellError",
    "NumericalFailure",
    "WeakFieldViolation",
    "NegativeExtent",
    "UnsupportedKind",
    "BandwidthExceedsCarrier",
    "NonpositiveWavelength",
    "InvalidSpectrum",
    "QuadratureNotConverged",
    "IndistinguishabilityViolated",
    "GridTooCoarse",
    "ZeroGravity",
    "UnknownFigure",
]


class GravBellError(Exception):
    """Base class of every error raised by GravBell."""

    def __init__(self, message):
        self.message = message
        super().__init__(message)


class NumericalFailure(GravBellError):
    """Marker base for failures of a numerical procedure rather than of the inputs."""


class WeakFieldViolation(GravBellError):
    """
    Exception raised when a height lies outside the weak-field regime.

    Parameters
    ----------
    height : float
        Coordinate height in m.
    ratio : float
        Value of g|z - R|/c^2 at that height.
    limit : float
        Largest accepted ratio.
    """

    def __init__(self, height, ratio, limit):
        self.height = height
        self.ratio = ratio
        self.limit = limit
        super().__init__(
            f"height {height} m gives |phi|/c^2 = {ratio:.3e}, above the weak-field limit {limit:.0e} !"
        )


class NegativeExtent(GravBellError):
    """
    Exception raised when a length, height or duration is negative.

    Parameters
    ----------
    name : str
        Name of the quantity.
    value : float
        The offending value.
    """

    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"{name} must be non-negative, given {value}")


class UnsupportedKind(GravBellError):
    """
    Exception raised when an array kind is passed to a constructor that cannot build it.

    Parameters
    ----------
    kind : `~GravBell.arrays.ArrayKind`
        The rejected kind.
    constructor : str
        Name of the constructor.
    """

    def __init__(self, kind, constructor):
        self.kind = kind
        self.constructor = constructor
        super().__init__(f"{constructor} does not build arrays of kind {kind}")


class BandwidthExceedsCarrier(GravBellError):
    """
    Exception raised when a wavelength bandwidth reaches twice the central wavelength.

    Parameters
    ----------
    lambda0 : float
        Central wavelength in m.
    delta_lambda : float
        Bandwidth in m.
    """

    def __init__(self, lambda0, delta_lambda):
        self.lambda0 = lambda0
        self.delta_lambda = delta_lambda
        super().__init__(
            f"bandwidth {delta_lambda} m must be positive and smaller than 2 x {lambda0} m"
        )


class NonpositiveWavelength(GravBellError):
    """
    Exception raised when a wavelength is zero or negative.

    Parameters
    ----------
    wavelength : float
        The offending wavelength in m.
    """

    def __init__(self, wavelength):
        self.wavelength = wavelength
        super().__init__(f"wavelength must be positive, given {wavelength} m")


class InvalidSpectrum(GravBellError):
    """Exception raised when a spectrum violates its invariants."""


class QuadratureNotConverged(NumericalFailure):
    """
    Exception raised when the order doubling of the quadrature stalls.

    Parameters
    ----------
    order : int
        Last order per axis that was tried.
    difference : float
        Difference between the two last refinements.
    tolerance : float
        Requested tolerance.
    """

    def __init__(self, order, difference, tolerance):
        self.order = order
        self.difference = difference
        self.tolerance = tolerance
        super().__init__(
            f"quadrature not converged at order {order}: "
            f"refinement changed the result by {difference:.3e} > {tolerance:.0e}"
        )


class IndistinguishabilityViolated(NumericalFailure):
    """
    Exception raised when path times do not satisfy the indistinguishability condition.

    Parameters
    ----------
    offset : float
        Requested post-selection offset in s.
    residuals : tuple of float
        Deviations of the two branch delays from ``offset`` in s.
    tolerance : float
        Accepted deviation in s.
    """

    def __init__(self, offset, residuals, tolerance):
        self.offset = offset
        self.residuals = residuals
        self.tolerance = tolerance
        super().__init__(
            f"branch delays deviate from the offset {offset} s by {residuals} "
            f"(tolerance {tolerance:.1e} s)"
        )


class GridTooCoarse(NumericalFailure):
    """
    Exception raised when a frequency grid does not resolve the spectral width.

    Parameters
    ----------
    spacing : float
        Grid spacing in rad/s.
    limit : float
        Largest accepted spacing in rad/s.
    """

    def __init__(self, spacing, limit):
        self.spacing = spacing
        self.limit = limit
        super().__init__(f"grid spacing {spacing:.4e} rad/s exceeds {limit:.4e} rad/s")


class ZeroGravity(GravBellError):
    """Exception raised when a quantity diverges because g is zero."""

    def __init__(self, quantity="critical area"):
        self.quantity = quantity
        super().__init__(f"no finite {quantity} for g = 0")


class UnknownFigure(GravBellError):
    """
    Exception raised when a figure name is not recognized.

    Parameters
    ----------
    name : str
        Requested figure.
    available : list of str
        Figures that can be produced.
    """

    def __init__(self, name, available):
        self.name = name
        self.available = list(available)
        super().__init__(f"{name} is not a known figure, choose among {self.available}")
