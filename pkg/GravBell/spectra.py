"""Frequency spectra of the twin-photon source."""
from dataclasses import dataclass, field
from functools import lru_cache
import numpy as np
from astropy import constants as const
from astropy.table import Table
from gammapy.utils.scripts import make_path
from loguru import logger as log
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import RectBivariateSpline
from scipy.special import erf, erfc
from GravBell.utils import (
    BandwidthExceedsCarrier,
    GridTooCoarse,
    InvalidSpectrum,
    NonpositiveWavelength,
)

__all__ = [
    "TRUNCATION_GUARD",
    "WINDOW_SIGMAS",
    "DEFAULT_GRID_POINTS",
    "sigma_from_bandwidth",
    "omega_from_wavelength",
    "gauss_legendre",
    "GaussianSpectrum",
    "JointSpectrum",
    "ProductSpectrum",
    "DeltaSpectrum",
    "TabulatedSpectrum",
    "joint_density",
    "SpectralGrid",
]

TRUNCATION_GUARD = 0.9
WINDOW_SIGMAS = 6.0
DEFAULT_GRID_POINTS = 241
GRID_RESOLUTION = 20.0
CELL_ORDER_DIVISOR = 16


def _speed_of_light(model):
    return const.c.value if model is None else model.c


def sigma_from_bandwidth(lambda0, delta_lambda, model=None):
    """
    Spectral width of a wave packet of central wavelength ``lambda0`` and bandwidth ``delta_lambda``.

    sigma = 2 pi c (1/lambda_min - 1/lambda_max) with lambda_min, lambda_max = lambda0 -/+ delta_lambda/2.

    Parameters
    ----------
    lambda0 : float
        Central wavelength in m.
    delta_lambda : float
        Wavelength bandwidth in m.
    model : `~GravBell.spacetime.GravityModel`, optional
        Model providing c. Default is the exact SI value.

    Returns
    -------
    sigma : float
        Width in rad/s.
    """
    if lambda0 <= 0:
        raise NonpositiveWavelength(lambda0)
    if not 0 < delta_lambda < 2.0 * lambda0:
        raise BandwidthExceedsCarrier(lambda0, delta_lambda)
    lambda_min = lambda0 - delta_lambda / 2.0
    lambda_max = lambda0 + delta_lambda / 2.0
    return 2.0 * np.pi * _speed_of_light(model) * (1.0 / lambda_min - 1.0 / lambda_max)


def omega_from_wavelength(wavelength, model=None):
    """Angular frequency 2 pi c / lambda in rad/s."""
    if np.any(np.asarray(wavelength) <= 0):
        raise NonpositiveWavelength(wavelength)
    return 2.0 * np.pi * _speed_of_light(model) / np.asarray(wavelength, dtype=float)


@lru_cache(maxsize=16)
def gauss_legendre(order):
    """Gauss-Legendre nodes and weights on [-1, 1], cached per order."""
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _cell_rule(edges, order):
    """Gauss-Legendre nodes and weights of ``order`` points on every cell between ``edges``."""
    nodes, weights = gauss_legendre(order)
    half = 0.5 * np.diff(edges)[:, None]
    middle = 0.5 * (edges[1:] + edges[:-1])[:, None]
    return (middle + half * nodes).ravel(), (half * weights).ravel()


def _trapezoid_widths(nodes):
    # a single node carries the whole mass
    if nodes.size == 1:
        return np.ones(1)
    steps = 0.5 * np.diff(nodes)
    widths = np.zeros(nodes.size)
    widths[:-1] += steps
    widths[1:] += steps
    return widths


@dataclass(frozen=True)
class GaussianSpectrum:
    """
    Gaussian spectrum of one photon.

    The amplitude is f(w) proportional to exp(-(w - omega_bar)^2 / (2 sigma^2)), so
    that |f|^2 is a Gaussian density of standard deviation sigma/sqrt(2). The
    density is truncated at w = 0 and renormalized.

    Parameters
    ----------
    omega_bar : float
        Central angular frequency in rad/s.
    sigma : float
        Width in rad/s.
    lambda0, delta_lambda : float, optional
        Wavelength parameters the spectrum was built from, in m.
    """

    omega_bar: float
    sigma: float
    lambda0: float = field(default=None, compare=False)
    delta_lambda: float = field(default=None, compare=False)

    def __post_init__(self):
        if not self.omega_bar > 0:
            raise InvalidSpectrum(f"omega_bar must be positive, given {self.omega_bar}")
        if not self.sigma > 0:
            raise InvalidSpectrum(f"sigma must be positive, given {self.sigma}")

    @classmethod
    def from_bandwidth(cls, lambda0, delta_lambda, model=None):
        """Spectrum of central wavelength ``lambda0`` and bandwidth ``delta_lambda`` (m)."""
        return cls(
            omega_bar=float(omega_from_wavelength(lambda0, model)),
            sigma=sigma_from_bandwidth(lambda0, delta_lambda, model),
            lambda0=lambda0,
            delta_lambda=delta_lambda,
        )

    @property
    def truncated_mass(self):
        return 0.5 * erfc(self.omega_bar / self.sigma)

    @property
    def normalization(self):
        return 0.5 * (1.0 + erf(self.omega_bar / self.sigma))

    def check_pointwise(self):
        """Raise `~GravBell.utils.InvalidSpectrum` if the truncation at w = 0 is not negligible."""
        if self.sigma > TRUNCATION_GUARD * self.omega_bar:
            raise InvalidSpectrum(
                f"sigma {self.sigma:.4e} rad/s exceeds {TRUNCATION_GUARD} x omega_bar "
                f"{self.omega_bar:.4e} rad/s, the density cannot be evaluated pointwise"
            )

    def support(self, n_sigma=WINDOW_SIGMAS):
        """Integration window omega_bar +/- n_sigma sigma clipped at 0."""
        return (
            max(0.0, self.omega_bar - n_sigma * self.sigma),
            self.omega_bar + n_sigma * self.sigma,
        )

    def density(self, omega):
        """Truncated and renormalized |f(omega)|^2 in s."""
        self.check_pointwise()
        omega = np.asarray(omega, dtype=float)
        value = np.exp(-(((omega - self.omega_bar) / self.sigma) ** 2)) / (
            self.sigma * np.sqrt(np.pi) * self.normalization
        )
        return np.where(omega >= 0, value, 0.0)

    def amplitude(self, omega):
        return np.sqrt(self.density(omega))


class JointSpectrum:
    """
    Base class of joint two-photon spectra.

    Subclasses provide the pointwise density |f(w1, w2)|^2, an integration
    window and their mean frequencies.
    """

    tag = ""

    def density(self, omega1, omega2):
        raise NotImplementedError

    def support(self):
        raise NotImplementedError

    @property
    def mean_frequencies(self):
        raise NotImplementedError

    def integrate(self, func, order):
        """
        Tensor Gauss-Legendre estimate of the integral of func(w1, w2) |f|^2 over the support.

        Parameters
        ----------
        func : callable
            Vectorized function of (omega1, omega2) arrays.
        order : int
            Number of nodes per axis.
        """
        (a1, b1), (a2, b2) = self.support()
        nodes, weights = gauss_legendre(order)
        w1 = 0.5 * (b1 - a1) * nodes + 0.5 * (b1 + a1)
        w2 = 0.5 * (b2 - a2) * nodes + 0.5 * (b2 + a2)
        measure = np.outer(weights, weights) * 0.25 * (b1 - a1) * (b2 - a2)
        o1, o2 = np.meshgrid(w1, w2, indexing="ij")
        return np.sum(measure * self.density(o1, o2) * func(o1, o2))


class ProductSpectrum(JointSpectrum):
    """
    Uncorrelated joint spectrum |f1(w1)|^2 |f2(w2)|^2.

    Parameters
    ----------
    left : `GaussianSpectrum`
        Spectrum of the photon sent to the left interferometer.
    right : `GaussianSpectrum`
        Spectrum of the photon sent to the right interferometer.
    """

    tag = "product"

    def __init__(self, left, right):
        if not isinstance(left, GaussianSpectrum) or not isinstance(right, GaussianSpectrum):
            raise TypeError("left and right must be instances of GaussianSpectrum")
        self.left = left
        self.right = right

    def __repr__(self):
        return f"{self.__class__.__name__}(left={self.left!r}, right={self.right!r})"

    def density(self, omega1, omega2):
        return self.left.density(omega1) * self.right.density(omega2)

    def support(self):
        return self.left.support(), self.right.support()

    @property
    def mean_frequencies(self):
        return self.left.omega_bar, self.right.omega_bar

    @property
    def sigmas(self):
        return self.left.sigma, self.right.sigma


class DeltaSpectrum(JointSpectrum):
    """Monochromatic pair of angular frequencies ``omega1`` and ``omega2`` (rad/s)."""

    tag = "delta"

    def __init__(self, omega1, omega2):
        if not (omega1 > 0 and omega2 > 0):
            raise InvalidSpectrum(f"frequencies must be positive, given {omega1}, {omega2}")
        self.omega1 = float(omega1)
        self.omega2 = float(omega2)

    def __repr__(self):
        return f"{self.__class__.__name__}(omega1={self.omega1}, omega2={self.omega2})"

    def density(self, omega1, omega2):
        """Point mass: infinite at (omega1, omega2) and zero elsewhere."""
        at_peak = (np.asarray(omega1) == self.omega1) & (np.asarray(omega2) == self.omega2)
        return np.where(at_peak, np.inf, 0.0)

    def support(self):
        return (self.omega1, self.omega1), (self.omega2, self.omega2)

    @property
    def mean_frequencies(self):
        return self.omega1, self.omega2

    def integrate(self, func, order=None):
        return func(np.asarray(self.omega1), np.asarray(self.omega2))


class TabulatedSpectrum(JointSpectrum):
    """
    Joint density sampled on a rectangular grid and interpolated by bicubic splines.

    Parameters
    ----------
    omega1 : `~numpy.ndarray`
        Strictly increasing nodes of the first axis in rad/s.
    omega2 : `~numpy.ndarray`
        Strictly increasing nodes of the second axis in rad/s.
    values : `~numpy.ndarray`
        Density of shape (len(omega1), len(omega2)) in s^2.
    normalize : bool
        Rescale ``values`` to unit integral instead of requiring it. Default is False.
    """

    tag = "tabulated"
    normalization_tolerance = 1e-6

    def __init__(self, omega1, omega2, values, normalize=False):
        self.omega1 = np.asarray(omega1, dtype=float)
        self.omega2 = np.asarray(omega2, dtype=float)
        values = np.asarray(values, dtype=float)

        if values.shape != (self.omega1.size, self.omega2.size):
            raise InvalidSpectrum(
                f"density of shape {values.shape} does not match the "
                f"{self.omega1.size} x {self.omega2.size} grid"
            )
        if self.omega1.size < 2 or self.omega2.size < 2:
            raise InvalidSpectrum("a tabulated spectrum needs at least two nodes per axis")
        if np.any(np.diff(self.omega1) <= 0) or np.any(np.diff(self.omega2) <= 0):
            raise InvalidSpectrum("grid nodes must be strictly increasing")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise InvalidSpectrum("density must be finite and non-negative")

        self._spline = self._make_spline(values)
        total = self._spline.integral(
            self.omega1[0], self.omega1[-1], self.omega2[0], self.omega2[-1]
        )
        if normalize:
            values = values / total
            self._spline = self._make_spline(values)
        elif abs(total - 1.0) > self.normalization_tolerance:
            raise InvalidSpectrum(f"density integrates to {total:.9f}, expected 1")
        self.values = values

    def _make_spline(self, values):
        kx = min(3, self.omega1.size - 1)
        ky = min(3, self.omega2.size - 1)
        return RectBivariateSpline(self.omega1, self.omega2, values, kx=kx, ky=ky)

    def __repr__(self):
        return (
            f"{self.__class__.__name__}({self.omega1.size} x {self.omega2.size} nodes, "
            f"omega1 in [{self.omega1[0]:.4e}, {self.omega1[-1]:.4e}], "
            f"omega2 in [{self.omega2[0]:.4e}, {self.omega2[-1]:.4e}])"
        )

    @classmethod
    def from_function(cls, func, omega1, omega2):
        """Tabulate ``func(omega1, omega2)`` on the grid and normalize it."""
        o1, o2 = np.meshgrid(omega1, omega2, indexing="ij")
        return cls(omega1, omega2, func(o1, o2), normalize=True)

    @classmethod
    def from_spectrum(cls, spectrum, points=DEFAULT_GRID_POINTS):
        """Tabulate a `ProductSpectrum` over its integration window."""
        (a1, b1), (a2, b2) = spectrum.support()
        return cls.from_function(
            spectrum.density, np.linspace(a1, b1, points), np.linspace(a2, b2, points)
        )

    @classmethod
    def read(cls, filename, normalize=False):
        """
        Read a table with header ``omega1 omega2 density`` and one whitespace-separated row per node.

        Parameters
        ----------
        filename : str or `~pathlib.Path`
            Table file, SI units.
        normalize : bool
            Rescale the density to unit integral. Default is False.
        """
        path = make_path(filename)
        table = Table.read(path, format="ascii.basic")
        missing = {"omega1", "omega2", "density"} - set(table.colnames)
        if missing:
            raise InvalidSpectrum(f"{path} lacks the columns {sorted(missing)}")

        omega1, i1 = np.unique(np.asarray(table["omega1"], dtype=float), return_inverse=True)
        omega2, i2 = np.unique(np.asarray(table["omega2"], dtype=float), return_inverse=True)
        if len(table) != omega1.size * omega2.size:
            raise InvalidSpectrum(f"{path} does not sample a full rectangular grid")
        values = np.full((omega1.size, omega2.size), np.nan)
        values[i1, i2] = np.asarray(table["density"], dtype=float)
        if np.any(np.isnan(values)):
            raise InvalidSpectrum(f"{path} holds duplicated grid nodes")
        log.debug(f"Read {omega1.size} x {omega2.size} tabulated spectrum from {path}")
        return cls(omega1, omega2, values, normalize=normalize)

    def write(self, filename, overwrite=False):
        """Write the nodes in the format read by `TabulatedSpectrum.read`."""
        o1, o2 = np.meshgrid(self.omega1, self.omega2, indexing="ij")
        table = Table(
            [o1.ravel(), o2.ravel(), self.values.ravel()],
            names=("omega1", "omega2", "density"),
        )
        for name in table.colnames:
            table[name].format = ".17g"
        table.write(make_path(filename), format="ascii.basic", overwrite=overwrite)

    def density(self, omega1, omega2):
        """Interpolated density, zero outside the grid."""
        omega1 = np.asarray(omega1, dtype=float)
        omega2 = np.asarray(omega2, dtype=float)
        inside = (
            (omega1 >= self.omega1[0])
            & (omega1 <= self.omega1[-1])
            & (omega2 >= self.omega2[0])
            & (omega2 <= self.omega2[-1])
        )
        value = self._spline(omega1, omega2, grid=False)
        return np.where(inside, np.clip(value, 0.0, None), 0.0)

    def support(self):
        return (self.omega1[0], self.omega1[-1]), (self.omega2[0], self.omega2[-1])

    def integrate(self, func, order):
        """
        Gauss-Legendre estimate on every cell of the table.

        The interpolant is only piecewise smooth, so each cell between
        consecutive nodes gets its own rule of ``order // 16`` points per axis,
        at least one.
        """
        cell_order = max(1, order // CELL_ORDER_DIVISOR)
        w1, m1 = _cell_rule(self.omega1, cell_order)
        w2, m2 = _cell_rule(self.omega2, cell_order)
        density = np.clip(self._spline(w1, w2), 0.0, None)
        o1, o2 = np.meshgrid(w1, w2, indexing="ij")
        return np.sum(np.outer(m1, m2) * density * func(o1, o2))

    @property
    def mean_frequencies(self):
        total = self.integrate(lambda o1, o2: np.ones_like(o1), 64)
        return (
            self.integrate(lambda o1, o2: o1, 64) / total,
            self.integrate(lambda o1, o2: o2, 64) / total,
        )


def joint_density(spectrum, omega1, omega2):
    """Pointwise joint density |f(omega1, omega2)|^2 of ``spectrum`` in s^2."""
    if not isinstance(spectrum, JointSpectrum):
        raise TypeError("spectrum must be instance of JointSpectrum")
    return spectrum.density(omega1, omega2)


@dataclass(frozen=True)
class SpectralGrid:
    """
    Rectangular frequency grid with discrete spectral weights summing to one.

    Attributes
    ----------
    omega1, omega2 : `~numpy.ndarray`
        Grid nodes in rad/s.
    weights : `~numpy.ndarray`
        Density times trapezoid cell measure, normalized by its sum.
    sigmas : tuple of float or None
        Widths the grid must resolve, None for monochromatic or tabulated grids.
    """

    omega1: np.ndarray
    omega2: np.ndarray
    weights: np.ndarray
    sigmas: tuple = None

    @classmethod
    def from_spectrum(cls, spectrum, points=DEFAULT_GRID_POINTS, n_sigma=WINDOW_SIGMAS):
        """
        Discretize a joint spectrum.

        `ProductSpectrum` grids span omega_bar +/- n_sigma sigma per axis with
        ``points`` nodes, `TabulatedSpectrum` grids reuse the table nodes and
        `DeltaSpectrum` grids hold a single node.
        """
        if isinstance(spectrum, DeltaSpectrum):
            return cls.monochromatic(spectrum.omega1, spectrum.omega2)
        if isinstance(spectrum, TabulatedSpectrum):
            return cls._normalized(
                spectrum.omega1,
                spectrum.omega2,
                spectrum.density(*np.meshgrid(spectrum.omega1, spectrum.omega2, indexing="ij")),
            )
        if not isinstance(spectrum, ProductSpectrum):
            raise TypeError("spectrum must be instance of JointSpectrum")

        axes = [
            np.linspace(*marginal.support(n_sigma), points)
            for marginal in (spectrum.left, spectrum.right)
        ]
        o1, o2 = np.meshgrid(*axes, indexing="ij")
        grid = cls._normalized(axes[0], axes[1], spectrum.density(o1, o2), spectrum.sigmas)
        grid.check_resolution()
        log.debug(f"Spectral grid of {points} x {points} nodes over +/- {n_sigma} sigma")
        return grid

    @classmethod
    def monochromatic(cls, omega1, omega2):
        """Single-node grid at (omega1, omega2)."""
        return cls(np.array([float(omega1)]), np.array([float(omega2)]), np.ones((1, 1)))

    @classmethod
    def _normalized(cls, omega1, omega2, density, sigmas=None):
        omega1, omega2 = np.asarray(omega1, dtype=float), np.asarray(omega2, dtype=float)
        mass = density * np.outer(_trapezoid_widths(omega1), _trapezoid_widths(omega2))
        total = np.sum(mass)
        if not total > 0:
            raise InvalidSpectrum("spectral weights sum to zero on the grid")
        return cls(omega1, omega2, mass / total, sigmas)

    @property
    def spacing(self):
        steps = [np.max(np.diff(axis)) for axis in (self.omega1, self.omega2) if axis.size > 1]
        return max(steps, default=0.0)

    def check_resolution(self):
        """Raise `~GravBell.utils.GridTooCoarse` if an axis is coarser than its sigma/20."""
        if self.sigmas is None:
            return
        for axis, sigma in zip((self.omega1, self.omega2), self.sigmas):
            limit = sigma / GRID_RESOLUTION
            step = np.max(np.diff(axis)) if axis.size > 1 else 0.0
            if step > limit * (1.0 + 1e-9):
                raise GridTooCoarse(spacing=step, limit=limit)
