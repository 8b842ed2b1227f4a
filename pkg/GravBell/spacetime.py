"""First-order weak-field metric primitives.

The metric is the Schwarzschild metric in isotropic coordinates, truncated to first
order in phi/c^2 with the Newtonian potential phi(z) = g (z - R). Every function
returns the first-order value only.
"""
from dataclasses import dataclass
import numpy as np
from astropy import constants as const
from GravBell.utils import NegativeExtent, WeakFieldViolation

__all__ = [
    "WEAK_FIELD_LIMIT",
    "GravityModel",
    "check_weak_field",
    "potential",
    "proper_length_horizontal",
    "proper_height",
    "coordinate_height",
    "coord_time_horizontal",
    "coord_time_vertical",
    "proper_time_at_observer",
    "proper_time_shift",
    "phase_shift",
]

WEAK_FIELD_LIMIT = 1e-3
STANDARD_SURFACE_GRAVITY = 9.81


@dataclass(frozen=True)
class GravityModel:
    """
    Physical constants and potential convention of a uniform weak field.

    Parameters
    ----------
    g : float
        Surface gravitational acceleration in m/s^2. Default is 9.81.
    c : float
        Speed of light in m/s. Default is the exact SI value.
    reference_height : float
        Coordinate height R in m at which the potential vanishes. Default is 0.
    """

    g: float = STANDARD_SURFACE_GRAVITY
    c: float = const.c.value
    reference_height: float = 0.0

    def __post_init__(self):
        if not self.g >= 0:
            raise ValueError(f"g must be non-negative, given {self.g}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, given {self.c}")

    @classmethod
    def standard(cls, **kwargs):
        """Model with the conventional standard gravity g0 of `astropy.constants`."""
        return cls(g=const.g0.value, **kwargs)

    @classmethod
    def flat(cls, **kwargs):
        """Model without gravity, every quantity reduces to its flat-space value."""
        return cls(g=0.0, **kwargs)

    @property
    def c2(self):
        return self.c**2

    def gravitational_delay(self, area):
        """Gravitational time delay g A / c^3 of a balanced array of proper area ``area`` (m^2)."""
        return self.g * area / self.c**3


def check_weak_field(model, z):
    """
    Raise `~GravBell.utils.WeakFieldViolation` if g|z - R|/c^2 exceeds the weak-field limit.

    Parameters
    ----------
    model : `GravityModel`
        The gravity model.
    z : float or `~numpy.ndarray`
        Coordinate height(s) in m.
    """
    ratio = model.g * np.abs(np.asarray(z, dtype=float) - model.reference_height) / model.c2
    if np.any(ratio > WEAK_FIELD_LIMIT):
        worst = int(np.argmax(ratio)) if np.ndim(ratio) else 0
        height = np.ravel(z)[worst] if np.ndim(z) else z
        raise WeakFieldViolation(
            height=height, ratio=float(np.max(ratio)), limit=WEAK_FIELD_LIMIT
        )


def _non_negative(name, value):
    if np.any(np.asarray(value) < 0):
        raise NegativeExtent(name, value)


def potential(model, z):
    """Newtonian potential phi(z) = g (z - R) in m^2/s^2."""
    check_weak_field(model, z)
    return model.g * (np.asarray(z, dtype=float) - model.reference_height)


def proper_length_horizontal(model, coordinate_extent, z):
    """
    Proper length of a horizontal segment.

    Parameters
    ----------
    model : `GravityModel`
        The gravity model.
    coordinate_extent : float
        Coordinate extent in m.
    z : float
        Coordinate height of the segment in m.

    Returns
    -------
    length : float
        (1 - phi(z)/c^2) dx in m.
    """
    _non_negative("coordinate extent", coordinate_extent)
    return (1.0 - potential(model, z) / model.c2) * coordinate_extent


def proper_height(model, coordinate_height, z_base):
    """Proper height H = (1 - phi(z_base)/c^2) h of a vertical segment starting at ``z_base``."""
    _non_negative("coordinate height", coordinate_height)
    check_weak_field(model, np.asarray(z_base) + coordinate_height)
    return (1.0 - potential(model, z_base) / model.c2) * coordinate_height


def coordinate_height(model, proper_height, z_base):
    """Inverse of `proper_height`: h = H (1 + phi(z_base)/c^2)."""
    _non_negative("proper height", proper_height)
    return (1.0 + potential(model, z_base) / model.c2) * proper_height


def coord_time_horizontal(model, proper_length, z):
    """Coordinate time (L/c)(1 - phi(z)/c^2) of a null horizontal segment of proper length ``L``."""
    _non_negative("proper length", proper_length)
    return proper_length / model.c * (1.0 - potential(model, z) / model.c2)


def coord_time_vertical(model, coordinate_height, z_base):
    """
    Coordinate time of a vertical null segment, to first order in its height.

    Parameters
    ----------
    model : `GravityModel`
        The gravity model.
    coordinate_height : float
        Coordinate height h of the segment in m.
    z_base : float
        Coordinate height of the lower end in m.

    Returns
    -------
    time : float
        (h/c)(1 - 2 phi(z_base)/c^2) in s.
    """
    _non_negative("coordinate height", coordinate_height)
    check_weak_field(model, np.asarray(z_base) + coordinate_height)
    return coordinate_height / model.c * (1.0 - 2.0 * potential(model, z_base) / model.c2)


def proper_time_at_observer(model, coordinate_time, z_observer):
    """Proper time (1 + phi(z_obs)/c^2) dt read by a static clock at ``z_observer``."""
    return (1.0 + potential(model, z_observer) / model.c2) * coordinate_time


def proper_time_shift(model, proper_length, z, z_observer):
    """
    First-order excess of the proper flight time of a horizontal segment over L/c.

    The flight time seen by a clock at ``z_observer`` is
    L/c + (L/c)(phi(z_obs) - phi(z))/c^2. Only the second term is returned, so
    that differences between paths never subtract two large flight times.

    Parameters
    ----------
    model : `GravityModel`
        The gravity model.
    proper_length : float
        Proper length of the segment in m.
    z : float
        Coordinate height of the segment in m.
    z_observer : float
        Coordinate height of the clock in m.

    Returns
    -------
    shift : float
        Proper time excess in s.
    """
    _non_negative("proper length", proper_length)
    dphi = potential(model, z_observer) - potential(model, z)
    return proper_length / model.c * dphi / model.c2


def phase_shift(omega, delta_tau):
    """Phase omega * delta_tau (rad) imprinted by a delay on a photon of angular frequency omega."""
    return np.multiply(omega, delta_tau)
