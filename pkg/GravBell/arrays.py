"""Franson and Hugged array geometries, their path proper times and pairwise delays.

Each geometry stores its nominal flight length L'_2 + 2H together with the excess
delay-line time of every path with respect to it. Pairwise delays are assembled
from these excess times and from the first-order gravitational shift of each
horizontal segment, so that delays of order 1e-17 s are never the difference of
two flight times of order 1e-4 s.
"""
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
import numpy as np
from astropy import constants as const
from loguru import logger as log
from GravBell.spacetime import coordinate_height, proper_time_shift
from GravBell.utils import NegativeExtent, UnsupportedKind

__all__ = [
    "DEFAULT_COINCIDENCE_WINDOW",
    "PATHS",
    "PATH_COMBINATIONS",
    "ArrayKind",
    "ArrayGeometry",
    "PathDelaySet",
    "ConstraintReport",
    "DistinguishabilityReport",
    "path_proper_times",
    "balance_geometry",
    "rotated_balanced_geometry",
    "raw_geometry",
    "check_constraints",
    "delay_tolerance",
    "classify_post_selection",
]

DEFAULT_COINCIDENCE_WINDOW = 1e-18
ABSOLUTE_DELAY_TOLERANCE = 1e-30

PATHS = ("g1", "g1p", "g2", "g2p")
# (left path, right path); the first two are kept by the post-selection
PATH_COMBINATIONS = (("g1", "g1p"), ("g2", "g2p"), ("g1", "g2p"), ("g2", "g1p"))


class ArrayKind(Enum):
    """Interferometric array types, valued by their command-line names."""

    FRANSON = "franson"
    FRANSON_ROTATED = "franson-rotated"
    HUGGED = "hugged"
    HUGGED_ROTATED = "hugged-rotated"

    @property
    def is_hugged(self):
        return self in (ArrayKind.HUGGED, ArrayKind.HUGGED_ROTATED)

    @property
    def is_rotated(self):
        return self in (ArrayKind.FRANSON_ROTATED, ArrayKind.HUGGED_ROTATED)

    @classmethod
    def from_name(cls, name):
        """Return the kind from its command-line name or from the kind itself."""
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower().replace("_", "-"))
        except ValueError:
            raise ValueError(
                f"unknown array kind {name!r}, choose among {[k.value for k in cls]}"
            ) from None


@dataclass(frozen=True)
class ArrayGeometry:
    """
    Proper geometry of a two-interferometer array.

    Parameters
    ----------
    kind : `ArrayKind`
        The array type.
    L2p : float
        Proper length of the horizontal segment of path gamma'_2 in m.
    H : float
        Proper height of the vertical legs in m.
    offset : float
        Post-selection offset, the target delay between paired detections, in s.
    delay_l1, delay_l1p, delay_l2 : float
        Delay-line excess times of paths gamma_1, gamma'_1 and of the horizontal
        segment of gamma_2, in s, with respect to the nominal flight length
        L'_2 + 2H (L'_2 for gamma_2). Path gamma'_2 carries no excess.
    """

    kind: ArrayKind
    L2p: float
    H: float
    offset: float = 0.0
    delay_l1: float = 0.0
    delay_l1p: float = 0.0
    delay_l2: float = 0.0
    c: float = field(default=const.c.value, repr=False)

    def __post_init__(self):
        if not isinstance(self.kind, ArrayKind):
            raise TypeError("kind must be instance of ArrayKind")
        for name in ("L2p", "H", "offset"):
            if getattr(self, name) < 0:
                raise NegativeExtent(name, getattr(self, name))
        for name in ("L1", "L1p", "L2"):
            if getattr(self, name) < 0:
                raise NegativeExtent(name, getattr(self, name))

    @property
    def nominal_length(self):
        return self.L2p + 2.0 * self.H

    @property
    def L1(self):
        return self.nominal_length + self.c * self.delay_l1

    @property
    def L1p(self):
        return self.nominal_length + self.c * self.delay_l1p

    @property
    def L2(self):
        return self.L2p + self.c * self.delay_l2

    @property
    def area(self):
        return self.L2p * self.H

    @property
    def delta_L(self):
        """Optical path difference L_2 + 2H - L_1 of the left and right interferometers in m."""
        return (
            self.c * (self.delay_l2 - self.delay_l1),
            -self.c * self.delay_l1p,
        )

    def excess_times(self):
        """Delay-line excess time of each path in `PATHS` order, in s."""
        return (self.delay_l1, self.delay_l1p, self.delay_l2, 0.0)


@dataclass(frozen=True)
class PathDelaySet:
    """
    Proper flight times of the four paths and their pairwise delays.

    Times are read by a clock at the detectors. ``excess`` holds each path time
    minus ``nominal``, the flight time of the nominal path, and ``shifts`` holds
    the gravitational part of ``excess``. Pairwise delays follow the convention
    delta_ab = tau_a - tau_b.
    """

    kind: ArrayKind
    nominal: float
    excess: tuple
    shifts: tuple

    def __post_init__(self):
        if len(self.excess) != 4 or len(self.shifts) != 4:
            raise ValueError("excess and shifts must hold one value per path")

    def time(self, path):
        return self.nominal + self.relative(path)

    def relative(self, path):
        return self.excess[PATHS.index(path)]

    def delay(self, a, b):
        return self.relative(a) - self.relative(b)

    def geometric(self, path):
        """Part of the excess time of ``path`` set by the delay lines alone, in s."""
        index = PATHS.index(path)
        return self.excess[index] - self.shifts[index]

    @property
    def tau_g1(self):
        return self.time("g1")

    @property
    def tau_g1p(self):
        return self.time("g1p")

    @property
    def tau_g2(self):
        return self.time("g2")

    @property
    def tau_g2p(self):
        return self.time("g2p")

    @property
    def delta_1_1p(self):
        return self.delay("g1", "g1p")

    @property
    def delta_2_2p(self):
        return self.delay("g2", "g2p")

    @property
    def delta_1_2(self):
        return self.delay("g1", "g2")

    @property
    def delta_1p_2p(self):
        return self.delay("g1p", "g2p")

    @property
    def delta_1_2p(self):
        return self.delay("g1", "g2p")

    @property
    def delta_2_1p(self):
        return self.delay("g2", "g1p")

    def pairwise(self):
        """The six pairwise delays keyed by column name."""
        return {
            "delta_1_1p": self.delta_1_1p,
            "delta_2_2p": self.delta_2_2p,
            "delta_1_2": self.delta_1_2,
            "delta_1p_2p": self.delta_1p_2p,
            "delta_1_2p": self.delta_1_2p,
            "delta_2_1p": self.delta_2_1p,
        }

    @property
    def constraint_residual(self):
        """Residual of (d_11' - d_22') - (d_12 - d_1'2'), zero up to rounding."""
        return (self.delta_1_1p - self.delta_2_2p) - (self.delta_1_2 - self.delta_1p_2p)

    @property
    def tolerance(self):
        return delay_tolerance(self.pairwise().values())


def delay_tolerance(delays):
    """Accepted floating-point error of sums of the given delays, in s."""
    scale = max((abs(d) for d in delays), default=0.0)
    return ABSOLUTE_DELAY_TOLERANCE + 8 * np.finfo(float).eps * scale


def _heights(kind, model, H):
    """Coordinate heights of gamma_2, gamma'_2 and of the detectors."""
    R = model.reference_height
    h = coordinate_height(model, H, R)
    if kind.is_hugged:
        return R, R + 2.0 * h, R + h
    return R + h, R + h, R


def path_proper_times(geometry, model):
    """
    Proper flight times of the four paths read at the detectors.

    Franson arrays have their detectors, gamma_1 and gamma'_1 at the reference
    height and gamma_2, gamma'_2 raised by H. Hugged arrays have source, gamma_1,
    gamma'_1 and detectors at height H, gamma_2 at the reference height and
    gamma'_2 at 2H. Vertical legs contribute 2H/c.

    Parameters
    ----------
    geometry : `ArrayGeometry`
        The array.
    model : `~GravBell.spacetime.GravityModel`
        The gravity model.

    Returns
    -------
    delays : `PathDelaySet`
        Path times and pairwise delays.
    """
    if not isinstance(geometry, ArrayGeometry):
        raise TypeError("geometry must be instance of ArrayGeometry")

    z2, z2p, z_obs = _heights(geometry.kind, model, geometry.H)
    lines = geometry.excess_times()
    shifts = (
        0.0,
        0.0,
        proper_time_shift(model, geometry.L2, z2, z_obs),
        proper_time_shift(model, geometry.L2p, z2p, z_obs),
    )
    excess = tuple(float(s + g) for s, g in zip(lines, shifts))
    delays = PathDelaySet(
        kind=geometry.kind,
        nominal=geometry.nominal_length / model.c,
        excess=excess,
        shifts=tuple(float(g) for g in shifts),
    )
    log.debug(f"{geometry.kind.value} path delays: {delays.pairwise()}")
    return delays


def balance_geometry(kind, L2p, H, delta_tau, model):
    """
    Build the balanced array of independent parameters (L'_2, H, delta_tau).

    The dependent lengths are chosen so that d_11' = d_22' = delta_tau and
    d_12 = d_1'2' = g H L'_2 / c^3.

    Parameters
    ----------
    kind : `ArrayKind`
        Either ``FRANSON`` or ``HUGGED``.
    L2p : float
        Proper length L'_2 in m.
    H : float
        Proper height in m.
    delta_tau : float
        Post-selection offset in s.
    model : `~GravBell.spacetime.GravityModel`
        The gravity model.

    Returns
    -------
    geometry : `ArrayGeometry`
        The balanced array.
    """
    kind = ArrayKind.from_name(kind)
    if kind.is_rotated:
        raise UnsupportedKind(kind, "balance_geometry")
    for name, value in (("L2p", L2p), ("H", H), ("delta_tau", delta_tau)):
        if value < 0:
            raise NegativeExtent(name, value)

    # fractional redshift of the gamma_2 horizontal segment
    eps = model.g * coordinate_height(model, H, model.reference_height) / model.c2
    if kind is ArrayKind.FRANSON:
        delay_l2 = delta_tau / (1.0 - eps)
    else:
        delay_l2 = (delta_tau - 2.0 * eps * L2p / model.c) / (1.0 + eps)

    log.debug(f"Balanced {kind.value} array: L2p={L2p} m, H={H} m, offset={delta_tau} s")
    return ArrayGeometry(
        kind=kind,
        L2p=L2p,
        H=H,
        offset=delta_tau,
        delay_l1=delta_tau,
        delay_l1p=0.0,
        delay_l2=delay_l2,
        c=model.c,
    )


def rotated_balanced_geometry(kind, L2p, H, model):
    """
    Build a rotated balanced array, with L_1 = L'_1 = L'_2 + 2H and L_2 = L'_2.

    The rotated Franson array has no post-selection offset and its cross
    combinations are delayed by +/- g H L'_2 / c^3. The rotated Hugged array has
    d_12 = -d_1'2' = -g H L'_2 / c^3.
    """
    kind = ArrayKind.from_name(kind)
    if not kind.is_rotated:
        raise UnsupportedKind(kind, "rotated_balanced_geometry")
    for name, value in (("L2p", L2p), ("H", H)):
        if value < 0:
            raise NegativeExtent(name, value)
    log.debug(f"Rotated {kind.value} array: L2p={L2p} m, H={H} m")
    return ArrayGeometry(kind=kind, L2p=L2p, H=H, c=model.c)


def raw_geometry(kind, L1, L1p, L2, L2p, H, offset=0.0, model=None):
    """
    Build an array from all of its proper lengths, without enforcing any balance.

    Use `check_constraints` to inspect how far the result is from a balanced array.
    """
    kind = ArrayKind.from_name(kind)
    c = const.c.value if model is None else model.c
    for name, value in (("L1", L1), ("L1p", L1p), ("L2", L2), ("L2p", L2p), ("H", H)):
        if value < 0:
            raise NegativeExtent(name, value)
    nominal = L2p + 2.0 * H
    return ArrayGeometry(
        kind=kind,
        L2p=L2p,
        H=H,
        offset=offset,
        delay_l1=(L1 - nominal) / c,
        delay_l1p=(L1p - nominal) / c,
        delay_l2=(L2 - L2p) / c,
        c=c,
    )


@dataclass(frozen=True)
class ConstraintReport:
    """
    Residuals of the balance relations of an array, in s.

    ``condition`` compares d_11' and d_22' with their targets and ``gravitational``
    compares d_12 and d_1'2' with theirs. The targets are the offset and
    g H L'_2 / c^3 for balanced arrays, (0, 0) and (dg, dg) for rotated Franson
    arrays, and (0, 2 dg) and (-dg, dg) for rotated Hugged arrays.
    """

    constraint: float
    condition: tuple
    gravitational: tuple
    tolerance: float

    @property
    def satisfied(self):
        residuals = (self.constraint,) + tuple(self.condition) + tuple(self.gravitational)
        return all(abs(r) <= self.tolerance for r in residuals)


def check_constraints(geometry, model):
    """Compare the delays of ``geometry`` with those of the balanced array of its kind."""
    delays = path_proper_times(geometry, model)
    dg = model.g * geometry.H * geometry.L2p / model.c**3
    kind = geometry.kind
    if kind is ArrayKind.HUGGED_ROTATED:
        condition_target, grav_target = (0.0, 2.0 * dg), (-dg, dg)
    elif kind is ArrayKind.FRANSON_ROTATED:
        condition_target, grav_target = (0.0, 0.0), (dg, dg)
    else:
        condition_target = (geometry.offset, geometry.offset)
        grav_target = (dg, dg)

    condition = (
        delays.delta_1_1p - condition_target[0],
        delays.delta_2_2p - condition_target[1],
    )
    gravitational = (
        delays.delta_1_2 - grav_target[0],
        delays.delta_1p_2p - grav_target[1],
    )
    return ConstraintReport(
        constraint=delays.constraint_residual,
        condition=condition,
        gravitational=gravitational,
        tolerance=delay_tolerance(list(delays.pairwise().values()) + [dg, geometry.offset]),
    )


@dataclass(frozen=True)
class DistinguishabilityReport:
    """
    Which path combinations can be told apart by their detection times.

    Attributes
    ----------
    window : float
        Coincidence window in s.
    signatures : dict
        Left minus right detection time of each combination of `PATH_COMBINATIONS`.
    distinguishable : dict
        For each unordered pair of combinations, whether their signatures
        differ by more than the window.
    feasible : bool
        Whether the kept combinations can be separated from the cross ones.
    local : bool
        True when feasibility follows from the local post-selection of Hugged
        arrays rather than from the delays.
    """

    window: float
    signatures: dict
    distinguishable: dict
    feasible: bool
    local: bool = False


def classify_post_selection(delays, coincidence_window=DEFAULT_COINCIDENCE_WINDOW):
    """
    Decide whether the maximally entangled post-selection is possible.

    Hugged arrays are reported feasible by kind, since their photons coalesce
    locally whatever the delays.

    Parameters
    ----------
    delays : `PathDelaySet`
        Path delays of the array.
    coincidence_window : float
        Detector timing resolution in s. Default is 1e-18 s.

    Returns
    -------
    report : `DistinguishabilityReport`
        Signatures, pairwise distinguishability and feasibility.
    """
    if coincidence_window < 0:
        raise NegativeExtent("coincidence window", coincidence_window)

    signatures = {pair: delays.delay(*pair) for pair in PATH_COMBINATIONS}
    distinguishable = {
        (a, b): abs(signatures[a] - signatures[b]) > coincidence_window
        for a, b in combinations(PATH_COMBINATIONS, 2)
    }
    kept, cross = PATH_COMBINATIONS[:2], PATH_COMBINATIONS[2:]
    from_delays = not distinguishable[kept] and all(
        distinguishable[(k, x)] for k in kept for x in cross
    )
    local = delays.kind.is_hugged
    return DistinguishabilityReport(
        window=coincidence_window,
        signatures=signatures,
        distinguishable=distinguishable,
        feasible=from_delays or local,
        local=local and not from_delays,
    )
