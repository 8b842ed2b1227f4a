"""Two-photon detection probabilities of Franson and Hugged arrays."""
from dataclasses import dataclass
import numpy as np
from loguru import logger as log
from GravBell.arrays import PATH_COMBINATIONS, PathDelaySet, delay_tolerance
from GravBell.spacetime import phase_shift
from GravBell.spectra import DeltaSpectrum, GaussianSpectrum, JointSpectrum, SpectralGrid
from GravBell.utils import IndistinguishabilityViolated, QuadratureNotConverged

__all__ = [
    "QUADRATURE_TOLERANCE",
    "PhasePair",
    "DetectionProbabilities",
    "visibility",
    "probability_gaussian",
    "spectral_average",
    "probability_quadrature",
    "probability_amplitude_oracle",
    "probability_hugged_balanced",
    "visibility_regime",
]

QUADRATURE_TOLERANCE = 1e-9
QUADRATURE_START_ORDER = 16
QUADRATURE_MAX_ORDER = 1024
COHERENT_LIMIT = 1e-2
DEPHASED_LIMIT = 1e2

# output-port coefficients (+, -) of the short and long arms
_PORTS = {
    "short": np.array([1.0, 1.0]) / np.sqrt(2.0),
    "long": np.array([1.0, -1.0]) / np.sqrt(2.0),
}
_ARMS = {"g1": "short", "g1p": "short", "g2": "long", "g2p": "long"}


@dataclass(frozen=True)
class PhasePair:
    """Local phases ``alpha`` and ``beta`` (rad) of the left and right interferometers."""

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError(f"phases must be finite, given ({self.alpha}, {self.beta})")

    @property
    def total(self):
        return self.alpha + self.beta

    def reduced(self):
        return PhasePair(self.alpha % (2 * np.pi), self.beta % (2 * np.pi))


@dataclass(frozen=True)
class DetectionProbabilities:
    """Joint detection probabilities of the outcomes (+,+), (+,-), (-,+) and (-,-)."""

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    @classmethod
    def from_correlation(cls, correlation):
        """Probabilities 1/4 (1 -/+ E) of an ensemble whose correlation is ``correlation``."""
        same = 0.25 * (1.0 + correlation)
        different = 0.25 * (1.0 - correlation)
        return cls(p_pp=same, p_pm=different, p_mp=different, p_mm=same)

    @classmethod
    def from_characteristic(cls, chi, phases):
        """Probabilities from the spectral average ``chi`` of exp(i theta) and the local phases."""
        return cls.from_correlation(float(np.real(chi * np.exp(1j * phases.total))))

    @property
    def total(self):
        return self.p_pp + self.p_pm + self.p_mp + self.p_mm

    @property
    def correlation(self):
        return self.p_pp + self.p_mm - self.p_pm - self.p_mp

    def to_dict(self):
        return {"p_pp": self.p_pp, "p_pm": self.p_pm, "p_mp": self.p_mp, "p_mm": self.p_mm}


def visibility(delta_tau_12, delta_tau_1p2p, sigma1, sigma2):
    """
    Two-photon visibility of Gaussian spectra.

    Parameters
    ----------
    delta_tau_12, delta_tau_1p2p : float or `~numpy.ndarray`
        Delays d_12 and d_1'2' in s.
    sigma1, sigma2 : float
        Widths of the two photons in rad/s.

    Returns
    -------
    visibility : float or `~numpy.ndarray`
        exp(-(d_12^2 sigma1^2 + d_1'2'^2 sigma2^2) / 4).
    """
    if not (np.all(np.asarray(sigma1) > 0) and np.all(np.asarray(sigma2) > 0)):
        raise ValueError("spectral widths must be positive")
    exponent = (
        np.square(delta_tau_12) * np.square(sigma1)
        + np.square(delta_tau_1p2p) * np.square(sigma2)
    ) / 4.0
    return np.exp(-exponent)


def _phase(delta_tau_12, delta_tau_1p2p, omega1, omega2):
    return phase_shift(omega1, delta_tau_12) + phase_shift(omega2, delta_tau_1p2p)


def probability_gaussian(delta_tau_12, delta_tau_1p2p, left, right, phases=PhasePair()):
    """
    Closed-form detection probabilities for Gaussian spectra.

    p_ij = 1/4 (1 - (-1)^delta_ij V cos(d_12 w1 + d_1'2' w2 + alpha + beta)). The
    truncation of the spectra at zero frequency is ignored.

    Parameters
    ----------
    delta_tau_12, delta_tau_1p2p : float
        Delays d_12 and d_1'2' in s.
    left, right : `~GravBell.spectra.GaussianSpectrum`
        Spectra of the photons sent left and right.
    phases : `PhasePair`
        Local phases. Default is (0, 0).

    Returns
    -------
    probabilities : `DetectionProbabilities`
        The four joint probabilities.
    """
    if not isinstance(left, GaussianSpectrum) or not isinstance(right, GaussianSpectrum):
        raise TypeError("left and right must be instances of GaussianSpectrum")
    v = visibility(delta_tau_12, delta_tau_1p2p, left.sigma, right.sigma)
    theta = _phase(delta_tau_12, delta_tau_1p2p, left.omega_bar, right.omega_bar)
    return DetectionProbabilities.from_correlation(float(v * np.cos(theta + phases.total)))


def spectral_average(
    delta_tau_12,
    delta_tau_1p2p,
    spectrum,
    tolerance=QUADRATURE_TOLERANCE,
    start_order=QUADRATURE_START_ORDER,
    max_order=QUADRATURE_MAX_ORDER,
):
    """
    Spectral average chi of exp(i (w1 d_12 + w2 d_1'2')).

    The modulus of chi is the visibility of an arbitrary joint spectrum and its
    argument the mean interference phase. The tensor Gauss-Legendre order is
    doubled until two successive estimates differ by at most ``tolerance``.

    Parameters
    ----------
    delta_tau_12, delta_tau_1p2p : float
        Delays d_12 and d_1'2' in s.
    spectrum : `~GravBell.spectra.JointSpectrum`
        Normalized joint spectrum.
    tolerance : float
        Convergence criterion. Default is 1e-9.
    start_order : int
        First number of nodes per axis. Default is 16.
    max_order : int
        Largest number of nodes per axis. Default is 1024.

    Returns
    -------
    chi : complex
        The spectral average.
    """
    if not isinstance(spectrum, JointSpectrum):
        raise TypeError("spectrum must be instance of JointSpectrum")

    def integrand(o1, o2):
        return np.exp(1j * _phase(delta_tau_12, delta_tau_1p2p, o1, o2))

    if isinstance(spectrum, DeltaSpectrum):
        return complex(spectrum.integrate(integrand))

    order = start_order
    previous = spectrum.integrate(integrand, order)
    difference = np.inf
    while order < max_order:
        order *= 2
        current = spectrum.integrate(integrand, order)
        difference = abs(current - previous)
        if difference <= tolerance:
            log.debug(f"Quadrature converged at order {order} ({difference:.2e})")
            return complex(current)
        previous = current
    raise QuadratureNotConverged(order=order, difference=difference, tolerance=tolerance)


def probability_quadrature(delta_tau_12, delta_tau_1p2p, spectrum, phases=PhasePair(), **kwargs):
    """
    Detection probabilities of an arbitrary joint spectrum by numerical quadrature.

    p_ij = 1/4 (1 - (-1)^delta_ij integral |f|^2 cos(w1 d_12 + w2 d_1'2' + alpha + beta)).
    Keyword arguments are passed to `spectral_average`.
    """
    chi = spectral_average(delta_tau_12, delta_tau_1p2p, spectrum, **kwargs)
    return DetectionProbabilities.from_characteristic(chi, phases)


def _check_offset(delays, offset):
    tolerance = delay_tolerance(list(delays.pairwise().values()) + [offset])
    residuals = (delays.delta_1_1p - offset, delays.delta_2_2p - offset)
    if any(abs(r) > tolerance for r in residuals):
        raise IndistinguishabilityViolated(offset=offset, residuals=residuals, tolerance=tolerance)


def probability_amplitude_oracle(delays, offset, phases=PhasePair(), grid=None):
    """
    Detection probabilities from the post-selected two-photon amplitude on a frequency grid.

    Each photon crosses a beam splitter and takes its short or long arm, so the
    pair reaches the analysis beam splitters along four branches, each carrying
    exp(i (w1 t_left + w2 t_right)) with its own path times. Only the branches
    where both photons take their short arms or both their long arms are kept,
    and the kept state is renormalized before the output ports are projected.
    With an ``offset``, both kept branches must show that detection-time
    difference; with ``offset=None`` no timing condition is imposed, as in the
    local post-selection of Hugged arrays.

    Parameters
    ----------
    delays : `~GravBell.arrays.PathDelaySet`
        Path delays of the array.
    offset : float or None
        Post-selection offset in s.
    phases : `PhasePair`
        Local phases applied to the short arms. Default is (0, 0).
    grid : `~GravBell.spectra.SpectralGrid`
        Discretized joint spectrum.

    Returns
    -------
    probabilities : `DetectionProbabilities`
        The four joint probabilities.
    """
    if not isinstance(delays, PathDelaySet):
        raise TypeError("delays must be instance of PathDelaySet")
    if not isinstance(grid, SpectralGrid):
        raise TypeError("grid must be instance of SpectralGrid")
    grid.check_resolution()
    if offset is not None:
        _check_offset(delays, offset)

    o1, o2 = np.meshgrid(grid.omega1, grid.omega2, indexing="ij")
    amplitude = np.sqrt(grid.weights)
    local = {"g1": phases.alpha, "g1p": phases.beta, "g2": 0.0, "g2p": 0.0}

    branches = {}
    for left, right in PATH_COMBINATIONS:
        phase = phase_shift(o1, delays.relative(left)) + phase_shift(o2, delays.relative(right))
        phase += local[left] + local[right]
        branches[left, right] = 0.5 * amplitude * np.exp(1j * phase)

    kept = PATH_COMBINATIONS[:2]
    kept_norm = sum(np.sum(np.abs(branches[pair]) ** 2) for pair in kept)
    total_norm = sum(np.sum(np.abs(branch) ** 2) for branch in branches.values())
    log.debug(f"Post-selection keeps {kept_norm / total_norm:.3f} of the pairs")

    probabilities = {}
    for i, left_port in enumerate("pm"):
        for j, right_port in enumerate("pm"):
            out = sum(
                _PORTS[_ARMS[left]][i] * _PORTS[_ARMS[right]][j] * branches[left, right]
                for left, right in kept
            )
            probabilities[f"p_{left_port}{right_port}"] = float(
                np.sum(np.abs(out) ** 2) / kept_norm
            )

    log.debug(f"Amplitude oracle on {o1.shape} grid: {probabilities}")
    return DetectionProbabilities(**probabilities)


def probability_hugged_balanced(delta_tau, left, right, phases=PhasePair()):
    """
    Detection probabilities of a rotated Hugged array in the equal-frequency limit.

    The oscillation is set by alpha + beta alone and the visibility is
    exp(-delta_tau^2 (sigma1^2 + sigma2^2) / 4).
    """
    v = visibility(delta_tau, delta_tau, left.sigma, right.sigma)
    return DetectionProbabilities.from_correlation(float(v * np.cos(phases.total)))


def visibility_regime(delta_tau, sigma1, sigma2):
    """Classify a delay as "coherent", "intermediate" or "dephased" from delta_tau^2 (sigma1^2 + sigma2^2)."""
    x = delta_tau**2 * (sigma1**2 + sigma2**2)
    if x < COHERENT_LIMIT:
        return "coherent"
    if x > DEPHASED_LIMIT:
        return "dephased"
    return "intermediate"
