"""CHSH functional of Franson and Hugged arrays and the critical proper area."""
from dataclasses import dataclass
import numpy as np
from GravBell.quantum import (
    DetectionProbabilities,
    PhasePair,
    spectral_average,
    visibility,
)
from GravBell.utils import ZeroGravity

__all__ = [
    "TSIRELSON_BOUND",
    "CLASSICAL_BOUND",
    "PhaseSettings",
    "CANONICAL",
    "ChshResult",
    "correlation",
    "sigma_general",
    "sigma_balanced",
    "sigma_rotated_hugged",
    "sigma_gaussian",
    "sigma_phase_compensated",
    "compensated_settings",
    "sigma_classical",
    "critical_area",
]

TSIRELSON_BOUND = 2.0 * np.sqrt(2.0)
CLASSICAL_BOUND = 2.0


@dataclass(frozen=True)
class PhaseSettings:
    """
    Analyzer phases (alpha, beta, alpha', beta') in rad.

    The CHSH functional combines E(alpha, beta) + E(alpha', beta) + E(alpha, beta')
    - E(alpha', beta').
    """

    alpha: float
    beta: float
    alpha_p: float
    beta_p: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.alpha, self.beta, self.alpha_p, self.beta_p])):
            raise ValueError("phase settings must be finite")

    def pairs(self):
        """The four `~GravBell.quantum.PhasePair` of the functional, with their signs."""
        return (
            (PhasePair(self.alpha, self.beta), 1.0),
            (PhasePair(self.alpha_p, self.beta), 1.0),
            (PhasePair(self.alpha, self.beta_p), 1.0),
            (PhasePair(self.alpha_p, self.beta_p), -1.0),
        )

    def combine(self, correlations):
        """Signed combination of four correlations given in `pairs` order."""
        return sum(sign * e for (_, sign), e in zip(self.pairs(), correlations))


CANONICAL = PhaseSettings(alpha=np.pi / 4, beta=0.0, alpha_p=-np.pi / 4, beta_p=-np.pi / 2)


@dataclass(frozen=True)
class ChshResult:
    """
    Value of the CHSH functional and the correlations it combines.

    Attributes
    ----------
    sigma_value : float
        Signed functional.
    correlations : tuple of float
        E(alpha, beta), E(alpha', beta), E(alpha, beta'), E(alpha', beta').
    visibility : float
        Two-photon visibility of the spectrum at the given delays.
    """

    sigma_value: float
    correlations: tuple
    visibility: float

    @property
    def violated(self):
        return abs(self.sigma_value) > CLASSICAL_BOUND


def correlation(probabilities):
    """Expectation value p++ + p-- - p+- - p-+ of the dichotomic observable."""
    if not isinstance(probabilities, DetectionProbabilities):
        raise TypeError("probabilities must be instance of DetectionProbabilities")
    return probabilities.correlation


def sigma_general(delta_tau_12, delta_tau_1p2p, spectrum, settings=CANONICAL, **kwargs):
    """
    CHSH functional of an arbitrary joint spectrum.

    The spectral average is computed once by quadrature and shared by the four
    correlations. Keyword arguments are passed to `~GravBell.quantum.spectral_average`.

    Parameters
    ----------
    delta_tau_12, delta_tau_1p2p : float
        Delays d_12 and d_1'2' in s.
    spectrum : `~GravBell.spectra.JointSpectrum`
        Normalized joint spectrum.
    settings : `PhaseSettings`
        Analyzer phases. Default is `CANONICAL`.

    Returns
    -------
    result : `ChshResult`
        Signed functional, correlations and visibility.
    """
    chi = spectral_average(delta_tau_12, delta_tau_1p2p, spectrum, **kwargs)
    correlations = tuple(
        correlation(DetectionProbabilities.from_characteristic(chi, phases))
        for phases, _ in settings.pairs()
    )
    return ChshResult(
        sigma_value=float(settings.combine(correlations)),
        correlations=correlations,
        visibility=float(abs(chi)),
    )


def sigma_gaussian(delta_tau_12, delta_tau_1p2p, sigma1, sigma2, omega1, omega2):
    """2 sqrt(2) V |cos(w1 d_12 + w2 d_1'2')| for Gaussian spectra and canonical settings."""
    v = visibility(delta_tau_12, delta_tau_1p2p, sigma1, sigma2)
    theta = np.multiply(omega1, delta_tau_12) + np.multiply(omega2, delta_tau_1p2p)
    return TSIRELSON_BOUND * v * np.abs(np.cos(theta))


def sigma_balanced(delta_tau, sigma1, sigma2, omega1, omega2):
    """
    CHSH functional of a balanced Franson or Hugged array.

    Both delays equal ``delta_tau`` = g A / c^3, so that
    Sigma = 2 sqrt(2) exp(-delta_tau^2 (sigma1^2 + sigma2^2) / 4) |cos(delta_tau (w1 + w2))|.
    """
    return sigma_gaussian(delta_tau, delta_tau, sigma1, sigma2, omega1, omega2)


def sigma_rotated_hugged(delta_tau, sigma1, sigma2, omega1, omega2):
    """
    CHSH functional of a rotated balanced Hugged array, whose delays are -delta_tau and +delta_tau.

    The harmonic factor is |cos(delta_tau (w1 - w2))| and vanishes for w1 = w2.
    """
    return sigma_gaussian(-np.asarray(delta_tau), delta_tau, sigma1, sigma2, omega1, omega2)


def sigma_phase_compensated(delta_tau_12, delta_tau_1p2p, sigma1, sigma2, settings=None):
    """
    CHSH functional with analyzer phases referenced to the delays.

    With phases alpha = phi_a - w1 d_12 and beta = phi_b - w2 d_1'2' the harmonic
    factor cancels and E(alpha, beta) = V cos(phi_a + phi_b).

    Parameters
    ----------
    delta_tau_12, delta_tau_1p2p : float
        Delays d_12 and d_1'2' in s.
    sigma1, sigma2 : float
        Widths in rad/s.
    settings : `PhaseSettings`, optional
        Reference phases (phi_1, phi_2, phi'_1, phi'_2). Default gives the
        envelope 2 sqrt(2) V.

    Returns
    -------
    sigma : float
        V [cos(phi_1 + phi_2) + cos(phi'_1 + phi_2) + cos(phi_1 + phi'_2) - cos(phi'_1 + phi'_2)].
    """
    v = visibility(delta_tau_12, delta_tau_1p2p, sigma1, sigma2)
    if settings is None:
        return TSIRELSON_BOUND * v
    return v * settings.combine([np.cos(p.total) for p, _ in settings.pairs()])


def compensated_settings(delta_tau_12, delta_tau_1p2p, omega1, omega2, settings=CANONICAL):
    """Analyzer phases alpha = phi_a - w1 d_12 and beta = phi_b - w2 d_1'2' for reference phases ``settings``."""
    shift1 = omega1 * delta_tau_12
    shift2 = omega2 * delta_tau_1p2p
    return PhaseSettings(
        alpha=settings.alpha - shift1,
        beta=settings.beta - shift2,
        alpha_p=settings.alpha_p - shift1,
        beta_p=settings.beta_p - shift2,
    )


def sigma_classical(delta_tau_12, delta_tau_1p2p, sigma1, sigma2, omega1, omega2):
    """Functional of classical light, a quarter of `sigma_gaussian` and never above sqrt(2)/2."""
    return sigma_gaussian(delta_tau_12, delta_tau_1p2p, sigma1, sigma2, omega1, omega2) / 4.0


def critical_area(sigma1, sigma2, model):
    """
    Proper area above which a balanced array cannot violate the CHSH inequality.

    A* = sqrt(ln 4) c^3 / (g sqrt(sigma1^2 + sigma2^2)).

    Parameters
    ----------
    sigma1, sigma2 : float
        Widths in rad/s.
    model : `~GravBell.spacetime.GravityModel`
        The gravity model.

    Returns
    -------
    area : float
        Critical area in m^2.
    """
    if not (sigma1 > 0 and sigma2 > 0):
        raise ValueError("spectral widths must be positive")
    if model.g == 0:
        raise ZeroGravity("critical area")
    return np.sqrt(np.log(4.0)) * model.c**3 / (model.g * np.hypot(sigma1, sigma2))
