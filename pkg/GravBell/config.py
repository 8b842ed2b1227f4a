import copy
from pathlib import Path
import yaml
from astropy import constants as const
from gammapy.utils.scripts import make_path
from loguru import logger as log
from GravBell.arrays import ArrayKind, balance_geometry, rotated_balanced_geometry
from GravBell.chsh import PhaseSettings
from GravBell.spacetime import GravityModel
from GravBell.spectra import GaussianSpectrum, ProductSpectrum, TabulatedSpectrum

__all__ = ["GravBellConfig", "DEFAULT_CONFIG_FILE"]

DEFAULT_CONFIG_FILE = Path(__file__).parent / "default_config.yaml"


def _deep_update(base, update):
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _deep_update(base[key], value)
        else:
            base[key] = value
    return base


class GravBellConfig:
    """
    YAML configuration of a simulation.

    Parameters
    ----------
    config_dict : dict
        Configuration sections.
    config_file : `~pathlib.Path`, optional
        File the configuration was read from.
    """

    def __init__(self, config_dict, config_file=None):
        if not isinstance(config_dict, dict):
            raise TypeError("config_dict must be a dict")
        self._dict = config_dict
        self._config_file = config_file

    @classmethod
    def read(cls, filename=None):
        """Read the packaged defaults and update them with ``filename`` if given."""
        with open(DEFAULT_CONFIG_FILE, "r") as stream:
            config = yaml.safe_load(stream)

        if filename is not None:
            filename = make_path(filename)
            with open(filename, "r") as stream:
                user = yaml.safe_load(stream) or {}
            _deep_update(config, user)
            log.debug(f"Configuration updated from {filename}")
        return cls(config, config_file=filename)

    @property
    def gravity(self):
        return self._dict["gravity"]

    @property
    def geometry(self):
        return self._dict["geometry"]

    @property
    def source(self):
        return self._dict["source"]

    @property
    def phases(self):
        return self._dict["phases"]

    @property
    def quadrature(self):
        return self._dict["quadrature"]

    @property
    def oracle(self):
        return self._dict["oracle"]

    @property
    def sweep(self):
        return self._dict["sweep"]

    @property
    def config_file(self):
        return self._config_file

    def add_entry(self, primary_dict, entry, value):
        self._dict[primary_dict][entry] = value

    def to_dict(self):
        return copy.deepcopy(self._dict)

    def write(self, filename, **kwargs):
        filename = make_path(filename)
        if filename.suffix != ".yaml":
            filename = filename.with_suffix(".yaml")

        with open(filename, "w") as outfile:
            yaml.safe_dump(self._dict, outfile, sort_keys=False, **kwargs)

    def gravity_model(self):
        """`~GravBell.spacetime.GravityModel` of the ``gravity`` section. ``g: standard`` selects g0."""
        g = self.gravity["g"]
        if g == "standard":
            g = const.g0.value
        return GravityModel(
            g=float(g),
            c=float(self.gravity["c"]),
            reference_height=float(self.gravity["reference_height"]),
        )

    def phase_settings(self):
        return PhaseSettings(**{key: float(value) for key, value in self.phases.items()})

    def spectra(self):
        """The (left, right) `~GravBell.spectra.GaussianSpectrum` of the ``source`` section."""
        model = self.gravity_model()
        return tuple(
            GaussianSpectrum.from_bandwidth(
                float(self.source[side]["wavelength"]),
                float(self.source[side]["bandwidth"]),
                model,
            )
            for side in ("left", "right")
        )

    def joint_spectrum(self):
        """Tabulated spectrum if ``source.tabulated`` names a file, product of `spectra` otherwise."""
        if self.source.get("tabulated"):
            return TabulatedSpectrum.read(self.source["tabulated"])
        return ProductSpectrum(*self.spectra())

    def array_geometry(self):
        """Balanced or rotated `~GravBell.arrays.ArrayGeometry` of the ``geometry`` section."""
        model = self.gravity_model()
        kind = ArrayKind.from_name(self.geometry["kind"])
        L2p = float(self.geometry["L2p"])
        H = float(self.geometry["H"])
        offset = float(self.geometry["offset"])
        if kind.is_rotated:
            if offset != 0:
                raise ValueError(f"rotated arrays take no post-selection offset, given {offset} s")
            return rotated_balanced_geometry(kind, L2p, H, model)
        return balance_geometry(kind, L2p, H, offset, model)
