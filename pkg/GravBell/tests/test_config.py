import numpy as np
import pytest
import yaml
from numpy.testing import assert_allclose
from astropy import constants as const
from GravBell.arrays import ArrayKind
from GravBell.chsh import CANONICAL
from GravBell.config import DEFAULT_CONFIG_FILE, GravBellConfig
from GravBell.spectra import ProductSpectrum, TabulatedSpectrum


@pytest.fixture()
def config():
    return GravBellConfig.read()


def test_default_config(config):
    assert config.config_file is None
    assert DEFAULT_CONFIG_FILE.exists()
    assert set(config.to_dict()) == {
        "gravity",
        "geometry",
        "source",
        "phases",
        "quadrature",
        "oracle",
        "sweep",
    }
    model = config.gravity_model()
    assert model.g == 9.81
    assert model.c == const.c.value
    assert config.quadrature == {"tolerance": 1e-9, "start_order": 16, "max_order": 1024}
    assert config.oracle["points"] == 241

    settings = config.phase_settings()
    assert_allclose(
        [settings.alpha, settings.beta, settings.alpha_p, settings.beta_p],
        [CANONICAL.alpha, CANONICAL.beta, CANONICAL.alpha_p, CANONICAL.beta_p],
    )


def test_spectra(config):
    left, right = config.spectra()
    assert left.lambda0 == 806e-9
    assert right.lambda0 == 706e-9
    assert_allclose(left.sigma, 2.224e15, rtol=5e-3)
    assert isinstance(config.joint_spectrum(), ProductSpectrum)


def test_array_geometry(config):
    geometry = config.array_geometry()
    assert geometry.kind is ArrayKind.FRANSON
    assert geometry.area == 1e8

    config.add_entry("geometry", "kind", "hugged-rotated")
    geometry = config.array_geometry()
    assert geometry.kind is ArrayKind.HUGGED_ROTATED
    assert geometry.offset == 0.0

    config.add_entry("geometry", "offset", 1e-12)
    with pytest.raises(ValueError, match="rotated arrays"):
        config.array_geometry()


def test_standard_gravity(config):
    config.add_entry("gravity", "g", "standard")
    assert config.gravity_model().g == const.g0.value


def test_to_dict_is_a_copy(config):
    values = config.to_dict()
    values["gravity"]["g"] = 0.0
    assert config.gravity["g"] == 9.81


def test_read_user_file(tmp_path):
    filename = tmp_path / "user.yaml"
    with open(filename, "w") as stream:
        yaml.safe_dump({"gravity": {"g": 0.0}, "geometry": {"L2p": 5000.0}}, stream)

    config = GravBellConfig.read(filename)
    assert config.config_file == filename
    assert config.gravity_model().g == 0.0
    assert config.geometry["L2p"] == 5000.0
    # untouched entries keep their defaults
    assert config.geometry["H"] == 1e4
    assert config.gravity["c"] == const.c.value


def test_write(config, tmp_path):
    config.add_entry("sweep", "points", 11)
    config.write(tmp_path / "written")
    assert (tmp_path / "written.yaml").exists()

    config = GravBellConfig.read(tmp_path / "written.yaml")
    assert config.sweep["points"] == 11
    assert config.sweep["quantities"] == ["visibility", "probabilities", "sigma", "sigma_classical"]


def test_tabulated_source(config, tmp_path):
    omega = np.linspace(2.0e15, 2.5e15, 11)
    TabulatedSpectrum(omega, omega, np.ones((11, 11)), normalize=True).write(
        tmp_path / "spectrum.dat"
    )
    config.add_entry("source", "tabulated", str(tmp_path / "spectrum.dat"))
    assert isinstance(config.joint_spectrum(), TabulatedSpectrum)


def test_errors():
    with pytest.raises(TypeError):
        GravBellConfig(["gravity"])
    with pytest.raises(FileNotFoundError):
        GravBellConfig.read("missing.yaml")
