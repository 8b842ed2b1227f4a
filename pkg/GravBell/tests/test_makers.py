import numpy as np
import pytest
from numpy.testing import assert_allclose
from astropy.table import Table
from GravBell.arrays import ArrayKind
from GravBell.chsh import TSIRELSON_BOUND, critical_area
from GravBell.makers import (
    FIGURE_BANDWIDTHS,
    FIGURES,
    VISIBLE_WAVELENGTHS,
    FigureMaker,
    SweepMaker,
    SweepSpec,
    write_csv,
)
from GravBell.spacetime import GravityModel
from GravBell.spectra import GaussianSpectrum
from GravBell.utils import UnknownFigure, disable_logging_library


@pytest.fixture()
def broad():
    return tuple(
        GaussianSpectrum.from_bandwidth(wavelength, FIGURE_BANDWIDTHS[-1])
        for wavelength in VISIBLE_WAVELENGTHS
    )


class TestWriteCsv:
    def setup_class(self):
        self.table = Table({"index": [0, 1], "x": [1.0 / 3.0, 2.0], "name": ["a", "b"]})

    def test_file(self, tmp_path):
        filename = tmp_path / "out" / "table.csv"
        write_csv(self.table, filename)
        lines = filename.read_text().splitlines()
        assert lines[0] == "index,x,name"
        assert lines[1] == "0,0.333333333333,a"

        write_csv(self.table, tmp_path / "again.csv")
        assert (tmp_path / "again.csv").read_bytes() == filename.read_bytes()

    def test_stdout(self, capsys):
        write_csv(self.table)
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "index,x,name"


def test_sweep_spec():
    spec = SweepSpec("area", 0.0, 1e9, 11, kind="hugged-rotated")
    assert spec.kind is ArrayKind.HUGGED_ROTATED
    assert spec.column == "area_m2"
    assert spec.axis.nbin == 11
    assert_allclose(spec.axis.center.to_value("m2"), np.linspace(0.0, 1e9, 11))

    with pytest.raises(ValueError):
        SweepSpec("mass", 0.0, 1.0, 11)
    with pytest.raises(ValueError):
        SweepSpec("area", 1.0, 0.0, 11)
    with pytest.raises(ValueError):
        SweepSpec("area", 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        SweepSpec("area", 0.0, 1.0, 11, quantities=("entropy",))
    with pytest.raises(ValueError):
        SweepSpec("area", 0.0, 1.0, 11, H=0.0)
    with pytest.raises(ValueError, match="rotated arrays"):
        SweepSpec("area", 0.0, 1.0, 11, kind="franson-rotated", offset=1e-12)


class TestSweepMaker:
    @pytest.fixture(autouse=True)
    def setup_class(self, broad):
        self.left, self.right = broad
        self.model = GravityModel()
        self.a_star = critical_area(self.left.sigma, self.right.sigma, self.model)

    def test_columns(self):
        spec = SweepSpec("area", 0.0, 1e9, 5)
        table = SweepMaker(spec).run()
        assert table.colnames == [
            "index",
            "area_m2",
            "delta_tau_s",
            "delta_tau_p_s",
            "visibility",
            "p_pp",
            "p_pm",
            "p_mp",
            "p_mm",
            "E",
            "sigma",
            "sigma_classical",
        ]
        assert list(table["index"]) == [0, 1, 2, 3, 4]
        assert table["area_m2"].unit == "m2"
        assert table.meta["kind"] == "franson"
        assert table["p_pp"][0] == 0.5
        assert table["sigma"][0] == TSIRELSON_BOUND

        with pytest.raises(TypeError):
            SweepMaker("area")

    def test_area_crosses_two_at_critical_area(self):
        spec = SweepSpec(
            "area", 0.0, 2 * self.a_star, 201, quantities=("sigma_compensated",)
        )
        sigma = np.asarray(SweepMaker(spec, self.model, self.left, self.right).run()["sigma_compensated"])
        assert np.all(sigma[:100] > 2.0)
        assert np.all(sigma[101:] < 2.0)
        assert_allclose(sigma[100], 2.0, atol=1e-9)
        assert np.all(np.diff(sigma) < 0)

    def test_bandwidth_envelope(self):
        spec = SweepSpec("bandwidth", 50e-9, 700e-9, 27, quantities=("visibility", "sigma"))
        table = SweepMaker(spec, self.model, self.left, self.right).run()
        assert table.colnames[1] == "delta_lambda_m"
        assert np.all(np.diff(np.asarray(table["visibility"])) <= 0)

    def test_height_and_length(self):
        for variable in ("height", "length"):
            spec = SweepSpec(variable, 0.0, 2e4, 5, quantities=("visibility",))
            table = SweepMaker(spec, self.model, self.left, self.right).run()
            assert table["visibility"][0] == 1.0
            assert np.all(np.diff(np.asarray(table["visibility"])) < 0)

    def test_flat_space(self):
        spec = SweepSpec("area", 0.0, 1e10, 11, quantities=("sigma",))
        table = SweepMaker(spec, GravityModel.flat(), self.left, self.right).run()
        assert np.all(np.asarray(table["sigma"]) == TSIRELSON_BOUND)
        assert np.all(np.asarray(table["delta_tau_s"]) == 0.0)

    def test_rotated_hugged(self):
        spec = SweepSpec("area", 0.0, 1e9, 5, kind="hugged-rotated", quantities=("sigma",))
        table = SweepMaker(spec, self.model, self.left, self.right).run()
        assert_allclose(table["delta_tau_s"], -np.asarray(table["delta_tau_p_s"]), rtol=1e-12)


class TestFigureMaker:
    @disable_logging_library()
    def test_fig3a(self):
        table = FigureMaker("fig3a", points=11).run()
        assert len(table) == 33
        assert list(table["index"]) == list(range(33))
        assert table.meta["figure"] == "fig3a"
        assert table.colnames == [
            "index",
            "area_m2",
            "delta_lambda_m",
            "delta_tau_s",
            "visibility",
            "p_pp",
        ]
        first = table[table["area_m2"] == 0.0]
        assert len(first) == 3
        assert_allclose(first["p_pp"], 0.5)

        # broader sources lose visibility faster
        last = table[np.isclose(table["area_m2"], 1e10)]
        assert_allclose(last["delta_lambda_m"], FIGURE_BANDWIDTHS)
        assert np.all(np.diff(np.asarray(last["visibility"])) < 0)

    def test_fig3b(self):
        table = FigureMaker("fig3b", points=11, broad_bandwidth=644.2e-9).run()
        assert_allclose(sorted(set(table["delta_lambda_m"])), (161.2e-9, 322.4e-9, 644.2e-9))
        assert np.all(np.asarray(table["delta_tau_s"]) <= 0.0)

    @disable_logging_library()
    def test_fig4(self):
        table = FigureMaker("fig4").run()
        assert len(table) == 69 * 101
        violated = np.asarray(table["sigma"]) > 2.0
        assert np.any(violated)
        assert np.all(
            np.asarray(table["area_m2"])[violated] < np.asarray(table["critical_area_m2"])[violated]
        )

    def test_fig4_flat_space(self):
        table = FigureMaker("fig4", model=GravityModel.flat()).run()
        assert np.all(np.isinf(np.asarray(table["critical_area_m2"])))
        assert_allclose(table["sigma"], TSIRELSON_BOUND)

    def test_fig5(self):
        table = FigureMaker("fig5").run()
        assert len(table) == 41 * 41
        selected = np.isclose(table["length_m"], 1e4) & np.isclose(table["height_m"], 1e4)
        assert selected.sum() == 1
        assert table["sigma"][selected][0] > 2.0
        assert_allclose(table["area_m2"], np.asarray(table["length_m"]) * table["height_m"])

    def test_fig6(self):
        for name, column in (("fig6a", "p_pp"), ("fig6b", "sigma")):
            table = FigureMaker(name, points=21).run()
            assert len(table) == 42
            assert set(table["array"]) == {"balanced", "rotated"}
            assert column in table.colnames
            assert table["area_m2"].max() == pytest.approx(1e11)

    def test_sigma_area(self):
        table = FigureMaker("sigma-area", points=11).run()
        assert len(table) == 66
        rotated = table[table["array"] == "rotated"]
        balanced = table[table["array"] == "balanced"]
        assert_allclose(rotated["visibility"], balanced["visibility"], rtol=1e-12)

    def test_unknown(self):
        with pytest.raises(UnknownFigure):
            FigureMaker("fig7")
        assert "sigma-area" in FIGURES
