import argparse
import pytest
import yaml
from numpy.testing import assert_allclose
from astropy.table import Table
from GravBell.cli import build_parser, main, quantity


def _values(text):
    """Parse the quantity,value table printed by the commands."""
    lines = text.strip().splitlines()
    assert lines[0] == "quantity,value"
    return dict(line.split(",", 1) for line in lines[1:])


def test_quantity():
    parse = quantity("m")
    assert parse("10") == 10.0
    assert parse("10 km") == 1e4
    assert_allclose(parse("644.2 nm"), 644.2e-9)
    with pytest.raises(argparse.ArgumentTypeError):
        parse("ten")


def test_parser():
    args = build_parser().parse_args(["delays", "--kind", "hugged", "--l2p", "5 km"])
    assert args.command == "delays"
    assert args.kind == "hugged"
    assert args.l2p == 5000.0
    assert not hasattr(args, "height")


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["delays", "--kind", "sagnac"]) == 2
    assert main(["delays", "--l2p", "abc"]) == 2
    assert "--l2p" in capsys.readouterr().err
    assert main(["figure", "fig7"]) == 2


def test_invalid_values(capsys):
    assert main(["delays", "--l2p", "-1"]) == 2
    assert "L2p" in capsys.readouterr().err
    assert main(["critical-area", "--dlambda", "2000 nm"]) == 2
    assert main(["delays", "--g", "1e20"]) == 2
    assert main(["delays", "--kind", "franson-rotated", "--dtau", "1e-12"]) == 2
    assert "rotated arrays" in capsys.readouterr().err
    assert main(["probabilities", "--method", "oracle", "--kind", "franson-rotated", "--dtau", "1e-12"]) == 2


class TestDelays:
    def test_rotated_franson(self, capsys):
        assert main(["delays", "--kind", "franson-rotated"]) == 0
        values = _values(capsys.readouterr().out)
        assert values["kind"] == "franson-rotated"
        assert float(values["delta_1_1p_s"]) == 0.0
        assert_allclose(float(values["delta_1_2p_s"]), 3.6409e-17, rtol=1e-4)
        assert values["feasible"] == "true"
        assert values["local_post_selection"] == "false"
        assert float(values["delay_line_g2p_s"]) == 0.0
        assert_allclose(float(values["delta_L_left_m"]), float(values["delta_L_right_m"]))

    def test_flat_space(self, capsys):
        assert main(["delays", "--g", "0", "--kind", "franson-rotated"]) == 0
        values = _values(capsys.readouterr().out)
        for name in ("delta_1_2_s", "delta_1p_2p_s", "delta_1_2p_s", "delta_2_1p_s"):
            assert float(values[name]) == 0.0
        assert values["feasible"] == "false"

    def test_rotated_hugged(self, capsys):
        assert main(["delays", "--kind", "hugged-rotated", "--height", "1 km"]) == 0
        values = _values(capsys.readouterr().out)
        assert_allclose(float(values["delta_1_2_s"]), -float(values["delta_1p_2p_s"]))
        assert_allclose(float(values["delta_2_2p_s"]), 7.2818e-18, rtol=1e-4)
        assert values["local_post_selection"] == "true"

    def test_output_file(self, tmp_path):
        filename = tmp_path / "delays.csv"
        assert main(["delays", "--out", str(filename)]) == 0
        table = Table.read(filename, format="ascii.csv")
        assert table.colnames == ["quantity", "value"]
        assert "constraint_residual_s" in list(table["quantity"])


class TestProbabilities:
    def test_gaussian(self, capsys):
        assert main(["probabilities", "--dlambda", "644.2 nm"]) == 0
        values = _values(capsys.readouterr().out)
        assert_allclose(float(values["p_pp"]), 0.4947, rtol=1e-3)
        assert_allclose(float(values["visibility"]), 0.99524, rtol=1e-4)
        assert values["regime"] == "coherent"

    def test_methods_agree(self, capsys):
        results = {}
        for method in ("gaussian", "quadrature", "oracle"):
            argv = ["probabilities", "--method", method, "--dlambda", "100 nm", "--alpha", "0.4"]
            assert main(argv) == 0
            results[method] = float(_values(capsys.readouterr().out)["p_pp"])
        assert_allclose(results["quadrature"], results["gaussian"], atol=1e-6)
        assert_allclose(results["oracle"], results["gaussian"], atol=1e-6)

    def test_broad_spectrum_needs_closed_form(self, capsys):
        assert main(["probabilities", "--method", "quadrature"]) == 2
        assert "sigma" in capsys.readouterr().err


class TestChsh:
    def test_methods(self, capsys):
        sigma = {}
        for method in ("balanced", "gaussian", "compensated", "classical"):
            assert main(["chsh", "--method", method, "--dlambda", "644.2 nm"]) == 0
            values = _values(capsys.readouterr().out)
            sigma[method] = float(values["sigma"])
        assert_allclose(sigma["balanced"], 2.768, rtol=2e-3)
        assert_allclose(sigma["gaussian"], sigma["balanced"], rtol=1e-10)
        assert_allclose(sigma["classical"], sigma["balanced"] / 4, rtol=1e-10)
        assert sigma["compensated"] > sigma["balanced"]

    def test_compensated_reports_analyzers(self, capsys):
        assert main(["chsh", "--method", "compensated"]) == 0
        values = _values(capsys.readouterr().out)
        assert "analyzer_alpha_rad" in values
        assert values["violated"] == "true"

    def test_general(self, capsys):
        argv = ["chsh", "--method", "general", "--dlambda", "100 nm"]
        assert main(argv) == 0
        general = float(_values(capsys.readouterr().out)["sigma"])
        assert main(["chsh", "--method", "balanced", "--dlambda", "100 nm"]) == 0
        balanced = float(_values(capsys.readouterr().out)["sigma"])
        assert_allclose(abs(general), balanced, atol=1e-9)

    def test_numerical_failure(self, capsys, tmp_path):
        filename = tmp_path / "strict.yaml"
        with open(filename, "w") as stream:
            yaml.safe_dump({"quadrature": {"tolerance": 1e-30, "max_order": 32}}, stream)
        argv = ["chsh", "--method", "general", "--dlambda", "100 nm", "--config", str(filename)]
        assert main(argv) == 3
        assert "numerical failure" in capsys.readouterr().err


class TestCriticalArea:
    def test_value(self, capsys):
        assert main(["critical-area", "--dlambda", "644.2 nm"]) == 0
        values = _values(capsys.readouterr().out)
        assert_allclose(float(values["critical_area_m2"]), 8.52e8, rtol=3e-3)

    def test_flat_space(self, capsys, tmp_path):
        assert main(["critical-area", "--g", "0"]) == 0
        assert "no finite critical area for g = 0" in capsys.readouterr().out

        filename = tmp_path / "critical.csv"
        assert main(["critical-area", "--g", "0", "--out", str(filename)]) == 0
        assert capsys.readouterr().out == ""
        table = Table.read(filename, format="ascii.csv")
        rows = dict(zip(table["quantity"], table["value"]))
        assert rows["critical_area_m2"] == "inf"
        assert rows["note"] == "no finite critical area for g = 0"


def test_figure(tmp_path):
    filename = tmp_path / "fig3a.csv"
    assert main(["figure", "fig3a", "--points", "11", "--out", str(filename)]) == 0
    table = Table.read(filename, format="ascii.csv")
    assert len(table) == 33
    assert_allclose(table["p_pp"][0], 0.5)
    assert_allclose(sorted(set(table["delta_lambda_m"])), (161.2e-9, 322.4e-9, 644.8e-9))


def test_sweep(tmp_path):
    filename = tmp_path / "sweep.csv"
    argv = [
        "sweep",
        "--variable", "area",
        "--start", "0",
        "--stop", "1e9",
        "--points", "5",
        "--quantities", "sigma,visibility",
        "--out", str(filename),
        "--verbose",
    ]
    assert main(argv) == 0
    table = Table.read(filename, format="ascii.csv")
    assert len(table) == 5
    assert table.colnames == ["index", "area_m2", "delta_tau_s", "delta_tau_p_s", "visibility", "sigma"]
    assert_allclose(table["visibility"][0], 1.0)
