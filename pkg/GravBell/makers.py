import sys
from dataclasses import dataclass
import numpy as np
import astropy.units as u
from astropy.table import Table, vstack
from gammapy.maps import MapAxis
from gammapy.utils.scripts import make_path
from loguru import logger as log
from GravBell.arrays import (
    ArrayKind,
    balance_geometry,
    path_proper_times,
    rotated_balanced_geometry,
)
from GravBell.chsh import (
    critical_area,
    sigma_classical,
    sigma_gaussian,
    sigma_phase_compensated,
)
from GravBell.quantum import PhasePair, probability_gaussian, visibility
from GravBell.spacetime import GravityModel
from GravBell.spectra import GaussianSpectrum
from GravBell.utils import UnknownFigure, ZeroGravity

__all__ = [
    "SweepSpec",
    "SweepMaker",
    "FigureMaker",
    "FIGURES",
    "write_csv",
    "VISIBLE_WAVELENGTHS",
    "FIGURE_BANDWIDTHS",
    "SPDC_SOURCE",
]

VARIABLES = {
    "area": ("area_m2", u.m**2),
    "height": ("height_m", u.m),
    "length": ("length_m", u.m),
    "bandwidth": ("delta_lambda_m", u.m),
}
QUANTITIES = ("visibility", "probabilities", "sigma", "sigma_classical", "sigma_compensated")
DEFAULT_QUANTITIES = ("visibility", "probabilities", "sigma", "sigma_classical")

VISIBLE_WAVELENGTHS = (806e-9, 706e-9)
# the largest bandwidth is 644.8 nm in the figure captions and 644.2 nm in the width table
FIGURE_BANDWIDTHS = (161.2e-9, 322.4e-9, 644.8e-9)
SPDC_SOURCE = ((3300e-9, 370e-9), (995e-9, 34e-9))
FIGURE_AREA_MAX = 1e10
SPDC_AREA_MAX = 1e11
FIGURE_HEIGHT = 1e4


def write_csv(table, filename=None, overwrite=True):
    """
    Write ``table`` as CSV with 12 significant digits per float.

    Parameters
    ----------
    table : `~astropy.table.Table`
        Table to write.
    filename : str or `~pathlib.Path`, optional
        Output file. Default writes to the standard output.
    overwrite : bool
        Overwrite an existing file. Default is True.
    """
    for name in table.colnames:
        if table[name].dtype.kind == "f":
            table[name].format = ".12g"

    if filename is None:
        table.write(sys.stdout, format="ascii.csv")
        return

    path = make_path(filename)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.write(path, format="ascii.csv", overwrite=overwrite)
    log.info(f"Wrote {len(table)} rows to {path}")


@dataclass(frozen=True)
class SweepSpec:
    """
    Grid of one parameter of a balanced or rotated array.

    Parameters
    ----------
    variable : {"area", "height", "length", "bandwidth"}
        Swept parameter. Areas vary L'_2 at fixed ``H``, bandwidths vary the
        bandwidth of both photons.
    start, stop : float
        Grid bounds in SI units.
    points : int
        Number of grid nodes.
    kind : `~GravBell.arrays.ArrayKind` or str
        Array type. Default is Franson.
    quantities : tuple of str
        Computed quantities among `QUANTITIES`.
    L2p, H : float
        Fixed proper length and height in m.
    offset : float
        Post-selection offset of balanced arrays in s.
    """

    variable: str
    start: float
    stop: float
    points: int
    kind: ArrayKind = ArrayKind.FRANSON
    quantities: tuple = DEFAULT_QUANTITIES
    L2p: float = 1e4
    H: float = 1e4
    offset: float = 0.0

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(
                f"unknown sweep variable {self.variable!r}, choose among {list(VARIABLES)}"
            )
        if not self.start < self.stop:
            raise ValueError(f"start {self.start} must be smaller than stop {self.stop}")
        if int(self.points) != self.points or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, given {self.points}")
        unknown = set(self.quantities) - set(QUANTITIES)
        if unknown:
            raise ValueError(f"unknown quantities {sorted(unknown)}, choose among {QUANTITIES}")
        if self.variable == "area" and not self.H > 0:
            raise ValueError("area sweeps need a positive height H")
        object.__setattr__(self, "kind", ArrayKind.from_name(self.kind))
        if self.kind.is_rotated and self.offset != 0:
            raise ValueError(f"rotated arrays take no post-selection offset, given {self.offset} s")
        object.__setattr__(self, "quantities", tuple(self.quantities))

    @property
    def column(self):
        return VARIABLES[self.variable][0]

    @property
    def axis(self):
        """Grid nodes as a `~gammapy.maps.MapAxis`."""
        return MapAxis.from_nodes(
            np.linspace(self.start, self.stop, int(self.points)),
            name=self.variable,
            unit=VARIABLES[self.variable][1],
            interp="lin",
        )


class SweepMaker:
    """
    Evaluate delays, probabilities and CHSH functionals along a `SweepSpec`.

    Parameters
    ----------
    spec : `SweepSpec`
        The grid.
    model : `~GravBell.spacetime.GravityModel`, optional
        Gravity model. Default is g = 9.81 m/s^2.
    left, right : `~GravBell.spectra.GaussianSpectrum`, optional
        Photon spectra. Default is 806 nm and 706 nm with 644.8 nm bandwidth.
    phases : `~GravBell.quantum.PhasePair`
        Local phases of the probabilities. Default is (0, 0).
    """

    def __init__(self, spec, model=None, left=None, right=None, phases=PhasePair()):
        if not isinstance(spec, SweepSpec):
            raise TypeError("spec must be instance of SweepSpec")
        self.spec = spec
        self.model = GravityModel() if model is None else model
        if left is None:
            left = GaussianSpectrum.from_bandwidth(
                VISIBLE_WAVELENGTHS[0], FIGURE_BANDWIDTHS[-1], self.model
            )
        if right is None:
            right = GaussianSpectrum.from_bandwidth(
                VISIBLE_WAVELENGTHS[1], FIGURE_BANDWIDTHS[-1], self.model
            )
        if spec.variable == "bandwidth" and (left.lambda0 is None or right.lambda0 is None):
            raise ValueError("bandwidth sweeps need spectra built from wavelengths")
        self.left = left
        self.right = right
        self.phases = phases

    def geometry(self, value):
        L2p, H = self.spec.L2p, self.spec.H
        if self.spec.variable == "area":
            L2p = value / H
        elif self.spec.variable == "height":
            H = value
        elif self.spec.variable == "length":
            L2p = value

        kind = self.spec.kind
        if kind.is_rotated:
            return rotated_balanced_geometry(kind, L2p, H, self.model)
        return balance_geometry(kind, L2p, H, self.spec.offset, self.model)

    def spectra(self, value):
        if self.spec.variable != "bandwidth":
            return self.left, self.right
        return tuple(
            GaussianSpectrum.from_bandwidth(spectrum.lambda0, value, self.model)
            for spectrum in (self.left, self.right)
        )

    def evaluate(self, value):
        """Row of the table at the grid value ``value``."""
        delays = path_proper_times(self.geometry(value), self.model)
        d12, d1p2p = delays.delta_1_2, delays.delta_1p_2p
        left, right = self.spectra(value)
        widths = (left.sigma, right.sigma)
        frequencies = (left.omega_bar, right.omega_bar)

        row = {"delta_tau_s": d12, "delta_tau_p_s": d1p2p}
        quantities = self.spec.quantities
        if "visibility" in quantities:
            row["visibility"] = float(visibility(d12, d1p2p, *widths))
        if "probabilities" in quantities:
            probabilities = probability_gaussian(d12, d1p2p, left, right, self.phases)
            row.update(probabilities.to_dict())
            row["E"] = probabilities.correlation
        if "sigma" in quantities:
            row["sigma"] = float(sigma_gaussian(d12, d1p2p, *widths, *frequencies))
        if "sigma_classical" in quantities:
            row["sigma_classical"] = float(sigma_classical(d12, d1p2p, *widths, *frequencies))
        if "sigma_compensated" in quantities:
            row["sigma_compensated"] = float(sigma_phase_compensated(d12, d1p2p, *widths))
        return row

    def run(self):
        """
        Evaluate every grid node in grid order.

        Returns
        -------
        table : `~astropy.table.Table`
            One row per node with columns ``index``, the swept variable and the
            requested quantities.
        """
        spec = self.spec
        axis = spec.axis
        log.info(
            f"Sweeping {spec.variable} of {spec.kind.value} array over {axis.nbin} nodes"
        )
        values = axis.center.to_value(VARIABLES[spec.variable][1])
        rows = [self.evaluate(float(value)) for value in values]

        table = Table()
        table["index"] = np.arange(len(values))
        table[spec.column] = values
        table[spec.column].unit = VARIABLES[spec.variable][1]
        for name in rows[0]:
            table[name] = [row[name] for row in rows]
        for name in ("delta_tau_s", "delta_tau_p_s"):
            table[name].unit = u.s
        table.meta.update({"kind": spec.kind.value, "g": self.model.g, "c": self.model.c})
        return table


def _visible_spectra(delta_lambda, model):
    return tuple(
        GaussianSpectrum.from_bandwidth(wavelength, delta_lambda, model)
        for wavelength in VISIBLE_WAVELENGTHS
    )


def _spdc_spectra(model):
    return tuple(
        GaussianSpectrum.from_bandwidth(wavelength, delta_lambda, model)
        for wavelength, delta_lambda in SPDC_SOURCE
    )


class FigureMaker:
    """
    Tables behind the figures of detection probabilities and CHSH functionals.

    Parameters
    ----------
    name : str
        Figure name, one of `FIGURES`.
    model : `~GravBell.spacetime.GravityModel`, optional
        Gravity model. Default is g = 9.81 m/s^2.
    points : int
        Number of area nodes. Default is 201.
    broad_bandwidth : float
        Largest bandwidth of the visible source in m. Default is 644.8 nm.
    """

    def __init__(self, name, model=None, points=201, broad_bandwidth=FIGURE_BANDWIDTHS[-1]):
        if name not in FIGURES:
            raise UnknownFigure(name, FIGURES)
        self.name = name
        self.model = GravityModel() if model is None else model
        self.points = points
        self.bandwidths = FIGURE_BANDWIDTHS[:-1] + (broad_bandwidth,)

    def run(self):
        log.info(f"Building figure {self.name}")
        table = getattr(self, FIGURES[self.name])()
        table["index"] = np.arange(len(table))
        table.meta["figure"] = self.name
        return table

    def _area_sweep(self, kind, quantities, left, right, stop, points=None, **columns):
        spec = SweepSpec(
            variable="area",
            start=0.0,
            stop=stop,
            points=self.points if points is None else points,
            kind=kind,
            quantities=quantities,
            H=FIGURE_HEIGHT,
        )
        table = SweepMaker(spec, self.model, left, right).run()
        for position, (name, value) in enumerate(columns.items()):
            table.add_column(value, name=name, index=2 + position)
        return table

    def _probability_figure(self, kind):
        tables = [
            self._area_sweep(
                kind,
                ("visibility", "probabilities"),
                *_visible_spectra(delta_lambda, self.model),
                FIGURE_AREA_MAX,
                delta_lambda_m=delta_lambda,
            )
            for delta_lambda in self.bandwidths
        ]
        table = vstack(tables, metadata_conflicts="silent")
        table.keep_columns(
            ["index", "area_m2", "delta_lambda_m", "delta_tau_s", "visibility", "p_pp"]
        )
        return table

    def fig3a(self):
        return self._probability_figure(ArrayKind.FRANSON)

    def fig3b(self):
        return self._probability_figure(ArrayKind.HUGGED_ROTATED)

    def fig4(self):
        bandwidths = MapAxis.from_nodes(
            np.linspace(20e-9, 700e-9, 69), name="bandwidth", unit="m", interp="lin"
        )
        tables = []
        for delta_lambda in bandwidths.center.to_value("m"):
            left, right = _visible_spectra(delta_lambda, self.model)
            tables.append(
                self._area_sweep(
                    ArrayKind.FRANSON,
                    ("sigma",),
                    left,
                    right,
                    FIGURE_AREA_MAX,
                    points=101,
                    delta_lambda_m=delta_lambda,
                    critical_area_m2=self._critical_area(left, right),
                )
            )
        return vstack(tables, metadata_conflicts="silent")

    def fig5(self):
        left, right = _visible_spectra(self.bandwidths[-1], self.model)
        heights = MapAxis.from_nodes(np.linspace(0, 2e4, 41), name="height", unit="m", interp="lin")
        tables = []
        for height in heights.center.to_value("m"):
            spec = SweepSpec(
                variable="length",
                start=0.0,
                stop=2e4,
                points=41,
                quantities=("visibility", "sigma"),
                H=height,
            )
            table = SweepMaker(spec, self.model, left, right).run()
            table.add_column(height, name="height_m", index=2)
            table.add_column(np.asarray(table["length_m"]) * height, name="area_m2", index=3)
            tables.append(table)
        return vstack(tables, metadata_conflicts="silent")

    def _spdc_figure(self, quantities, keep):
        left, right = _spdc_spectra(self.model)
        tables = [
            self._area_sweep(kind, quantities, left, right, SPDC_AREA_MAX, array=label)
            for kind, label in (
                (ArrayKind.FRANSON, "balanced"),
                (ArrayKind.HUGGED_ROTATED, "rotated"),
            )
        ]
        table = vstack(tables, metadata_conflicts="silent")
        table.keep_columns(["index", "area_m2", "array", "delta_tau_s", "visibility"] + keep)
        return table

    def fig6a(self):
        return self._spdc_figure(("visibility", "probabilities"), ["p_pp"])

    def fig6b(self):
        return self._spdc_figure(("visibility", "sigma"), ["sigma"])

    def sigma_area(self):
        tables = []
        for delta_lambda in self.bandwidths:
            left, right = _visible_spectra(delta_lambda, self.model)
            for kind, label in (
                (ArrayKind.FRANSON, "balanced"),
                (ArrayKind.HUGGED_ROTATED, "rotated"),
            ):
                tables.append(
                    self._area_sweep(
                        kind,
                        ("visibility", "sigma"),
                        left,
                        right,
                        FIGURE_AREA_MAX,
                        delta_lambda_m=delta_lambda,
                        array=label,
                    )
                )
        return vstack(tables, metadata_conflicts="silent")

    def _critical_area(self, left, right):
        try:
            return critical_area(left.sigma, right.sigma, self.model)
        except ZeroGravity:
            return np.inf


FIGURES = {
    "fig3a": "fig3a",
    "fig3b": "fig3b",
    "fig4": "fig4",
    "fig5": "fig5",
    "fig6a": "fig6a",
    "fig6b": "fig6b",
    "sigma-area": "sigma_area",
}
