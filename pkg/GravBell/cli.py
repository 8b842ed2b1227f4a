"""Command-line front end: array delays, probabilities, CHSH functionals, figures and sweeps."""
import argparse
import sys
import numpy as np
import astropy.units as u
from astropy.table import Table
from loguru import logger as log
from GravBell.arrays import (
    PATHS,
    ArrayKind,
    classify_post_selection,
    path_proper_times,
)
from GravBell.chsh import (
    compensated_settings,
    critical_area,
    sigma_balanced,
    sigma_classical,
    sigma_gaussian,
    sigma_general,
    sigma_phase_compensated,
    sigma_rotated_hugged,
)
from GravBell.config import GravBellConfig
from GravBell.makers import FIGURES, FigureMaker, SweepMaker, SweepSpec, write_csv
from GravBell.quantum import (
    DetectionProbabilities,
    PhasePair,
    probability_amplitude_oracle,
    probability_gaussian,
    probability_hugged_balanced,
    spectral_average,
    visibility,
    visibility_regime,
)
from GravBell.spectra import SpectralGrid
from GravBell.utils import GravBellError, NumericalFailure, ZeroGravity

__all__ = ["main", "build_parser"]

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def quantity(unit):
    """Argument type accepting plain SI numbers or astropy quantity strings such as "10 km"."""
    unit = u.Unit(unit)

    def parse(text):
        try:
            return float(text)
        except ValueError:
            pass
        try:
            return u.Quantity(text).to_value(unit)
        except (TypeError, ValueError, u.UnitsError):
            raise argparse.ArgumentTypeError(f"{text!r} is not a number or a quantity in {unit}")

    parse.__name__ = f"quantity in {unit}"
    return parse


def _common_options():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=quantity("m/s2"), default=argparse.SUPPRESS,
                        help="gravitational acceleration (default 9.81 m/s2)")
    common.add_argument("--c", type=quantity("m/s"), default=argparse.SUPPRESS,
                        help="speed of light (default 299792458 m/s)")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output CSV file (default: standard output)")
    common.add_argument("--config", default=argparse.SUPPRESS, help="YAML configuration file")
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="log debug messages on standard error")
    return common


def _geometry_options(parser):
    parser.add_argument("--kind", choices=[k.value for k in ArrayKind], default=argparse.SUPPRESS)
    parser.add_argument("--l2p", type=quantity("m"), default=argparse.SUPPRESS,
                        help="proper length L'2")
    parser.add_argument("--height", type=quantity("m"), default=argparse.SUPPRESS,
                        help="proper height H")
    parser.add_argument("--dtau", type=quantity("s"), default=argparse.SUPPRESS,
                        help="post-selection offset of balanced arrays")


def _source_options(parser):
    parser.add_argument("--lambda1", type=quantity("m"), default=argparse.SUPPRESS,
                        help="central wavelength of the left photon (default 806 nm)")
    parser.add_argument("--lambda2", type=quantity("m"), default=argparse.SUPPRESS,
                        help="central wavelength of the right photon (default 706 nm)")
    parser.add_argument("--dlambda", type=quantity("m"), default=argparse.SUPPRESS,
                        help="bandwidth of both photons")
    parser.add_argument("--dlambda1", type=quantity("m"), default=argparse.SUPPRESS)
    parser.add_argument("--dlambda2", type=quantity("m"), default=argparse.SUPPRESS)
    parser.add_argument("--spectrum-file", default=argparse.SUPPRESS,
                        help="tabulated joint spectrum with header 'omega1 omega2 density'")


def _phase_options(parser):
    for name in ("alpha", "beta", "alpha-p", "beta-p"):
        parser.add_argument(f"--{name}", type=quantity("rad"), default=argparse.SUPPRESS)


def build_parser():
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="gravbell",
        description="Franson and Hugged interferometric arrays in a weak gravitational field.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    delays = sub.add_parser("delays", parents=[common], help="path proper times and delays")
    _geometry_options(delays)
    delays.add_argument("--window", type=quantity("s"), default=argparse.SUPPRESS,
                        help="coincidence window (default 1e-18 s)")

    probabilities = sub.add_parser("probabilities", parents=[common],
                                   help="joint detection probabilities")
    _geometry_options(probabilities)
    _source_options(probabilities)
    _phase_options(probabilities)
    probabilities.add_argument(
        "--method", choices=["gaussian", "quadrature", "oracle", "hugged-balanced"],
        default="gaussian",
    )

    chsh = sub.add_parser("chsh", parents=[common], help="CHSH functional")
    _geometry_options(chsh)
    _source_options(chsh)
    _phase_options(chsh)
    chsh.add_argument(
        "--method",
        choices=["balanced", "rotated", "compensated", "gaussian", "general", "classical"],
        default="gaussian",
    )

    figure = sub.add_parser(
        "figure",
        parents=[common],
        help="tables of the probability and CHSH figures",
        description=(
            "Figures use 806 nm and 706 nm photons with bandwidths 161.2, 322.4 and 644.8 nm, "
            "or the 3300 nm / 995 nm SPDC source. The largest bandwidth is quoted as 644.8 nm "
            "in the figure captions and as 644.2 nm in the width table; --bandwidth selects it."
        ),
    )
    figure.add_argument("name", choices=list(FIGURES))
    figure.add_argument("--bandwidth", type=quantity("m"), default=644.8e-9,
                        help="largest bandwidth of the visible source (default 644.8 nm)")
    figure.add_argument("--points", type=int, default=201, help="number of area nodes")

    sweep = sub.add_parser("sweep", parents=[common], help="one-parameter sweep")
    _geometry_options(sweep)
    _source_options(sweep)
    _phase_options(sweep)
    sweep.add_argument("--variable", choices=["area", "height", "length", "bandwidth"],
                       default=argparse.SUPPRESS)
    sweep.add_argument("--start", type=float, default=argparse.SUPPRESS)
    sweep.add_argument("--stop", type=float, default=argparse.SUPPRESS)
    sweep.add_argument("--points", type=int, default=argparse.SUPPRESS)
    sweep.add_argument("--quantities", default=argparse.SUPPRESS,
                       help="comma-separated subset of visibility, probabilities, sigma, "
                            "sigma_classical, sigma_compensated")

    critical = sub.add_parser("critical-area", parents=[common], help="critical proper area")
    _source_options(critical)
    return parser


def _configure_logging(verbose):
    log.remove()
    log.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


def _load_config(args):
    config = GravBellConfig.read(getattr(args, "config", None))
    overrides = {
        "g": ("gravity", "g"),
        "c": ("gravity", "c"),
        "kind": ("geometry", "kind"),
        "l2p": ("geometry", "L2p"),
        "height": ("geometry", "H"),
        "dtau": ("geometry", "offset"),
        "window": ("geometry", "window"),
        "alpha": ("phases", "alpha"),
        "beta": ("phases", "beta"),
        "alpha_p": ("phases", "alpha_p"),
        "beta_p": ("phases", "beta_p"),
        "variable": ("sweep", "variable"),
        "start": ("sweep", "start"),
        "stop": ("sweep", "stop"),
        "points": ("sweep", "points"),
        "spectrum_file": ("source", "tabulated"),
    }
    for flag, (section, entry) in overrides.items():
        if flag == "points" and args.command == "figure":
            continue
        if hasattr(args, flag):
            config.add_entry(section, entry, getattr(args, flag))
    if hasattr(args, "quantities"):
        config.add_entry("sweep", "quantities", args.quantities.split(","))

    source = config.source
    for flag, side, entry in (
        ("lambda1", "left", "wavelength"),
        ("lambda2", "right", "wavelength"),
        ("dlambda", "left", "bandwidth"),
        ("dlambda", "right", "bandwidth"),
        ("dlambda1", "left", "bandwidth"),
        ("dlambda2", "right", "bandwidth"),
    ):
        if hasattr(args, flag):
            source[side][entry] = getattr(args, flag)
    return config


def _write_values(values, out):
    table = Table(rows=[[name, _format(value)] for name, value in values.items()],
                  names=("quantity", "value"), dtype=(str, str))
    write_csv(table, out)


def _format(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, str):
        return value
    return format(float(value), ".12g")


def cmd_delays(args, config):
    model = config.gravity_model()
    geometry = config.array_geometry()
    delays = path_proper_times(geometry, model)
    report = classify_post_selection(delays, float(config.geometry["window"]))

    values = {
        "kind": geometry.kind.value,
        "tau_g1_s": delays.tau_g1,
        "tau_g1p_s": delays.tau_g1p,
        "tau_g2_s": delays.tau_g2,
        "tau_g2p_s": delays.tau_g2p,
    }
    values.update({f"{name}_s": value for name, value in delays.pairwise().items()})
    values.update({f"delay_line_{path}_s": delays.geometric(path) for path in PATHS})
    values["delta_L_left_m"], values["delta_L_right_m"] = geometry.delta_L
    values["constraint_residual_s"] = delays.constraint_residual
    values["window_s"] = report.window
    values["feasible"] = report.feasible
    values["local_post_selection"] = report.local
    _write_values(values, getattr(args, "out", None))


def _spectral_context(config):
    return path_proper_times(config.array_geometry(), config.gravity_model())


def cmd_probabilities(args, config):
    delays = _spectral_context(config)
    settings = config.phase_settings()
    phases = PhasePair(settings.alpha, settings.beta)
    d12, d1p2p = delays.delta_1_2, delays.delta_1p_2p

    if args.method in ("gaussian", "hugged-balanced"):
        left, right = config.spectra()
        if args.method == "gaussian":
            probabilities = probability_gaussian(d12, d1p2p, left, right, phases)
        else:
            probabilities = probability_hugged_balanced(d1p2p, left, right, phases)
        vis = visibility(d12, d1p2p, left.sigma, right.sigma)
        regime = visibility_regime(max(abs(d12), abs(d1p2p)), left.sigma, right.sigma)
    else:
        regime = ""
        spectrum = config.joint_spectrum()
        if args.method == "quadrature":
            chi = spectral_average(d12, d1p2p, spectrum, **config.quadrature)
            probabilities = DetectionProbabilities.from_characteristic(chi, phases)
            vis = abs(chi)
        else:
            grid = SpectralGrid.from_spectrum(spectrum, **config.oracle)
            offset = None if delays.kind.is_hugged else float(config.geometry["offset"])
            probabilities = probability_amplitude_oracle(delays, offset, phases, grid)
            vis = np.nan

    values = {"method": args.method, "delta_tau_s": d12, "delta_tau_p_s": d1p2p, "visibility": vis}
    if regime:
        values["regime"] = regime
    values.update(probabilities.to_dict())
    values["E"] = probabilities.correlation
    _write_values(values, getattr(args, "out", None))


def cmd_chsh(args, config):
    delays = _spectral_context(config)
    d12, d1p2p = delays.delta_1_2, delays.delta_1p_2p
    settings = config.phase_settings()
    method = args.method
    analyzers = {}

    if method == "general":
        result = sigma_general(d12, d1p2p, config.joint_spectrum(), settings, **config.quadrature)
        value, vis = result.sigma_value, result.visibility
    else:
        left, right = config.spectra()
        widths = (left.sigma, right.sigma)
        frequencies = (left.omega_bar, right.omega_bar)
        vis = visibility(d12, d1p2p, *widths)
        if method == "balanced":
            value = sigma_balanced(d1p2p, *widths, *frequencies)
        elif method == "rotated":
            value = sigma_rotated_hugged(d1p2p, *widths, *frequencies)
        elif method == "compensated":
            analyzers = vars(compensated_settings(d12, d1p2p, *frequencies, settings))
            value = sigma_phase_compensated(d12, d1p2p, *widths, settings)
        elif method == "classical":
            value = sigma_classical(d12, d1p2p, *widths, *frequencies)
        else:
            value = sigma_gaussian(d12, d1p2p, *widths, *frequencies)

    values = {
        "method": method,
        "delta_tau_s": d12,
        "delta_tau_p_s": d1p2p,
        "visibility": vis,
        "sigma": value,
        "violated": abs(float(value)) > 2.0,
    }
    values.update({f"analyzer_{name}_rad": phase for name, phase in analyzers.items()})
    _write_values(values, getattr(args, "out", None))


def cmd_figure(args, config):
    maker = FigureMaker(
        args.name,
        model=config.gravity_model(),
        points=args.points,
        broad_bandwidth=args.bandwidth,
    )
    write_csv(maker.run(), getattr(args, "out", None))


def cmd_sweep(args, config):
    sweep = config.sweep
    geometry = config.geometry
    spec = SweepSpec(
        variable=sweep["variable"],
        start=float(sweep["start"]),
        stop=float(sweep["stop"]),
        points=int(sweep["points"]),
        kind=geometry["kind"],
        quantities=tuple(q.strip() for q in sweep["quantities"]),
        L2p=float(geometry["L2p"]),
        H=float(geometry["H"]),
        offset=float(geometry["offset"]),
    )
    settings = config.phase_settings()
    maker = SweepMaker(
        spec, config.gravity_model(), *config.spectra(), PhasePair(settings.alpha, settings.beta)
    )
    write_csv(maker.run(), getattr(args, "out", None))


def cmd_critical_area(args, config):
    left, right = config.spectra()
    values = {"sigma1_rad_s": left.sigma, "sigma2_rad_s": right.sigma}
    try:
        values["critical_area_m2"] = critical_area(left.sigma, right.sigma, config.gravity_model())
    except ZeroGravity as error:
        values["critical_area_m2"] = np.inf
        values["note"] = error.message
    _write_values(values, getattr(args, "out", None))


COMMANDS = {
    "delays": cmd_delays,
    "probabilities": cmd_probabilities,
    "chsh": cmd_chsh,
    "figure": cmd_figure,
    "sweep": cmd_sweep,
    "critical-area": cmd_critical_area,
}


def main(argv=None):
    """
    Run the command line and return its exit code.

    Exit codes are 0 on success, 2 on invalid arguments and 3 on numerical failure.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code

    _configure_logging(getattr(args, "verbose", False))
    try:
        config = _load_config(args)
        COMMANDS[args.command](args, config)
    except NumericalFailure as error:
        log.error(error.message)
        print(f"gravbell: numerical failure: {error.message}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (GravBellError, ValueError, TypeError, OSError) as error:
        message = getattr(error, "message", str(error))
        print(f"gravbell {args.command}: error: {message}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
