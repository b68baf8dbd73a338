"""
This file contains the command-line interface. Each subcommand evaluates one
of the library operations on a grid and writes the result as CSV or JSON.

    ptscatter coeffs --lambda 3.5 --k_max 5
    ptscatter transmission --lambda 3.5 --re_min -3 --re_max 3 --im_min -3 --im_max 3
    ptscatter potential --lambda 0.5+2i
    ptscatter poles --lambda 0.5+2i --n_max 4 --verify
    ptscatter wavefunction --lambda 3.5 --series 2 --n 1 --parts abs,re
    ptscatter susy --lambda 2.5 --series 2 --n 6 --format json --out partner.json
    ptscatter smatrix --lambda 0.75 --k 1.5
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np
from termcolor import cprint
from tqdm import tqdm

from ptscatter.config import DEFAULTS, use_config
from ptscatter.errors import ConvergenceError, DomainError, FormOverflowError, GridError, RegimeError
from ptscatter.numerics import Grid
from ptscatter.poles import PoleKind, enumerate_poles, refine_pole, unique_poles
from ptscatter.scattering import (
    PotentialSpec,
    coefficients,
    potential_value,
    s_matrix,
    transfer_matrix,
    transmission_modulus,
)
from ptscatter.states import evaluate, state
from ptscatter.susy import PartnerModel, evaluate_model

# Seed offset used by `poles --verify`
VERIFY_OFFSET = 0.1 + 0.1j
PARTS = ("abs", "re", "im")


@dataclass
class OutputTable:
    """
    Column names, row-major values and header metadata of one command result.
    Complex cells become <name>_re,<name>_im columns in CSV and [re, im] pairs in JSON.
    """

    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def _complex_columns(self):
        return [any(isinstance(row[i], complex) for row in self.rows) for i in range(len(self.columns))]

    def to_csv(self):
        buffer = io.StringIO()
        for key, value in self.metadata.items():
            buffer.write(f"# {key}: {_format_metadata(value)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        is_complex = self._complex_columns()
        header = []
        for name, flag in zip(self.columns, is_complex):
            header.extend([f"{name}_re", f"{name}_im"] if flag else [name])
        writer.writerow(header)
        for row in self.rows:
            cells = []
            for value, flag in zip(row, is_complex):
                if flag:
                    value = complex(value) if value is not None else complex(math.nan, math.nan)
                    cells.extend([repr(value.real), repr(value.imag)])
                else:
                    cells.append(_format_cell(value))
            writer.writerow(cells)
        return buffer.getvalue()

    def to_json(self):
        data = {
            "metadata": {key: _json_value(value) for key, value in self.metadata.items()},
            "columns": list(self.columns),
            "rows": [[_json_value(value) for value in row] for row in self.rows],
        }
        return json.dumps(data, indent=2) + "\n"

    def render(self, output_format):
        if output_format == "json":
            return self.to_json()
        return self.to_csv()

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["columns"], data["rows"], data["metadata"])

    @classmethod
    def from_csv(cls, text):
        """
        Read a table written by to_csv; <name>_re,<name>_im column pairs become complex cells.
        """
        metadata = {}
        lines = []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                metadata[key] = value
            else:
                lines.append(line)
        reader = csv.reader(lines)
        header = next(reader)

        columns, layout = [], []
        i = 0
        while i < len(header):
            name = header[i]
            if name.endswith("_re") and i + 1 < len(header) and header[i + 1] == name[:-3] + "_im":
                columns.append(name[:-3])
                layout.append((i, i + 1))
                i += 2
            else:
                columns.append(name)
                layout.append((i, None))
                i += 1

        rows = []
        for cells in reader:
            row = []
            for re_index, im_index in layout:
                if im_index is None:
                    row.append(_parse_cell(cells[re_index]))
                else:
                    row.append(complex(float(cells[re_index]), float(cells[im_index])))
            rows.append(row)
        return cls(columns, rows, metadata)


def _parse_cell(text):
    if text == "":
        return None
    for convert in (int, float):
        try:
            return convert(text)
        except ValueError:
            pass
    return text


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _format_metadata(value):
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}i"
    return str(value)


def _json_value(value):
    if isinstance(value, complex):
        return [_json_value(value.real), _json_value(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (np.integer, np.floating)):
        return _json_value(value.item())
    return value


def parse_complex(text):
    """
    Parse '1.5', '2-0.5i' or '-3i'; 'j' is accepted as the imaginary unit too.
    """
    try:
        return complex(str(text).strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Cannot parse a complex number from '{text}'") from None


def _progress(iterable, desc):
    return tqdm(iterable, desc=desc, file=sys.stderr, leave=False, disable=None)


def _x_grid(args):
    cli = DEFAULTS["cli"]
    x_min = cli["x_min"] if args.x_min is None else args.x_min
    x_max = cli["x_max"] if args.x_max is None else args.x_max
    steps = cli["steps"] if args.steps is None else args.steps
    return Grid.from_count(x_min, x_max, steps)


def cmd_coeffs(spec, args):
    """
    Reflection and transmission coefficients on a real k sweep; k = 0 is skipped.
    """
    cli = DEFAULTS["cli"]
    k_min = cli["k_min"] if args.k_min is None else args.k_min
    k_max = cli["k_max"] if args.k_max is None else args.k_max
    steps = cli["steps"] if args.steps is None else args.steps
    if not k_max > k_min or steps < 1:
        raise GridError(f"Need k_max > k_min and steps >= 1, got k in [{k_min}, {k_max}] with {steps} steps")

    table = OutputTable(["k", "T", "R"], metadata={"lambda": spec.lam, "regime": spec.regime.value})
    for k in _progress(np.linspace(k_min, k_max, steps + 1), "coeffs"):
        if k == 0:
            continue
        R, T = coefficients(spec, float(k))
        table.rows.append([float(k), T, R])
    return table


def cmd_transmission(spec, args):
    """
    |t(k)| on a rectangle of complex momenta; poles of S are written as inf.
    """
    cli = DEFAULTS["cli"]
    bounds = {}
    for name in ("re_min", "re_max", "im_min", "im_max"):
        value = getattr(args, name)
        bounds[name] = cli[f"map_{name}"] if value is None else value
    steps = cli["map_steps"] if args.steps is None else args.steps
    if not (bounds["re_max"] > bounds["re_min"] and bounds["im_max"] > bounds["im_min"]) or steps < 1:
        raise GridError(
            f"Need re_max > re_min, im_max > im_min and steps >= 1, got Re k in [{bounds['re_min']}, {bounds['re_max']}], "
            f"Im k in [{bounds['im_min']}, {bounds['im_max']}] with {steps} steps"
        )

    re_values = np.linspace(bounds["re_min"], bounds["re_max"], steps + 1)
    im_values = np.linspace(bounds["im_min"], bounds["im_max"], steps + 1)
    table = OutputTable(["k_re", "k_im", "abs_t"], metadata={"lambda": spec.lam, "regime": spec.regime.value})
    points = [(float(re), float(im)) for im in im_values for re in re_values]
    for re, im in _progress(points, "transmission"):
        table.rows.append([re, im, float(transmission_modulus(spec, complex(re, im)))])
    return table


def cmd_potential(spec, args):
    """
    Potential profile V(x) on the x window.
    """
    table = OutputTable(["x", "V"], metadata={"lambda": spec.lam, "regime": spec.regime.value, "coupling": spec.coupling.real})
    nodes = _x_grid(args).nodes
    for x, value in zip(nodes, potential_value(spec, nodes)):
        table.rows.append([float(x), complex(value)])
    return table


def cmd_poles(spec, args):
    """
    Pole table of both series; --verify adds the Newton-refined position from a perturbed seed.
    """
    records = enumerate_poles(spec, args.n_max)
    if not args.all:
        records = unique_poles(records)

    columns = ["series", "n", "k", "E", "kind", "duplicate_of"]
    if args.verify:
        columns += ["k_refined", "dk"]
    table = OutputTable(columns, metadata={"lambda": spec.lam, "regime": spec.regime.value})

    for record in _progress(records, "poles"):
        duplicate = f"{record.duplicate_of[0]}:{record.duplicate_of[1]}" if record.duplicate_of else ""
        row = [record.series, record.n, record.k, record.energy, record.kind.value, duplicate]
        if args.verify:
            if record.kind in (PoleKind.NULL_AT_ORIGIN, PoleKind.ZERO_OF_S):
                row += [complex(math.nan, math.nan), math.nan]
            else:
                refined = refine_pole(spec, record.k + VERIFY_OFFSET)
                row += [refined, abs(refined - record.k)]
        table.rows.append(row)
    return table


def cmd_wavefunction(spec, args):
    """
    Samples of the n-th state of a series; rows beyond the floating range are flagged.
    """
    parts = [part.strip() for part in args.parts.split(",") if part.strip()]
    unknown = [part for part in parts if part not in PARTS]
    if unknown or not parts:
        raise GridError(f"--parts takes a comma separated subset of {','.join(PARTS)}, got '{args.parts}'")

    form = state(spec, args.series, args.n)
    table = OutputTable(
        ["x"] + [f"psi_{part}" for part in parts] + ["overflow"],
        metadata={
            "lambda": spec.lam,
            "regime": spec.regime.value,
            "series": args.series,
            "n": args.n,
            "energy": spec.energy(args.series, args.n),
        },
    )
    for x in _progress(_x_grid(args).nodes, "wavefunction"):
        try:
            value = evaluate(form, float(x))
            overflow = 0
        except FormOverflowError:
            value = complex(math.nan, math.nan)
            overflow = 1
        values = {"abs": abs(value), "re": value.real, "im": value.imag}
        table.rows.append([float(x)] + [values[part] for part in parts] + [overflow])
    return table


def cmd_susy(spec, args):
    """
    Partner potential and partner ground state of the factorization by the n-th state of a series.
    """
    model = PartnerModel.from_state(spec, args.series, args.n)
    cprint(f"Factorization energy: {model.epsilon}", "cyan", file=sys.stderr)
    data = evaluate_model(model, _x_grid(args))
    columns = ["x", "V_re", "V_im", "V0_re", "V0_im", "psi_re", "psi_im", "psi_abs"]
    rows = np.column_stack([data[name] for name in columns])
    return OutputTable(
        columns,
        rows=[[float(value) for value in row] for row in rows],
        metadata={
            "lambda": spec.lam,
            "regime": spec.regime.value,
            "series": args.series,
            "n": args.n,
            "epsilon": model.epsilon,
        },
    )


def cmd_smatrix(spec, args):
    """
    Transfer matrix, S matrix, amplitudes and coefficients at a single momentum.
    """
    k = args.k
    T = transfer_matrix(spec, k)
    S = s_matrix(spec, k)
    r, t = S.s11, S.s12
    columns = ["k", "T11", "T12", "T21", "T22", "det_T", "S11", "S12", "S21", "S22", "r", "t", "R", "T"]
    row = [k, T.t11, T.t12, T.t21, T.t22, T.det, S.s11, S.s12, S.s21, S.s22, r, t, abs(r) ** 2, abs(t) ** 2]
    return OutputTable(columns, rows=[row], metadata={"lambda": spec.lam, "regime": spec.regime.value})


COMMANDS = {
    "coeffs": cmd_coeffs,
    "transmission": cmd_transmission,
    "potential": cmd_potential,
    "poles": cmd_poles,
    "wavefunction": cmd_wavefunction,
    "susy": cmd_susy,
    "smatrix": cmd_smatrix,
}


def _add_grid_arguments(parser):
    cli = DEFAULTS["cli"]
    parser.add_argument("--x_min", type=float, default=None, metavar="X", help=f"Left end of the x window (default: {cli['x_min']})")
    parser.add_argument("--x_max", type=float, default=None, metavar="X", help=f"Right end of the x window (default: {cli['x_max']})")
    parser.add_argument("--steps", type=int, default=None, metavar="N", help=f"Number of grid intervals (default: {cli['steps']})")


def _add_state_arguments(parser):
    parser.add_argument("--series", "-s", type=int, choices=(1, 2), default=2, help="Pole series of the state (default: 2)")
    parser.add_argument("--n", "-n", type=int, default=0, metavar="N", help="Index of the state in its series (default: 0)")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--lambda",
        "-l",
        dest="lam",
        type=str,
        required=True,
        metavar="L",
        help="Potential parameter: real (e.g. 3.5) or 0.5+<ell>i for the high barrier (required)",
    )
    common.add_argument(
        "--config_path",
        "-c",
        type=str,
        default=None,
        help="YAML file overriding the packaged numerical settings (default: none)",
    )
    common.add_argument(
        "--format",
        "-f",
        type=str,
        choices=("csv", "json"),
        default="csv",
        help="Output format (default: csv)",
    )
    common.add_argument(
        "--out",
        "-o",
        type=str,
        default=None,
        metavar="PATH",
        help="Output file (default: standard output)",
    )

    parser = argparse.ArgumentParser(
        prog="ptscatter",
        description="Scattering data, S-matrix poles, ladder states and SUSY partners of the hyperbolic Poschl-Teller potential.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    cli = DEFAULTS["cli"]
    coeffs = subparsers.add_parser("coeffs", parents=[common], help="Reflection and transmission coefficients R(k), T(k)")
    coeffs.add_argument("--k_min", type=float, default=None, metavar="K", help=f"Smallest momentum (default: {cli['k_min']})")
    coeffs.add_argument("--k_max", type=float, default=None, metavar="K", help=f"Largest momentum (default: {cli['k_max']})")
    coeffs.add_argument("--steps", type=int, default=None, metavar="N", help=f"Number of k intervals (default: {cli['steps']})")

    transmission = subparsers.add_parser("transmission", parents=[common], help="|t(k)| on a rectangle of complex momenta")
    transmission.add_argument("--re_min", type=float, default=None, metavar="K", help=f"Smallest Re k (default: {cli['map_re_min']})")
    transmission.add_argument("--re_max", type=float, default=None, metavar="K", help=f"Largest Re k (default: {cli['map_re_max']})")
    transmission.add_argument("--im_min", type=float, default=None, metavar="K", help=f"Smallest Im k (default: {cli['map_im_min']})")
    transmission.add_argument("--im_max", type=float, default=None, metavar="K", help=f"Largest Im k (default: {cli['map_im_max']})")
    transmission.add_argument("--steps", type=int, default=None, metavar="N", help=f"Number of intervals per axis (default: {cli['map_steps']})")

    potential = subparsers.add_parser("potential", parents=[common], help="Potential profile V(x)")
    _add_grid_arguments(potential)

    poles = subparsers.add_parser("poles", parents=[common], help="Analytic S-matrix poles and their classification")
    poles.add_argument("--n_max", "-n", type=int, default=6, metavar="N", help="Highest pole order (default: 6)")
    poles.add_argument("--verify", "-v", action="store_true", help="Refine each pole by Newton iteration and report |dk|")
    poles.add_argument("--all", "-a", action="store_true", help="Include series-1 records that duplicate a series-2 pole")

    wavefunction = subparsers.add_parser("wavefunction", parents=[common], help="Samples of a ladder state")
    _add_state_arguments(wavefunction)
    _add_grid_arguments(wavefunction)
    wavefunction.add_argument("--parts", "-p", type=str, default="abs,re,im", help="Comma separated parts to output (default: abs,re,im)")

    susy = subparsers.add_parser("susy", parents=[common], help="SUSY partner potential and its extra ground state")
    _add_state_arguments(susy)
    _add_grid_arguments(susy)

    smatrix = subparsers.add_parser("smatrix", parents=[common], help="T and S matrices at one momentum")
    smatrix.add_argument("--k", "-k", type=parse_complex, required=True, metavar="K", help="Complex momentum, e.g. 1.5 or 2-0.5i (required)")

    return parser


def write_table(table, output_format, out):
    text = table.render(output_format)
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w") as file:
        file.write(text)
    cprint(f"Saved {len(table.rows)} rows to {out}", "green", file=sys.stderr)


def main(argv=None):
    """
    Entry point. Exit codes: 0 success, 2 invalid arguments, 3 domain error, 4 non-convergence.
    """
    args = build_parser().parse_args(argv)
    for key, value in vars(args).items():
        cprint(f"{key}: {value}", "blue", file=sys.stderr)

    try:
        if args.config_path is not None:
            use_config(args.config_path)
        spec = PotentialSpec.parse(args.lam)
        cprint(f"Regime: {spec.describe()}", "cyan", file=sys.stderr)
        cprint(f"Running {args.command}...", "yellow", file=sys.stderr)
        table = COMMANDS[args.command](spec, args)
        write_table(table, args.format, args.out)
    except (RegimeError, GridError) as error:
        cprint(f"Invalid arguments: {error}", "red", file=sys.stderr)
        return 2
    except DomainError as error:
        cprint(f"Domain error: {error}", "red", file=sys.stderr)
        return 3
    except ConvergenceError as error:
        cprint(f"No convergence: {error}", "red", file=sys.stderr)
        return 4
    except OverflowError as error:
        cprint(f"Out of floating range: {error}", "red", file=sys.stderr)
        return 3
    except (OSError, ValueError) as error:
        cprint(f"Invalid arguments: {error}", "red", file=sys.stderr)
        return 2
    return 0
