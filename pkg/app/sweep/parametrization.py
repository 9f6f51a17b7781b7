"""Copyright (c) 2022 VIKTOR B.V.

Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated
documentation files (the "Software"), to deal in the Software without restriction, including without limitation the
rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit
persons to whom the Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all copies or substantial portions of the
Software.

VIKTOR B.V. PROVIDES THIS SOFTWARE ON AN "AS IS" BASIS, WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT
NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT
SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF
CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""
import argparse
import os
from typing import Dict
from typing import Tuple

from .constants import DEFAULT_EXPERIMENT
from .constants import DEFAULT_LEDGER_EA_RANGE
from .constants import DEFAULT_LOG_LEVEL
from .constants import DEFAULT_REFERENCE_POINTS
from .constants import EXPERIMENT_SWEEPS
from .constants import OUTPUT_DIR_ENV
from .constants import SWEEP_VARIABLES
from ..cavity.constants import DEFAULT_K_COUNT
from ..cavity.constants import RESONANCE_FLOOR
from ..errors import ValidationError
from ..experiments.constants import CTC_VARIANTS
from ..experiments.constants import DEFAULT_ALPHA
from ..experiments.constants import DEFAULT_CTC_VARIANT
from ..experiments.constants import DEFAULT_SEED
from ..experiments.constants import R1
from ..experiments.constants import THETA_PLUS
from ..interface.constants import ORACLE_DEFAULT_WIDTH
from ..interface.model import InterfaceTag
from ..interface.model import QConvention
from ..spinor.constants import NAMED_GATES

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
Q_CONVENTIONS = tuple(convention.value for convention in QConvention)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    outputs = common.add_argument_group("output")
    outputs.add_argument("--config", help="flat key=value file whose values become defaults; flags override it")
    outputs.add_argument("--json", help="write the JSON report here instead of stdout")
    outputs.add_argument("--csv", help="write the CSV rows here")
    outputs.add_argument("--outdir", help=f"directory for relative output paths (default ${OUTPUT_DIR_ENV})")
    outputs.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="worker processes")
    outputs.add_argument("--log-level", choices=LOG_LEVELS, default=DEFAULT_LOG_LEVEL)
    return common


def _add_cavity_point(parser: argparse.ArgumentParser, default_point: bool = False):
    """|k|/m, e|A|/m and m tau of a physical cavity (m = 1)."""
    defaults = (10.0, 10.0, 1.5) if default_point else (None, None, None)
    parser.add_argument("--k-over-m", type=float, default=defaults[0])
    parser.add_argument("--ea-over-m", type=float, default=defaults[1])
    parser.add_argument("--m-tau", type=float, default=defaults[2])
    parser.add_argument("--q-convention", choices=Q_CONVENTIONS, default=QConvention.SIGNED.value)


def _add_experiment_cavity(parser: argparse.ArgumentParser):
    parser.add_argument("--r", type=float, help="ideal cavity reflectivity R (default: unit-visibility R)")
    _add_cavity_point(parser)


def _add_spin_options(parser: argparse.ArgumentParser):
    parser.add_argument("--psi0", default="1,0", help="input spinor 'a,b' of complex literals")
    parser.add_argument("--momentum", type=float, default=1.0, help="|p|/m of the electron modes")


def _add_interface(parser: argparse.ArgumentParser):
    parser.add_argument("--p", type=float, default=1.0, help="|p|/m")
    parser.add_argument("--ea-over-m", type=float, default=3.0)
    parser.add_argument("--tag", choices=[tag.value for tag in InterfaceTag], help="one configuration (default all)")
    parser.add_argument("--p-sign", type=int, choices=(1, -1), default=1)
    parser.add_argument("--q-convention", choices=Q_CONVENTIONS, default=QConvention.SIGNED.value)


def _add_cavity(parser: argparse.ArgumentParser):
    _add_cavity_point(parser, default_point=True)
    parser.add_argument("--p-sign", type=int, choices=(1, -1), default=1)
    parser.add_argument("--interfaces", choices=("solve", "derived"), default="solve")
    parser.add_argument("--floor", type=float, default=RESONANCE_FLOOR, help="resonance floor on |denominator|")


def _add_sweep(parser: argparse.ArgumentParser):
    parser.add_argument("--variable", choices=SWEEP_VARIABLES, default="kOverM")
    parser.add_argument("--range", default="0.1:20:1024", help="start:stop:count")
    parser.add_argument("--experiment", choices=tuple(EXPERIMENT_SWEEPS), default=DEFAULT_EXPERIMENT)
    _add_experiment_cavity(parser)
    parser.add_argument("--theta", type=float)
    parser.add_argument("--xi", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--gate-a")
    parser.add_argument("--gate-b")
    parser.add_argument("--gate")
    parser.add_argument("--psi0")
    parser.add_argument("--momentum", type=float)
    parser.add_argument("--variant", choices=CTC_VARIANTS)
    parser.add_argument("--loop-phase", type=float)
    parser.add_argument("--no-strict", dest="strict", action="store_false")


def _add_rmax(parser: argparse.ArgumentParser):
    parser.add_argument("--m-tau", type=float, default=1.5)
    parser.add_argument("--ea-over-m", type=float, help="single e|A|/m")
    parser.add_argument("--ea-over-m-range", help="start:stop:count of e|A|/m")
    parser.add_argument("--k-count", type=int, default=DEFAULT_K_COUNT)
    parser.add_argument("--q-convention", choices=Q_CONVENTIONS, default=QConvention.SIGNED.value)


def _add_double_cavity(parser: argparse.ArgumentParser):
    _add_experiment_cavity(parser)


def _add_interferometer(parser: argparse.ArgumentParser):
    _add_experiment_cavity(parser)
    parser.add_argument("--theta", type=float, default=THETA_PLUS)


def _add_game(parser: argparse.ArgumentParser):
    _add_experiment_cavity(parser)
    parser.add_argument("--trials", type=int, help="Monte Carlo trials (default: analytic only)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _add_gyni(parser: argparse.ArgumentParser):
    parser.add_argument("--r", type=float, default=R1)
    parser.add_argument("--r-range", help="start:stop:count of R for CSV rows")


def _add_switch(parser: argparse.ArgumentParser):
    _add_experiment_cavity(parser)
    parser.add_argument("--gate-a", choices=tuple(NAMED_GATES), default="x")
    parser.add_argument("--gate-b", choices=tuple(NAMED_GATES), default="z")
    parser.add_argument("--xi", type=float, default=0.0)
    _add_spin_options(parser)


def _add_ctc(parser: argparse.ArgumentParser):
    _add_experiment_cavity(parser)
    parser.add_argument("--gate", choices=tuple(NAMED_GATES), default="h")
    parser.add_argument("--xi", type=float, default=0.0)
    parser.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    parser.add_argument("--variant", choices=CTC_VARIANTS, default=DEFAULT_CTC_VARIANT)
    _add_spin_options(parser)


def _add_deutsch(parser: argparse.ArgumentParser):
    parser.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    parser.add_argument("--r", type=float, default=1.0)
    parser.add_argument("--no-strict", dest="strict", action="store_false")
    parser.add_argument("--loop-phase", type=float)
    parser.add_argument("--xi", type=float, default=0.0)


def _add_oracle(parser: argparse.ArgumentParser):
    parser.add_argument("--p", type=float, default=1.0, help="|p|/m")
    parser.add_argument("--ea-over-m", type=float, default=3.0)
    parser.add_argument("--m-tau", type=float, help="cavity duration (default: single interface)")
    parser.add_argument("--width", type=float, default=ORACLE_DEFAULT_WIDTH, help="coarsest step width")
    parser.add_argument("--p-sign", type=int, choices=(1, -1), default=1)


def _add_ledger(parser: argparse.ArgumentParser):
    parser.add_argument("--reference-points", default=str(DEFAULT_REFERENCE_POINTS))
    parser.add_argument("--ea-over-m-range", default=DEFAULT_LEDGER_EA_RANGE)
    parser.add_argument("--k-count", type=int, default=DEFAULT_K_COUNT)
    parser.add_argument("--format", choices=("text", "json"), default="text")

SUBCOMMANDS = {
    "interface": ("single temporal interface coefficients", _add_interface),
    "cavity": ("temporal Fabry-Perot cavity coefficients", _add_cavity),
    "sweep": ("one-dimensional parameter sweep", _add_sweep),
    "rmax": ("reflectivity maximum over |k|", _add_rmax),
    "double-cavity": ("electron crossing two temporal cavities", _add_double_cavity),
    "interferometer": ("retrocausal interferometer outcomes", _add_interferometer),
    "game": ("retrocausal guessing game gain", _add_game),
    "gyni": ("guess-your-neighbour's-input gain", _add_gyni),
    "switch": ("quantum switch with a fixed time order", _add_switch),
    "ctc": ("ring closed time-like curve", _add_ctc),
    "deutsch": ("Deutsch-type loop with U = 1", _add_deutsch),
    "oracle": ("ODE check of interface or cavity coefficients", _add_oracle),
    "ledger": ("discrepancy checks with measured residuals", _add_ledger),
}


def build_parser() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    """Returns the top-level parser and the parser of every subcommand."""
    parser = argparse.ArgumentParser(prog="python -m app",
                                     description="Temporal-interface scattering of Dirac electrons")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="subcommand")
    common = _common_parser()
    commands = {}
    for name, (description, add_arguments) in SUBCOMMANDS.items():
        commands[name] = subparsers.add_parser(name, parents=[common], help=description, description=description)
        add_arguments(commands[name])
    return parser, commands


def read_config_file(path) -> Dict[str, str]:
    """Reads flat key=value lines; '#' starts a comment line and keys may use '-' or '_'."""
    options = {}
    try:
        with open(path, encoding="utf-8") as config_file:
            lines = config_file.read().splitlines()
    except OSError as read_error:
        raise ValidationError(f"Cannot read config file {path}: {read_error}") from read_error
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, separator, value = line.partition("=")
        if not separator or not key.strip():
            raise ValidationError(f"{path}:{number}: expected key=value, got {line!r}")
        options[key.strip().replace("-", "_")] = value.strip()
    return options


def parse_flag(value: str, name: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValidationError(f"Config value of {name} must be true or false, got {value!r}")
