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
import logging
import math
import sys
from dataclasses import dataclass
from dataclasses import field
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from munch import Munch
from viktor import UserError

from .constants import CAVITY_COEFFICIENTS
from .constants import CAVITY_SWEEP_COLUMNS
from .constants import DEFAULT_LOG_LEVEL
from .constants import EXIT_NUMERICAL
from .constants import EXIT_SUCCESS
from .constants import EXIT_VALIDATION
from .constants import EXPERIMENT_TRAILER_COLUMNS
from .constants import GYNI_COLUMNS
from .constants import LOG_FORMAT
from .constants import REFERENCE_M_TAU
from .constants import RMAX_COLUMNS
from .ledger_model import build_ledger
from .ledger_model import load_reference_points
from .ledger_model import relative_error
from .ledger_model import rmax_agreement
from .ledger_model import render_ledger
from .output_functions import emit_csv
from .output_functions import emit_json
from .output_functions import json_text
from .output_functions import resolve_output_path
from .parametrization import build_parser
from .parametrization import parse_flag
from .parametrization import read_config_file
from .sweep_model import SweepSpec
from .sweep_model import experiment_cavity
from .sweep_model import rmax_row
from .sweep_model import run_experiment
from .sweep_model import run_sweep
from ..cavity.fabry_perot_functions import cavity_coefficients
from ..cavity.fabry_perot_functions import verify_symmetries
from ..cavity.model import CavityParams
from ..cavity.model import GridRange
from ..cavity.resonance_search import global_maximum
from ..cavity.resonance_search import scan_rmax
from ..errors import NumericalError
from ..errors import ValidationError
from ..experiments.constants import CAUSAL_GAIN_BOUND
from ..experiments.interferometer_model import gyni_gain
from ..experiments.interferometer_model import gyni_threshold
from ..experiments.interferometer_model import retro_game
from ..experiments.interferometer_model import retro_game_closed_form
from ..interface.dirac_ode_model import SINGLE_STEP
from ..interface.dirac_ode_model import Profile
from ..interface.dirac_ode_model import ode_oracle
from ..interface.fresnel_functions import closed_form_r
from ..interface.fresnel_functions import closed_form_t
from ..interface.fresnel_functions import reflection_parity_residual
from ..interface.fresnel_functions import solve_interface
from ..interface.model import InterfaceConfig
from ..interface.model import InterfaceTag
from ..interface.model import QConvention

logger = logging.getLogger(__name__)

# argparse dest -> parameter name of the experiments
EXPERIMENT_KEYS = {
    "k_over_m": "kOverM",
    "ea_over_m": "eAOverM",
    "m_tau": "mTau",
    "r": "R",
    "theta": "theta",
    "xi": "xi",
    "alpha": "alpha",
    "gate_a": "gateA",
    "gate_b": "gateB",
    "gate": "gate",
    "psi0": "psi0",
    "momentum": "momentum",
    "variant": "variant",
    "loop_phase": "loopPhase",
    "strict": "strict",
    "q_convention": "qConvention",
}


@dataclass
class CommandResult:
    """What a subcommand produced: the JSON report, optional CSV rows and an optional text rendering."""
    payload: dict
    rows: List[dict] = field(default_factory=list)
    schema: Tuple[str, ...] = ()
    text: Optional[str] = None


def experiment_parameters(params: Munch) -> dict:
    return {name: params[dest] for dest, name in EXPERIMENT_KEYS.items() if dest in params}


class SweepController:
    """Controller class which acts as interface for the subcommands of the command line."""
    label = "Temporal cavity"
    parametrization = staticmethod(build_parser)

    def run(self, params: Munch) -> CommandResult:
        if params.get("workers", 1) < 1:
            raise ValidationError(f"--workers must be at least 1, got {params.workers}")
        handler = getattr(self, params.command.replace("-", "_"))
        return handler(params)

    @staticmethod
    def interface(params: Munch) -> CommandResult:
        """Solves the requested interface configurations and sets them beside their closed forms"""
        tags = [InterfaceTag.from_string(params.tag)] if params.tag else list(InterfaceTag)
        q_convention = QConvention(params.q_convention)
        configurations = {}
        for tag in tags:
            coeffs = solve_interface(InterfaceConfig(tag, params.ea_over_m, params.p_sign, q_convention), params.p)
            entry = {"r": coeffs.r, "t": coeffs.t, "R": coeffs.reflectivity, "T": coeffs.transmittivity,
                     "conservationResidual": coeffs.conservation_residual, "conditionNumber": coeffs.condition_number,
                     "E": coeffs.energy, "Eprime": coeffs.energy_prime, "p": coeffs.p, "q": coeffs.q}
            if coeffs.p != 0 and coeffs.q != 0:
                slots = tag.slots(coeffs.energy, coeffs.energy_prime, coeffs.p, coeffs.q)
                entry["closedFormR"] = closed_form_r(*slots)
                entry["closedFormT"] = closed_form_t(*slots)
            configurations[tag.value] = entry
        payload = {"p": params.p, "eA": params.ea_over_m, "pSign": params.p_sign, "qConvention": q_convention.value,
                   "configurations": configurations}
        forward = solve_interface(InterfaceConfig(InterfaceTag.E_TO_EPRIME_FORWARD, params.ea_over_m, params.p_sign,
                                                  q_convention), params.p)
        if forward.p != 0 and forward.q != 0:
            payload["reflectionParityResidual"] = reflection_parity_residual(forward)
        return CommandResult(payload)

    @staticmethod
    def cavity(params: Munch) -> CommandResult:
        """Composes the cavity and checks its PT identities"""
        cavity_params = CavityParams(e_a=params.ea_over_m, tau=params.m_tau, p=params.k_over_m, p_sign=params.p_sign,
                                     q_convention=QConvention(params.q_convention))
        c = cavity_coefficients(cavity_params, params.floor, params.interfaces)
        symmetry = verify_symmetries(c)
        row = {"kOverM": params.k_over_m, "eAOverM": params.ea_over_m, "mTau": params.m_tau, "Rtot": c.reflectivity,
               "Ttot": c.transmittivity, "phaseR": c.phase_r, "phaseT": c.phase_t, "denomMag": c.denom_magnitude,
               "schwingerFlag": c.schwinger_flag}
        payload = {
            "params": cavity_params.as_dict(),
            "rTot": c.r_tot,
            "tTot": c.t_tot,
            "rTotPrime": c.r_tot_prime,
            "tTotPrime": c.t_tot_prime,
            "phaseTPrime": c.phase_t_prime,
            "eta": c.eta,
            "E": c.energy,
            "Eprime": c.energy_prime,
            "delta": c.delta,
            "symmetry": {"residuals": symmetry.residuals, "maxViolation": symmetry.max_violation,
                         "passed": symmetry.passed},
            **row,
        }
        return CommandResult(payload, [row], CAVITY_SWEEP_COLUMNS)

    @staticmethod
    def sweep(params: Munch) -> CommandResult:
        spec = SweepSpec(variable=params.variable, grid=GridRange.from_string(params.range),
                         experiment=params.experiment, fixed=experiment_parameters(params))
        rows = run_sweep(spec, params.workers)
        return CommandResult({"sweep": spec.as_dict(), "columns": list(spec.schema), "rows": rows}, rows, spec.schema)

    @staticmethod
    def rmax(params: Munch) -> CommandResult:
        """Locates the reflectivity maximum for one e|A|/m or a range of them"""
        if params.ea_over_m_range:
            values = GridRange.from_string(params.ea_over_m_range).values
        elif params.ea_over_m is not None:
            values = [params.ea_over_m]
        else:
            raise ValidationError("rmax needs --ea-over-m or --ea-over-m-range")
        results = scan_rmax(params.m_tau, values, params.workers, params.k_count,
                            q_convention=QConvention(params.q_convention))
        rows = [rmax_row(result) for result in results]
        payload = {"mTau": params.m_tau, "qConvention": params.q_convention, "kCount": params.k_count, "rows": rows,
                   "globalMaximum": rmax_row(global_maximum(results))}
        if params.ea_over_m_range and math.isclose(params.m_tau, REFERENCE_M_TAU):
            check = rmax_agreement({QConvention(params.q_convention): results})
            if check.flagged:
                logger.warning("%s", check.finding)
            payload["referenceCheck"] = check.to_json_dict()
        return CommandResult(payload, rows, RMAX_COLUMNS)

    @staticmethod
    def _experiment(name: str, params: Munch) -> CommandResult:
        report = run_experiment(name, experiment_parameters(params))
        row = {**report.outcomes, "vacuumProbability": report.vacuum_probability, "sumCheck": report.sum_check}
        return CommandResult(report.to_json_dict(), [row], tuple(report.outcomes) + EXPERIMENT_TRAILER_COLUMNS)

    def double_cavity(self, params: Munch) -> CommandResult:
        return self._experiment("double-cavity", params)

    def interferometer(self, params: Munch) -> CommandResult:
        return self._experiment("interferometer", params)

    def switch(self, params: Munch) -> CommandResult:
        return self._experiment("switch", params)

    def ctc(self, params: Munch) -> CommandResult:
        return self._experiment("ctc", params)

    def deutsch(self, params: Munch) -> CommandResult:
        return self._experiment("deutsch", params)

    @staticmethod
    def game(params: Munch) -> CommandResult:
        """Plays the guessing game analytically, and by Monte Carlo when --trials is given"""
        cavity = experiment_cavity(experiment_parameters(params))
        report = retro_game(cavity, params.trials, params.seed, params.workers)
        payload = report.to_json_dict()
        payload["reflectivity"] = cavity.reflectivity
        payload["closedFormGain"] = retro_game_closed_form(cavity.reflectivity)
        rows = [{"guess": outcome.guess, "truth": outcome.truth, "pattern": outcome.pattern,
                 "jointProbability": outcome.joint_probability} for outcome in report.outcomes]
        return CommandResult(payload, rows, ("guess", "truth", "pattern", "jointProbability"))

    @staticmethod
    def gyni(params: Munch) -> CommandResult:
        if params.r_range:
            rows = run_sweep(SweepSpec("R", GridRange.from_string(params.r_range), "gyni"), params.workers)
        else:
            rows = [{"R": params.r, "gain": gyni_gain(params.r)}]
        payload = {"R": params.r, "gain": gyni_gain(params.r), "causalBound": CAUSAL_GAIN_BOUND,
                   "threshold": gyni_threshold(), "rows": rows}
        return CommandResult(payload, rows, GYNI_COLUMNS)

    @staticmethod
    def oracle(params: Munch) -> CommandResult:
        """Integrates the smoothed profile and compares the extrapolated coefficients with the sharp solution"""
        profile = Profile(tau=params.m_tau) if params.m_tau is not None else SINGLE_STEP
        result = ode_oracle(params.width, params.p, params.ea_over_m, profile=profile, p_sign=params.p_sign)
        if profile.is_cavity:
            reference = cavity_coefficients(CavityParams(e_a=params.ea_over_m, tau=params.m_tau, p=params.p,
                                                         p_sign=params.p_sign))
            names = CAVITY_COEFFICIENTS
        else:
            reference = solve_interface(InterfaceConfig(InterfaceTag.E_TO_EPRIME_FORWARD, params.ea_over_m,
                                                        params.p_sign), params.p)
            names = ("r", "t")
        oracle_values = {name: getattr(result.coefficients, name) for name in names}
        sharp_values = {name: getattr(reference, name) for name in names}
        errors = {name: relative_error(oracle_values[name], sharp_values[name]) for name in names}
        payload = {
            "profile": "cavity" if profile.is_cavity else "step",
            "widths": list(result.widths),
            "orders": {name: (None if math.isnan(order) else order) for name, order in result.orders.items()},
            "richardsonResidual": result.richardson_residual,
            "oracle": oracle_values,
            "closedForm": sharp_values,
            "relativeError": errors,
            "maxRelativeError": max(errors.values()),
        }
        return CommandResult(payload)

    @staticmethod
    def ledger(params: Munch) -> CommandResult:
        entries = build_ledger(load_reference_points(params.reference_points),
                               GridRange.from_string(params.ea_over_m_range), params.workers, params.k_count)
        payload = {"entries": [entry.to_json_dict() for entry in entries],
                   "flagged": [entry.name for entry in entries if entry.flagged]}
        return CommandResult(payload, text=render_ledger(entries) if params.format == "text" else None)


def configure_logging(level: str = DEFAULT_LOG_LEVEL):
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, stream=sys.stderr, force=True)


def parse_arguments(argv: Sequence[str]) -> Munch:
    """Parses argv; a --config file supplies defaults that explicit flags override."""
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    if not args.config:
        return Munch(vars(args))
    options = read_config_file(args.config)
    known = set(vars(args)) - {"command", "config"}
    unknown = sorted(key for key in options if key not in known)
    if unknown:
        raise ValidationError(f"Unknown keys in {args.config} for {args.command}: {', '.join(unknown)}")
    flags = []
    for key, value in options.items():
        if key == "strict":
            if not parse_flag(value, key):
                flags.append("--no-strict")
            continue
        flags.append(f"--{key.replace('_', '-')}={value}")
    # the subcommand parser converts and checks the config values; they then become its defaults
    subcommand = commands[args.command]
    configured = subcommand.parse_args(flags)
    subcommand.set_defaults(**{key: getattr(configured, key) for key in options})
    return Munch(vars(parser.parse_args(argv)))


def write_outputs(result: CommandResult, params: Munch):
    """Writes CSV and JSON where requested; otherwise the report goes to stdout."""
    if params.csv:
        if not result.schema:
            raise ValidationError(f"{params.command} has no CSV output")
        emit_csv(result.rows, result.schema, resolve_output_path(params.csv, params.outdir))
    if params.json:
        emit_json(result.payload, resolve_output_path(params.json, params.outdir))
    elif result.text is not None:
        sys.stdout.write(result.text)
    elif not params.csv:
        sys.stdout.write(json_text(result.payload))


def run_subcommand(argv: Optional[Sequence[str]] = None) -> int:
    """Runs one subcommand; returns 0 on success, 2 on invalid input and 3 on numerical failure."""
    argv = list(sys.argv[1:] if argv is None else argv)
    configure_logging()
    try:
        params = parse_arguments(argv)
    except SystemExit as parser_exit:
        return parser_exit.code if isinstance(parser_exit.code, int) else EXIT_VALIDATION
    except UserError as invalid:
        logger.error("%s", invalid)
        return EXIT_VALIDATION
    configure_logging(params.log_level)
    try:
        write_outputs(SweepController().run(params), params)
    except (UserError, OSError) as invalid:
        logger.error("%s", invalid)
        return EXIT_VALIDATION
    except NumericalError as failure:
        logger.error("%s: %s", type(failure).__name__, failure)
        return EXIT_NUMERICAL
    return EXIT_SUCCESS


def main() -> int:
    return run_subcommand()
