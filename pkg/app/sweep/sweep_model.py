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
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from itertools import repeat
from typing import Any
from typing import Dict
from typing import List
from typing import Sequence
from typing import Tuple

import numpy as np

from .constants import CAVITY_DEFAULTS
from .constants import CAVITY_SWEEP_COLUMNS
from .constants import CAVITY_VARIABLES
from .constants import DEFAULT_EXPERIMENT
from .constants import EXPERIMENT_DEFAULTS
from .constants import EXPERIMENT_SWEEPS
from .constants import EXPERIMENT_TRAILER_COLUMNS
from .constants import GYNI_COLUMNS
from .constants import SWEEP_CHUNKS_PER_WORKER
from .constants import SWEEP_VARIABLES
from ..amplitudes.model import ExperimentReport
from ..cavity.constants import RESONANCE_FLOOR
from ..cavity.fabry_perot_functions import cavity_coefficients
from ..cavity.fabry_perot_functions import cavity_reflectivity_curve
from ..cavity.fabry_perot_functions import ideal_cavity
from ..cavity.model import CavityCoeffs
from ..cavity.model import CavityParams
from ..cavity.model import GridRange
from ..cavity.model import RmaxResult
from ..cavity.model import schwinger_flag
from ..errors import ValidationError
from ..experiments.constants import R0
from ..experiments.ctc_model import ctc_ring
from ..experiments.ctc_model import deutsch_ctc
from ..experiments.interferometer_model import double_cavity
from ..experiments.interferometer_model import gyni_gain
from ..experiments.interferometer_model import interferometer
from ..experiments.model import CtcSpec
from ..experiments.model import SwitchSpec
from ..experiments.switch_model import quantum_switch
from ..interface.model import QConvention
from ..spinor.model import Spinor2
from ..spinor.spinor_functions import unitary_from_name

logger = logging.getLogger(__name__)

NON_NEGATIVE = ("kOverM", "eAOverM", "R", "alpha")


def _q_convention(fixed: Dict[str, Any]) -> QConvention:
    try:
        return QConvention(fixed.get("qConvention", QConvention.SIGNED.value))
    except ValueError as unknown:
        choices = ", ".join(convention.value for convention in QConvention)
        raise ValidationError(f"Unknown q convention {fixed.get('qConvention')!r}; choose from {choices}") from unknown


def experiment_cavity(fixed: Dict[str, Any]) -> CavityCoeffs:
    """Returns the cavity an experiment runs on.

    R selects the ideal cavity of that reflectivity; kOverM, eAOverM and mTau together select the
    physical cavity (m = 1); neither gives the ideal cavity at the unit-visibility reflectivity.
    """
    if fixed.get("R") is not None:
        return ideal_cavity(fixed["R"])
    physical = [fixed.get(name) for name in CAVITY_VARIABLES]
    if all(value is not None for value in physical):
        k_over_m, e_a_over_m, m_tau = physical
        return cavity_coefficients(CavityParams(e_a=e_a_over_m, tau=m_tau, p=k_over_m,
                                                q_convention=_q_convention(fixed)))
    if any(value is not None for value in physical):
        raise ValidationError("A physical cavity needs kOverM, eAOverM and mTau together")
    return ideal_cavity(R0)


def run_experiment(name: str, fixed: Dict[str, Any]) -> ExperimentReport:
    """Runs one experiment on the merged parameter map (camelCase keys)."""
    values = {**EXPERIMENT_DEFAULTS, **{key: value for key, value in fixed.items() if value is not None}}
    if name == "deutsch":
        reflectivity = values.get("R", 1.0)
        return deutsch_ctc(alpha=values["alpha"], reflectivity=reflectivity, strict=values["strict"],
                           loop_phase=values["loopPhase"], xi=values["xi"])
    cavity = experiment_cavity(values)
    if name == "double-cavity":
        return double_cavity(cavity)
    if name == "interferometer":
        return interferometer(cavity, values["theta"])
    if name == "switch":
        return quantum_switch(SwitchSpec(u_a=unitary_from_name(values["gateA"]), u_b=unitary_from_name(values["gateB"]),
                                         psi0=Spinor2.from_string(values["psi0"]), xi=values["xi"], cavity=cavity,
                                         momentum=values["momentum"]))
    if name == "ctc":
        return ctc_ring(CtcSpec(unitary=unitary_from_name(values["gate"]), xi=values["xi"], cavity=cavity,
                                alpha=values["alpha"], input_spinor=Spinor2.from_string(values["psi0"]),
                                variant=values["variant"], momentum=values["momentum"]))
    raise ValidationError(f"Unknown experiment {name!r}")


def cavity_row(k_over_m: float, e_a_over_m: float, m_tau: float,
               q_convention: QConvention = QConvention.SIGNED) -> Dict[str, Any]:
    """Returns one row of the cavity sweep schema (m = 1)."""
    curve = cavity_reflectivity_curve([k_over_m], e_a_over_m, m_tau, q_convention=q_convention, floor=RESONANCE_FLOOR)
    return {
        "kOverM": k_over_m,
        "eAOverM": e_a_over_m,
        "mTau": m_tau,
        "Rtot": float(curve.reflectivity[0]),
        "Ttot": float(curve.transmittivity[0]),
        "phaseR": float(curve.phase_r[0]),
        "phaseT": float(curve.phase_t[0]),
        "denomMag": float(curve.denom_magnitude[0]),
        "schwingerFlag": schwinger_flag(e_a_over_m, m_tau),
    }


def rmax_row(result: RmaxResult) -> Dict[str, Any]:
    return {
        "eAOverM": result.e_a / result.mass,
        "mTau": result.tau * result.mass,
        "kStar": result.k_star,
        "Rmax": result.r_max,
        "eta": result.eta,
        "denomMag": result.denom_magnitude,
        "refined": result.refined,
        "schwingerFlag": result.schwinger_flag,
    }


def report_row(variable: str, value: float, report: ExperimentReport, labels: Sequence[str]) -> Dict[str, Any]:
    row = {variable: value}
    row.update({label: report.outcomes[label] for label in labels})
    row.update({"vacuumProbability": report.vacuum_probability, "sumCheck": report.sum_check})
    return row


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep of an experiment over a linear grid; fixed holds the other parameters."""
    variable: str
    grid: GridRange
    experiment: str = DEFAULT_EXPERIMENT
    fixed: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_SWEEPS:
            raise ValidationError(f"Unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENT_SWEEPS)}")
        if self.variable not in SWEEP_VARIABLES:
            raise ValidationError(f"Unknown sweep variable {self.variable!r}; choose from {', '.join(SWEEP_VARIABLES)}")
        allowed = EXPERIMENT_SWEEPS[self.experiment][0]
        if self.variable not in allowed:
            raise ValidationError(f"{self.experiment} sweeps one of {', '.join(allowed)}, got {self.variable}")
        fixed = {key: value for key, value in self.fixed.items() if value is not None and key != self.variable}
        if self.experiment == "cavity":
            fixed = {**CAVITY_DEFAULTS, **fixed}
        object.__setattr__(self, "fixed", fixed)
        self._validate()

    def _validate(self):
        for key, value in self.fixed.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise ValidationError(f"Fixed parameter {key} must be finite, got {value}")
            if key in NON_NEGATIVE and isinstance(value, (int, float)) and value < 0:
                raise ValidationError(f"Fixed parameter {key} must be non-negative, got {value}")
        if self.variable in NON_NEGATIVE and self.grid.start < 0:
            raise ValidationError(f"{self.variable} must be non-negative, got grid start {self.grid.start}")
        if self.fixed.get("mTau", 1.0) <= 0 or (self.variable == "mTau" and self.grid.start <= 0):
            raise ValidationError("mTau must be positive")
        for key in ("gate", "gateA", "gateB"):
            if key in self.fixed:
                unitary_from_name(self.fixed[key])
        if "psi0" in self.fixed:
            Spinor2.from_string(self.fixed["psi0"]).normalized()
        if self.experiment != "cavity":
            _q_convention(self.fixed)
        strict = self.fixed.get("strict", EXPERIMENT_DEFAULTS["strict"])
        if self.experiment == "deutsch" and self.variable == "R" and strict:
            raise ValidationError("A Deutsch sweep over R leaves the R = 1 regime; pass --no-strict")

    @property
    def schema(self) -> Tuple[str, ...]:
        if self.experiment == "cavity":
            return CAVITY_SWEEP_COLUMNS
        if self.experiment == "gyni":
            return GYNI_COLUMNS
        return (self.variable,) + EXPERIMENT_SWEEPS[self.experiment][1] + EXPERIMENT_TRAILER_COLUMNS

    def as_dict(self) -> dict:
        return {"variable": self.variable, "range": [self.grid.start, self.grid.stop, self.grid.count],
                "experiment": self.experiment, "fixed": dict(self.fixed)}


def evaluate_point(spec: SweepSpec, value: float) -> Dict[str, Any]:
    """Evaluates the sweep at one grid value and returns its row."""
    value = float(value)
    point = {**spec.fixed, spec.variable: value}
    if spec.experiment == "cavity":
        return cavity_row(point["kOverM"], point["eAOverM"], point["mTau"], _q_convention(point))
    if spec.experiment == "gyni":
        return {"R": value, "gain": gyni_gain(value)}
    report = run_experiment(spec.experiment, point)
    return report_row(spec.variable, value, report, EXPERIMENT_SWEEPS[spec.experiment][1])


def _evaluate_chunk(spec: SweepSpec, values: Sequence[float]) -> List[Dict[str, Any]]:
    return [evaluate_point(spec, value) for value in values]


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[Dict[str, Any]]:
    """Evaluates every grid point; rows come back in grid order whatever the worker count."""
    values = [float(value) for value in spec.grid.values]
    logger.info("Sweeping %s over %s (%d points) with %d worker(s)", spec.experiment, spec.variable, len(values),
                workers)
    if workers <= 1:
        return _evaluate_chunk(spec, values)
    chunks = [list(chunk) for chunk in np.array_split(values, min(len(values), workers * SWEEP_CHUNKS_PER_WORKER))]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return [row for rows in executor.map(_evaluate_chunk, repeat(spec), chunks) for row in rows]
