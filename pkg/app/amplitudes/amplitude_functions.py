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
import itertools
import logging
import math
from typing import Dict
from typing import Iterable
from typing import Sequence
from typing import Tuple
from typing import Union

from .constants import COMPLETENESS_TOLERANCE
from .model import DiagramTerm
from .model import ExperimentReport
from .model import VacuumChannel
from .model import VacuumSpec
from ..errors import CompletenessError
from ..errors import ValidationError

logger = logging.getLogger(__name__)


def compose_path(terms: Iterable[DiagramTerm]) -> complex:
    """Returns the sum of the signed path amplitudes, before vacuum normalization."""
    return complex(sum((term.amplitude for term in terms), 0j))


def vacuum_probability(spec: VacuumSpec) -> float:
    """Returns the vacuum-to-vacuum probability prod_i (1+R_i)^-m_i."""
    probability = 1.0
    for channel in spec.channels:
        probability /= (1 + channel.reflectivity) ** channel.multiplicity
    return probability


def normalize_report(name: str, raw: Dict[str, float], vacuum: Union[VacuumSpec, float], complete: bool = True,
                     diagnostics: dict = None, tolerance: float = COMPLETENESS_TOLERANCE) -> ExperimentReport:
    """Multiplies each raw |amplitude|^2 by P_v.

    A complete outcome set whose probabilities miss one by more than the tolerance raises CompletenessError.
    """
    p_v = vacuum_probability(vacuum) if isinstance(vacuum, VacuumSpec) else float(vacuum)
    report = ExperimentReport(name=name, outcomes={label: p_v * value for label, value in raw.items()},
                              vacuum_probability=p_v, complete=complete, diagnostics=dict(diagnostics or {}))
    residual = abs(report.sum_check - 1)
    if complete and residual > tolerance:
        raise CompletenessError(residual, tolerance)
    logger.debug("%s: P_v=%.12g sum=%.15g complete=%s", name, p_v, report.sum_check, complete)
    return report


def pair_channel_report(name: str, weights: Dict[str, float]) -> ExperimentReport:
    """Vacuum outcome set where the pair channels carry P_v * w_i and 1 = P_v (1 + sum w_i) fixes P_v."""
    if any(not (math.isfinite(weight) and weight >= 0) for weight in weights.values()):
        raise ValidationError(f"Pair-channel weights must be finite and non-negative, got {weights}")
    raw = {"vacuum": 1.0, **weights}
    return normalize_report(name, raw, 1 / (1 + sum(weights.values())))


def _mode_outcome_total(reflectivity: float, multiplicity: int) -> float:
    """Sums the raw probabilities of every pair-creation pattern of one mode: no pair (1) or a pair (R) per channel."""
    return sum(math.prod(reflectivity if created else 1.0 for created in pattern)
               for pattern in itertools.product((False, True), repeat=multiplicity))


def unmeasured_mode_ratio(measured_raw: float, reflectivities: Sequence[float], multiplicity: int = 1,
                          measured: int = 0) -> Tuple[float, float]:
    """Returns (full, reduced) probabilities of an outcome seen on one mode of a finite mode set.

    full normalizes with the vacuum of every mode and sums over every unobserved pattern of the other
    modes; reduced keeps only the measured mode. The two agree because the unmeasured factors cancel.
    """
    if not 0 <= measured < len(reflectivities):
        raise ValidationError(f"Measured mode index {measured} outside 0..{len(reflectivities) - 1}")
    p_v_all = vacuum_probability(VacuumSpec(tuple(VacuumChannel(value, multiplicity) for value in reflectivities)))
    unmeasured = math.prod(_mode_outcome_total(value, multiplicity)
                           for index, value in enumerate(reflectivities) if index != measured)
    full = p_v_all * measured_raw * unmeasured
    reduced = vacuum_probability(VacuumSpec.cavities(reflectivities[measured], multiplicity)) * measured_raw
    return full, reduced


def exchange_final_modes(terms: Sequence[DiagramTerm]) -> Tuple[DiagramTerm, ...]:
    """Swaps the two final-mode labels of an exchange pair; each term's parity flips."""
    return tuple(DiagramTerm(term.factors, -term.parity, term.label) for term in terms)
