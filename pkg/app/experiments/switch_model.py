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
from typing import Dict
from typing import Tuple

import numpy as np

from .constants import D2_ONLY
from .constants import D3_ONLY
from .constants import SWITCH_CHANNELS
from .model import SwitchSpec
from ..amplitudes.amplitude_functions import compose_path
from ..amplitudes.amplitude_functions import normalize_report
from ..amplitudes.amplitude_functions import vacuum_probability
from ..amplitudes.constants import BS_REFLECTION
from ..amplitudes.constants import BS_TRANSMISSION
from ..amplitudes.model import DiagramTerm
from ..amplitudes.model import ExperimentReport
from ..amplitudes.model import PhaseFactor
from ..amplitudes.model import VacuumSpec
from ..errors import ValidationError
from ..interface.constants import COLLINEAR_AXIS
from ..spinor.model import EnergyBranch
from ..spinor.spinor_functions import plane_wave
from ..spinor.spinor_functions import spin_coefficients

logger = logging.getLogger(__name__)

# both cavities are crossed by two counterpropagating electron modes
SWITCH_CAVITY_CHANNELS = 4


def order_coefficients(spec: SwitchSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Returns the spin coefficients (C^{A<B}, C^{B<A}).

    A before B: U_B U_A on the forward mode psi0(-p, E).
    B before A: U_A^-1 U_B^-1 on the backward-in-time mode psi0(p, -E).
    """
    momentum = spec.momentum * COLLINEAR_AXIS
    forward = plane_wave(-momentum, EnergyBranch.POSITIVE, spec.psi0)
    backward = plane_wave(momentum, EnergyBranch.NEGATIVE, spec.psi0)
    a_then_b = spin_coefficients(spec.u_b @ spec.u_a, forward)
    b_then_a = spin_coefficients(spec.u_a.inverse() @ spec.u_b.inverse(), backward)
    return a_then_b, b_then_a


def switch_terms(spec: SwitchSpec, spin_index: int) -> Dict[str, Tuple[DiagramTerm, ...]]:
    """Returns the normal-order and zigzag diagrams reaching each detector with final spin s."""
    c = spec.cavity
    a_then_b, b_then_a = order_coefficients(spec)
    shifter = PhaseFactor.shifter(spec.xi)
    return {
        D2_ONLY: (DiagramTerm((BS_TRANSMISSION, c.t_tot, c.t_tot, BS_REFLECTION, a_then_b[spin_index]), label="A<B"),
                  DiagramTerm((BS_REFLECTION, c.r_tot, c.r_tot_prime, shifter, BS_TRANSMISSION,
                               b_then_a[spin_index]), label="B<A")),
        D3_ONLY: (DiagramTerm((BS_TRANSMISSION, c.t_tot, c.t_tot, BS_TRANSMISSION, a_then_b[spin_index]), label="A<B"),
                  DiagramTerm((BS_REFLECTION, c.r_tot, c.r_tot_prime, shifter, BS_REFLECTION,
                               b_then_a[spin_index]), label="B<A")),
    }


def switch_vacuum_report(reflectivity: float) -> ExperimentReport:
    """Complete vacuum outcome set of the switch: no pair, or one of the pair patterns a-h."""
    if not reflectivity >= 0:
        raise ValidationError(f"Reflectivity R must be non-negative, got {reflectivity}")
    transmittivity = 1 + reflectivity
    weights = (reflectivity, reflectivity, reflectivity * transmittivity, reflectivity * transmittivity,
               reflectivity ** 2, reflectivity ** 2 * transmittivity, reflectivity ** 2 * transmittivity,
               reflectivity ** 2 * transmittivity ** 2)
    raw = {"vacuum": 1.0, **{f"channel_{label}": weight for label, weight in zip(SWITCH_CHANNELS, weights)}}
    return normalize_report("switch_vacuum", raw, VacuumSpec.cavities(reflectivity, SWITCH_CAVITY_CHANNELS))


def quantum_switch(spec: SwitchSpec) -> ExperimentReport:
    """Quantum switch with a fixed time order A before B and both causal orders in superposition.

    The two electron outcomes are not exhaustive; the complete vacuum outcome set is attached.
    """
    c = spec.cavity
    raw = {D2_ONLY: 0.0, D3_ONLY: 0.0}
    for spin_index in range(2):
        for pattern, terms in switch_terms(spec, spin_index).items():
            raw[pattern] += abs(compose_path(terms)) ** 2
    a_then_b, b_then_a = order_coefficients(spec)
    vacuum = VacuumSpec.cavities(c.reflectivity, SWITCH_CAVITY_CHANNELS)
    diagnostics = {
        "coefficientsAB": a_then_b,
        "coefficientsBA": b_then_a,
        "xi": spec.xi,
        "reflectivity": c.reflectivity,
        "vacuum": switch_vacuum_report(c.reflectivity),
    }
    logger.debug("Switch xi=%s: P(D2)=%.12g P(D3)=%.12g", spec.xi, raw[D2_ONLY] * vacuum_probability(vacuum),
                 raw[D3_ONLY] * vacuum_probability(vacuum))
    return normalize_report("quantum_switch", raw, vacuum, complete=False, diagnostics=diagnostics)
