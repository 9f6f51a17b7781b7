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
from typing import Dict

import numpy as np

from .constants import CTC_VARIANTS
from .constants import C_PORT
from .constants import D1_ONLY
from .constants import D3_ONLY
from .constants import DEFAULT_ALPHA
from .constants import MAX_CTC_CONDITION_NUMBER
from .model import CtcSpec
from .model import PairWeights
from ..amplitudes.amplitude_functions import normalize_report
from ..amplitudes.amplitude_functions import pair_channel_report
from ..amplitudes.model import ExperimentReport
from ..cavity.fabry_perot_functions import ideal_cavity
from ..errors import SingularSystemError
from ..errors import ValidationError
from ..interface.constants import COLLINEAR_AXIS
from ..spinor.model import EnergyBranch
from ..spinor.model import UnitaryMatrix2
from ..spinor.spinor_functions import mode_for_spin
from ..spinor.spinor_functions import spin_matrix_element

logger = logging.getLogger(__name__)

SPINS = (0.5, -0.5)
IDENTITY = np.eye(2, dtype=complex)


def spin_matrix(unitary: UnitaryMatrix2, momentum: np.ndarray, energy_sign: EnergyBranch) -> np.ndarray:
    """Returns U_{s,s'} = psi_s^dagger U psi_s' in the spin basis of the mode (p, sign E)."""
    return np.array([[spin_matrix_element(row, unitary, mode_for_spin(momentum, energy_sign, column))
                      for column in SPINS] for row in SPINS])


def _inverse(matrix: np.ndarray, name: str) -> np.ndarray:
    condition = float(np.linalg.cond(matrix))
    if not math.isfinite(condition) or condition > MAX_CTC_CONDITION_NUMBER:
        raise SingularSystemError(f"{name} is singular", condition)
    return np.linalg.inv(matrix)


def pair_channel_weights(spec: CtcSpec, variant: str = None) -> PairWeights:
    """Returns the relative weights P_i/P_v of the five pair channels of the ring.

    The loop coefficient kappa is t^2 ("t2") or r^2 ("r2"); zeta = i kappa e^{i xi}/sqrt(2).
    """
    variant = variant or spec.variant
    if variant not in CTC_VARIANTS:
        raise ValidationError(f"CTC variant must be one of {CTC_VARIANTS}, got {variant!r}")
    c = spec.cavity
    kappa = c.t_tot ** 2 if variant == "t2" else c.r_tot ** 2
    zeta = 1j * kappa * np.exp(1j * spec.xi) / math.sqrt(2)
    momentum = spec.momentum * COLLINEAR_AXIS
    u = spin_matrix(spec.unitary, momentum, EnergyBranch.POSITIVE)
    v = spin_matrix(spec.unitary.inverse(), -momentum, EnergyBranch.NEGATIVE)
    loop = _inverse(IDENTITY + zeta * u, "Clockwise pair loop")
    m_a = IDENTITY + zeta * u @ loop
    m_b = u @ loop
    scaled = math.sqrt(spec.alpha) * zeta * v
    m_c = IDENTITY - scaled @ _inverse(IDENTITY - scaled, "Anticlockwise pair loop")
    trace_a, trace_b, trace_c = [float(np.trace(m.conj().T @ m).real) for m in (m_a, m_b, m_c)]
    reflectivity, transmittivity = c.reflectivity, c.transmittivity
    weights = {
        "A": reflectivity * trace_a,
        "B": transmittivity * trace_b / 2,
        "C": reflectivity * trace_c,
        "D": reflectivity ** 2 * trace_a * trace_c,
        "E": reflectivity * transmittivity * trace_b * trace_c / 2,
    }
    return PairWeights(weights=weights, variant=variant)


def _electron_outcomes(spec: CtcSpec) -> Dict[str, float]:
    """Solves the beam-splitter and loop equations for (c, d) as one linear system.

    Returns the electron outcomes before vacuum normalization together with the solution diagnostics.
    """
    c = spec.cavity
    u = spin_matrix(spec.unitary, spec.momentum * COLLINEAR_AXIS, EnergyBranch.POSITIVE)
    a = spec.input_spinor.normalized().components
    loop = c.r_tot * c.r_tot_prime * np.exp(1j * spec.xi) * u
    system = np.block([[IDENTITY, -1j / math.sqrt(2) * IDENTITY], [-loop, IDENTITY]])
    rhs = np.concatenate([a / math.sqrt(2), np.zeros(2, dtype=complex)])
    condition = float(np.linalg.cond(system))
    if not math.isfinite(condition) or condition > MAX_CTC_CONDITION_NUMBER:
        raise SingularSystemError("CTC fixed-point system is singular", condition)
    solution = np.linalg.solve(system, rhs)
    c_vec, d_vec = solution[:2], solution[2:]
    b_vec = d_vec / math.sqrt(2) + 1j / math.sqrt(2) * a
    residual = max(np.max(np.abs(c_vec - (1j * d_vec + a) / math.sqrt(2))), np.max(np.abs(d_vec - loop @ c_vec)))
    zeta = 1j * c.r_tot ** 2 * np.exp(1j * spec.xi) / math.sqrt(2)
    return {
        D1_ONLY: float(np.vdot(b_vec, b_vec).real),
        D3_ONLY: c.transmittivity * float(np.vdot(c_vec, c_vec).real),
        "residual": float(residual),
        "condition": float(np.linalg.cond(IDENTITY + zeta * u)),
        "c": c_vec,
        "b": b_vec,
    }


def ctc_ring(spec: CtcSpec) -> ExperimentReport:
    """Ring CTC closed by two temporal cavities, a beam splitter and a mirror.

    Both loop-coefficient variants are evaluated; the one whose electron probabilities overshoot one
    the least is reported as preferred.
    """
    electron = _electron_outcomes(spec)
    by_variant = {}
    for variant in CTC_VARIANTS:
        weights = pair_channel_weights(spec, variant)
        excess = max(0.0, weights.vacuum_probability * (electron[D1_ONLY] + electron[D3_ONLY]) - 1)
        by_variant[variant] = {"weights": weights, "excess": excess}
    preferred = min(CTC_VARIANTS, key=lambda variant: by_variant[variant]["excess"])
    chosen = by_variant[spec.variant]
    if electron["residual"] > 1e-12 * max(1.0, float(np.max(np.abs(electron["c"])))):
        logger.warning("CTC fixed point residual %.3e", electron["residual"])
    vacuum = pair_channel_report(f"ctc_vacuum_{spec.variant}", chosen["weights"].weights)
    diagnostics = {
        "variant": spec.variant,
        "preferredVariant": preferred,
        "excess": {variant: by_variant[variant]["excess"] for variant in CTC_VARIANTS},
        "vacuumProbability": {variant: by_variant[variant]["weights"].vacuum_probability for variant in CTC_VARIANTS},
        "fixedPointResidual": electron["residual"],
        "conditionNumber": electron["condition"],
        "c": electron["c"],
        "b": electron["b"],
        "alpha": spec.alpha,
        "vacuum": vacuum,
    }
    raw = {D1_ONLY: electron[D1_ONLY], D3_ONLY: electron[D3_ONLY]}
    return normalize_report("ctc_ring", raw, chosen["weights"].vacuum_probability, complete=False,
                            diagnostics=diagnostics)


def deutsch_ctc(alpha: float = DEFAULT_ALPHA, reflectivity: float = 1.0, strict: bool = True, loop_phase: float = None,
                xi: float = 0.0) -> ExperimentReport:
    """Deutsch-type CTC with U = 1: the loop wave meets the second branch at a second beam splitter.

    loop_phase is the phase of the direct branch; by default it makes r^2 e^{i xi} e^{-i loop_phase} = R,
    which empties the c port when R = 1.
    """
    if not (math.isfinite(alpha) and alpha >= 0):
        raise ValidationError(f"alpha must be finite and non-negative, got {alpha}")
    if not (math.isfinite(reflectivity) and reflectivity >= 0):
        raise ValidationError(f"Reflectivity R must be finite and non-negative, got {reflectivity}")
    if strict and reflectivity != 1:
        raise ValidationError(f"The destructive regime needs R = 1, got R = {reflectivity}; pass strict=False")
    cavity = ideal_cavity(reflectivity)
    loop = cavity.r_tot ** 2 * np.exp(1j * xi)
    if loop_phase is None:
        loop_phase = float(np.angle(loop)) if reflectivity > 0 else 0.0
    direct = np.exp(1j * loop_phase)
    b = (direct + loop) / math.sqrt(2)
    c = 1j / 2 * (direct - loop)
    transmittivity = 1 + reflectivity
    weights = {"single_pair": transmittivity * reflectivity * (1 + alpha),
               "double_pair": alpha * transmittivity ** 2 * reflectivity ** 2}
    vacuum = pair_channel_report("deutsch_vacuum", weights)
    p_v = vacuum.vacuum_probability
    raw = {D1_ONLY: abs(b) ** 2, C_PORT: abs(c) ** 2}
    diagnostics = {"alpha": alpha, "reflectivity": reflectivity, "loopPhase": loop_phase, "xi": xi,
                   "vacuum": vacuum}
    return normalize_report("deutsch_ctc", raw, p_v, complete=False, diagnostics=diagnostics)
