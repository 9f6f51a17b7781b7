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
from typing import Tuple

import numpy as np

from .constants import COLLINEAR_AXIS
from .constants import CONTINUITY_COMPONENTS
from .constants import MAX_CONDITION_NUMBER
from .constants import SPIN_UP
from .model import InterfaceConfig
from .model import InterfaceCoeffs
from .model import InterfaceTag
from .model import QConvention
from .model import Region
from ..errors import SingularSystemError
from ..errors import ValidationError
from ..spinor.constants import DEFAULT_MASS
from ..spinor.spinor_functions import branch_components
from ..spinor.spinor_functions import plane_wave

logger = logging.getLogger(__name__)


def signed_momenta(p: float, e_a: float, p_sign: int = 1,
                   q_convention: QConvention = QConvention.SIGNED) -> Tuple[float, float]:
    """Returns the signed momenta (p_z, q) on either side of the interface."""
    if q_convention is QConvention.MAGNITUDE:
        return abs(p), abs(p_sign * p - e_a)
    p_z = p_sign * p
    return p_z, p_z - e_a


def solve_continuity(incident: np.ndarray, reflected: np.ndarray,
                     transmitted: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Solves incident + r reflected = t transmitted for (r, t).

    Each argument holds the two continuity components in its last axis; leading axes are batched.
    """
    matrix = np.stack([reflected, -transmitted], axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        condition = np.linalg.cond(matrix)
    worst = float(np.max(np.where(np.isfinite(condition), condition, np.inf)))
    if worst > MAX_CONDITION_NUMBER:
        raise SingularSystemError("Interface continuity system is singular", worst)
    try:
        solution = np.linalg.solve(matrix, -incident[..., None])[..., 0]
    except np.linalg.LinAlgError as singular:
        raise SingularSystemError("Interface continuity system is singular", worst) from singular
    return solution[..., 0], solution[..., 1], condition


def _validate_momentum(p, mass: float):
    if not mass > 0:
        raise ValidationError(f"Mass must be positive, got {mass}")
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValidationError("Momentum magnitude p must be finite and non-negative")


def _continuity_vector(branch, momentum: float, mass: float) -> np.ndarray:
    mode = plane_wave(momentum * COLLINEAR_AXIS, branch, SPIN_UP, mass, rest_direction=COLLINEAR_AXIS,
                      fix_phase=False)
    return mode.components[list(CONTINUITY_COMPONENTS)]


def solve_interface(cfg: InterfaceConfig, p: float, mass: float = DEFAULT_MASS) -> InterfaceCoeffs:
    """Matches the spinor components of both sides at the interface and solves for (r, t)."""
    _validate_momentum(p, mass)
    p_z, q = signed_momenta(p, cfg.e_a, cfg.p_sign, cfg.q_convention)
    momentum = {Region.FREE: p_z, Region.POTENTIAL: q}
    incident, reflected, transmitted = [_continuity_vector(branch, momentum[region], mass)
                                        for branch, region in cfg.tag.waves]
    r, t, condition = solve_continuity(incident, reflected, transmitted)
    coeffs = InterfaceCoeffs(tag=cfg.tag, r=complex(r), t=complex(t), energy=math.hypot(p_z, mass),
                             energy_prime=math.hypot(q, mass), p=p_z, q=q, condition_number=float(condition))
    logger.debug("Interface %s at p=%s eA=%s: r=%s t=%s cond=%.3e", cfg.tag.value, p, cfg.e_a, coeffs.r, coeffs.t,
                 coeffs.condition_number)
    return coeffs


def solve_interface_batch(tag: InterfaceTag, p, e_a, mass: float = DEFAULT_MASS, p_sign: int = 1,
                          q_convention: QConvention = QConvention.SIGNED) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized solve_interface; returns (r, t) arrays.

    p and e_a broadcast against each other, so either a momentum grid at one e|A| or paired (p, e|A|)
    samples can be solved in one call.
    """
    _validate_momentum(p, mass)
    e_a = np.asarray(e_a, dtype=float)
    if not np.all(np.isfinite(e_a)) or np.any(e_a < 0):
        raise ValidationError("eA must be finite and non-negative")
    p, e_a = np.broadcast_arrays(np.asarray(p, dtype=float), e_a)
    p_z, q = signed_momenta(p, e_a, p_sign, q_convention)
    momentum = {Region.FREE: p_z, Region.POTENTIAL: q}
    incident, reflected, transmitted = [branch_components(momentum[region], branch, mass)
                                        for branch, region in tag.waves]
    r, t, _ = solve_continuity(incident, reflected, transmitted)
    return r, t


def _check_energy_slot(energy: float, mass: float, name: str):
    if not abs(energy) > mass:
        raise ValidationError(f"Closed form requires |{name}| > m, got {name}={energy}, m={mass}")


def closed_form_r(energy: float, energy_prime: float, p: float, q: float, mass: float = DEFAULT_MASS) -> complex:
    """Returns sqrt((E+m)/(E-m)) ((E-m)(E'+m) - pq)/((E+m)(E'+m) + pq) in its 0/0-safe product form.

    sqrt((E+m)/(E-m)) (E-m) = sign(E)|p| and sqrt((E+m)/(E-m)) pq = |E+m| sign(p) q, which keeps the
    expression finite as E -> m and valid for the negative-energy substitutions.
    """
    _check_energy_slot(energy, mass, "E")
    numerator = math.copysign(abs(p), energy) * (energy_prime + mass) - abs(energy + mass) * math.copysign(1.0, p) * q
    denominator = (energy + mass) * (energy_prime + mass) + p * q
    return complex(numerator / denominator)


def closed_form_t(energy: float, energy_prime: float, p: float, q: float, mass: float = DEFAULT_MASS) -> complex:
    """Returns 2 sqrt|EE'| sqrt((E+m)(E'+m)) / ((E+m)(E'+m) + pq), the transmission of the continuity solve."""
    _check_energy_slot(energy, mass, "E")
    _check_energy_slot(energy_prime, mass, "E'")
    product = (energy + mass) * (energy_prime + mass)
    return complex(2 * math.sqrt(abs(energy * energy_prime)) * math.sqrt(product) / (product + p * q))


def source_t_closed_form(energy: float, energy_prime: float, p: float, q: float,
                         mass: float = DEFAULT_MASS) -> complex:
    """Returns sqrt((E+m)/(E'+m)) 2E / (E + m + pq/(E'+m)) as printed in the source; ledger use only."""
    return complex(math.sqrt((energy + mass) / (energy_prime + mass)) * 2 * energy
                   / (energy + mass + p * q / (energy_prime + mass)))


def derive_config_coeffs(tag: InterfaceTag, base: InterfaceCoeffs, mass: float = DEFAULT_MASS) -> InterfaceCoeffs:
    """Applies the configuration's substitution (E, E', p, q) -> slots to the closed forms."""
    if not isinstance(tag, InterfaceTag):
        tag = InterfaceTag.from_string(str(tag))
    if base.tag is not InterfaceTag.E_TO_EPRIME_FORWARD:
        raise ValidationError(f"Substitution rules start from {InterfaceTag.E_TO_EPRIME_FORWARD.value}, "
                              f"got {base.tag.value}")
    slots = tag.slots(base.energy, base.energy_prime, base.p, base.q)
    return InterfaceCoeffs(tag=tag, r=closed_form_r(*slots, mass=mass), t=closed_form_t(*slots, mass=mass),
                           energy=base.energy, energy_prime=base.energy_prime, p=base.p, q=base.q)


def reflection_parity_residual(base: InterfaceCoeffs, mass: float = DEFAULT_MASS) -> float:
    """Returns |r(-E,-E') + r(E,E')|, which vanishes identically."""
    mirrored = derive_config_coeffs(InterfaceTag.NEG_EPRIME_FROM_FUTURE, base, mass)
    return abs(mirrored.r + base.r)
