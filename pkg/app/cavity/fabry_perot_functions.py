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
from typing import Sequence
from typing import Tuple

import numpy as np

from .constants import DEFAULT_BOUNCES
from .constants import RESONANCE_FLOOR
from .model import CavityCoeffs
from .model import CavityParams
from .model import ReflectivityCurve
from .model import SymmetryReport
from ..errors import ResonanceSingularityError
from ..errors import ValidationError
from ..interface.fresnel_functions import derive_config_coeffs
from ..interface.fresnel_functions import signed_momenta
from ..interface.fresnel_functions import solve_interface
from ..interface.fresnel_functions import solve_interface_batch
from ..interface.model import InterfaceConfig
from ..interface.model import InterfaceTag
from ..interface.model import QConvention
from ..spinor.constants import DEFAULT_MASS

logger = logging.getLogger(__name__)

# crossing into the cavity, reflection at its start, crossing out, reflection at its end
INTERFACE_ORDER = (InterfaceTag.E_TO_EPRIME_FORWARD, InterfaceTag.NEG_E_FROM_FUTURE, InterfaceTag.EPRIME_TO_E_FORWARD,
                   InterfaceTag.NEG_EPRIME_FROM_FUTURE)


def compose_cavity(r: Sequence, t: Sequence, delta) -> Tuple:
    """Sums the multiple-bounce series of two interfaces a phase delay delta apart.

    r and t hold the coefficients of the four configurations in INTERFACE_ORDER; every entry may be an
    array of matching shape. Returns (r_tot, t_tot, r_tot_prime, t_tot_prime, denominator).
    """
    r1, r2, r3, r4 = r
    t1, t2, t3, t4 = t
    round_trip_phase = np.exp(2j * np.asarray(delta))
    denominator = 1 - r3 * r2 * round_trip_phase
    r_tot = r1 + t1 * r3 * t2 * round_trip_phase / denominator
    t_tot = t1 * t3 * np.exp(1j * np.asarray(delta)) / denominator
    r_tot_prime = r4 + t4 * r2 * t3 * round_trip_phase / denominator
    t_tot_prime = t1 * t3 * np.exp(1j * np.asarray(delta)) / denominator
    return r_tot, t_tot, r_tot_prime, t_tot_prime, denominator


def interface_set(params: CavityParams, interfaces: str = "solve") -> tuple:
    """Returns the four single-interface coefficient sets in INTERFACE_ORDER.

    "solve" runs the continuity solve for every configuration; "derived" solves the forward configuration
    and obtains the others from the closed-form substitutions.
    """
    if interfaces == "solve":
        return tuple(solve_interface(InterfaceConfig(tag, params.e_a, params.p_sign, params.q_convention), params.p,
                                     params.mass) for tag in INTERFACE_ORDER)
    if interfaces == "derived":
        base = solve_interface(InterfaceConfig(INTERFACE_ORDER[0], params.e_a, params.p_sign, params.q_convention),
                               params.p, params.mass)
        return tuple(derive_config_coeffs(tag, base, params.mass) for tag in INTERFACE_ORDER)
    raise ValidationError(f"interfaces must be 'solve' or 'derived', got {interfaces!r}")


def cavity_coefficients(params: CavityParams, floor: float = RESONANCE_FLOOR,
                        interfaces: str = "solve") -> CavityCoeffs:
    """Composes the temporal Fabry-Perot coefficients of the rectangular potential pulse."""
    single = interface_set(params, interfaces)
    r_tot, t_tot, r_tot_prime, t_tot_prime, denominator = compose_cavity([c.r for c in single],
                                                                         [c.t for c in single], params.delta)
    denom_magnitude = float(abs(denominator))
    if denom_magnitude < floor:
        raise ResonanceSingularityError(params.as_dict(), denom_magnitude, floor)
    if params.schwinger_flag:
        logger.warning("Cavity eA=%s tau=%s lies beyond the Schwinger limit (eA/(m^2 tau) > 1)", params.e_a,
                       params.tau)
    coeffs = CavityCoeffs(r_tot=complex(r_tot), t_tot=complex(t_tot), r_tot_prime=complex(r_tot_prime),
                          t_tot_prime=complex(t_tot_prime), energy=params.energy, energy_prime=params.energy_prime,
                          delta=params.delta, denom_magnitude=denom_magnitude, params=params, interfaces=single)
    logger.debug("Cavity %s: R=%.6g |den|=%.3e", params.as_dict(), coeffs.reflectivity, denom_magnitude)
    return coeffs


def cavity_reflectivity_curve(k, e_a: float, tau: float, mass: float = DEFAULT_MASS,
                              q_convention: QConvention = QConvention.SIGNED,
                              floor: float = None) -> ReflectivityCurve:
    """Vectorized cavity coefficients over an array of momentum magnitudes k."""
    CavityParams(e_a=e_a, tau=tau, p=0.0, mass=mass, q_convention=q_convention)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    _, q = signed_momenta(k, e_a, 1, q_convention)
    delta = -np.sqrt(q ** 2 + mass ** 2) * tau
    solved = [solve_interface_batch(tag, k, e_a, mass, 1, q_convention) for tag in INTERFACE_ORDER]
    r_tot, t_tot, _, _, denominator = compose_cavity([r for r, _ in solved], [t for _, t in solved], delta)
    denom_magnitude = np.abs(denominator)
    if floor is not None and np.min(denom_magnitude) < floor:
        worst = int(np.argmin(denom_magnitude))
        raise ResonanceSingularityError({"eA": e_a, "tau": tau, "k": float(k[worst])},
                                        float(denom_magnitude[worst]), floor)
    return ReflectivityCurve(k=k, r_tot=r_tot, t_tot=t_tot, denom_magnitude=denom_magnitude)


def truncated_cavity_sum(params: CavityParams, bounces: int = DEFAULT_BOUNCES) -> Tuple[complex, complex]:
    """Returns (r, t) keeping only the first `bounces` round trips inside the cavity.

    Converges to cavity_coefficients when |r r' e^{2i delta}| < 1 and diverges otherwise.
    """
    if int(bounces) != bounces or bounces < 0:
        raise ValidationError(f"bounces must be a non-negative integer, got {bounces}")
    single = interface_set(params)
    r1, r2, r3, _ = [c.r for c in single]
    t1, t2, t3, _ = [c.t for c in single]
    round_trip = r3 * r2 * np.exp(2j * params.delta)
    partial = sum(round_trip ** n for n in range(int(bounces)))
    r = r1 + t1 * r3 * t2 * np.exp(2j * params.delta) * partial
    t = t1 * t3 * np.exp(1j * params.delta) * partial
    return complex(r), complex(t)


def ideal_cavity(reflectivity: float, phase: float = 0.0) -> CavityCoeffs:
    """Synthetic cavity of reflectivity R obeying every PT identity exactly."""
    if not (math.isfinite(reflectivity) and reflectivity >= 0):
        raise ValidationError(f"Reflectivity R must be finite and non-negative, got {reflectivity}")
    common = np.exp(1j * phase)
    r = 1j * math.sqrt(reflectivity) * common
    t = math.sqrt(1 + reflectivity) * common
    return CavityCoeffs(r_tot=complex(r), t_tot=complex(t), r_tot_prime=complex(-r), t_tot_prime=complex(t))


def verify_symmetries(c: CavityCoeffs) -> SymmetryReport:
    """Checks the PT identities of the cavity coefficients.

    Residuals are scaled by |t|^2 (or |t|) so they stay meaningful once R is large.
    """
    r, t, r_prime, t_prime = c.r_tot, c.t_tot, c.r_tot_prime, c.t_tot_prime
    t_squared = abs(t) ** 2
    w = r ** 2 * np.conj(t * t_prime)
    residuals = {
        "conservation": abs(t_squared - abs(r) ** 2 - 1) / t_squared,
        "reflected_flux": abs(t_squared + r_prime * np.conj(r) - 1) / t_squared,
        "cross_flux": abs(r * np.conj(t) + np.conj(r) * t_prime) / t_squared,
        "r_prime": abs(r_prime + r) / abs(t),
        "t_mag": abs(abs(t_prime) - abs(t)) / abs(t),
        "unit_det": abs(abs(r * r_prime - t * t_prime) - 1) / t_squared,
        "quadrature": abs((r * np.conj(t)).real) / t_squared,
        "phase_sum": (abs(w.imag) + max(0.0, w.real)) / (t_squared * abs(t_prime) ** 2),
        "t_phase": abs((t * np.conj(t_prime)).imag) / (abs(t) * abs(t_prime)),
    }
    if c.interfaces:
        t1, t2, t3, t4 = [single.t for single in c.interfaces]
        residuals["transmission_product"] = abs(t1 * t3 - t4 * t2) / abs(t1 * t3)
    return SymmetryReport(residuals={name: float(value) for name, value in residuals.items()})

