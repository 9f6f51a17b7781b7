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
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import Optional
from typing import Tuple
from typing import Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import expit

from .constants import ORACLE_ATOL
from .constants import ORACLE_MAX_ORDER
from .constants import ORACLE_MAX_STEP_FRACTION
from .constants import ORACLE_METHOD
from .constants import ORACLE_MIN_ORDER
from .constants import ORACLE_NOISE_FLOOR
from .constants import ORACLE_REFINEMENTS
from .constants import ORACLE_RTOL
from .constants import ORACLE_WINDOW_WIDTHS
from .model import InterfaceCoeffs
from .model import InterfaceTag
from ..cavity.model import CavityCoeffs
from ..cavity.model import CavityParams
from ..errors import IntegrationError
from ..errors import ValidationError
from ..spinor.constants import DEFAULT_MASS
from ..spinor.model import EnergyBranch
from ..spinor.spinor_functions import branch_components

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Profile:
    """Time envelope f(t) of the potential: a single logistic step at t=0, or a cavity of duration tau."""
    tau: Optional[float] = None

    def __post_init__(self):
        if self.tau is not None and not (math.isfinite(self.tau) and self.tau > 0):
            raise ValidationError(f"Cavity duration tau must be positive and finite, got {self.tau}")

    @property
    def is_cavity(self) -> bool:
        return self.tau is not None

    @property
    def end(self) -> float:
        return self.tau if self.is_cavity else 0.0

    def envelope(self, t: float, width: float) -> float:
        rise = expit(t / width)
        if not self.is_cavity:
            return rise
        return rise - expit((t - self.tau) / width)


SINGLE_STEP = Profile()


@dataclass(frozen=True)
class OracleResult:
    profile: Profile
    widths: Tuple[float, ...]
    coefficients: Union[InterfaceCoeffs, CavityCoeffs]
    samples: Dict[str, Tuple[complex, ...]] = field(default_factory=dict)
    orders: Dict[str, float] = field(default_factory=dict)
    richardson_residual: float = 0.0


def evolution_matrix(width: float, p_z: float, e_a: float, mass: float, profile: Profile,
                     rtol: float = ORACLE_RTOL, atol: float = ORACLE_ATOL) -> Tuple[np.ndarray, float, float]:
    """Integrates dS/dt = -i H(t) S, S(t0) = I, for H = (p - eA f(t)) sigma_x + m sigma_z.

    This is the Dirac Hamiltonian restricted to the spin-up collinear components (upper[0], lower[0]).
    Returns (S, t0, t1).
    """
    half_window = ORACLE_WINDOW_WIDTHS * width
    t0, t1 = -half_window, profile.end + half_window

    def rhs(t, y):
        kinetic = p_z - e_a * profile.envelope(t, width)
        hamiltonian = np.array([[mass, kinetic], [kinetic, -mass]], dtype=complex)
        return (-1j * (hamiltonian @ y.reshape(2, 2))).ravel()

    solution = solve_ivp(rhs, (t0, t1), np.eye(2, dtype=complex).ravel(), method=ORACLE_METHOD, rtol=rtol,
                         atol=atol, max_step=ORACLE_MAX_STEP_FRACTION * width)
    if not solution.success:
        raise IntegrationError(f"Time integration failed at width {width}: {solution.message}")
    return solution.y[:, -1].reshape(2, 2), t0, t1


def _scatter(width: float, p_z: float, q: float, e_a: float, mass: float, profile: Profile) -> Dict[str, complex]:
    """Extracts the boundary-value scattering amplitudes from one evolution matrix.

    Forward: psi(t0) = u+ e^{-iE t0} + r u- e^{iE t0}, no negative-energy wave after the profile.
    Backward: a negative-energy wave arriving from the future, nothing positive before the profile.
    """
    evolution, t0, t1 = evolution_matrix(width, p_z, e_a, mass, profile)
    k_after = p_z if profile.is_cavity else q
    energy_before, energy_after = math.hypot(p_z, mass), math.hypot(k_after, mass)
    up_before = branch_components(p_z, EnergyBranch.POSITIVE, mass)
    down_before = branch_components(p_z, EnergyBranch.NEGATIVE, mass)
    up_after = branch_components(k_after, EnergyBranch.POSITIVE, mass)
    down_after = branch_components(k_after, EnergyBranch.NEGATIVE, mass)

    evolved_up = evolution @ up_before
    evolved_down = evolution @ down_before
    down_down = np.vdot(down_after, evolved_down)
    if abs(down_down) == 0:
        raise IntegrationError(f"Degenerate evolution at width {width}")
    phase_before = np.exp(1j * energy_before * t0)
    phase_after = np.exp(1j * energy_after * t1)

    r = -np.vdot(down_after, evolved_up) / phase_before / (down_down * phase_before)
    final = evolution @ (up_before / phase_before + r * down_before * phase_before)
    amplitudes = {"r": complex(r), "t": complex(np.vdot(up_after, final) * phase_after)}
    if profile.is_cavity:
        t_prime = phase_after / (down_down * phase_before)
        amplitudes["t_prime"] = complex(t_prime)
        amplitudes["r_prime"] = complex(np.vdot(up_after, evolved_down) * t_prime * phase_before * phase_after)
    return amplitudes


def richardson(values) -> Tuple[complex, float, float]:
    """Extrapolates a sequence of values at widths eps, eps/2, eps/4 to zero width.

    Returns (extrapolated value, estimated order, residual |extrapolated - finest|).
    """
    coarse, middle, fine = values[-3:]
    first_gap, second_gap = abs(coarse - middle), abs(middle - fine)
    if first_gap < ORACLE_NOISE_FLOOR and second_gap < ORACLE_NOISE_FLOOR:
        return fine, math.nan, second_gap
    if second_gap >= first_gap:
        raise IntegrationError("Oracle does not converge under width halving", second_gap)
    order = min(max(math.log2(first_gap / second_gap), ORACLE_MIN_ORDER), ORACLE_MAX_ORDER)
    extrapolated = fine + (fine - middle) / (2 ** order - 1)
    return extrapolated, order, abs(extrapolated - fine)


def ode_oracle(width: float, p: float, e_a: float, mass: float = DEFAULT_MASS, profile: Profile = SINGLE_STEP,
               p_sign: int = 1) -> OracleResult:
    """Independent check of the sharp-interface coefficients by direct time integration.

    The step is smoothed by a logistic of width eps; the run is repeated at eps/2 and eps/4 and
    Richardson-extrapolated to eps -> 0. For the cavity the transmissions are reported with the
    e^{iE tau} half-delay phase removed and r' referenced to the closing interface.
    """
    if not (math.isfinite(width) and width > 0):
        raise ValidationError(f"Profile width must be positive, got {width}")
    if not (math.isfinite(p) and p >= 0):
        raise ValidationError(f"Momentum magnitude p must be finite and non-negative, got {p}")
    if not (math.isfinite(e_a) and e_a >= 0):
        raise ValidationError(f"eA must be finite and non-negative, got {e_a}")
    if not mass > 0:
        raise ValidationError(f"Mass must be positive, got {mass}")

    p_z = p_sign * p
    q = p_z - e_a
    widths = tuple(width / 2 ** level for level in range(ORACLE_REFINEMENTS))
    runs = [_scatter(w, p_z, q, e_a, mass, profile) for w in widths]
    samples = {name: tuple(run[name] for run in runs) for name in runs[0]}

    extrapolated, orders, residual = {}, {}, 0.0
    for name, values in samples.items():
        extrapolated[name], orders[name], name_residual = richardson(values)
        residual = max(residual, name_residual)
    logger.info("Oracle %s p=%s eA=%s: residual %.2e, orders %s", "cavity" if profile.is_cavity else "step", p,
                e_a, residual, orders)

    energy, energy_prime = math.hypot(p_z, mass), math.hypot(q, mass)
    if not profile.is_cavity:
        coefficients = InterfaceCoeffs(tag=InterfaceTag.E_TO_EPRIME_FORWARD, r=extrapolated["r"],
                                       t=extrapolated["t"], energy=energy, energy_prime=energy_prime, p=p_z, q=q)
    else:
        half_delay = np.exp(-1j * energy * profile.tau)
        coefficients = CavityCoeffs(r_tot=extrapolated["r"], t_tot=complex(extrapolated["t"] * half_delay),
                                    r_tot_prime=complex(extrapolated["r_prime"] * half_delay ** 2),
                                    t_tot_prime=complex(extrapolated["t_prime"] * half_delay),
                                    energy=energy, energy_prime=energy_prime, delta=-energy_prime * profile.tau,
                                    denom_magnitude=math.nan,
                                    params=CavityParams(e_a=e_a, tau=profile.tau, p=p, mass=mass, p_sign=p_sign))
    return OracleResult(profile=profile, widths=widths, coefficients=coefficients, samples=samples, orders=orders,
                        richardson_residual=residual)
