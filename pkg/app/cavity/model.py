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
import math
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import Optional
from typing import Tuple

import numpy as np

from .constants import SCHWINGER_THRESHOLD
from .constants import SYMMETRY_TOLERANCE
from ..errors import ValidationError
from ..interface.fresnel_functions import signed_momenta
from ..interface.model import InterfaceCoeffs
from ..interface.model import QConvention
from ..spinor.constants import DEFAULT_MASS


def schwinger_flag(e_a: float, tau: float, mass: float = DEFAULT_MASS) -> bool:
    """Returns True when the field e|A|/tau exceeds the Schwinger field m^2."""
    return abs(e_a) / (mass ** 2 * tau) > SCHWINGER_THRESHOLD


@dataclass(frozen=True)
class GridRange:
    """Linear grid start:stop:count with both ends included."""
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValidationError(f"Grid ends must be finite, got {self.start}:{self.stop}")
        if not self.start < self.stop:
            raise ValidationError(f"Grid start must be below stop, got {self.start}:{self.stop}")
        if int(self.count) != self.count or self.count < 2:
            raise ValidationError(f"Grid count must be an integer >= 2, got {self.count}")
        object.__setattr__(self, "count", int(self.count))

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def from_string(cls, text: str) -> "GridRange":
        """Parses 'start:stop:count', e.g. '1:60:600'."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"Range {text!r} must look like start:stop:count")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as parse_error:
            raise ValidationError(f"Cannot parse range {text!r}") from parse_error


@dataclass(frozen=True)
class CavityParams:
    e_a: float
    tau: float
    p: float
    mass: float = DEFAULT_MASS
    p_sign: int = 1
    q_convention: QConvention = QConvention.SIGNED

    def __post_init__(self):
        if not (math.isfinite(self.e_a) and self.e_a >= 0):
            raise ValidationError(f"eA must be finite and non-negative, got {self.e_a}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValidationError(f"Cavity duration tau must be positive and finite, got {self.tau}")
        if not (math.isfinite(self.p) and self.p >= 0):
            raise ValidationError(f"Momentum magnitude p must be finite and non-negative, got {self.p}")
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValidationError(f"Mass must be positive, got {self.mass}")
        if self.p_sign not in (1, -1):
            raise ValidationError(f"pSign must be +1 or -1, got {self.p_sign}")

    @property
    def momenta(self) -> Tuple[float, float]:
        """Returns the signed momenta (p_z, q) outside and inside the cavity."""
        return signed_momenta(self.p, self.e_a, self.p_sign, self.q_convention)

    @property
    def energy(self) -> float:
        return math.hypot(self.momenta[0], self.mass)

    @property
    def energy_prime(self) -> float:
        return math.hypot(self.momenta[1], self.mass)

    @property
    def delta(self) -> float:
        """Returns the phase delay -E' tau accumulated inside the cavity."""
        return -self.energy_prime * self.tau

    @property
    def schwinger_flag(self) -> bool:
        return schwinger_flag(self.e_a, self.tau, self.mass)

    def as_dict(self) -> dict:
        return {"eA": self.e_a, "tau": self.tau, "p": self.p, "m": self.mass, "pSign": self.p_sign,
                "qConvention": self.q_convention.value}


@dataclass(frozen=True)
class CavityCoeffs:
    """Fresnel coefficients of the temporal cavity.

    r_tot, t_tot belong to a positive-energy wave arriving from the past, r_tot_prime, t_tot_prime to a
    negative-energy wave arriving from the future. interfaces holds the four single-interface
    solutions the cavity was composed from, in the order forward, negE_from_future, Eprime_to_E,
    negEprime_from_future; it is empty for synthetic cavities.
    """
    r_tot: complex
    t_tot: complex
    r_tot_prime: complex
    t_tot_prime: complex
    energy: float = math.nan
    energy_prime: float = math.nan
    delta: float = math.nan
    denom_magnitude: float = math.nan
    params: Optional[CavityParams] = None
    interfaces: Tuple[InterfaceCoeffs, ...] = ()

    @property
    def reflectivity(self) -> float:
        return abs(self.r_tot) ** 2

    @property
    def transmittivity(self) -> float:
        return abs(self.t_tot) ** 2

    @property
    def phase_r(self) -> float:
        return float(np.angle(self.r_tot))

    @property
    def phase_t(self) -> float:
        return float(np.angle(self.t_tot))

    @property
    def phase_t_prime(self) -> float:
        return float(np.angle(self.t_tot_prime))

    @property
    def schwinger_flag(self) -> bool:
        return self.params is not None and self.params.schwinger_flag

    @property
    def eta(self) -> float:
        return eta_from_reflectivity(self.reflectivity)


def eta_from_reflectivity(reflectivity: float) -> float:
    """Returns R^2/(1+R)^2, the zigzag-channel success probability."""
    return reflectivity ** 2 / (1 + reflectivity) ** 2


@dataclass(frozen=True)
class ReflectivityCurve:
    """Cavity coefficients along a grid of momentum magnitudes at fixed eA and tau."""
    k: np.ndarray
    r_tot: np.ndarray
    t_tot: np.ndarray
    denom_magnitude: np.ndarray

    @property
    def reflectivity(self) -> np.ndarray:
        return np.abs(self.r_tot) ** 2

    @property
    def transmittivity(self) -> np.ndarray:
        return np.abs(self.t_tot) ** 2

    @property
    def phase_r(self) -> np.ndarray:
        return np.angle(self.r_tot)

    @property
    def phase_t(self) -> np.ndarray:
        return np.angle(self.t_tot)


@dataclass(frozen=True)
class SymmetryReport:
    residuals: Dict[str, float] = field(default_factory=dict)
    tolerance: float = SYMMETRY_TOLERANCE

    @property
    def max_violation(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance


@dataclass(frozen=True)
class RmaxResult:
    e_a: float
    tau: float
    k_star: float
    r_max: float
    denom_magnitude: float
    refined: bool
    mass: float = DEFAULT_MASS

    @property
    def eta(self) -> float:
        return eta_from_reflectivity(self.r_max)

    @property
    def schwinger_flag(self) -> bool:
        return schwinger_flag(self.e_a, self.tau, self.mass)
