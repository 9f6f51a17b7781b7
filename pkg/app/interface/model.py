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
from enum import Enum

from ..errors import ValidationError
from ..spinor.model import EnergyBranch


class QConvention(Enum):
    """How the momentum inside the potential is labelled."""
    SIGNED = "signed"  # q = p - eA
    MAGNITUDE = "magnitude"  # q = |p - eA|


class Region(Enum):
    FREE = "free"  # A = 0, momentum p, energy E
    POTENTIAL = "potential"  # A = eA, momentum q, energy E'


class InterfaceTag(Enum):
    """The four single-interface scattering configurations.

    Waves are listed as (incident, reflected, transmitted), each with its energy branch and region:

    E_to_Eprime_forward      +E from the past -> -E reflected, +E' transmitted
    negE_from_future         -E' from the future -> +E' reflected, -E transmitted
    Eprime_to_E_forward      +E' from the past -> -E' reflected, +E transmitted
    negEprime_from_future    -E from the future -> +E reflected, -E' transmitted
    """
    E_TO_EPRIME_FORWARD = "E_to_Eprime_forward"
    NEG_E_FROM_FUTURE = "negE_from_future"
    EPRIME_TO_E_FORWARD = "Eprime_to_E_forward"
    NEG_EPRIME_FROM_FUTURE = "negEprime_from_future"

    @property
    def waves(self) -> tuple:
        """Returns ((branch, region) of incident, reflected, transmitted)."""
        return _WAVES[self]

    def slots(self, energy: float, energy_prime: float, p: float, q: float) -> tuple:
        """Returns the (E, E', p, q) arguments of the closed forms after this configuration's substitution."""
        if self is InterfaceTag.E_TO_EPRIME_FORWARD:
            return energy, energy_prime, p, q
        if self is InterfaceTag.NEG_E_FROM_FUTURE:
            return -energy_prime, -energy, q, p
        if self is InterfaceTag.EPRIME_TO_E_FORWARD:
            return energy_prime, energy, q, p
        return -energy, -energy_prime, p, q

    @classmethod
    def from_string(cls, value: str) -> "InterfaceTag":
        try:
            return cls(value)
        except ValueError as unknown_tag:
            choices = ", ".join(tag.value for tag in cls)
            raise ValidationError(f"Unknown interface configuration {value!r}; choose from {choices}") from unknown_tag


_WAVES = {
    InterfaceTag.E_TO_EPRIME_FORWARD: ((EnergyBranch.POSITIVE, Region.FREE),
                                       (EnergyBranch.NEGATIVE, Region.FREE),
                                       (EnergyBranch.POSITIVE, Region.POTENTIAL)),
    InterfaceTag.NEG_E_FROM_FUTURE: ((EnergyBranch.NEGATIVE, Region.POTENTIAL),
                                     (EnergyBranch.POSITIVE, Region.POTENTIAL),
                                     (EnergyBranch.NEGATIVE, Region.FREE)),
    InterfaceTag.EPRIME_TO_E_FORWARD: ((EnergyBranch.POSITIVE, Region.POTENTIAL),
                                       (EnergyBranch.NEGATIVE, Region.POTENTIAL),
                                       (EnergyBranch.POSITIVE, Region.FREE)),
    InterfaceTag.NEG_EPRIME_FROM_FUTURE: ((EnergyBranch.NEGATIVE, Region.FREE),
                                          (EnergyBranch.POSITIVE, Region.FREE),
                                          (EnergyBranch.NEGATIVE, Region.POTENTIAL)),
}


@dataclass(frozen=True)
class InterfaceConfig:
    tag: InterfaceTag
    e_a: float
    p_sign: int = 1
    q_convention: QConvention = QConvention.SIGNED

    def __post_init__(self):
        if not isinstance(self.tag, InterfaceTag):
            object.__setattr__(self, "tag", InterfaceTag.from_string(str(self.tag)))
        if not math.isfinite(self.e_a) or self.e_a < 0:
            raise ValidationError(f"eA must be finite and non-negative, got {self.e_a}")
        if self.p_sign not in (1, -1):
            raise ValidationError(f"pSign must be +1 or -1, got {self.p_sign}")


@dataclass(frozen=True)
class InterfaceCoeffs:
    """Reflection/transmission pair of one configuration.

    energy/energy_prime are the free and in-potential energies, p and q the signed momenta along the
    shared axis. condition_number is NaN when the coefficients come from a closed form.
    """
    tag: InterfaceTag
    r: complex
    t: complex
    energy: float
    energy_prime: float
    p: float
    q: float
    condition_number: float = math.nan

    @property
    def reflectivity(self) -> float:
        return abs(self.r) ** 2

    @property
    def transmittivity(self) -> float:
        return abs(self.t) ** 2

    @property
    def conservation_residual(self) -> float:
        """Returns ||t|^2 - |r|^2 - 1|."""
        return abs(self.transmittivity - self.reflectivity - 1.0)
