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
from numbers import Number
from typing import Dict
from typing import Tuple
from typing import Union

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class PhaseFactor:
    """Energy-time phase e^{-i energy time_arg}."""
    energy: float
    time_arg: float

    @property
    def value(self) -> complex:
        return complex(np.exp(-1j * self.energy * self.time_arg))

    @classmethod
    def shifter(cls, angle: float) -> "PhaseFactor":
        """Returns the phase-shifter entry e^{i angle}."""
        return cls(energy=1.0, time_arg=-angle)

    def __complex__(self):
        return self.value


Factor = Union[complex, float, PhaseFactor]


@dataclass(frozen=True)
class DiagramTerm:
    """One path amplitude: parity times the product of its factors, taken in order."""
    factors: Tuple[Factor, ...]
    parity: int = 1
    label: str = ""

    def __post_init__(self):
        if self.parity not in (1, -1):
            raise ValidationError(f"Exchange parity must be +1 or -1, got {self.parity}")
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def amplitude(self) -> complex:
        product = complex(self.parity)
        for factor in self.factors:
            product *= complex(factor)
        return product


@dataclass(frozen=True)
class VacuumChannel:
    reflectivity: float
    multiplicity: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.reflectivity) and self.reflectivity >= 0):
            raise ValidationError(f"Channel reflectivity must be finite and non-negative, got {self.reflectivity}")
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise ValidationError(f"Channel multiplicity must be an integer >= 1, got {self.multiplicity}")


@dataclass(frozen=True)
class VacuumSpec:
    """Independent pair-creation channels of one experiment."""
    channels: Tuple[VacuumChannel, ...] = ()

    def union(self, other: "VacuumSpec") -> "VacuumSpec":
        return VacuumSpec(self.channels + other.channels)

    @classmethod
    def cavities(cls, reflectivity: float, count: int) -> "VacuumSpec":
        """Returns `count` identical cavity channels of reflectivity R."""
        return cls((VacuumChannel(reflectivity, count),))


@dataclass(frozen=True)
class ExperimentReport:
    name: str
    outcomes: Dict[str, float]
    vacuum_probability: float
    complete: bool = True
    diagnostics: dict = field(default_factory=dict)

    @property
    def sum_check(self) -> float:
        return float(sum(self.outcomes.values()))

    def to_json_dict(self) -> dict:
        return {
            "experiment": self.name,
            "outcomes": plain_value(self.outcomes),
            "vacuumProbability": self.vacuum_probability,
            "sumCheck": self.sum_check,
            "complete": self.complete,
            "diagnostics": plain_value(self.diagnostics),
        }


def plain_value(value):
    """Converts complex numbers, numpy values and nested containers to JSON-ready Python values."""
    if isinstance(value, ExperimentReport):
        return value.to_json_dict()
    if isinstance(value, dict):
        return {str(key): plain_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain_value(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Number):
        return float(value)
    return value
