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
from dataclasses import dataclass
from dataclasses import field
from enum import IntEnum

import numpy as np

from .constants import DEFAULT_MASS
from .constants import DEFAULT_MODE_VOLUME
from .constants import ON_SHELL_TOLERANCE
from .constants import UNIT_TOLERANCE
from .constants import UNITARITY_TOLERANCE
from ..errors import ValidationError


def _frozen_array(values, shape: tuple, name: str) -> np.ndarray:
    """Returns a read-only complex copy of values, checking shape and finiteness."""
    array = np.array(values, dtype=complex)
    if array.shape != shape:
        raise ValidationError(f"{name} must have shape {shape}, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{name} must be finite, got {array}")
    array.setflags(write=False)
    return array


class EnergyBranch(IntEnum):
    POSITIVE = 1
    NEGATIVE = -1


@dataclass(frozen=True, eq=False)
class Spinor2:
    """Two-component complex spinor."""
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "components", _frozen_array(self.components, (2,), "Spinor2 components"))

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.components, self.components).real)

    @property
    def is_unit(self) -> bool:
        return abs(self.norm_squared - 1.0) < UNIT_TOLERANCE

    def normalized(self) -> "Spinor2":
        """Returns the unit spinor along this one."""
        norm = np.sqrt(self.norm_squared)
        if norm == 0:
            raise ValidationError("Cannot normalize a zero-norm spinor")
        return Spinor2(self.components / norm)

    @classmethod
    def from_string(cls, text: str) -> "Spinor2":
        """Parses 'a,b' where a and b are Python complex literals, e.g. '1,0' or '0.6,0.8j'."""
        try:
            values = [complex(item.strip().replace(" ", "")) for item in text.split(",")]
        except ValueError as parse_error:
            raise ValidationError(f"Cannot parse spinor {text!r}: expected two complex numbers") from parse_error
        return cls(values)


@dataclass(frozen=True, eq=False)
class UnitaryMatrix2:
    """2x2 unitary acting on the spin degree of freedom."""
    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen_array(self.entries, (2, 2), "UnitaryMatrix2 entries")
        deviation = np.max(np.abs(entries.conj().T @ entries - np.eye(2)))
        if deviation > UNITARITY_TOLERANCE:
            raise ValidationError(f"Matrix is not unitary: max |U†U - I| = {deviation:.3e}")
        object.__setattr__(self, "entries", entries)

    def inverse(self) -> "UnitaryMatrix2":
        return UnitaryMatrix2(self.entries.conj().T)

    def __matmul__(self, other: "UnitaryMatrix2") -> "UnitaryMatrix2":
        return UnitaryMatrix2(self.entries @ other.entries)

    def apply(self, chi: Spinor2) -> Spinor2:
        return Spinor2(self.entries @ chi.components)


@dataclass(frozen=True, eq=False)
class Bispinor:
    """Dirac plane-wave amplitude in a mode volume.

    The components already include the 1/sqrt(V) normalization, so psi†psi * V = 1 for a unit mode.
    The energy is signed: negative values are the backward-in-time (positron) branch.
    """
    upper: Spinor2
    lower: Spinor2
    momentum: np.ndarray
    energy: float
    mass: float = DEFAULT_MASS
    volume: float = DEFAULT_MODE_VOLUME
    branch: EnergyBranch = field(init=False)

    def __post_init__(self):
        momentum = np.array(self.momentum, dtype=float)
        if momentum.shape != (3,) or not np.all(np.isfinite(momentum)):
            raise ValidationError(f"Momentum must be a finite 3-vector, got {self.momentum!r}")
        momentum.setflags(write=False)
        object.__setattr__(self, "momentum", momentum)
        if not self.mass > 0:
            raise ValidationError(f"Mass must be positive, got {self.mass}")
        if not self.volume > 0:
            raise ValidationError(f"Mode volume must be positive, got {self.volume}")
        object.__setattr__(self, "branch", EnergyBranch.POSITIVE if self.energy > 0 else EnergyBranch.NEGATIVE)

    @property
    def components(self) -> np.ndarray:
        return np.concatenate([self.upper.components, self.lower.components])

    @property
    def density(self) -> float:
        """Returns psi†psi * V."""
        return float(np.vdot(self.components, self.components).real) * self.volume

    @property
    def on_shell_residual(self) -> float:
        return abs(self.energy ** 2 - float(self.momentum @ self.momentum) - self.mass ** 2)

    @property
    def is_on_shell(self) -> bool:
        scale = max(1.0, self.energy ** 2)
        return self.on_shell_residual < ON_SHELL_TOLERANCE * scale

    def evaluate(self, t: float, x) -> np.ndarray:
        """Returns psi(t, x) = components * exp(i(p.x - E t))."""
        phase = np.exp(1j * (float(self.momentum @ np.asarray(x, dtype=float)) - self.energy * t))
        return self.components * phase
