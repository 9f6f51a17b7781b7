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
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import numpy as np

from .constants import DEFAULT_MASS
from .constants import DEFAULT_MODE_VOLUME
from .constants import MOMENTUM_MATCH_TOLERANCE
from .constants import NAMED_GATES
from .constants import PAULI_MATRICES
from .constants import SIGMA_Y
from .constants import SPIN_BASIS
from .model import Bispinor
from .model import EnergyBranch
from .model import Spinor2
from .model import UnitaryMatrix2
from ..errors import DegenerateModeError
from ..errors import ValidationError

SpinorLike = Union[Spinor2, Sequence[complex], np.ndarray]


def sigma_dot(vector) -> np.ndarray:
    """Returns sigma . vector as a 2x2 complex matrix."""
    return sum(component * pauli for component, pauli in zip(np.asarray(vector, dtype=float), PAULI_MATRICES))


def energy_of(momentum, mass: float = DEFAULT_MASS) -> float:
    """Returns the on-shell energy sqrt(p^2 + m^2)."""
    momentum = np.asarray(momentum, dtype=float)
    return float(np.sqrt(momentum @ momentum + mass ** 2))


def _as_unit_spinor(chi: SpinorLike) -> np.ndarray:
    spinor = chi if isinstance(chi, Spinor2) else Spinor2(chi)
    if spinor.norm_squared == 0:
        raise ValidationError("Spinor chi has zero norm")
    return spinor.normalized().components


def _branch(energy_sign) -> EnergyBranch:
    try:
        return EnergyBranch(int(energy_sign))
    except (TypeError, ValueError) as bad_sign:
        raise ValidationError(f"Energy sign must be +1 or -1, got {energy_sign!r}") from bad_sign


def _fix_global_phase(chi: np.ndarray) -> np.ndarray:
    """Rotates chi so that its largest-magnitude component is real and positive."""
    index = int(np.argmax(np.abs(chi)))
    return chi * np.exp(-1j * np.angle(chi[index]))


def plane_wave(momentum, energy_sign: Union[EnergyBranch, int], chi: SpinorLike, mass: float = DEFAULT_MASS,
               volume: float = DEFAULT_MODE_VOLUME, rest_direction=None, fix_phase: bool = True) -> Bispinor:
    """Builds the normalized plane-wave bispinor of momentum p on the requested energy branch.

    Positive branch: (N+ chi, N+ (sigma.p)/(E+m) chi) with N+ = sqrt((E+m)/(2EV)).
    Negative branch: (N- chi, -N+ (sigma.p^) chi) with N- = sqrt((E-m)/(2EV)), which equals
    -(sigma.p)/(E-m) times the upper component without ever dividing by E-m.

    At |p| = 0 the negative branch has no direction; a rest_direction selects the one-sided limit
    along that axis, otherwise DegenerateModeError is raised.
    """
    if not mass > 0:
        raise ValidationError(f"Mass must be positive, got {mass}")
    if not volume > 0:
        raise ValidationError(f"Mode volume must be positive, got {volume}")
    branch = _branch(energy_sign)
    momentum = np.asarray(momentum, dtype=float)
    spin = _as_unit_spinor(chi)
    if fix_phase:
        spin = _fix_global_phase(spin)

    energy = energy_of(momentum, mass)
    n_plus = np.sqrt((energy + mass) / (2 * energy * volume))
    momentum_magnitude = float(np.linalg.norm(momentum))

    if branch is EnergyBranch.POSITIVE:
        upper = n_plus * spin
        lower = n_plus * (sigma_dot(momentum) @ spin) / (energy + mass)
        return Bispinor(Spinor2(upper), Spinor2(lower), momentum, energy, mass, volume)

    if momentum_magnitude == 0:
        if rest_direction is None:
            raise DegenerateModeError("Negative-energy mode at |p| = 0 is degenerate: pass a rest_direction "
                                      "to take the one-sided limit")
        direction = np.asarray(rest_direction, dtype=float)
        if np.linalg.norm(direction) == 0:
            raise ValidationError("rest_direction must be a non-zero vector")
        unit_direction = direction / np.linalg.norm(direction)
    else:
        unit_direction = momentum / momentum_magnitude
    # E - m = p^2/(E + m), free of cancellation at small p
    n_minus = momentum_magnitude / np.sqrt(2 * energy * volume * (energy + mass))
    upper = n_minus * spin
    lower = -n_plus * (sigma_dot(unit_direction) @ spin)
    return Bispinor(Spinor2(upper), Spinor2(lower), momentum, -energy, mass, volume)


def branch_components(k, energy_sign: Union[EnergyBranch, int], mass: float = DEFAULT_MASS) -> np.ndarray:
    """Returns (upper_0, lower_0) of the spin-up collinear mode with signed momentum k along z, unit volume.

    Vectorized over k; k = 0 on the negative branch takes the limit along +z.
    """
    k = np.asarray(k, dtype=float)
    energy = np.sqrt(k ** 2 + mass ** 2)
    n_plus = np.sqrt((energy + mass) / (2 * energy))
    if _branch(energy_sign) is EnergyBranch.POSITIVE:
        upper = n_plus
        lower = n_plus * k / (energy + mass)
    else:
        upper = np.abs(k) / np.sqrt(2 * energy * (energy + mass))
        lower = -n_plus * np.where(k >= 0, 1.0, -1.0)
    return np.stack([upper, lower], axis=-1).astype(complex)


def spinor_of(psi: Bispinor) -> Spinor2:
    """Recovers the unit spinor chi a plane wave was built from."""
    energy = abs(psi.energy)
    if psi.branch is EnergyBranch.POSITIVE:
        prefactor = np.sqrt((energy + psi.mass) / (2 * energy * psi.volume))
    else:
        prefactor = np.linalg.norm(psi.momentum) / np.sqrt(2 * energy * psi.volume * (energy + psi.mass))
    if prefactor == 0:
        raise DegenerateModeError("Cannot recover chi from a negative-energy mode at rest")
    return Spinor2(psi.upper.components / prefactor)


def pt_transform(psi: Bispinor) -> Bispinor:
    """Applies the combined parity and time reversal to a plane wave.

    The returned wave, evaluated at (-t, -x), equals diag(-sigma_y, sigma_y) psi*(t, x): the same (E, p)
    mode carrying chi' = -sigma_y chi*.
    """
    upper = -SIGMA_Y @ psi.upper.components.conj()
    lower = SIGMA_Y @ psi.lower.components.conj()
    return Bispinor(Spinor2(upper), Spinor2(lower), psi.momentum, psi.energy, psi.mass, psi.volume)


def reflect_event(t: float, x) -> Tuple[float, np.ndarray]:
    """Maps the event (t, x) to (-t, -x)."""
    return -t, -np.asarray(x, dtype=float)


def overlap(a: Bispinor, b: Bispinor, allow_mismatch: bool = False) -> complex:
    """Returns a†b * V for two modes of the same momentum and volume.

    Modes with different momenta are orthogonal; that zero is only returned when allow_mismatch is set.
    """
    same_momentum = np.allclose(a.momentum, b.momentum, rtol=0, atol=MOMENTUM_MATCH_TOLERANCE)
    same_volume = np.isclose(a.volume, b.volume, rtol=1e-12, atol=0)
    if not (same_momentum and same_volume):
        if allow_mismatch:
            return 0j
        raise ValidationError(f"Overlap between mismatched modes: p={a.momentum} V={a.volume} "
                              f"vs p={b.momentum} V={b.volume}")
    return complex(np.vdot(a.components, b.components) * a.volume)


def spin_matrix_element(spin: float, unitary: UnitaryMatrix2, psi0: Bispinor) -> complex:
    """Returns C_s = psi_s†(p, E) U psi_0(p, E), with U acting on chi and the mode rebuilt on-shell."""
    if spin not in SPIN_BASIS:
        raise ValidationError(f"Spin label must be one of {sorted(SPIN_BASIS)}, got {spin}")
    if not psi0.is_on_shell:
        raise ValidationError(f"psi0 is off-shell: |E^2 - p^2 - m^2| = {psi0.on_shell_residual:.3e}")
    chi0 = spinor_of(psi0)
    rotated = plane_wave(psi0.momentum, psi0.branch, unitary.apply(chi0), psi0.mass, psi0.volume, fix_phase=False)
    basis = plane_wave(psi0.momentum, psi0.branch, SPIN_BASIS[spin], psi0.mass, psi0.volume, fix_phase=False)
    return overlap(basis, rotated)


def spin_coefficients(unitary: UnitaryMatrix2, psi0: Bispinor) -> np.ndarray:
    """Returns (C_{+1/2}, C_{-1/2})."""
    return np.array([spin_matrix_element(spin, unitary, psi0) for spin in (0.5, -0.5)])


def unitary_from_name(name: str) -> UnitaryMatrix2:
    """Looks up one of the named single-spin gates."""
    try:
        return UnitaryMatrix2(NAMED_GATES[name.strip().lower()])
    except KeyError as unknown_gate:
        raise ValidationError(f"Unknown gate {name!r}; choose from {', '.join(NAMED_GATES)}") from unknown_gate


def mode_for_spin(momentum, energy_sign: Union[EnergyBranch, int], spin: float, mass: float = DEFAULT_MASS,
                  volume: float = DEFAULT_MODE_VOLUME, rest_direction: Optional[Sequence[float]] = None) -> Bispinor:
    """Returns the basis mode psi_s(p, E) of the given spin label."""
    if spin not in SPIN_BASIS:
        raise ValidationError(f"Spin label must be one of {sorted(SPIN_BASIS)}, got {spin}")
    return plane_wave(momentum, energy_sign, SPIN_BASIS[spin], mass, volume, rest_direction=rest_direction)
