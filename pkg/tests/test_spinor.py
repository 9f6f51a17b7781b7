import math

import numpy as np
import pytest
from hypothesis import assume
from hypothesis import given
from hypothesis import strategies as st

from app.errors import DegenerateModeError
from app.errors import ValidationError
from app.spinor.constants import PT_INVOLUTION_SIGN
from app.spinor.constants import SIGMA_Y
from app.spinor.model import EnergyBranch
from app.spinor.model import Spinor2
from app.spinor.model import UnitaryMatrix2
from app.spinor.spinor_functions import mode_for_spin
from app.spinor.spinor_functions import overlap
from app.spinor.spinor_functions import plane_wave
from app.spinor.spinor_functions import pt_transform
from app.spinor.spinor_functions import reflect_event
from app.spinor.spinor_functions import spin_coefficients
from app.spinor.spinor_functions import spin_matrix_element
from app.spinor.spinor_functions import spinor_of
from app.spinor.spinor_functions import unitary_from_name

component = st.floats(min_value=-20, max_value=20, allow_nan=False)
momenta = st.tuples(component, component, component)
spinors = st.tuples(component, component, component, component).map(
    lambda parts: [complex(parts[0], parts[1]), complex(parts[2], parts[3])])


def test_rest_frame_mode():
    psi = plane_wave([0, 0, 0], 1, [1, 0])
    np.testing.assert_allclose(psi.components, [1, 0, 0, 0], atol=1e-15)
    assert psi.energy == 1.0
    assert psi.branch is EnergyBranch.POSITIVE


def test_positive_mode_along_z():
    psi = plane_wave([0, 0, 1], 1, [1, 0])
    energy = math.sqrt(2)
    norm = math.sqrt((energy + 1) / (2 * energy))
    np.testing.assert_allclose(psi.components, [norm, 0, norm / (energy + 1), 0], atol=1e-15)


@given(momentum=momenta, chi=spinors, sign=st.sampled_from([1, -1]))
def test_modes_are_normalized_and_on_shell(momentum, chi, sign):
    assume(np.linalg.norm(chi) > 1e-3)
    assume(sign > 0 or np.linalg.norm(momentum) > 1e-6)
    psi = plane_wave(momentum, sign, chi)
    assert psi.density == pytest.approx(1.0, abs=1e-12)
    assert psi.is_on_shell
    assert np.sign(psi.energy) == sign


@given(momentum=momenta, chi=spinors)
def test_energy_branches_are_orthogonal(momentum, chi):
    assume(np.linalg.norm(chi) > 1e-3)
    assume(np.linalg.norm(momentum) > 1e-6)
    positive = plane_wave(momentum, 1, chi)
    negative = plane_wave(momentum, -1, chi)
    assert abs(overlap(positive, negative)) < 1e-12


def test_negative_mode_at_rest_needs_direction():
    with pytest.raises(DegenerateModeError):
        plane_wave([0, 0, 0], -1, [1, 0])
    psi = plane_wave([0, 0, 0], -1, [1, 0], rest_direction=[0, 0, 1])
    np.testing.assert_allclose(psi.components, [0, 0, -1, 0], atol=1e-15)


def test_zero_spinor_rejected():
    with pytest.raises(ValidationError):
        plane_wave([0, 0, 1], 1, [0, 0])


def test_overlap_of_mismatched_momenta():
    a = plane_wave([0, 0, 1], 1, [1, 0])
    b = plane_wave([0, 0, 2], 1, [1, 0])
    with pytest.raises(ValidationError):
        overlap(a, b)
    assert overlap(a, b, allow_mismatch=True) == 0


@given(momentum=momenta, chi=spinors, sign=st.sampled_from([1, -1]))
def test_pt_twice_flips_sign(momentum, chi, sign):
    assume(np.linalg.norm(chi) > 1e-3)
    assume(np.linalg.norm(momentum) > 1e-6)
    psi = plane_wave(momentum, sign, chi)
    twice = pt_transform(pt_transform(psi))
    np.testing.assert_allclose(twice.components, PT_INVOLUTION_SIGN * psi.components, atol=1e-13)


def test_pt_maps_reflected_event_to_conjugate():
    psi = plane_wave([0.3, -0.4, 1.2], 1, [0.6, 0.8j])
    t, x = 0.7, np.array([0.1, 2.0, -1.5])
    reflected_t, reflected_x = reflect_event(t, x)
    transformed = pt_transform(psi).evaluate(reflected_t, reflected_x)
    expected = psi.evaluate(t, x).conj()
    expected[:2] = -SIGMA_Y @ expected[:2]
    expected[2:] = SIGMA_Y @ expected[2:]
    np.testing.assert_allclose(transformed, expected, atol=1e-14)


def test_spinor_recovered_from_mode():
    chi = Spinor2([0.6, 0.8j])
    psi = plane_wave([0, 0, 2], -1, chi, fix_phase=False)
    np.testing.assert_allclose(spinor_of(psi).components, chi.components, atol=1e-14)


def test_spin_flip_gate():
    psi = mode_for_spin([0, 0, 1], 1, 0.5)
    np.testing.assert_allclose(spin_coefficients(unitary_from_name("identity"), psi), [1, 0], atol=1e-14)
    np.testing.assert_allclose(spin_coefficients(unitary_from_name("x"), psi), [0, 1], atol=1e-14)


@given(momentum=momenta, gate=st.sampled_from(["x", "y", "z", "h", "s"]), sign=st.sampled_from([1, -1]))
def test_spin_coefficients_complete(momentum, gate, sign):
    assume(np.linalg.norm(momentum) > 1e-6)
    psi = plane_wave(momentum, sign, [0.6, 0.8])
    coefficients = spin_coefficients(unitary_from_name(gate), psi)
    assert np.sum(np.abs(coefficients) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_unknown_spin_label():
    psi = mode_for_spin([0, 0, 1], 1, 0.5)
    with pytest.raises(ValidationError):
        spin_matrix_element(1.5, unitary_from_name("x"), psi)


def test_non_unitary_matrix_rejected():
    with pytest.raises(ValidationError):
        UnitaryMatrix2([[1, 1], [0, 1]])


def test_unknown_gate():
    with pytest.raises(ValidationError):
        unitary_from_name("cnot")


def test_spinor_from_string():
    chi = Spinor2.from_string("0.6, 0.8j")
    np.testing.assert_allclose(chi.components, [0.6, 0.8j])
    assert chi.is_unit
    with pytest.raises(ValidationError):
        Spinor2.from_string("up,down")
