import math
import time

import numpy as np
import pytest
from hypothesis import assume
from hypothesis import given
from hypothesis import strategies as st

from app.errors import ValidationError
from app.interface.fresnel_functions import closed_form_r
from app.interface.fresnel_functions import closed_form_t
from app.interface.fresnel_functions import derive_config_coeffs
from app.interface.fresnel_functions import reflection_parity_residual
from app.interface.fresnel_functions import signed_momenta
from app.interface.fresnel_functions import solve_interface
from app.interface.fresnel_functions import solve_interface_batch
from app.interface.fresnel_functions import source_t_closed_form
from app.interface.model import InterfaceConfig
from app.interface.model import InterfaceTag
from app.interface.model import QConvention


def forward(p, e_a):
    return solve_interface(InterfaceConfig(InterfaceTag.E_TO_EPRIME_FORWARD, e_a), p)


@given(p=st.floats(min_value=1e-3, max_value=60), e_a=st.floats(min_value=0, max_value=50),
       tag=st.sampled_from(list(InterfaceTag)), p_sign=st.sampled_from([1, -1]))
def test_flux_conservation(p, e_a, tag, p_sign):
    assume(abs(p_sign * p - e_a) > 1e-6)
    coeffs = solve_interface(InterfaceConfig(tag, e_a, p_sign), p)
    assert coeffs.conservation_residual <= 1e-11 * max(1.0, coeffs.transmittivity)


@given(p=st.floats(min_value=1e-3, max_value=60), e_a=st.floats(min_value=0, max_value=50))
def test_forward_flux_conservation_is_absolute(p, e_a):
    assert forward(p, e_a).conservation_residual < 1e-12


@given(p=st.floats(min_value=1e-3, max_value=60), e_a=st.floats(min_value=0, max_value=50))
def test_forward_reflection_is_real(p, e_a):
    assert abs(forward(p, e_a).r.imag) < 1e-12


def test_paired_batch_conserves_flux_quickly():
    rng = np.random.default_rng(2024)
    p = rng.uniform(1e-3, 60.0, 10_000)
    e_a = rng.uniform(0.0, 50.0, 10_000)
    start = time.perf_counter()
    r, t = solve_interface_batch(InterfaceTag.E_TO_EPRIME_FORWARD, p, e_a)
    elapsed = time.perf_counter() - start
    assert r.shape == t.shape == (10_000,)
    assert np.max(np.abs(np.abs(t) ** 2 - np.abs(r) ** 2 - 1)) < 1e-12
    assert elapsed < 1.0
    for index in (0, 4_999, 9_999):
        coeffs = forward(p[index], e_a[index])
        assert r[index] == pytest.approx(coeffs.r, abs=1e-12)
        assert t[index] == pytest.approx(coeffs.t, abs=1e-12)


def test_batch_rejects_negative_potential():
    with pytest.raises(ValidationError):
        solve_interface_batch(InterfaceTag.E_TO_EPRIME_FORWARD, [1.0, 2.0], [3.0, -1.0])


def test_no_potential_no_scattering():
    coeffs = forward(2.0, 0.0)
    assert abs(coeffs.r) < 1e-14
    assert coeffs.t == pytest.approx(1.0, abs=1e-14)


def test_signed_momenta():
    assert signed_momenta(1.0, 3.0) == (1.0, -2.0)
    assert signed_momenta(1.0, 3.0, -1) == (-1.0, -4.0)
    assert signed_momenta(1.0, 3.0, q_convention=QConvention.MAGNITUDE) == (1.0, 2.0)


def test_batch_matches_scalar_solve():
    p = np.array([0.2, 1.0, 2.5, 7.0])
    for tag in InterfaceTag:
        r, t = solve_interface_batch(tag, p, 3.0)
        for index, value in enumerate(p):
            coeffs = solve_interface(InterfaceConfig(tag, 3.0), value)
            assert r[index] == pytest.approx(coeffs.r, abs=1e-12)
            assert t[index] == pytest.approx(coeffs.t, abs=1e-12)


def test_closed_forms_match_solve(reference_points):
    for point in reference_points.interfaces:
        coeffs = forward(point.p, point.eA)
        slots = (coeffs.energy, coeffs.energy_prime, coeffs.p, coeffs.q)
        assert closed_form_r(*slots) == pytest.approx(coeffs.r, rel=1e-10, abs=1e-12)
        assert closed_form_t(*slots) == pytest.approx(coeffs.t, rel=1e-10)


def test_substitutions_match_solved_configurations(reference_points):
    for point in reference_points.interfaces:
        base = forward(point.p, point.eA)
        for tag in InterfaceTag:
            solved = solve_interface(InterfaceConfig(tag, point.eA), point.p)
            derived = derive_config_coeffs(tag, base)
            assert derived.r == pytest.approx(solved.r, rel=1e-10, abs=1e-12)
            assert derived.t == pytest.approx(solved.t, rel=1e-10)


def test_substitution_needs_forward_base():
    base = solve_interface(InterfaceConfig(InterfaceTag.NEG_E_FROM_FUTURE, 3.0), 1.0)
    with pytest.raises(ValidationError):
        derive_config_coeffs(InterfaceTag.E_TO_EPRIME_FORWARD, base)


def test_reflection_parity(reference_points):
    for point in reference_points.interfaces:
        assert reflection_parity_residual(forward(point.p, point.eA)) < 1e-12


def test_printed_transmission_differs_by_energy_ratio():
    coeffs = forward(1.0, 3.0)
    slots = (coeffs.energy, coeffs.energy_prime, coeffs.p, coeffs.q)
    ratio = source_t_closed_form(*slots) / closed_form_t(*slots)
    assert ratio == pytest.approx(math.sqrt(coeffs.energy / coeffs.energy_prime), rel=1e-12)
    unshifted = forward(1.0, 0.0)
    assert source_t_closed_form(unshifted.energy, unshifted.energy_prime, unshifted.p,
                                unshifted.q) == pytest.approx(1.0, rel=1e-12)


def test_transmission_is_not_one_plus_r():
    coeffs = forward(1.0, 3.0)
    assert abs(abs(1 + coeffs.r) ** 2 - (1 + coeffs.reflectivity)) > 1e-3


def test_zero_inner_momentum_is_solved():
    coeffs = forward(3.0, 3.0)
    assert coeffs.q == 0
    assert math.isfinite(abs(coeffs.r)) and math.isfinite(abs(coeffs.t))
    assert coeffs.conservation_residual < 1e-10 * coeffs.transmittivity


def test_closed_form_rejects_rest_energy():
    with pytest.raises(ValidationError):
        closed_form_t(math.sqrt(2), 1.0, 1.0, 0.0)


def test_invalid_configurations():
    with pytest.raises(ValidationError):
        InterfaceConfig(InterfaceTag.E_TO_EPRIME_FORWARD, -1.0)
    with pytest.raises(ValidationError):
        InterfaceConfig(InterfaceTag.E_TO_EPRIME_FORWARD, 1.0, p_sign=0)
    with pytest.raises(ValidationError):
        InterfaceTag.from_string("sideways")
    with pytest.raises(ValidationError):
        forward(-1.0, 3.0)


def test_tag_from_string():
    assert InterfaceConfig("negE_from_future", 1.0).tag is InterfaceTag.NEG_E_FROM_FUTURE
