import math

import numpy as np
import pytest

from app.cavity.fabry_perot_functions import cavity_coefficients
from app.cavity.model import CavityParams
from app.errors import IntegrationError
from app.errors import ValidationError
from app.interface.constants import ORACLE_DEFAULT_WIDTH
from app.interface.dirac_ode_model import Profile
from app.interface.dirac_ode_model import evolution_matrix
from app.interface.dirac_ode_model import ode_oracle
from app.interface.dirac_ode_model import richardson
from app.interface.fresnel_functions import solve_interface
from app.interface.model import InterfaceConfig
from app.interface.model import InterfaceTag
from app.sweep.constants import CAVITY_COEFFICIENTS
from app.sweep.ledger_model import load_reference_points

REFERENCE_POINTS = load_reference_points()


def relative_error(value, reference):
    return abs(value - reference) / abs(reference)


def point_id(point):
    return ",".join(f"{key}={value:g}" for key, value in point.items())


@pytest.mark.parametrize("point", REFERENCE_POINTS.interfaces, ids=point_id)
def test_step_oracle_matches_continuity_solve(point):
    result = ode_oracle(ORACLE_DEFAULT_WIDTH, point.p, point.eA)
    sharp = solve_interface(InterfaceConfig(InterfaceTag.E_TO_EPRIME_FORWARD, point.eA), point.p)
    assert relative_error(result.coefficients.r, sharp.r) < 1e-4
    assert relative_error(result.coefficients.t, sharp.t) < 1e-4
    assert result.widths == (ORACLE_DEFAULT_WIDTH, ORACLE_DEFAULT_WIDTH / 2, ORACLE_DEFAULT_WIDTH / 4)


@pytest.mark.parametrize("point", REFERENCE_POINTS.cavities, ids=point_id)
def test_cavity_oracle_matches_composition(point):
    result = ode_oracle(ORACLE_DEFAULT_WIDTH, point.k, point.eA, profile=Profile(tau=point.tau))
    sharp = cavity_coefficients(CavityParams(e_a=point.eA, tau=point.tau, p=point.k))
    for name in CAVITY_COEFFICIENTS:
        assert relative_error(getattr(result.coefficients, name), getattr(sharp, name)) < 1e-3, name


def test_reference_points_include_the_resonance_window_point():
    assert {"k": 10.0, "eA": 10.0, "tau": 1.5} in [dict(point) for point in REFERENCE_POINTS.cavities]
    assert {"p": 1.0, "eA": 3.0} in [dict(point) for point in REFERENCE_POINTS.interfaces]


@pytest.mark.parametrize("p, e_a, tau", [(1.0, 3.0, None), (10.0, 10.0, 1.5)])
def test_oracle_error_shrinks_with_width(p, e_a, tau):
    profile = Profile(tau=tau)
    result = ode_oracle(ORACLE_DEFAULT_WIDTH, p, e_a, profile=profile)
    if profile.is_cavity:
        sharp_r = cavity_coefficients(CavityParams(e_a=e_a, tau=tau, p=p)).r_tot
    else:
        sharp_r = solve_interface(InterfaceConfig(InterfaceTag.E_TO_EPRIME_FORWARD, e_a), p).r
    errors = [abs(value - sharp_r) for value in result.samples["r"]]
    assert errors[0] > errors[1] > errors[2]
    assert relative_error(result.coefficients.r, sharp_r) <= errors[2] / abs(sharp_r)


def test_evolution_is_unitary():
    evolution, t0, t1 = evolution_matrix(0.05, 1.0, 3.0, 1.0, Profile(tau=1.0))
    np.testing.assert_allclose(evolution.conj().T @ evolution, np.eye(2), atol=1e-8)
    assert t0 < 0 < 1.0 < t1


def test_richardson_second_order():
    value, order, residual = richardson([1 + 0.1 ** 2, 1 + 0.05 ** 2, 1 + 0.025 ** 2])
    assert value == pytest.approx(1.0, abs=1e-12)
    assert order == pytest.approx(2.0)
    assert residual == pytest.approx(0.025 ** 2)


def test_richardson_below_noise_floor():
    value, order, residual = richardson([0.5, 0.5, 0.5])
    assert value == 0.5
    assert math.isnan(order)
    assert residual == 0


def test_richardson_rejects_divergence():
    with pytest.raises(IntegrationError):
        richardson([1.0, 1.001, 1.01])


def test_envelope_shapes():
    step, cavity = Profile(), Profile(tau=2.0)
    assert step.envelope(0.0, 0.1) == pytest.approx(0.5)
    assert cavity.envelope(1.0, 0.01) == pytest.approx(1.0)
    assert cavity.envelope(5.0, 0.01) == pytest.approx(0.0, abs=1e-12)


def test_invalid_oracle_input():
    with pytest.raises(ValidationError):
        ode_oracle(0.0, 1.0, 3.0)
    with pytest.raises(ValidationError):
        ode_oracle(0.02, 1.0, -3.0)
    with pytest.raises(ValidationError):
        Profile(tau=-1.0)
