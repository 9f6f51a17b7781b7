import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.cavity.fabry_perot_functions import ideal_cavity
from app.errors import ValidationError
from app.experiments.constants import C_PORT
from app.experiments.constants import CTC_VARIANTS
from app.experiments.constants import D1_ONLY
from app.experiments.constants import D2_ONLY
from app.experiments.constants import D3_ONLY
from app.experiments.constants import R0
from app.experiments.ctc_model import ctc_ring
from app.experiments.ctc_model import deutsch_ctc
from app.experiments.ctc_model import pair_channel_weights
from app.experiments.ctc_model import spin_matrix
from app.experiments.model import CtcSpec
from app.experiments.model import SwitchSpec
from app.experiments.switch_model import order_coefficients
from app.experiments.switch_model import quantum_switch
from app.experiments.switch_model import switch_vacuum_report
from app.interface.constants import COLLINEAR_AXIS
from app.spinor.constants import NAMED_GATES
from app.spinor.model import EnergyBranch
from app.spinor.model import Spinor2
from app.spinor.spinor_functions import unitary_from_name

UP = Spinor2([1, 0])


def switch_spec(gate_a="x", gate_b="z", xi=0.0, reflectivity=R0, psi0=UP):
    return SwitchSpec(u_a=unitary_from_name(gate_a), u_b=unitary_from_name(gate_b), psi0=psi0, xi=xi,
                      cavity=ideal_cavity(reflectivity))


def ring_spec(gate="h", xi=0.3, reflectivity=0.5, alpha=1.0, variant="t2"):
    return CtcSpec(unitary=unitary_from_name(gate), xi=xi, cavity=ideal_cavity(reflectivity), alpha=alpha,
                   variant=variant)


@pytest.mark.parametrize("gates", [("x", "z"), ("h", "s"), ("identity", "y")])
def test_switch_total_does_not_depend_on_xi(gates):
    totals = []
    for xi in np.linspace(0, 2 * math.pi, 50):
        outcomes = quantum_switch(switch_spec(*gates, xi=xi)).outcomes
        totals.append(outcomes[D2_ONLY] + outcomes[D3_ONLY])
    assert max(totals) - min(totals) < 1e-10


def test_anticommuting_gates_swap_the_output_port():
    p_v = (1 + R0) ** -4
    anticommuting = quantum_switch(switch_spec("x", "z")).outcomes
    commuting = quantum_switch(switch_spec("identity", "z")).outcomes
    assert anticommuting[D2_ONLY] == pytest.approx(p_v / 4, rel=1e-12)
    assert anticommuting[D3_ONLY] == pytest.approx(p_v / 4 * (1 + 2 * R0) ** 2, rel=1e-12)
    assert commuting[D2_ONLY] == pytest.approx(anticommuting[D3_ONLY], rel=1e-12)
    assert commuting[D3_ONLY] == pytest.approx(anticommuting[D2_ONLY], rel=1e-12)


def test_order_coefficients_of_anticommuting_gates():
    a_then_b, b_then_a = order_coefficients(switch_spec("x", "z"))
    np.testing.assert_allclose(a_then_b, [0, -1], atol=1e-14)
    np.testing.assert_allclose(b_then_a, [0, 1], atol=1e-14)


def test_switch_outcomes_are_stable():
    first = quantum_switch(switch_spec("x", "z", xi=0.4)).outcomes
    second = quantum_switch(switch_spec("x", "z", xi=0.4)).outcomes
    assert first == second


@given(reflectivity=st.floats(min_value=0, max_value=100))
def test_switch_vacuum_is_complete(reflectivity):
    report = switch_vacuum_report(reflectivity)
    assert report.sum_check == pytest.approx(1.0, abs=1e-10)
    assert report.vacuum_probability == pytest.approx((1 + reflectivity) ** -4, rel=1e-12)


def test_switch_report_carries_vacuum():
    report = quantum_switch(switch_spec())
    assert not report.complete
    assert report.diagnostics["vacuum"].sum_check == pytest.approx(1.0, abs=1e-10)


def test_switch_rejects_bad_input():
    with pytest.raises(ValidationError):
        switch_spec(xi=float("inf"))
    with pytest.raises(ValidationError):
        switch_vacuum_report(-1.0)


@pytest.mark.parametrize("gate", sorted(NAMED_GATES))
def test_spin_matrix_of_collinear_mode(gate):
    unitary = unitary_from_name(gate)
    matrix = spin_matrix(unitary, COLLINEAR_AXIS, EnergyBranch.POSITIVE)
    np.testing.assert_allclose(matrix, unitary.entries, atol=1e-14)


def test_ring_fixed_point():
    spec = ring_spec()
    report = ctc_ring(spec)
    assert report.diagnostics["fixedPointResidual"] < 1e-12
    loop = spec.cavity.r_tot * spec.cavity.r_tot_prime * np.exp(1j * spec.xi) * spin_matrix(
        spec.unitary, COLLINEAR_AXIS, EnergyBranch.POSITIVE)
    expected = np.linalg.solve(np.eye(2) - 1j / math.sqrt(2) * loop, np.array([1, 0]) / math.sqrt(2))
    np.testing.assert_allclose(report.diagnostics["c"], expected, atol=1e-12)


def test_ring_reports_both_variants():
    report = ctc_ring(ring_spec())
    excess = report.diagnostics["excess"]
    assert set(excess) == set(CTC_VARIANTS)
    assert excess[report.diagnostics["preferredVariant"]] == min(excess.values())
    assert report.diagnostics["vacuum"].sum_check == pytest.approx(1.0, abs=1e-10)
    assert not report.complete


def test_pair_weights_vanish_without_reflection():
    weights = pair_channel_weights(ring_spec(reflectivity=0.0))
    assert weights.weights["A"] == 0 and weights.weights["C"] == 0 and weights.weights["D"] == 0
    assert weights.vacuum_probability == pytest.approx(1 / (1 + weights.weights["B"] + weights.weights["E"]))


def test_ring_rejects_unknown_variant():
    with pytest.raises(ValidationError):
        ring_spec(variant="t3")
    with pytest.raises(ValidationError):
        pair_channel_weights(ring_spec(), variant="t3")


@pytest.mark.parametrize("alpha, expected", [(0.0, 2 / 3), (1.0, 2 / 9)])
def test_deutsch_loop(alpha, expected):
    report = deutsch_ctc(alpha)
    assert report.outcomes[D1_ONLY] == pytest.approx(expected, abs=1e-12)
    assert report.outcomes[C_PORT] == pytest.approx(0.0, abs=1e-12)
    assert report.diagnostics["vacuum"].sum_check == pytest.approx(1.0, abs=1e-12)


def test_deutsch_needs_unit_reflectivity_when_strict():
    with pytest.raises(ValidationError):
        deutsch_ctc(1.0, reflectivity=0.5)
    report = deutsch_ctc(1.0, reflectivity=0.5, strict=False)
    raw_c_port = (1 - 0.5) ** 2 / 4
    assert report.outcomes[C_PORT] == pytest.approx(raw_c_port * report.vacuum_probability, rel=1e-12)
    assert report.outcomes[D1_ONLY] > report.outcomes[C_PORT]


def test_deutsch_loop_phase_opens_the_c_port():
    report = deutsch_ctc(0.0, loop_phase=0.0)
    assert report.outcomes[D1_ONLY] == pytest.approx(0.0, abs=1e-12)
    assert report.outcomes[C_PORT] == pytest.approx(1 / 3, abs=1e-12)
