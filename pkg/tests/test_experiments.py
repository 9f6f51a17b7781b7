import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.errors import ValidationError
from app.experiments.constants import CLASSICAL_GAIN_BOUND
from app.experiments.constants import D1_D2_D3
from app.experiments.constants import D1_ONLY
from app.experiments.constants import D3_ONLY
from app.experiments.constants import ELECTRON_PLUS_PAIR
from app.experiments.constants import R0
from app.experiments.constants import R1
from app.experiments.constants import REFLECTED
from app.experiments.constants import THETA_MINUS
from app.experiments.constants import THETA_PLUS
from app.experiments.constants import TRANSMITTED
from app.experiments.interferometer_model import double_cavity
from app.experiments.interferometer_model import golden_reflectivity
from app.experiments.interferometer_model import gyni_gain
from app.experiments.interferometer_model import gyni_threshold
from app.experiments.interferometer_model import interferometer
from app.experiments.interferometer_model import interferometer_closed_form
from app.experiments.interferometer_model import monte_carlo_gain
from app.experiments.interferometer_model import phases_from_timing
from app.experiments.interferometer_model import retro_game
from app.experiments.interferometer_model import retro_game_closed_form
from app.experiments.interferometer_model import visibility


@given(reflectivity=st.floats(min_value=0, max_value=200))
def test_double_cavity_is_normalized(reflectivity):
    report = double_cavity(reflectivity)
    assert report.sum_check == pytest.approx(1.0, abs=1e-10)
    p_v = (1 + reflectivity) ** -2
    assert report.outcomes[REFLECTED] == pytest.approx(p_v * reflectivity ** 2, abs=1e-12)
    assert report.outcomes[TRANSMITTED] == pytest.approx(p_v * (1 + reflectivity), abs=1e-12)
    assert report.outcomes[ELECTRON_PLUS_PAIR] == pytest.approx(p_v * reflectivity, abs=1e-12)


def test_double_cavity_without_reflection():
    assert double_cavity(0.0).outcomes == {REFLECTED: 0.0, TRANSMITTED: 1.0, ELECTRON_PLUS_PAIR: 0.0}


def test_double_cavity_on_physical_cavity(physical_cavity):
    report = double_cavity(physical_cavity)
    assert report.sum_check == pytest.approx(1.0, abs=1e-10)
    assert report.diagnostics["vacuum"].sum_check == pytest.approx(1.0, abs=1e-10)


def test_golden_reflectivity_has_unit_visibility():
    assert golden_reflectivity() == pytest.approx(R0, abs=1e-12)
    assert visibility(R0) == pytest.approx(1.0, abs=1e-12)
    assert double_cavity(R0).outcomes[REFLECTED] == pytest.approx(R0 ** 2 / (1 + R0) ** 2)


@pytest.mark.parametrize("reflectivity", [0.3, R0, 4.0])
def test_interferometer_matches_closed_form(reflectivity):
    for theta in np.linspace(-math.pi, math.pi, 9):
        report = interferometer(reflectivity, theta)
        expected = interferometer_closed_form(reflectivity, theta)
        for pattern in (D1_ONLY, D1_D2_D3, D3_ONLY):
            assert report.outcomes[pattern] == pytest.approx(expected[pattern], abs=1e-10)
        assert report.sum_check == pytest.approx(1.0, abs=1e-10)


def test_d1_marginal_does_not_depend_on_theta():
    marginals = [interferometer(R0, theta).outcomes[D1_ONLY] + interferometer(R0, theta).outcomes[D1_D2_D3]
                 for theta in np.linspace(-math.pi, math.pi, 100)]
    assert max(marginals) - min(marginals) < 1e-10


def test_dark_port_at_unit_visibility():
    assert interferometer(R0, THETA_MINUS).outcomes[D1_ONLY] == pytest.approx(0.0, abs=1e-12)


def test_interferometer_on_physical_cavity(physical_cavity):
    theta = 0.4
    report = interferometer(physical_cavity, theta)
    expected = interferometer_closed_form(physical_cavity.reflectivity, theta)
    for pattern in (D1_ONLY, D1_D2_D3, D3_ONLY):
        assert report.outcomes[pattern] == pytest.approx(expected[pattern], abs=1e-9)


def test_timing_sets_theta(physical_cavity):
    theta, xi = phases_from_timing(0.2, 1.3, 0.0, 0.5, physical_cavity)
    assert xi == pytest.approx(0.2 - 1.3)
    assert interferometer(physical_cavity, theta).diagnostics["xi"] == pytest.approx(xi)


def test_interferometer_rejects_nan_theta():
    with pytest.raises(ValidationError):
        interferometer(R0, float("nan"))


def test_game_gain():
    report = retro_game()
    assert report.gain == pytest.approx(0.690983, abs=1e-6)
    assert report.gain == pytest.approx(retro_game_closed_form(R0), abs=1e-12)
    assert report.gain > CLASSICAL_GAIN_BOUND == report.classical_bound
    assert report.conditional_gain == pytest.approx(1.0, abs=1e-12)
    assert report.total_probability == pytest.approx(1.0, abs=1e-12)
    assert report.monte_carlo_gain is None


def test_game_postselected_gain():
    report = retro_game()
    expected = (1 + R0 + R0 ** 2) / (2 * (1 + R0) ** 2)
    assert report.postselected_gain == pytest.approx(expected, abs=1e-12)
    assert interferometer(R0, THETA_PLUS).outcomes[D1_ONLY] == pytest.approx(2 * expected, abs=1e-12)


def test_monte_carlo_gain_within_three_sigma():
    gain, stderr = monte_carlo_gain(R0, 200_000, seed=7)
    assert abs(gain - retro_game_closed_form(R0)) < 3 * stderr
    assert monte_carlo_gain(R0, 200_000, seed=7) == (gain, stderr)


def test_monte_carlo_is_independent_of_worker_count():
    assert monte_carlo_gain(R0, 250_000, seed=3, workers=1) == monte_carlo_gain(R0, 250_000, seed=3, workers=2)


def test_monte_carlo_needs_trials():
    with pytest.raises(ValidationError):
        monte_carlo_gain(R0, 0)


def test_gyni_gain():
    assert gyni_gain(R1) == pytest.approx(0.5, abs=1e-12)
    assert gyni_threshold() == pytest.approx(R1, abs=1e-10)
    assert gyni_gain(143.13) == pytest.approx(0.9862, abs=1e-4)
    assert gyni_gain(0.0) == 0.0
    with pytest.raises(ValidationError):
        gyni_gain(-1.0)
