import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.amplitudes.amplitude_functions import compose_path
from app.amplitudes.amplitude_functions import exchange_final_modes
from app.amplitudes.amplitude_functions import normalize_report
from app.amplitudes.amplitude_functions import pair_channel_report
from app.amplitudes.amplitude_functions import unmeasured_mode_ratio
from app.amplitudes.amplitude_functions import vacuum_probability
from app.amplitudes.model import DiagramTerm
from app.amplitudes.model import ExperimentReport
from app.amplitudes.model import PhaseFactor
from app.amplitudes.model import VacuumChannel
from app.amplitudes.model import VacuumSpec
from app.amplitudes.model import plain_value
from app.errors import CompletenessError
from app.errors import ValidationError


def test_signed_terms_interfere():
    direct = DiagramTerm((0.5, 2j))
    exchanged = DiagramTerm((1j,), parity=-1)
    assert compose_path([direct, exchanged]) == 0
    assert compose_path([]) == 0


def test_parity_must_be_a_sign():
    with pytest.raises(ValidationError):
        DiagramTerm((1.0,), parity=2)


def test_exchange_flips_every_term():
    terms = (DiagramTerm((1.0, 2.0), label="a"), DiagramTerm((3j,), parity=-1, label="b"))
    exchanged = exchange_final_modes(terms)
    assert compose_path(exchanged) == -compose_path(terms)
    assert [term.label for term in exchanged] == ["a", "b"]


def test_phase_factors():
    assert PhaseFactor.shifter(0.3).value == pytest.approx(cmath.exp(0.3j))
    assert complex(PhaseFactor(energy=2.0, time_arg=0.5)) == pytest.approx(cmath.exp(-1j))
    assert DiagramTerm((2.0, PhaseFactor.shifter(math.pi))).amplitude == pytest.approx(-2.0)


@given(reflectivity=st.floats(min_value=0, max_value=1e3), count=st.integers(min_value=1, max_value=4))
def test_vacuum_probability_of_identical_cavities(reflectivity, count):
    spec = VacuumSpec.cavities(reflectivity, count)
    assert vacuum_probability(spec) == pytest.approx((1 + reflectivity) ** -count, rel=1e-12)


def test_vacuum_union_multiplies():
    first, second = VacuumSpec.cavities(0.5, 1), VacuumSpec.cavities(2.0, 2)
    assert vacuum_probability(first.union(second)) == pytest.approx(1 / 1.5 / 9)
    assert vacuum_probability(VacuumSpec()) == 1.0


def test_invalid_vacuum_channels():
    with pytest.raises(ValidationError):
        VacuumChannel(-1.0)
    with pytest.raises(ValidationError):
        VacuumChannel(1.0, multiplicity=0)


def test_complete_report_must_sum_to_one():
    report = normalize_report("halves", {"a": 1.0, "b": 1.0}, 0.5)
    assert report.sum_check == pytest.approx(1.0)
    with pytest.raises(CompletenessError) as raised:
        normalize_report("short", {"a": 1.0}, 0.5)
    assert raised.value.residual == pytest.approx(0.5)
    partial = normalize_report("short", {"a": 1.0}, 0.5, complete=False)
    assert partial.sum_check == pytest.approx(0.5)
    assert not partial.complete


@given(weights=st.dictionaries(st.sampled_from(["A", "B", "C", "D"]), st.floats(min_value=0, max_value=1e4)))
def test_pair_channels_fix_the_vacuum(weights):
    report = pair_channel_report("pairs", weights)
    assert report.sum_check == pytest.approx(1.0, abs=1e-12)
    assert report.vacuum_probability == pytest.approx(1 / (1 + sum(weights.values())))


def test_pair_channels_reject_negative_weights():
    with pytest.raises(ValidationError):
        pair_channel_report("pairs", {"A": -1.0})


@pytest.mark.parametrize("multiplicity", [1, 2])
def test_unmeasured_modes_drop_out(multiplicity):
    full, reduced = unmeasured_mode_ratio(0.7, [0.5, 1.2, 3.0], multiplicity, measured=1)
    assert full == pytest.approx(reduced, rel=1e-12)
    with pytest.raises(ValidationError):
        unmeasured_mode_ratio(0.7, [0.5], measured=3)


def test_report_json():
    report = ExperimentReport("demo", {"a": 0.25, "b": 0.75}, 0.5, diagnostics={"z": 1 + 2j, "n": np.float64(3)})
    payload = report.to_json_dict()
    assert payload["sumCheck"] == 1.0
    assert payload["diagnostics"] == {"z": {"re": 1.0, "im": 2.0}, "n": 3.0}
    assert plain_value((np.int64(2), np.bool_(True))) == [2, True]
