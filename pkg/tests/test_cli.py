import csv
import json

import pytest

from app.cavity.model import RmaxResult
from app.interface.model import QConvention
from app.sweep.constants import CAVITY_SWEEP_COLUMNS
from app.sweep.constants import EXIT_NUMERICAL
from app.sweep.constants import EXIT_SUCCESS
from app.sweep.constants import EXIT_VALIDATION
from app.sweep.constants import OUTPUT_DIR_ENV
from app.sweep.controller import parse_arguments
from app.sweep.ledger_model import oracle_confirmation
from app.sweep.ledger_model import rmax_agreement
from app.sweep.parametrization import read_config_file

CAVITY_SWEEP = ("sweep", "--variable", "kOverM", "--range", "0.1:20:64", "--ea-over-m", "10", "--m-tau", "1.5")


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as csv_file:
        return list(csv.DictReader(csv_file))


def test_cavity_sweep_csv(run_cli, tmp_path):
    result = run_cli(*CAVITY_SWEEP, "--csv", "curve.csv", "--outdir", tmp_path, "--workers", "1")
    assert result.returncode == EXIT_SUCCESS, result.stderr
    assert result.stdout == ""
    rows = read_rows(tmp_path / "curve.csv")
    assert len(rows) == 64
    assert tuple(rows[0]) == CAVITY_SWEEP_COLUMNS
    assert float(rows[0]["kOverM"]) == 0.1 and float(rows[-1]["kOverM"]) == 20.0
    for row in rows:
        assert float(row["Ttot"]) - float(row["Rtot"]) == pytest.approx(1.0, abs=1e-8)
        assert row["schwingerFlag"] == "1"


def test_sweep_is_byte_stable_across_runs_and_workers(run_cli, tmp_path):
    for name, workers in (("first.csv", "1"), ("second.csv", "1"), ("parallel.csv", "2")):
        result = run_cli(*CAVITY_SWEEP, "--csv", name, "--outdir", tmp_path, "--workers", workers)
        assert result.returncode == EXIT_SUCCESS, result.stderr
    first = (tmp_path / "first.csv").read_bytes()
    assert first == (tmp_path / "second.csv").read_bytes()
    assert first == (tmp_path / "parallel.csv").read_bytes()


def test_experiment_sweep_is_stable_across_workers(run_cli, tmp_path):
    args = ("sweep", "--experiment", "interferometer", "--variable", "theta", "--range=-3.14:3.14:40")
    for name, workers in (("serial.csv", "1"), ("parallel.csv", "3")):
        result = run_cli(*args, "--csv", name, "--outdir", tmp_path, "--workers", workers)
        assert result.returncode == EXIT_SUCCESS, result.stderr
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "parallel.csv").read_bytes()
    rows = read_rows(tmp_path / "serial.csv")
    assert list(rows[0]) == ["theta", "D1_only", "D1_D2_D3", "D3_only", "vacuumProbability", "sumCheck"]
    for row in rows:
        assert float(row["sumCheck"]) == pytest.approx(1.0, abs=1e-10)


def test_json_reports_are_byte_stable(run_cli):
    first = run_cli("switch", "--gate-a", "x", "--gate-b", "z", "--xi", "0.4")
    second = run_cli("switch", "--gate-a", "x", "--gate-b", "z", "--xi", "0.4")
    assert first.returncode == EXIT_SUCCESS, first.stderr
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["experiment"] == "quantum_switch"


def test_gyni_threshold(run_cli):
    result = run_cli("gyni", "--r", "2.4142135623730951")
    assert result.returncode == EXIT_SUCCESS, result.stderr
    payload = json.loads(result.stdout)
    assert payload["gain"] == pytest.approx(0.5, abs=1e-12)
    assert payload["causalBound"] == 0.5


def test_game_and_deutsch(run_cli):
    game = json.loads(run_cli("game").stdout)
    assert game["gain"] == pytest.approx(0.690983, abs=1e-6)
    assert game["conditionalGain"] == pytest.approx(1.0)
    deutsch = json.loads(run_cli("deutsch", "--alpha", "0").stdout)
    assert deutsch["outcomes"]["D1_only"] == pytest.approx(2 / 3, abs=1e-12)


def test_double_cavity_csv(run_cli, tmp_path):
    result = run_cli("double-cavity", "--r", "3", "--csv", "double.csv", "--outdir", tmp_path)
    assert result.returncode == EXIT_SUCCESS, result.stderr
    (row,) = read_rows(tmp_path / "double.csv")
    assert float(row["sumCheck"]) == pytest.approx(1.0, abs=1e-12)
    assert float(row["electron_plus_pair"]) == pytest.approx(3 / 16)


def test_output_directory_from_environment(run_cli, tmp_path):
    result = run_cli("interface", "--p", "1", "--ea-over-m", "3", "--json", "interface.json",
                     env={OUTPUT_DIR_ENV: str(tmp_path)})
    assert result.returncode == EXIT_SUCCESS, result.stderr
    payload = json.loads((tmp_path / "interface.json").read_text(encoding="utf-8"))
    forward = payload["configurations"]["E_to_Eprime_forward"]
    assert forward["conservationResidual"] < 1e-12


def test_config_file_supplies_defaults(run_cli, tmp_path):
    config = tmp_path / "cavity.cfg"
    config.write_text("# cavity point\nea-over-m = 4\nm_tau=0.8\n", encoding="utf-8")
    result = run_cli("cavity", "--config", config, "--k-over-m", "2", "--ea-over-m", "5")
    assert result.returncode == EXIT_SUCCESS, result.stderr
    params = json.loads(result.stdout)["params"]
    assert params["eA"] == 5.0
    assert params["tau"] == 0.8
    assert params["p"] == 2.0


def test_config_file_with_unknown_key(run_cli, tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("flux_capacitor=1\n", encoding="utf-8")
    assert run_cli("cavity", "--config", config).returncode == EXIT_VALIDATION


def test_parse_arguments_applies_config(tmp_path):
    config = tmp_path / "deutsch.cfg"
    config.write_text("strict=false\nr=0.5\n", encoding="utf-8")
    params = parse_arguments(["deutsch", "--config", str(config)])
    assert params.strict is False
    assert params.r == 0.5
    assert read_config_file(config) == {"strict": "false", "r": "0.5"}


@pytest.mark.parametrize("args", [
    ("sweep", "--range", "5:1:10"),
    ("sweep", "--experiment", "switch", "--variable", "kOverM"),
    ("cavity", "--m-tau", "-1"),
    ("switch", "--psi0", "0,0"),
    ("deutsch", "--r", "0.5"),
    ("interface", "--tag", "sideways"),
    ("gyni", "--csv", "gyni.csv", "--outdir", "/dev/null/impossible"),
    ("cavity", "--workers", "0"),
])
def test_invalid_input_exits_with_validation_code(run_cli, args):
    result = run_cli(*args)
    assert result.returncode == EXIT_VALIDATION, result.stderr


def test_resonance_floor_exits_with_numerical_code(run_cli):
    result = run_cli("cavity", "--floor", "1e6")
    assert result.returncode == EXIT_NUMERICAL
    assert "ResonanceSingularityError" in result.stderr


def test_ledger_lists_every_check(run_cli):
    result = run_cli("ledger", "--ea-over-m-range", "40:50:4", "--k-count", "512", "--format", "json")
    assert result.returncode == EXIT_SUCCESS, result.stderr
    names = [entry["name"] for entry in json.loads(result.stdout)["entries"]]
    assert names == ["t=1+r vs conservation", "t closed form", "rmax agreement", "peak location",
                     "CTC M-matrix variant", "q=0 branch", "r(-E,-E') parity"]


def test_rmax_scan_at_reference_m_tau(run_cli):
    result = run_cli("rmax", "--m-tau", "1.5", "--ea-over-m-range", "1:60:600")
    assert result.returncode == EXIT_SUCCESS, result.stderr
    payload = json.loads(result.stdout)
    check, best = payload["referenceCheck"], payload["globalMaximum"]
    assert check["name"] == "rmax agreement"
    if check["flagged"]:
        assert check["residuals"]["signed.oracleRelative"] < 1e-3
        assert "not confirmed" not in check["finding"]
    else:
        assert best["Rmax"] == pytest.approx(143.13, rel=0.02)
        assert best["eAOverM"] == pytest.approx(46.45, rel=0.02)
        assert best["eta"] == pytest.approx(0.9862, rel=0.002)


def test_rmax_agreement_flags_a_maximum_on_the_scan_edge():
    rising = [RmaxResult(e_a=e_a, tau=1.5, k_star=e_a, r_max=e_a ** 2, denom_magnitude=0.5, refined=True)
              for e_a in (1.0, 2.0, 3.0)]
    entry = rmax_agreement({QConvention.MAGNITUDE: rising})
    assert entry.flagged
    assert entry.residuals["magnitude.onScanEdge"] == 1.0
    assert "scan edge" in entry.finding
    peaked = rising[:1] + [RmaxResult(e_a=2.0, tau=1.5, k_star=2.0, r_max=50.0, denom_magnitude=0.5,
                                      refined=True)] + rising[2:]
    assert rmax_agreement({QConvention.MAGNITUDE: peaked}).residuals["magnitude.onScanEdge"] == 0.0


def test_oracle_confirms_composition_at_a_scan_point():
    peak = RmaxResult(e_a=3.0, tau=1.5, k_star=1.0, r_max=0.0, denom_magnitude=1.0, refined=False)
    assert oracle_confirmation(peak) < 1e-3


def test_config_defaults_do_not_depend_on_option_order(tmp_path):
    config = tmp_path / "sweep.cfg"
    config.write_text("experiment=deutsch\nvariable=alpha\nrange=0:1:3\n", encoding="utf-8")
    params = parse_arguments(["sweep", "--variable", "xi", "--config", str(config), "--range", "0:1:5"])
    assert params.experiment == "deutsch"
    assert params.variable == "xi"
    assert params.range == "0:1:5"


def test_config_values_are_checked_by_the_subcommand(run_cli, tmp_path):
    config = tmp_path / "ctc.cfg"
    config.write_text("variant=t3\n", encoding="utf-8")
    assert run_cli("ctc", "--config", config).returncode == EXIT_VALIDATION
