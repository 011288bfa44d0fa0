import json
import subprocess
import sys

import pytest

from burstnec.cli import BOUNDS_COLUMNS, main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_capacity_text_and_json(capsys):
    code, out, _ = run(capsys, "capacity", "--model", "builtin:pi1")
    assert code == 0
    assert "C       = 0.166258998739" in out and "(exact)" in out
    code, out, _ = run(capsys, "capacity", "--model", "builtin:pi2", "--format", "json", "--l", "10")
    data = json.loads(out)
    assert code == 0 and data["exact"] is False and data["C_lower"] < data["C_upper"]


def test_capacity_nats(capsys):
    _, bits, _ = run(capsys, "capacity", "--model", "builtin:pi1", "--format", "json")
    _, nats, _ = run(capsys, "capacity", "--model", "builtin:pi1", "--format", "json", "--nats")
    assert json.loads(nats)["C"] == pytest.approx(json.loads(bits)["C"] * 0.6931471805599453)


def test_bounds_csv_deterministic(capsys, tmp_path):
    args = ["bounds", "--model", "builtin:pi1", "--n", "2", "--beta-grid", "0:0.5:5"]
    code, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert code == 0 and first == second
    lines = first.splitlines()
    assert lines[0].split(",") == BOUNDS_COLUMNS
    assert len(lines) == 6
    svg = tmp_path / "b.svg"
    assert main(args + ["--format", "svg", "--out", str(svg)]) == 0
    assert svg.read_text().count("<polyline") == 2


def test_validate_passes_and_is_reproducible(capsys):
    args = ["validate", "--model", "builtin:pi1", "--samples", "50000", "--seed", "3"]
    code, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert code == 0 and a == b
    assert "FAIL" not in a


def test_nfold_export(capsys):
    code, out, _ = run(capsys, "nfold-export", "--model", "builtin:pi1", "--n", "1")
    assert code == 0
    assert out.splitlines()[1] == "x\\y,0,1,e"


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--model", "builtin:pi1", "--samples", "20000")
    data = json.loads(out)
    assert code == 0 and data["within_3_sigma"]


def test_corrupted_model_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 2, "kind": "markov", "transition": [[0.5, 0.5]')
    code, _, err = run(capsys, "validate", "--model", str(bad))
    assert code == 2 and "config error" in err
    bad.write_text('{"q": 2, "kind": "markov", "transition": [[0.5, 0.6, 0.1], [1, 0, 0], [1, 0, 0]]}')
    assert run(capsys, "capacity", "--model", str(bad))[0] == 2


def test_bad_arguments_exit_2(capsys):
    assert run(capsys, "bounds", "--model", "builtin:pi1", "--beta-grid", "0:1")[0] == 2
    assert run(capsys, "capacity", "--model", "builtin:pi1", "--format", "svg")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["bounds"])
    assert info.value.code == 2


def test_resource_cap_exit_2(capsys):
    assert run(capsys, "nfold-export", "--model", "builtin:pi1", "--n", "20")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "burstnec", "capacity", "--model", "builtin:pi3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("C ")
