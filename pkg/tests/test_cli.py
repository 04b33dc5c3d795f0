import json
import subprocess
import sys

import pytest

from ptlab.cli import CHECKS, main
from ptlab.report import dumps

from conftest import CORPUS


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, json.loads(out.out), out.err


def path(name):
    return str(CORPUS / name)


def test_check_leak_broadcast(capsys):
    code, rep, err = run(capsys, "check", "leak", path("broadcast2.ptc"))
    assert code == 0 and rep["verdicts"]["kind"] == "Broadcast"
    assert rep["schema_version"] == 1 and len(rep["input_sha256"]) == 64
    assert "holds" in err


def test_check_pure_noise_reports_pattern(capsys):
    code, rep, _ = run(capsys, "check", "pure", path("noisy_channel.ptc"))
    assert code == 1 and rep["verdicts"]["violation"]["rows"] == [0, 1]


def test_check_causal_cap(capsys):
    code, rep, _ = run(capsys, "check", "causal", path("cap.ptc"))
    assert code == 1 and rep["verdicts"]["residual"] == 1.0


@pytest.mark.parametrize("name, expected", [
    ("broadcast4.ptc", 1.0), ("constant_leak.ptc", 0.0), ("mixed_leak_c025.ptc", 0.25)])
def test_quality(capsys, name, expected):
    code, rep, _ = run(capsys, "quality", path(name))
    assert code == 0 and rep["verdicts"]["normalized"] == pytest.approx(expected, abs=1e-9)


def test_quality_not_a_leak(capsys):
    code, rep, _ = run(capsys, "quality", path("noisy_channel.ptc"))
    assert code == 1 and rep["verdicts"]["reason"] == "not a leak"


def test_construct_dephasing_hadamard(capsys):
    code, rep, _ = run(capsys, "construct", path("dephasing_copy.ptc"),
                       "--apply", path("hadamard.ptc"))
    applied = rep["verdicts"]["applied"]
    assert code == 0 and applied["member"] is False
    flat = sum(applied["extracted_classical"]["matrix"], [])
    assert flat == pytest.approx([0.5] * 4)


def test_construct_mixture_not_idempotent(capsys):
    code, rep, _ = run(capsys, "construct", path("mixture_c05.ptc"))
    assert code == 1 and rep["verdicts"]["error"] == "NotIdempotent"
    assert rep["verdicts"]["idempotent_residual"] > 0


def test_construct_from_leak_is_identity(capsys):
    code, rep, _ = run(capsys, "construct", path("mixed_leak_c025.ptc"),
                       "--apply", path("noisy_channel.ptc"))
    assert code == 0 and rep["verdicts"]["idempotent_is_identity"]
    assert rep["verdicts"]["applied"]["member"] is True


def test_input_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.ptc"
    bad.write_text("system A = classical(2)\nbox f : A -> A = [[1, 0], [0, 1], [0, 0]]\n")
    code, rep, err = run(capsys, "parse", str(bad))
    assert code == 2 and "2:1" in rep["error"]["message"]
    code, _, _ = run(capsys, "check", "leak", str(tmp_path / "missing.ptc"))
    assert code == 2
    assert main(["check", "bogus", str(bad)]) == 2


def test_tolerance_flag_and_env(capsys, monkeypatch):
    code, _, _ = run(capsys, "check", "causal", "--tol", "0.6", path("cap.ptc"))
    assert code == 0
    monkeypatch.setenv("PTLAB_TOL", "0.6")
    code, _, _ = run(capsys, "check", "causal", path("cap.ptc"))
    assert code == 0


def test_json_only_silences_stderr(capsys):
    code, _, err = run(capsys, "parse", "--json-only", path("yanking.ptc"))
    assert code == 0 and err == ""


def test_every_corpus_file_yields_valid_json(capsys):
    for p in sorted(CORPUS.glob("*.ptc")):
        for what in CHECKS:
            code, rep, _ = run(capsys, "check", what, "--json-only", str(p))
            assert code in (0, 1) and rep["holds"] == (code == 0), (p.name, what)
        code, _, _ = run(capsys, "parse", "--json-only", str(p))
        assert code == 0


def test_report_floats_have_17_digits():
    text = dumps({"b": 0.1, "a": [1, 2.5], "c": {"z": True, "y": None}})
    assert "0.10000000000000001" in text
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert json.loads(text)["b"] == 0.1


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "ptlab.cli", "check", "leak", "--json-only",
                          path("cq_leak.ptc")], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["verdicts"]["kind"] == "CQCanonical"
