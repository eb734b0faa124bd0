from __future__ import annotations

import json

import pytest

from magic_rigidity.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, OUT_ENV, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classical_value_plain(capsys):
    code, out, _ = run(capsys, "classical-value")
    assert code == EXIT_OK
    assert out.strip() == "8/9"


def test_classical_value_json_and_verbose(capsys):
    code, out, _ = run(capsys, "classical-value", "--json", "--verbose")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert (doc["num"], doc["den"]) == (8, 9)
    assert doc["optimal_pairs"] > 0
    assert doc["schema_version"] == 1


def test_classical_value_verbose_text(capsys):
    _, out, _ = run(capsys, "classical-value", "--verbose")
    assert out.splitlines()[0] == "8/9"
    assert "optimal deterministic pairs: 144" in out


@pytest.mark.parametrize("n", [1, 2])
def test_ideal_check_passes(capsys, tmp_path, n):
    code, out, _ = run(capsys, "ideal-check", "--n", str(n), "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "PASS" in out
    doc = json.loads((tmp_path / f"ideal_check_n{n}.json").read_text())
    assert doc["win_probability"] == pytest.approx(1.0, abs=1e-12)
    assert doc["breaches"] == []


def test_ideal_check_n4_is_a_feasibility_error(capsys, tmp_path):
    code, _, err = run(capsys, "ideal-check", "--n", "4", "--out", str(tmp_path))
    assert code == EXIT_CONFIG
    assert code != EXIT_FAIL
    assert "error" in err


def test_output_directory_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUT_ENV, str(tmp_path / "env"))
    code, _, _ = run(capsys, "lemma-tests", "--lemma", "triangle", "--seeds", "5")
    assert code == EXIT_OK
    assert (tmp_path / "env" / "lemma_tests.json").exists()


def test_lemma_tests_filter_and_replay(capsys, tmp_path):
    code, out, _ = run(capsys, "lemma-tests", "--lemma", "save-eps", "--seeds", "20", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out.startswith("save-eps: PASS")
    code, out2, _ = run(capsys, "lemma-tests", "--lemma", "save-eps", "--seed", "3", "--out", str(tmp_path / "r"))
    assert "trials=1" in out2
    again = run(capsys, "lemma-tests", "--lemma", "save-eps", "--seed", "3", "--out", str(tmp_path / "r2"))[1]
    assert again == out2


def test_lemma_tests_unknown_group(capsys, tmp_path):
    code, _, _ = run(capsys, "lemma-tests", "--lemma", "nope", "--out", str(tmp_path))
    assert code == EXIT_CONFIG


def test_spectrum(capsys, tmp_path):
    code, out, _ = run(capsys, "spectrum", "--n", "2", "--seeds", "50", "--out", str(tmp_path))
    assert code == EXIT_OK
    doc = json.loads((tmp_path / "spectrum_n2.json").read_text())
    assert doc["dense"]["passed"] and doc["product"]["passed"]
    assert doc["implication_audit"]["failures"] == 0


def test_appendix_b_command(capsys, tmp_path):
    code, out, _ = run(capsys, "appendix-b", "--eps", "1e-3", "--seed", "2", "--out", str(tmp_path))
    assert code == EXIT_OK
    doc = json.loads((tmp_path / "appendix_b_seed2.json").read_text())
    assert doc["chain_dominates"]
    assert doc["eps"] == pytest.approx(1e-3, abs=1e-4)


def test_sweep_command_and_bad_config(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--eps", "1e-3", "3e-3", "1e-2", "--seeds", "2", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert (tmp_path / "sweep.csv").exists()
    assert "fidelity_deficit: exponent=" in out
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"eps_values": [0.7]}))
    code, _, err = run(capsys, "sweep", "--config", str(cfg), "--out", str(tmp_path))
    assert code == EXIT_CONFIG
    code, _, _ = run(capsys, "sweep", "--config", str(tmp_path / "missing.json"))
    assert code == EXIT_CONFIG


@pytest.mark.parametrize(
    "argv,files",
    [
        (["ideal-check", "--n", "1"], ["ideal_check_n1.json"]),
        (["sweep", "--eps", "1e-3", "1e-2", "--seeds", "2"], ["sweep.csv", "sweep.json"]),
        (["lemma-tests", "--seeds", "10"], ["lemma_tests.json"]),
        (["spectrum", "--n", "1", "--seeds", "20"], ["spectrum_n1.json"]),
        (["appendix-b", "--eps", "1e-3"], ["appendix_b_seed0.json"]),
    ],
)
def test_commands_are_byte_deterministic(capsys, tmp_path, argv, files):
    run(capsys, *argv, "--out", str(tmp_path / "a"))
    run(capsys, *argv, "--out", str(tmp_path / "b"))
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
