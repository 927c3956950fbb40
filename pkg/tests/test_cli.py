import json

import numpy as np
import pytest

from sznagy.channels import KrausSet
from sznagy.cli import main
from sznagy.serialization import dump_json, kraus_from_json, kraus_to_json, load_json


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def channel_dir(tmp_path):
    assert run("gen-channel", "--out", tmp_path) == 0
    return tmp_path


def test_gen_channel_files(channel_dir):
    for name in ("superop.json", "chi.json", "kraus.json"):
        assert (channel_dir / name).exists()
    kraus = kraus_from_json(load_json(channel_dir / "kraus.json"))
    assert np.allclose(sorted(kraus.norms(), reverse=True), [0.5277, 0.5020, 0.4965, 0.4723], atol=1e-3)


def test_gen_channel_idempotent(channel_dir, tmp_path):
    again = tmp_path / "again"
    assert run("gen-channel", "--out", again) == 0
    for name in ("superop.json", "chi.json", "kraus.json"):
        assert (again / name).read_bytes() == (channel_dir / name).read_bytes()


def test_gen_channel_zero_rates(tmp_path):
    assert run("gen-channel", "--gamma1", 0, "--gamma2", 0, "--out", tmp_path) == 0
    assert len(load_json(tmp_path / "kraus.json")["kraus"]) == 1


def test_config_file_and_override(tmp_path):
    cfg = dump_json({"gamma1": 0.0, "gamma2": 0.0}, tmp_path / "cfg.json")
    assert run("gen-channel", "--config", cfg, "--gamma2", 1.0, "--out", tmp_path / "o") == 0
    assert len(load_json(tmp_path / "o" / "kraus.json")["kraus"]) == 2


def test_kraus_from_chi_and_superop(channel_dir, tmp_path):
    for src in ("chi.json", "superop.json"):
        out = tmp_path / ("from_" + src.split(".")[0])
        assert run("kraus", channel_dir / src, "--out", out) == 0
        assert len(load_json(out / "kraus.json")["kraus"]) == 4


def test_kraus_rejects_kraus_input(channel_dir, tmp_path):
    assert run("kraus", channel_dir / "kraus.json", "--out", tmp_path / "x") == 2


def test_dilate_decompose_simulate_qpt_chain(channel_dir, tmp_path, capsys):
    u_dir, g_dir, r_dir = tmp_path / "u", tmp_path / "g", tmp_path / "r"
    assert run("dilate", channel_dir / "kraus.json", "--out", u_dir) == 0
    units = sorted(u_dir.glob("unitary_*.json"))
    assert len(units) == 4
    assert run("decompose", *units, "--out", g_dir) == 0
    gates = sorted(g_dir.glob("*.gates.txt"))
    assert len(gates) == 4
    assert gates[0].read_text().startswith("# source unitary_1.json")
    assert run("simulate", channel_dir / "kraus.json", "--gates", *gates, "--out", r_dir) == 0
    capsys.readouterr()
    assert run("qpt", r_dir / "record.json", "--reference", channel_dir / "chi.json", "--out", r_dir) == 0
    line = [l for l in capsys.readouterr().out.splitlines() if "process fidelity" in l][0]
    assert float(line.split()[-1]) > 1 - 1e-6


def test_simulate_noisy_then_cptp(channel_dir, tmp_path, capsys):
    assert run("simulate", channel_dir / "kraus.json", "--noise-sigma", 0.01, "--seed", 42, "--out", tmp_path) == 0
    rec = load_json(tmp_path / "record.json")
    assert rec["noise_sigma"] == 0.01 and rec["seed"] == 42
    capsys.readouterr()
    assert run("qpt", tmp_path / "record.json", "--method", "cptp", "--reference", channel_dir / "kraus.json",
               "--out", tmp_path) == 0
    line = [l for l in capsys.readouterr().out.splitlines() if "process fidelity" in l][0]
    assert float(line.split()[-1]) >= 0.99


def test_simulate_gate_count_mismatch(channel_dir, tmp_path):
    g = tmp_path / "one.gates.txt"
    g.write_text("CNOT 1 2\n")
    assert run("simulate", channel_dir / "kraus.json", "--gates", g, "--out", tmp_path) == 2


def test_reproduce_phase_damping(tmp_path, capsys):
    assert run("reproduce", "phase-damping", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "phase-damping_report.json").read_text())
    assert abs(report["process_fidelity"] - 1) <= 1e-6
    assert report["version"] and report["config"]["out_dir"] == str(tmp_path)
    assert "process fidelity 1.0000000000" in capsys.readouterr().out


def test_reproduce_is_byte_stable(tmp_path):
    cfg = dump_json({"noise_sigma": 0.02, "seed": 11, "out_dir": str(tmp_path / "o")}, tmp_path / "cfg.json")
    assert run("reproduce", "phase-damping", "--config", cfg) == 0
    first = {p.name: p.read_bytes() for p in (tmp_path / "o").iterdir()}
    assert run("reproduce", "phase-damping", "--config", cfg) == 0
    assert first == {p.name: p.read_bytes() for p in (tmp_path / "o").iterdir()}


def test_reproduce_mfgp(tmp_path):
    assert run("reproduce", "mfgp", "--renormalize", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "mfgp_report.json").read_text())
    assert abs(report["process_fidelity"] - 1) <= 1e-6
    assert report["kraus_info"]["renormalized"] is True


def test_reproduce_mfgp_incomplete_file(tmp_path):
    path = dump_json(kraus_to_json(KrausSet((0.5 * np.eye(4),))), tmp_path / "k.json")
    assert run("reproduce", "mfgp", "--kraus-file", path, "--out", tmp_path) == 2
    assert run("reproduce", "mfgp", "--kraus-file", path, "--renormalize", "--out", tmp_path) == 0


def test_verify_gate_lists(tmp_path, capsys):
    assert run("verify-appendix", "--out", tmp_path) == 0
    out = capsys.readouterr().out
    assert "plus-negate" in out and "minus-ignore" in out
    result = load_json(tmp_path / "published_gate_lists.json")
    assert len(result["entries"]) == 8


@pytest.mark.parametrize("argv", [[], ["bogus"], ["qpt"], ["reproduce"], ["qpt", "r.json", "--method", "magic"]])
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["dilate", "missing.json"],
        ["gen-channel", "--gamma1", "-1"],
        ["gen-channel", "--convention", "sideways"],
    ],
)
def test_data_errors_exit_2(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path)]) == 2


def test_bad_config_keys_exit_2(tmp_path):
    cfg = dump_json({"gamma9": 1}, tmp_path / "cfg.json")
    assert run("gen-channel", "--config", cfg) == 2


def test_not_a_contraction_exit_2(tmp_path):
    # complete within 0.05, yet the first operator has norm 1.02
    doc = kraus_to_json(KrausSet((np.diag([1.02, 0, 0, 0]), np.diag([0, 1.0, 1, 1]))))
    path = dump_json(doc, tmp_path / "big.json")
    assert run("dilate", path, "--renormalize", "--out", tmp_path) == 0
    with pytest.warns(UserWarning):
        assert run("dilate", path, "--out", tmp_path) == 2


def test_numerical_failure_exit_3(tmp_path):
    states = [[[1.0, 0.0]] + [[0.0, 0.0]] * 15] * 16
    doc = {"kind": "tomography-record", "dim": 4, "inputs": states, "outputs": states}
    path = dump_json(doc, tmp_path / "rec.json")
    assert run("qpt", path, "--out", tmp_path) == 3
