import json
import subprocess
import sys

import pytest

from cvlea import cli


def run(*args):
    return subprocess.run([sys.executable, "-m", "cvlea", *args], capture_output=True, text=True)


def test_classify_amplifier(capsys):
    assert cli.main(["classify", "2", "0.5", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["valid"] and rep["quantum_limited"]
    assert rep["entanglement_breaking"] is False
    assert rep["nlea_gaussian"] is True
    assert rep["nongaussian_survivable"] is True
    assert rep["nongaussian_threshold"] == pytest.approx(5**0.5 / 2)


def test_classify_eb(capsys):
    assert cli.main(["classify", "0.5", "0.75", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["entanglement_breaking"] is True


def test_classify_extra_noise_matches_total(capsys):
    cli.main(["classify", "3", "--extra-noise", "0.2", "--json"])
    rep = json.loads(capsys.readouterr().out)
    assert rep["mu"] == pytest.approx(1.2) and rep["a"] == pytest.approx(0.2)


def test_classify_human_and_json_agree(capsys):
    cli.main(["classify", "0.7", "0.4"])
    human = capsys.readouterr().out
    cli.main(["classify", "0.7", "0.4", "--json"])
    rep = json.loads(capsys.readouterr().out)
    assert f"{rep['eta']:.12g}" in human and f"{rep['nongaussian_threshold']:.12g}" in human


def test_classify_invalid_channel():
    res = run("classify", "2", "0.4")
    assert res.returncode == 2 and "invalid channel" in res.stderr


@pytest.mark.parametrize(
    "args",
    [
        ["classify", "abc", "0.5"],
        ["classify", "1"],
        ["classify", "1", "0.5", "-a", "0.1"],
        ["diagram", "fig9", "--out", "x.csv"],
        ["diagram", "fig3a", "--out", "x.csv"],
        ["verify", "nothing"],
        [],
    ],
)
def test_bad_arguments_exit_1(args):
    assert run(*args).returncode == 1


def test_diagram_fig3b_csv(tmp_path):
    out = tmp_path / "f.csv"
    res = run("diagram", "fig3b", "--out", str(out), "--points", "7", "--threads", "2")
    assert res.returncode == 0
    assert "config:" in res.stdout and '"gamma": 0.001' in res.stdout
    lines = out.read_text().splitlines()
    assert lines[0] == "kind,method,abscissa,value,tolerance"
    methods = {ln.split(",")[1] for ln in lines[1:]}
    assert methods == {"analytic", "bisection"}


def test_diagram_fig1b_json(tmp_path):
    out = tmp_path / "f.json"
    assert cli.main(["diagram", "fig1b", "--energies", "0.1,1,10", "--out", str(out), "--points", "5", "--no-bisection"]) == 0
    kinds = {c["kind"] for c in json.loads(out.read_text())["curves"]}
    assert {"tmsv_energy[E=0.1]", "tmsv_energy[E=1]", "tmsv_energy[E=10]", "prop1_gaussian"} <= kinds


def test_diagram_fig3a_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["diagram", "fig3a", "--kappa1", "0.5", "--kappa2", "0.5", "--points", "6", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_diagram_invalid_kappa(tmp_path):
    res = run("diagram", "fig2b", "--kappa1", "-1", "--kappa2", "1", "--out", str(tmp_path / "x.csv"))
    assert res.returncode == 2


def test_verify_gaussian_suite():
    res = run("verify", "gaussian", "--json")
    rep = json.loads(res.stdout)
    assert res.returncode == 0 and rep["passed"]
    assert len(rep["checks"]) == 3
