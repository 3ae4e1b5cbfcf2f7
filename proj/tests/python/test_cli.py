import os
import pathlib
import subprocess

import pytest

import dsbn

CLI = os.environ.get("DSBN_CLI")
DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

pytestmark = pytest.mark.skipif(not CLI, reason="DSBN_CLI not set")


def run(*args, ok=True):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    if ok:
        assert proc.returncode == 0, proc.stderr
    return proc


def report(text):
    out = {}
    for line in text.splitlines():
        key, _, value = line.rpartition("\t")
        out[key] = value
    return out


def test_gen_is_reproducible(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run("gen", "--shape", "tree", "--vars", 8, "--seed", 1, "--out", a)
    run("gen", "--shape", "tree", "--vars", 8, "--seed", 1, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert len(dsbn.read_network(a.read_text()).nodes) == 8
    assert run("gen", "--vars", 2, ok=False).returncode != 0


def test_sample_matches_joint(tmp_path):
    net_path, sample_path = tmp_path / "net.txt", tmp_path / "s.txt"
    run("gen", "--vars", 3, "--seed", 5, "--out", net_path)
    assert run("sample", net_path, "-n", 0, ok=False).returncode != 0
    run("sample", net_path, "-n", 20000, "--seed", 2, "--out", sample_path)
    pop = dsbn.read_sample(sample_path.read_text())
    assert len(pop) == 20000
    truth = dsbn.joint(dsbn.read_network(net_path.read_text()))
    empirical = dsbn.empirical_mass(pop)
    truth_focals = dict((tuple(s), m) for s, m in truth.focals())
    for s, m in empirical.focals():
        assert abs(truth_focals.get(tuple(s), 0.0) - m) < 0.02


def test_deterministic_network_gives_identical_rows(tmp_path):
    net = tmp_path / "det.txt"
    net.write_text("var A 0 1\nnode A parents\nfocal A 1 A=1\n")
    rows = run("sample", net, "-n", 10).stdout.splitlines()
    assert rows[-10:] == ["1"] * 10


def test_learn_tree_and_errors(tmp_path):
    net_path, sample_path, out = tmp_path / "net.txt", tmp_path / "s.txt", tmp_path / "l.txt"
    run("gen", "--vars", 6, "--seed", 3, "--out", net_path)
    run("sample", net_path, "-n", 2000, "--out", sample_path)
    run("learn", sample_path, "--algo", "tree", "--out", out)
    learned = dsbn.read_network(out.read_text())
    assert learned.structure()["edges"] == dsbn.read_network(net_path.read_text()).structure()["edges"]
    assert run("learn", sample_path, "--algo", "nope", ok=False).returncode != 0
    assert run("learn", sample_path, "--bogus-flag", ok=False).returncode != 0


def test_learn_ci_marks_hidden_cause(tmp_path):
    sample_path, pipg = tmp_path / "s.txt", tmp_path / "p.txt"
    run("sample", DATA / "latent_network.txt", "-n", 5000, "--seed", 3, "--out", sample_path)
    run("learn", sample_path, "--algo", "ci", "--k", 2, "--pipg", pipg, "--out", tmp_path / "l.txt")
    assert any("<->" in line for line in pipg.read_text().splitlines())


def test_independence_commands(tmp_path):
    net = tmp_path / "indep.txt"
    net.write_text(
        "var A 0 1\nvar B 0 1\nvar C 0 1\nnode A parents\nnode B parents\nnode C parents\n"
        "focal A 0.6 A=0\nfocal A 0.4 A=1\nfocal B 0.3 B=0\nfocal B 0.7\n"
    )
    sample_path = tmp_path / "s.txt"
    run("sample", net, "-n", 1000, "--seed", 4, "--out", sample_path)
    marginal = report(run("test", sample_path, "--kind", "marginal", "--x", "A", "--y", "B").stdout)
    assert marginal["decision"] == "independent"
    relevance = report(run("test", sample_path, "--kind", "relevance", "--x", "C").stdout)
    assert float(relevance["score"]) == 0.0
    conditional = report(
        run("test", sample_path, "--kind", "conditional", "--x", "A", "--y", "B", "--given", "C").stdout
    )
    assert set(conditional) == {"statistic", "df", "p_value", "decision"}


def test_eval(tmp_path):
    a, b, c = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "c.txt"
    run("gen", "--vars", 4, "--seed", 1, "--out", a)
    assert float(report(run("eval", a, a).stdout)["delta"]) == 0.0
    run("sample", a, "-n", 3000, "--out", tmp_path / "s.txt")
    run("learn", tmp_path / "s.txt", "--out", b)
    d = float(report(run("eval", a, b).stdout)["delta"])
    assert 0.0 < d < float("inf")
    run("gen", "--vars", 5, "--seed", 1, "--out", c)
    assert run("eval", c, a, ok=False).returncode != 0


def test_experiment_report():
    out = report(run("experiment", "--runs", 3, "--vars", 4, "--samples", 200, 1000).stdout)
    assert set(out) == {"vars", "runs", "tree_N200", "tree_N1000", "polytree_N200", "polytree_N1000"}
    assert all(0.0 <= float(out[k]) <= 1.0 for k in out if "_N" in k)
