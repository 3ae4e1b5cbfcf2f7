import pathlib

import pytest

import dsbn

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def test_random_model_is_deterministic():
    a = dsbn.random_model("tree", 5, seed=4)
    b = dsbn.random_model("tree", 5, seed=4)
    assert str(a) == str(b)
    assert len(a.edges) == 4


def test_network_text_round_trip():
    net = dsbn.random_model("polytree", 6, seed=2)
    assert str(dsbn.read_network(str(net))) == str(net)


def test_tree_learning_from_sample():
    net = dsbn.random_model("tree", 5, seed=1)
    pop = dsbn.sample_network(net, 2000, seed=7)
    assert len(pop) == 2000
    learned, warnings = dsbn.learn_tree(pop)
    assert learned.structure()["edges"] == net.structure()["edges"]
    assert warnings == []


def test_independence_test_reports_fields():
    pop = dsbn.sample_network(dsbn.random_model("tree", 4, seed=3), 500, seed=1)
    result = dsbn.chi2_marginal(pop, ["X1"], ["X2"])
    assert set(result) == {"statistic", "df", "p_value", "independent"}
    assert 0.0 <= result["p_value"] <= 1.0


def test_ci_finds_hidden_common_cause():
    net = dsbn.read_network((DATA / "latent_network.txt").read_text())
    assert net.hidden() == ["H"]
    pop = dsbn.sample_network(net, 5000, seed=3)
    result = dsbn.frkci(pop, k=2)
    assert result["pipg"].bidirected("A", "B")
    assert "H_AB" in result["network"].hidden()


def test_hypertree_conversion():
    h = dsbn.Hypergraph([["A", "B"], ["B", "C"]])
    seq = dsbn.construction_sequence(h)
    assert seq.hyperedges == [["A", "B"], ["B", "C"]]
    ab = dsbn.read_mass("var A 0 1\nvar B 0 1\nfocal 0.6 A=0 B=0\nfocal 0.4\n")
    bc = dsbn.read_mass("var B 0 1\nvar C 0 1\nfocal 0.7 B=0|1 C=1\nfocal 0.3\n")
    net = dsbn.network_from_hypertree(seq, [ab, bc])
    assert net.edges == [("A", "B"), ("B", "C")]
    whole = dsbn.combine(ab, bc)
    assert dsbn.delta(whole, dsbn.joint(net)) < 1e-9
    assert dsbn.induced_hypergraph(net) == dsbn.reduce_hypergraph(h)


def test_errors_become_python_exceptions():
    with pytest.raises(dsbn.DsbnError):
        dsbn.random_model("tree", 2)
    with pytest.raises(ValueError):
        dsbn.read_network("bogus line\n")
