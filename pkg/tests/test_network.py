import itertools

import networkx as nx
import pytest

from conftest import nx_flow_graph, nx_graph, nx_min_cut
from lnec import fixtures
from lnec.network import (
    Channel,
    GuardError,
    InfeasibleError,
    Network,
    NetworkError,
    Target,
    disjoint_path_family,
    enumerate_R,
    min_cut,
    min_cut_channelset,
    min_cut_node,
    min_cut_nodeset,
    pattern_rank,
    split_channels,
    topo_order,
)

ALL_NETS = [fixtures.three_path(), fixtures.butterfly(), fixtures.diamond(), fixtures.stub(),
            fixtures.chain(3), fixtures.combination()]


def test_single_channel_order():
    net = Network(["s", "t"], [("e", "s", "t")], "s")
    assert topo_order(net) == ["e"]


def test_three_path_order():
    order = topo_order(fixtures.three_path())
    for i in (1, 2, 3):
        assert order.index(f"e{i}1") < order.index(f"e{i}2")


@pytest.mark.parametrize("net", ALL_NETS, ids=repr)
def test_topo_order_matches_lexicographic_oracle(net):
    lg = nx.line_graph(nx_graph(net))
    want = [k for (_, _, k) in nx.lexicographical_topological_sort(lg, key=lambda n: n[2])]
    assert topo_order(net) == want == list(net.order)


def test_butterfly_bottleneck_order():
    net = fixtures.butterfly()
    assert net.index["e3"] < net.index["e6"] < min(net.index["e7"], net.index["e8"])


def test_cycle_rejected_with_witness():
    chans = [("e1", "s", "a"), ("e2", "a", "b"), ("e3", "b", "c"), ("e4", "c", "a")]
    with pytest.raises(NetworkError) as info:
        Network(["s", "a", "b", "c"], chans, "s")
    cyc = info.value.cycle
    assert set(cyc) >= {"a", "b", "c"} or set(cyc) >= {"e2", "e3", "e4"}


@pytest.mark.parametrize("bad", [
    dict(nodes=["s", "t"], channels=[("e", "s", "s")]),
    dict(nodes=["s", "t"], channels=[("e", "t", "s")]),
    dict(nodes=["s", "t"], channels=[("e", "s", "x")]),
    dict(nodes=["s", "t"], channels=[("e", "s", "t"), ("e", "s", "t")]),
])
def test_invalid_networks(bad):
    with pytest.raises(NetworkError):
        Network(bad["nodes"], bad["channels"], "s")


def test_parallel_channels_allowed_and_json_roundtrip():
    net = fixtures.stub()
    again = Network.from_json(net.to_json())
    assert again.order == net.order and again.rate == 2
    assert net.in_channels("t") == ("e2", "e3")
    assert isinstance(net.channel["e1"], Channel)


@pytest.mark.parametrize("net", ALL_NETS, ids=repr)
def test_min_cut_node_matches_networkx(net):
    for t in net.non_source:
        assert min_cut_node(net, t) == nx_min_cut(net, t)
        assert min_cut_nodeset(net, [t]) == min_cut_node(net, t)


def test_min_cut_examples():
    tp, bf = fixtures.three_path(), fixtures.butterfly()
    assert min_cut_node(tp, "t") == 3
    assert min_cut_node(bf, "t1") == min_cut_node(bf, "t2") == 2
    lonely = Network(["s", "t", "x"], [("e", "s", "t")], "s")
    assert min_cut_node(lonely, "x") == 0
    assert min_cut_nodeset(bf, ["t1", "t2"]) == 3
    dead = Network(["s", "r1", "r2", "r3", "t", "x"], fixtures.three_path().declared, "s")
    assert min_cut_nodeset(dead, ["x", "t"]) == 3


def test_min_cut_channelset_examples():
    tp = fixtures.three_path()
    assert min_cut_channelset(tp, ["e11"]) == 1
    assert min_cut_channelset(tp, ["e12", "e22"]) == 2
    assert min_cut_channelset(tp, ["e11", "e12"]) == 1
    assert min_cut(tp, Target.channels(["e11", "e21", "e31"])) == 3


@pytest.mark.parametrize("net", ALL_NETS[:4], ids=repr)
def test_nodeset_and_channelset_cuts_match_networkx(net):
    nodes = net.non_source
    for r in (1, 2, 3):
        for T in itertools.combinations(nodes, r):
            extra = [(t, "SINK", min_cut_node(net, t)) for t in T if min_cut_node(net, t)]
            g = nx_flow_graph(net, extra)
            g.add_node("SINK")
            assert min_cut_nodeset(net, T) == nx.maximum_flow_value(g, net.source, "SINK")
    for r in (1, 2):
        for xi in itertools.combinations(net.order, r):
            split, mapping = split_channels(net, xi)
            extra = [(mapping[e][0], "SINK", 1) for e in xi]
            g = nx_flow_graph(split, extra)
            g.add_node("SINK")
            assert min_cut_channelset(net, xi) == nx.maximum_flow_value(g, net.source, "SINK")


def test_channel_set_of_in_T_has_cut_C_T():
    for net in ALL_NETS[:4]:
        for r in (1, 2):
            for T in itertools.combinations(net.non_source, r):
                xi = net.target_channels(Target.nodes(T))
                if xi:
                    assert min_cut_channelset(net, xi) == min_cut_nodeset(net, T)


def test_pattern_rank_examples():
    tp = fixtures.three_path()
    assert pattern_rank(tp, ["e21"], "t") == 1
    assert pattern_rank(tp, ["e11", "e12"], "t") == 1
    assert pattern_rank(tp, ["e11", "e21"], "t") == 2
    assert pattern_rank(tp, [], "t") == 0


def surgery_oracle(net, rho, T):
    """Pattern-rank surgery built directly in networkx."""
    g = nx.DiGraph()
    g.add_nodes_from(list(net.nodes) + ["S_RHO", "SINK"])
    def bump(u, v, c=1):
        if g.has_edge(u, v):
            g[u][v]["capacity"] += c
        else:
            g.add_edge(u, v, capacity=c)
    for c in net.declared:
        if c.id not in rho:
            bump(c.tail, c.head)
    for e in rho:
        bump("S_RHO", net.head(e))
    for t in T:
        bump(t, "SINK", 10**6)
    return nx.maximum_flow_value(g, "S_RHO", "SINK")


@pytest.mark.parametrize("net", ALL_NETS[:4], ids=repr)
def test_pattern_rank_bounds_and_oracle(net):
    for r in (1, 2, 3):
        for rho in itertools.combinations(net.order, r):
            for t in net.non_source:
                k = pattern_rank(net, rho, t)
                assert k <= len(rho) and k <= min_cut_node(net, t)
                assert k == surgery_oracle(net, rho, [t])
            T = net.non_source[-2:]
            assert pattern_rank(net, rho, Target.nodes(T)) == surgery_oracle(net, rho, T)


def test_enumerate_R_examples():
    tp = fixtures.three_path()
    assert enumerate_R(tp, "t", 0) == [()]
    R = enumerate_R(tp, "t", 2)
    assert len(R) == 12
    brute = [rho for rho in itertools.combinations(tp.order, 2) if pattern_rank(tp, rho, "t") == 2]
    assert sorted(R) == sorted(brute)
    assert all(rho[0][1] != rho[1][1] for rho in R)  # distinct paths
    assert enumerate_R(fixtures.butterfly(), "t1", 0) == [()]


def test_enumerate_R_guard():
    tp = fixtures.three_path()
    with pytest.raises(GuardError):
        enumerate_R(tp, "t", 2, max_delta=1)
    with pytest.raises(GuardError):
        enumerate_R(tp, "t", 2, max_channels=5)


def check_family(net, t, rho, fam):
    delta = min_cut_node(net, t) - net.rate
    assert len(fam.paths) == net.rate + delta == net.rate + len(rho)
    used = [e for p in fam.paths for e in p]
    assert len(used) == len(set(used)), "paths must be channel-disjoint"
    kinds = [o[0] for o in fam.origins]
    assert kinds.count("message") == net.rate and kinds.count("error") == len(rho)
    for path, (kind, what) in zip(fam.paths, fam.origins):
        assert net.head(path[-1]) == t
        for a, b in zip(path, path[1:]):
            assert net.head(a) == net.tail(b)
        if kind == "message":
            assert net.tail(path[0]) == net.source
            assert not set(path) & set(rho)
        else:
            assert path[0] == what and what in rho
            assert not set(path[1:]) & set(rho)
    assert sorted(o[1] for o in fam.origins if o[0] == "error") == sorted(rho)


def test_path_family_examples():
    bf = fixtures.butterfly()
    fam = disjoint_path_family(bf, "t1", [])
    check_family(bf, "t1", (), fam)
    tp = fixtures.three_path()
    fam = disjoint_path_family(tp, "t", ["e11", "e21"])
    check_family(tp, "t", ("e11", "e21"), fam)
    msg = [p for p, o in zip(fam.paths, fam.origins) if o[0] == "message"]
    assert msg == [("e31", "e32")]
    chain = fixtures.chain(3)
    assert disjoint_path_family(chain, "t", []).paths == (("e1", "e2", "e3"),)


@pytest.mark.parametrize("net", ALL_NETS, ids=repr)
def test_every_R_pattern_has_a_disjoint_path_family(net):
    for t in net.non_source:
        C = min_cut_node(net, t)
        if C < net.rate:
            continue
        for rho in enumerate_R(net, t, C - net.rate):
            check_family(net, t, rho, disjoint_path_family(net, t, rho))


def test_path_family_infeasible():
    tp = fixtures.three_path()
    with pytest.raises(InfeasibleError):
        disjoint_path_family(tp, "t", ["e11", "e12"])
    with pytest.raises(InfeasibleError):
        disjoint_path_family(tp.with_rate(4), "t", [])
