import itertools

import networkx as nx
import numpy as np
import pytest

from lnec import fixtures
from lnec.galois import FieldSpec, get_field


def nx_graph(net):
    g = nx.MultiDiGraph()
    g.add_nodes_from(net.nodes)
    for c in net.declared:
        g.add_edge(c.tail, c.head, key=c.id)
    return g


def nx_flow_graph(net, extra=()):
    """Simple DiGraph with summed unit capacities, for networkx max-flow."""
    g = nx.DiGraph()
    g.add_nodes_from(net.nodes)
    for u, v, cap in [(c.tail, c.head, 1) for c in net.declared] + list(extra):
        if g.has_edge(u, v):
            g[u][v]["capacity"] += cap
        else:
            g.add_edge(u, v, capacity=cap)
    return g


def nx_min_cut(net, t):
    g = nx_flow_graph(net)
    if not nx.has_path(g, net.source, t):
        return 0
    return nx.maximum_flow_value(g, net.source, t)


def rowspace(F, M):
    """Every vector of the row space of M (tiny fields only)."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64))
    out = set()
    for coeffs in itertools.product(range(F.q), repeat=M.shape[0]):
        v = F.matmul(np.array(coeffs, dtype=np.int64)[None, :], M)[0] if M.shape[0] else np.zeros(M.shape[1], dtype=np.int64)
        out.add(tuple(int(x) for x in v))
    return out


@pytest.fixture(params=["three_path", "butterfly", "diamond", "stub"])
def fixture_net(request):
    return fixtures.ALL[request.param]()


@pytest.fixture
def gf5():
    return get_field(FieldSpec(5))


@pytest.fixture
def gf16():
    return get_field(FieldSpec(2, 4))


SMALL_FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(2, 2), FieldSpec(5), FieldSpec(7), FieldSpec(2, 3),
                FieldSpec(11), FieldSpec(13), FieldSpec(2, 4)]


def brute_distance(code, target):
    """Least number of channel errors whose effect at ``target`` equals a nonzero message image.

    Enumerates messages and error values directly; independent of the
    subspace machinery.  Returns ``None`` when no such error exists.
    """
    F = code.field
    view = code.view(target)
    net = code.network
    msgs = np.array(list(itertools.product(range(F.q), repeat=net.rate)), dtype=np.int64)
    images = F.matmul(msgs, view.F)
    images = images[np.any(images, axis=1)]
    if not len(images):
        return None
    live = [net.index[e] for e in net.order if np.any(view.G[net.index[e]])]
    for k in range(1, len(live) + 1):
        vals = np.array(list(itertools.product(range(1, F.q), repeat=k)), dtype=np.int64)
        for rho in itertools.combinations(live, k):
            eff = F.matmul(vals, view.G[list(rho)])
            if np.any(np.all(eff[:, None, :] == images[None, :, :], axis=2)):
                return k
    return None


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
