"""Single-source acyclic networks with unit-capacity channels.

Channels are identified by string ids.  Every vector and matrix in the
package indexes channels by :attr:`Network.order`, the deterministic
upstream-to-downstream order computed at construction.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "Channel",
    "GuardError",
    "InfeasibleError",
    "Network",
    "NetworkError",
    "PathFamily",
    "Target",
    "as_target",
    "disjoint_path_family",
    "enumerate_R",
    "min_cut",
    "min_cut_channelset",
    "min_cut_node",
    "min_cut_nodeset",
    "pattern_rank",
    "split_channels",
    "topo_order",
]

INF = 1 << 30


class NetworkError(ValueError):
    """Malformed network; ``cycle`` holds a witness when the graph is cyclic."""

    def __init__(self, msg, cycle=None):
        super().__init__(msg)
        self.cycle = cycle


class GuardError(RuntimeError):
    """An exhaustive enumeration would exceed its configured size limit."""


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class Channel:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Target:
    """What a decoder looks at: one node, a collection of nodes, or a set of channels."""

    kind: str
    members: tuple

    @classmethod
    def node(cls, t: str) -> "Target":
        return cls("node", (t,))

    @classmethod
    def nodes(cls, T: Iterable[str]) -> "Target":
        return cls("nodes", tuple(sorted(set(T))))

    @classmethod
    def channels(cls, xi: Iterable[str]) -> "Target":
        return cls("channels", tuple(sorted(set(xi))))

    def __str__(self):
        if self.kind == "node":
            return self.members[0]
        return "{" + ",".join(self.members) + "}"

    def to_json(self):
        if self.kind == "node":
            return self.members[0]
        return {self.kind: list(self.members)}


def as_target(obj) -> Target:
    """Accept a :class:`Target`, a node id, or an iterable of node ids."""
    if isinstance(obj, Target):
        return obj
    if isinstance(obj, str):
        return Target.node(obj)
    return Target.nodes(obj)


class Network:
    """Validated acyclic multigraph with a single source and an information rate.

    Instances are treated as immutable; derived quantities (cuts, ranks)
    are memoised on the instance.
    """

    def __init__(self, nodes: Iterable[str], channels: Iterable, source: str, rate: int = 1):
        self.nodes = tuple(dict.fromkeys(nodes))
        self.source = source
        self.rate = int(rate)
        chans = [c if isinstance(c, Channel) else Channel(*c) for c in channels]
        self.declared = tuple(chans)
        self._validate()
        self.channel = {c.id: c for c in chans}
        self._in = defaultdict(list)
        self._out = defaultdict(list)
        self.order = tuple(topo_order(self))
        self.index = {e: k for k, e in enumerate(self.order)}
        for e in self.order:
            c = self.channel[e]
            self._in[c.head].append(e)
            self._out[c.tail].append(e)
        self._node_set = frozenset(self.nodes)
        self._cache = {}

    def _validate(self):
        if self.rate < 1:
            raise NetworkError(f"rate must be >= 1, got {self.rate}")
        node_set = set(self.nodes)
        if self.source not in node_set:
            raise NetworkError(f"source {self.source!r} is not a declared node")
        seen = set()
        for c in self.declared:
            if c.id in seen:
                raise NetworkError(f"duplicate channel id {c.id!r}")
            seen.add(c.id)
            for end in (c.tail, c.head):
                if end not in node_set:
                    raise NetworkError(f"channel {c.id!r} references unknown node {end!r}")
            if c.tail == c.head:
                raise NetworkError(f"self-loop on channel {c.id!r}", cycle=[c.id])
            if c.head == self.source:
                raise NetworkError(f"source {self.source!r} has incoming channel {c.id!r}")

    def __repr__(self):
        return f"Network({len(self.nodes)} nodes, {len(self.order)} channels, rate={self.rate})"

    @property
    def non_source(self) -> tuple:
        return tuple(v for v in self.nodes if v != self.source)

    def in_channels(self, node: str) -> tuple:
        return tuple(self._in.get(node, ()))

    def out_channels(self, node: str) -> tuple:
        return tuple(self._out.get(node, ()))

    def tail(self, e: str) -> str:
        return self.channel[e].tail

    def head(self, e: str) -> str:
        return self.channel[e].head

    def with_rate(self, rate: int) -> "Network":
        return Network(self.nodes, self.declared, self.source, rate)

    def check_channels(self, chans: Iterable[str]) -> tuple:
        """Deduplicate and sort channel ids canonically, rejecting unknown ids."""
        out = set()
        for e in chans:
            if e not in self.index:
                raise KeyError(f"unknown channel {e!r}")
            out.add(e)
        return tuple(sorted(out, key=self.index.__getitem__))

    def target_channels(self, target) -> tuple:
        """In(t), In(T), or the channel set itself, in canonical order."""
        target = as_target(target)
        if target.kind == "channels":
            return self.check_channels(target.members)
        chans = []
        for t in target.members:
            if t not in self._node_set:
                raise KeyError(f"unknown node {t!r}")
            chans.extend(self.in_channels(t))
        return self.check_channels(chans)

    def upstream_channels(self, chans: Iterable[str]) -> tuple:
        """Channels with a path into (or equal to) any of ``chans``."""
        seen = set()
        stack = list(chans)
        while stack:
            e = stack.pop()
            if e in seen:
                continue
            seen.add(e)
            stack.extend(self.in_channels(self.tail(e)))
        return tuple(sorted(seen, key=self.index.__getitem__))

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "rate": self.rate,
            "nodes": list(self.nodes),
            "channels": [{"id": c.id, "tail": c.tail, "head": c.head} for c in self.declared],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Network":
        chans = [Channel(str(c["id"]), str(c["tail"]), str(c["head"])) for c in obj["channels"]]
        nodes = obj.get("nodes")
        if nodes is None:
            nodes = [obj["source"]] + [v for c in chans for v in (c.tail, c.head)]
        return cls(nodes, chans, obj["source"], obj.get("rate", 1))


def _find_cycle(nodes, channels) -> list:
    adj = defaultdict(list)
    for c in channels:
        adj[c.tail].append(c)
    color = dict.fromkeys(nodes, 0)
    stack_edges = []

    def dfs(u):
        color[u] = 1
        for c in adj[u]:
            stack_edges.append(c)
            if color[c.head] == 1:
                k = next(i for i, x in enumerate(stack_edges) if x.tail == c.head)
                return [x.id for x in stack_edges[k:]]
            if color[c.head] == 0:
                found = dfs(c.head)
                if found:
                    return found
            stack_edges.pop()
        color[u] = 2
        return None

    for v in nodes:
        if color[v] == 0:
            found = dfs(v)
            if found:
                return found
    return []


def topo_order(net: Network) -> list:
    """Upstream-to-downstream channel order, ties broken by channel id.

    Raises :class:`NetworkError` carrying a witness cycle if the graph is
    not acyclic.
    """
    chans = net.declared
    into = defaultdict(list)
    for c in chans:
        into[c.head].append(c.id)
    waiting = {c.id: len(into[c.tail]) for c in chans}
    out_of = defaultdict(list)
    for c in chans:
        out_of[c.tail].append(c.id)
    by_id = {c.id: c for c in chans}
    heap = [e for e, k in waiting.items() if k == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        e = heapq.heappop(heap)
        order.append(e)
        for nxt in out_of[by_id[e].head]:
            waiting[nxt] -= 1
            if waiting[nxt] == 0:
                heapq.heappush(heap, nxt)
    if len(order) != len(chans):
        cycle = _find_cycle(net.nodes, chans)
        raise NetworkError(f"network has a cycle through {cycle}", cycle=cycle)
    return order


# -- max flow ---------------------------------------------------------------


class _Flow:
    """Residual graph for BFS augmenting-path max flow."""

    def __init__(self):
        self.adj = defaultdict(list)
        self.head = []
        self.cap = []
        self.label = []

    def add(self, u, v, cap=1, label=None) -> int:
        k = len(self.head)
        self.adj[u].append(k)
        self.head.append(v)
        self.cap.append(cap)
        self.label.append(label)
        self.adj[v].append(k + 1)
        self.head.append(u)
        self.cap.append(0)
        self.label.append(None)
        return k

    def run(self, s, t, limit=INF) -> int:
        self.orig = list(self.cap)
        flow = 0
        if s == t:
            return 0
        while flow < limit:
            parent = {s: None}
            queue = deque([s])
            while queue and t not in parent:
                u = queue.popleft()
                for k in self.adj[u]:
                    v = self.head[k]
                    if self.cap[k] > 0 and v not in parent:
                        parent[v] = k
                        queue.append(v)
            if t not in parent:
                break
            push = limit - flow
            v = t
            while parent[v] is not None:
                k = parent[v]
                push = min(push, self.cap[k])
                v = self.head[k ^ 1]
            v = t
            while parent[v] is not None:
                k = parent[v]
                self.cap[k] -= push
                self.cap[k ^ 1] += push
                v = self.head[k ^ 1]
            flow += push
        return flow

    def used(self, k) -> int:
        return self.orig[k] - self.cap[k]


def _node(v):
    return ("v", v)


def _base_flow(net: Network, skip=()) -> _Flow:
    g = _Flow()
    for e in net.order:
        if e in skip:
            continue
        c = net.channel[e]
        g.add(_node(c.tail), _node(c.head), 1, e)
    return g


def min_cut_node(net: Network, t: str) -> int:
    """Max-flow value from the source to ``t`` (0 when unreachable)."""
    if t == net.source:
        raise ValueError("target must be a non-source node")
    key = ("node", t)
    if key not in net._cache:
        net._cache[key] = _base_flow(net).run(_node(net.source), _node(t))
    return net._cache[key]


def min_cut_nodeset(net: Network, T: Iterable[str]) -> int:
    """Min cut between the source and a collection of nodes.

    Adds a node ``t_T`` fed by ``C_t`` parallel unit channels from every
    ``t`` in the collection and takes the max flow into it.
    """
    T = tuple(sorted(set(T)))
    if not T:
        raise ValueError("collection must be nonempty")
    if net.source in T:
        raise ValueError("collection must not contain the source")
    key = ("nodes", T)
    if key not in net._cache:
        g = _base_flow(net)
        sink = ("t_T",)
        for t in T:
            for _ in range(min_cut_node(net, t)):
                g.add(_node(t), sink, 1)
        net._cache[key] = g.run(_node(net.source), sink)
    return net._cache[key]


def _split_flow(net: Network, xi: tuple, skip=(), extra_source=None) -> tuple:
    """Flow graph of the network with each channel of ``xi`` split by a node n_e."""
    g = _Flow()
    xi_set = set(xi)
    for e in net.order:
        c = net.channel[e]
        if e in xi_set:
            mid = ("n", e)
            if e not in skip:
                g.add(_node(c.tail), mid, 1, e)
            g.add(mid, _node(c.head), 1)
        elif e not in skip:
            g.add(_node(c.tail), _node(c.head), 1, e)
    return g


def min_cut_channelset(net: Network, xi: Iterable[str]) -> int:
    """Min cut between the source and a set of channels (via channel splitting)."""
    xi = net.check_channels(xi)
    if not xi:
        raise ValueError("channel set must be nonempty")
    key = ("channels", xi)
    if key not in net._cache:
        g = _split_flow(net, xi)
        sink = ("t_T",)
        for e in xi:
            # n_e has one incoming channel, so C_{n_e} <= 1 and a unit edge suffices
            g.add(("n", e), sink, 1)
        net._cache[key] = g.run(_node(net.source), sink)
    return net._cache[key]


def min_cut(net: Network, target) -> int:
    target = as_target(target)
    if target.kind == "node":
        return min_cut_node(net, target.members[0])
    if target.kind == "nodes":
        return min_cut_nodeset(net, target.members)
    return min_cut_channelset(net, target.members)


def split_channels(net: Network, xi: Iterable[str] | None = None) -> tuple:
    """Network with each channel ``e`` of ``xi`` (default: all) replaced by
    ``e_1 = (tail, n_e)`` and ``e_2 = (n_e, head)``.

    Returns ``(network, mapping)`` where ``mapping[e] = (n_e, e_1, e_2)``.
    """
    xi = set(net.order if xi is None else net.check_channels(xi))
    taken = set(net.nodes) | set(net.order)
    nodes = list(net.nodes)
    chans = []
    mapping = {}
    for c in net.declared:
        if c.id not in xi:
            chans.append(c)
            continue
        n_e = _fresh(f"n[{c.id}]", taken)
        e1 = _fresh(f"{c.id}.1", taken)
        e2 = _fresh(f"{c.id}.2", taken)
        nodes.append(n_e)
        chans += [Channel(e1, c.tail, n_e), Channel(e2, n_e, c.head)]
        mapping[c.id] = (n_e, e1, e2)
    return Network(nodes, chans, net.source, net.rate), mapping


def _fresh(name: str, taken: set) -> str:
    out = name
    while out in taken:
        out = "_" + out
    taken.add(out)
    return out


# -- error patterns -----------------------------------------------------------


def pattern_rank(net: Network, rho: Iterable[str], target) -> int:
    """Rank of an error pattern with respect to a target.

    Deletes each pattern channel ``e_j`` and feeds its head from a new
    source ``s_rho``; the rank is the max flow from ``s_rho`` to the target.
    """
    rho = net.check_channels(rho)
    target = as_target(target)
    if not rho:
        return 0
    key = ("rank", rho, target)
    if key in net._cache:
        return net._cache[key]
    s_rho = ("s_rho",)
    sink = ("t_T",)
    if target.kind == "channels":
        xi = net.check_channels(target.members)
        g = _split_flow(net, xi, skip=set(rho))
        for e in rho:
            dest = ("n", e) if e in set(xi) else _node(net.head(e))
            g.add(s_rho, dest, 1)
        for e in xi:
            g.add(("n", e), sink, INF)
    else:
        g = _base_flow(net, skip=set(rho))
        for e in rho:
            g.add(s_rho, _node(net.head(e)), 1)
        for t in target.members:
            g.add(_node(t), sink, INF)
    value = g.run(s_rho, sink)
    net._cache[key] = value
    return value


def enumerate_R(net: Network, t, delta: int, *, max_delta: int = 6, max_channels: int = 40) -> list:
    """All patterns of size ``delta`` whose rank at ``t`` equals ``delta``.

    Only channels upstream of the target can contribute rank, so the
    search runs over that set; the size guard applies to it.
    """
    target = as_target(t)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta == 0:
        return [()]
    key = ("R", target, delta)
    if key in net._cache:
        return net._cache[key]
    candidates = net.upstream_channels(net.target_channels(target))
    if delta > max_delta or len(candidates) > max_channels:
        raise GuardError(
            f"enumerating rank-{delta} patterns over {len(candidates)} channels exceeds the guard"
            f" (delta <= {max_delta}, channels <= {max_channels})"
        )
    out = [
        rho for rho in itertools.combinations(candidates, delta)
        if pattern_rank(net, rho, target) == delta
    ]
    net._cache[key] = out
    return out


@dataclass(frozen=True)
class PathFamily:
    """Channel-disjoint paths into one node.

    ``origins[k]`` is ``("message", i)`` for a path fed by the i-th
    imaginary message channel, or ``("error", e)`` for a path fed by the
    imaginary error channel of ``e``; such a path starts with ``e`` itself.
    """

    target: str
    pattern: tuple
    paths: tuple
    origins: tuple

    @property
    def channels(self) -> frozenset:
        return frozenset(e for p in self.paths for e in p)

    def predecessors(self) -> dict:
        """Map each real channel to the previous channel on its path.

        Imaginary predecessors are ``("msg", i)`` and ``("err", e)``.
        """
        pred = {}
        for path, (kind, what) in zip(self.paths, self.origins):
            prev = ("msg", what) if kind == "message" else ("err", what)
            for e in path:
                pred[e] = prev
                prev = ("ch", e)
        return pred

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "pattern": list(self.pattern),
            "paths": [
                {"origin": (f"d{what + 1}'" if kind == "message" else f"{what}'"), "channels": list(p)}
                for p, (kind, what) in zip(self.paths, self.origins)
            ],
        }


def disjoint_path_family(net: Network, t: str, rho: Iterable[str]) -> PathFamily:
    """``rate + |rho|`` channel-disjoint paths into ``t``.

    ``rate`` of them leave the source; one more starts with each pattern
    channel.  Raises :class:`InfeasibleError` if no such family exists.
    """
    rho = net.check_channels(rho)
    omega = net.rate
    need = omega + len(rho)
    g = _base_flow(net, skip=set(rho))
    root = ("S*",)
    g.add(root, _node(net.source), omega, ("msg",))
    for e in rho:
        g.add(root, _node(net.head(e)), 1, ("err", e))
    value = g.run(root, _node(t), limit=need)
    if value < need:
        raise InfeasibleError(
            f"only {value} of {need} disjoint paths reach {t!r} for pattern {list(rho)}"
        )
    remaining = {k: g.used(k) for k in range(0, len(g.head), 2) if g.used(k) > 0}
    paths, origins = [], []
    msg_count = 0
    starts = [k for k in g.adj[root] if k % 2 == 0 and k in remaining]
    for k0 in sorted(starts, key=lambda k: (g.label[k][0] != "msg", k)):
        while remaining.get(k0, 0) > 0:
            remaining[k0] -= 1
            label = g.label[k0]
            if label[0] == "msg":
                path, origin = [], ("message", msg_count)
                msg_count += 1
            else:
                path, origin = [label[1]], ("error", label[1])
            u = g.head[k0]
            while u != _node(t):
                k = min(
                    (k for k in g.adj[u] if k % 2 == 0 and remaining.get(k, 0) > 0),
                    key=lambda k: net.index[g.label[k]],
                )
                remaining[k] -= 1
                path.append(g.label[k])
                u = g.head[k]
            paths.append(tuple(path))
            origins.append(origin)
    return PathFamily(t, rho, tuple(paths), tuple(origins))
