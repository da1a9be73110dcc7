"""Small reference networks used throughout the tests and demos."""

from __future__ import annotations

import itertools

from .network import Network


def three_path(rate: int = 1) -> Network:
    """Three disjoint two-hop paths ``s -> r_i -> t``; channel ``e{i}1`` leaves s, ``e{i}2`` enters t."""
    nodes = ["s", "r1", "r2", "r3", "t"]
    chans = []
    for i in (1, 2, 3):
        chans.append((f"e{i}1", "s", f"r{i}"))
        chans.append((f"e{i}2", f"r{i}", "t"))
    return Network(nodes, chans, "s", rate)


def butterfly(rate: int = 2) -> Network:
    """Butterfly with three source branches.

    ``a`` feeds t1, ``b`` feeds t2, and the middle branch ``c`` crosses the
    bottleneck ``c -> d`` and fans out to both sinks.  Each sink has min
    cut 2 while the pair {t1, t2} has min cut 3.
    """
    nodes = ["s", "a", "b", "c", "d", "t1", "t2"]
    chans = [
        ("e1", "s", "a"),
        ("e2", "s", "b"),
        ("e3", "s", "c"),
        ("e4", "a", "t1"),
        ("e5", "b", "t2"),
        ("e6", "c", "d"),
        ("e7", "d", "t1"),
        ("e8", "d", "t2"),
    ]
    return Network(nodes, chans, "s", rate)


def diamond(rate: int = 1) -> Network:
    """Four-node diamond ``s -> {a, b} -> t`` with a cross channel ``a -> b``."""
    nodes = ["s", "a", "b", "t"]
    chans = [
        ("e1", "s", "a"),
        ("e2", "s", "b"),
        ("e3", "a", "b"),
        ("e4", "a", "t"),
        ("e5", "b", "t"),
    ]
    return Network(nodes, chans, "s", rate)


def stub(rate: int = 2) -> Network:
    """Sink ``t`` on two parallel channels plus a dead-end relay ``a`` on one."""
    nodes = ["s", "a", "t"]
    chans = [("e1", "s", "a"), ("e2", "s", "t"), ("e3", "s", "t")]
    return Network(nodes, chans, "s", rate)


def chain(length: int = 2, rate: int = 1) -> Network:
    """Single path ``s -> v1 -> ... -> t`` with ``length`` channels."""
    names = ["s"] + [f"v{k}" for k in range(1, length)] + ["t"]
    chans = [(f"e{k + 1}", names[k], names[k + 1]) for k in range(length)]
    return Network(names, chans, "s", rate)


def combination(n: int = 4, k: int = 2) -> Network:
    """Combination network: ``n`` relays fed once by the source, one sink per ``k``-subset of relays.

    With ``rate = k`` every sink needs the relay kernels to be pairwise
    independent, which over GF(2) fails for ``n = 4, k = 2``.
    """
    relays = [f"r{i}" for i in range(1, n + 1)]
    sinks = {}
    chans = [(f"s{r}", "s", r) for r in relays]
    for combo in itertools.combinations(relays, k):
        t = "t" + "".join(r[1:] for r in combo)
        sinks[t] = combo
        chans += [(f"{r}{t}", r, t) for r in combo]
    return Network(["s"] + relays + list(sinks), chans, "s", k)


ALL = {
    "three_path": three_path,
    "butterfly": butterfly,
    "diamond": diamond,
    "stub": stub,
    "chain": chain,
    "combination": combination,
}
