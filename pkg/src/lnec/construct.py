"""Deterministic and random construction of MDS network error-correction codes.

The multicast construction walks the channels upstream to downstream.  For
every sink ``t`` with ``C_t >= rate`` and every maximal-rank error pattern
``rho`` it keeps a family of disjoint paths and a moving cut of
``rate + delta_t`` channels; each new kernel is chosen outside a union of
subspaces so every cut stays independent once restricted to ``rho``.

Broadcast, dispersion and generic codes come from running the multicast
construction on an enlarged network and restricting the result.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass, field
from math import comb
from typing import Iterable

import numpy as np

from .code import LnecCode, kernel_rows, restrict_pattern
from .galois import GF, FieldSpec, get_field, supported_orders
from .network import (
    Channel,
    GuardError,
    Network,
    PathFamily,
    _fresh,
    disjoint_path_family,
    enumerate_R,
    min_cut_node,
    min_cut_nodeset,
    split_channels,
)

__all__ = [
    "ConstructionError",
    "ConstructionPlan",
    "FieldSizeReport",
    "FieldTooSmall",
    "FieldTooSmallWarning",
    "NoEligibleSink",
    "broadcast_transform",
    "construct_broadcast_mds",
    "construct_dispersion_mds",
    "construct_generic_mds",
    "construct_multicast_mds",
    "construct_random",
    "dispersion_transform",
    "field_size_bounds",
    "plan_multicast",
]

log = logging.getLogger(__name__)

# lexicographic candidate scans stop here; only reachable with huge fields
MAX_CANDIDATES = 1 << 62
CHUNK = 4096


class ConstructionError(RuntimeError):
    pass


class NoEligibleSink(ConstructionError):
    pass


class FieldTooSmall(ConstructionError):
    """The choice step found no admissible kernel for ``channel``.

    ``pairs`` lists the (sink, pattern) constraints active at that channel;
    ``blocking`` is the first of them whose forbidden subspace alone
    swallows every candidate, or the first active pair otherwise.
    """

    def __init__(self, channel, pairs, blocking):
        t, rho = blocking
        super().__init__(
            f"no admissible kernel for channel {channel!r}: blocked at sink {t!r}, pattern {list(rho)}"
            f" ({len(pairs)} active constraints)"
        )
        self.channel = channel
        self.pairs = pairs
        self.blocking = blocking


class FieldTooSmallWarning(UserWarning):
    pass


def _field(field) -> GF:
    if isinstance(field, GF):
        return field
    if isinstance(field, FieldSpec):
        return get_field(field)
    return get_field(FieldSpec.of_order(int(field)))


# -- planning -----------------------------------------------------------------


@dataclass
class _Track:
    target: str
    pattern: tuple
    family: PathFamily
    pred: dict
    cut: list


@dataclass
class ConstructionPlan:
    """Per (sink, pattern) path families and the field-size bound they imply."""

    network: Network
    tracks: list
    bound: int

    @property
    def sinks(self) -> list:
        return sorted({tr.target for tr in self.tracks}, key=self.network.nodes.index)

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "families": [tr.family.to_json() for tr in self.tracks],
        }


def eligible_sinks(net: Network) -> list:
    return [t for t in net.non_source if min_cut_node(net, t) >= net.rate]


def plan_multicast(net: Network, *, max_delta: int = 6, max_channels: int = 40) -> ConstructionPlan:
    sinks = eligible_sinks(net)
    if not sinks:
        raise NoEligibleSink(f"no eligible sink: every node has min cut below the rate {net.rate}")
    tracks = []
    for t in sinks:
        delta = min_cut_node(net, t) - net.rate
        for rho in enumerate_R(net, t, delta, max_delta=max_delta, max_channels=max_channels):
            fam = disjoint_path_family(net, t, rho)
            cut = [("msg", i) for i in range(net.rate)] + [("err", e) for e in rho]
            tracks.append(_Track(t, rho, fam, fam.predecessors(), cut))
    return ConstructionPlan(net, tracks, len(tracks))


# -- the choice step ----------------------------------------------------------


def _lex_candidates(q: int, k: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((k, idx.size), dtype=np.int64)
    for j in range(k - 1, -1, -1):
        out[j] = idx % q
        idx //= q
    return out


class _Avoider:
    """Tests coefficient vectors ``c`` against a union of forbidden subspaces.

    For generators ``basis`` (rows) and a forbidden row space ``B`` the set
    ``{c : c @ basis in B}`` is the kernel of a small check matrix ``H``;
    ``c`` is admissible iff ``H c != 0`` for every forbidden space.
    """

    def __init__(self, field: GF, basis: np.ndarray):
        self.field = field
        self.basis = basis
        self.checks = []

    def forbid(self, B: np.ndarray) -> bool:
        """Register a forbidden space; False if it contains every candidate."""
        F = self.field
        R, piv = F.rref(B)
        residues = F.reduce(R[: len(piv)], piv, self.basis)
        H = F.row_basis(residues.T)
        if H.shape[0] == 0:
            return False
        self.checks.append(H)
        return True

    def admissible(self, C: np.ndarray) -> np.ndarray:
        if not self.checks:
            return np.any(C != 0, axis=0)
        H = np.vstack(self.checks)
        Y = self.field.matmul(H, C) != 0
        starts = np.cumsum([0] + [h.shape[0] for h in self.checks[:-1]])
        return np.all(np.add.reduceat(Y, starts, axis=0) > 0, axis=0)


def _choose(av: _Avoider, q: int, method: str, rng) -> np.ndarray | None:
    k = av.basis.shape[0]
    if method == "random":
        for _ in range(32):
            C = rng.integers(0, q, size=(k, 64), dtype=np.int64)
            ok = np.flatnonzero(av.admissible(C))
            if ok.size:
                return C[:, ok[0]]
    total = min(q ** k, MAX_CANDIDATES)
    for start in range(1, total, CHUNK):
        C = _lex_candidates(q, k, start, min(start + CHUNK, total))
        ok = np.flatnonzero(av.admissible(C))
        if ok.size:
            return C[:, ok[0]]
    return None


# -- multicast construction --------------------------------------------------


def multicast_bound(net: Network) -> int:
    return sum(len(enumerate_R(net, t, min_cut_node(net, t) - net.rate)) for t in eligible_sinks(net))


def construct_multicast_mds(
    net: Network,
    field,
    method: str = "deterministic",
    seed: int | None = None,
    *,
    check_invariants: bool = False,
    plan: ConstructionPlan | None = None,
    warn: bool = True,
) -> LnecCode:
    """Multicast MDS code: every sink with ``C_t >= rate`` gets distance ``C_t - rate + 1``.

    ``method`` is ``"deterministic"`` (lexicographic scan of combination
    coefficients) or ``"random"`` (seeded sampling, falling back to the
    scan).  Fields at or below the sufficient size bound are attempted with
    a :class:`FieldTooSmallWarning`; :class:`FieldTooSmall` is raised if a
    channel has no admissible kernel.
    """
    F = _field(field)
    if method not in ("deterministic", "random"):
        raise ValueError(f"unknown method {method!r}")
    if method == "random" and seed is None:
        raise ValueError("random construction needs a seed")
    rng = np.random.default_rng(seed)
    plan = plan or plan_multicast(net)
    if warn and F.q <= plan.bound:
        warnings.warn(
            f"field order {F.q} does not exceed the sufficient bound {plan.bound}; attempting anyway",
            FieldTooSmallWarning,
            stacklevel=2,
        )
    w, n = net.rate, len(net.order)
    ext = np.zeros((w + n, n), dtype=np.int64)
    K = {v: np.zeros((len(kernel_rows(net, v)), len(net.out_channels(v))), dtype=np.int64)
         for v in net.nodes if net.out_channels(v)}
    eye = np.eye(w + n, dtype=np.int64)

    def vec(tok):
        kind, x = tok
        if kind == "msg":
            return eye[x]
        if kind == "err":
            return eye[w + net.index[x]]
        return ext[:, net.index[x]]

    for e in net.order:
        i = net.tail(e)
        col = net.out_channels(i).index(e)
        active = [tr for tr in plan.tracks if e in tr.pred]
        if not active:
            ext[:, net.index[e]] = eye[w + net.index[e]]
            continue
        if i == net.source:
            in_toks = [("msg", j) for j in range(w)]
        else:
            in_toks = [("ch", d) for d in net.in_channels(i)]
        gen_toks = in_toks + [("err", e)]
        basis = np.array([vec(tok) for tok in gen_toks], dtype=np.int64)
        av = _Avoider(F, basis)
        for tr in active:
            rows = [restrict_pattern(net, vec(tok), tr.pattern, "keep")
                    for tok in tr.cut if tok != tr.pred[e]]
            rows += [restrict_pattern(net, vec(tok), tr.pattern, "complement") for tok in gen_toks]
            if not av.forbid(np.array(rows, dtype=np.int64)):
                raise FieldTooSmall(e, [(x.target, x.pattern) for x in active], (tr.target, tr.pattern))
        c = _choose(av, F.q, method, rng)
        if c is None:
            first = active[0]
            raise FieldTooSmall(e, [(x.target, x.pattern) for x in active], (first.target, first.pattern))
        # normalise so the kernel has a 1 in its own error coordinate
        coeffs = c[:-1] if c[-1] == 0 else F.div(c[:-1], int(c[-1]))
        K[i][:, col] = coeffs
        f = F.matmul(coeffs[None, :], basis[:-1])[0] if len(coeffs) else np.zeros(w + n, dtype=np.int64)
        f[w + net.index[e]] = F.add(f[w + net.index[e]], 1)
        ext[:, net.index[e]] = f
        for tr in active:
            tr.cut[tr.cut.index(tr.pred[e])] = ("ch", e)
        if check_invariants:
            for tr in plan.tracks:
                P = np.array([restrict_pattern(net, vec(tok), tr.pattern, "proj") for tok in tr.cut])
                if F.rank(P) != w + len(tr.pattern):
                    raise AssertionError(
                        f"cut for sink {tr.target!r}, pattern {list(tr.pattern)} lost rank after {e!r}"
                    )
    code = LnecCode(net, F, K)
    if not np.array_equal(code.extended, ext):
        raise AssertionError("local kernels do not reproduce the chosen global kernels")
    code.construction = {
        "kind": "multicast",
        "method": method,
        "seed": seed,
        "field": F.spec.to_json(),
        "bound": plan.bound,
        "families": [tr.family.to_json() for tr in plan.tracks],
    }
    return code


# -- network transforms ---------------------------------------------------------


def broadcast_transform(net: Network) -> tuple:
    """Give every node with ``C_t < rate`` a helper node ``t'`` of min cut exactly ``rate``.

    ``t'`` receives ``C_t`` channels from ``t`` and ``rate - C_t`` channels
    from the source.  Returns ``(network, {t: t'})``.
    """
    w = net.rate
    taken = set(net.nodes) | set(net.order)
    nodes = list(net.nodes)
    chans = list(net.declared)
    helpers = {}
    for t in net.non_source:
        c = min_cut_node(net, t)
        if c >= w:
            continue
        tp = _fresh(f"{t}'", taken)
        helpers[t] = tp
        nodes.append(tp)
        chans += [Channel(_fresh(f"{t}>{tp}#{k}", taken), t, tp) for k in range(c)]
        chans += [Channel(_fresh(f"{net.source}>{tp}#{k}", taken), net.source, tp) for k in range(w - c)]
    return Network(nodes, chans, net.source, w), helpers


def dispersion_transform(net: Network, collections: Iterable) -> tuple:
    """Add a node ``t_T`` per collection, fed by ``C_t`` channels from each ``t`` in it.

    Returns ``(network, {T: t_T})`` with ``T`` as sorted tuples.
    """
    taken = set(net.nodes) | set(net.order)
    nodes = list(net.nodes)
    chans = list(net.declared)
    supers = {}
    for T in collections:
        T = tuple(sorted(set(T)))
        if T in supers:
            continue
        tT = _fresh("t_{" + ",".join(T) + "}", taken)
        supers[T] = tT
        nodes.append(tT)
        for t in T:
            chans += [Channel(_fresh(f"{t}>{tT}#{k}", taken), t, tT) for k in range(min_cut_node(net, t))]
    return Network(nodes, chans, net.source, net.rate), supers


def all_collections(net: Network, max_nodes: int = 10) -> list:
    nodes = net.non_source
    if len(net.nodes) > max_nodes:
        raise GuardError(
            f"{len(net.nodes)} nodes exceed the collection guard ({max_nodes}); pass collections explicitly"
        )
    return [c for r in range(1, len(nodes) + 1) for c in itertools.combinations(nodes, r)]


def all_channel_sets(net: Network, max_channels: int = 12) -> list:
    if len(net.order) > max_channels:
        raise GuardError(
            f"{len(net.order)} channels exceed the channel-set guard ({max_channels})"
        )
    return [c for r in range(1, len(net.order) + 1) for c in itertools.combinations(net.order, r)]


def construct_broadcast_mds(net: Network, field, method: str = "deterministic", seed=None,
                            *, check_invariants: bool = False, warn: bool = True) -> LnecCode:
    """Broadcast MDS code: multicast MDS on the helper-node network, restricted back."""
    F = _field(field)
    big, helpers = broadcast_transform(net)
    plan = plan_multicast(big)
    if warn and F.q <= plan.bound:
        warnings.warn(
            f"field order {F.q} does not exceed the sufficient bound {plan.bound}; attempting anyway",
            FieldTooSmallWarning,
            stacklevel=2,
        )
    code_big = construct_multicast_mds(big, F, method, seed, check_invariants=check_invariants,
                                       plan=plan, warn=False)
    code = code_big.restricted_to(net)
    code.construction = dict(code_big.construction, kind="broadcast", helpers=helpers)
    code.lifted = code_big
    return code


def construct_dispersion_mds(net: Network, field, collections=None, method: str = "deterministic",
                             seed=None, *, max_nodes: int = 10, check_invariants: bool = False,
                             warn: bool = True) -> LnecCode:
    """Dispersion MDS code for every collection (default: all of them, guarded by ``max_nodes``)."""
    F = _field(field)
    if collections is None:
        collections = all_collections(net, max_nodes)
    big, supers = dispersion_transform(net, collections)
    code_big = construct_broadcast_mds(big, F, method, seed, check_invariants=check_invariants, warn=warn)
    code = code_big.restricted_to(net)
    code.construction = dict(code_big.construction, kind="dispersion",
                             collections=[list(T) for T in supers])
    code.lifted = code_big
    return code


def construct_generic_mds(net: Network, field, method: str = "deterministic", seed=None,
                          *, max_channels: int = 10, check_invariants: bool = False,
                          warn: bool = True) -> LnecCode:
    """Generic MDS code via channel splitting.

    Every channel ``e`` becomes ``e_1 -> n_e -> e_2``; a dispersion MDS code
    is built for the collections ``{n_e : e in xi}`` and each kernel of the
    original channel is read off ``e_1``.  Local coefficients follow as
    ``k_{d,e} = k_{d_2,e_1} * k_{d_1,d_2}``.
    """
    F = _field(field)
    if len(net.order) > max_channels:
        raise GuardError(f"{len(net.order)} channels exceed the generic construction guard ({max_channels})")
    split, mapping = split_channels(net)
    collections = [
        [mapping[e][0] for e in xi]
        for r in range(1, len(net.order) + 1)
        for xi in itertools.combinations(net.order, r)
    ]
    code_split = construct_dispersion_mds(split, F, collections, method, seed,
                                          check_invariants=check_invariants, warn=warn)
    K = {}
    for v in net.nodes:
        outs = net.out_channels(v)
        if not outs:
            continue
        rows = kernel_rows(net, v)
        Kv = np.zeros((len(rows), len(outs)), dtype=np.int64)
        for c, e in enumerate(outs):
            e1 = mapping[e][1]
            for r, d in enumerate(rows):
                if v == net.source:
                    Kv[r, c] = code_split.coefficient(d, e1)
                else:
                    d1, d2 = mapping[d][1], mapping[d][2]
                    Kv[r, c] = F.mul(code_split.coefficient(d2, e1), code_split.coefficient(d1, d2))
        K[v] = Kv
    code = LnecCode(net, F, K)
    w = net.rate
    rows = list(range(w)) + [w + split.index[mapping[e][1]] for e in net.order]
    cols = [split.index[mapping[e][1]] for e in net.order]
    if not np.array_equal(code.extended, code_split.extended[np.ix_(rows, cols)]):
        raise AssertionError("derived local kernels do not reproduce the split-network kernels")
    code.construction = dict(code_split.construction, kind="generic")
    code.lifted = code_split
    return code


def construct_random(net: Network, field, seed) -> LnecCode:
    """Every local coefficient drawn independently and uniformly, reproducibly from ``seed``."""
    F = _field(field)
    rng = np.random.default_rng(seed)
    K = {}
    for v in net.nodes:
        outs = net.out_channels(v)
        if outs:
            K[v] = F.random((len(kernel_rows(net, v)), len(outs)), rng)
    code = LnecCode(net, F, K)
    code.construction = {"kind": "random", "method": "random", "seed": seed, "field": F.spec.to_json()}
    return code


# -- field size bounds ------------------------------------------------------------


@dataclass
class BoundEntry:
    tight: int | None
    loose: int | None
    note: str = ""
    # per-node contributions (tight, loose) where the bound is a per-node sum
    terms: dict = field(default_factory=dict)

    @property
    def min_order_tight(self):
        return _smallest_order_above(self.tight)

    @property
    def min_order_loose(self):
        return _smallest_order_above(self.loose)

    def to_json(self) -> dict:
        return {
            "tight": self.tight,
            "loose": self.loose,
            "min_order_tight": self.min_order_tight,
            "min_order_loose": self.min_order_loose,
            "note": self.note,
            "terms": {k: list(v) for k, v in self.terms.items()},
        }


def _smallest_order_above(bound):
    if bound is None:
        return None
    for q in supported_orders():
        if q > bound:
            return q
    return None


@dataclass
class FieldSizeReport:
    """Sufficient field sizes per code class: ``|F| > bound`` guarantees existence."""

    rate: int
    entries: dict = field(default_factory=dict)

    def __getitem__(self, kind) -> BoundEntry:
        return self.entries[kind]

    def to_json(self) -> dict:
        return {"rate": self.rate, **{k: v.to_json() for k, v in self.entries.items()}}


def _collection_cuts(net: Network, max_nodes: int) -> list:
    return [(T, min_cut_nodeset(net, T)) for T in all_collections(net, max_nodes)]


def field_size_bounds(net: Network, rate: int | None = None, *, max_nodes: int = 10,
                      max_split_nodes: int = 12) -> FieldSizeReport:
    """Tight (pattern-count) and loose (binomial) sufficient bounds for all four classes."""
    if rate is not None and rate != net.rate:
        net = net.with_rate(rate)
    w = net.rate
    E = len(net.order)
    report = FieldSizeReport(w)
    cuts = {t: min_cut_node(net, t) for t in net.non_source}
    v2 = sum(1 for c in cuts.values() if c < w)
    note = ""
    terms = {t: [None, comb(E, c - w)] for t, c in cuts.items() if c >= w}
    try:
        for t in terms:
            terms[t][0] = len(enumerate_R(net, t, cuts[t] - w))
        tight_m = sum(v[0] for v in terms.values())
    except GuardError as exc:
        tight_m, note = None, f"tight bound skipped: {exc}"
    loose_m = sum(v[1] for v in terms.values())
    terms = {t: tuple(v) for t, v in terms.items()}
    report.entries["multicast"] = BoundEntry(tight_m, loose_m, note, terms)
    report.entries["broadcast"] = BoundEntry(
        None if tight_m is None else tight_m + v2, loose_m + v2, note, terms
    )

    try:
        coll = _collection_cuts(net, max_nodes)
    except GuardError as exc:
        report.entries["dispersion"] = BoundEntry(None, None, f"skipped: {exc}")
    else:
        v3 = sum(1 for _, c in coll if c < w)
        total_in = sum(cuts[t] for T, _ in coll for t in T)
        loose_d = sum(comb(E + total_in, c - w) for _, c in coll if c >= w) + v3
        note = ""
        try:
            big, supers = dispersion_transform(net, [T for T, _ in coll])
            tight_d = v3 + sum(len(enumerate_R(big, supers[tuple(sorted(T))], c - w))
                               for T, c in coll if c >= w)
        except GuardError as exc:
            tight_d, note = None, f"tight bound skipped: {exc}"
        report.entries["dispersion"] = BoundEntry(tight_d, loose_d, note)

    split, _ = split_channels(net)
    gap = "no tractable pattern-count bound for generic codes; loose bound only"
    if len(split.nodes) > max_split_nodes:
        report.entries["generic"] = BoundEntry(
            None, None, f"{gap}; split network has {len(split.nodes)} nodes (> {max_split_nodes})"
        )
    else:
        coll = _collection_cuts(split, max_split_nodes)
        split_cuts = {t: min_cut_node(split, t) for t in split.non_source}
        total_in = sum(split_cuts[t] for T, _ in coll for t in T)
        loose_g = (sum(comb(2 * E + total_in, c - w) for _, c in coll if c >= w)
                   + sum(1 for _, c in coll if c < w))
        report.entries["generic"] = BoundEntry(None, loose_g, gap)
    return report
