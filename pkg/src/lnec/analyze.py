"""Exact analysis of LNEC codes: regularity, minimum distance, Singleton checks, MDS certificates.

Everything here is brute force and intended as an oracle at desk scale.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .code import LnecCode
from .construct import all_channel_sets, all_collections
from .network import GuardError, Network, Target, as_target, min_cut, pattern_rank

__all__ = [
    "CodeReport",
    "DistanceReport",
    "DistanceUndefined",
    "RegularityClass",
    "SingletonViolation",
    "certify_mds",
    "classify",
    "min_distance",
    "singleton_bound",
    "singleton_check",
]

log = logging.getLogger(__name__)

KINDS = ("multicast", "broadcast", "dispersion", "generic")
# combinations evaluated per batched rank call
BATCH = 2048


class DistanceUndefined(ValueError):
    pass


class SingletonViolation(AssertionError):
    pass


# -- regularity ---------------------------------------------------------------


@dataclass
class RegularityClass:
    """Regularity flags; ``None`` means the level was not evaluated.

    ``evidence`` holds one record per target checked, with its min cut
    and message-space dimension.  ``exhaustive`` records, per level,
    whether every target of that kind was covered.
    """

    regular: bool | None
    strongly_regular: bool | None
    strongly_sup_regular: bool | None
    channel_regular: bool | None
    evidence: list = field(default_factory=list)
    exhaustive: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def holds_for(self, target: Target) -> bool | None:
        """The code-wide hypothesis under which the Singleton bound applies to ``target``."""
        return {
            "node": self.strongly_regular,
            "nodes": self.strongly_sup_regular,
            "channels": self.channel_regular,
        }[target.kind]

    def flag(self, kind: str) -> bool | None:
        return {
            "multicast": self.regular,
            "broadcast": self.strongly_regular,
            "dispersion": self.strongly_sup_regular,
            "generic": self.channel_regular,
        }[kind]

    def to_json(self) -> dict:
        return {
            "regular": self.regular,
            "strongly_regular": self.strongly_regular,
            "strongly_sup_regular": self.strongly_sup_regular,
            "channel_regular": self.channel_regular,
            "exhaustive": self.exhaustive,
            "notes": self.notes,
            "evidence": self.evidence,
        }


def _dim_phi(code: LnecCode, target: Target) -> int:
    view = code.view(target)
    return code.field.rank(view.F) if view.columns else 0


def _level(code, targets, evidence) -> bool:
    w = code.rate
    ok = True
    for T in targets:
        C = min_cut(code.network, T)
        dim = _dim_phi(code, T)
        evidence.append({"target": T.to_json(), "C": C, "dimPhi": dim})
        ok &= dim == min(w, C)
    return ok


def classify(code: LnecCode, collections: Iterable | None = None, channel_sets: Iterable | None = None,
             *, levels: Iterable[str] = ("nodes", "collections", "channels"),
             max_nodes: int = 10, max_channels: int = 12) -> RegularityClass:
    """Compare ``dim Phi`` with ``min(rate, C)`` at nodes, node collections and channel sets.

    Omitted families default to exhaustive enumeration under the size
    guards; a tripped guard leaves that flag as ``None`` with a note.
    """
    net, w = code.network, code.rate
    levels = set(levels)
    evidence, notes, exhaustive = [], [], {}
    regular = strongly = sup = chan = None

    if "nodes" in levels or "collections" in levels or "channels" in levels:
        node_ev = []
        strongly = _level(code, [Target.node(t) for t in net.non_source], node_ev)
        regular = all(r["dimPhi"] == w for r in node_ev if r["C"] >= w)
        evidence += node_ev
        exhaustive["nodes"] = True

    if "collections" in levels:
        try:
            fam = all_collections(net, max_nodes) if collections is None else list(collections)
            exhaustive["collections"] = collections is None
        except GuardError as exc:
            fam, exhaustive["collections"] = None, False
            notes.append(f"collections not checked: {exc}")
        if fam is not None:
            sup = strongly and _level(code, [Target.nodes(T) for T in fam], evidence)

    if "channels" in levels:
        try:
            fam = all_channel_sets(net, max_channels) if channel_sets is None else list(channel_sets)
            exhaustive["channels"] = channel_sets is None
        except GuardError as exc:
            fam, exhaustive["channels"] = None, False
            notes.append(f"channel sets not checked: {exc}")
        if fam is not None:
            raw = _level(code, [Target.channels(xi) for xi in fam], evidence)
            # In(T) is a channel set with the same cut and message space as T
            if raw and exhaustive["channels"] and exhaustive.get("collections") and sup is False:
                raise AssertionError("channel-regular code failed a node-collection check")
            chan = raw and (sup is not False) and strongly

    if regular is not None and strongly and not regular:
        raise AssertionError("strongly regular code is not regular")
    return RegularityClass(regular, strongly, sup, chan, evidence, exhaustive, notes)


# -- minimum distance -------------------------------------------------------------


def singleton_bound(net: Network, target) -> int:
    C = min_cut(net, target)
    return C - net.rate + 1 if C >= net.rate else 1


@dataclass
class DistanceReport:
    """Minimum distance at one target under the three equivalent definitions.

    ``d_by_size`` is authoritative.  When ``capped`` is true no
    intersecting pattern exists within ``max_weight`` and the distances
    are ``None``.
    """

    target: Target
    C: int
    dim_phi: int
    d_by_size: int | None
    d_by_rank: int | None
    d_by_dim: int | None
    witness: tuple
    bound: int
    capped: bool = False

    @property
    def d(self) -> int | None:
        return self.d_by_size

    @property
    def slack(self) -> int | None:
        return None if self.d is None else self.bound - self.d

    @property
    def forms_agree(self) -> bool:
        return self.d_by_size == self.d_by_rank == self.d_by_dim

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "C": self.C,
            "dimPhi": self.dim_phi,
            "d": self.d,
            "d_by_size": self.d_by_size,
            "d_by_rank": self.d_by_rank,
            "d_by_dim": self.d_by_dim,
            "bound": self.bound,
            "slack": self.slack,
            "witness": list(self.witness),
            "capped": self.capped,
        }


def min_distance(code: LnecCode, target, *, max_weight: int | None = None,
                 max_channels: int = 20) -> DistanceReport:
    """Brute-force minimum distance at a node, node collection or channel set.

    Patterns are enumerated by increasing weight over the channels
    upstream of the target (others have zero rows in the decoding
    matrix).  A pattern intersects when
    ``dim Delta > rank(Delta mod Phi)``.
    """
    net, F = code.network, code.field
    target = as_target(target)
    view = code.view(target)
    if not view.columns:
        raise DistanceUndefined(f"target {target} has no incoming channels")
    dim = F.rank(view.F)
    if dim == 0:
        raise DistanceUndefined(f"message space at {target} is trivial; distance undefined")
    cands = net.upstream_channels(view.columns)
    if max_weight is None and len(cands) > max_channels:
        raise GuardError(
            f"{len(cands)} candidate channels exceed the distance guard ({max_channels}); set max_weight"
        )
    R, piv = F.rref(view.F)
    G = view.G[[net.index[e] for e in cands]]
    Gr = F.reduce(R[: len(piv)], piv, G)
    C = min_cut(net, target)
    bound = C - net.rate + 1 if C >= net.rate else 1
    limit = len(cands) if max_weight is None else min(max_weight, len(cands))
    for k in range(1, limit + 1):
        hits, dims = [], []
        combos = itertools.combinations(range(len(cands)), k)
        while True:
            chunk = np.array(list(itertools.islice(combos, BATCH)), dtype=np.int64).reshape(-1, k)
            if chunk.size == 0:
                break
            ranks = F.rank_batch(np.concatenate([G[chunk], Gr[chunk]]))
            d_full, d_res = ranks[: len(chunk)], ranks[len(chunk):]
            mask = d_full > d_res
            hits += [tuple(cands[j] for j in row) for row in chunk[mask]]
            dims += d_full[mask].tolist()
        if hits:
            d_rank = min(pattern_rank(net, rho, target) for rho in hits)
            report = DistanceReport(target, C, dim, k, d_rank, min(dims), hits[0], bound)
            if not report.forms_agree:
                log.warning("distance forms disagree at %s: size=%d rank=%d dim=%d",
                            target, k, d_rank, min(dims))
            return report
    if max_weight is None:
        raise AssertionError(f"no intersecting pattern at {target} although Phi is nontrivial")
    return DistanceReport(target, C, dim, None, None, None, (), bound, capped=True)


def singleton_check(code: LnecCode, targets: Iterable, regularity: RegularityClass | None = None,
                    *, max_weight: int | None = None) -> list:
    """Per-target slack ``bound - d``.

    The check is asserted (raising :class:`SingletonViolation`) only where
    the code-wide regularity hypothesis of the bound holds; elsewhere it
    is informational.  Targets with undefined distance are reported with
    ``d = None``.
    """
    targets = [as_target(T) for T in targets]
    if regularity is None:
        kinds = {T.kind for T in targets}
        levels = {"nodes"} | ({"collections"} if "nodes" in kinds else set()) | (
            {"channels"} if "channels" in kinds else set())
        regularity = classify(code, levels=levels)
    out = []
    for T in targets:
        hyp = regularity.holds_for(T)
        try:
            rep = min_distance(code, T, max_weight=max_weight)
        except DistanceUndefined:
            out.append({"target": T.to_json(), "bound": singleton_bound(code.network, T),
                        "d": None, "slack": None, "asserted": bool(hyp)})
            continue
        if hyp and rep.slack is not None and rep.slack < 0:
            raise SingletonViolation(f"distance {rep.d} at {T} exceeds the bound {rep.bound}")
        out.append({"target": T.to_json(), "bound": rep.bound, "d": rep.d,
                    "slack": rep.slack, "asserted": bool(hyp)})
    return out


# -- MDS certificates ---------------------------------------------------------------


@dataclass
class CodeReport:
    regularity: RegularityClass
    distances: list
    verdicts: dict

    def to_json(self) -> dict:
        return {
            "regularity": self.regularity.to_json(),
            "targets": [r.to_json() if isinstance(r, DistanceReport) else r for r in self.distances],
            "verdicts": self.verdicts,
        }


def _targets_for(code: LnecCode, kind: str, family, max_nodes: int, max_channels: int) -> list:
    net, w = code.network, code.rate
    if kind == "multicast":
        return [Target.node(t) for t in net.non_source if min_cut(net, Target.node(t)) >= w]
    if kind == "broadcast":
        return [Target.node(t) for t in net.non_source]
    if kind == "dispersion":
        fam = all_collections(net, max_nodes) if family is None else family
        return [Target.nodes(T) for T in fam]
    if kind == "generic":
        fam = all_channel_sets(net, max_channels) if family is None else family
        return [Target.channels(xi) for xi in fam]
    raise ValueError(f"unknown kind {kind!r}")


def certify_mds(code: LnecCode, kind: str, family: Iterable | None = None, *,
                max_weight: int | None = None, max_nodes: int = 10,
                max_channels: int = 12) -> tuple:
    """Decide whether ``code`` is an MDS code of class ``kind``.

    Returns ``(verdict, CodeReport)``.  The verdict is ``None`` when a
    size guard prevented a complete check, so it is never a false
    positive.  Targets whose min cut is 0 carry no message space and are
    skipped as vacuous.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    family = None if family is None else [tuple(x) for x in family]
    levels = {"multicast": ["nodes"], "broadcast": ["nodes"],
              "dispersion": ["nodes", "collections"], "generic": ["nodes", "channels"]}[kind]
    try:
        targets = _targets_for(code, kind, family, max_nodes, max_channels)
    except GuardError as exc:
        reg = classify(code, levels=["nodes"])
        reg.notes.append(str(exc))
        return None, CodeReport(reg, [], {kind: None})
    reg = classify(
        code,
        collections=family if kind == "dispersion" else None,
        channel_sets=family if kind == "generic" else None,
        levels=levels, max_nodes=max_nodes, max_channels=max_channels,
    )
    flag = reg.flag(kind)
    if flag is None:
        return None, CodeReport(reg, [], {kind: None})
    reports, verdict = [], bool(flag)
    for T in targets:
        if min_cut(code.network, T) == 0:
            continue
        try:
            rep = min_distance(code, T, max_weight=max_weight)
        except DistanceUndefined as exc:
            reports.append({"target": T.to_json(), "d": None, "note": str(exc)})
            verdict = False
            continue
        except GuardError as exc:
            reg.notes.append(str(exc))
            return None, CodeReport(reg, reports, {kind: None})
        reports.append(rep)
        if rep.capped:
            return None, CodeReport(reg, reports, {kind: None})
        if flag and rep.slack < 0:
            raise SingletonViolation(f"distance {rep.d} at {T} exceeds the bound {rep.bound}")
        verdict &= rep.slack == 0
    return verdict, CodeReport(reg, reports, {kind: verdict})
