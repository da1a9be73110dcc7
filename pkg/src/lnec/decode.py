"""Channel simulation with injected errors and minimum-distance decoding."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .analyze import min_distance
from .code import LnecCode, kernel_rows
from .network import GuardError, as_target

__all__ = [
    "DecodeResult",
    "Transmission",
    "UndecodableTarget",
    "correction_capability",
    "decode_min_distance",
    "transmit",
]


class UndecodableTarget(ValueError):
    pass


@dataclass(frozen=True)
class Transmission:
    """Message ``X``, error vector ``Z`` and the symbol observed on every channel."""

    code: LnecCode
    message: np.ndarray
    error: np.ndarray
    outputs: np.ndarray

    def output(self, e: str) -> int:
        return int(self.outputs[self.code.network.index[e]])

    def received(self, target) -> np.ndarray:
        """Symbols on the channels a target observes, in canonical order."""
        net = self.code.network
        cols = net.target_channels(as_target(target))
        return self.outputs[[net.index[e] for e in cols]]


def _vector(F, v, n, what):
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if v.shape[0] != n:
        raise ValueError(f"{what} has length {v.shape[0]}, expected {n}")
    if v.size and (v.min() < 0 or v.max() >= F.q):
        raise ValueError(f"{what} has entries outside {F!r}")
    return v


def transmit(code: LnecCode, X, Z=None, *, check: bool = False) -> Transmission:
    """Push ``X`` through the network hop by hop, adding ``Z_e`` on each channel.

    With ``check`` the outputs are compared with ``(X Z)`` times the
    extended kernels.
    """
    net, F = code.network, code.field
    w, n = code.rate, len(net.order)
    X = _vector(F, X, w, "message")
    Z = np.zeros(n, dtype=np.int64) if Z is None else _vector(F, Z, n, "error vector")
    U = np.zeros(n, dtype=np.int64)
    for e in net.order:
        i = net.tail(e)
        col = net.out_channels(i).index(e)
        k = code.kernels[i][:, col]
        if i == net.source:
            inputs = X
        else:
            inputs = U[[net.index[d] for d in kernel_rows(net, i)]]
        acc = int(F.matmul(inputs[None, :], k[:, None])[0, 0]) if k.size else 0
        U[net.index[e]] = F.add(acc, int(Z[net.index[e]]))
    if check:
        expected = F.matmul(np.concatenate([X, Z])[None, :], code.extended)[0]
        if not np.array_equal(expected, U):
            raise AssertionError("recursive outputs disagree with the extended kernels")
    return Transmission(code, X, Z, U)


@dataclass
class DecodeResult:
    """Outcome of minimum-distance decoding.

    ``status`` is ``unique``, ``ambiguous`` (several messages fit at the
    minimal weight) or ``failure`` (nothing fits within the radius).
    """

    status: str
    message: np.ndarray | None
    pattern: tuple
    error: np.ndarray | None
    weight: int | None
    radius: int
    candidates: list

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "message": None if self.message is None else self.message.tolist(),
            "pattern": list(self.pattern),
            "error": None if self.error is None else self.error.tolist(),
            "weight": self.weight,
            "radius": self.radius,
            "candidates": [c.tolist() for c in self.candidates],
        }


def correction_capability(code: LnecCode, target) -> int:
    """``floor((d - 1) / 2)``; raises when the distance is undefined."""
    return (min_distance(code, target).d - 1) // 2


def decode_min_distance(code: LnecCode, target, received, *, radius: int | None = None,
                        max_patterns: int = 200_000) -> DecodeResult:
    """Find the message explaining ``received`` with the fewest channel errors.

    For each weight up to the correction radius and each pattern of that
    weight the decoding equation ``(X Z) F_t = received`` is solved
    exactly; messages are not enumerated.
    """
    net, F = code.network, code.field
    target = as_target(target)
    view = code.view(target)
    w = code.rate
    if F.rank(view.F) < w:
        raise UndecodableTarget(f"message space at {target} has dimension below the rate {w}")
    r = _vector(F, received, len(view.columns), "received vector")
    if radius is None:
        radius = correction_capability(code, target)
    cands = net.upstream_channels(view.columns)
    total = sum(comb(len(cands), k) for k in range(radius + 1))
    if total > max_patterns:
        raise GuardError(f"{total} error patterns exceed the decoding guard ({max_patterns})")
    for k in range(radius + 1):
        found = {}
        for rho in itertools.combinations(cands, k):
            rows = [w + net.index[e] for e in rho]
            M = view.matrix[list(range(w)) + rows]
            y, kernel = F.solve_left(M, r)
            if y is None:
                continue
            Z = np.zeros(len(net.order), dtype=np.int64)
            Z[[net.index[e] for e in rho]] = y[w:]
            found.setdefault(tuple(y[:w]), (rho, Z))
            if kernel.size and np.any(kernel[:, :w]):
                # another message fits the same pattern
                alt = F.add(y[:w], kernel[np.flatnonzero(np.any(kernel[:, :w], axis=1))[0], :w])
                found.setdefault(tuple(alt), (rho, Z))
        if found:
            msgs = sorted(found)
            if len(msgs) == 1:
                rho, Z = found[msgs[0]]
                return DecodeResult("unique", np.array(msgs[0], dtype=np.int64), rho, Z, k, radius, [])
            return DecodeResult("ambiguous", None, (), None, k, radius,
                                [np.array(m, dtype=np.int64) for m in msgs])
    return DecodeResult("failure", None, (), None, None, radius, [])
