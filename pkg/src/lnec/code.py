"""Linear network error-correction codes: local kernels, extended global
kernels, decoding matrices and the message/error spaces built from them.

Coordinates of an extended kernel are the ``rate`` imaginary message
channels followed by the real channels in canonical order, so row
``rate + net.index[e]`` belongs to the error symbol of channel ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .galois import GF, FieldSpec, get_field
from .network import Network, Target, as_target

__all__ = [
    "DecodingView",
    "LnecCode",
    "decoding_view",
    "error_space",
    "extend_kernels",
    "kernel_shape",
    "message_channel",
    "message_space",
    "restrict_pattern",
    "transfer_matrix",
    "zero_kernels",
]


def message_channel(i: int) -> str:
    """Name of the i-th (0-based) imaginary message channel."""
    return f"d{i + 1}'"


def kernel_rows(net: Network, node: str) -> tuple:
    if node == net.source:
        return tuple(message_channel(i) for i in range(net.rate))
    return net.in_channels(node)


def kernel_shape(net: Network, node: str) -> tuple:
    return len(kernel_rows(net, node)), len(net.out_channels(node))


def zero_kernels(net: Network) -> dict:
    return {v: np.zeros(kernel_shape(net, v), dtype=np.int64) for v in net.nodes if net.out_channels(v)}


def _check_kernels(net: Network, field: GF, K: Mapping) -> dict:
    out = {}
    for v in net.nodes:
        shape = kernel_shape(net, v)
        if v in K:
            A = np.array(K[v], dtype=np.int64).reshape(shape)
        else:
            A = np.zeros(shape, dtype=np.int64)
        if A.size and (A.min() < 0 or A.max() >= field.q):
            raise ValueError(f"kernel at {v!r} has entries outside {field!r}")
        if shape[1]:
            out[v] = A
    unknown = set(K) - set(net.nodes)
    if unknown:
        raise KeyError(f"kernels given for unknown nodes {sorted(unknown)}")
    return out


def _unit(n: int, k: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[k] = 1
    return v


def extend_kernels(net: Network, K: Mapping, field: GF) -> np.ndarray:
    """Extended global kernels as the columns of a ``(rate+|E|) x |E|`` matrix.

    Walks channels upstream to downstream and applies
    ``f_e = sum_d k_{d,e} f_d + 1_e`` with ``f_{d_i'} = 1_{d_i'}``.
    """
    K = _check_kernels(net, field, K)
    w, n = net.rate, len(net.order)
    M = np.zeros((w + n, n), dtype=np.int64)
    for e in net.order:
        i = net.tail(e)
        col = net.out_channels(i).index(e)
        coeffs = K[i][:, col]
        if i == net.source:
            acc = np.zeros(w + n, dtype=np.int64)
            acc[:w] = coeffs
        else:
            ins = [net.index[d] for d in net.in_channels(i)]
            acc = field.matmul(M[:, ins], coeffs) if ins else np.zeros(w + n, dtype=np.int64)
        acc[w + net.index[e]] = field.add(acc[w + net.index[e]], 1)
        M[:, net.index[e]] = acc
    return M


def system_matrices(net: Network, K: Mapping, field: GF) -> tuple:
    """Source coefficient matrix ``A`` (rate x |E|) and system matrix ``F`` (|E| x |E|)."""
    K = _check_kernels(net, field, K)
    w, n = net.rate, len(net.order)
    A = np.zeros((w, n), dtype=np.int64)
    F = np.zeros((n, n), dtype=np.int64)
    for i, Ki in K.items():
        outs = [net.index[e] for e in net.out_channels(i)]
        if i == net.source:
            A[:, outs] = Ki
        else:
            ins = [net.index[d] for d in net.in_channels(i)]
            F[np.ix_(ins, outs)] = Ki
    return A, F


def transfer_matrix(net: Network, K: Mapping, field: GF) -> np.ndarray:
    """``[A; I] (I - F)^{-1}`` computed by row back-substitution.

    ``F`` is strictly upper triangular in canonical order, so the inverse
    ``N`` satisfies ``N[i] = 1_i + sum_{j>i} F[i, j] N[j]`` row by row from
    the bottom.
    """
    A, F = system_matrices(net, K, field)
    n = F.shape[0]
    if np.any(np.tril(F)):
        raise ValueError("system matrix is not strictly upper triangular")
    N = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        row = _unit(n, i)
        nz = np.flatnonzero(F[i])
        if nz.size:
            row = field.add(row, field.matmul(F[i, nz][None, :], N[nz])[0])
        N[i] = row
    A_ext = np.vstack([A, np.eye(n, dtype=np.int64)])
    return field.matmul(A_ext, N)


class LnecCode:
    """A linear network error-correction code on a network.

    ``kernels`` maps each node with outgoing channels to its local kernel
    ``K_i`` (rows: incoming channels, or the message channels at the
    source; columns: outgoing channels; both in canonical order).
    """

    def __init__(self, network: Network, field: GF | FieldSpec, kernels: Mapping):
        self.network = network
        self.field = field if isinstance(field, GF) else get_field(field)
        self.kernels = _check_kernels(network, self.field, kernels)
        for A in self.kernels.values():
            A.setflags(write=False)
        self.extended = extend_kernels(network, self.kernels, self.field)
        self.extended.setflags(write=False)

    @property
    def rate(self) -> int:
        return self.network.rate

    def __repr__(self):
        return f"LnecCode({self.network!r}, {self.field!r})"

    def coefficient(self, d: str, e: str) -> int:
        net = self.network
        i = net.tail(e)
        rows = kernel_rows(net, i)
        if d not in rows:
            return 0
        return int(self.kernels[i][rows.index(d), net.out_channels(i).index(e)])

    def kernel(self, e: str) -> np.ndarray:
        """Extended global kernel of channel ``e``."""
        return self.extended[:, self.network.index[e]]

    def global_kernel(self, e: str) -> np.ndarray:
        return self.kernel(e)[: self.rate]

    def view(self, target) -> "DecodingView":
        return decoding_view(self, target)

    @classmethod
    def zero(cls, network: Network, field) -> "LnecCode":
        return cls(network, field, zero_kernels(network))

    @classmethod
    def from_coefficients(cls, network: Network, field, coeffs: Mapping) -> "LnecCode":
        """Build from a ``{(d, e): k_{d,e}}`` map; missing pairs are zero."""
        K = zero_kernels(network)
        for (d, e), value in coeffs.items():
            i = network.tail(e)
            rows = kernel_rows(network, i)
            K[i][rows.index(d), network.out_channels(i).index(e)] = value
        return cls(network, field, K)

    def restricted_to(self, network: Network) -> "LnecCode":
        """Kernels of this code restricted to a subnetwork sharing node and channel ids."""
        K = {}
        for v in network.nodes:
            rows = kernel_rows(network, v)
            outs = network.out_channels(v)
            if outs:
                K[v] = np.array([[self.coefficient(d, e) for e in outs] for d in rows],
                                dtype=np.int64).reshape(len(rows), len(outs))
        return LnecCode(network, self.field, K)


@dataclass(frozen=True)
class DecodingView:
    """Columns of the extended kernels seen by a target.

    ``matrix`` is ``(rate + |E|) x len(columns)``; its top ``rate`` rows
    form ``F`` and the remaining rows form ``G``.
    """

    target: Target
    columns: tuple
    matrix: np.ndarray
    rate: int
    network: Network

    @property
    def F(self) -> np.ndarray:
        return self.matrix[: self.rate]

    @property
    def G(self) -> np.ndarray:
        return self.matrix[self.rate:]

    def row(self, e: str) -> np.ndarray:
        return self.G[self.network.index[e]]


def decoding_view(code: LnecCode, target) -> DecodingView:
    target = as_target(target)
    if target.kind == "channels" and not target.members:
        raise ValueError("channel set must be nonempty")
    cols = code.network.target_channels(target)
    idx = [code.network.index[e] for e in cols]
    M = code.extended[:, idx]
    return DecodingView(target, cols, M, code.rate, code.network)


def message_space(view: DecodingView) -> np.ndarray:
    """Generator rows of the message space: ``F`` of the view."""
    return view.F


def error_space(view: DecodingView, rho: Iterable[str]) -> np.ndarray:
    """Generator rows of the error space of ``rho``: the ``G`` rows it selects."""
    rho = view.network.check_channels(rho)
    idx = [view.network.index[e] for e in rho]
    return view.G[idx].reshape(len(idx), len(view.columns))


def restrict_pattern(net: Network, vector, rho: Iterable[str], kind: str) -> np.ndarray:
    """Restrict an extended kernel to an error pattern.

    ``proj`` keeps only the message and pattern coordinates (length
    ``rate + |rho|``); ``keep`` zeroes everything else; ``complement``
    zeroes the message and pattern coordinates.
    """
    v = np.asarray(vector, dtype=np.int64)
    w = net.rate
    rho = net.check_channels(rho)
    inside = np.zeros(v.shape[0], dtype=bool)
    inside[:w] = True
    inside[[w + net.index[e] for e in rho]] = True
    if kind == "proj":
        return v[inside]
    if kind == "keep":
        return np.where(inside, v, 0)
    if kind == "complement":
        return np.where(inside, 0, v)
    raise ValueError(f"unknown restriction {kind!r}")
