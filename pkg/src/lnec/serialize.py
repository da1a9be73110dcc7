"""JSON formats for networks, fields, codes and command-line vectors."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .code import LnecCode, kernel_rows
from .galois import FieldError, FieldSpec, get_field
from .network import Network

__all__ = [
    "InputError",
    "code_from_json",
    "code_to_json",
    "dumps",
    "load_json",
    "parse_collections",
    "parse_field",
    "parse_injection",
    "parse_vector",
]


class InputError(ValueError):
    """Malformed user input (file contents or command-line values)."""


def load_json(path) -> object:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_default) + "\n"


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def network_from_json(obj) -> Network:
    try:
        return Network.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed network: missing or invalid {exc}") from None


def code_to_json(code: LnecCode, *, extended: bool = False) -> dict:
    net = code.network
    out = {"field": code.field.spec.to_json(), "kernels": []}
    for v in net.nodes:
        if v in code.kernels:
            out["kernels"].append({
                "node": v,
                "rows": list(kernel_rows(net, v)),
                "cols": list(net.out_channels(v)),
                "entries": code.kernels[v].tolist(),
            })
    if extended:
        out["extended"] = [{"channel": e, "vector": code.kernel(e).tolist()} for e in net.order]
    return out


def code_from_json(obj, network: Network) -> LnecCode:
    """Rebuild a code; kernel rows/columns are matched by channel id, so their order is free."""
    try:
        field = get_field(FieldSpec.from_json(obj["field"]))
        K = {}
        for rec in obj["kernels"]:
            v = rec["node"]
            rows, cols = kernel_rows(network, v), network.out_channels(v)
            A = np.zeros((len(rows), len(cols)), dtype=np.int64)
            entries = np.array(rec["entries"], dtype=np.int64).reshape(len(rec["rows"]), len(rec["cols"]))
            for i, d in enumerate(rec["rows"]):
                for j, e in enumerate(rec["cols"]):
                    A[rows.index(d), cols.index(e)] = entries[i, j]
            K[v] = A
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FieldError):
            raise
        raise InputError(f"malformed code: {exc}") from None
    return LnecCode(network, field, K)


def parse_field(text: str) -> FieldSpec:
    """``p``, ``p,m`` or ``p,m,modulus`` with the modulus as an integer bitmask (``0x13`` allowed)."""
    try:
        parts = [int(x, 0) for x in text.split(",")]
    except ValueError:
        raise InputError(f"field must look like 'p[,m[,modulus]]', got {text!r}") from None
    if not 1 <= len(parts) <= 3:
        raise InputError(f"field must look like 'p[,m[,modulus]]', got {text!r}")
    try:
        return FieldSpec(*parts)
    except FieldError as exc:
        raise InputError(str(exc)) from None


def parse_vector(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def parse_collections(text: str) -> list:
    """``a,b;c`` means the two collections {a, b} and {c}."""
    out = [tuple(x.strip() for x in grp.split(",") if x.strip()) for grp in text.split(";")]
    out = [g for g in out if g]
    if not out:
        raise InputError(f"no collections in {text!r}")
    return out


def parse_injection(text: str, network: Network) -> tuple:
    """``X=1,2;Z=e3:2,e5:1`` gives the message and a full-length error vector."""
    X, Z = None, np.zeros(len(network.order), dtype=np.int64)
    for part in text.split(";"):
        if not part.strip():
            continue
        key, _, val = part.partition("=")
        key = key.strip().upper()
        if key == "X":
            X = parse_vector(val)
        elif key == "Z":
            for item in val.split(","):
                if not item.strip():
                    continue
                e, _, v = item.partition(":")
                e = e.strip()
                if e not in network.index:
                    raise InputError(f"unknown channel {e!r} in injection")
                try:
                    Z[network.index[e]] = int(v)
                except ValueError:
                    raise InputError(f"bad error value in {item!r}") from None
        else:
            raise InputError(f"injection parts must be X=... or Z=..., got {part!r}")
    if X is None:
        raise InputError("injection needs a message part X=...")
    return X, Z
