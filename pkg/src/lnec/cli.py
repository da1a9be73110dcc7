"""Command-line interface: ``lnec construct|analyze|decode|bounds``.

Exit codes: 0 success, 1 usage or input error, 2 field too small,
3 size guard.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .analyze import DistanceUndefined, SingletonViolation, certify_mds, classify, min_distance
from .construct import (
    ConstructionError,
    FieldTooSmall,
    construct_broadcast_mds,
    construct_dispersion_mds,
    construct_generic_mds,
    construct_multicast_mds,
    field_size_bounds,
)
from .decode import UndecodableTarget, decode_min_distance, transmit
from .galois import FieldError, FieldSpec
from .network import GuardError, NetworkError, Target
from .serialize import (
    InputError,
    code_from_json,
    code_to_json,
    dumps,
    load_json,
    network_from_json,
    parse_collections,
    parse_field,
    parse_injection,
    parse_vector,
)

EXIT_OK, EXIT_USAGE, EXIT_FIELD, EXIT_GUARD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_network(path):
    obj = load_json(path)
    net = network_from_json(obj)
    return net, obj


def _manifest(command, inputs, seed, field, started) -> dict:
    return {
        "command": command,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "seed": seed,
        "field": None if field is None else field.to_json(),
        "version": __version__,
        "wall_time_s": round(time.perf_counter() - started, 6),
    }


def cmd_construct(args) -> int:
    started = time.perf_counter()
    net, obj = _load_network(args.network)
    if args.field:
        spec = parse_field(args.field)
    elif "field" in obj:
        spec = FieldSpec.from_json(obj["field"])
    else:
        raise InputError("no field given: pass --field or put one in the network file")
    method = {"det": "deterministic", "rand": "random"}[args.method]
    if method == "random" and args.seed is None:
        raise InputError("--method rand needs --seed")
    kw = {"method": method, "seed": args.seed}
    if args.kind == "multicast":
        code = construct_multicast_mds(net, spec, **kw)
    elif args.kind == "broadcast":
        code = construct_broadcast_mds(net, spec, **kw)
    elif args.kind == "dispersion":
        coll = parse_collections(args.collections) if args.collections else None
        code = construct_dispersion_mds(net, spec, coll, **kw)
    else:
        code = construct_generic_mds(net, spec, **kw)
    out = Path(args.out)
    out.write_text(dumps(code_to_json(code)), encoding="utf-8")
    manifest = _manifest("construct", [args.network], args.seed, spec, started)
    manifest["kind"] = args.kind
    manifest["construction"] = code.construction
    manifest_path = Path(args.manifest) if args.manifest else out.with_suffix(".manifest.json")
    manifest_path.write_text(dumps(manifest), encoding="utf-8")
    return EXIT_OK


def _targets(args, net) -> list:
    out = []
    if args.targets:
        out += [Target.node(t) for t in parse_vector_str(args.targets)]
    if args.collections:
        out += [Target.nodes(T) for T in parse_collections(args.collections)]
    if args.channel_sets:
        out += [Target.channels(xi) for xi in parse_collections(args.channel_sets)]
    if not out:
        out = [Target.node(t) for t in net.non_source]
    return out


def parse_vector_str(text: str) -> list:
    return [x.strip() for x in text.split(",") if x.strip()]


def cmd_analyze(args) -> int:
    net, _ = _load_network(args.network)
    code = code_from_json(load_json(args.code), net)
    reg = classify(code)
    records, ok = [], True
    for T in _targets(args, net):
        try:
            rep = min_distance(code, T, max_weight=args.max_weight)
        except DistanceUndefined as exc:
            records.append({"target": T.to_json(), "d": "undefined", "note": str(exc)})
            continue
        rec = rep.to_json()
        hyp = reg.holds_for(T)
        rec["bound_asserted"] = bool(hyp)
        ok &= rep.forms_agree
        if hyp and rep.slack is not None and rep.slack < 0:
            ok = False
        records.append(rec)
    verdicts = {}
    for kind in args.kinds.split(","):
        verdicts[kind] = certify_mds(code, kind, max_weight=args.max_weight)[0]
    print(dumps({"regularity": reg.to_json(), "targets": records, "verdicts": verdicts}), end="")
    return EXIT_OK if ok else EXIT_USAGE


def cmd_decode(args) -> int:
    net, _ = _load_network(args.network)
    code = code_from_json(load_json(args.code), net)
    out = {"node": args.node}
    if args.inject:
        X, Z = parse_injection(args.inject, net)
        tr = transmit(code, X, Z, check=True)
        received = tr.received(args.node)
        out["injected"] = {"message": list(map(int, X)), "error": Z.tolist()}
    else:
        received = parse_vector(args.received)
    res = decode_min_distance(code, args.node, received)
    out["received"] = [int(v) for v in received]
    out.update(res.to_json())
    if args.inject:
        out["correct"] = res.status == "unique" and res.message.tolist() == list(map(int, X))
    print(dumps(out), end="")
    return EXIT_OK


def cmd_bounds(args) -> int:
    net, _ = _load_network(args.network)
    print(dumps(field_size_bounds(net, args.rate).to_json()), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lnec", description="Construct, analyze and decode LNEC codes.")
    p.add_argument("--version", action="version", version=f"lnec {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build an MDS code and write Code JSON")
    c.add_argument("--network", required=True)
    c.add_argument("--kind", required=True, choices=["multicast", "broadcast", "dispersion", "generic"])
    c.add_argument("--field", help="p[,m[,modulus]]; modulus as an integer bitmask")
    c.add_argument("--method", choices=["det", "rand"], default="det")
    c.add_argument("--seed", type=int)
    c.add_argument("--collections", help="node collections for dispersion, e.g. 't1,t2;a'")
    c.add_argument("--out", required=True)
    c.add_argument("--manifest", help="manifest path (default: <out> with .manifest.json)")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="print a CodeReport for a code")
    a.add_argument("--network", required=True)
    a.add_argument("--code", required=True)
    a.add_argument("--targets", help="comma-separated nodes")
    a.add_argument("--collections", help="node collections, e.g. 't1,t2;a,b'")
    a.add_argument("--channel-sets", help="channel sets, e.g. 'e1,e2;e3'")
    a.add_argument("--max-weight", type=int)
    a.add_argument("--kinds", default="multicast,broadcast,dispersion,generic")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decode", help="minimum-distance decoding at a node")
    d.add_argument("--network", required=True)
    d.add_argument("--code", required=True)
    d.add_argument("--node", required=True)
    g = d.add_mutually_exclusive_group(required=True)
    g.add_argument("--received", help="comma-separated symbols on In(node)")
    g.add_argument("--inject", help="'X=1,2;Z=e3:2,e5:1'")
    d.set_defaults(func=cmd_decode)

    b = sub.add_parser("bounds", help="sufficient field sizes")
    b.add_argument("--network", required=True)
    b.add_argument("--rate", type=int)
    b.set_defaults(func=cmd_bounds)
    return p


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"lnec: warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _show_warning
            return args.func(args)
    except FieldTooSmall as exc:
        print(f"lnec: field too small: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except GuardError as exc:
        print(f"lnec: size guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except SingletonViolation as exc:
        print(f"lnec: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, NetworkError, FieldError, UndecodableTarget, ConstructionError,
            KeyError, ValueError, OSError) as exc:
        print(f"lnec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
