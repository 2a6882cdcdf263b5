"""Command line interface. Every subcommand prints one JSON document (or DOT).

Exit codes: 0 success, 1 invalid input, 2 a check failed (witness printed).
"""
import argparse
import json
import os
import sys

from . import completions, coverages, duality, filters, groupoids
from .bits import to_bitstring
from .core import load, predicates
from .errors import InvsgError, ParseError, NotAssociative, NotInverse, BadZero, TooLarge
from .generators import generate

INPUT_ERRORS = (ParseError, NotAssociative, NotInverse, BadZero, TooLarge)


class CheckFailure(Exception):
    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


def read_semigroup(src):
    """A JSON file, or a generator name when no such file exists."""
    if not os.path.exists(src) and ":" in src:
        return generate(src)
    return load(src)


def emit(obj, pretty=False):
    if isinstance(obj, str):
        sys.stdout.write(obj)
        return
    if pretty:
        text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)
    else:
        text = json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    sys.stdout.write(text + "\n")


def cmd_gen(args):
    return generate(args.name).to_dict()


def cmd_verify(args):
    S = read_semigroup(args.file)
    out = {"ok": True, "n": S.n, "zero": S.zero, "one": S.one,
           "idempotents": S.idempotents.bit_count()}
    if S.zero is not None:
        out["predicates"] = predicates(S).to_dict()
    return out


def cmd_filters(args):
    S = read_semigroup(args.file)
    fs = filters.filters_of_class(S, args.cls)
    return {"class": args.cls, "filters": [F.min for F in fs]}


COMPLETE = {
    "schein": completions.schein_completion,
    "idl": completions.idl_completion,
    "dist": completions.dist_completion,
    "tight": completions.tight_completion,
    "dense-pseudogroup": completions.dense_pseudogroup,
    "booleanization": duality.first_booleanization,
}


def cmd_complete(args):
    S = read_semigroup(args.file)
    return COMPLETE[args.kind](S).to_dict()


def cmd_groupoid(args):
    S = read_semigroup(args.file)
    G = filters.filter_groupoid(S, args.cls)
    if args.topology == "basic":
        T = groupoids.basic_topology(G)
    else:
        T = groupoids.patch_topology(G)
    if args.emit == "dot":
        return G.to_dot()
    out = G.to_dict()
    out["class"] = args.cls
    out["topology"] = T.to_dict()
    out["topology"]["kind"] = args.topology
    out["etale"] = groupoids.is_etale(T)
    out["hausdorff"] = groupoids.is_hausdorff(T)
    return out


def cmd_duality(args):
    S = read_semigroup(args.file)
    check = args.check
    if check == "spatial":
        rep = duality.spatial_report(S)
        ok = rep["spatial"]
    elif check == "sober":
        T = groupoids.basic_topology(filters.filter_groupoid(S, duality.default_class(S)))
        rep = groupoids.sober_report(T, cap=args.cap)
        rep["sober"] = not rep["failures"]
        rep["points"] = list(T.G.labels)
        ok = rep["sober"]
    elif check == "roundtrip":
        rep = duality.roundtrip_report(S)
        ok = True
    elif check == "compactness":
        rep = groupoids.compactness_condition(S)
        ok = rep["holds"]
    else:
        rep = groupoids.coarse_grained_check(S)
        ok = rep["coarse_grained"]
    rep["check"] = check
    if not ok:
        raise CheckFailure(rep)
    return rep


def cmd_quotient(args):
    S = read_semigroup(args.file)
    cov = coverages.builtin_coverage(S, args.coverage)
    sq = coverages.separative_quotient(cov, cap=args.cap)
    out = sq.to_dict()
    out["classes"] = [to_bitstring(c, S.n) for c in sq.classes]
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="invsg", description=__doc__.splitlines()[0])
    p.add_argument("--pretty", action="store_true", help="indented JSON")
    p.add_argument("--cap", type=int, default=None,
                   help="enumeration guard (cover size for quotient, points for lattices)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit a builtin semigroup")
    g.add_argument("name", help="sym_inv:n, brandt:n, chain:n, boolean:n, "
                                "semilattice:FILE or group0:Zk|FILE")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="validate a semigroup file")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("filters", help="list filters of a class by minimum")
    f.add_argument("file")
    f.add_argument("--class", dest="cls", default="all", choices=filters.CLASSES)
    f.set_defaults(func=cmd_filters)

    c = sub.add_parser("complete", help="build a completion")
    c.add_argument("file")
    c.add_argument("--kind", required=True, choices=sorted(COMPLETE))
    c.set_defaults(func=cmd_complete)

    gr = sub.add_parser("groupoid", help="emit a filter groupoid")
    gr.add_argument("file")
    gr.add_argument("--class", dest="cls", default="all", choices=filters.CLASSES)
    gr.add_argument("--topology", default="basic", choices=["basic", "patch"])
    gr.add_argument("--emit", default="json", choices=["json", "dot"])
    gr.set_defaults(func=cmd_groupoid)

    d = sub.add_parser("duality", help="duality reports")
    d.add_argument("file")
    d.add_argument("--check", required=True,
                   choices=["spatial", "sober", "roundtrip", "compactness", "coarse"])
    d.set_defaults(func=cmd_duality)

    q = sub.add_parser("quotient", help="separative quotient by a coverage")
    q.add_argument("file")
    q.add_argument("--coverage", default="tight", choices=["tight", "dense"])
    q.set_defaults(func=cmd_quotient)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is not None and args.cap < 1:
        parser.error("--cap must be positive")
    if args.cap is None:
        args.cap = 4 if args.command == "quotient" else groupoids.LATTICE_POINTS
    try:
        out = args.func(args)
    except CheckFailure as exc:
        emit(exc.report, args.pretty)
        return 2
    except INPUT_ERRORS as exc:
        emit(_error(exc), args.pretty)
        return 1
    except InvsgError as exc:
        emit(_error(exc), args.pretty)
        return 2
    emit(out, args.pretty)
    return 0


def _error(exc):
    return {"error": type(exc).__name__, "message": str(exc), "witness": _plain(exc.witness)}


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return repr(x)


if __name__ == "__main__":
    sys.exit(main())
