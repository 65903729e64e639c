"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 a hypothesis of the requested computation fails.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import simp
from .bundle import BundleError, HypothesisFailure, RingBundle, fiberwise_truncation, ob
from .chain import ChainComplexError, betti, truncate
from .corpus import InputError, load_any, load_polytope_file
from .qla import RationalMatrix
from .strat import (PerversityPair, StratError, TwoStrataSpace, duality_check, ih_cone, ih_cone_bundle, ih_thom,
                    intersection_form_IX, novikov_of_complex, sigma_ih, witt_check)
from .toric import PolytopeError, analyze

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS = 0, 1, 2


def _jsonable(x):
    if isinstance(x, RationalMatrix):
        return [[str(v) for v in row] for row in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "numerator") and not isinstance(x, (bool, int)):
        return str(x)
    return x


def render(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict) and v:
            lines.append("%s%s:" % (pad, k))
            lines.append(render(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append("%s%s:" % (pad, k))
            for item in v:
                lines.append("%s  - %s" % (pad, ", ".join("%s=%s" % (a, _short(b)) for a, b in item.items())))
        else:
            lines.append("%s%s: %s" % (pad, k, _short(v)))
    return "\n".join(lines)


def _short(v):
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_short(x) for x in v) + ")"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


# --------------------------------------------------------------------------
# helpers

def _need(kind, obj, want, path):
    if kind not in want:
        raise InputError("%s: this command takes %s input, got %r" % (path, " or ".join(want), kind))
    return obj


def _pair(args, c: int, default: PerversityPair | None = None) -> PerversityPair:
    if args.perversity:
        try:
            p = [int(x) for x in args.perversity.split(",")]
        except ValueError:
            raise InputError("--perversity must be a comma-separated list of integers") from None
        return PerversityPair.from_sequences(c, p)
    if args.k is not None or args.l is not None:
        d = default or PerversityPair.middle(c)
        return PerversityPair.from_cutoffs(c, args.k if args.k is not None else d.k,
                                           args.l if args.l is not None else d.l)
    return default or PerversityPair.middle(c)


def _chain_of(kind, obj):
    if kind == "complex":
        return simp.chain_complex(obj)
    if kind == "chain_complex":
        return obj
    raise InputError("expected a complex or chain complex")


# --------------------------------------------------------------------------
# commands

def cmd_homology(args) -> dict:
    kind, obj = load_any(args.file)
    C = _chain_of(kind, obj)
    rep = {"input": args.file, "betti": list(betti(C, reduced=args.reduced)), "reduced": args.reduced}
    if kind == "complex":
        rep["f_vector"] = list(obj.f_vector())
        rep["euler_characteristic"] = C.euler_characteristic()
    return rep


def cmd_truncate(args) -> dict:
    kind, obj = load_any(args.file)
    if args.k is None:
        raise InputError("--k is required")
    if kind == "bundle":
        td = fiberwise_truncation(obj, args.k)
        lem = td.splitting()
        return {"input": args.file, "k": args.k, "method": td.method,
                "degrees": [{"r": r, "ft": d[0], "E": d[1], "Q": d[2], "exact": lem[r]["exact"]}
                            for r, d in sorted(td.dims().items())],
                "exact": td.exact()}
    C = _chain_of(kind, obj)
    tr = truncate(C, args.k)
    return {"input": args.file, "k": args.k, "betti_complex": list(betti(C)),
            "betti_truncation": list(betti(tr.complex)) if tr.complex.dims else [],
            "dims_truncation": list(tr.complex.dims)}


def cmd_bundle_ob(args) -> dict:
    kind, bm = load_any(args.file)
    bm = _need(kind, bm, ("bundle",), args.file)
    pp = _pair(args, bm.c)
    degrees = [args.degree] if args.degree is not None else list(range(bm.n))
    out = []
    for i in degrees:
        o = ob(bm, pp.k, pp.l, i)
        out.append({"degree": i, "dim": o.dim, "verdict": "zero" if o.vanishes else "nonzero, dim %d" % o.dim,
                    "route": o.route})
    rep = {"input": args.file, "k": pp.k, "l": pp.l, "ob": out}
    if len(out) == 1:
        rep["verdict"] = out[0]["verdict"]
    return rep


def cmd_duality(args) -> dict:
    kind, xs = load_any(args.file)
    xs = _need(kind, xs, ("space", "bundle"), args.file)
    c = xs.c
    default = xs.default_pair() if isinstance(xs, TwoStrataSpace) else None
    pp = _pair(args, c, default)
    d = duality_check(xs, pp)
    rep = {"input": args.file, **d.to_json()}
    rep["verdict"] = "duality holds" if d.dims_match and d.diagram_commutes else "duality FAILS"
    return rep


def cmd_intersection_space(args) -> dict:
    kind, xs = load_any(args.file)
    xs = _need(kind, xs, ("space",), args.file)
    pp = _pair(args, xs.c, xs.default_pair())
    m = xs.model(pp.k)
    col = m.collapse_check()
    return {"input": args.file, "n": xs.n, "c": xs.c, "k": pp.k, "betti_reduced_IX": list(m.betti()),
            "betti_J": list(col["J"]), "collapse_agrees": col["agree"], "les_M_exact": m.checks["les_M"],
            "les_rel_exact": m.checks["les_rel"]}


def cmd_signature(args) -> dict:
    kind, obj = load_any(args.file)
    obj = _need(kind, obj, ("space", "complex"), args.file)
    if kind == "complex":
        nov = novikov_of_complex(obj)
        return {"input": args.file, "sigma": nov.sigma, "form": _jsonable(nov.form)}
    r = intersection_form_IX(obj)
    rep = {"input": args.file, **_jsonable(r.to_json())}
    rep["beta"] = _jsonable(r.beta)
    rep["S"] = _jsonable(r.S)
    rep["verdict"] = "sigma(IX) = sigma(M,dM) = %d" % r.sigma_IX if r.sigma_IX == r.sigma_M else \
        "sigma(IX) = %d differs from sigma(M,dM) = %d" % (r.sigma_IX, r.sigma_M)
    return rep


def cmd_ih(args) -> dict:
    kind, obj = load_any(args.file)
    obj = _need(kind, obj, ("space", "bundle", "complex"), args.file)
    if kind == "complex":
        k = args.k if args.k is not None else (obj.dim + 1) // 2
        return {"input": args.file, "k": k, "IH_cone": list(ih_cone(obj, k))}
    if kind == "space":
        xs, bm = obj, obj.bundle
    else:
        xs, bm = None, obj
    k = args.k if args.k is not None else (bm.c + 1) // 2
    cb = ih_cone_bundle(bm, k)
    rep = {"input": args.file, "k": k, "IH_DE": list(cb["IH_DE"]), "IH_DE_E": list(cb["IH_DE_E"]),
           "j_partial_zero": cb["j_partial_zero"]}
    if not isinstance(bm, RingBundle):
        th = ih_thom(bm, k)
        rep.update({"IH_TE": list(th["IH_TE"]), "middle_degree": th["middle"], "IH_TE_middle": th["IH_middle"],
                    "H_E_to_IH_DE_surjective": th["H_E_to_IH_DE_surjective"]})
    if xs is not None:
        rep["witt"] = witt_check(xs)["witt"]
        if xs.n % 4 == 0:
            rep["sigma_IH"] = sigma_ih(xs)["sigma_IH"]
    return rep


def cmd_toric(args) -> dict:
    p, stored = load_polytope_file(args.file)
    direction = stored
    if args.direction:
        try:
            direction = [int(x) for x in args.direction.split(",")]
        except ValueError:
            raise InputError("--direction must be comma-separated integers") from None
    if direction is not None and len(direction) != p.n:
        raise InputError("direction has %d entries, polytope dimension is %d" % (len(direction), p.n))
    return {"input": args.file, **analyze(p, direction, args.search_bound)}


def cmd_selftest(args) -> dict:
    from .selftest import run_checks
    results = run_checks(args.filter)
    return {"filter": args.filter or "", "checks": results,
            "passed": sum(1 for r in results if r["ok"]), "failed": sum(1 for r in results if not r["ok"])}


COMMANDS = {
    "homology": cmd_homology, "truncate": cmd_truncate, "bundle-ob": cmd_bundle_ob, "duality": cmd_duality,
    "intersection-space": cmd_intersection_space, "signature": cmd_signature, "ih": cmd_ih, "toric": cmd_toric,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="no output; exit code only")
    pv = argparse.ArgumentParser(add_help=False)
    pv.add_argument("--k", type=int)
    pv.add_argument("--l", type=int)
    pv.add_argument("--perversity", help="p(2),p(3),... as comma-separated integers")

    ap = argparse.ArgumentParser(prog="stratatop", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("homology", parents=[common], help="Betti numbers of a complex")
    p.add_argument("file")
    p.add_argument("--reduced", action="store_true")
    p = sub.add_parser("truncate", parents=[common], help="homology truncation of a complex or fiberwise truncation of a bundle")
    p.add_argument("file")
    p.add_argument("--k", type=int)
    p = sub.add_parser("bundle-ob", parents=[common, pv], help="local duality obstructions")
    p.add_argument("file")
    p.add_argument("--degree", type=int)
    p = sub.add_parser("duality", parents=[common, pv], help="global duality of intersection spaces")
    p.add_argument("file")
    p = sub.add_parser("intersection-space", parents=[common, pv], help="homology of the intersection space")
    p.add_argument("file")
    p = sub.add_parser("signature", parents=[common], help="Novikov signature and the form on the intersection space")
    p.add_argument("file")
    p = sub.add_parser("ih", parents=[common], help="intersection homology of cones, disk and Thom spaces")
    p.add_argument("file")
    p.add_argument("--k", type=int)
    p = sub.add_parser("toric", parents=[common], help="Delzant polytope analysis")
    p.add_argument("action", choices=["analyze"])
    p.add_argument("file")
    p.add_argument("--direction")
    p.add_argument("--search-bound", type=int, default=3)
    p = sub.add_parser("selftest", parents=[common], help="run the built-in checks")
    p.add_argument("--filter")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = COMMANDS[args.command](args)
        code = EXIT_OK
        if args.command == "selftest" and rep["failed"]:
            code = EXIT_INPUT
    except HypothesisFailure as e:
        rep = {"command": args.command, "hypothesis_failure": str(e), "detail": _jsonable(e.detail)}
        code = EXIT_HYPOTHESIS
    except (InputError, BundleError, StratError, PolytopeError, simp.SimplicialError, ChainComplexError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    if not args.quiet:
        rep = _jsonable(rep)
        if args.json:
            print(json.dumps(rep, indent=2, sort_keys=True))
        else:
            print(render(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
