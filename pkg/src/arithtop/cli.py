"""Batch command line front end: ``arithtop <command> <action> [options]``.

Every command writes one JSON report.  Exit status is 0 whenever the
computation finished, whatever the mathematical verdict; 2 for malformed
input, 3 when a resource envelope is exceeded, 4 when an internal invariant
fails.
"""

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .schema import SchemaError, form_from_literal, module_from_literal, hom_from_literal, _require

EXIT_OK, EXIT_SCHEMA, EXIT_RESOURCE, EXIT_INVARIANT = 0, 2, 3, 4


# ------------------------------------------------------------------ helpers

def _load(args, required=True):
    if args.input is None:
        if required:
            raise SchemaError("--input", "this command needs a JSON input file ('-' for stdin)")
        return None
    try:
        if args.input == "-":
            return json.load(sys.stdin)
        with open(args.input) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError("line %d column %d" % (e.lineno, e.colno), e.msg)
    except OSError as e:
        raise SchemaError("--input", str(e))


def _group(obj, path="group"):
    from .groups import group_from_json, GroupError
    try:
        return group_from_json(obj)
    except GroupError as e:
        raise SchemaError(path, str(e))


def _map(jobs, fn, items):
    """Order-preserving map, in worker processes when jobs > 1."""
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _subgroups(G, obj, p):
    if isinstance(obj, dict) and "subgroup" in obj:
        K = obj["subgroup"]
        if not isinstance(K, list) or any(not isinstance(a, int) for a in K):
            raise SchemaError("subgroup", "expected a list of element indices")
        return [K]
    return G.index_p_subgroups(p)


# ------------------------------------------------------------------ form

def cmd_form(args):
    from .linkform import (diagonalize_odd, normalize_2adic, check_nondegenerate, FormedCpAction,
                           parity_dimension, isotropy_class, FormError)
    from .abelian import qz_str
    obj = _load(args)
    if args.action == "parity":
        f = form_from_literal(_require(obj, "form", ""), "form")
        Z = hom_from_literal(_require(obj, "zeta", ""), f.carrier, f.carrier, "zeta")
        a = FormedCpAction(f, Z)
        d = parity_dimension(a)
        return {"command": "form parity", "dim_image": d, "even": d % 2 == 0}
    f = form_from_literal(obj if "group" in obj else _require(obj, "form", ""), "form")
    if args.action == "diagonalize":
        if f.p == 2:
            return {"command": "form diagonalize", "p": 2, "normal_form": normalize_2adic(f)}
        basis, diag = diagonalize_odd(f)
        return {"command": "form diagonalize", "p": f.p, "basis": [list(b.coords) for b in basis],
                "diagonal": [qz_str(x) for x in diag],
                "orders": [b.order() for b in basis]}
    if args.action == "check":
        out = {"command": "form check", "nondegenerate": check_nondegenerate(f)}
        if "z" in obj:
            out["isotropy"] = isotropy_class(f, tuple(obj["z"]))
        return out
    raise FormError("unknown form action %r" % args.action)


# ---------------------------------------------------------------- module

def cmd_module(args):
    from .cpmod import tate_cohomology, classify_cohomological, random_cpmodule
    if args.action == "random":
        rng = random.Random(args.seed)
        m = random_cpmodule(rng, args.p, args.max_len)
        return {"command": "module random", "seed": args.seed, "module": m.to_json(),
                "tate": tate_cohomology(m).to_json()}
    m = module_from_literal(_load(args))
    if args.action == "tate":
        return {"command": "module tate", "tate": tate_cohomology(m).to_json()}
    if args.action == "classify":
        return {"command": "module classify", "report": classify_cohomological(m)}
    raise SchemaError("action", "unknown module action %r" % args.action)


# ----------------------------------------------------------------- cohom

def _les_job(item):
    from .cohomology import les_13_2
    G, K, d = item
    return les_13_2(G, K, d).to_json()


def _adem_job(item):
    from .cohomology import adem_inequalities
    G, K, p, d = item
    return adem_inequalities(G, K, p, d)


def cmd_cohom(args):
    from .cohomology import (cohomology_fp, integral_cohomology, cohomology_int_zpzp, oracle_equivalence)
    deg = args.max_degree
    if args.action == "zpzp":
        return {"command": "cohom zpzp", "table": cohomology_int_zpzp(args.p, max_deg=deg or 8).to_json()}
    obj = _load(args)
    G = _group(obj.get("group", obj) if isinstance(obj, dict) else obj)
    deg = deg if deg is not None else 3
    if args.action == "betti":
        return {"command": "cohom betti", "group": G.name,
                "table": cohomology_fp(G, args.p, deg, args.method).to_json()}
    if args.action == "integral":
        return {"command": "cohom integral", "group": G.name, "table": integral_cohomology(G, deg).to_json()}
    if args.action == "oracle":
        return {"command": "cohom oracle", "group": G.name, "report": oracle_equivalence(G, args.p, deg)}
    if args.action == "les":
        Ks = _subgroups(G, obj, 2)
        reps = _map(args.jobs, _les_job, [(G, K, deg) for K in Ks])
        return {"command": "cohom les", "group": G.name, "reports": reps, "exact": all(r["exact"] for r in reps)}
    if args.action == "adem":
        Ks = _subgroups(G, obj, args.p)
        rows = _map(args.jobs, _adem_job, [(G, K, args.p, deg) for K in Ks])
        return {"command": "cohom adem", "group": G.name,
                "reports": [{"subgroup": K, "rows": r} for K, r in zip(Ks, rows)],
                "holds": all(x["holds"] for r in rows for x in r)}
    raise SchemaError("action", "unknown cohom action %r" % args.action)


# -------------------------------------------------------------- covering

def cmd_covering(args):
    from . import covering as cov
    obj = _load(args)
    if args.action == "classify-11-4":
        f = form_from_literal(_require(obj, "form", ""), "form")
        return {"command": "covering classify-11-4", "prediction": cov.classify_11_4(f, _require(obj, "z", ""))}
    if args.action == "small-h1":
        f = form_from_literal(obj if "group" in obj else _require(obj, "form", ""), "form")
        return {"command": "covering small-h1", "prediction": cov.small_h1_classifier(f)}
    if args.action == "obstruct":
        m = module_from_literal(_require(obj, "module", ""), "module")
        f = form_from_literal(_require(obj, "form", ""), "form")
        return {"command": "covering obstruct", "report": cov.obstruct_split_anisotropic(m, f)}
    try:
        m = cov.CoveringModel.from_json(obj)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError("model", str(e))
    if args.action == "validate":
        return {"command": "covering validate", "report": cov.validate_model(m, seed=args.seed)}
    if args.action == "verify":
        if "z" in m.marks:
            rep = cov.verify_anisotropic(m, m.marks["z"])
        elif "e_s" in m.marks:
            rep = cov.verify_shrinking(m, m.marks["e_s"])
        else:
            rep = cov.verify_isotropic(m)
        return {"command": "covering verify", "report": rep}
    raise SchemaError("action", "unknown covering action %r" % args.action)


# ------------------------------------------------------------------ ring

def cmd_ring(args):
    from . import rings
    if args.action == "classify-15-4":
        link = form_from_literal(_load(args), "form") if args.input else None
        return rings.classification_report(link)
    if args.action == "quaternion-facts":
        return {"command": "ring quaternion-facts", "facts": [f.to_json() for f in rings.quaternion_ring_facts()]}
    if args.action == "z2z4":
        link = form_from_literal(_load(args), "form") if args.input else None
        return {"command": "ring z2z4", "ring": rings.ring_z2z4(link).to_json()}
    if args.action == "case-analysis-16":
        return rings.covering_case_analysis_16(args.n_max)
    raise SchemaError("action", "unknown ring action %r" % args.action)


# ----------------------------------------------------------------- tower

def cmd_tower(args):
    from .covering import tower_bounds
    return {"command": "tower", **tower_bounds(args.r1, args.p, args.depth).to_json()}


# ------------------------------------------------------------------ main

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON input file, '-' for stdin")
    common.add_argument("--output", help="write the JSON report here and print a summary table")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent subtasks")
    common.add_argument("--max-degree", type=int, default=None, help="top cohomological degree")

    ap = argparse.ArgumentParser(prog="arithtop", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("form", parents=[common], help="linking forms")
    p.add_argument("action", choices=["diagonalize", "check", "parity"])
    p.set_defaults(func=cmd_form)

    p = sub.add_parser("module", parents=[common], help="C_p-modules")
    p.add_argument("action", choices=["tate", "classify", "random"])
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--max-len", type=int, default=4)
    p.set_defaults(func=cmd_module)

    p = sub.add_parser("cohom", parents=[common], help="group cohomology")
    p.add_argument("action", choices=["betti", "integral", "zpzp", "oracle", "les", "adem"])
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--method", default="auto", choices=["auto", "fast", "resolution", "bar"])
    p.set_defaults(func=cmd_cohom)

    p = sub.add_parser("covering", parents=[common], help="covering models and verdicts")
    p.add_argument("action", choices=["validate", "verify", "classify-11-4", "obstruct", "small-h1"])
    p.set_defaults(func=cmd_covering)

    p = sub.add_parser("ring", parents=[common], help="cohomology ring case analyses")
    p.add_argument("action", choices=["classify-15-4", "quaternion-facts", "z2z4", "case-analysis-16"])
    p.add_argument("--n-max", type=int, default=6)
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("tower", parents=[common], help="class tower bounds")
    p.add_argument("--r1", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_tower)
    return ap


def _table(report):
    lines = []
    for k, v in sorted(report.items()):
        if isinstance(v, (str, int, float, bool)) or v is None:
            lines.append("%-24s %s" % (k, v))
        elif isinstance(v, list) and all(isinstance(x, (str, int)) or x is None for x in v):
            lines.append("%-24s %s" % (k, ", ".join("-" if x is None else str(x) for x in v)))
    return "\n".join(lines)


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True, default=str)


def main(argv=None):
    from .cpmod import ModuleError
    from .linkform import FormError
    from .groups import GroupError
    from .covering import CoveringError
    from .resolution import ResourceEnvelopeError
    from .rings import InvariantViolation

    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except ResourceEnvelopeError as e:
        print("resource envelope exceeded: %s" % e, file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantViolation as e:
        print("invariant violation: %s" % e, file=sys.stderr)
        return EXIT_INVARIANT
    except (SchemaError, FormError, ModuleError, GroupError, CoveringError, ValueError) as e:
        print("invalid input: %s" % e, file=sys.stderr)
        return EXIT_SCHEMA
    text = dumps(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        print(_table(report))
    else:
        print(text)
    return EXIT_OK


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
