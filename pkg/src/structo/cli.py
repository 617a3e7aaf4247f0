"""Command-line interface.

Exit codes: 0 for success/PASS, 1 for a counterexample or refusal, 2 for
bad input.  All output is deterministic given the input files and the
seed; wall-clock timing is never written to stdout so reports stay
byte-identical across runs.
"""

import argparse
import hashlib
import json
import sys

from .errors import InputError, ContractViolation
from . import formats, eqrel, structures, logic, scott, constructions, factorize, fiber, theoryalg, lattice, combinat, verify
from .eqrel import FinER, PointMap, classify_hom, enumerate_homs
from .logic import structure_search, implies_star_n, print_formula


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None


def _hash(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


class Report:
    """Deterministic run report: inputs are content-hashed, every verdict
    line is reproducible."""

    def __init__(self, command):
        self.command = command
        self.inputs = []
        self.lines = []

    def add_input(self, path, text):
        self.inputs.append((path, _hash(text)))

    def say(self, line):
        self.lines.append(line)

    def emit(self, as_json=False):
        if as_json:
            print(json.dumps(
                {
                    "command": self.command,
                    "inputs": [{"path": p, "sha256_16": h} for p, h in self.inputs],
                    "output": self.lines,
                },
                indent=2,
            ))
        else:
            for line in self.lines:
                print(line)


def _load_er(report, path):
    text = _read(path)
    report.add_input(path, text)
    return formats.parse_er(text)


def _load_theory(report, path):
    text = _read(path)
    report.add_input(path, text)
    return formats.parse_theory(text)


# ---------------------------------------------------------------------------
# Command handlers (return exit codes)


def cmd_check_hom(args, report):
    E = _load_er(report, args.domain)
    F = _load_er(report, args.codomain)
    text = _read(args.map)
    report.add_input(args.map, text)
    f = formats.parse_map(text, E, F)
    flags = classify_hom(f)
    report.say("flags: " + (" ".join(flags) or "(not a homomorphism)"))
    return 0


def cmd_enumerate_homs(args, report):
    E = _load_er(report, args.domain)
    F = _load_er(report, args.codomain)
    kind = [k for k in (args.kind or "").split(",") if k]
    found = enumerate_homs(E, F, kind)
    report.say(f"count: {len(found)}")
    for f in found:
        report.say("map: " + " ".join(f"{p}->{q}" for p, q in f.as_pairs()))
    return 0 if found else 1


def cmd_sum(args, report):
    rels = [_load_er(report, path) for path in args.relations]
    total, injections = eqrel.disjoint_sum(rels)
    report.say(formats.dump_er(total, args.json).rstrip())
    return 0


def cmd_cross(args, report):
    E = _load_er(report, args.left)
    F = _load_er(report, args.right)
    prod, _, _ = eqrel.cross_product(E, F)
    report.say(formats.dump_er(prod, args.json).rstrip())
    return 0


def cmd_fiber_product(args, report):
    F = _load_er(report, args.left)
    G = _load_er(report, args.right)
    E = _load_er(report, args.base)
    tf = _read(args.left_map)
    report.add_input(args.left_map, tf)
    tg = _read(args.right_map)
    report.add_input(args.right_map, tg)
    f = formats.parse_map(tf, F, E)
    g = formats.parse_map(tg, G, E)
    prod, _, _ = eqrel.fiber_product(f, g)
    report.say(formats.dump_er(prod, args.json).rstrip())
    return 0


def cmd_independent(args, report):
    rels = [_load_er(report, path) for path in args.relations]
    join, indep = eqrel.independent_join(rels)
    report.say(f"independent: {'yes' if indep else 'no'}")
    report.say(formats.dump_er(join, args.json).rstrip())
    return 0 if indep else 1


def cmd_ltimes(args, report):
    E = _load_er(report, args.relation)
    T = _load_theory(report, args.theory)
    result = constructions.ltimes(E, T)
    if args.emit == "structure":
        report.say(formats.dump_structure(result.structure.structure, args.json).rstrip())
    elif args.emit == "proj":
        report.say(formats.dump_map(result.projection, args.json).rstrip())
    else:
        report.say(formats.dump_er(result.space, args.json).rstrip())
    if result.unstructurable:
        for block in result.unstructurable:
            report.say("unstructurable-class: " + " ".join(block))
        return 1
    return 0


def cmd_tensor(args, report):
    E = _load_er(report, args.left)
    F = _load_er(report, args.right)
    t = constructions.tensor(E, F)
    report.say(formats.dump_er(t.space, args.json).rstrip())
    return 0


def cmd_skew(args, report):
    E = _load_er(report, args.relation)
    text = _read(args.cocycle)
    report.add_input(args.cocycle, text)
    alpha = formats.parse_cocycle(text)
    if alpha.base != E:
        raise InputError("cocycle file carries a different base relation")
    sk = constructions.skew_product(E, alpha)
    report.say(formats.dump_er(sk.space, args.json).rstrip())
    return 0


def cmd_scott(args, report):
    E = _load_er(report, args.relation)
    st = scott.scott_theory(scott.code_er(E, args.bits))
    emit = args.emit
    if emit in ("sigma", None):
        phi = st.sigma
    elif emit == "sigma-h":
        phi = st.sigma_h
    elif emit == "sigma-ci":
        phi = st.sigma_ci
    elif emit == "sigma-cs":
        phi = st.sigma_cs
    elif emit in ("sigma-cih", "sigma-smh", "sigma-cssmh", "sigma-sm"):
        phi = st.variant_theories()[emit.split("-", 1)[1]].sentence
    else:
        raise InputError(f"unknown --emit choice {emit!r}")
    report.say(print_formula(phi))
    return 0


def cmd_structure_search(args, report):
    E = _load_er(report, args.relation)
    T = _load_theory(report, args.theory)
    res = structure_search(E, T)
    if res.ok:
        report.say(formats.dump_structure(res.structured.structure, args.json).rstrip())
        return 0
    report.say("refused: no model on class " + " ".join(res.failed_class))
    return 1


def cmd_implies_star(args, report):
    S = _load_theory(report, args.left)
    T = _load_theory(report, args.right)
    res = implies_star_n(S, T, args.max)
    if res.holds:
        report.say(f"PASS up to {args.max} points")
        return 0
    report.say("counterexample:")
    report.say(formats.dump_er(res.counterexample, args.json).rstrip())
    return 1


def cmd_factorize(args, report):
    E = _load_er(report, args.domain)
    F = _load_er(report, args.codomain)
    text = _read(args.map)
    report.add_input(args.map, text)
    f = formats.parse_map(text, E, F)
    if args.kind == "ci":
        fac = factorize.factor_ci(f)
        report.say("middle:")
        report.say(formats.dump_er(fac.middle, args.json).rstrip())
        report.say("section-embedding:")
        report.say(formats.dump_map(fac.section_embedding, args.json).rstrip())
        report.say("class-bijective:")
        report.say(formats.dump_map(fac.cb_map, args.json).rstrip())
    elif args.kind == "smooth":
        fac = factorize.factor_smooth(f)
        report.say("quotient:")
        report.say(formats.dump_er(fac.quotient, args.json).rstrip())
        report.say("surjective-reduction:")
        report.say(formats.dump_map(fac.surjective_reduction, args.json).rstrip())
        report.say("section-embedding:")
        report.say(formats.dump_map(fac.section_embedding, args.json).rstrip())
        report.say("class-bijective:")
        report.say(formats.dump_map(fac.cb_map, args.json).rstrip())
    else:
        fac = factorize.factor_cs_smooth(f)
        report.say("quotient:")
        report.say(formats.dump_er(fac.quotient, args.json).rstrip())
        report.say("surjective-reduction:")
        report.say(formats.dump_map(fac.surjective_reduction, args.json).rstrip())
        report.say("class-bijective:")
        report.say(formats.dump_map(fac.cb_map, args.json).rstrip())
    return 0


def cmd_fiber(args, report):
    sub = args.fiber_command
    if sub == "tautological":
        E = _load_er(report, args.relation)
        S = fiber.tautological(E)
        report.say(formats.dump_fiberspace(S, args.json).rstrip())
        return 0
    if sub == "cocycle":
        text = _read(args.fiberspace)
        report.add_input(args.fiberspace, text)
        S = formats.parse_fiberspace(text)
        alpha = fiber.cocycle_of(S)
        report.say(formats.dump_cocycle(alpha, args.json).rstrip())
        return 0
    if sub == "pullback":
        text = _read(args.fiberspace)
        report.add_input(args.fiberspace, text)
        S = formats.parse_fiberspace(text)
        F = _load_er(report, args.relation)
        mt = _read(args.map)
        report.add_input(args.map, mt)
        f = formats.parse_map(mt, F, S.base)
        pulled, _ = fiber.pullback_fiber(S, f)
        report.say(formats.dump_fiberspace(pulled, args.json).rstrip())
        return 0
    if sub == "ltimes":
        text = _read(args.fiberspace)
        report.add_input(args.fiberspace, text)
        S = formats.parse_fiberspace(text)
        T = _load_theory(report, args.theory)
        res = fiber.fiber_ltimes(S, T)
        report.say(formats.dump_fiberspace(res.space, args.json).rstrip())
        return 0
    if sub == "factorize":
        t1 = _read(args.src)
        report.add_input(args.src, t1)
        S = formats.parse_fiberspace(t1)
        t2 = _read(args.dst)
        report.add_input(args.dst, t2)
        T = formats.parse_fiberspace(t2)
        bt = _read(args.base_map)
        report.add_input(args.base_map, bt)
        base_map = formats.parse_map(bt, S.base, T.base)
        tt = _read(args.total_map)
        report.add_input(args.total_map, tt)
        total_map = formats.parse_map(tt, S.total, T.total)
        m = fiber.FiberMap(S, T, base_map, total_map)
        s1, s2, s3 = fiber.fiber_factorize(m)
        report.say("fiberwise-surjection:")
        report.say(formats.dump_map(s1.total_map, args.json).rstrip())
        report.say("fiberwise-injection:")
        report.say(formats.dump_map(s2.total_map, args.json).rstrip())
        report.say("fiber-bijective:")
        report.say(formats.dump_map(s3.total_map, args.json).rstrip())
        return 0
    raise InputError(f"unknown fiber command {sub!r}")


def cmd_theory(args, report):
    sub = args.theory_command
    if sub in ("tensor", "oplus"):
        parts = [_load_theory(report, path) for path in args.theories]
        combined = (
            theoryalg.theory_tensor(parts)[0]
            if sub == "tensor"
            else theoryalg.theory_oplus(parts)[0]
        )
        report.say(formats.dump_theory(combined, args.json).rstrip())
        return 0
    if sub == "cross":
        left = _load_theory(report, args.theories[0])
        right = _load_theory(report, args.theories[1])
        ct = theoryalg.theory_cross(left, right)
        report.say(formats.dump_theory(ct.theory, args.json).rstrip())
        return 0
    if sub == "morleyize":
        T = _load_theory(report, args.theories[0])
        res = theoryalg.morleyize(T)
        report.say(formats.dump_theory(res.theory, args.json).rstrip())
        return 0
    if sub == "coeq":
        T = _load_theory(report, args.theories[0])
        a_text = _read(args.alpha)
        report.add_input(args.alpha, a_text)
        b_text = _read(args.beta)
        report.add_input(args.beta, b_text)
        alpha = formats.parse_interpretation(a_text, T)
        beta = formats.parse_interpretation(b_text, T)
        out = theoryalg.coequalizer(alpha, beta)
        report.say(formats.dump_theory(out, args.json).rstrip())
        return 0
    if sub == "implies-star":
        return cmd_implies_star(
            argparse.Namespace(left=args.theories[0], right=args.theories[1], max=args.max, json=args.json),
            report,
        )
    raise InputError(f"unknown theory command {sub!r}")


def cmd_lattice(args, report):
    sub = args.lattice_command
    if sub == "priestley":
        text = _read(args.lattice)
        report.add_input(args.lattice, text)
        L = formats.parse_lattice(text)
        res = lattice.priestley(L)
        report.say(f"prime-filters: {len(res.filters)}")
        report.say(formats.dump_poset(res.filter_poset, args.json).rstrip())
        for x in L.elements:
            report.say(f"eta: {x} -> " + " ".join(sorted(res.eta[x])))
        report.say("verified: " + ("yes" if res.ok else f"NO ({res.detail})"))
        return 0 if res.ok else 1
    if sub == "check-eq":
        text = _read(args.lattice)
        report.add_input(args.lattice, text)
        L = formats.parse_lattice(text)
        lhs = lattice.parse_term(args.lhs)
        rhs = lattice.parse_term(args.rhs)
        holds, env = lattice.check_equation(lhs, rhs, L)
        if holds:
            report.say("PASS")
            return 0
        report.say("FAIL at " + " ".join(f"{k}={v}" for k, v in sorted(env.items())))
        return 1
    if sub == "catalog":
        rels = [_load_er(report, path) for path in args.relations]
        cat = lattice.catalog_poset(rels)
        for (a, b), ok in sorted(cat.cb_matrix.items()):
            report.say(f"cb: {a} -> {b}: {'yes' if ok else 'no'}")
        bad = [item for item in cat.items if not item[-1]]
        report.say(f"structure-checks: {len(cat.items) - len(bad)}/{len(cat.items)} pass")
        return 0 if not bad else 1
    raise InputError(f"unknown lattice command {sub!r}")


def cmd_family(args, report):
    text = _read(args.family)
    report.add_input(args.family, text)
    F = formats.parse_family(text)
    trace = combinat.family_reduce(F, args.t)
    for line in trace.lines():
        report.say(line)
    return 0 if trace.ok else 1


def cmd_graph(args, report):
    sub = args.graph_command
    if sub == "bipartite":
        E = _load_er(report, args.input)
        g = combinat.bipartite_graphing(E)
        report.say(formats.dump_graphing(g, args.json).rstrip())
        return 0
    if sub == "subdivide":
        text = _read(args.input)
        report.add_input(args.input, text)
        g = formats.parse_graphing(text)
        out, _ = combinat.k_subdivide(g, args.k)
        report.say(formats.dump_graphing(out, args.json).rstrip())
        report.say(f"cycles-divisible-by-{args.k}: " + ("yes" if combinat.cycles_divisible(out, args.k) else "no"))
        return 0
    raise InputError(f"unknown graph command {sub!r}")


def cmd_verify(args, report):
    items = verify.run_suite(args.suite, args.max, args.seed)
    for item in items:
        report.say(item.line())
    failed = [i for i in items if not i.passed]
    report.say(f"verified: {len(items) - len(failed)}/{len(items)} checks pass (max {args.max}, seed {args.seed})")
    return 0 if not failed else 1


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="structo",
        description="finite equivalence relations, structurability, and their universal constructions",
    )
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-hom", help="classify a point map")
    p.add_argument("domain")
    p.add_argument("codomain")
    p.add_argument("map")
    p.set_defaults(handler=cmd_check_hom)

    p = sub.add_parser("enumerate-homs", help="list maps with the given flags")
    p.add_argument("domain")
    p.add_argument("codomain")
    p.add_argument("--kind", default="", help="comma-separated flags, e.g. cb or ci,reduction")
    p.set_defaults(handler=cmd_enumerate_homs)

    p = sub.add_parser("sum", help="disjoint sum of relations")
    p.add_argument("relations", nargs="+")
    p.set_defaults(handler=cmd_sum)

    p = sub.add_parser("cross", help="cross product of two relations")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(handler=cmd_cross)

    p = sub.add_parser("fiber-product", help="fiber product over a shared base")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("base")
    p.add_argument("left_map")
    p.add_argument("right_map")
    p.set_defaults(handler=cmd_fiber_product)

    p = sub.add_parser("independent", help="independence verdict and join")
    p.add_argument("relations", nargs="+")
    p.set_defaults(handler=cmd_independent)

    p = sub.add_parser("ltimes", help="universal structured relation over a base")
    p.add_argument("relation")
    p.add_argument("theory")
    p.add_argument("--emit", choices=["space", "structure", "proj"], default="space")
    p.set_defaults(handler=cmd_ltimes)

    p = sub.add_parser("tensor", help="class-bijective product")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(handler=cmd_tensor)

    p = sub.add_parser("skew", help="skew product with a cocycle")
    p.add_argument("relation")
    p.add_argument("cocycle")
    p.set_defaults(handler=cmd_skew)

    p = sub.add_parser("scott", help="generated sentences of a relation")
    p.add_argument("relation")
    p.add_argument("--bits", type=int, default=None, help="pad the coding to this many bits")
    p.add_argument(
        "--emit",
        choices=["sigma", "sigma-h", "sigma-ci", "sigma-cs", "sigma-cih", "sigma-sm", "sigma-smh", "sigma-cssmh"],
        default="sigma",
    )
    p.set_defaults(handler=cmd_scott)

    p = sub.add_parser("structure-search", help="classwise witness or refusal")
    p.add_argument("relation")
    p.add_argument("theory")
    p.set_defaults(handler=cmd_structure_search)

    p = sub.add_parser("implies-star", help="bounded structurability entailment")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--max", type=int, default=3)
    p.set_defaults(handler=cmd_implies_star)

    p = sub.add_parser("factorize", help="factor a map through canonical stages")
    p.add_argument("kind", choices=["ci", "smooth", "cs"])
    p.add_argument("domain")
    p.add_argument("codomain")
    p.add_argument("map")
    p.set_defaults(handler=cmd_factorize)

    p = sub.add_parser("fiber", help="fiber space operations")
    fs = p.add_subparsers(dest="fiber_command", required=True)
    q = fs.add_parser("tautological")
    q.add_argument("relation")
    q = fs.add_parser("cocycle")
    q.add_argument("fiberspace")
    q = fs.add_parser("pullback")
    q.add_argument("fiberspace")
    q.add_argument("relation")
    q.add_argument("map")
    q = fs.add_parser("ltimes")
    q.add_argument("fiberspace")
    q.add_argument("theory")
    q = fs.add_parser("factorize")
    q.add_argument("src")
    q.add_argument("dst")
    q.add_argument("base_map")
    q.add_argument("total_map")
    p.set_defaults(handler=cmd_fiber)

    p = sub.add_parser("theory", help="operations on theories")
    ts = p.add_subparsers(dest="theory_command", required=True)
    for name in ("tensor", "oplus"):
        q = ts.add_parser(name)
        q.add_argument("theories", nargs="+")
    q = ts.add_parser("cross")
    q.add_argument("theories", nargs=2)
    q = ts.add_parser("morleyize")
    q.add_argument("theories", nargs=1)
    q = ts.add_parser("coeq")
    q.add_argument("theories", nargs=1)
    q.add_argument("alpha")
    q.add_argument("beta")
    q = ts.add_parser("implies-star")
    q.add_argument("theories", nargs=2)
    q.add_argument("--max", type=int, default=3)
    p.set_defaults(handler=cmd_theory)

    p = sub.add_parser("lattice", help="lattice operations")
    ls = p.add_subparsers(dest="lattice_command", required=True)
    q = ls.add_parser("priestley")
    q.add_argument("lattice")
    q = ls.add_parser("check-eq")
    q.add_argument("lattice")
    q.add_argument("lhs")
    q.add_argument("rhs")
    q = ls.add_parser("catalog")
    q.add_argument("relations", nargs="+")
    p.set_defaults(handler=cmd_lattice)

    p = sub.add_parser("family", help="set family operations")
    fs = p.add_subparsers(dest="family_command", required=True)
    q = fs.add_parser("reduce")
    q.add_argument("family")
    q.add_argument("--t", type=int, required=True, help="largeness threshold")
    p.set_defaults(handler=cmd_family)

    p = sub.add_parser("graph", help="graphing constructions")
    gs = p.add_subparsers(dest="graph_command", required=True)
    q = gs.add_parser("bipartite")
    q.add_argument("input")
    q = gs.add_parser("subdivide")
    q.add_argument("input")
    q.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=cmd_graph)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", nargs="?", default="all")
    p.add_argument("--max", type=int, default=3)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(args.command)
    try:
        code = args.handler(args, report)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except ContractViolation as e:
        print(f"internal contract violation: {e}", file=sys.stderr)
        return 2
    report.emit(args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
