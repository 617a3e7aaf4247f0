"""Verification suites: every module's invariants and the acceptance
criteria, run at explicit bounds with explicit seeds.

Oracles are kept independent of the code paths they check: model search is
compared against plain product enumeration, reductions against definition
chasing, the lattice representation against subset enumeration, cycle
conditions against brute-force cycle listing.
"""

import itertools
import random
from dataclasses import dataclass

from .errors import InputError, ContractViolation
from . import eqrel, structures, logic, scott, constructions, factorize, fiber, theoryalg, lattice, combinat
from .eqrel import (
    FinER, PointMap, classify_hom, enumerate_homs, all_relations_up_to,
    disjoint_sum, cross_product, fiber_product, independent, independent_join,
    point_names, er_isomorphism,
    HOM, REDUCTION, CI, CS, CB, EMBEDDING, INV_EMBEDDING, SMOOTH, ALL_FLAGS,
)
from .structures import Language, FinStructure, StructuredER, pushforward, pullback, classwise_pullback, isomorphic
from .logic import (
    Theory, models, first_model, satisfiable, structure_search, structurable,
    implies_star_n, holds_classwise, eval_formula, conj, disj, TRUE, FALSE,
    Atom, Eq, Not, Exists, Forall, implies,
)
from .constructions import (
    CheckItem, ltimes, ltimes_universal_map, tensor, pairing, tensor_vs_cross,
    tensor_class_count, Cocycle, identity_cocycle, skew_product,
    cocycle_from_enumeration, verify_identities,
    truth_theory, linear_order_theory, one_marked_theory, exactly_two_theory,
)


# ---------------------------------------------------------------------------
# Independent oracles


def brute_models(theory, universe):
    """Product enumeration over every relation cell, with plain sentence
    evaluation; the independent oracle for the staged model search."""
    universe = tuple(sorted(universe))
    cells = []
    for name, ar in theory.language.symbols:
        for t in sorted(itertools.product(universe, repeat=ar)):
            cells.append((name, t))
    if len(cells) > 20:
        raise InputError("brute-force model enumeration is for tiny signatures")
    out = []
    for mask in range(1 << len(cells)):
        rels = {name: [] for name, _ in theory.language.symbols}
        for i, (name, t) in enumerate(cells):
            if mask >> i & 1:
                rels[name].append(t)
        A = FinStructure(theory.language, universe, rels)
        if eval_formula(A, theory.sentence):
            out.append(A)
    return out


def all_maps(E, F):
    return list(eqrel._all_maps(E, F))


def all_structures_on(theory_lang, E):
    """Every classwise structure on E over a language (brute force,
    within-class tuples only)."""
    cells = []
    for name, ar in theory_lang.symbols:
        for block in E.classes:
            for t in itertools.product(block, repeat=ar):
                cells.append((name, t))
    if len(cells) > 20:
        raise InputError("structure sweep too large")
    for mask in range(1 << len(cells)):
        rels = {name: [] for name, _ in theory_lang.symbols}
        for i, (name, t) in enumerate(cells):
            if mask >> i & 1:
                rels[name].append(t)
        yield StructuredER(E, FinStructure(theory_lang, E.points, rels))


def classwise_structures(theory, E):
    """All structures on E satisfying the theory classwise, assembled from
    the per-class model lists."""
    per_class = [models(theory, block) for block in E.classes]
    for combo in itertools.product(*per_class):
        rels = {name: [] for name in theory.language.names()}
        for model in combo:
            for name, tuples in model.relations.items():
                rels[name].extend(tuples)
        yield StructuredER(E, FinStructure(theory.language, E.points, rels))


def fiber_structures(theory, S):
    """All fiberwise structures on a fiber space satisfying the theory on
    every fiber: a model on each class's anchor fiber, spread along
    transport (tuples sit inside fibers, which cross the total classes)."""
    anchors = [b[0] for b in S.base.classes]
    per_class = [models(theory, S.fiber(x0)) for x0 in anchors]
    for combo in itertools.product(*per_class):
        rels = {name: [] for name in theory.language.names()}
        for x0, model in zip(anchors, combo):
            for x in S.base.class_of(x0):
                moved = pushforward(model, S.transport(x0, x))
                for name, tuples in moved.relations.items():
                    rels[name].extend(tuples)
        yield FinStructure(theory.language, S.total.points, rels)


def singleton_theory():
    return Theory(Language(()), Forall("x", Forall("y", Eq("x", "y"))), name="singleton")


def at_least_two_theory():
    return Theory(Language(()), Exists("x", Exists("y", Not(Eq("x", "y")))), name="at-least-two")


def matching_theory():
    m = lambda a, b: Atom("M", (a, b))
    total_unique = Forall(
        "x",
        Exists(
            "y",
            conj([
                m("x", "y"),
                Not(Eq("x", "y")),
                Forall("z", implies(m("x", "z"), Eq("z", "y"))),
            ]),
        ),
    )
    sym = Forall("x", Forall("y", implies(m("x", "y"), m("y", "x"))))
    return Theory(Language([("M", 2)]), conj([total_unique, sym]), name="perfect-matching")


def standard_battery():
    return [
        truth_theory(),
        linear_order_theory(),
        one_marked_theory(),
        exactly_two_theory(),
        singleton_theory(),
        at_least_two_theory(),
        matching_theory(),
    ]


# ---------------------------------------------------------------------------
# Criterion 1: the universal structured relation over a base


def criterion_1(max_base=3, max_over=4):
    battery = [truth_theory(), linear_order_theory(), one_marked_theory()]
    rels_base = list(all_relations_up_to(max_base))
    rels_over = list(all_relations_up_to(max_over, prefix="q"))
    instances = 0
    for theory in battery:
        for E in rels_base:
            R = ltimes(E, theory)
            for F in rels_over:
                cb_fe = enumerate_homs(F, E, ["cb"])
                if not cb_fe:
                    continue
                cb_fz = enumerate_homs(F, R.space, ["cb"])
                table = {}
                for h in cb_fz:
                    key = (
                        R.projection.compose(h).as_pairs(),
                        classwise_pullback(R.structure.structure, h),
                    )
                    table.setdefault(key, []).append(h)
                for f in cb_fe:
                    for A in classwise_structures(theory, F):
                        lifted = ltimes_universal_map(R, f, A)
                        matches = table.get((f.as_pairs(), A), [])
                        if matches != [lifted]:
                            return [CheckItem(
                                "ltimes-universal-property", False,
                                f"{theory.name}, {E!r}, {F!r}: {len(matches)} matches",
                            )]
                        instances += 1
    return [CheckItem("ltimes-universal-property", True, f"{instances} instances, unique lift each")]


# ---------------------------------------------------------------------------
# Criteria 2 and 3: structure/map correspondence and the semantic table


def criterion_2(max_n=3):
    rels = list(all_relations_up_to(max_n))
    rels_f = list(all_relations_up_to(max_n, prefix="q"))
    count_checks = 0
    for E in rels:
        st = scott.scott_theory(scott.code_er(E))
        theory = st.theory()
        for F in rels_f:
            satisfying = [
                A for A in scott.all_structures(st.language, F)
                if holds_classwise(A, st.sigma)
            ]
            cb_homs = enumerate_homs(F, E, ["cb"])
            if len(satisfying) != len(cb_homs):
                return [CheckItem(
                    "structure-map-counts", False,
                    f"{E!r}, {F!r}: {len(satisfying)} structures vs {len(cb_homs)} maps",
                )]
            for f in cb_homs:
                A = st.encode_map(f)
                if st.decode_map(A) != f:
                    return [CheckItem("structure-map-counts", False, "decode(encode(f)) != f")]
            for A in satisfying:
                if st.encode_map(st.decode_map(A)) != A:
                    return [CheckItem("structure-map-counts", False, "encode(decode(A)) != A")]
            if structure_search(F, theory).ok != bool(cb_homs):
                return [CheckItem("structure-map-counts", False, f"search/existence mismatch {E!r},{F!r}")]
            count_checks += 1
    return [CheckItem("structure-map-counts", True, f"{count_checks} pairs, counts and round trips agree")]


def criterion_3(max_n=3):
    rels = list(all_relations_up_to(max_n))
    rels_f = list(all_relations_up_to(max_n, prefix="q"))
    checks = 0
    for E in rels:
        st = scott.scott_theory(scott.code_er(E))
        for F in rels_f:
            for A in scott.all_structures(st.language, F):
                decoded = scott.decode_raw(st, A)
                total = all(v is not None for v in decoded.values())
                is_hom = total and all(
                    E.related(decoded[y1], decoded[y2])
                    for block in F.classes
                    for y1 in block
                    for y2 in block
                )
                codes = {
                    y: tuple(1 if (y,) in A.structure.rel(f"R{j}") else 0 for j in range(st.coded.bits))
                    for y in F.points
                }
                classwise_inj = all(
                    len({codes[y] for y in block}) == len(block) for block in F.classes
                )
                invariant = total and all(
                    set(E.class_of(decoded[y])) <= {decoded[z] for z in block}
                    for block in F.classes
                    for y in block
                )
                rows = [
                    (holds_classwise(A, st.sigma_h), is_hom),
                    (holds_classwise(A, st.sigma_ci), classwise_inj),
                    (holds_classwise(A, st.sigma_cs), invariant),
                ]
                for i, (lhs, rhs) in enumerate(rows):
                    if lhs != rhs:
                        return [CheckItem(
                            "semantic-table", False,
                            f"row {i} differs at {E!r}, {F!r}, {A.structure!r}",
                        )]
                checks += 1
    return [CheckItem("semantic-table", True, f"{checks} structures, all three rows agree")]


# ---------------------------------------------------------------------------
# Criterion 4: product identities


def criterion_4(max_n=3):
    items = []
    ok = True
    detail = ""
    for m in range(1, max_n + 1):
        for n in range(1, max_n + 1):
            dm = FinER.delta(point_names(m))
            dn = FinER.delta(point_names(n, "q"))
            t = tensor(dm, dn)
            if er_isomorphism(t.space, FinER.delta(point_names(m * n, "r"))) is None:
                ok, detail = False, f"delta {m}x{n}"
    items.append(CheckItem("delta-tensor-product", ok, detail))

    rels = list(all_relations_up_to(max_n))
    rels_f = list(all_relations_up_to(max_n, prefix="q"))
    ok = True
    detail = ""
    for E in rels:
        for F in rels_f:
            rep = tensor_vs_cross(E, F)
            if rep.surjective != rep.uniform_criterion:
                ok, detail = False, f"surjectivity criterion at {E!r},{F!r}"
            if not E.points or not F.points:
                continue
            both_delta = all(len(b) == 1 for b in E.classes) and all(len(b) == 1 for b in F.classes)
            if both_delta and not rep.iso:
                ok, detail = False, f"delta case not iso at {E!r},{F!r}"
    items.append(CheckItem("tensor-vs-cross", ok, detail))

    items.extend(verify_identities(max_n))
    return items


# ---------------------------------------------------------------------------
# Criterion 5: factorizations


def _er_isomorphisms_all(E, F):
    if E.class_sizes() != F.class_sizes():
        return
    groups_e = {}
    groups_f = {}
    for b in E.classes:
        groups_e.setdefault(len(b), []).append(b)
    for b in F.classes:
        groups_f.setdefault(len(b), []).append(b)
    sizes = sorted(groups_e)
    per_size = []
    for s in sizes:
        be, bf = groups_e[s], groups_f[s]
        options = []
        for perm in itertools.permutations(range(len(bf))):
            for bijs in itertools.product(*(itertools.permutations(bf[perm[i]]) for i in range(len(be)))):
                mapping = {}
                for i, block in enumerate(be):
                    mapping.update(dict(zip(block, bijs[i])))
                options.append(mapping)
        per_size.append(options)
    for combo in itertools.product(*per_size):
        mapping = {}
        for part in combo:
            mapping.update(part)
        yield PointMap(E, F, mapping)


def criterion_5(max_n=4, unique_n=3):
    items = []
    counts = {"ci": 0, "smooth": 0, "cs": 0}
    rels = list(all_relations_up_to(max_n))
    rels_f = list(all_relations_up_to(max_n, prefix="q"))
    for E in rels:
        for F in rels_f:
            for f in all_maps(E, F):
                flags = classify_hom(f)
                if HOM not in flags:
                    continue
                fac = factorize.factor_smooth(f)
                if fac.cb_map.compose(fac.section_embedding).compose(fac.surjective_reduction) != f:
                    return [CheckItem("factorizations", False, f"smooth recompose {f!r}")]
                counts["smooth"] += 1
                if CI in flags:
                    ci = factorize.factor_ci(f)
                    if ci.cb_map.compose(ci.section_embedding) != f:
                        return [CheckItem("factorizations", False, f"ci recompose {f!r}")]
                    counts["ci"] += 1
                if CS in flags:
                    cs = factorize.factor_cs_smooth(f)
                    if cs.cb_map.compose(cs.surjective_reduction) != f:
                        return [CheckItem("factorizations", False, f"cs recompose {f!r}")]
                    counts["cs"] += 1
    items.append(CheckItem(
        "factorizations", True,
        f"{counts['smooth']} smooth, {counts['ci']} ci, {counts['cs']} cs factorizations recompose",
    ))

    checked = 0
    for E in all_relations_up_to(unique_n):
        for F in all_relations_up_to(unique_n, prefix="q"):
            for f in all_maps(E, F):
                flags = classify_hom(f)
                if HOM not in flags or CI not in flags:
                    continue
                fac1 = factorize.factor_ci(f, selector=min)
                fac2 = factorize.factor_ci(f, selector=max)
                links = [
                    i
                    for i in _er_isomorphisms_all(fac1.middle, fac2.middle)
                    if i.compose(fac1.section_embedding) == fac2.section_embedding
                    and fac1.cb_map == fac2.cb_map.compose(i)
                ]
                if len(links) != 1:
                    return [CheckItem(
                        "factorization-uniqueness", False,
                        f"{len(links)} linking isomorphisms for {f!r}",
                    )]
                checked += 1
    items.append(CheckItem("factorization-uniqueness", True, f"{checked} maps, unique linking isomorphism"))

    ok = all(
        len(factorize._kernel_inside(E, f).classes) >= len(E.classes)
        for E in all_relations_up_to(2)
        for F in all_relations_up_to(2, prefix="q")
        for f in all_maps(E, F)
        if HOM in classify_hom(f)
    )
    items.append(CheckItem("kernel-inside-finite", ok, "kernel inside classes always finite here"))
    return items


# ---------------------------------------------------------------------------
# Criterion 6: bounded lattice laws


def criterion_6(bound=4, battery=None):
    battery = battery or standard_battery()
    items = []
    tensors = {}
    sums = {}
    for i, s in enumerate(battery):
        for j, t in enumerate(battery):
            tensors[(i, j)] = theoryalg.theory_tensor([s, t])[0]
            sums[(i, j)] = theoryalg.theory_oplus([s, t])[0]

    ok, detail = True, ""
    for (i, j), both in tensors.items():
        s, t = battery[i], battery[j]
        if not implies_star_n(both, s, bound).holds or not implies_star_n(both, t, bound).holds:
            ok, detail = False, f"tensor not below factors: {s.name}, {t.name}"
        for u in battery:
            if implies_star_n(u, s, bound).holds and implies_star_n(u, t, bound).holds:
                if not implies_star_n(u, both, bound).holds:
                    ok, detail = False, f"tensor not greatest lower bound at {u.name}"
    items.append(CheckItem("tensor-is-meet", ok, detail))

    ok, detail = True, ""
    for (i, j), both in sums.items():
        s, t = battery[i], battery[j]
        if not implies_star_n(s, both, bound).holds or not implies_star_n(t, both, bound).holds:
            ok, detail = False, f"sum not above factors: {s.name}, {t.name}"
        for u in battery:
            if implies_star_n(s, u, bound).holds and implies_star_n(t, u, bound).holds:
                if not implies_star_n(both, u, bound).holds:
                    ok, detail = False, f"sum not least upper bound at {u.name}"
    items.append(CheckItem("sum-is-join", ok, detail))

    ok, detail = True, ""
    rels = list(all_relations_up_to(bound))
    for s in battery:
        for t1 in battery:
            for t2 in battery:
                lhs = theoryalg.theory_oplus([s, theoryalg.theory_tensor([t1, t2])[0]])[0]
                rhs = theoryalg.theory_tensor([
                    theoryalg.theory_oplus([s, t1])[0],
                    theoryalg.theory_oplus([s, t2])[0],
                ])[0]
                for E in rels:
                    if structurable(E, lhs) != structurable(E, rhs):
                        ok = False
                        detail = f"distributivity fails at {s.name},{t1.name},{t2.name},{E!r}"
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    items.append(CheckItem("sum-tensor-distributivity", ok, detail))
    return items


# ---------------------------------------------------------------------------
# Criterion 7: fiber spaces


def _uniform_rels(max_n, prefix="p"):
    return [E for E in all_relations_up_to(max_n, prefix) if len({len(b) for b in E.classes}) == 1]


def _small_fiber_spaces(max_base=3, max_fiber=2):
    out = []
    for E in all_relations_up_to(max_base):
        out.append(fiber.tautological(E))
        sizes = {len(b) for b in E.classes}
        if len(sizes) == 1:
            for fs in range(1, max_fiber + 1):
                out.append(fiber.fiberspace_of(identity_cocycle(E, [str(i) for i in range(fs)])))
            coded = scott.code_er(E)
            alpha = cocycle_from_enumeration(E, coded.enumeration())
            out.append(fiber.fiberspace_of(alpha))
    return out


def criterion_7(max_n=3):
    items = []

    ok, detail = True, ""
    round_trips = 0
    for S in _small_fiber_spaces(max_n, 2):
        if S.uniform_size() is None:
            continue
        alpha = fiber.cocycle_of(S)
        back = fiber.fiberspace_of(alpha)
        if fiber.fiberwise_iso(back, S) is None:
            ok, detail = False, f"round trip broke at {S!r}"
        rotated = {
            x: S.fiber(x)[1:] + S.fiber(x)[:1] for x in S.base.points
        }
        beta = fiber.cocycle_of(S, rotated)
        if fiber.cohomologous(alpha, beta) is None:
            ok, detail = False, f"enumeration change not cohomologous at {S!r}"
        round_trips += 1
    items.append(CheckItem("cocycle-round-trip", ok, detail or f"{round_trips} spaces"))

    ok, detail = True, ""
    pairs = 0
    for E in all_relations_up_to(max_n):
        for F in all_relations_up_to(max_n, prefix="q"):
            homs = [f for f in all_maps(E, F) if HOM in classify_hom(f)]
            fmaps = fiber.enumerate_fiber_maps(fiber.tautological(E), fiber.tautological(F))
            sigs = set()
            for m in fmaps:
                sig = tuple(
                    m.dst.total.class_index(m.total_map.mapping[u])
                    for u in m.src.total.points
                )
                sigs.add(sig)
            if len(sigs) != len(homs):
                ok, detail = False, f"{E!r},{F!r}: {len(sigs)} classes vs {len(homs)} maps"
            for f in homs:
                if fiber.fiber_map_companion(fiber.hom_to_fiber_map(f)) != f:
                    ok, detail = False, "companion round trip failed"
            pairs += 1
    items.append(CheckItem("map-correspondence-counts", ok, detail or f"{pairs} base pairs"))

    ok, detail = True, ""
    count = 0
    for E in all_relations_up_to(2):
        for F in all_relations_up_to(2, prefix="q"):
            for f in all_maps(E, F):
                if HOM not in classify_hom(f):
                    continue
                fiber.fiber_factorize(fiber.hom_to_fiber_map(f))
                count += 1
    for S in _small_fiber_spaces(2, 2):
        m = fiber.FiberMap(
            S, S, PointMap.identity(S.base), PointMap.identity(S.total)
        )
        fiber.fiber_factorize(m)
        count += 1
    items.append(CheckItem("fiber-map-factorization", ok, f"{count} maps recompose"))

    theory = linear_order_theory()
    ok, detail = True, ""
    instances = 0
    for S in _small_fiber_spaces(2, 2):
        R = fiber.fiber_ltimes(S, theory)
        for Q in _small_fiber_spaces(2, 2):
            into_s = [m for m in fiber.enumerate_fiber_maps(Q, S) if m.fiber_bijective]
            if not into_s:
                continue
            candidates = [
                g for g in fiber.enumerate_fiber_maps(Q, R.space) if g.fiber_bijective
            ]
            for m in into_s:
                for A in fiber_structures(theory, Q):
                    lifted = fiber.fiber_ltimes_universal_map(R, m, A)
                    matches = [
                        g
                        for g in candidates
                        if fiber.compose_fiber_maps(R.projection, g).total_map == m.total_map
                        and fiber.compose_fiber_maps(R.projection, g).base_map == m.base_map
                        and fiber.fiberwise_pullback_structure(g, R.structure) == A
                    ]
                    if matches != [lifted]:
                        ok, detail = False, f"{len(matches)} lifts at {S!r}"
                    instances += 1
    items.append(CheckItem("fiber-ltimes-universal", ok, detail or f"{instances} instances"))
    return items


# ---------------------------------------------------------------------------
# Criterion 8: interpretations and Morleyization


def _formula_battery(lang):
    names = lang.names()
    battery = []
    if names:
        R = names[0]
        ar = lang.arity(R)
        vs = tuple(theoryalg.var(i + 1) for i in range(ar))
        battery.append(Atom(R, vs))
        battery.append(Not(Atom(R, vs)))
        battery.append(Exists("y", Atom(R, ("y",) * ar)))
        battery.append(Forall("y", disj([Atom(R, ("y",) * ar), Not(Atom(R, ("y",) * ar))])))
        if ar >= 2:
            battery.append(Forall("x2", Exists("x1", Atom(R, vs))))
    battery.append(Exists("x1", Eq("x1", "x1")))
    battery.append(conj([Eq("x1", "x1"), TRUE]))
    return battery


def criterion_8(max_n=3):
    items = []

    base = Theory(Language([("S", 2)]), TRUE, name="any-binary")
    alphas = [
        theoryalg.Interpretation(
            Language([("R", 2)]), base, {"R": Atom("S", ("x1", "x2"))}
        ),
        theoryalg.Interpretation(
            Language([("R", 2)]), base, {"R": Eq("x1", "x2")}
        ),
        theoryalg.Interpretation(
            Language([("R", 2)]), base,
            {"R": Exists("x2", Atom("S", ("x1", "x2")))},  # deliberate capture risk
        ),
        theoryalg.Interpretation(
            Language([("R", 1)]), base, {"R": Exists("v0", Atom("S", ("x1", "v0")))}
        ),
    ]
    ok, detail = True, ""
    checked = 0
    for alpha in alphas:
        for phi in _formula_battery(alpha.source):
            for size in range(1, max_n + 1):
                for A in models(base, point_names(size)):
                    if not theoryalg.check_substitution_identity(alpha, phi, A):
                        ok, detail = False, f"identity failed for {logic.print_formula(phi)}"
                    checked += 1
    items.append(CheckItem("substitution-identity", ok, detail or f"{checked} model checks"))

    samples = [
        truth_theory(),
        linear_order_theory(),
        one_marked_theory(),
        Theory(Language([("R", 2)]), Forall("x", Exists("y", Atom("R", ("x", "y")))), name="total"),
        Theory(
            Language([("R", 2)]),
            Not(Exists("x", Forall("y", Atom("R", ("x", "y"))))),
            name="no-apex",
        ),
    ]
    ok, detail = True, ""
    for T in samples:
        res = theoryalg.morleyize(T)
        if not theoryalg.is_forall_exists_qf(res.theory.sentence):
            ok, detail = False, f"shape check failed for {T.name}"
            continue
        for size in range(1, max_n + 1):
            pts = point_names(size)
            base_models = models(T, pts)
            flat_models = models(res.theory, pts)
            if len(base_models) != len(flat_models):
                ok, detail = False, f"{T.name}@{size}: {len(base_models)} vs {len(flat_models)} models"
                continue
            expansions = {theoryalg.canonical_expansion(res, A).key() for A in base_models}
            if expansions != {m.key() for m in flat_models}:
                ok, detail = False, f"{T.name}@{size}: expansions differ from flat models"
            for m in flat_models:
                reduct = theoryalg.alpha_reduct(res.reduct, m)
                if not eval_formula(reduct, T.sentence):
                    ok, detail = False, f"{T.name}@{size}: reduct fails the source"
    items.append(CheckItem("morleyization", ok, detail or f"{len(samples)} theories, unique expansions"))

    ok, detail = True, ""
    target = Theory(Language([("P", 1), ("Q", 1)]), TRUE, name="two-unary")
    a = theoryalg.Interpretation(Language([("R", 1)]), target, {"R": Atom("P", ("x1",))})
    b = theoryalg.Interpretation(Language([("R", 1)]), target, {"R": Atom("Q", ("x1",))})
    coeq = theoryalg.coequalizer(a, b)
    for size in range(1, max_n + 1):
        pts = point_names(size)
        expected = [
            m for m in models(target, pts)
            if theoryalg.alpha_reduct(a, m) == theoryalg.alpha_reduct(b, m)
        ]
        got = models(coeq, pts)
        if [m.key() for m in expected] != [m.key() for m in got]:
            ok, detail = False, f"coequalizer models differ at size {size}"
    same = theoryalg.coequalizer(a, a)
    for size in range(1, max_n + 1):
        if len(models(same, point_names(size))) != len(models(target, point_names(size))):
            ok, detail = False, "coequalizer of equal maps lost models"
    items.append(CheckItem("coequalizer", ok, detail))
    return items


# ---------------------------------------------------------------------------
# Criterion 9: lattice representation


def _lattice_corpus():
    return [
        lattice.FinLattice.chain(1),
        lattice.FinLattice.chain(2),
        lattice.FinLattice.chain(3),
        lattice.FinLattice.chain(5),
        lattice.FinLattice.diamond(),
        lattice.FinLattice.boolean(2),
        lattice.FinLattice.boolean(3),
        lattice.FinLattice.boolean(4),
    ]


def criterion_9(seed=7, random_count=100, transfer_count=1000):
    items = []
    rng = random.Random(seed)

    ok, detail = True, ""
    count = 0
    for L in _lattice_corpus():
        res = lattice.priestley(L)
        if not res.ok:
            ok, detail = False, f"corpus lattice failed: {res.detail}"
        count += 1
    for _ in range(random_count):
        L = lattice.random_distributive_lattice(rng)
        res = lattice.priestley(L)
        if not res.ok:
            ok, detail = False, f"random lattice failed: {res.detail}"
        count += 1
    items.append(CheckItem("representation-round-trip", ok, detail or f"{count} lattices"))

    ok = True
    for bad in (lattice.FinLattice.n5(), lattice.FinLattice.m3()):
        if bad.distributive() is None:
            ok = False
        try:
            lattice.priestley(bad)
            ok = False
        except InputError:
            pass
    items.append(CheckItem("non-distributive-rejected", ok, "n5 and m3 carry witness triples"))

    ok, detail = True, ""
    done = 0
    variables = ["x", "y", "z"]
    pool = [lattice.random_distributive_lattice(rng, k=3, max_size=12) for _ in range(12)]
    while done < transfer_count:
        t = lattice.random_term(rng, variables, 2)
        if done % 2 == 0:
            other = lattice.equivalent_variant(rng, t)
        else:
            other = lattice.random_term(rng, variables, 2)
        L = pool[rng.randrange(len(pool))]
        try:
            lattice.equation_transfer_test(t, other, [L])
        except ContractViolation as e:
            ok, detail = False, str(e)
            break
        done += 1
    items.append(CheckItem("equation-transfer", ok, detail or f"{done} identity/lattice pairs"))
    return items


# ---------------------------------------------------------------------------
# Criterion 10: combinatorics and graphings


def _random_structure(rng, lang, n):
    pts = point_names(n)
    rels = {}
    for name, ar in lang.symbols:
        rels[name] = [
            t for t in itertools.product(pts, repeat=ar) if rng.random() < 0.4
        ]
    return FinStructure(lang, pts, rels)


def criterion_10(seed=7):
    items = []
    rng = random.Random(seed)
    lang = Language([("R", 2)])
    battery = combinat.wdp_formulas(lang, 2, 40)

    found = 0
    attempts = 0
    ok, detail = True, ""
    while found < 50 and attempts < 4000:
        attempts += 1
        A = _random_structure(rng, lang, rng.randint(2, 5))
        if structures.first_wdp_failure(A, 2) is None:
            continue
        got = combinat.intersecting_family_from_failure(battery, A)
        if got is None:
            ok, detail = False, f"no family despite failure: {A!r}"
            break
        n, fam = got
        if not combinat.intersecting_check(fam):
            ok, detail = False, "family not intersecting"
            break
        found += 1
    if found < 50:
        ok, detail = False, f"only {found} failing structures found"
    items.append(CheckItem("duplication-failure-families", ok, detail or f"{found} structures"))

    ground6 = [str(i) for i in range(6)]
    quads = list(itertools.combinations(ground6, 4))
    ok, detail = True, ""
    statuses = {"ok": 0, "artifact-empty": 0, "artifact-not-intersecting": 0}
    for mask in range(1, 1 << len(quads)):
        chosen = [quads[i] for i in range(len(quads)) if mask >> i & 1]
        fam = combinat.SetFamily(ground6, chosen)
        if not combinat.intersecting_check(fam):
            ok, detail = False, "a 4-uniform family on 6 points failed to intersect"
            break
        trace = combinat.family_reduce(fam, 4)
        statuses[trace.status] += 1
        if trace.ok and trace.core is not None and not trace.core and trace.terminal.sets:
            ok, detail = False, "empty core on a successful trace"
            break
    items.append(CheckItem(
        "family-reduction-exhaustive-6", ok,
        detail or f"{sum(statuses.values())} families: {statuses}",
    ))

    ground8 = [str(i) for i in range(8)]
    quads8 = list(itertools.combinations(ground8, 4))
    ok, detail = True, ""
    sampled = 0
    statuses8 = {"ok": 0, "artifact-empty": 0, "artifact-not-intersecting": 0}
    while sampled < 1500:
        size = rng.randint(4, 12)
        chosen = rng.sample(quads8, size)
        fam = combinat.SetFamily(ground8, chosen)
        if not combinat.intersecting_check(fam):
            continue
        trace = combinat.family_reduce(fam, 4)
        statuses8[trace.status] += 1
        sampled += 1
    items.append(CheckItem(
        "family-reduction-sampled-8", True, f"{sampled} families: {statuses8}"
    ))

    ok, detail = True, ""
    graphs = 0
    for n in range(2, 6):
        pts = point_names(n)
        edges_all = list(itertools.combinations(pts, 2))
        for mask in range(1 << len(edges_all)):
            edges = [edges_all[i] for i in range(len(edges_all)) if mask >> i & 1]
            g = _graphing_of(pts, edges)
            for k in range(1, 5):
                sub, incl = combinat.k_subdivide(g, k)
                if not combinat.cycles_divisible(sub, k):
                    ok, detail = False, f"cycle check failed: n={n}, k={k}, mask={mask}"
                    break
                if combinat.mod_k_potential(sub, k) is None:
                    ok, detail = False, f"potential labeling missing: n={n}, k={k}, mask={mask}"
                    break
            if not ok:
                break
            graphs += 1
        if not ok:
            break
    for _ in range(80 if ok else 0):
        n = rng.randint(6, 8)
        pts = point_names(n)
        edges = [e for e in itertools.combinations(pts, 2) if rng.random() < 0.3]
        g = _graphing_of(pts, edges)
        for k in range(1, 5):
            sub, _ = combinat.k_subdivide(g, k)
            if not combinat.cycles_divisible(sub, k) or combinat.mod_k_potential(sub, k) is None:
                ok, detail = False, f"random graph failed at n={n}, k={k}"
                break
        graphs += 1
    items.append(CheckItem("subdivision-cycle-check", ok, detail or f"{graphs} graphs, k<=4"))

    ok = True
    fourcycle = _graphing_of(point_names(4), [("p0", "p1"), ("p1", "p2"), ("p2", "p3"), ("p0", "p3")])
    if combinat.mod_k_potential(fourcycle, 3) is None or combinat.cycles_divisible(fourcycle, 3):
        ok = False
    items.append(CheckItem(
        "potential-labeling-is-only-necessary", ok,
        "four-cycle admits a labeling mod 3 but has a cycle of length 4",
    ))
    return items


def _graphing_of(points, edges):
    parent = {p: p for p in points}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for u, v in edges:
        parent[find(u)] = find(v)
    blocks = {}
    for p in points:
        blocks.setdefault(find(p), []).append(p)
    return combinat.Graphing(FinER(blocks.values()), edges)


# ---------------------------------------------------------------------------
# Extra module suites (invariants not covered by the criteria)


def suite_eqrel(max_n=3):
    items = []

    ok, detail = True, ""
    implications = [
        (REDUCTION, HOM), (CI, HOM), (CS, HOM), (CB, CI), (CB, CS),
        (EMBEDDING, REDUCTION), (EMBEDDING, CI),
        (INV_EMBEDDING, EMBEDDING), (INV_EMBEDDING, CB), (SMOOTH, HOM),
    ]
    for E in all_relations_up_to(max_n):
        for F in all_relations_up_to(max_n, prefix="q"):
            for f in all_maps(E, F):
                flags = classify_hom(f).flags
                for a, b in implications:
                    if a in flags and b not in flags:
                        ok, detail = False, f"{a} without {b} at {f!r}"
                both = CI in flags and CS in flags
                if (CB in flags) != both:
                    ok, detail = False, f"cb mismatch at {f!r}"
                if (SMOOTH in flags) != (HOM in flags):
                    ok, detail = False, f"smooth flag differs from hom at {f!r}"
    items.append(CheckItem("flag-implications", ok, detail))

    ok, detail = True, ""
    tested = {flag: 0 for flag in (HOM, REDUCTION, CI, CS, CB, EMBEDDING, INV_EMBEDDING)}
    for E in all_relations_up_to(2):
        for F in all_relations_up_to(2, prefix="q"):
            for G in all_relations_up_to(2, prefix="r"):
                for f in all_maps(E, F):
                    ff = classify_hom(f).flags
                    if HOM not in ff:
                        continue
                    for g in all_maps(F, G):
                        gf = classify_hom(g).flags
                        if HOM not in gf:
                            continue
                        cf = classify_hom(g.compose(f)).flags
                        for flag in tested:
                            if flag in ff and flag in gf:
                                tested[flag] += 1
                                if flag not in cf:
                                    ok, detail = False, f"{flag} not closed under composition"
    items.append(CheckItem("composition-closure", ok, detail or str(min(tested.values())) + "+ cases per flag"))

    ok, detail = True, ""
    for E in all_relations_up_to(max_n):
        for F in all_relations_up_to(max_n, prefix="q"):
            for G in all_relations_up_to(max_n, prefix="r"):
                for f in all_maps(F, E):
                    if HOM not in classify_hom(f).flags:
                        continue
                    for g in all_maps(G, E):
                        gflags = classify_hom(g).flags
                        if HOM not in gflags:
                            continue
                        prod, pi1, pi2 = fiber_product(f, g)
                        p1flags = classify_hom(pi1).flags
                        for inherited in (CI, CS, REDUCTION):
                            if inherited in gflags and inherited not in p1flags:
                                ok, detail = False, f"{inherited} not inherited"
                        if g.compose(pi2).as_pairs() != f.compose(pi1).as_pairs():
                            ok, detail = False, "square does not commute"
    items.append(CheckItem("fiber-product-inheritance", ok, detail))

    ok, detail = True, ""
    pts = point_names(4)
    import itertools as _it

    small = [FinER(p) for p in eqrel.set_partitions(pts)]
    rng = random.Random(3)
    for _ in range(60):
        picks = [rng.choice(small) for _ in range(rng.randint(1, 3))]
        join1, _ = independent_join(picks)
        join2, _ = independent_join(picks + picks)
        join3, _ = independent_join(list(reversed(picks)))
        if join1 != join2 or join1 != join3:
            ok, detail = False, "join not idempotent/commutative"
        if len(picks) >= 2:
            left, _ = independent_join([independent_join(picks[:1])[0], *picks[1:]])
            if left != join1:
                ok, detail = False, "join not associative"
        closure = picks[0]
        for other in picks[1:]:
            closure, _ = independent_join([closure, other])
        if closure != join1:
            ok, detail = False, "join differs from iterated transitive closure"
    items.append(CheckItem("independent-join-laws", ok, detail))
    return items


def suite_structures():
    items = []
    lang = Language([("R", 2), ("P", 1)])
    pts = point_names(3)
    rng = random.Random(5)
    battery = [_random_structure(rng, lang, 3) for _ in range(6)]

    ok, detail = True, ""
    for A in battery:
        ident = {p: p for p in A.universe}
        if pushforward(A, ident) != A or pullback(A, ident) != A:
            ok, detail = False, "identity laws fail"
        perm = dict(zip(A.universe, reversed(A.universe)))
        inv = {v: k for k, v in perm.items()}
        if pushforward(pushforward(A, perm), inv) != A:
            ok, detail = False, "pushforward inverse law fails"
        f = {"a0": pts[0], "a1": pts[0], "a2": pts[2]}
        g = {p: p for p in pts}
        gf = {k: g[v] for k, v in f.items()}
        if pullback(pullback(A, g), f) != pullback(A, gf):
            ok, detail = False, "pullback does not compose"
    items.append(CheckItem("transport-functorial", ok, detail))

    ok, detail = True, ""
    E = FinER([["a", "b"], ["c"]])
    F = FinER([["u", "v"], ["w"]])
    f = PointMap(E, F, {"a": "u", "b": "v", "c": "w"})
    A = FinStructure(Language([("R", 2)]), F.points, {"R": [("u", "v"), ("u", "w")]})
    pulled = classwise_pullback(A, f)
    if pulled.structure.rel("R") != frozenset({("a", "b")}):
        ok, detail = False, "classwise pullback kept a crossing tuple"
    for block in E.classes:
        image = [f.mapping[p] for p in block]
        left = pushforward(pulled.class_structure(block), {p: f.mapping[p] for p in block})
        right = A.restrict(image)
        if left != right:
            ok, detail = False, "per-class map is not an isomorphism onto the image"
    items.append(CheckItem("classwise-pullback-iso", ok, detail))

    ok = True
    for A in battery:
        if structures.wdp_check(A, A.language, A.universe) is not None:
            ok = False
    items.append(CheckItem("no-duplicate-of-everything", ok, "whole-universe subsets never duplicate"))
    return items


def suite_logic(max_n=3):
    items = []
    slo = linear_order_theory()

    ok, detail = True, ""
    for size in range(1, max_n + 1):
        pts = point_names(size)
        ours = {m.key() for m in models(slo, pts)}
        brute = {m.key() for m in brute_models(slo, pts)}
        if ours != brute:
            ok, detail = False, f"linear order models differ at size {size}"
    two = exactly_two_theory()
    for size in range(1, max_n + 1):
        if len(models(two, point_names(size))) != len(brute_models(two, point_names(size))):
            ok, detail = False, "exactly-two models differ"
    items.append(CheckItem("model-search-vs-brute-force", ok, detail))

    ok, detail = True, ""
    phi = Exists("x", Forall("y", disj([Eq("x", "y"), Atom("<", ("x", "y"))])))
    for size in range(1, max_n + 1):
        for A in models(slo, point_names(size)):
            perm = dict(zip(A.universe, reversed(A.universe)))
            B = pushforward(A, perm)
            if eval_formula(A, phi) != eval_formula(B, phi):
                ok, detail = False, "evaluation not invariant under pushforward"
    items.append(CheckItem("eval-pushforward-invariant", ok, detail))

    ok, detail = True, ""
    for E in all_relations_up_to(max_n):
        res = structure_search(E, two)
        oracle = all(len(brute_models(two, block)) > 0 for block in E.classes)
        if res.ok != oracle:
            ok, detail = False, f"search completeness differs at {E!r}"
        if not res.ok and brute_models(two, res.failed_class):
            ok, detail = False, "refusal names a structurable class"
    items.append(CheckItem("search-completeness", ok, detail))

    ok, detail = True, ""
    battery = [truth_theory(), slo, two]
    for a in battery:
        if not implies_star_n(a, a, 3).holds:
            ok, detail = False, "not reflexive"
        for b in battery:
            for c in battery:
                ab, bc, ac = (
                    implies_star_n(a, b, 3).holds,
                    implies_star_n(b, c, 3).holds,
                    implies_star_n(a, c, 3).holds,
                )
                if ab and bc and not ac:
                    ok, detail = False, "not transitive"
    items.append(CheckItem("entailment-preorder", ok, detail))
    return items


def suite_scott(max_n=3):
    items = []

    ok, detail = True, ""
    for E in all_relations_up_to(max_n):
        coded = scott.code_er(E)
        pairs = {(p, g[p]) for g in coded.gmaps for p in E.points}
        if pairs != set(E.pairs()):
            ok, detail = False, f"graph union differs at {E!r}"
        k = coded.bits
        if k < 1 or (len(E.points) > 1 and (1 << k) < len(E.points)):
            ok, detail = False, "bit count too small"
    items.append(CheckItem("coding-covers-relation", ok, detail))

    extended = []
    for E in all_relations_up_to(4):
        extended.append(E)
    ok, detail = True, ""
    for E in extended:
        st = scott.scott_theory(scott.code_er(E))
        theory = st.theory()
        for F in all_relations_up_to(4, prefix="q"):
            if structure_search(F, theory).ok != bool(enumerate_homs(F, E, ["cb"])):
                ok, detail = False, f"bounded correspondence fails at {E!r},{F!r}"
    items.append(CheckItem("structurability-iff-cb-map", ok, detail))

    ok, detail = True, ""
    for E in all_relations_up_to(max_n):
        coded = scott.code_er(E)
        variant_g = []
        depth = len(coded.gmaps)
        for i in range(depth):
            g = {}
            for block in E.classes:
                for t, p in enumerate(block):
                    g[p] = block[(t - i) % len(block)]
            variant_g.append(g)
        alt = scott.CodedER(E, gmaps=variant_g)
        st1 = scott.scott_theory(coded)
        st2 = scott.scott_theory(alt)
        for size in range(1, max_n + 1):
            m1 = {m.key() for m in models(st1.theory(), point_names(size))}
            m2 = {m.key() for m in models(st2.theory(), point_names(size))}
            if m1 != m2:
                ok, detail = False, f"decomposition variant changes the models at {E!r}"
    items.append(CheckItem("decomposition-invariance", ok, detail))

    ok, detail = True, ""
    checks = 0
    for E in all_relations_up_to(2):
        st = scott.scott_theory(scott.code_er(E))
        variants = st.variant_theories()
        for F in all_relations_up_to(2, prefix="q"):
            ci_homs = enumerate_homs(F, E, ["ci", "hom"])
            ci_structs = [
                A for A in scott.all_structures(st.language, F)
                if holds_classwise(A, variants["cih"].sentence)
            ]
            if len(ci_homs) != len(ci_structs):
                ok, detail = False, f"cih count differs at {E!r},{F!r}"
            plang = variants["smh"].language
            smh_structs = [
                A for A in scott.all_structures(plang, F)
                if holds_classwise(A, variants["smh"].sentence)
            ]
            decoded_smh = {
                tuple(sorted(scott.decode_raw(st, StructuredER(F, A.structure.reduct(st.language))).items()))
                for A in smh_structs
            }
            homs = {f.as_pairs() for f in all_maps(F, E) if HOM in classify_hom(f)}
            if decoded_smh != homs:
                ok, detail = False, f"smh decodes differ at {E!r},{F!r}"
            checks += 1
            cssmh_structs = [
                A for A in scott.all_structures(plang, F)
                if holds_classwise(A, variants["cssmh"].sentence)
            ]
            cs_homs = [f for f in all_maps(F, E) if {HOM, CS} <= classify_hom(f).flags]
            decoded_cs = {
                tuple(sorted(scott.decode_raw(st, StructuredER(F, A.structure.reduct(st.language))).items()))
                for A in cssmh_structs
            }
            if decoded_cs != {f.as_pairs() for f in cs_homs}:
                ok, detail = False, f"cssmh decodes differ at {E!r},{F!r}"
    items.append(CheckItem("variant-semantics", ok, detail or f"{checks} pairs"))
    return items


def suite_constructions(max_n=3):
    items = []
    slo = linear_order_theory()

    ok, detail = True, ""
    for E in all_relations_up_to(max_n):
        R = ltimes(E, slo)
        for block, ms in R.class_models.items():
            expected = len(brute_models(slo, block))
            if len(ms) != expected:
                ok, detail = False, "per-class model count differs from brute force"
    items.append(CheckItem("ltimes-class-counts", ok, detail))

    ok, detail = True, ""
    instances = 0
    for E in [e for e in all_relations_up_to(max_n) if len({len(b) for b in e.classes}) == 1]:
        coded = scott.code_er(E)
        enum = coded.enumeration()
        size = len(E.classes[0])
        mods = models(slo, point_names(size, "u"))
        fiber_names = [str(i) for i in range(len(mods))]
        values = {}
        for x, y in E.pairs():
            # the action on models of re-reading a class structure through
            # the enumeration at y instead of the one at x
            reindex = {
                mods[0].universe[j]: mods[0].universe[enum[y].index(enum[x][j])]
                for j in range(size)
            }
            perm = {}
            for i, model in enumerate(mods):
                perm[str(i)] = str(mods.index(pushforward(model, reindex)))
            values[(x, y)] = perm
        beta = Cocycle(E, tuple(fiber_names), values)
        sk = skew_product(E, beta)
        lt = ltimes(E, slo)
        if er_isomorphism(sk.space, lt.space) is None:
            ok, detail = False, f"skew/expansion spaces differ over {E!r}"
        S1 = fiber.FiberSpace(sk.space, E, sk.projection)
        S2 = fiber.FiberSpace(lt.space, E, lt.projection)
        if fiber.fiberwise_iso(S1, S2) is None:
            ok, detail = False, f"skew/expansion not isomorphic over the base at {E!r}"
        instances += 1
    items.append(CheckItem("skew-matches-expansion", ok, detail or f"{instances} uniform bases"))

    ok, detail = True, ""
    count = 0
    for E in all_relations_up_to(2):
        for F in all_relations_up_to(2, prefix="q"):
            t = tensor(E, F)
            for G in all_relations_up_to(3, prefix="r"):
                fs = enumerate_homs(G, E, ["cb"])
                gs = enumerate_homs(G, F, ["cb"])
                if not fs or not gs:
                    continue
                mediators = enumerate_homs(G, t.space, ["cb"])
                for f in fs:
                    for g in gs:
                        paired = pairing(t, f, g)
                        matches = [
                            h for h in mediators
                            if t.proj1.compose(h) == f and t.proj2.compose(h) == g
                        ]
                        if matches != [paired]:
                            ok, detail = False, f"{len(matches)} mediating maps"
                        count += 1
    items.append(CheckItem("tensor-universal-property", ok, detail or f"{count} instances"))
    return items


def suite_fiber(max_n=3):
    items = []
    ok, detail = True, ""
    for S in _small_fiber_spaces(2, 2):
        parts = fiber.partition_by_fiber_size(S)
        total_points = sum(len(p.total.points) for p in parts)
        if total_points != len(S.total.points):
            ok, detail = False, "size partition lost points"
        for part in parts:
            if part.uniform_size() is None:
                ok, detail = False, "size partition not uniform"
    items.append(CheckItem("fiber-size-partition", ok, detail))

    theory = linear_order_theory()
    ok, detail = True, ""
    for S in _small_fiber_spaces(2, 2):
        R = fiber.fiber_ltimes(S, theory)
        fiber.check_fiber_structure(R.space, R.structure, theory.sentence)
    items.append(CheckItem("fiber-structure-axioms", ok, detail))
    return items


def suite_theoryalg(max_n=3):
    items = []
    battery = standard_battery()[:4]

    ok, detail = True, ""
    for s in battery:
        for t in battery:
            both, _ = theoryalg.theory_tensor([s, t])
            for E in all_relations_up_to(max_n):
                expected = structurable(E, s) and structurable(E, t)
                if structurable(E, both) != expected:
                    ok, detail = False, f"tensor semantics at {s.name},{t.name},{E!r}"
            summed, _ = theoryalg.theory_oplus([s, t])
            for E in all_relations_up_to(max_n):
                expected = all(
                    satisfiable(s, len(block)) or satisfiable(t, len(block))
                    for block in E.classes
                )
                if structurable(E, summed) != expected:
                    ok, detail = False, f"sum semantics at {s.name},{t.name},{E!r}"
    items.append(CheckItem("tensor-sum-structurability", ok, detail))

    ok, detail = True, ""
    s, t = battery[1], battery[2]
    both, injections = theoryalg.theory_tensor([s, t])
    target = both
    for i, inj in enumerate(injections):
        fac = [s, t][i]
        applied = theoryalg.interp_apply(inj, fac.sentence)
        for size in range(1, max_n + 1):
            for A in models(target, point_names(size)):
                if not eval_formula(A, applied):
                    ok, detail = False, "injection does not preserve the factor sentence"
    summed, projections = theoryalg.theory_oplus([s, t])
    for i, proj in enumerate(projections):
        fac = [s, t][i]
        applied = theoryalg.interp_apply(proj, summed.sentence)
        for size in range(1, max_n + 1):
            for A in models(fac, point_names(size)):
                if not eval_formula(A, applied):
                    ok, detail = False, "projection of the sum sentence fails in a factor model"
    items.append(CheckItem("tensor-sum-canonical-maps", ok, detail))

    ok, detail = True, ""
    base = Theory(Language([("P", 1)]), TRUE, name="unary")
    one = theoryalg.identity_interp(base)
    a = theoryalg.Interpretation(Language([("R", 1)]), base, {"R": Not(Atom("P", ("x1",)))})
    if not theoryalg.interp_equiv(theoryalg.compose_interp(one, a), a, max_n):
        ok, detail = False, "left unit law fails"
    b = theoryalg.Interpretation(
        Language([("S", 1)]),
        Theory(Language([("R", 1)]), TRUE, name="r"),
        {"S": Not(Atom("R", ("x1",)))},
    )
    ab = theoryalg.compose_interp(a, b)
    if theoryalg.interp_apply(ab, Atom("S", ("x1",))) != Not(Not(Atom("P", ("x1",)))):
        ok, detail = False, "composition is not textual nesting"
    items.append(CheckItem("interpretation-category-laws", ok, detail))

    ok, detail = True, ""
    pool = [
        Atom("P", ("x1",)),
        Not(Atom("P", ("x1",))),
        TRUE,
        FALSE,
        Eq("x1", "x1"),
        Exists("y", Atom("P", ("y",))),
    ]
    s_un = Theory(Language([("A", 1)]), TRUE, name="a")
    t_un = Theory(Language([("B", 1)]), TRUE, name="b")
    both, (i1, i2) = theoryalg.theory_tensor([s_un, t_un])
    target = Theory(Language([("P", 1)]), TRUE, name="p")
    alpha1 = theoryalg.Interpretation(s_un.language, target, {"A": pool[0]})
    alpha2 = theoryalg.Interpretation(t_un.language, target, {"B": pool[1]})
    mediating = theoryalg.Interpretation(
        both.language, target, {"A#0": pool[0], "B#1": pool[1]}
    )
    if not theoryalg.interp_equiv(
        theoryalg.compose_interp(mediating, i1), alpha1, 2
    ) or not theoryalg.interp_equiv(theoryalg.compose_interp(mediating, i2), alpha2, 2):
        ok, detail = False, "mediating map does not commute"
    for name in ("A#0", "B#1"):
        canonical = mediating.mapping[name]
        agreeing = 0
        for candidate in pool:
            trial = theoryalg.Interpretation(
                both.language,
                target,
                {**mediating.mapping, name: candidate},
            )
            commutes = theoryalg.interp_equiv(
                theoryalg.compose_interp(trial, i1), alpha1, 2
            ) and theoryalg.interp_equiv(theoryalg.compose_interp(trial, i2), alpha2, 2)
            semant_equal = theoryalg.interp_equiv(
                theoryalg.Interpretation(Language([(name, 1)]), target, {name: candidate}),
                theoryalg.Interpretation(Language([(name, 1)]), target, {name: canonical}),
                2,
            )
            if commutes != semant_equal:
                ok, detail = False, f"uniqueness fails at {name} (depth-bounded pool)"
            if commutes:
                agreeing += 1
        if agreeing == 0:
            ok, detail = False, "no commuting candidate found"
    items.append(CheckItem("tensor-couniversality-bounded", ok, detail or "pool of depth <= 1 formulas"))

    ok, detail = True, ""
    ct = theoryalg.theory_cross(linear_order_theory(), exactly_two_theory())
    for n in (1, 2, 3, 4):
        pts = point_names(n, "g")
        encoded = theoryalg.cross_models_via_encode(ct, pts)
        formula_count = theoryalg.cross_model_count_formula(ct, n)
        if len(encoded) != formula_count:
            ok, detail = False, f"count mismatch at n={n}"
        for A in encoded:
            E1, E2, B, C = theoryalg.cross_decode(ct, A)
            if theoryalg.cross_encode(ct, E1, E2, B, C) != A:
                ok, detail = False, "decode/encode round trip failed"
    ct_small = theoryalg.theory_cross(exactly_two_theory(), singleton_theory())
    for n in (1, 2):
        via_encode = {A.key() for A in theoryalg.cross_models_via_encode(ct_small, point_names(n, "g"))}
        via_brute = {A.key() for A in brute_models(ct_small.theory, point_names(n, "g"))}
        if via_encode != via_brute:
            ok, detail = False, f"encode misses models at n={n}"
    for n in (2, 3):
        via_encode = {A.key() for A in theoryalg.cross_models_via_encode(ct_small, point_names(n, "g"))}
        via_staged = {A.key() for A in models(ct_small.theory, point_names(n, "g"))}
        if via_encode != via_staged:
            ok, detail = False, f"encode differs from staged search at n={n}"
    items.append(CheckItem("cross-product-models", ok, detail))

    ok, detail = True, ""
    ct = theoryalg.theory_cross(linear_order_theory(), exactly_two_theory())
    for n in (2, 4):
        ms = theoryalg.cross_models_via_encode(ct, point_names(n, "g"))
        for A, B in itertools.combinations(ms, 2):
            if isomorphic(A, B) is None:
                ok, detail = False, f"categoricity fails at size {n}"
                break
    items.append(CheckItem("cross-preserves-categoricity", ok, detail))
    return items


def suite_lattice(seed=7):
    items = []
    ok, detail = True, ""
    for L in _lattice_corpus():
        if len(L.elements) <= 12:
            if lattice.prime_filters(L) != lattice.prime_filters_brute(L):
                ok, detail = False, "principal-filter shortcut differs from enumeration"
    items.append(CheckItem("prime-filters-vs-brute", ok, detail))

    ok, detail = True, ""
    L = lattice.FinLattice.boolean(2)
    ops = {
        "identity": {x: x for x in L.elements},
        "constant-top": {x: L.top() for x in L.elements},
        "meet-with-a": {x: L.meet(x, "s10") for x in L.elements},
    }
    for name, e in ops.items():
        rep = lattice.check_projection(L, e)
        if not rep.projection:
            ok, detail = False, f"{name} misclassified"
            continue
        retract = lattice.retract_iso(L, e)
        if not retract.ok:
            ok, detail = False, f"retract bijection fails for {name}"
    bad = {x: L.top() for x in L.elements}
    bad[L.top()] = L.bottom()
    rep = lattice.check_projection(L, bad)
    if rep.projection:
        ok, detail = False, "non-idempotent map accepted"
    items.append(CheckItem("projection-retract", ok, detail))

    ok, detail = True, ""
    rels = [FinER.delta(point_names(1)), FinER.delta(point_names(2)), FinER.indiscrete(point_names(2))]
    cat = lattice.catalog_poset(rels)
    if not cat.cb_matrix[("E1", "E0")]:
        ok, detail = False, "two-point equality should map to the point"
    if cat.cb_matrix[("E2", "E0")]:
        ok, detail = False, "a two-point class cannot map class-bijectively to a point"
    if not all(item[-1] for item in cat.items):
        ok, detail = False, "a catalog structure check failed"
    items.append(CheckItem("catalog-order", ok, detail))
    return items


def suite_combinat(seed=7):
    items = []
    ok, detail = True, ""
    for E in all_relations_up_to(4):
        if any(len(b) < 2 for b in E.classes):
            continue
        g = combinat.bipartite_graphing(E)
        if not combinat.is_bipartite_per_class(g):
            ok, detail = False, f"not bipartite at {E!r}"
        for block in E.classes:
            half = len(block) // 2
            expected = half * (len(block) - half)
            got = sum(1 for e in g.edges if set(e) <= set(block))
            if got != expected:
                ok, detail = False, "edge count differs from the complete split"
    items.append(CheckItem("bipartite-graphing", ok, detail))

    ok, detail = True, ""
    fam = combinat.SetFamily(
        [str(i) for i in range(1, 10)], [{"1", str(i)} for i in range(2, 10)]
    )
    trace = combinat.family_reduce(fam, 4)
    if not trace.ok or trace.core != frozenset({"1"}) or [s.m for s in trace.stages] != [1]:
        ok, detail = False, f"star family trace wrong: {trace.status}"
    triangle = combinat.SetFamily(["1", "2", "3"], [{"1", "2"}, {"1", "3"}, {"2", "3"}])
    trace = combinat.family_reduce(triangle, 4)
    if not trace.ok or trace.core != frozenset({"1", "2", "3"}) or trace.stages:
        ok, detail = False, "small family should be terminal as-is"
    single = combinat.SetFamily(["1", "2"], [{"1"}])
    if combinat.finite_core(single, 4) != frozenset({"1"}):
        ok, detail = False, "singleton family core wrong"
    items.append(CheckItem("family-reduction-examples", ok, detail))
    return items


# ---------------------------------------------------------------------------
# Suite registry


CRITERIA = {
    1: ("thm-universal-expansion", criterion_1),
    2: ("structure-map-correspondence", criterion_2),
    3: ("semantic-table", criterion_3),
    4: ("product-identities", criterion_4),
    5: ("factorizations", criterion_5),
    6: ("bounded-lattice-laws", criterion_6),
    7: ("fiber-spaces", criterion_7),
    8: ("interpretations", criterion_8),
    9: ("lattice-representation", criterion_9),
    10: ("combinatorics", criterion_10),
}


SUITES = {
    "eqrel": lambda max_n, seed: suite_eqrel(min(max_n, 3)),
    "structures": lambda max_n, seed: suite_structures(),
    "logic": lambda max_n, seed: suite_logic(min(max_n, 3)),
    "scott": lambda max_n, seed: criterion_2(min(max_n, 3)) + criterion_3(min(max_n, 3)) + suite_scott(min(max_n, 3)),
    "constructions": lambda max_n, seed: criterion_1(min(max_n, 3), min(max_n + 1, 4)) + criterion_4(min(max_n, 3)) + suite_constructions(min(max_n, 3)),
    "factorize": lambda max_n, seed: criterion_5(min(max_n, 4), min(max_n, 3)),
    "fiber": lambda max_n, seed: criterion_7(min(max_n, 3)) + suite_fiber(min(max_n, 3)),
    "theoryalg": lambda max_n, seed: criterion_6(min(max_n + 1, 4)) + criterion_8(min(max_n, 3)) + suite_theoryalg(min(max_n, 3)),
    "lattice": lambda max_n, seed: criterion_9(seed) + suite_lattice(seed),
    "combinat": lambda max_n, seed: criterion_10(seed) + suite_combinat(seed),
}


def run_suite(name, max_n=3, seed=7):
    if name == "all":
        items = []
        for key in sorted(SUITES):
            for item in SUITES[key](max_n, seed):
                items.append(CheckItem(f"{key}/{item.name}", item.passed, item.detail))
        return items
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](max_n, seed)
