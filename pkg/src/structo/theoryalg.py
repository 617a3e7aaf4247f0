"""Interpretations between theories and the algebra of theories.

An interpretation sends each relation symbol of a source language to a
formula over a target theory, with free variables among x1..xn; applying
it to a formula substitutes with capture-avoiding renaming, and applying
it to a model produces the reduct whose relations are defined by the
images.  Tensor (conjunction over renamed-apart languages) and oplus
(tagged disjoint union with marker predicates) are the coproduct and
product for interpretations; cross builds product structures on a grid of
two transverse equivalence relations; Morleyization flattens a sentence to
a forall-exists form over defined symbols, conservatively.
"""

import itertools
from dataclasses import dataclass

from .errors import InputError, ContractViolation
from .eqrel import check_point_name
from .structures import Language, FinStructure, EMPTY_LANGUAGE
from .eqrel import FinER, set_partitions
from . import logic
from .logic import (
    Atom, Eq, Truth, Falsity, Not, And, Or, Exists, Forall, TRUE, FALSE,
    conj, disj, implies, iff, free_vars, all_vars, rel_symbols, validate_formula,
    Theory, eval_formula, models, print_formula,
)


def var(i):
    """Canonical interpretation variable x1, x2, ..."""
    return f"x{i}"


def _fresh(avoid):
    i = 0
    while f"v{i}" in avoid:
        i += 1
    return f"v{i}"


def subst_vars(phi, mapping):
    """Substitute variables for variables, renaming bound variables that
    would capture an incoming name."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(mapping.get(a, a) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(mapping.get(phi.left, phi.left), mapping.get(phi.right, phi.right))
    if isinstance(phi, (Truth, Falsity)):
        return phi
    if isinstance(phi, Not):
        return Not(subst_vars(phi.body, mapping))
    if isinstance(phi, And):
        return And(tuple(subst_vars(p, mapping) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(subst_vars(p, mapping) for p in phi.parts))
    if isinstance(phi, (Exists, Forall)):
        cls = type(phi)
        live = {k: v for k, v in mapping.items() if k in free_vars(phi.body) and k != phi.var}
        if phi.var in live.values():
            avoid = set(live.values()) | all_vars(phi.body) | set(live)
            fresh = _fresh(avoid)
            body = subst_vars(phi.body, {phi.var: fresh})
            return cls(fresh, subst_vars(body, live))
        return cls(phi.var, subst_vars(phi.body, live))
    raise InputError(f"not a formula: {phi!r}")


def rename_rels(phi, mapping):
    """Rename relation symbols throughout a formula."""
    if isinstance(phi, Atom):
        return Atom(mapping.get(phi.rel, phi.rel), phi.args)
    if isinstance(phi, (Eq, Truth, Falsity)):
        return phi
    if isinstance(phi, Not):
        return Not(rename_rels(phi.body, mapping))
    if isinstance(phi, And):
        return And(tuple(rename_rels(p, mapping) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(rename_rels(p, mapping) for p in phi.parts))
    if isinstance(phi, Exists):
        return Exists(phi.var, rename_rels(phi.body, mapping))
    if isinstance(phi, Forall):
        return Forall(phi.var, rename_rels(phi.body, mapping))
    raise InputError(f"not a formula: {phi!r}")


class Interpretation:
    """Assignment of a defining formula over a target theory to every
    relation symbol of a source language."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source, target, mapping):
        if not isinstance(source, Language) or not isinstance(target, Theory):
            raise InputError("Interpretation needs a source Language and target Theory")
        mp = {}
        for name, ar in source.symbols:
            if name not in mapping:
                raise InputError(f"no defining formula for {name!r}")
            phi = mapping[name]
            validate_formula(target.language, phi)
            allowed = {var(i + 1) for i in range(ar)}
            if not free_vars(phi) <= allowed:
                raise InputError(
                    f"free variables of the formula for {name!r} must lie in x1..x{ar}"
                )
            mp[name] = phi
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", mp)

    def __setattr__(self, name, value):
        raise AttributeError("Interpretation is immutable")

    def formula_for(self, name):
        try:
            return self.mapping[name]
        except KeyError:
            raise InputError(f"unknown relation symbol {name!r}") from None

    def __repr__(self):
        body = "; ".join(f"{n} -> {print_formula(f)}" for n, f in sorted(self.mapping.items()))
        return f"Interpretation[{body}]"


def interp_apply(alpha, phi):
    """Substitute the interpretation's defining formulas into a formula."""
    if isinstance(phi, Atom):
        body = alpha.formula_for(phi.rel)
        ar = alpha.source.arity(phi.rel)
        if len(phi.args) != ar:
            raise InputError(f"arity mismatch at {phi.rel!r}")
        return subst_vars(body, {var(i + 1): a for i, a in enumerate(phi.args)})
    if isinstance(phi, (Eq, Truth, Falsity)):
        return phi
    if isinstance(phi, Not):
        return Not(interp_apply(alpha, phi.body))
    if isinstance(phi, And):
        return And(tuple(interp_apply(alpha, p) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(interp_apply(alpha, p) for p in phi.parts))
    if isinstance(phi, Exists):
        return Exists(phi.var, interp_apply(alpha, phi.body))
    if isinstance(phi, Forall):
        return Forall(phi.var, interp_apply(alpha, phi.body))
    raise InputError(f"not a formula: {phi!r}")


def alpha_reduct(alpha, A):
    """Model of the target -> structure over the source whose relations are
    the interpretations of the defining formulas."""
    if A.language != alpha.target.language:
        raise InputError("structure is not over the target language")
    rels = {}
    for name, ar in alpha.source.symbols:
        body = alpha.mapping[name]
        out = []
        for t in itertools.product(A.universe, repeat=ar):
            if eval_formula(A, body, {var(i + 1): p for i, p in enumerate(t)}):
                out.append(t)
        rels[name] = out
    return FinStructure(alpha.source, A.universe, rels)


def check_substitution_identity(alpha, phi, A):
    """The fundamental identity: evaluating a formula in the reduct equals
    evaluating its substituted image in the model, for all assignments."""
    fv = sorted(free_vars(phi))
    reduct = alpha_reduct(alpha, A)
    applied = interp_apply(alpha, phi)
    for vals in itertools.product(A.universe, repeat=len(fv)):
        env = dict(zip(fv, vals))
        if eval_formula(reduct, phi, env) != eval_formula(A, applied, env):
            return False
    return True


def identity_interp(theory):
    return Interpretation(
        theory.language,
        theory,
        {
            name: Atom(name, tuple(var(i + 1) for i in range(ar)))
            for name, ar in theory.language.symbols
        },
    )


def compose_interp(beta, alpha):
    """(beta o alpha)(R) substitutes beta into alpha's defining formulas;
    requires alpha's target language to be beta's source."""
    if alpha.target.language != beta.source:
        raise InputError("interpretations are not composable")
    return Interpretation(
        alpha.source,
        beta.target,
        {name: interp_apply(beta, phi) for name, phi in alpha.mapping.items()},
    )


def interp_equiv(alpha, beta, n):
    """Bounded semantic equivalence: equal reducts on every model of the
    shared target with at most n points."""
    if alpha.source != beta.source or alpha.target != beta.target:
        return False
    for size in range(1, n + 1):
        for A in models(alpha.target, [f"q{i}" for i in range(size)]):
            if alpha_reduct(alpha, A) != alpha_reduct(beta, A):
                return False
    return True


# ---------------------------------------------------------------------------
# Tensor and oplus


def _renamed(theories):
    out = []
    for i, t in enumerate(theories):
        ren = {name: f"{name}#{i}" for name, _ in t.language.symbols}
        lang = Language([(ren[name], ar) for name, ar in t.language.symbols])
        out.append((t, ren, lang, rename_rels(t.sentence, ren)))
    return out


def theory_tensor(theories):
    """Conjunction over disjointly renamed languages, with the injections
    as interpretations.  A model is the same thing as one model of each
    factor on a shared universe."""
    theories = list(theories)
    if not theories:
        return Theory(EMPTY_LANGUAGE, TRUE, name="tensor()"), []
    parts = _renamed(theories)
    lang = Language([s for _, _, l, _ in parts for s in l.symbols])
    sentence = conj([s for _, _, _, s in parts])
    combined = Theory(lang, sentence, name="(" + "*".join(t.name or "?" for t in theories) + ")")
    injections = [
        Interpretation(
            t.language,
            combined,
            {
                name: Atom(ren[name], tuple(var(i + 1) for i in range(ar)))
                for name, ar in t.language.symbols
            },
        )
        for t, ren, _, _ in parts
    ]
    return combined, injections


def _all_empty(lang_symbols):
    out = []
    for name, ar in lang_symbols:
        vs = tuple(var(i + 1) for i in range(ar))
        phi = Not(Atom(name, vs))
        for v in reversed(vs):
            phi = Forall(v, phi)
        out.append(phi)
    return out


def theory_oplus(theories):
    """Tagged sum: some marker predicate holds everywhere, that factor's
    sentence holds, and every other factor's symbols (marker included) are
    empty.  Projections substitute truth for the live marker and falsity
    elsewhere."""
    theories = list(theories)
    if not theories:
        return Theory(EMPTY_LANGUAGE, FALSE, name="oplus()"), []
    parts = _renamed(theories)
    used = {s for _, _, l, _ in parts for s, _ in l.symbols}
    markers = []
    for i in range(len(parts)):
        cand = f"T#{i}"
        while cand in used:
            cand += "'"
        used.add(cand)
        markers.append(cand)
    symbols = []
    for i, (_, _, l, _) in enumerate(parts):
        symbols.extend(l.symbols)
        symbols.append((markers[i], 1))
    lang = Language(symbols)
    disjuncts = []
    for i, (_, _, l, s) in enumerate(parts):
        clauses = [Forall("x", Atom(markers[i], ("x",))), s]
        for j, (_, _, lj, _) in enumerate(parts):
            if j == i:
                continue
            clauses.extend(_all_empty(list(lj.symbols) + [(markers[j], 1)]))
        disjuncts.append(conj(clauses))
    combined = Theory(
        lang, disj(disjuncts), name="(" + "+".join(t.name or "?" for t in theories) + ")"
    )
    projections = []
    for i, (t, ren, _, _) in enumerate(parts):
        mapping = {}
        for name, ar in lang.symbols:
            vs = tuple(var(k + 1) for k in range(ar))
            if name == markers[i]:
                mapping[name] = TRUE
            elif name in {ren[n] for n, _ in t.language.symbols}:
                original = next(n for n, _ in t.language.symbols if ren[n] == name)
                mapping[name] = Atom(original, vs)
            else:
                mapping[name] = FALSE
        projections.append(
            Interpretation(Language(lang.symbols), t, mapping)
        )
    return combined, projections


# ---------------------------------------------------------------------------
# Cross product of theories


def relativize_eq(phi, eqrel_symbol):
    """Replace equality by membership in a binary relation symbol; used to
    state satisfaction on a quotient without leaving the original universe."""
    if isinstance(phi, Eq):
        return Atom(eqrel_symbol, (phi.left, phi.right))
    if isinstance(phi, (Atom, Truth, Falsity)):
        return phi
    if isinstance(phi, Not):
        return Not(relativize_eq(phi.body, eqrel_symbol))
    if isinstance(phi, And):
        return And(tuple(relativize_eq(p, eqrel_symbol) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(relativize_eq(p, eqrel_symbol) for p in phi.parts))
    if isinstance(phi, Exists):
        return Exists(phi.var, relativize_eq(phi.body, eqrel_symbol))
    if isinstance(phi, Forall):
        return Forall(phi.var, relativize_eq(phi.body, eqrel_symbol))
    raise InputError(f"not a formula: {phi!r}")


def _equivalence_axioms(R):
    a = Forall("x", Atom(R, ("x", "x")))
    b = Forall("x", Forall("y", implies(Atom(R, ("x", "y")), Atom(R, ("y", "x")))))
    c = Forall(
        "x",
        Forall(
            "y",
            Forall(
                "z",
                implies(conj([Atom(R, ("x", "y")), Atom(R, ("y", "z"))]), Atom(R, ("x", "z"))),
            ),
        ),
    )
    return [a, b, c]


def _invariance_axiom(name, ar, R):
    xs = [f"x{i+1}" for i in range(ar)]
    ys = [f"y{i+1}" for i in range(ar)]
    prem = conj([Atom(R, (x, y)) for x, y in zip(xs, ys)])
    concl = iff(Atom(name, tuple(xs)), Atom(name, tuple(ys)))
    body = implies(prem, concl)
    for v in reversed(xs + ys):
        body = Forall(v, body)
    return body


@dataclass
class CrossTheory:
    """Product-structure theory of two factors, with the grid decomposition
    helpers needed to encode and decode its models."""

    theory: Theory
    sigma: Theory
    tau: Theory
    left_rename: dict
    right_rename: dict
    r1: str
    r2: str


def theory_cross(sigma, tau):
    """Two transverse equivalence relations whose classes meet in single
    points, a factor-invariant structure inducing a model of the first
    theory on one quotient and of the second on the other."""
    lren = {name: f"{name}#l" for name, _ in sigma.language.symbols}
    rren = {name: f"{name}#r" for name, _ in tau.language.symbols}
    used = set(lren.values()) | set(rren.values())
    r1, r2 = "Q#1", "Q#2"
    while r1 in used:
        r1 += "'"
    used.add(r1)
    while r2 in used:
        r2 += "'"
    symbols = (
        [(lren[n], a) for n, a in sigma.language.symbols]
        + [(rren[n], a) for n, a in tau.language.symbols]
        + [(r1, 2), (r2, 2)]
    )
    lang = Language(symbols)
    clauses = _equivalence_axioms(r1) + _equivalence_axioms(r2)
    meet_one = Forall(
        "x",
        Forall(
            "y",
            Exists(
                "z",
                conj(
                    [
                        Atom(r1, ("x", "z")),
                        Atom(r2, ("y", "z")),
                        Forall(
                            "w",
                            implies(
                                conj([Atom(r1, ("x", "w")), Atom(r2, ("y", "w"))]),
                                Eq("w", "z"),
                            ),
                        ),
                    ]
                ),
            ),
        ),
    )
    clauses.append(meet_one)
    for name, ar in sigma.language.symbols:
        clauses.append(_invariance_axiom(lren[name], ar, r1))
    for name, ar in tau.language.symbols:
        clauses.append(_invariance_axiom(rren[name], ar, r2))
    clauses.append(relativize_eq(rename_rels(sigma.sentence, lren), r1))
    clauses.append(relativize_eq(rename_rels(tau.sentence, rren), r2))
    theory = Theory(
        lang, conj(clauses), name=f"({sigma.name or '?'}x{tau.name or '?'})"
    )
    return CrossTheory(theory, sigma, tau, lren, rren, r1, r2)


def grid_pairs(points):
    """All pairs of partitions of the points whose classes meet in exactly
    one point each."""
    points = tuple(points)
    out = []
    for p1 in set_partitions(points):
        for p2 in set_partitions(points):
            if _is_grid(p1, p2):
                out.append((FinER(p1), FinER(p2)))
    return out


def _is_grid(p1, p2):
    for b1 in p1:
        for b2 in p2:
            if len(set(b1) & set(b2)) != 1:
                return False
    return True


def cross_encode(ct, E1, E2, B, C):
    """Build the product-structure model from a grid (E1, E2), a model of
    the first factor on E1's classes (named by minimal members), and a
    model of the second on E2's classes."""
    if E1.points != E2.points:
        raise InputError("grid partitions must share their points")
    if not _is_grid(E1.classes, E2.classes):
        raise InputError("partitions do not form a grid")
    reps1 = {p: E1.class_of(p)[0] for p in E1.points}
    reps2 = {p: E2.class_of(p)[0] for p in E2.points}
    if tuple(sorted({reps1[p] for p in E1.points})) != B.universe:
        raise InputError("first factor model must live on the first quotient")
    if tuple(sorted({reps2[p] for p in E2.points})) != C.universe:
        raise InputError("second factor model must live on the second quotient")
    rels = {}
    for name, ar in ct.sigma.language.symbols:
        have = B.relations[name]
        rels[ct.left_rename[name]] = [
            t
            for t in itertools.product(E1.points, repeat=ar)
            if tuple(reps1[p] for p in t) in have
        ]
    for name, ar in ct.tau.language.symbols:
        have = C.relations[name]
        rels[ct.right_rename[name]] = [
            t
            for t in itertools.product(E2.points, repeat=ar)
            if tuple(reps2[p] for p in t) in have
        ]
    rels[ct.r1] = list(E1.pairs())
    rels[ct.r2] = list(E2.pairs())
    return FinStructure(ct.theory.language, E1.points, rels)


def cross_decode(ct, A):
    """Split a model of the product-structure theory back into its grid and
    quotient models; re-encoding reproduces the model."""
    if A.language != ct.theory.language:
        raise InputError("structure is not over the product language")
    if not eval_formula(A, ct.theory.sentence):
        raise InputError("structure does not satisfy the product theory")
    E1 = _er_from_pairs(A.universe, A.rel(ct.r1))
    E2 = _er_from_pairs(A.universe, A.rel(ct.r2))
    reps1 = {p: E1.class_of(p)[0] for p in E1.points}
    reps2 = {p: E2.class_of(p)[0] for p in E2.points}
    u1 = sorted({reps1[p] for p in A.universe})
    u2 = sorted({reps2[p] for p in A.universe})
    rels1 = {
        name: {
            tuple(reps1[p] for p in t)
            for t in A.rel(ct.left_rename[name])
        }
        for name, _ in ct.sigma.language.symbols
    }
    rels2 = {
        name: {
            tuple(reps2[p] for p in t)
            for t in A.rel(ct.right_rename[name])
        }
        for name, _ in ct.tau.language.symbols
    }
    B = FinStructure(ct.sigma.language, u1, {k: sorted(v) for k, v in rels1.items()})
    C = FinStructure(ct.tau.language, u2, {k: sorted(v) for k, v in rels2.items()})
    if not eval_formula(B, ct.sigma.sentence) or not eval_formula(C, ct.tau.sentence):
        raise ContractViolation("decoded quotients do not satisfy the factor theories")
    return E1, E2, B, C


def _er_from_pairs(points, pairs):
    pairs = set(pairs)
    blocks = {}
    for p in points:
        rep = min(q for q in points if (p, q) in pairs or (q, p) in pairs or q == p)
        blocks.setdefault(rep, set()).add(p)
    return FinER([sorted(b) for b in blocks.values()])


def cross_models_via_encode(ct, points):
    """Every model of the product theory on the points, produced by
    enumerating grids and factor models and encoding; each result is
    re-checked against the sentence."""
    points = tuple(sorted(points))
    out = []
    for E1, E2 in grid_pairs(points):
        u1 = sorted({E1.class_of(p)[0] for p in points})
        u2 = sorted({E2.class_of(p)[0] for p in points})
        for B in models(ct.sigma, u1):
            for C in models(ct.tau, u2):
                A = cross_encode(ct, E1, E2, B, C)
                if not eval_formula(A, ct.theory.sentence):
                    raise ContractViolation("encoded grid structure fails the product sentence")
                out.append(A)
    if len({a.key() for a in out}) != len(out):
        raise ContractViolation("encoded grid structures are not pairwise distinct")
    return out


def cross_model_count_formula(ct, n):
    """Independent combinatorial count: grids obtained by brute-force
    enumeration of partition pairs, times the factor model counts on the
    quotient sizes."""
    total = 0
    pts = [f"g{i}" for i in range(n)]
    for E1, E2 in grid_pairs(pts):
        a, b = len(E1.classes), len(E2.classes)
        total_here = len(models(ct.sigma, [f"a{i}" for i in range(a)])) * len(
            models(ct.tau, [f"b{i}" for i in range(b)])
        )
        total += total_here
    return total


# ---------------------------------------------------------------------------
# Morleyization


@dataclass
class MorleyResult:
    theory: Theory
    reduct: Interpretation
    defined: tuple  # (symbol, subformula, ordered free variables)
    base: Theory


def _subformulas(phi):
    seen = []

    def rec(p):
        if isinstance(p, (Truth, Falsity)):
            return
        if p not in seen:
            if isinstance(p, Not):
                rec(p.body)
            elif isinstance(p, (And, Or)):
                for q in p.parts:
                    rec(q)
            elif isinstance(p, (Exists, Forall)):
                rec(p.body)
            seen.append(p)

    rec(phi)
    return seen


def morleyize(theory):
    """Conservative flattening: one defined symbol per subformula, axioms
    forcing each to mean its subformula, all in forall/exists prenex over
    quantifier-free matrices; the original symbols survive as a reduct.

    Every model of the source expands uniquely to a model of the result
    (relations of defined symbols are forced bottom-up), and reducts of
    models of the result model the source.
    """
    subs = _subformulas(theory.sentence)
    names = {}
    defined = []
    symbols = list(theory.language.symbols)
    existing = set(theory.language.names())
    for i, phi in enumerate(subs):
        fv = tuple(sorted(free_vars(phi)))
        name = f"D{i}"
        while name in existing:
            name += "'"
        existing.add(name)
        names[phi] = (name, fv)
        symbols.append((name, max(1, len(fv))))
        defined.append((name, phi, fv))
    lang = Language(symbols)

    def head(phi, pad_var):
        name, fv = names[phi]
        args = fv if fv else (pad_var,)
        return Atom(name, args)

    def child(phi, pad_var):
        # how a subformula appears inside its parent's defining axiom
        if isinstance(phi, (Truth, Falsity)):
            return phi
        return head(phi, pad_var)

    def axiom(body):
        # universally close over everything left free, sorted for determinism
        return _close_forall(tuple(sorted(free_vars(body))), body)

    conjuncts = []
    for phi in subs:
        name, fv = names[phi]
        pad = _fresh(set(fv) | all_vars(phi))
        args = fv if fv else (pad,)
        lhs = Atom(name, args)
        if isinstance(phi, (Atom, Eq)):
            conjuncts.append(axiom(iff(lhs, phi)))
        elif isinstance(phi, Not):
            conjuncts.append(axiom(iff(lhs, Not(child(phi.body, pad)))))
        elif isinstance(phi, (And, Or)):
            parts = tuple(child(p, pad) for p in phi.parts)
            step = conj(parts) if isinstance(phi, And) else disj(parts)
            conjuncts.append(axiom(iff(lhs, step)))
        elif isinstance(phi, Exists):
            inner = child(phi.body, pad)
            conjuncts.append(axiom(Exists(phi.var, disj([Not(lhs), inner]))))
            conjuncts.append(axiom(disj([Not(inner), lhs])))
        elif isinstance(phi, Forall):
            inner = child(phi.body, pad)
            conjuncts.append(axiom(disj([Not(lhs), inner])))
            conjuncts.append(axiom(Exists(phi.var, disj([Not(inner), lhs]))))
        else:
            raise ContractViolation(f"unexpected subformula {phi!r}")
    top_name, top_fv = names[theory.sentence]
    pad = "x"
    conjuncts.append(Forall(pad, Atom(top_name, top_fv if top_fv else (pad,))))
    flattened = Theory(lang, conj(conjuncts), name=f"morley({theory.name or '?'})")
    reduct = Interpretation(
        theory.language,
        flattened,
        {
            name: Atom(name, tuple(var(i + 1) for i in range(ar)))
            for name, ar in theory.language.symbols
        },
    )
    return MorleyResult(flattened, reduct, tuple(defined), theory)


def _dedup(vs):
    out = []
    for v in vs:
        if v not in out:
            out.append(v)
    return tuple(out)


def _close_forall(vs, body):
    for v in reversed(_dedup(vs)):
        body = Forall(v, body)
    return body


def is_forall_exists_qf(phi):
    """Shape check: a conjunction of blocks, each universally quantified,
    then at most one existential, then quantifier-free."""

    def qf(p):
        if isinstance(p, (Atom, Eq, Truth, Falsity)):
            return True
        if isinstance(p, Not):
            return qf(p.body)
        if isinstance(p, (And, Or)):
            return all(qf(q) for q in p.parts)
        return False

    def block(p):
        while isinstance(p, Forall):
            p = p.body
        if isinstance(p, Exists):
            p = p.body
        return qf(p)

    if isinstance(phi, And):
        return all(block(p) for p in phi.parts)
    return block(phi)


def canonical_expansion(result, A):
    """Interpret every defined symbol of a flattened theory by its
    subformula; the unique expansion of a model of the source."""
    base = result.base
    if A.language != base.language:
        raise InputError("structure is not over the source language")
    if not eval_formula(A, base.sentence):
        raise InputError("structure does not satisfy the source theory")
    rels = {name: list(A.relations[name]) for name in base.language.names()}
    for name, phi, fv in result.defined:
        out = []
        if fv:
            for t in itertools.product(A.universe, repeat=len(fv)):
                if eval_formula(A, phi, dict(zip(fv, t))):
                    out.append(t)
        else:
            if eval_formula(A, phi):
                out = [(p,) for p in A.universe]
        rels[name] = out
    return FinStructure(result.theory.language, A.universe, rels)


# ---------------------------------------------------------------------------
# Coequalizer


def coequalizer(alpha, beta):
    """Force two parallel interpretations to agree: the target sentence
    plus, for every source symbol, the universal closure of the
    biconditional of its two defining formulas."""
    if alpha.source != beta.source or alpha.target != beta.target:
        raise InputError("coequalizer needs parallel interpretations")
    clauses = [alpha.target.sentence]
    for name, ar in alpha.source.symbols:
        vs = tuple(var(i + 1) for i in range(ar))
        body = iff(alpha.mapping[name], beta.mapping[name])
        for v in reversed(vs):
            body = Forall(v, body)
        clauses.append(body)
    return Theory(
        alpha.target.language,
        conj(clauses),
        name=f"coeq({alpha.target.name or '?'})",
    )
