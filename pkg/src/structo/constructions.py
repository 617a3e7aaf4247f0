"""Universal constructions on finite equivalence relations.

`ltimes` builds, over a base relation, one new class per (base class,
model of the theory on that class); it is universal among structured
relations with a class-bijective map to the base.  `tensor` is the
categorical product for class-bijective maps: one class per (class, class,
bijection) triple.  Skew products twist a fiber set by a cocycle of
permutations.  `verify_identities` checks the algebraic identities these
constructions satisfy on every small instance.
"""

import itertools
from dataclasses import dataclass, field

from .errors import InputError, ContractViolation
from .eqrel import (
    FinER, PointMap, classify_hom, enumerate_homs, tuple_name, disjoint_sum,
    cross_product, er_isomorphism, all_relations_up_to,
    HOM, CI, CS, CB, INV_EMBEDDING,
)
from .structures import FinStructure, StructuredER, pushforward, classwise_pullback, Language
from . import logic
from .logic import Theory, models, holds_classwise, TRUE, Atom, Eq, Not, Exists, Forall, conj, disj, implies


# ---------------------------------------------------------------------------
# A small battery of test theories reused throughout


def truth_theory():
    return Theory(Language(()), TRUE, name="truth")


def linear_order_theory():
    lt = lambda a, b: Atom("<", (a, b))
    irrefl = Forall("x", Not(lt("x", "x")))
    total = Forall("x", Forall("y", disj([Eq("x", "y"), lt("x", "y"), lt("y", "x")])))
    trans = Forall(
        "x", Forall("y", Forall("z", implies(conj([lt("x", "y"), lt("y", "z")]), lt("x", "z"))))
    )
    return Theory(Language([("<", 2)]), conj([irrefl, total, trans]), name="linear-order")


def one_marked_theory():
    mk = lambda v: Atom("M", (v,))
    sentence = Exists("x", conj([mk("x"), Forall("y", implies(mk("y"), Eq("y", "x")))]))
    return Theory(Language([("M", 1)]), sentence, name="one-marked")


def exactly_two_theory():
    sentence = Exists(
        "x",
        Exists(
            "y",
            conj([Not(Eq("x", "y")), Forall("z", disj([Eq("z", "x"), Eq("z", "y")]))]),
        ),
    )
    return Theory(Language(()), sentence, name="exactly-two")


# ---------------------------------------------------------------------------
# The universal structured relation over a base


@dataclass
class LtimesResult:
    """Base-indexed bundle of the construction: the new space, its
    class-bijective projection, the canonical classwise structure, and the
    per-class model lists (empty lists flag base classes the projection
    misses)."""

    space: FinER
    projection: PointMap
    structure: StructuredER
    base: FinER
    theory: Theory
    class_models: dict
    unstructurable: tuple


def _ltimes_point(x, idx):
    return tuple_name(x, f"m{idx}")


def ltimes(E, theory):
    """One class over each (base class, model on it); a point is a base
    point paired with a canonical model index.  If some base class admits
    no model it simply gets no classes above it, and is reported."""
    class_models = {}
    blocks = []
    rels = {name: [] for name in theory.language.names()}
    mapping = {}
    for block in E.classes:
        ms = models(theory, block)
        class_models[block] = ms
        for idx, model in enumerate(ms):
            new_block = [_ltimes_point(x, idx) for x in block]
            blocks.append(new_block)
            for x in block:
                mapping[_ltimes_point(x, idx)] = x
            for name, tuples in model.relations.items():
                for t in tuples:
                    rels[name].append(tuple(_ltimes_point(p, idx) for p in t))
    space = FinER(blocks)
    projection = PointMap(space, E, mapping)
    structure = StructuredER(space, FinStructure(theory.language, space.points, rels))
    unstructurable = tuple(b for b in E.classes if not class_models[b])
    flags = classify_hom(projection)
    if CB not in flags:
        raise ContractViolation("projection of the structured expansion is not class-bijective")
    if not holds_classwise(structure, theory.sentence):
        raise ContractViolation("canonical structure fails its own sentence")
    for block in E.classes:
        above = sum(1 for b in space.classes if mapping[b[0]] in block)
        if above != len(class_models[block]):
            raise ContractViolation("class count over a base class is off")
    return LtimesResult(space, projection, structure, E, theory, class_models, unstructurable)


def ltimes_universal_map(result, f, A):
    """The unique class-bijective map into the expansion compatible with a
    class-bijective map to the base and a structure satisfying the theory.

    Sends y to (f(y), pushforward of the structure on y's class along f).
    Both defining equations are re-checked on the result.
    """
    E, theory = result.base, result.theory
    if f.codomain != E:
        raise InputError("map does not land in the base relation")
    if CB not in classify_hom(f):
        raise InputError("universal map needs a class-bijective map to the base")
    if not isinstance(A, StructuredER) or A.er != f.domain:
        raise InputError("structure must live on the map's domain")
    if not holds_classwise(A, theory.sentence):
        raise InputError("structure does not satisfy the theory classwise")
    mapping = {}
    for block in f.domain.classes:
        target = E.class_of(f.mapping[block[0]])
        pushed = pushforward(A.class_structure(block), {y: f.mapping[y] for y in block})
        ms = result.class_models[target]
        try:
            idx = ms.index(pushed)
        except ValueError:
            raise ContractViolation("pushforward of a satisfying class structure is not a model") from None
        for y in block:
            mapping[y] = _ltimes_point(f.mapping[y], idx)
    lifted = PointMap(f.domain, result.space, mapping)
    if CB not in classify_hom(lifted):
        raise ContractViolation("lifted map is not class-bijective")
    if result.projection.compose(lifted) != f:
        raise ContractViolation("lifted map does not commute with the projection")
    if classwise_pullback(result.structure.structure, lifted) != A:
        raise ContractViolation("lifted map does not pull the canonical structure back to the input")
    return lifted


# ---------------------------------------------------------------------------
# Tensor product


@dataclass
class TensorResult:
    space: FinER
    proj1: PointMap
    proj2: PointMap
    left: FinER
    right: FinER


def _perm_token(block_from, block_to, bij):
    return ".".join(str(block_to.index(bij[x])) for x in block_from)


def tensor(E, F):
    """Product for class-bijective maps: one class per pair of equal-size
    classes and bijection between them.  Point (x, y, b) is named with the
    bijection written in one-line notation over the target class."""
    blocks = []
    p1, p2 = {}, {}
    for c in E.classes:
        for d in F.classes:
            if len(c) != len(d):
                continue
            for images in itertools.permutations(d):
                bij = dict(zip(c, images))
                token = _perm_token(c, d, bij)
                new_block = []
                for x in c:
                    name = tuple_name(x, bij[x], token)
                    new_block.append(name)
                    p1[name] = x
                    p2[name] = bij[x]
                blocks.append(new_block)
    space = FinER(blocks)
    proj1 = PointMap(space, E, p1)
    proj2 = PointMap(space, F, p2)
    for proj in (proj1, proj2):
        if space.points and CB not in classify_hom(proj):
            raise ContractViolation("tensor projection is not class-bijective")
    return TensorResult(space, proj1, proj2, E, F)


def tensor_class_count(E, F):
    """Predicted number of classes: one per equal-size class pair and
    bijection."""
    total = 0
    for c in E.classes:
        for d in F.classes:
            if len(c) == len(d):
                total += _factorial(len(c))
    return total


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def pairing(result, f, g):
    """The unique class-bijective map into the tensor commuting with both
    projections: w maps to (f(w), g(w), g restricted to w's class composed
    with the inverse of f restricted to it)."""
    if f.domain != g.domain:
        raise InputError("pairing needs two maps from the same relation")
    if f.codomain != result.left or g.codomain != result.right:
        raise InputError("pairing maps must land in the tensor factors")
    for h in (f, g):
        if CB not in classify_hom(h):
            raise InputError("pairing needs class-bijective maps")
    G = f.domain
    mapping = {}
    for block in G.classes:
        c = result.left.class_of(f.mapping[block[0]])
        d = result.right.class_of(g.mapping[block[0]])
        inv_f = {f.mapping[w]: w for w in block}
        bij = {x: g.mapping[inv_f[x]] for x in c}
        token = _perm_token(c, d, bij)
        for w in block:
            mapping[w] = tuple_name(f.mapping[w], g.mapping[w], token)
    paired = PointMap(G, result.space, mapping)
    if CB not in classify_hom(paired):
        raise ContractViolation("pairing is not class-bijective")
    if result.proj1.compose(paired) != f or result.proj2.compose(paired) != g:
        raise ContractViolation("pairing does not commute with the projections")
    return paired


@dataclass
class TensorCrossReport:
    """How the canonical map tensor -> cross product behaves."""

    map: PointMap
    flags: object
    surjective: bool
    uniform_criterion: bool
    iso: bool


def tensor_vs_cross(E, F):
    """Classify (proj1, proj2) from the tensor to the cross product: always
    class-injective; surjective exactly when all classes of both factors
    share one cardinality; an isomorphism when both factors are equality
    relations."""
    t = tensor(E, F)
    cross, _, _ = cross_product(E, F)
    mapping = {
        pt: tuple_name(t.proj1.mapping[pt], t.proj2.mapping[pt]) for pt in t.space.points
    }
    m = PointMap(t.space, cross, mapping)
    flags = classify_hom(m)
    if t.space.points and HOM in flags and CI not in flags:
        raise ContractViolation("canonical tensor-to-cross map should be class-injective")
    sizes = {len(b) for b in E.classes} | {len(b) for b in F.classes}
    uniform = len(sizes) <= 1
    surjective = m.is_surjective()
    iso = surjective and m.is_injective() and INV_EMBEDDING in flags
    return TensorCrossReport(m, flags, surjective, uniform, iso)


# ---------------------------------------------------------------------------
# Cocycles and skew products


class Cocycle:
    """Permutations of a finite fiber set attached to every related pair,
    satisfying alpha(x,x) = id and alpha(y,z) o alpha(x,y) = alpha(x,z)."""

    __slots__ = ("base", "fiber", "values")

    def __init__(self, base, fiber, values):
        fiber = tuple(fiber)
        if len(set(fiber)) != len(fiber) or not fiber:
            raise InputError("fiber must be a nonempty duplicate-free tuple")
        vals = {}
        fiber_set = set(fiber)
        for block in base.classes:
            for x in block:
                for y in block:
                    if (x, y) not in values:
                        raise InputError(f"no permutation for the related pair ({x},{y})")
                    perm = dict(values[(x, y)])
                    if set(perm) != fiber_set or set(perm.values()) != fiber_set:
                        raise InputError(f"value at ({x},{y}) is not a permutation of the fiber")
                    vals[(x, y)] = perm
        for key in values:
            if key not in vals:
                raise InputError(f"cocycle value given for unrelated pair {key!r}")
        for block in base.classes:
            for x in block:
                if any(vals[(x, x)][y] != y for y in fiber):
                    raise InputError(f"cocycle value at ({x},{x}) is not the identity")
        for block in base.classes:
            for x in block:
                for y in block:
                    for z in block:
                        comp = {v: vals[(y, z)][vals[(x, y)][v]] for v in fiber}
                        if comp != vals[(x, z)]:
                            raise InputError(f"cocycle identity fails at ({x},{y},{z})")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "fiber", fiber)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("Cocycle is immutable")

    def __call__(self, x, y):
        try:
            return self.values[(x, y)]
        except KeyError:
            raise InputError(f"({x},{y}) is not a related pair") from None


def identity_cocycle(E, fiber):
    fiber = tuple(fiber)
    values = {(x, y): {v: v for v in fiber} for x, y in E.pairs()}
    return Cocycle(E, fiber, values)


@dataclass
class SkewResult:
    space: FinER
    projection: PointMap
    base: FinER
    cocycle: Cocycle


def skew_product(E, alpha):
    """Twist the product of the base with the fiber: (x,v) is related to
    (x', alpha(x,x')(v)).  The first projection is class-bijective."""
    if alpha.base != E:
        raise InputError("cocycle lives on a different relation")
    blocks = []
    mapping = {}
    for block in E.classes:
        x0 = block[0]
        for v in alpha.fiber:
            new_block = []
            for x in block:
                name = tuple_name(x, alpha.values[(x0, x)][v])
                new_block.append(name)
                mapping[name] = x
            blocks.append(new_block)
    space = FinER(blocks)
    projection = PointMap(space, E, mapping)
    if CB not in classify_hom(projection):
        raise ContractViolation("skew product projection is not class-bijective")
    return SkewResult(space, projection, E, alpha)


def cocycle_from_enumeration(E, enumeration):
    """The cocycle induced by per-point enumerations of the classes:
    alpha(x,x') sends the position of a point in x's enumeration to its
    position in x''s.  All classes must share one size."""
    sizes = {len(b) for b in E.classes}
    if len(sizes) != 1:
        raise InputError(f"class sizes {sorted(sizes)} are not uniform; partition by size first")
    n = sizes.pop()
    fiber = tuple(str(i) for i in range(n))
    for x in E.points:
        if x not in enumeration:
            raise InputError(f"no enumeration for point {x!r}")
        row = tuple(enumeration[x])
        if sorted(row) != sorted(E.class_of(x)):
            raise InputError(f"enumeration at {x!r} does not list its class")
    values = {}
    for x, y in E.pairs():
        rx, ry = list(enumeration[x]), list(enumeration[y])
        values[(x, y)] = {str(i): str(ry.index(rx[i])) for i in range(n)}
    return Cocycle(E, fiber, values)


# ---------------------------------------------------------------------------
# Identity verification


@dataclass
class CheckItem:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


def _iso_or_none(E, F):
    return er_isomorphism(E, F)


def verify_identities(n, theories=None):
    """Check the construction identities on every relation with at most n
    points: tensor commutativity/associativity, preservation of
    structurability, the exchange laws with the structured expansion, and
    its distribution over disjoint sums."""
    if theories is None:
        theories = [truth_theory(), linear_order_theory(), one_marked_theory()]
    rels = list(all_relations_up_to(n))
    items = []

    bad = None
    for E in rels:
        for F in rels:
            if _iso_or_none(tensor(E, F).space, tensor(F, E).space) is None:
                bad = (E, F)
                break
        if bad:
            break
    items.append(CheckItem("tensor-commutative", bad is None, repr(bad) if bad else ""))

    bad = None
    small = [E for E in rels if len(E.points) <= min(n, 3)]
    for E in small:
        for F in small:
            for G in small:
                left = tensor(tensor(E, F).space, G).space
                right = tensor(E, tensor(F, G).space).space
                if _iso_or_none(left, right) is None:
                    bad = (E, F, G)
                    break
            if bad:
                break
        if bad:
            break
    items.append(CheckItem("tensor-associative", bad is None, repr(bad) if bad else ""))

    bad = None
    for theory in theories:
        for E in rels:
            if not logic.structurable(E, theory):
                continue
            for F in rels:
                if not logic.structurable(tensor(E, F).space, theory):
                    bad = (theory.name, E, F)
                    break
            if bad:
                break
        if bad:
            break
    items.append(CheckItem("tensor-preserves-structurability", bad is None, repr(bad) if bad else ""))

    bad = None
    for theory in theories:
        for E in rels:
            for F in rels:
                left = ltimes(tensor(E, F).space, theory).space
                right = tensor(E, ltimes(F, theory).space).space
                if _iso_or_none(left, right) is None:
                    bad = (theory.name, E, F)
                    break
            if bad:
                break
        if bad:
            break
    items.append(CheckItem("ltimes-tensor-exchange", bad is None, repr(bad) if bad else ""))

    bad = None
    for theory in theories:
        for E in rels:
            for F in rels:
                summed, _ = disjoint_sum([E, F])
                left = ltimes(summed, theory).space
                parts = [ltimes(E, theory).space, ltimes(F, theory).space]
                right, _ = disjoint_sum(parts)
                if _iso_or_none(left, right) is None:
                    bad = (theory.name, E, F)
                    break
            if bad:
                break
        if bad:
            break
    items.append(CheckItem("sum-ltimes-exchange", bad is None, repr(bad) if bad else ""))

    bad = None
    for E in rels:
        for F in rels:
            t = tensor(E, F)
            if len(t.space.classes) != tensor_class_count(E, F):
                bad = (E, F)
                break
        if bad:
            break
    items.append(CheckItem("tensor-class-count", bad is None, repr(bad) if bad else ""))

    return items
