"""Finite posets, distributive lattices, and their representation.

Projection (idempotent monotone) and closure operators on posets induce a
preorder whose quotient is order-isomorphic to the operator's image; this
module verifies that bijection explicitly.  For a finite distributive
lattice, the map sending an element to the set of prime filters containing
it is an order-isomorphism onto the upward-closed subsets of the
prime-filter poset; equations between lattice terms that hold in the
two-element lattice transfer to every distributive lattice through that
representation.  A catalog of equivalence relations is also ordered here
by existence of class-bijective maps, with tensor and sum as the meet and
join candidates.
"""

import itertools
from dataclasses import dataclass

from .errors import InputError, ContractViolation
from .eqrel import FinER, tuple_name, enumerate_homs, classify_hom, CB, INV_EMBEDDING
from .constructions import tensor, pairing
from .eqrel import disjoint_sum, PointMap


class FinPoset:
    """A finite partial order; the given pairs are closed off reflexively
    and transitively, and antisymmetry is checked."""

    __slots__ = ("elements", "_leq")

    def __init__(self, elements, pairs):
        elements = tuple(sorted(elements))
        if len(set(elements)) != len(elements):
            raise InputError("duplicate poset elements")
        idx = {e: i for i, e in enumerate(elements)}
        for a, b in pairs:
            if a not in idx or b not in idx:
                raise InputError(f"order pair ({a},{b}) uses unknown elements")
        n = len(elements)
        leq = [[False] * n for _ in range(n)]
        for i in range(n):
            leq[i][i] = True
        for a, b in pairs:
            leq[idx[a]][idx[b]] = True
        for k in range(n):
            for i in range(n):
                if leq[i][k]:
                    row_k = leq[k]
                    row_i = leq[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        for i in range(n):
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise InputError(
                        f"not antisymmetric: {elements[i]} and {elements[j]} are order-equivalent"
                    )
        object.__setattr__(self, "elements", elements)
        object.__setattr__(
            self, "_leq", {(elements[i], elements[j]) for i in range(n) for j in range(n) if leq[i][j]}
        )

    def __setattr__(self, name, value):
        raise AttributeError("FinPoset is immutable")

    def leq(self, a, b):
        if a not in set(self.elements) or b not in set(self.elements):
            raise InputError("unknown poset element")
        return (a, b) in self._leq

    def pairs(self):
        return frozenset(self._leq)

    def upset(self, a):
        return frozenset(b for b in self.elements if self.leq(a, b))

    def is_upset(self, subset):
        subset = set(subset)
        return all(b in subset for a in subset for b in self.elements if self.leq(a, b))

    def upsets(self):
        """All upward-closed subsets, as unions of principal upsets over
        antichains (output-sensitive; avoids scanning all subsets)."""
        elems = self.elements
        out = set()

        def rec(start, antichain):
            out.add(frozenset().union(*(self.upset(a) for a in antichain)) if antichain else frozenset())
            for i in range(start, len(elems)):
                e = elems[i]
                if all(not self.leq(e, a) and not self.leq(a, e) for a in antichain):
                    antichain.append(e)
                    rec(i + 1, antichain)
                    antichain.pop()

        rec(0, [])
        return sorted(out, key=lambda s: (len(s), tuple(sorted(s))))

    def __eq__(self, other):
        return (
            isinstance(other, FinPoset)
            and self.elements == other.elements
            and self._leq == other._leq
        )

    def __hash__(self):
        return hash((self.elements, frozenset(self._leq)))

    def __repr__(self):
        return f"FinPoset[{' '.join(self.elements)}]"


class FinLattice(FinPoset):
    """A finite lattice; meet and join tables are computed from the order
    and their existence is validated.  Distributivity is computed, never
    assumed."""

    __slots__ = ("meet_table", "join_table")

    def __init__(self, elements, pairs):
        super().__init__(elements, pairs)
        meet, join = {}, {}
        for a in self.elements:
            for b in self.elements:
                lower = [c for c in self.elements if self.leq(c, a) and self.leq(c, b)]
                glb = [c for c in lower if all(self.leq(d, c) for d in lower)]
                upper = [c for c in self.elements if self.leq(a, c) and self.leq(b, c)]
                lub = [c for c in upper if all(self.leq(c, d) for d in upper)]
                if len(glb) != 1 or len(lub) != 1:
                    raise InputError(f"elements {a!r}, {b!r} lack a meet or join")
                meet[(a, b)] = glb[0]
                join[(a, b)] = lub[0]
        object.__setattr__(self, "meet_table", meet)
        object.__setattr__(self, "join_table", join)

    def meet(self, a, b):
        return self.meet_table[(a, b)]

    def join(self, a, b):
        return self.join_table[(a, b)]

    def top(self):
        return next(e for e in self.elements if all(self.leq(x, e) for x in self.elements))

    def bottom(self):
        return next(e for e in self.elements if all(self.leq(e, x) for x in self.elements))

    def distributive(self):
        """None if distributive, else a witness triple."""
        for a, b, c in itertools.product(self.elements, repeat=3):
            if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)):
                return (a, b, c)
        return None

    @classmethod
    def from_subsets(cls, family):
        """Lattice of a family of sets closed under union and intersection,
        ordered by inclusion.  Elements are named s<bitstring> over the
        sorted ground set."""
        family = [frozenset(s) for s in family]
        ground = sorted(set().union(*family)) if family else []

        def name(s):
            return "s" + "".join("1" if g in s else "0" for g in ground)

        closed = set(family)
        changed = True
        while changed:
            changed = False
            for a in list(closed):
                for b in list(closed):
                    for c in (a | b, a & b):
                        if c not in closed:
                            closed.add(c)
                            changed = True
        names = {s: name(s) for s in closed}
        pairs = [(names[a], names[b]) for a in closed for b in closed if a <= b]
        return cls(names.values(), pairs)

    @classmethod
    def boolean(cls, k):
        subsets = [frozenset(c) for r in range(k + 1) for c in itertools.combinations(range(k), r)]
        return cls.from_subsets([frozenset(str(i) for i in s) for s in subsets])

    @classmethod
    def chain(cls, n):
        elems = [f"c{i}" for i in range(n)]
        return cls(elems, [(elems[i], elems[i + 1]) for i in range(n - 1)])

    @classmethod
    def diamond(cls):
        return cls("0 a b 1".split(), [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])

    @classmethod
    def n5(cls):
        return cls("0 a b c 1".split(), [("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")])

    @classmethod
    def m3(cls):
        return cls("0 a b c 1".split(), [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])


# ---------------------------------------------------------------------------
# Projection and closure operators


@dataclass
class ProjectionReport:
    monotone: bool
    idempotent: bool
    closure: bool
    failures: tuple

    @property
    def projection(self):
        return self.monotone and self.idempotent


def check_projection(P, e):
    """Classify a self-map of a poset: monotone? idempotent? a closure
    (inflationary)?  Reports every failing axiom with a witness."""
    for x in P.elements:
        if x not in e or e[x] not in set(P.elements):
            raise InputError("self-map must be total on the poset")
    failures = []
    monotone = True
    for x, y in itertools.product(P.elements, repeat=2):
        if P.leq(x, y) and not P.leq(e[x], e[y]):
            monotone = False
            failures.append(("monotone", x, y))
    idempotent = all(e[e[x]] == e[x] for x in P.elements)
    if not idempotent:
        failures.append(("idempotent", next(x for x in P.elements if e[e[x]] != e[x])))
    closure = all(P.leq(x, e[x]) for x in P.elements)
    if not closure:
        failures.append(("closure", next(x for x in P.elements if not P.leq(x, e[x]))))
    return ProjectionReport(monotone, idempotent, closure, tuple(failures))


def induced_preorder(P, e):
    """The pullback of the order along the operator: x below y iff
    e(x) <= e(y)."""
    report = check_projection(P, e)
    if not report.projection:
        raise InputError(f"not a projection operator: {report.failures}")
    return frozenset(
        (x, y) for x in P.elements for y in P.elements if P.leq(e[x], e[y])
    )


@dataclass
class RetractReport:
    classes: tuple
    image: tuple
    class_to_image: dict
    image_to_class: dict
    ok: bool


def retract_iso(P, e):
    """The order-isomorphism between the quotient by the induced preorder
    and the image of the operator: a kernel class maps to its common image
    point; an image point maps to its class.  Both directions and both
    order comparisons are checked explicitly."""
    pre = induced_preorder(P, e)
    classes = {}
    for x in P.elements:
        classes.setdefault(e[x], []).append(x)
    class_list = tuple(tuple(sorted(v)) for _, v in sorted(classes.items()))
    image = tuple(sorted(classes))
    class_to_image = {cls: e[cls[0]] for cls in class_list}
    image_to_class = {}
    for cls in class_list:
        image_to_class[class_to_image[cls]] = cls
    ok = True
    for cls in class_list:
        for x in cls:
            if e[x] != class_to_image[cls]:
                ok = False
    for c1 in class_list:
        for c2 in class_list:
            quot_leq = (c1[0], c2[0]) in pre
            img_leq = P.leq(class_to_image[c1], class_to_image[c2])
            if quot_leq != img_leq:
                ok = False
    for y in image:
        if class_to_image[image_to_class[y]] != y:
            ok = False
    return RetractReport(class_list, image, class_to_image, image_to_class, ok)


# ---------------------------------------------------------------------------
# Prime filters and the representation


def prime_filters(L):
    """All prime filters: upward-closed, meet-closed proper subsets whose
    complements are join-closed.  In a finite lattice every filter is
    principal (it contains the meet of its members), so candidates are the
    upsets of single elements."""
    if not isinstance(L, FinLattice):
        raise InputError("prime filters need a lattice")
    out = []
    for a in L.elements:
        F = L.upset(a)
        comp = [x for x in L.elements if x not in F]
        if not comp:
            continue
        prime = all(L.join(x, y) not in F for x in comp for y in comp)
        if prime:
            out.append(frozenset(F))
    return sorted(out, key=lambda f: (len(f), tuple(sorted(f))))


def prime_filters_brute(L):
    """Subset-enumeration oracle for small lattices; used to cross-check
    the principal-filter shortcut."""
    n = len(L.elements)
    if n > 14:
        raise InputError("brute-force filter enumeration is for small lattices")
    out = []
    for mask in range(1, 1 << n):
        F = {L.elements[i] for i in range(n) if mask >> i & 1}
        comp = [x for x in L.elements if x not in F]
        if not comp:
            continue
        if not all(b in F for a in F for b in L.elements if L.leq(a, b)):
            continue
        if not all(L.meet(a, b) in F for a in F for b in F):
            continue
        if not all(L.join(a, b) not in F for a in comp for b in comp):
            continue
        out.append(frozenset(F))
    return sorted(out, key=lambda f: (len(f), tuple(sorted(f))))


@dataclass
class PriestleyResult:
    filters: tuple
    filter_poset: FinPoset
    eta: dict
    ok: bool
    detail: str


def priestley(L):
    """Represent a distributive lattice inside the upsets of its
    prime-filter poset and verify the bijection in both directions."""
    witness = L.distributive()
    if witness is not None:
        raise InputError(f"lattice is not distributive: witness triple {witness}")
    filters = prime_filters(L)
    names = {f: tuple_name(*sorted(f)) for f in filters}
    poset = FinPoset(
        names.values(),
        [(names[f], names[g]) for f in filters for g in filters if f <= g],
    )
    eta = {
        x: frozenset(names[f] for f in filters if x in f) for x in L.elements
    }
    upsets = set(poset.upsets())
    ok = True
    detail = ""
    if len({eta[x] for x in L.elements}) != len(L.elements):
        ok, detail = False, "eta is not injective"
    for x in L.elements:
        if frozenset(eta[x]) not in upsets:
            ok, detail = False, f"eta({x}) is not an upset"
    if {frozenset(e) for e in eta.values()} != {frozenset(u) for u in upsets}:
        ok, detail = ok and False, detail or "eta is not onto the upsets"
    for x, y in itertools.product(L.elements, repeat=2):
        if L.leq(x, y) != (eta[x] <= eta[y]):
            ok, detail = False, f"eta does not match the order at ({x},{y})"
    return PriestleyResult(tuple(filters), poset, eta, ok, detail)


# ---------------------------------------------------------------------------
# Lattice terms and equation transfer


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class MeetT:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class JoinT:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


def parse_term(text):
    """Terms as s-expressions: a variable name, (meet t...), (join t...)."""
    from .logic import _tokenize

    tokens = _tokenize(text)
    pos = 0

    def fail(msg, at):
        raise InputError(f"term syntax error at position {at}: {msg}")

    def term():
        nonlocal pos
        if pos >= len(tokens):
            fail("unexpected end of input", len(text))
        tok, at = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens):
                fail("unexpected end of input", len(text))
            head, hat = tokens[pos]
            pos += 1
            if head not in ("meet", "join"):
                fail(f"unknown operator {head!r}", hat)
            parts = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                parts.append(term())
            if pos >= len(tokens):
                fail("missing )", len(text))
            pos += 1
            return MeetT(parts) if head == "meet" else JoinT(parts)
        if tok == ")":
            fail("unexpected )", at)
        return Var(tok)

    t = term()
    if pos != len(tokens):
        fail(f"trailing input {tokens[pos][0]!r}", tokens[pos][1])
    return t


def print_term(t):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, MeetT):
        return "(meet " + " ".join(print_term(p) for p in t.parts) + ")"
    if isinstance(t, JoinT):
        return "(join " + " ".join(print_term(p) for p in t.parts) + ")"
    raise InputError(f"not a term: {t!r}")


def term_vars(t):
    if isinstance(t, Var):
        return frozenset((t.name,))
    out = frozenset()
    for p in t.parts:
        out |= term_vars(p)
    return out


def eval_term(t, L, env):
    if isinstance(t, Var):
        if t.name not in env:
            raise InputError(f"unbound term variable {t.name!r}")
        return env[t.name]
    if isinstance(t, MeetT):
        if not t.parts:
            return L.top()
        val = eval_term(t.parts[0], L, env)
        for p in t.parts[1:]:
            val = L.meet(val, eval_term(p, L, env))
        return val
    if isinstance(t, JoinT):
        if not t.parts:
            return L.bottom()
        val = eval_term(t.parts[0], L, env)
        for p in t.parts[1:]:
            val = L.join(val, eval_term(p, L, env))
        return val
    raise InputError(f"not a term: {t!r}")


def check_equation(lhs, rhs, L):
    """Evaluate both terms under every assignment; returns (holds,
    counterexample assignment or None)."""
    vs = sorted(term_vars(lhs) | term_vars(rhs))
    for vals in itertools.product(L.elements, repeat=len(vs)):
        env = dict(zip(vs, vals))
        if eval_term(lhs, L, env) != eval_term(rhs, L, env):
            return False, env
    return True, None


def equation_transfer_test(lhs, rhs, lattices):
    """If an equation holds in the two-element lattice it must hold in
    every distributive lattice; a failure here would falsify this
    implementation, not the transfer principle."""
    two = FinLattice.chain(2)
    holds_in_two, _ = check_equation(lhs, rhs, two)
    results = []
    for L in lattices:
        if L.distributive() is not None:
            raise InputError("equation transfer applies to distributive lattices")
        holds, env = check_equation(lhs, rhs, L)
        if holds_in_two and not holds:
            raise ContractViolation(
                f"equation valid in 2 failed in a distributive lattice at {env}"
            )
        results.append(holds)
    return holds_in_two, results


def random_distributive_lattice(rng, k=4, max_size=16):
    """A random sublattice of the subsets of a k-element set: close a few
    random subsets under union and intersection, retrying while the result
    is too big.  Distributivity is inherited (and still re-checked by
    consumers that require it)."""
    ground = [str(i) for i in range(k)]
    while True:
        seeds = []
        for _ in range(rng.randint(2, 4)):
            seeds.append(frozenset(g for g in ground if rng.random() < 0.5))
        seeds.append(frozenset())
        seeds.append(frozenset(ground))
        L = FinLattice.from_subsets(seeds)
        if len(L.elements) <= max_size:
            return L


def random_term(rng, variables, depth):
    if depth == 0 or rng.random() < 0.3:
        return Var(rng.choice(variables))
    parts = [random_term(rng, variables, depth - 1) for _ in range(rng.randint(2, 3))]
    return MeetT(parts) if rng.random() < 0.5 else JoinT(parts)


def equivalent_variant(rng, t):
    """Rewrite a term by laws that hold in every lattice (commutativity,
    idempotence, absorption), producing a provably equal partner."""
    choice = rng.randint(0, 3)
    if choice == 0 and isinstance(t, (MeetT, JoinT)) and len(t.parts) > 1:
        parts = list(t.parts)
        rng.shuffle(parts)
        return type(t)(parts)
    if choice == 1:
        return MeetT([t, t])
    if choice == 2:
        return JoinT([t, MeetT([t, t])])
    return MeetT([t, JoinT([t, t])])


# ---------------------------------------------------------------------------
# Catalog of relations under class-bijective maps


@dataclass
class CatalogResult:
    labels: tuple
    cb_matrix: dict
    items: tuple


def catalog_poset(rels):
    """Order a catalog of relations by existence of class-bijective maps
    and verify the lattice-candidate structure: tensor projections are
    class-bijective, sum injections are invariant embeddings, and the
    mediating maps into tensors and out of sums exist whenever the
    comparisons do."""
    rels = list(rels)
    labels = tuple(f"E{i}" for i in range(len(rels)))
    cb = {}
    for i, E in enumerate(rels):
        for j, F in enumerate(rels):
            cb[(labels[i], labels[j])] = bool(enumerate_homs(E, F, ["cb"]))
    items = []
    for i, E in enumerate(rels):
        for j, F in enumerate(rels):
            t = tensor(E, F)
            ok = (not t.space.points or (
                CB in classify_hom(t.proj1) and CB in classify_hom(t.proj2)
            ))
            items.append(("tensor-projections-cb", labels[i], labels[j], ok))
            s, injections = disjoint_sum([E, F])
            ok = all(INV_EMBEDDING in classify_hom(inj) for inj in injections)
            items.append(("sum-injections-invariant", labels[i], labels[j], ok))
    for i, E in enumerate(rels):
        for j, F in enumerate(rels):
            t = tensor(E, F)
            for k, G in enumerate(rels):
                fs = enumerate_homs(G, E, ["cb"])
                gs = enumerate_homs(G, F, ["cb"])
                if fs and gs:
                    paired = pairing(t, fs[0], gs[0])
                    items.append(("tensor-mediating-cb", labels[k], labels[i], labels[j], CB in classify_hom(paired)))
            s, (inj1, inj2) = disjoint_sum([E, F])
            for k, G in enumerate(rels):
                fs = enumerate_homs(E, G, ["cb"])
                gs = enumerate_homs(F, G, ["cb"])
                if fs and gs:
                    mapping = {}
                    for p in E.points:
                        mapping[inj1.mapping[p]] = fs[0].mapping[p]
                    for p in F.points:
                        mapping[inj2.mapping[p]] = gs[0].mapping[p]
                    co = PointMap(s, G, mapping)
                    items.append(("sum-mediating-cb", labels[i], labels[j], labels[k], CB in classify_hom(co)))
    return CatalogResult(labels, cb, tuple(items))
