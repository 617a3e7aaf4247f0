"""Relational languages, finite structures, and isomorphism machinery.

Includes pushforward/pullback along maps, the classwise pullback that turns
a structure on the codomain of a class-bijective map into a structure on
its domain, automorphism/stabilizer computations, duplication-property
checks, and ages (isomorphism types of induced substructures).
"""

import itertools

from .errors import InputError, ContractViolation
from .eqrel import FinER, PointMap, classify_hom, check_point_name, CB


class Language:
    """An ordered list of relation symbols with positive arities."""

    __slots__ = ("symbols", "_arity")

    def __init__(self, symbols):
        syms = []
        arity = {}
        for name, ar in symbols:
            check_point_name(name)
            if not isinstance(ar, int) or ar < 1:
                raise InputError(f"arity of {name!r} must be a positive integer")
            if name in arity:
                raise InputError(f"duplicate relation symbol {name!r}")
            arity[name] = ar
            syms.append((name, ar))
        object.__setattr__(self, "symbols", tuple(syms))
        object.__setattr__(self, "_arity", arity)

    def __setattr__(self, name, value):
        raise AttributeError("Language is immutable")

    def arity(self, name):
        try:
            return self._arity[name]
        except KeyError:
            raise InputError(f"unknown relation symbol {name!r}") from None

    def names(self):
        return tuple(name for name, _ in self.symbols)

    def __contains__(self, name):
        return name in self._arity

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def restrict(self, names):
        keep = set(names)
        for name in keep:
            if name not in self._arity:
                raise InputError(f"unknown relation symbol {name!r}")
        return Language([(n, a) for n, a in self.symbols if n in keep])

    def sublanguages(self, include_empty=True):
        """All sublanguages, smallest first, deterministic."""
        names = self.names()
        for size in range(0 if include_empty else 1, len(names) + 1):
            for combo in itertools.combinations(names, size):
                yield self.restrict(combo)

    def __eq__(self, other):
        return isinstance(other, Language) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return "Language[" + " ".join(f"{n}/{a}" for n, a in self.symbols) + "]"


EMPTY_LANGUAGE = Language(())


class FinStructure:
    """A finite relational structure: a universe plus one finite relation
    per symbol of the language.  Tuples are stored as frozensets of tuples;
    listing order is always lexicographic."""

    __slots__ = ("language", "universe", "relations")

    def __init__(self, language, universe, relations=None):
        universe = tuple(sorted(universe))
        seen = set()
        for p in universe:
            check_point_name(p)
            if p in seen:
                raise InputError(f"duplicate universe point {p!r}")
            seen.add(p)
        rels = {}
        relations = relations or {}
        for name in relations:
            if name not in language:
                raise InputError(f"unknown relation symbol {name!r}")
        for name, ar in language.symbols:
            tuples = set()
            for tup in relations.get(name, ()):
                tup = tuple(tup)
                if len(tup) != ar:
                    raise InputError(f"tuple {tup!r} has wrong arity for {name!r}/{ar}")
                for p in tup:
                    if p not in seen:
                        raise InputError(f"tuple entry {p!r} is not a universe point")
                tuples.add(tup)
            rels[name] = frozenset(tuples)
        object.__setattr__(self, "language", language)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "relations", rels)

    def __setattr__(self, name, value):
        raise AttributeError("FinStructure is immutable")

    def rel(self, name):
        try:
            return self.relations[name]
        except KeyError:
            raise InputError(f"unknown relation symbol {name!r}") from None

    def sorted_rel(self, name):
        return tuple(sorted(self.rel(name)))

    def restrict(self, subset):
        """Induced substructure on a subset of the universe."""
        keep = set(subset)
        for p in keep:
            if p not in set(self.universe):
                raise InputError(f"unknown point {p!r}")
        rels = {
            name: [t for t in tuples if all(p in keep for p in t)]
            for name, tuples in self.relations.items()
        }
        return FinStructure(self.language, sorted(keep), rels)

    def reduct(self, sub):
        """Forgetful restriction to a sublanguage."""
        if not isinstance(sub, Language):
            sub = self.language.restrict(sub)
        for name, ar in sub.symbols:
            if name not in self.language or self.language.arity(name) != ar:
                raise InputError(f"{name!r}/{ar} is not a symbol of the structure")
        return FinStructure(sub, self.universe, {n: self.relations[n] for n, _ in sub.symbols})

    def key(self):
        return (
            self.language.symbols,
            self.universe,
            tuple(self.sorted_rel(n) for n in self.language.names()),
        )

    def __eq__(self, other):
        return isinstance(other, FinStructure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        parts = [f"universe={{{' '.join(self.universe)}}}"]
        for name in self.language.names():
            if self.relations[name]:
                body = " ".join("(" + ",".join(t) + ")" for t in self.sorted_rel(name))
                parts.append(f"{name}: {body}")
        return "FinStructure[" + "; ".join(parts) + "]"


def pushforward(A, mapping):
    """Transport a structure along a bijection of its universe."""
    dom = set(A.universe)
    if set(mapping) != dom:
        raise InputError("pushforward map must be defined exactly on the universe")
    values = list(mapping.values())
    if len(set(values)) != len(values):
        raise InputError("pushforward map must be injective")
    rels = {
        name: [tuple(mapping[p] for p in t) for t in tuples]
        for name, tuples in A.relations.items()
    }
    return FinStructure(A.language, values, rels)


def pullback(A, mapping):
    """Pull a structure back along any map into its universe.

    The new universe is the domain of the map; a tuple is related exactly
    when its image is.
    """
    target = set(A.universe)
    for p, q in mapping.items():
        check_point_name(p)
        if q not in target:
            raise InputError(f"image {q!r} is not a universe point")
    universe = sorted(mapping)
    rels = {}
    for name, ar in A.language.symbols:
        have = A.relations[name]
        rels[name] = [
            t for t in itertools.product(universe, repeat=ar) if tuple(mapping[p] for p in t) in have
        ]
    return FinStructure(A.language, universe, rels)


class StructuredER:
    """A structure living on an equivalence relation: every related tuple
    stays inside one class."""

    __slots__ = ("er", "structure")

    def __init__(self, er, structure):
        if not isinstance(er, FinER) or not isinstance(structure, FinStructure):
            raise InputError("StructuredER needs a FinER and a FinStructure")
        if structure.universe != er.points:
            raise InputError("structure universe differs from the relation's points")
        for name, tuples in structure.relations.items():
            for t in tuples:
                if t and len({er.class_index(p) for p in t}) != 1:
                    raise InputError(f"tuple {t!r} of {name!r} crosses classes")
        object.__setattr__(self, "er", er)
        object.__setattr__(self, "structure", structure)

    def __setattr__(self, name, value):
        raise AttributeError("StructuredER is immutable")

    def class_structure(self, block):
        return self.structure.restrict(block)

    def __eq__(self, other):
        return (
            isinstance(other, StructuredER)
            and self.er == other.er
            and self.structure == other.structure
        )

    def __hash__(self):
        return hash((self.er, self.structure))

    def __repr__(self):
        return f"StructuredER[{self.er!r}; {self.structure!r}]"


def classwise_pullback(A, f):
    """Pull a structure on the codomain of a class-bijective map back to a
    structure on its domain, keeping only tuples inside single classes."""
    if not isinstance(f, PointMap):
        raise InputError("classwise pullback needs a PointMap")
    if A.universe != f.codomain.points:
        raise InputError("structure does not live on the codomain")
    if CB not in classify_hom(f):
        raise InputError("classwise pullback needs a class-bijective map")
    E = f.domain
    rels = {}
    for name, ar in A.language.symbols:
        have = A.relations[name]
        out = []
        for block in E.classes:
            for t in itertools.product(block, repeat=ar):
                if tuple(f.mapping[p] for p in t) in have:
                    out.append(t)
        rels[name] = out
    return StructuredER(E, FinStructure(A.language, E.points, rels))


def _profiles(A):
    # per-point invariant used to prune the isomorphism search
    prof = {p: [] for p in A.universe}
    for name in A.language.names():
        for ar_pos in range(A.language.arity(name)):
            counts = {p: 0 for p in A.universe}
            for t in A.relations[name]:
                counts[t[ar_pos]] += 1
            for p in A.universe:
                prof[p].append(counts[p])
    return {p: tuple(v) for p, v in prof.items()}


def isomorphisms(A, B, pin=None):
    """Generate every isomorphism A -> B as a dict, deterministically.

    Backtracking over the universe in canonical order, pruned by per-point
    degree profiles; `pin` forces chosen points to chosen images.
    """
    if A.language != B.language or len(A.universe) != len(B.universe):
        return
    for name in A.language.names():
        if len(A.relations[name]) != len(B.relations[name]):
            return
    prof_a, prof_b = _profiles(A), _profiles(B)
    pin = dict(pin or {})
    order = list(A.universe)
    n = len(order)

    by_point_a = {p: [] for p in A.universe}
    for name in A.language.names():
        for t in A.relations[name]:
            for p in set(t):
                by_point_a[p].append((name, t))

    def consistent(assign, p):
        for name, t in by_point_a[p]:
            if all(q in assign for q in t):
                if tuple(assign[q] for q in t) not in B.relations[name]:
                    return False
        return True

    def reverse_ok(assign, image):
        inv = {v: k for k, v in assign.items()}
        for name in A.language.names():
            for t in B.relations[name]:
                if all(q in inv for q in t):
                    if tuple(inv[q] for q in t) not in A.relations[name]:
                        return False
        return True

    def rec(i, assign, used):
        if i == n:
            if reverse_ok(assign, used):
                yield dict(assign)
            return
        p = order[i]
        candidates = [pin[p]] if p in pin else B.universe
        for q in candidates:
            if q in used or prof_a[p] != prof_b[q]:
                continue
            assign[p] = q
            if consistent(assign, p):
                used.add(q)
                yield from rec(i + 1, assign, used)
                used.discard(q)
            del assign[p]

    yield from rec(0, {}, set())


def isomorphic(A, B):
    """First isomorphism A -> B in canonical search order, or None."""
    for iso in isomorphisms(A, B):
        return iso
    return None


def aut_group(A):
    """All automorphisms of A, in deterministic order."""
    return list(isomorphisms(A, A))


def stabilizer_orbits(A, fixed):
    """Orbit partition of the pointwise stabilizer of a subset.

    Orbits of the group of automorphisms fixing every point of `fixed`.
    """
    fixed = set(fixed)
    for p in fixed:
        if p not in set(A.universe):
            raise InputError(f"unknown point {p!r}")
    parent = {p: p for p in A.universe}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for g in isomorphisms(A, A, pin={p: p for p in fixed}):
        for p, q in g.items():
            parent[find(p)] = find(q)
    orbits = {}
    for p in A.universe:
        orbits.setdefault(find(p), []).append(p)
    return tuple(sorted((tuple(sorted(o)) for o in orbits.values()), key=lambda o: o[0]))


def wdp_check(A, sub, fixed):
    """Look for a finite duplicate of an induced substructure.

    Returns a subset G of the universe, disjoint from `fixed`, such that
    the reduct to `sub` induces isomorphic structures on `fixed` and G;
    or None when no such witness exists.
    """
    fixed = tuple(sorted(set(fixed)))
    if not fixed:
        raise InputError("the fixed subset may not be empty")
    if not isinstance(sub, Language):
        sub = A.language.restrict(sub)
    reduced = A.reduct(sub)
    pattern = reduced.restrict(fixed)
    rest = [p for p in A.universe if p not in set(fixed)]
    for combo in itertools.combinations(rest, len(fixed)):
        if isomorphic(pattern, reduced.restrict(combo)) is not None:
            return combo
    return None


def wdp_upto(A, f_max, full_language_only=False):
    """Witness table for every small subset and every sublanguage.

    Maps (sublanguage names, fixed subset) to the found witness or None.
    With `full_language_only` the sublanguage sweep (exponential in the
    number of symbols) is restricted to the whole language.
    """
    if f_max < 1:
        raise InputError("f_max must be at least 1")
    subs = [A.language] if full_language_only else list(A.language.sublanguages())
    table = {}
    for sub in subs:
        for size in range(1, min(f_max, len(A.universe)) + 1):
            for fixed in itertools.combinations(A.universe, size):
                table[(sub.names(), fixed)] = wdp_check(A, sub, fixed)
    return table


def first_wdp_failure(A, f_max, full_language_only=False):
    """First (sublanguage, subset) with no duplicate witness, or None."""
    table = wdp_upto(A, f_max, full_language_only)
    for key in sorted(table, key=lambda k: (len(k[1]), k)):
        if table[key] is None:
            return key
    return None


def age(A, n):
    """Isomorphism types of the n-point induced substructures, as canonical
    representatives on the points a0..a{n-1}."""
    if n > len(A.universe):
        return []
    reps = []
    for combo in itertools.combinations(A.universe, n):
        sub = A.restrict(combo)
        relabel = {p: f"a{i}" for i, p in enumerate(sorted(combo))}
        candidate = pushforward(sub, relabel)
        if not any(isomorphic(candidate, r) for r in reps):
            reps.append(candidate)
    return reps
