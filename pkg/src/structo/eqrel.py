"""Finite equivalence relations and the taxonomy of maps between them.

A relation is stored as a partition of a finite set of named points.  Maps
between relations are classified by how they behave on single classes
(class-injective, class-surjective, class-bijective, ...), which is the
notion everything else in this package is built on.  All values are
immutable after construction and all operations are pure functions.
"""

import itertools

from .errors import InputError, ContractViolation

# Classification flags.  In the finite setting every homomorphism is smooth,
# so SMOOTH is an alias of HOM; it is kept so the taxonomy stays complete.
HOM = "hom"
REDUCTION = "reduction"
CI = "class-injective"
CS = "class-surjective"
CB = "class-bijective"
EMBEDDING = "embedding"
INV_EMBEDDING = "invariant-embedding"
SMOOTH = "smooth"

ALL_FLAGS = (HOM, REDUCTION, CI, CS, CB, EMBEDDING, INV_EMBEDDING, SMOOTH)

_ALIASES = {
    "hom": HOM,
    "reduction": REDUCTION,
    "ci": CI,
    "class-injective": CI,
    "cs": CS,
    "class-surjective": CS,
    "cb": CB,
    "class-bijective": CB,
    "embedding": EMBEDDING,
    "emb": EMBEDDING,
    "invariant-embedding": INV_EMBEDDING,
    "inv-emb": INV_EMBEDDING,
    "smooth": SMOOTH,
    "sm": SMOOTH,
}


def normalize_flags(flags):
    out = set()
    for f in flags:
        if f not in _ALIASES:
            raise InputError(f"unknown homomorphism flag {f!r}")
        out.add(_ALIASES[f])
    return frozenset(out)


def check_point_name(name):
    if not isinstance(name, str) or not name or any(c.isspace() for c in name):
        raise InputError(f"bad point name {name!r}: must be a nonempty string without whitespace")
    return name


def tuple_name(*parts):
    """Canonical structured identifier for a point of a constructed space."""
    return "(" + ",".join(parts) + ")"


class FinER:
    """An equivalence relation on a named finite set, stored as a partition.

    Canonical form: each block is sorted lexicographically and the block
    list is sorted by minimal point, so equal relations always have equal
    representations and re-runs are byte-identical.
    """

    __slots__ = ("classes", "points", "_class_index")

    def __init__(self, classes):
        blocks = []
        seen = set()
        for block in classes:
            block = tuple(sorted(block))
            if not block:
                raise InputError("equivalence class may not be empty")
            for p in block:
                check_point_name(p)
                if p in seen:
                    raise InputError(f"point {p!r} occurs in more than one class")
                seen.add(p)
            blocks.append(block)
        blocks.sort(key=lambda b: b[0])
        object.__setattr__(self, "classes", tuple(blocks))
        object.__setattr__(self, "points", tuple(sorted(seen)))
        object.__setattr__(
            self, "_class_index", {p: i for i, b in enumerate(self.classes) for p in b}
        )

    def __setattr__(self, name, value):
        raise AttributeError("FinER is immutable")

    @classmethod
    def delta(cls, points):
        """Equality relation: every point is its own class."""
        return cls([[p] for p in points])

    @classmethod
    def indiscrete(cls, points):
        """One single class containing every point."""
        points = list(points)
        return cls([points] if points else [])

    def class_of(self, p):
        try:
            return self.classes[self._class_index[p]]
        except KeyError:
            raise InputError(f"unknown point {p!r}") from None

    def class_index(self, p):
        try:
            return self._class_index[p]
        except KeyError:
            raise InputError(f"unknown point {p!r}") from None

    def related(self, p, q):
        return self.class_index(p) == self.class_index(q)

    def pairs(self):
        """All ordered related pairs."""
        for block in self.classes:
            for p in block:
                for q in block:
                    yield (p, q)

    def class_sizes(self):
        return tuple(sorted(len(b) for b in self.classes))

    def restrict(self, points):
        """Restriction to a union of classes; rejects non-invariant subsets."""
        keep = set(points)
        blocks = []
        for block in self.classes:
            inside = keep.intersection(block)
            if not inside:
                continue
            if len(inside) != len(block):
                raise InputError(f"subset cuts through the class of {block[0]!r}")
            blocks.append(block)
        return FinER(blocks)

    def __eq__(self, other):
        return isinstance(other, FinER) and self.classes == other.classes

    def __hash__(self):
        return hash(self.classes)

    def __repr__(self):
        body = ", ".join("{" + " ".join(b) + "}" for b in self.classes)
        return f"FinER[{body}]"

    def __len__(self):
        return len(self.points)


def point_names(n, prefix="p"):
    """Canonical point set of size n (zero-padded so string order = numeric)."""
    width = len(str(max(n - 1, 0)))
    return tuple(f"{prefix}{str(i).zfill(width)}" for i in range(n))


class PointMap:
    """A total map between the point sets of two finite equivalence relations."""

    __slots__ = ("domain", "codomain", "mapping")

    def __init__(self, domain, codomain, mapping):
        if not isinstance(domain, FinER) or not isinstance(codomain, FinER):
            raise InputError("PointMap endpoints must be FinER values")
        mp = {}
        cod = set(codomain.points)
        for p in domain.points:
            if p not in mapping:
                raise InputError(f"map is not total: no image for {p!r}")
            q = mapping[p]
            if q not in cod:
                raise InputError(f"image {q!r} of {p!r} is not a codomain point")
            mp[p] = q
        for p in mapping:
            if p not in mp:
                raise InputError(f"map references unknown point {p!r}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "mapping", dict(mp))

    def __setattr__(self, name, value):
        raise AttributeError("PointMap is immutable")

    @classmethod
    def identity(cls, er):
        return cls(er, er, {p: p for p in er.points})

    def __call__(self, p):
        try:
            return self.mapping[p]
        except KeyError:
            raise InputError(f"unknown point {p!r}") from None

    def compose(self, other):
        """self after other: (self.compose(g))(x) = self(g(x))."""
        if other.codomain != self.domain:
            raise InputError("maps are not composable")
        return PointMap(
            other.domain, self.codomain, {p: self.mapping[other.mapping[p]] for p in other.domain.points}
        )

    def image(self):
        return tuple(sorted(set(self.mapping.values())))

    def is_injective(self):
        return len(set(self.mapping.values())) == len(self.domain.points)

    def is_surjective(self):
        return len(set(self.mapping.values())) == len(self.codomain.points)

    def as_pairs(self):
        return tuple((p, self.mapping[p]) for p in self.domain.points)

    def __eq__(self, other):
        return (
            isinstance(other, PointMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.mapping == other.mapping
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.as_pairs()))

    def __repr__(self):
        body = ", ".join(f"{p}->{q}" for p, q in self.as_pairs())
        return f"PointMap[{body}]"


class HomClass:
    """The exact set of taxonomy flags a point map carries."""

    __slots__ = ("flags",)

    def __init__(self, flags):
        object.__setattr__(self, "flags", normalize_flags(flags))

    def __setattr__(self, name, value):
        raise AttributeError("HomClass is immutable")

    def __contains__(self, flag):
        return _ALIASES.get(flag, flag) in self.flags

    def __le__(self, other):
        return self.flags <= other.flags

    def __iter__(self):
        return iter(f for f in ALL_FLAGS if f in self.flags)

    def __eq__(self, other):
        return isinstance(other, HomClass) and self.flags == other.flags

    def __hash__(self):
        return hash(self.flags)

    def __repr__(self):
        return "HomClass{" + ", ".join(self) + "}"


def classify_hom(f):
    """Compute the exact flag set of a point map.

    If the map is not a homomorphism (it relates some pair that the codomain
    does not), the result is empty: every other flag implies hom.
    """
    E, F = f.domain, f.codomain
    for block in E.classes:
        q0 = f.mapping[block[0]]
        for p in block[1:]:
            if not F.related(f.mapping[p], q0):
                return HomClass(())
    flags = {HOM, SMOOTH}

    reduction = True
    for b1 in E.classes:
        for b2 in E.classes:
            if b1 is b2:
                continue
            if F.related(f.mapping[b1[0]], f.mapping[b2[0]]):
                reduction = False
                break
        if not reduction:
            break
    if reduction:
        flags.add(REDUCTION)

    ci = all(len({f.mapping[p] for p in block}) == len(block) for block in E.classes)
    cs = all(
        {f.mapping[p] for p in block} == set(F.class_of(f.mapping[block[0]]))
        for block in E.classes
    )
    if ci:
        flags.add(CI)
    if cs:
        flags.add(CS)
    if ci and cs:
        flags.add(CB)
    if ci and reduction and f.is_injective():
        flags.add(EMBEDDING)
    if EMBEDDING in flags and CB in flags:
        flags.add(INV_EMBEDDING)
    return HomClass(flags)


def _all_maps(E, F):
    if not E.points:
        yield PointMap(E, F, {})
        return
    for images in itertools.product(F.points, repeat=len(E.points)):
        yield PointMap(E, F, dict(zip(E.points, images)))


def _class_structured_maps(E, F):
    # Candidate class-bijective maps: each domain class is sent bijectively
    # onto a codomain class of equal size.  Far smaller than |F|^|E|.
    per_class = []
    for block in E.classes:
        options = []
        for target in F.classes:
            if len(target) != len(block):
                continue
            for images in itertools.permutations(target):
                options.append(dict(zip(block, images)))
        if not options:
            return
        per_class.append(options)
    for combo in itertools.product(*per_class):
        mapping = {}
        for part in combo:
            mapping.update(part)
        yield PointMap(E, F, mapping)


def enumerate_homs(E, F, kind=()):
    """All total maps E -> F whose classification contains every given flag.

    Deterministic: results are ordered lexicographically by the tuple of
    images of E.points.  The class-bijective case is enumerated directly
    from class-size matches instead of scanning all |F|^|E| maps.
    """
    want = normalize_flags(kind)
    if CB in want or INV_EMBEDDING in want:
        candidates = _class_structured_maps(E, F)
    else:
        candidates = _all_maps(E, F)
    found = [f for f in candidates if want <= classify_hom(f).flags]
    found.sort(key=lambda f: tuple(f.mapping[p] for p in E.points))
    return found


def disjoint_sum(rels):
    """Disjoint sum of finitely many relations, with canonical injections.

    Points of the i-th summand are renamed (i,p); the injections are
    invariant embeddings.  The empty sum is the empty relation.
    """
    rels = list(rels)
    blocks = []
    for i, er in enumerate(rels):
        for block in er.classes:
            blocks.append([tuple_name(str(i), p) for p in block])
    total = FinER(blocks)
    injections = tuple(
        PointMap(er, total, {p: tuple_name(str(i), p) for p in er.points})
        for i, er in enumerate(rels)
    )
    return total, injections


def cross_product(E, F):
    """Cross product: (x,y) related to (x',y') iff both coordinates are.

    The two projections are class-surjective homomorphisms.
    """
    blocks = []
    for b1 in E.classes:
        for b2 in F.classes:
            blocks.append([tuple_name(x, y) for x in b1 for y in b2])
    prod = FinER(blocks)
    pi1 = PointMap(prod, E, {tuple_name(x, y): x for x in E.points for y in F.points})
    pi2 = PointMap(prod, F, {tuple_name(x, y): y for x in E.points for y in F.points})
    return prod, pi1, pi2


def fiber_product(f, g):
    """Fiber product of two homomorphisms into the same base relation.

    Points are the pairs (y,z) with f(y) = g(z); the projections satisfy
    the commuting square, and pi1 inherits class-injectivity,
    class-surjectivity and being a reduction from g.
    """
    if f.codomain != g.codomain:
        raise InputError("fiber product needs homomorphisms into the same relation")
    for h in (f, g):
        if HOM not in classify_hom(h):
            raise InputError("fiber product arguments must be homomorphisms")
    F, G = f.domain, g.domain
    pts = [(y, z) for y in F.points for z in G.points if f.mapping[y] == g.mapping[z]]
    blocks = {}
    for y, z in pts:
        key = (F.class_index(y), G.class_index(z))
        blocks.setdefault(key, []).append(tuple_name(y, z))
    prod = FinER(blocks.values())
    pi1 = PointMap(prod, F, {tuple_name(y, z): y for y, z in pts})
    pi2 = PointMap(prod, G, {tuple_name(y, z): z for y, z in pts})
    return prod, pi1, pi2


def _shared_points(rels):
    rels = list(rels)
    if not rels:
        raise InputError("need at least one relation")
    pts = rels[0].points
    for er in rels[1:]:
        if er.points != pts:
            raise InputError("relations do not share a point set")
    return rels, pts


def independent(rels):
    """Whether no alternating cycle of distinct points exists.

    A violation is a cycle x_0, ..., x_n (n >= 1) of distinct points with
    x_j related to x_{j+1} by relation number i_j (indices taken cyclically
    back to x_0) where consecutive i_j differ.
    """
    rels, pts = _shared_points(rels)
    k = len(rels)

    def extend(path, used, indices):
        # try to close the cycle or extend it by one more distinct point
        last = path[-1]
        for i in range(k):
            if indices and i == indices[-1]:
                continue
            if len(path) >= 2 and rels[i].related(last, path[0]):
                return True
            for q in pts:
                if q in used or not rels[i].related(last, q) or q == last:
                    continue
                if extend(path + [q], used | {q}, indices + [i]):
                    return True
        return False

    for start in pts:
        if extend([start], {start}, []):
            return False
    return True


def independent_join(rels):
    """Smallest equivalence relation containing each input, plus the
    independence verdict.  The join is returned whether or not the inputs
    are independent."""
    rels, pts = _shared_points(rels)
    parent = {p: p for p in pts}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for er in rels:
        for block in er.classes:
            root = find(block[0])
            for p in block[1:]:
                parent[find(p)] = root
    groups = {}
    for p in pts:
        groups.setdefault(find(p), []).append(p)
    return FinER(groups.values()), independent(rels)


def quotient_by_subrelation(E, D):
    """Collapse each class of a subrelation D of E to a single point.

    Quotient points are named by the minimal member of their D-class; the
    projection is a surjective reduction onto the induced relation.
    """
    if D.points != E.points:
        raise InputError("subrelation must live on the same points")
    for block in D.classes:
        cls = {E.class_index(p) for p in block}
        if len(cls) != 1:
            raise InputError(f"class of {block[0]!r} is not inside a single class of the bigger relation")
    rep = {p: D.class_of(p)[0] for p in E.points}
    blocks = {}
    for block in D.classes:
        blocks.setdefault(E.class_index(block[0]), set()).add(block[0])
    quot = FinER([sorted(b) for b in blocks.values()])
    proj = PointMap(E, quot, rep)
    cls = classify_hom(proj)
    if REDUCTION not in cls or not proj.is_surjective():
        raise ContractViolation("quotient projection failed to be a surjective reduction")
    return quot, proj


def er_isomorphism(E, F):
    """Some isomorphism E -> F (a bijection matching classes onto classes),
    or None.  Two finite relations are isomorphic iff their class-size
    multisets agree, so the witness is assembled class by class."""
    if E.class_sizes() != F.class_sizes():
        return None
    by_size_e, by_size_f = {}, {}
    for b in E.classes:
        by_size_e.setdefault(len(b), []).append(b)
    for b in F.classes:
        by_size_f.setdefault(len(b), []).append(b)
    mapping = {}
    for size, blocks in by_size_e.items():
        for be, bf in zip(blocks, by_size_f[size]):
            mapping.update(dict(zip(be, bf)))
    iso = PointMap(E, F, mapping)
    cls = classify_hom(iso)
    if INV_EMBEDDING not in cls or not iso.is_surjective():
        raise ContractViolation("constructed relation isomorphism is not one")
    return iso


def set_partitions(items):
    """All partitions of a finite sequence, in restricted-growth order."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield ()
        return

    def rec(i, blocks):
        if i == n:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(items[i])
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([items[i]])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(1, [[items[0]]])


def all_relations_up_to(n, prefix="p"):
    """Every FinER on the canonical point sets of sizes 1..n."""
    for m in range(1, n + 1):
        pts = point_names(m, prefix)
        for part in set_partitions(pts):
            yield FinER(part)
