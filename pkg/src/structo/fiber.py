"""Finite fiber spaces over equivalence relations.

A fiber space is a surjective class-bijective map from a total relation
onto a base relation; class-bijectivity forces a canonical transport
bijection between the fibers over related base points.  This module builds
the tautological fiber space of a relation, pullbacks, the correspondence
with permutation cocycles, the correspondence between maps of relations
and maps of tautological fiber spaces, the three-stage factorization of a
fiber space map, and the structured expansion of a fiber space.
"""

import itertools
from dataclasses import dataclass

from .errors import InputError, ContractViolation
from .eqrel import FinER, PointMap, classify_hom, tuple_name, HOM, CB
from .structures import FinStructure, pushforward
from . import logic
from .logic import models, eval_formula
from .constructions import Cocycle, skew_product


class FiberSpace:
    """Total relation, base relation, and a surjective class-bijective
    projection between them."""

    __slots__ = ("total", "base", "proj", "_fibers")

    def __init__(self, total, base, proj):
        if proj.domain != total or proj.codomain != base:
            raise InputError("projection endpoints do not match the spaces")
        flags = classify_hom(proj)
        if HOM not in flags or CB not in flags:
            raise InputError("projection must be a class-bijective homomorphism")
        if not proj.is_surjective():
            raise InputError("projection must be surjective")
        fibers = {x: [] for x in base.points}
        for u in total.points:
            fibers[proj.mapping[u]].append(u)
        fibers = {x: tuple(sorted(us)) for x, us in fibers.items()}
        for block in base.classes:
            sizes = {len(fibers[x]) for x in block}
            if len(sizes) != 1:
                raise ContractViolation("fibers over one class differ in size")
        object.__setattr__(self, "total", total)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "proj", proj)
        object.__setattr__(self, "_fibers", fibers)

    def __setattr__(self, name, value):
        raise AttributeError("FiberSpace is immutable")

    def fiber(self, x):
        try:
            return self._fibers[x]
        except KeyError:
            raise InputError(f"unknown base point {x!r}") from None

    def transport(self, x, y):
        """The bijection fiber(x) -> fiber(y) matching each point with the
        unique related one.  Requires related base points."""
        if not self.base.related(x, y):
            raise InputError(f"base points {x!r}, {y!r} are unrelated")
        out = {}
        for u in self.fiber(x):
            matches = [v for v in self.fiber(y) if self.total.related(u, v)]
            if len(matches) != 1:
                raise ContractViolation("transport is not uniquely defined")
            out[u] = matches[0]
        return out

    def uniform_size(self):
        sizes = {len(f) for f in self._fibers.values()}
        return sizes.pop() if len(sizes) == 1 else None

    def __eq__(self, other):
        return (
            isinstance(other, FiberSpace)
            and self.total == other.total
            and self.base == other.base
            and self.proj == other.proj
        )

    def __hash__(self):
        return hash((self.total, self.base, self.proj))

    def __repr__(self):
        return f"FiberSpace[{self.total!r} over {self.base!r}]"


class FiberMap:
    """A map of fiber spaces: compatible maps of bases and totals.  Flags
    record how it acts fiber by fiber."""

    __slots__ = ("src", "dst", "base_map", "total_map", "fiber_injective", "fiber_surjective")

    def __init__(self, src, dst, base_map, total_map):
        if base_map.domain != src.base or base_map.codomain != dst.base:
            raise InputError("base map endpoints do not match")
        if total_map.domain != src.total or total_map.codomain != dst.total:
            raise InputError("total map endpoints do not match")
        if HOM not in classify_hom(base_map) or HOM not in classify_hom(total_map):
            raise InputError("fiber space maps must be homomorphisms")
        for u in src.total.points:
            if dst.proj.mapping[total_map.mapping[u]] != base_map.mapping[src.proj.mapping[u]]:
                raise InputError(f"square does not commute at {u!r}")
        fi = fs = True
        for x in src.base.points:
            images = [total_map.mapping[u] for u in src.fiber(x)]
            target = dst.fiber(base_map.mapping[x])
            if len(set(images)) != len(images):
                fi = False
            if set(images) != set(target):
                fs = False
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "base_map", base_map)
        object.__setattr__(self, "total_map", total_map)
        object.__setattr__(self, "fiber_injective", fi)
        object.__setattr__(self, "fiber_surjective", fs)

    def __setattr__(self, name, value):
        raise AttributeError("FiberMap is immutable")

    @property
    def fiber_bijective(self):
        return self.fiber_injective and self.fiber_surjective

    def __eq__(self, other):
        return (
            isinstance(other, FiberMap)
            and self.src == other.src
            and self.dst == other.dst
            and self.base_map == other.base_map
            and self.total_map == other.total_map
        )

    def __hash__(self):
        return hash((self.src, self.dst, self.base_map, self.total_map))

    def __repr__(self):
        return f"FiberMap[{self.base_map!r}; {self.total_map!r}]"


def compose_fiber_maps(m2, m1):
    if m1.dst != m2.src:
        raise InputError("fiber maps are not composable")
    return FiberMap(m1.src, m2.dst, m2.base_map.compose(m1.base_map), m2.total_map.compose(m1.total_map))


# ---------------------------------------------------------------------------
# Tautological fiber space and the map correspondence


def tautological(E):
    """The fiber space whose fiber over a class is the class itself: points
    are the related pairs (x, x'), two pairs are related when their second
    coordinates agree, and the projection keeps the first coordinate."""
    blocks = {}
    mapping = {}
    for x, y in E.pairs():
        name = tuple_name(x, y)
        blocks.setdefault(y, []).append(name)
        mapping[name] = x
    total = FinER(blocks.values())
    proj = PointMap(total, E, mapping)
    return FiberSpace(total, E, proj)


def hom_to_fiber_map(f):
    """A map of relations induces a map of tautological fiber spaces acting
    coordinatewise on pairs."""
    if HOM not in classify_hom(f):
        raise InputError("need a homomorphism")
    src, dst = tautological(f.domain), tautological(f.codomain)
    total_map = PointMap(
        src.total,
        dst.total,
        {
            tuple_name(x, y): tuple_name(f.mapping[x], f.mapping[y])
            for x, y in f.domain.pairs()
        },
    )
    return FiberMap(src, dst, f, total_map)


def fiber_map_companion(m):
    """Recover, from any map between tautological fiber spaces, the
    relation map its second coordinates trace out.  The correspondence
    between maps of relations and equivalence classes of maps of
    tautological fiber spaces inverts hom_to_fiber_map up to equivalence."""
    E = m.src.base
    F = m.dst.base
    companion = {}
    for x, y in E.pairs():
        image = m.total_map.mapping[tuple_name(x, y)]
        # dst total points sit in the fiber over their second coordinate;
        # recover it as the point whose fiber contains the image
        for q in F.points:
            if image in m.dst.fiber(q):
                if y in companion and companion[y] != q:
                    raise ContractViolation("companion is not well defined")
                companion[y] = q
                break
    comp = PointMap(E, F, companion)
    if HOM not in classify_hom(comp):
        raise ContractViolation("companion of a fiber space map is not a homomorphism")
    return comp


def fiber_maps_equivalent(m1, m2):
    """Total maps landing in the same class at every point."""
    if m1.src != m2.src or m1.dst != m2.dst:
        return False
    return all(
        m1.dst.total.related(m1.total_map.mapping[u], m2.total_map.mapping[u])
        for u in m1.src.total.points
    )


def enumerate_fiber_maps(S1, S2):
    """All fiber space maps S1 -> S2, by backtracking over total points
    constrained to land in the right fiber and respect relatedness."""
    out = []
    from .eqrel import _all_maps

    for base in _all_maps(S1.base, S2.base):
        if HOM not in classify_hom(base):
            continue
        order = list(S1.total.points)
        n = len(order)
        assign = {}

        def rec(i):
            if i == n:
                total = PointMap(S1.total, S2.total, dict(assign))
                if HOM in classify_hom(total):
                    out.append(FiberMap(S1, S2, base, total))
                return
            u = order[i]
            for v in S2.fiber(base.mapping[S1.proj.mapping[u]]):
                ok = True
                for w, img in assign.items():
                    if S1.total.related(u, w) and not S2.total.related(v, img):
                        ok = False
                        break
                if ok:
                    assign[u] = v
                    rec(i + 1)
                    del assign[u]

        rec(0)
    return out


# ---------------------------------------------------------------------------
# Pullback


def pullback_fiber(S, f):
    """Pull a fiber space back along a map into its base.  The new total
    space lives on pairs (new base point, old total point over its image);
    the second projection is a fiber map over f."""
    if f.codomain != S.base:
        raise InputError("map does not land in the base of the fiber space")
    if HOM not in classify_hom(f):
        raise InputError("pullback needs a homomorphism")
    F = f.domain
    pts = [(y, u) for y in F.points for u in S.fiber(f.mapping[y])]
    blocks = {}
    for y, u in pts:
        key = (F.class_index(y), S.total.class_index(u))
        blocks.setdefault(key, []).append(tuple_name(y, u))
    total = FinER(blocks.values())
    proj = PointMap(total, F, {tuple_name(y, u): y for y, u in pts})
    pulled = FiberSpace(total, F, proj)
    into_old = PointMap(total, S.total, {tuple_name(y, u): u for y, u in pts})
    return pulled, FiberMap(pulled, S, f, into_old)


# ---------------------------------------------------------------------------
# Cocycles


def cocycle_of(S, enumeration=None):
    """The permutation cocycle of a fiber space with uniform fiber size,
    relative to an enumeration of each fiber (sorted order by default):
    alpha(x,y) is the transport read through the enumerations."""
    n = S.uniform_size()
    if n is None:
        sizes = sorted({len(S.fiber(x)) for x in S.base.points})
        raise InputError(f"fiber sizes {sizes} are not uniform; partition by size first")
    if enumeration is None:
        enumeration = {x: S.fiber(x) for x in S.base.points}
    for x in S.base.points:
        if tuple(sorted(enumeration[x])) != S.fiber(x):
            raise InputError(f"enumeration at {x!r} does not list the fiber")
    fiber = tuple(str(i) for i in range(n))
    values = {}
    for x, y in S.base.pairs():
        tr = S.transport(x, y)
        ex, ey = list(enumeration[x]), list(enumeration[y])
        values[(x, y)] = {str(i): str(ey.index(tr[ex[i]])) for i in range(n)}
    return Cocycle(S.base, fiber, values)


def fiberspace_of(alpha):
    """The skew product of the base with the cocycle's fiber, as a fiber
    space."""
    sk = skew_product(alpha.base, alpha)
    return FiberSpace(sk.space, sk.base, sk.projection)


def fiberwise_iso(S1, S2):
    """A total-space bijection over the identity of the shared base, or
    None.  Searched by anchoring one fiber bijection per base class and
    extending along transport."""
    if S1.base != S2.base:
        return None
    if any(len(S1.fiber(x)) != len(S2.fiber(x)) for x in S1.base.points):
        return None
    anchors = [block[0] for block in S1.base.classes]
    options = []
    for x0 in anchors:
        f1 = S1.fiber(x0)
        options.append([dict(zip(f1, perm)) for perm in itertools.permutations(S2.fiber(x0))])
    for combo in itertools.product(*options):
        mapping = {}
        for x0, anchor_bij in zip(anchors, combo):
            for x in S1.base.class_of(x0):
                t1 = S1.transport(x0, x)
                t2 = S2.transport(x0, x)
                for u in S1.fiber(x0):
                    mapping[t1[u]] = t2[anchor_bij[u]]
        candidate = PointMap(S1.total, S2.total, mapping)
        if not candidate.is_injective():
            continue
        ok = all(
            S1.total.related(u, v) == S2.total.related(mapping[u], mapping[v])
            for u in S1.total.points
            for v in S1.total.points
        )
        if ok and S2.proj.compose(candidate) == S1.proj:
            return candidate
    return None


def cohomologous(alpha, beta):
    """A pointwise change of fiber coordinates turning one cocycle into the
    other, or None.  Anchored per class and propagated."""
    if alpha.base != beta.base or len(alpha.fiber) != len(beta.fiber):
        return None
    E = alpha.base
    fiber_a, fiber_b = alpha.fiber, beta.fiber
    anchors = [block[0] for block in E.classes]
    options = [
        [dict(zip(fiber_a, perm)) for perm in itertools.permutations(fiber_b)]
        for _ in anchors
    ]
    for combo in itertools.product(*options):
        phi = {}
        for x0, p0 in zip(anchors, combo):
            for x in E.class_of(x0):
                a = alpha.values[(x0, x)]
                b = beta.values[(x0, x)]
                inv_a = {v: k for k, v in a.items()}
                phi[x] = {v: b[p0[inv_a[v]]] for v in fiber_a}
        ok = all(
            {v: phi[y][alpha.values[(x, y)][v]] for v in fiber_a}
            == {v: beta.values[(x, y)][phi[x][v]] for v in fiber_a}
            for x, y in E.pairs()
        )
        if ok:
            return phi
    return None


def partition_by_fiber_size(S):
    """Restrict to the base classes of each fiber size; the cocycle
    correspondence applies to each part separately."""
    by_size = {}
    for block in S.base.classes:
        by_size.setdefault(len(S.fiber(block[0])), []).extend(block)
    out = []
    for size in sorted(by_size):
        base = S.base.restrict(by_size[size])
        total_pts = [u for u in S.total.points if S.proj.mapping[u] in set(by_size[size])]
        total = S.total.restrict(total_pts)
        proj = PointMap(total, base, {u: S.proj.mapping[u] for u in total.points})
        out.append(FiberSpace(total, base, proj))
    return out


# ---------------------------------------------------------------------------
# Factorization of fiber space maps


def fiber_factorize(m):
    """Factor a fiber space map into a fiberwise surjection onto its image
    in the pullback, the inclusion of that image, and the fiber-bijective
    projection of the pullback."""
    S, T = m.src, m.dst
    pulled, third = pullback_fiber(T, m.base_map)
    canonical = {
        u: tuple_name(S.proj.mapping[u], m.total_map.mapping[u]) for u in S.total.points
    }
    image_pts = sorted(set(canonical.values()))
    # the canonical map into the pullback is fiberwise over the base, hence
    # class-bijective, so its image is a union of pullback classes
    try:
        image_total = pulled.total.restrict(image_pts)
    except InputError as e:
        raise ContractViolation(f"image of the canonical map is not invariant: {e}") from None
    image_proj = PointMap(
        image_total, S.base, {p: pulled.proj.mapping[p] for p in image_total.points}
    )
    image_space = FiberSpace(image_total, S.base, image_proj)
    stage1 = FiberMap(
        S,
        image_space,
        PointMap.identity(S.base),
        PointMap(S.total, image_total, canonical),
    )
    stage2 = FiberMap(
        image_space,
        pulled,
        PointMap.identity(S.base),
        PointMap(image_total, pulled.total, {p: p for p in image_total.points}),
    )
    if not stage1.fiber_surjective:
        raise ContractViolation("first stage is not fiberwise surjective")
    if not stage2.fiber_injective:
        raise ContractViolation("second stage is not fiberwise injective")
    if not third.fiber_bijective:
        raise ContractViolation("third stage is not fiber-bijective")
    composite = compose_fiber_maps(third, compose_fiber_maps(stage2, stage1))
    if composite.base_map != m.base_map or composite.total_map != m.total_map:
        raise ContractViolation("stages do not recompose to the input")
    return stage1, stage2, third


# ---------------------------------------------------------------------------
# Structures on fiber spaces and the structured expansion


def check_fiber_structure(S, A, sentence=None):
    """Validate a structure on the total space of a fiber space: tuples
    stay inside fibers, transport carries the structure on one fiber to the
    structure on any related fiber, and (optionally) every fiber satisfies
    a sentence."""
    if A.universe != S.total.points:
        raise InputError("structure does not live on the total space")
    for name, tuples in A.relations.items():
        for t in tuples:
            if t and len({S.proj.mapping[p] for p in t}) != 1:
                raise InputError(f"tuple {t!r} of {name!r} crosses fibers")
    for x, y in S.base.pairs():
        tr = S.transport(x, y)
        moved = pushforward(A.restrict(S.fiber(x)), tr)
        if moved != A.restrict(S.fiber(y)):
            raise InputError(f"structures over {x!r} and {y!r} disagree under transport")
    if sentence is not None:
        for x in S.base.points:
            if not eval_formula(A.restrict(S.fiber(x)), sentence):
                raise InputError(f"fiber over {x!r} does not satisfy the sentence")


@dataclass
class FiberLtimesResult:
    """The structured expansion of a fiber space: a fiber space over the
    expanded base, its fiber-bijective projection map, and the canonical
    fiberwise structure."""

    space: FiberSpace
    projection: FiberMap
    structure: FinStructure
    base_models: dict
    source: FiberSpace
    theory: object


def fiber_ltimes(S, theory):
    """New base point (x, model on the fiber over x); base classes glue
    points whose models correspond under transport; the total space is the
    pullback of the original."""
    E = S.base
    base_models = {}
    for block in E.classes:
        base_models[block] = models(theory, S.fiber(block[0]))
    blocks = []
    naming = {}
    for block in E.classes:
        x0 = block[0]
        ms = base_models[block]
        for idx, model in enumerate(ms):
            nb = []
            for x in block:
                moved = pushforward(model, S.transport(x0, x))
                local = models(theory, S.fiber(x))
                j = local.index(moved)
                name = tuple_name(x, f"m{j}")
                naming[(x, idx)] = name
                nb.append(name)
            blocks.append(nb)
    new_base = FinER(blocks)
    base_proj = PointMap(new_base, E, {
        naming[(x, idx)]: x
        for block in E.classes
        for idx in range(len(base_models[block]))
        for x in block
    })
    total_pts = []
    rels = {name: [] for name in theory.language.names()}
    for block in E.classes:
        x0 = block[0]
        for idx, model in enumerate(base_models[block]):
            for x in block:
                z = naming[(x, idx)]
                moved = pushforward(model, S.transport(x0, x))
                for u in S.fiber(x):
                    total_pts.append((z, u))
                for name, tuples in moved.relations.items():
                    for t in tuples:
                        rels[name].append(tuple(tuple_name(z, p) for p in t))
    tblocks = {}
    for z, u in total_pts:
        key = (new_base.class_index(z), S.total.class_index(u))
        tblocks.setdefault(key, []).append(tuple_name(z, u))
    new_total = FinER(tblocks.values())
    new_proj = PointMap(new_total, new_base, {tuple_name(z, u): z for z, u in total_pts})
    space = FiberSpace(new_total, new_base, new_proj)
    structure = FinStructure(theory.language, new_total.points, rels)
    check_fiber_structure(space, structure, theory.sentence)
    projection = FiberMap(
        space,
        S,
        base_proj,
        PointMap(new_total, S.total, {tuple_name(z, u): u for z, u in total_pts}),
    )
    if not projection.fiber_bijective:
        raise ContractViolation("expansion projection is not fiber-bijective")
    return FiberLtimesResult(space, projection, structure, base_models, S, theory)


def fiberwise_pullback_structure(m, A):
    """Pull a fiberwise structure back along a fiber space map."""
    rels = {}
    src = m.src
    for name, ar in A.language.symbols:
        have = A.relations[name]
        out = []
        for x in src.base.points:
            for t in itertools.product(src.fiber(x), repeat=ar):
                if tuple(m.total_map.mapping[p] for p in t) in have:
                    out.append(t)
        rels[name] = out
    return FinStructure(A.language, src.total.points, rels)


def fiber_ltimes_universal_map(result, m, A):
    """The unique fiber-bijective map into the expansion compatible with a
    fiber-bijective map to the source and a fiberwise structure satisfying
    the theory."""
    S, theory = result.source, result.theory
    if m.dst != S:
        raise InputError("map does not land in the expanded fiber space's source")
    if not m.fiber_bijective:
        raise InputError("universal map needs a fiber-bijective map")
    check_fiber_structure(m.src, A, theory.sentence)
    Q = m.src
    base_mapping = {}
    total_mapping = {}
    for y in Q.base.points:
        x = m.base_map.mapping[y]
        push = {u: m.total_map.mapping[u] for u in Q.fiber(y)}
        moved = pushforward(A.restrict(Q.fiber(y)), push)
        local = models(theory, S.fiber(x))
        try:
            j = local.index(moved)
        except ValueError:
            raise ContractViolation("pushforward of a satisfying fiber structure is not a model") from None
        z = tuple_name(x, f"m{j}")
        base_mapping[y] = z
        for u in Q.fiber(y):
            total_mapping[u] = tuple_name(z, push[u])
    lifted = FiberMap(
        Q,
        result.space,
        PointMap(Q.base, result.space.base, base_mapping),
        PointMap(Q.total, result.space.total, total_mapping),
    )
    if not lifted.fiber_bijective:
        raise ContractViolation("lifted fiber map is not fiber-bijective")
    composed = compose_fiber_maps(result.projection, lifted)
    if composed.base_map != m.base_map or composed.total_map != m.total_map:
        raise ContractViolation("lifted fiber map does not commute with the projection")
    if fiberwise_pullback_structure(lifted, result.structure) != A:
        raise ContractViolation("lifted fiber map does not pull the canonical structure back")
    return lifted
