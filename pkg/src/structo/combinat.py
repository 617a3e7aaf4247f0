"""Intersecting set families, their threshold reduction, duplication
formulas, and the graph constructions on equivalence relations.

The reduction of a large uniform intersecting family repeatedly passes to
the subsets of a fixed smaller size contained in at least a threshold
number of members.  With the threshold standing in for "infinitely many",
a stage can come out non-intersecting or empty; those runs are reported as
threshold artifacts rather than being papered over.

Graph side: every relation with classes of size at least two carries a
connected bipartite graph per class, and subdividing every edge of a
graphing into a k-edge path makes every cycle length divisible by k.
"""

import itertools
from dataclasses import dataclass

from .errors import InputError, ContractViolation
from .eqrel import FinER, PointMap, classify_hom, tuple_name, EMBEDDING
from .structures import Language, FinStructure
from .logic import (
    Atom, Eq, Not, Exists, Forall, conj, disj, implies, eval_formula, TRUE,
)
from . import structures as _structures
from .logic import models as _models
from .structures import EMPTY_LANGUAGE


class SetFamily:
    """A family of equally-sized subsets of a finite ground set."""

    __slots__ = ("ground", "sets", "arity")

    def __init__(self, ground, sets):
        ground = tuple(sorted(set(ground)))
        fam = []
        seen = set()
        gset = set(ground)
        for s in sets:
            s = frozenset(s)
            if not s <= gset:
                raise InputError(f"member {sorted(s)} is not a subset of the ground set")
            if s not in seen:
                seen.add(s)
                fam.append(s)
        sizes = {len(s) for s in fam}
        if len(sizes) > 1:
            raise InputError(f"member sizes {sorted(sizes)} are not uniform")
        arity = sizes.pop() if sizes else 0
        if arity == 0 and fam:
            raise InputError("members may not be empty")
        fam.sort(key=lambda s: tuple(sorted(s)))
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "sets", tuple(fam))
        object.__setattr__(self, "arity", arity)

    def __setattr__(self, name, value):
        raise AttributeError("SetFamily is immutable")

    def __len__(self):
        return len(self.sets)

    def __repr__(self):
        body = ", ".join("{" + " ".join(sorted(s)) + "}" for s in self.sets)
        return f"SetFamily[{body}]"


def intersecting_check(family):
    """Nonempty, and every two members meet."""
    if not family.sets:
        return False
    return all(a & b for a, b in itertools.combinations(family.sets, 2))


def intersecting_witness(family):
    """A disjoint pair of members, or None."""
    for a, b in itertools.combinations(family.sets, 2):
        if not (a & b):
            return (a, b)
    return None


def frequent_subsets(family, m, threshold):
    """The m-element subsets contained in at least `threshold` members."""
    if not 1 <= m < family.arity:
        raise InputError("need 1 <= m < member size")
    counts = {}
    for member in family.sets:
        for sub in itertools.combinations(sorted(member), m):
            counts[frozenset(sub)] = counts.get(frozenset(sub), 0) + 1
    chosen = [s for s, c in counts.items() if c >= threshold]
    return SetFamily(family.ground, chosen)


@dataclass
class ReduceStage:
    family: SetFamily
    m: object
    intersecting: bool
    witness: object


@dataclass
class ReduceTrace:
    stages: tuple
    status: str  # ok | artifact-empty | artifact-not-intersecting
    terminal: SetFamily
    threshold: int

    @property
    def ok(self):
        return self.status == "ok"

    @property
    def core(self):
        if not self.ok:
            return None
        return frozenset().union(*self.terminal.sets) if self.terminal.sets else frozenset()

    def lines(self):
        out = [f"threshold {self.threshold}"]
        for st in self.stages:
            mark = "ok" if st.intersecting else f"NOT intersecting: {sorted(map(sorted, st.witness))}"
            out.append(f"  m={st.m}: {len(st.family)} members [{mark}]")
        out.append(f"status {self.status}; terminal {len(self.terminal)} members")
        if self.ok:
            out.append("core {" + " ".join(sorted(self.core)) + "}")
        return out


def family_reduce(family, threshold):
    """Shrink an intersecting family below the threshold.

    While the family has at least `threshold` members: take the greatest
    m below the member size whose frequent m-subsets are nonempty and
    recurse into them.  Each stage is certified as intersecting; a
    non-intersecting or impossible stage stops the run as a threshold
    artifact, with the witness attached.
    """
    if threshold < 2:
        raise InputError("threshold must be at least 2")
    if not intersecting_check(family):
        raise InputError("family must be intersecting and nonempty")
    stages = []
    current = family
    while len(current) >= threshold:
        chosen = None
        for m in range(current.arity - 1, 0, -1):
            nxt = frequent_subsets(current, m, threshold)
            if nxt.sets:
                chosen = (m, nxt)
                break
        if chosen is None:
            return ReduceTrace(tuple(stages), "artifact-empty", current, threshold)
        m, nxt = chosen
        witness = intersecting_witness(nxt)
        stages.append(ReduceStage(nxt, m, witness is None, witness))
        if witness is not None:
            return ReduceTrace(tuple(stages), "artifact-not-intersecting", nxt, threshold)
        current = nxt
    return ReduceTrace(tuple(stages), "ok", current, threshold)


def finite_core(family, threshold):
    """Union of the terminal family of a successful reduction, or None on a
    threshold artifact."""
    return family_reduce(family, threshold).core


# ---------------------------------------------------------------------------
# Duplication-failure formulas


def _distinct(vs):
    return conj([Not(Eq(a, b)) for a, b in itertools.combinations(vs, 2)])


def _diagram(sub, pattern, vs):
    """The induced structure on vs matches the pattern under position
    correspondence."""
    clauses = []
    idx = {p: i for i, p in enumerate(pattern.universe)}
    for name, ar in sub.symbols:
        have = pattern.relations[name]
        for combo in itertools.product(pattern.universe, repeat=ar):
            atom = Atom(name, tuple(vs[idx[p]] for p in combo))
            clauses.append(atom if combo in have else Not(atom))
    return conj(clauses)


@dataclass
class WdpBattery:
    """Deterministic enumeration of (sublanguage, size, pattern) triples
    with, for each, the sentence "these points form a copy of the pattern
    meeting every other copy", and the prioritized disjunctions per size."""

    language: Language
    triples: tuple
    psis: tuple
    phis: dict

    def fired_index(self, A):
        """Least triple whose copy-and-meets formula holds somewhere."""
        for k, psi in enumerate(self.psis):
            n = self.triples[k][1]
            vs = [f"x{i}" for i in range(n)]
            for combo in itertools.product(A.universe, repeat=n):
                if len(set(combo)) != n:
                    continue
                if eval_formula(A, psi, dict(zip(vs, combo))):
                    return k
        return None

    def family_of(self, A, n):
        """The sets carved out by the priority disjunction of size n."""
        phi = self.phis.get(n)
        if phi is None:
            return SetFamily(A.universe, [])
        vs = [f"x{i}" for i in range(n)]
        found = []
        for combo in itertools.product(A.universe, repeat=n):
            if len(set(combo)) != n:
                continue
            if eval_formula(A, phi, dict(zip(vs, combo))):
                found.append(frozenset(combo))
        return SetFamily(A.universe, found)


def wdp_formulas(language, max_size, max_index):
    """Build the battery up to a pattern size and a triple count.

    Triples are ordered by (size, sublanguage position, pattern position);
    the formula for size n fires for the least triple that holds at all,
    so at most one size yields a nonempty family.
    """
    if max_size < 1 or max_index < 1:
        raise InputError("bounds must be positive")
    triples = []
    for n in range(1, max_size + 1):
        for sub in language.sublanguages():
            universe = [f"f{i}" for i in range(n)]
            for pattern in _models(_theory_of(sub), universe):
                triples.append((sub, n, pattern))
                if len(triples) >= max_index:
                    break
            if len(triples) >= max_index:
                break
        if len(triples) >= max_index:
            break
    psis = []
    for sub, n, pattern in triples:
        vs = [f"x{i}" for i in range(n)]
        ws = [f"y{i}" for i in range(n)]
        here = conj([_distinct(vs), _diagram(sub, pattern, vs)])
        other = conj([_distinct(ws), _diagram(sub, pattern, ws)])
        meets = disj([Eq(w, v) for w in ws for v in vs])
        closure = other
        clause = implies(other, meets)
        for w in reversed(ws):
            clause = Forall(w, clause)
        psis.append(conj([here, clause]))
    phis = {}
    for k, (sub, n, pattern) in enumerate(triples):
        vs = [f"x{i}" for i in range(n)]
        guard = [Not(_exists_tuple(psis[j], triples[j][1])) for j in range(k)]
        disjunct = conj([psis[k]] + guard)
        phis.setdefault(n, []).append(disjunct)
    phis = {n: disj(ds) for n, ds in phis.items()}
    return WdpBattery(language, tuple(triples), tuple(psis), phis)


def _exists_tuple(psi, n):
    out = psi
    for i in reversed(range(n)):
        out = Exists(f"x{i}", out)
    return out


def _theory_of(language):
    from .logic import Theory

    return Theory(language, TRUE, name="any")


def intersecting_family_from_failure(battery, A):
    """For a structure failing the duplication property at the battery's
    bounds: the unique size whose formula carves out a family, which is
    then certified intersecting.  Returns (size, family) or None."""
    nonempty = []
    for n in sorted(battery.phis):
        fam = battery.family_of(A, n)
        if fam.sets:
            nonempty.append((n, fam))
    if not nonempty:
        return None
    if len(nonempty) != 1:
        raise ContractViolation("priority disjunction fired at two sizes")
    n, fam = nonempty[0]
    if not intersecting_check(fam):
        raise ContractViolation("carved-out family is not intersecting")
    return n, fam


# ---------------------------------------------------------------------------
# Graphings


class Graphing:
    """Symmetric irreflexive edges inside the classes of a relation,
    connecting each class."""

    __slots__ = ("er", "edges")

    def __init__(self, er, edges):
        norm = set()
        for e in edges:
            e = tuple(e)
            if len(e) != 2 or e[0] == e[1]:
                raise InputError(f"bad edge {e!r}")
            u, v = e
            if not er.related(u, v):
                raise InputError(f"edge ({u},{v}) crosses classes")
            norm.add(frozenset((u, v)))
        object.__setattr__(self, "er", er)
        object.__setattr__(self, "edges", frozenset(norm))
        for block in er.classes:
            if not self._connected(block):
                raise InputError(f"class of {block[0]!r} is not connected by the edges")

    def __setattr__(self, name, value):
        raise AttributeError("Graphing is immutable")

    def _connected(self, block):
        if len(block) == 1:
            return True
        adj = self.adjacency()
        seen = {block[0]}
        todo = [block[0]]
        while todo:
            u = todo.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return seen == set(block)

    def adjacency(self):
        adj = {p: [] for p in self.er.points}
        for e in self.edges:
            u, v = sorted(e)
            adj[u].append(v)
            adj[v].append(u)
        return {p: sorted(vs) for p, vs in adj.items()}

    def sorted_edges(self):
        return tuple(sorted(tuple(sorted(e)) for e in self.edges))

    def __repr__(self):
        body = " ".join(f"({u},{v})" for u, v in self.sorted_edges())
        return f"Graphing[{body}]"


def bipartite_graphing(E):
    """Split every class into its first and second half (canonical order)
    and connect the halves completely; connected and two-colorable."""
    edges = []
    for block in E.classes:
        if len(block) < 2:
            raise InputError(f"class of {block[0]!r} has a single point; no bipartite split")
        half = len(block) // 2
        left, right = block[:half], block[half:]
        for u in left:
            for v in right:
                edges.append((u, v))
    g = Graphing(E, edges)
    if not is_bipartite_per_class(g):
        raise ContractViolation("complete bipartite graphing is not two-colorable")
    return g


def is_bipartite_per_class(g):
    adj = g.adjacency()
    color = {}
    for block in g.er.classes:
        color[block[0]] = 0
        todo = [block[0]]
        while todo:
            u = todo.pop()
            for v in adj[u]:
                if v not in color:
                    color[v] = 1 - color[u]
                    todo.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def k_subdivide(g, k):
    """Replace each edge (oriented lexicographically) by a path through
    k-1 fresh points.  The inclusion of the old points is an embedding
    whose image meets every new class."""
    if k < 1:
        raise InputError("k must be at least 1")
    if k == 1:
        incl = PointMap(g.er, g.er, {p: p for p in g.er.points})
        return g, incl
    blocks = []
    edges = []
    for block in g.er.classes:
        new_block = list(block)
        for u, v in sorted(tuple(sorted(e)) for e in g.edges):
            if u not in set(block):
                continue
            path = [u] + [tuple_name(u, v, str(i)) for i in range(1, k)] + [v]
            new_block.extend(path[1:-1])
            edges.extend(zip(path, path[1:]))
        blocks.append(new_block)
    new_er = FinER(blocks)
    out = Graphing(new_er, edges)
    incl = PointMap(g.er, new_er, {p: p for p in g.er.points})
    flags = classify_hom(incl)
    if EMBEDDING not in flags:
        raise ContractViolation("inclusion into the subdivision is not an embedding")
    touched = {new_er.class_index(p) for p in g.er.points}
    if touched != set(range(len(new_er.classes))):
        raise ContractViolation("inclusion image misses a class of the subdivision")
    return out, incl


def simple_cycle_lengths(g):
    """Lengths of all simple cycles, by DFS from each minimal vertex.

    A cycle is counted once: its start is its minimal vertex and its second
    vertex is smaller than its last.
    """
    adj = g.adjacency()
    lengths = []

    def extend(start, path, on_path):
        u = path[-1]
        for v in adj[u]:
            if v == start and len(path) >= 3:
                if path[1] < path[-1]:
                    lengths.append(len(path))
            elif v > start and v not in on_path:
                path.append(v)
                on_path.add(v)
                extend(start, path, on_path)
                on_path.discard(v)
                path.pop()

    for start in g.er.points:
        extend(start, [start], {start})
    return sorted(lengths)


def cycles_divisible(g, k):
    """Exact check that every simple cycle length is a multiple of k."""
    if k <= 1:
        return True
    return all(length % k == 0 for length in simple_cycle_lengths(g))


def mod_k_potential(g, k):
    """Search for a labeling of the points by residues such that every edge
    steps by one (up to direction).  Existence is necessary for all cycle
    lengths to be multiples of k, and for k <= 2 it is also sufficient; for
    larger k it is a fast filter only (a four-cycle admits a labeling mod
    three), so the authoritative check is cycles_divisible."""
    if k == 1:
        return {p: 0 for p in g.er.points}
    adj = g.adjacency()
    label = {}

    def assign(block, order):
        def rec(i):
            if i == len(order):
                return True
            u = order[i]
            options = set()
            for v in adj[u]:
                if v in label:
                    options.update({(label[v] + 1) % k, (label[v] - 1) % k})
            if not options:
                options = {0}
            for val in sorted(options):
                ok = all(
                    (val - label[v]) % k in (1, k - 1)
                    for v in adj[u]
                    if v in label
                )
                if ok:
                    label[u] = val
                    if rec(i + 1):
                        return True
                    del label[u]
            return False

        return rec(0)

    for block in g.er.classes:
        order = _bfs_order(block, adj)
        if not assign(block, order):
            return None
    return dict(label)


def _bfs_order(block, adj):
    seen = {block[0]}
    order = [block[0]]
    i = 0
    while i < len(order):
        for v in adj[order[i]]:
            if v not in seen:
                seen.add(v)
                order.append(v)
        i += 1
    for p in block:
        if p not in seen:
            seen.add(p)
            order.append(p)
    return order
