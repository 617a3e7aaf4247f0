"""Coded relations and the generated theories whose structures on another
relation correspond exactly to class-bijective (or class-injective, smooth,
...) maps into a given one.

A relation on n points is coded by k = ceil(log2 n) unary bits per point
(at least one bit even for a single point, so the separation sentence is
not vacuous in the wrong way), together with per-point maps g_i whose
graphs cover the relation: g_i sends a point to the element i steps later
in the cyclic order of its class.  Comparisons across relations of
different sizes pad the coding with constant-false bits.
"""

import itertools

from .errors import InputError, ContractViolation
from .eqrel import FinER, PointMap, classify_hom, CB
from .structures import Language, FinStructure, StructuredER
from . import logic
from .logic import (
    Atom, Eq, Not, Exists, Forall, conj, disj, implies, iff, Theory, TRUE,
)


class CodedER:
    """A relation with an injective bit-coding of its points and a uniform
    family of per-point maps covering the relation."""

    __slots__ = ("er", "bits", "coding", "gmaps")

    def __init__(self, er, bits=None, gmaps=None):
        if not er.points:
            raise InputError("cannot code an empty relation")
        n = len(er.points)
        kmin = max(1, (n - 1).bit_length())
        k = kmin if bits is None else bits
        if k < kmin:
            raise InputError(f"{k} bits cannot code {n} points")
        coding = {
            p: tuple((i >> j) & 1 for j in range(k)) for i, p in enumerate(er.points)
        }
        if gmaps is None:
            depth = max(len(b) for b in er.classes)
            gmaps = []
            for i in range(depth):
                g = {}
                for block in er.classes:
                    for t, p in enumerate(block):
                        g[p] = block[(t + i) % len(block)]
                gmaps.append(g)
        covered = {(p, g[p]) for g in gmaps for p in er.points}
        if covered != set(er.pairs()):
            raise InputError("graphs of the per-point maps must cover the relation exactly")
        object.__setattr__(self, "er", er)
        object.__setattr__(self, "bits", k)
        object.__setattr__(self, "coding", coding)
        object.__setattr__(self, "gmaps", tuple(gmaps))

    def __setattr__(self, name, value):
        raise AttributeError("CodedER is immutable")

    def enumeration(self):
        """Per-point cyclic enumeration of its class: x, g_1(x), g_2(x), ..."""
        return {p: tuple(g[p] for g in self.gmaps)[: len(self.er.class_of(p))] for p in self.er.points}


def code_er(E, bits=None):
    return CodedER(E, bits)


def _bit_symbol(j):
    return f"R{j}"


def _code_literals(coded, point, var):
    lits = []
    for j in range(coded.bits):
        atom = Atom(_bit_symbol(j), (var,))
        lits.append(atom if coded.coding[point][j] else Not(atom))
    return conj(lits)


def _same_code(coded, u, v):
    return conj([iff(Atom(_bit_symbol(j), (u,)), Atom(_bit_symbol(j), (v,))) for j in range(coded.bits)])


class ScottTheory:
    """The generated sentences for a coded relation.

    sigma_h forces every point of a structured class to code a point of the
    relation and the coded map to preserve relatedness; sigma_ci forces
    codes to separate points within a class; sigma_cs forces the coded
    image of a class to be invariant.  Their conjunction characterizes the
    class-bijective maps into the coded relation.
    """

    __slots__ = ("coded", "language", "phi", "sigma_h", "sigma_ci", "sigma_cs", "sigma")

    def __init__(self, coded):
        language = Language([(_bit_symbol(j), 1) for j in range(coded.bits)])
        phi = []
        for g in coded.gmaps:
            phi.append(
                disj([
                    conj([_code_literals(coded, p, "x"), _code_literals(coded, g[p], "y")])
                    for p in coded.er.points
                ])
            )
        sigma_h = Forall("x", Forall("y", disj(phi)))
        sigma_ci = Forall("x", Forall("y", implies(_same_code(coded, "x", "y"), Eq("x", "y"))))
        sigma_cs = Forall("x", conj([Exists("y", f) for f in phi]))
        object.__setattr__(self, "coded", coded)
        object.__setattr__(self, "language", language)
        object.__setattr__(self, "phi", tuple(phi))
        object.__setattr__(self, "sigma_h", sigma_h)
        object.__setattr__(self, "sigma_ci", sigma_ci)
        object.__setattr__(self, "sigma_cs", sigma_cs)
        object.__setattr__(self, "sigma", conj([sigma_h, sigma_ci, sigma_cs]))

    def __setattr__(self, name, value):
        raise AttributeError("ScottTheory is immutable")

    def theory(self):
        return Theory(self.language, self.sigma, name="sigma_E")

    def theory_h(self):
        return Theory(self.language, self.sigma_h, name="sigma_h")

    def theory_ci(self):
        return Theory(self.language, self.sigma_ci, name="sigma_ci")

    def theory_cs(self):
        return Theory(self.language, self.sigma_cs, name="sigma_cs")

    def canonical_structure(self):
        """The self-coding structure: bit j holds of x iff x's code has it."""
        E = self.coded.er
        rels = {
            _bit_symbol(j): [(p,) for p in E.points if self.coded.coding[p][j]]
            for j in range(self.coded.bits)
        }
        return StructuredER(E, FinStructure(self.language, E.points, rels))

    def decode_point(self, A, y):
        """Point of the coded relation whose code matches y's bits, or None."""
        code = tuple(1 if (y,) in A.rel(_bit_symbol(j)) else 0 for j in range(self.coded.bits))
        for p, c in self.coded.coding.items():
            if c == code:
                return p
        return None

    def decode_map(self, A):
        """Read the unique class-bijective map out of a structure satisfying
        the full sentence classwise.  Rejects structures that do not."""
        if not isinstance(A, StructuredER):
            raise InputError("decode needs a structure on an equivalence relation")
        if A.structure.language != self.language:
            raise InputError("structure is over the wrong language")
        if not logic.holds_classwise(A, self.sigma):
            raise InputError("structure does not satisfy the full sentence classwise")
        mapping = {}
        for y in A.er.points:
            p = self.decode_point(A.structure, y)
            if p is None:
                raise InputError(f"code of {y!r} is not the code of any point")
            mapping[y] = p
        f = PointMap(A.er, self.coded.er, mapping)
        if CB not in classify_hom(f):
            raise ContractViolation("decoded map is not class-bijective")
        return f

    def encode_map(self, f):
        """Classwise pullback of the canonical structure along a
        class-bijective map; inverse of decode_map."""
        if f.codomain != self.coded.er:
            raise InputError("map does not land in the coded relation")
        if CB not in classify_hom(f):
            raise InputError("encode needs a class-bijective map")
        F = f.domain
        rels = {
            _bit_symbol(j): [(y,) for y in F.points if self.coded.coding[f.mapping[y]][j]]
            for j in range(self.coded.bits)
        }
        return StructuredER(F, FinStructure(self.language, F.points, rels))

    def variant_theories(self):
        """Sentence variants matching the other map classes: cih for
        class-injective, smh for plain homomorphisms with a chosen
        transversal bit, cssmh for class-surjective ones."""
        coded = self.coded
        p_lang = Language(list(self.language.symbols) + [("P", 1)])

        def unique_matching(x):
            inner = conj([Atom("P", ("y",)), _same_code(coded, x, "y")])
            other = conj([Atom("P", ("z",)), _same_code(coded, x, "z")])
            return Exists("y", conj([inner, Forall("z", implies(other, Eq("z", "y")))]))

        sigma_sm = Forall("x", unique_matching("x"))
        return {
            "cih": Theory(self.language, conj([self.sigma_h, self.sigma_ci]), name="sigma_cih"),
            "sm": Theory(p_lang, sigma_sm, name="sigma_sm"),
            "smh": Theory(p_lang, conj([self.sigma_h, sigma_sm]), name="sigma_smh"),
            "cssmh": Theory(
                p_lang, conj([self.sigma_h, self.sigma_cs, sigma_sm]), name="sigma_cssmh"
            ),
        }


def scott_theory(coded):
    return ScottTheory(coded)


def structures_to_cb(scott, A):
    """Structure satisfying the full sentence -> class-bijective map."""
    return scott.decode_map(A)


def cb_to_structure(scott, f):
    """Class-bijective map -> structure satisfying the full sentence."""
    return scott.encode_map(f)


def decode_raw(scott, A):
    """Partial decoding of any structure over the coding language: for each
    point, the coded preimage point or None.  Used to state the semantic
    table for the h/ci/cs pieces without assuming the full sentence."""
    if isinstance(A, StructuredER):
        er, structure = A.er, A.structure
    else:
        raise InputError("decode_raw needs a structure on an equivalence relation")
    return {y: scott.decode_point(structure, y) for y in er.points}


def all_structures(language, er):
    """Every structure on a relation over a unary language (unary relations
    never cross classes, so all of them are structures on the relation)."""
    for _, ar in language.symbols:
        if ar != 1:
            raise InputError("all_structures is for unary languages only")
    cells = [(name, (p,)) for name, _ in language.symbols for p in er.points]
    for mask in range(1 << len(cells)):
        rels = {name: [] for name, _ in language.symbols}
        for i, (name, t) in enumerate(cells):
            if mask >> i & 1:
                rels[name].append(t)
        yield StructuredER(er, FinStructure(language, er.points, rels))
