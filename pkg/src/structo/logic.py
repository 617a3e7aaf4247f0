"""Formula AST, s-expression parser, evaluation, and model search.

The implemented logic is a finitary fragment: finite n-ary conjunction and
disjunction, negation, equality, and one-variable quantifiers.  Countable
connectives are not needed at finite scale, since every generated sentence
in this package only ever quantifies over finite data.

Satisfaction of a sentence *on an equivalence relation* is classwise: the
structure restricted to each class must satisfy the sentence, with
quantifiers ranging over that class only.

Model search enumerates relation assignments symbol by symbol (symbols in
declaration order, tuple sets in ascending bitmask order over the
lexicographically sorted tuples) and checks each conjunct as soon as the
symbols it mentions are assigned.  Top-level disjunctions are split, which
keeps search spaces per-branch and per-symbol; for the compound theories
built elsewhere (products, sums) this is what makes search feasible.
"""

import itertools
import warnings
from dataclasses import dataclass

from .errors import InputError, ContractViolation
from .eqrel import FinER, point_names
from .structures import Language, FinStructure, StructuredER


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Truth:
    pass


@dataclass(frozen=True)
class Falsity:
    pass


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


TRUE = Truth()
FALSE = Falsity()


def conj(parts):
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts):
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def implies(a, b):
    return disj((Not(a), b))


def iff(a, b):
    return disj((conj((a, b)), conj((Not(a), Not(b)))))


def free_vars(phi):
    if isinstance(phi, Atom):
        return frozenset(phi.args)
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, (Truth, Falsity)):
        return frozenset()
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or)):
        out = frozenset()
        for p in phi.parts:
            out |= free_vars(p)
        return out
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    raise InputError(f"not a formula: {phi!r}")


def all_vars(phi):
    if isinstance(phi, Atom):
        return frozenset(phi.args)
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, (Truth, Falsity)):
        return frozenset()
    if isinstance(phi, Not):
        return all_vars(phi.body)
    if isinstance(phi, (And, Or)):
        out = frozenset()
        for p in phi.parts:
            out |= all_vars(p)
        return out
    if isinstance(phi, (Exists, Forall)):
        return all_vars(phi.body) | {phi.var}
    raise InputError(f"not a formula: {phi!r}")


def rel_symbols(phi):
    """Relation symbols occurring in a formula."""
    if isinstance(phi, Atom):
        return frozenset((phi.rel,))
    if isinstance(phi, (Eq, Truth, Falsity)):
        return frozenset()
    if isinstance(phi, Not):
        return rel_symbols(phi.body)
    if isinstance(phi, (And, Or)):
        out = frozenset()
        for p in phi.parts:
            out |= rel_symbols(p)
        return out
    if isinstance(phi, (Exists, Forall)):
        return rel_symbols(phi.body)
    raise InputError(f"not a formula: {phi!r}")


def validate_formula(language, phi):
    """Arity check against a language; raises on mismatch."""
    for name in rel_symbols(phi):
        if name not in language:
            raise InputError(f"unknown relation symbol {name!r}")
    def rec(p):
        if isinstance(p, Atom):
            ar = language.arity(p.rel)
            if len(p.args) != ar:
                raise InputError(f"arity mismatch: {p.rel!r}/{ar} applied to {len(p.args)} arguments")
        elif isinstance(p, Not):
            rec(p.body)
        elif isinstance(p, (And, Or)):
            for q in p.parts:
                rec(q)
        elif isinstance(p, (Exists, Forall)):
            rec(p.body)
    rec(phi)


# ---------------------------------------------------------------------------
# Parser and printer

_KEYWORDS = ("rel", "eq", "true", "false", "not", "and", "or", "exists", "forall")


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def parse(text):
    """Parse one formula from s-expression text.

    Grammar: (rel NAME v...), (eq v w), (true), (false), (not f),
    (and f...), (or f...), (exists v f), (forall v f).  Empty conjunction
    and disjunction canonicalize to (true) and (false).
    """
    tokens = _tokenize(text)
    pos = 0

    def fail(msg, at):
        raise InputError(f"syntax error at position {at}: {msg}")

    def need(kind=None):
        nonlocal pos
        if pos >= len(tokens):
            fail("unexpected end of input", len(text))
        tok, at = tokens[pos]
        pos += 1
        if kind is not None and tok != kind:
            fail(f"expected {kind!r}, found {tok!r}", at)
        return tok, at

    def atom_token():
        tok, at = need()
        if tok in "()":
            fail("expected a name", at)
        return tok

    def formula():
        nonlocal pos
        _, at = need("(")
        head, hat = need()
        if head == "rel":
            name = atom_token()
            args = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                args.append(atom_token())
            need(")")
            return Atom(name, tuple(args))
        if head == "eq":
            a, b = atom_token(), atom_token()
            need(")")
            return Eq(a, b)
        if head == "true":
            need(")")
            return TRUE
        if head == "false":
            need(")")
            return FALSE
        if head == "not":
            body = formula()
            need(")")
            return Not(body)
        if head in ("and", "or"):
            parts = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                parts.append(formula())
            need(")")
            return conj(parts) if head == "and" else disj(parts)
        if head in ("exists", "forall"):
            var = atom_token()
            body = formula()
            need(")")
            return Exists(var, body) if head == "exists" else Forall(var, body)
        fail(f"unknown form {head!r}", hat)

    phi = formula()
    if pos != len(tokens):
        fail(f"trailing input {tokens[pos][0]!r}", tokens[pos][1])
    return phi


def print_formula(phi):
    if isinstance(phi, Atom):
        return "(rel " + " ".join((phi.rel,) + phi.args) + ")"
    if isinstance(phi, Eq):
        return f"(eq {phi.left} {phi.right})"
    if isinstance(phi, Truth):
        return "(true)"
    if isinstance(phi, Falsity):
        return "(false)"
    if isinstance(phi, Not):
        return f"(not {print_formula(phi.body)})"
    if isinstance(phi, And):
        return "(and " + " ".join(print_formula(p) for p in phi.parts) + ")"
    if isinstance(phi, Or):
        return "(or " + " ".join(print_formula(p) for p in phi.parts) + ")"
    if isinstance(phi, Exists):
        return f"(exists {phi.var} {print_formula(phi.body)})"
    if isinstance(phi, Forall):
        return f"(forall {phi.var} {print_formula(phi.body)})"
    raise InputError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Evaluation


def _eval(universe, rels, phi, env):
    if isinstance(phi, Atom):
        try:
            vals = tuple(env[a] for a in phi.args)
        except KeyError as e:
            raise InputError(f"no assignment for free variable {e.args[0]!r}") from None
        return vals in rels[phi.rel]
    if isinstance(phi, Eq):
        try:
            return env[phi.left] == env[phi.right]
        except KeyError as e:
            raise InputError(f"no assignment for free variable {e.args[0]!r}") from None
    if isinstance(phi, Truth):
        return True
    if isinstance(phi, Falsity):
        return False
    if isinstance(phi, Not):
        return not _eval(universe, rels, phi.body, env)
    if isinstance(phi, And):
        return all(_eval(universe, rels, p, env) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_eval(universe, rels, p, env) for p in phi.parts)
    if isinstance(phi, Exists):
        saved = env.get(phi.var, _MISSING)
        for v in universe:
            env[phi.var] = v
            if _eval(universe, rels, phi.body, env):
                _restore(env, phi.var, saved)
                return True
        _restore(env, phi.var, saved)
        return False
    if isinstance(phi, Forall):
        saved = env.get(phi.var, _MISSING)
        for v in universe:
            env[phi.var] = v
            if not _eval(universe, rels, phi.body, env):
                _restore(env, phi.var, saved)
                return False
        _restore(env, phi.var, saved)
        return True
    raise InputError(f"not a formula: {phi!r}")


_MISSING = object()


def _restore(env, var, saved):
    if saved is _MISSING:
        env.pop(var, None)
    else:
        env[var] = saved


def eval_formula(A, phi, env=None):
    """Evaluate a formula in a structure; quantifiers range over its universe."""
    validate_formula(A.language, phi)
    env = dict(env or {})
    for v in free_vars(phi):
        if v not in env:
            raise InputError(f"no assignment for free variable {v!r}")
        if env[v] not in set(A.universe):
            raise InputError(f"assignment {env[v]!r} is not a universe point")
    return _eval(A.universe, A.relations, phi, env)


def holds_classwise(structured, sentence):
    """Classwise satisfaction on an equivalence relation: every class,
    restricted, satisfies the sentence."""
    for block in structured.er.classes:
        if not eval_formula(structured.class_structure(block), sentence):
            return False
    return True


# ---------------------------------------------------------------------------
# Theories


class Theory:
    """A language together with one closed sentence."""

    __slots__ = ("language", "sentence", "name")

    def __init__(self, language, sentence, name=""):
        if not isinstance(language, Language):
            raise InputError("Theory needs a Language")
        validate_formula(language, sentence)
        if free_vars(sentence):
            raise InputError(f"sentence has unbound variables {sorted(free_vars(sentence))}")
        object.__setattr__(self, "language", language)
        object.__setattr__(self, "sentence", sentence)
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("Theory is immutable")

    def key(self):
        return (self.language.symbols, print_formula(self.sentence))

    def __eq__(self, other):
        return isinstance(other, Theory) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        label = self.name or print_formula(self.sentence)
        return f"Theory[{label}]"


# ---------------------------------------------------------------------------
# Model search

_MAX_TUPLE_BITS = 24


def _flatten_and(phi):
    if isinstance(phi, And):
        out = []
        for p in phi.parts:
            out.extend(_flatten_and(p))
        return out
    if isinstance(phi, Truth):
        return []
    return [phi]


def _branches(sentence):
    """Split a sentence into disjunction-free conjunct lists.

    Conjunctions are flattened and every top-level disjunctive conjunct is
    distributed, so each branch is a plain list of conjuncts that the staged
    search can schedule by symbol support.
    """
    def expand(conjuncts):
        for i, c in enumerate(conjuncts):
            if isinstance(c, Or):
                rest = conjuncts[:i] + conjuncts[i + 1 :]
                for alt in c.parts:
                    yield from expand(rest + _flatten_and(alt))
                return
            if isinstance(c, Falsity):
                return
        yield conjuncts

    yield from expand(_flatten_and(sentence))


def _structure_sort_key(language, rels, universe):
    key = []
    for name, ar in language.symbols:
        tuples = sorted(itertools.product(universe, repeat=ar))
        mask = 0
        for i, t in enumerate(tuples):
            if t in rels[name]:
                mask |= 1 << (len(tuples) - 1 - i)
        key.append(mask)
    return tuple(key)


def _branch_models(language, conjuncts, universe):
    """Models of a conjunction, found by per-symbol staged enumeration."""
    symbols = list(language.symbols)
    index = {name: i for i, (name, _) in enumerate(symbols)}
    stage_of = [max((index[s] for s in rel_symbols(c)), default=-1) for c in conjuncts]

    env = {}
    base = {name: frozenset() for name, _ in symbols}
    for ci, c in enumerate(conjuncts):
        if stage_of[ci] == -1 and not _eval(universe, base, c, env):
            return

    tuple_pool = []
    for name, ar in symbols:
        tuples = sorted(itertools.product(universe, repeat=ar))
        if len(tuples) > _MAX_TUPLE_BITS:
            raise InputError(
                f"model space too large: {name!r}/{ar} on {len(universe)} points"
            )
        tuple_pool.append(tuples)

    rels = dict(base)

    def rec(stage):
        if stage == len(symbols):
            yield {name: rels[name] for name, _ in symbols}
            return
        name, _ = symbols[stage]
        tuples = tuple_pool[stage]
        checks = [conjuncts[ci] for ci in range(len(conjuncts)) if stage_of[ci] == stage]
        for mask in range(1 << len(tuples)):
            rels[name] = frozenset(
                tuples[len(tuples) - 1 - b] for b in range(len(tuples)) if mask >> b & 1
            )
            if all(_eval(universe, rels, c, env) for c in checks):
                yield from rec(stage + 1)
        rels[name] = frozenset()

    yield from rec(0)


def _models_raw(theory, universe, first_only=False):
    universe = tuple(sorted(universe))
    results = {}
    best = None
    for conjuncts in _branches(theory.sentence):
        for rels in _branch_models(theory.language, conjuncts, universe):
            key = _structure_sort_key(theory.language, rels, universe)
            if first_only:
                if best is None or key < best[0]:
                    best = (key, rels)
                break
            results.setdefault(key, rels)
    if first_only:
        return [best[1]] if best else []
    return [results[k] for k in sorted(results)]


_MODEL_CACHE = {}
_FIRST_CACHE = {}


def _canonical(theory, size):
    return point_names(size, "u")


def models(theory, universe):
    """All structures on the universe satisfying the theory, in canonical
    order (symbols in declaration order are the most significant part of
    the order; within a symbol, tuple sets in ascending bitmask order)."""
    universe = tuple(sorted(universe))
    ckey = (theory.key(), len(universe))
    if ckey not in _MODEL_CACHE:
        canon = _canonical(theory, len(universe))
        _MODEL_CACHE[ckey] = [
            FinStructure(theory.language, canon, rels)
            for rels in _models_raw(theory, canon)
        ]
    return [_relabel(m, universe) for m in _MODEL_CACHE[ckey]]


def first_model(theory, universe):
    """First model in canonical order, or None."""
    universe = tuple(sorted(universe))
    ckey = (theory.key(), len(universe))
    if ckey not in _FIRST_CACHE:
        canon = _canonical(theory, len(universe))
        found = _models_raw(theory, canon, first_only=True)
        _FIRST_CACHE[ckey] = FinStructure(theory.language, canon, found[0]) if found else None
    hit = _FIRST_CACHE[ckey]
    return None if hit is None else _relabel(hit, universe)


def satisfiable(theory, size):
    """Whether the theory has a model on a set of the given size."""
    return first_model(theory, point_names(size, "u")) is not None


def _relabel(model, universe):
    if model.universe == tuple(universe):
        return model
    mapping = dict(zip(model.universe, sorted(universe)))
    rels = {
        name: [tuple(mapping[p] for p in t) for t in tuples]
        for name, tuples in model.relations.items()
    }
    return FinStructure(model.language, sorted(universe), rels)


# ---------------------------------------------------------------------------
# Structurability


@dataclass
class StructureSearchResult:
    """Witness of classwise structurability, or the first class that has no
    model of the theory."""

    structured: object
    failed_class: object

    @property
    def ok(self):
        return self.structured is not None


_SEARCH_CACHE = {}


def structure_search(E, theory):
    """Search each class independently for a model and assemble a global
    structure; refuse with the first class admitting none."""
    ckey = (E.classes, theory.key())
    if ckey in _SEARCH_CACHE:
        return _SEARCH_CACHE[ckey]
    result = None
    rels = {name: [] for name in theory.language.names()}
    for block in E.classes:
        model = first_model(theory, block)
        if model is None:
            result = StructureSearchResult(None, block)
            break
        for name, tuples in model.relations.items():
            rels[name].extend(tuples)
    if result is None:
        structure = FinStructure(theory.language, E.points, rels)
        witness = StructuredER(E, structure)
        if not holds_classwise(witness, theory.sentence):
            raise ContractViolation("assembled structure fails its own sentence")
        result = StructureSearchResult(witness, None)
    _SEARCH_CACHE[ckey] = result
    return result


def structurable(E, theory):
    return all(satisfiable(theory, len(block)) for block in E.classes)


@dataclass
class ImpliesStarResult:
    holds: bool
    counterexample: object
    bound: int

    def __bool__(self):
        return self.holds


def implies_star_n(sigma, tau, n):
    """Bounded structurability entailment: every relation on at most n
    points structurable by sigma is structurable by tau.  Returns the first
    counterexample otherwise."""
    if n < 1:
        raise InputError("bound must be at least 1")
    if n > 6:
        warnings.warn(f"implies_star_n sweeps all {n}-point partitions; this grows fast")
    from .eqrel import all_relations_up_to

    for E in all_relations_up_to(n):
        if structure_search(E, sigma).ok and not structure_search(E, tau).ok:
            return ImpliesStarResult(False, E, n)
    return ImpliesStarResult(True, None, n)
