"""Text and JSON formats for every value the command line moves around.

Text formats are line-based: `key: item item ...` with structured point
names carrying their own parentheses and commas, so items never contain
spaces.  Tuples in structure files are written (a,b,c) and split at
top-level commas only.  Every loader also accepts a JSON mirror; a leading
'{' selects it.
"""

import json

from .errors import InputError
from .eqrel import FinER, PointMap
from .structures import Language, FinStructure
from .logic import Theory, parse, print_formula
from .constructions import Cocycle
from .fiber import FiberSpace
from .lattice import FinLattice, FinPoset
from .combinat import SetFamily, Graphing


def split_top_level(text, sep=","):
    """Split at separators not nested inside parentheses."""
    parts = []
    depth = 0
    current = []
    for c in text:
        if c == "(":
            depth += 1
            current.append(c)
        elif c == ")":
            depth -= 1
            if depth < 0:
                raise InputError(f"unbalanced parentheses in {text!r}")
            current.append(c)
        elif c == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(c)
    if depth != 0:
        raise InputError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(current))
    return parts


def parse_point_tuple(text):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise InputError(f"expected a parenthesized tuple, found {text!r}")
    inner = text[1:-1]
    if not inner:
        return ()
    return tuple(p.strip() for p in split_top_level(inner))


def _lines(text):
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise InputError(f"line {lineno}: expected 'key: ...', found {raw!r}")
        key, _, rest = line.partition(":")
        out.append((lineno, key.strip(), rest.strip()))
    return out


def _is_json(text):
    return text.lstrip()[:1] == "{"


# ---------------------------------------------------------------------------
# Equivalence relations


def parse_er(text):
    if _is_json(text):
        data = json.loads(text)
        er = FinER(data["classes"])
        if "points" in data and tuple(sorted(data["points"])) != er.points:
            raise InputError("points field disagrees with the classes")
        return er
    points = None
    classes = []
    for lineno, key, rest in _lines(text):
        items = rest.split()
        if key == "points":
            points = items
        elif key == "class":
            if not items:
                raise InputError(f"line {lineno}: empty class")
            classes.append(items)
        else:
            raise InputError(f"line {lineno}: unknown key {key!r} in relation file")
    er = FinER(classes)
    if points is not None and tuple(sorted(points)) != er.points:
        raise InputError("points header disagrees with the classes")
    return er


def dump_er(er, as_json=False):
    if as_json:
        return json.dumps(
            {"points": list(er.points), "classes": [list(b) for b in er.classes]},
            indent=2,
        )
    lines = ["points: " + " ".join(er.points)]
    for block in er.classes:
        lines.append("class: " + " ".join(block))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Languages, structures, theories


def parse_language_items(items):
    symbols = []
    for item in items:
        if "/" not in item:
            raise InputError(f"expected NAME/ARITY, found {item!r}")
        name, _, ar = item.rpartition("/")
        try:
            ar = int(ar)
        except ValueError:
            raise InputError(f"bad arity in {item!r}") from None
        symbols.append((name, ar))
    return Language(symbols)


def parse_structure(text):
    if _is_json(text):
        data = json.loads(text)
        lang = Language([tuple(s) for s in data["language"]])
        rels = {k: [tuple(t) for t in v] for k, v in data.get("relations", {}).items()}
        return FinStructure(lang, data["universe"], rels)
    lang = None
    universe = None
    rels = {}
    for lineno, key, rest in _lines(text):
        if key == "language":
            lang = parse_language_items(rest.split())
        elif key == "universe":
            universe = rest.split()
        else:
            tuples = [parse_point_tuple(t) for t in rest.split()]
            rels.setdefault(key, []).extend(tuples)
    if lang is None or universe is None:
        raise InputError("structure file needs language and universe lines")
    return FinStructure(lang, universe, rels)


def dump_structure(A, as_json=False):
    if as_json:
        return json.dumps(
            {
                "language": [list(s) for s in A.language.symbols],
                "universe": list(A.universe),
                "relations": {
                    name: [list(t) for t in A.sorted_rel(name)]
                    for name in A.language.names()
                },
            },
            indent=2,
        )
    lines = [
        "language: " + " ".join(f"{n}/{a}" for n, a in A.language.symbols),
        "universe: " + " ".join(A.universe),
    ]
    for name in A.language.names():
        tuples = A.sorted_rel(name)
        if tuples:
            lines.append(f"{name}: " + " ".join("(" + ",".join(t) + ")" for t in tuples))
    return "\n".join(lines) + "\n"


def parse_theory(text):
    if _is_json(text):
        data = json.loads(text)
        lang = Language([tuple(s) for s in data["language"]])
        return Theory(lang, parse(data["sentence"]), name=data.get("name", ""))
    lang = None
    sentence = None
    name = ""
    for lineno, key, rest in _lines(text):
        if key == "language":
            lang = parse_language_items(rest.split())
        elif key == "sentence":
            sentence = parse(rest)
        elif key == "name":
            name = rest
        else:
            raise InputError(f"line {lineno}: unknown key {key!r} in theory file")
    if lang is None:
        lang = Language(())
    if sentence is None:
        raise InputError("theory file needs a sentence line")
    return Theory(lang, sentence, name=name)


def dump_theory(T, as_json=False):
    if as_json:
        return json.dumps(
            {
                "language": [list(s) for s in T.language.symbols],
                "sentence": print_formula(T.sentence),
                "name": T.name,
            },
            indent=2,
        )
    lines = []
    if T.name:
        lines.append(f"name: {T.name}")
    lines.append("language: " + " ".join(f"{n}/{a}" for n, a in T.language.symbols))
    lines.append("sentence: " + print_formula(T.sentence))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Maps


def parse_map(text, domain, codomain):
    if _is_json(text):
        data = json.loads(text)
        return PointMap(domain, codomain, dict(data["map"]))
    mapping = {}
    for lineno, key, rest in _lines(text):
        if key != "map":
            raise InputError(f"line {lineno}: unknown key {key!r} in map file")
        items = rest.split()
        if len(items) != 2:
            raise InputError(f"line {lineno}: expected 'map: POINT IMAGE'")
        if items[0] in mapping:
            raise InputError(f"line {lineno}: duplicate image for {items[0]!r}")
        mapping[items[0]] = items[1]
    return PointMap(domain, codomain, mapping)


def dump_map(f, as_json=False):
    if as_json:
        return json.dumps({"map": [[p, q] for p, q in f.as_pairs()]}, indent=2)
    return "\n".join(f"map: {p} {q}" for p, q in f.as_pairs()) + "\n"


# ---------------------------------------------------------------------------
# Cocycles and fiber spaces


def parse_cocycle(text):
    if _is_json(text):
        data = json.loads(text)
        base = FinER(data["base"]["classes"])
        fiber = tuple(str(v) for v in data["fiber"])
        values = {
            (x, y): {a: b for a, b in table}
            for (x, y), table in ((tuple(k), v) for k, v in data["values"])
        }
        return Cocycle(base, fiber, values)
    classes = []
    size = None
    values = {}
    for lineno, key, rest in _lines(text):
        if key == "class":
            classes.append(rest.split())
        elif key == "fiber":
            size = int(rest)
        elif key == "alpha":
            items = rest.split()
            if len(items) != 3:
                raise InputError(f"line {lineno}: expected 'alpha: X X' PERM'")
            x, y, perm = items
            digits = perm.split(".") if "." in perm else list(perm)
            values[(x, y)] = {str(i): d for i, d in enumerate(digits)}
        else:
            raise InputError(f"line {lineno}: unknown key {key!r} in cocycle file")
    if size is None:
        raise InputError("cocycle file needs a fiber size")
    base = FinER(classes)
    fiber = tuple(str(i) for i in range(size))
    for x, y in base.pairs():
        values.setdefault((x, y), {v: v for v in fiber} if x == y else None)
        if values[(x, y)] is None:
            raise InputError(f"missing permutation for pair ({x},{y})")
    return Cocycle(base, fiber, values)


def dump_cocycle(alpha, as_json=False):
    if as_json:
        return json.dumps(
            {
                "base": {"classes": [list(b) for b in alpha.base.classes]},
                "fiber": list(alpha.fiber),
                "values": [
                    [[x, y], sorted(alpha.values[(x, y)].items())]
                    for x, y in sorted(alpha.base.pairs())
                ],
            },
            indent=2,
        )
    lines = [f"# base relation; fiber {{0..{len(alpha.fiber)-1}}}"]
    for block in alpha.base.classes:
        lines.append("class: " + " ".join(block))
    lines.append(f"fiber: {len(alpha.fiber)}")
    for x, y in sorted(alpha.base.pairs()):
        perm = ".".join(alpha.values[(x, y)][v] for v in alpha.fiber)
        lines.append(f"alpha: {x} {y} {perm}")
    return "\n".join(lines) + "\n"


def parse_fiberspace(text):
    if _is_json(text):
        data = json.loads(text)
        total = FinER(data["total"]["classes"])
        base = FinER(data["base"]["classes"])
        proj = PointMap(total, base, dict(data["proj"]))
        return FiberSpace(total, base, proj)
    section = None
    total_classes, base_classes = [], []
    proj = {}
    for lineno, key, rest in _lines(text):
        if key == "total":
            section = "total"
        elif key == "base":
            section = "base"
        elif key == "class":
            if section == "total":
                total_classes.append(rest.split())
            elif section == "base":
                base_classes.append(rest.split())
            else:
                raise InputError(f"line {lineno}: class outside total/base sections")
        elif key == "proj":
            items = rest.split()
            if len(items) != 2:
                raise InputError(f"line {lineno}: expected 'proj: POINT IMAGE'")
            proj[items[0]] = items[1]
        else:
            raise InputError(f"line {lineno}: unknown key {key!r} in fiber space file")
    total = FinER(total_classes)
    base = FinER(base_classes)
    return FiberSpace(total, base, PointMap(total, base, proj))


def dump_fiberspace(S, as_json=False):
    if as_json:
        return json.dumps(
            {
                "total": {"classes": [list(b) for b in S.total.classes]},
                "base": {"classes": [list(b) for b in S.base.classes]},
                "proj": [[p, q] for p, q in S.proj.as_pairs()],
            },
            indent=2,
        )
    lines = ["total:"]
    for block in S.total.classes:
        lines.append("class: " + " ".join(block))
    lines.append("base:")
    for block in S.base.classes:
        lines.append("class: " + " ".join(block))
    for p, q in S.proj.as_pairs():
        lines.append(f"proj: {p} {q}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Lattices, families, graphings, interpretations


def parse_lattice(text):
    if _is_json(text):
        data = json.loads(text)
        return FinLattice(data["elements"], [tuple(p) for p in data["leq"]])
    elements = None
    pairs = []
    for lineno, key, rest in _lines(text):
        if key == "elements":
            elements = rest.split()
        elif key == "leq":
            items = rest.split()
            if len(items) != 2:
                raise InputError(f"line {lineno}: expected 'leq: A B'")
            pairs.append((items[0], items[1]))
        else:
            raise InputError(f"line {lineno}: unknown key {key!r} in lattice file")
    if elements is None:
        raise InputError("lattice file needs an elements line")
    return FinLattice(elements, pairs)


def dump_poset(P, as_json=False):
    strict = [(a, b) for (a, b) in sorted(P.pairs()) if a != b]
    if as_json:
        return json.dumps({"elements": list(P.elements), "leq": [list(p) for p in strict]}, indent=2)
    lines = ["elements: " + " ".join(P.elements)]
    for a, b in strict:
        lines.append(f"leq: {a} {b}")
    return "\n".join(lines) + "\n"


def parse_family(text):
    if _is_json(text):
        data = json.loads(text)
        return SetFamily(data["ground"], [set(s) for s in data["sets"]])
    ground = None
    sets = []
    for lineno, key, rest in _lines(text):
        if key == "ground":
            ground = rest.split()
        elif key == "set":
            sets.append(rest.split())
        else:
            raise InputError(f"line {lineno}: unknown key {key!r} in family file")
    if ground is None:
        raise InputError("family file needs a ground line")
    return SetFamily(ground, sets)


def dump_family(F, as_json=False):
    if as_json:
        return json.dumps(
            {"ground": list(F.ground), "sets": [sorted(s) for s in F.sets]}, indent=2
        )
    lines = ["ground: " + " ".join(F.ground)]
    for s in F.sets:
        lines.append("set: " + " ".join(sorted(s)))
    return "\n".join(lines) + "\n"


def parse_graphing(text):
    if _is_json(text):
        data = json.loads(text)
        return Graphing(FinER(data["classes"]), [tuple(e) for e in data["edges"]])
    classes = []
    edges = []
    for lineno, key, rest in _lines(text):
        if key == "class":
            classes.append(rest.split())
        elif key == "edge":
            items = rest.split()
            if len(items) != 2:
                raise InputError(f"line {lineno}: expected 'edge: U V'")
            edges.append((items[0], items[1]))
        else:
            raise InputError(f"line {lineno}: unknown key {key!r} in graphing file")
    return Graphing(FinER(classes), edges)


def dump_graphing(g, as_json=False):
    if as_json:
        return json.dumps(
            {
                "classes": [list(b) for b in g.er.classes],
                "edges": [list(e) for e in g.sorted_edges()],
            },
            indent=2,
        )
    lines = []
    for block in g.er.classes:
        lines.append("class: " + " ".join(block))
    for u, v in g.sorted_edges():
        lines.append(f"edge: {u} {v}")
    return "\n".join(lines) + "\n"


def parse_interpretation(text, target):
    """Interpretation file: a source language line plus one formula per
    symbol; the target theory is supplied separately."""
    from .theoryalg import Interpretation

    if _is_json(text):
        data = json.loads(text)
        lang = Language([tuple(s) for s in data["source"]])
        mapping = {k: parse(v) for k, v in data["map"].items()}
        return Interpretation(lang, target, mapping)
    lang = None
    mapping = {}
    for lineno, key, rest in _lines(text):
        if key == "source":
            lang = parse_language_items(rest.split())
        else:
            mapping[key] = parse(rest)
    if lang is None:
        raise InputError("interpretation file needs a source line")
    return Interpretation(lang, target, mapping)
