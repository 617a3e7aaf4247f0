import pytest

from structo.errors import InputError
from structo.eqrel import FinER, PointMap
from structo.structures import (
    Language, FinStructure, StructuredER, pushforward, pullback,
    classwise_pullback, isomorphic, aut_group, stabilizer_orbits,
    wdp_check, wdp_upto, first_wdp_failure, age,
)


def edge_structure(pairs, universe):
    return FinStructure(Language([("R", 2)]), universe, {"R": pairs})


def test_language_validation():
    with pytest.raises(InputError):
        Language([("R", 0)])
    with pytest.raises(InputError):
        Language([("R", 1), ("R", 2)])


def test_structure_validation():
    lang = Language([("R", 2)])
    with pytest.raises(InputError):
        FinStructure(lang, ["a"], {"R": [("a",)]})
    with pytest.raises(InputError):
        FinStructure(lang, ["a"], {"R": [("a", "z")]})
    with pytest.raises(InputError):
        FinStructure(lang, ["a"], {"S": []})


def test_pushforward_swap():
    A = edge_structure([("a", "b")], ["a", "b"])
    swapped = pushforward(A, {"a": "b", "b": "a"})
    assert swapped.rel("R") == frozenset({("b", "a")})
    back = pushforward(swapped, {"a": "b", "b": "a"})
    assert back == A


def test_pushforward_needs_bijection():
    A = edge_structure([], ["a", "b"])
    with pytest.raises(InputError):
        pushforward(A, {"a": "c", "b": "c"})


def test_pullback():
    A = edge_structure([("a", "b")], ["a", "b"])
    B = pullback(A, {"x": "a", "y": "b", "z": "a"})
    assert ("x", "y") in B.rel("R")
    assert ("z", "y") in B.rel("R")
    assert ("x", "z") not in B.rel("R")


def test_classwise_pullback_drops_crossing_tuples():
    F = FinER.delta(["u", "v"])
    E = FinER.delta(["a", "b"])
    f = PointMap(E, F, {"a": "u", "b": "v"})
    A = edge_structure([("u", "v"), ("u", "u")], ["u", "v"])
    pulled = classwise_pullback(A, f)
    assert pulled.structure.rel("R") == frozenset({("a", "a")})


def test_classwise_pullback_needs_cb():
    F = FinER.indiscrete(["u", "v"])
    E = FinER.delta(["a"])
    f = PointMap(E, F, {"a": "u"})
    A = edge_structure([], ["u", "v"])
    with pytest.raises(InputError):
        classwise_pullback(A, f)


def test_structured_er_invariant():
    er = FinER.delta(["a", "b"])
    with pytest.raises(InputError):
        StructuredER(er, edge_structure([("a", "b")], ["a", "b"]))


def test_isomorphism_and_automorphisms():
    A = edge_structure([("a", "b")], ["a", "b"])
    B = edge_structure([("a", "b")], ["a", "b"])
    assert isomorphic(A, B) == {"a": "a", "b": "b"}
    C = edge_structure([("b", "a")], ["a", "b"])
    assert isomorphic(A, C) == {"a": "b", "b": "a"}
    assert isomorphic(A, edge_structure([], ["a", "b"])) is None

    cycle = edge_structure([("a", "b"), ("b", "a")], ["a", "b"])
    assert len(aut_group(cycle)) == 2


def test_stabilizer_orbits():
    edgeless = FinStructure(Language([("R", 2)]), ["a", "b", "c"], {})
    assert stabilizer_orbits(edgeless, []) == (("a", "b", "c"),)
    cycle = edge_structure([("a", "b"), ("b", "a")], ["a", "b"])
    assert stabilizer_orbits(cycle, ["a"]) == (("a",), ("b",))


def test_wdp_examples():
    lang = Language([("R", 2)])
    edgeless4 = FinStructure(lang, ["a", "b", "c", "d"], {})
    assert wdp_check(edgeless4, lang, ["a"]) is not None

    loop = FinStructure(lang, ["a", "b"], {"R": [("a", "a")]})
    assert wdp_check(loop, lang, ["a"]) is None
    assert first_wdp_failure(loop, 1) is not None

    # the whole universe never has a disjoint duplicate
    assert wdp_check(edgeless4, lang, edgeless4.universe) is None


def test_wdp_empty_subset_rejected():
    lang = Language([("R", 2)])
    A = FinStructure(lang, ["a"], {})
    with pytest.raises(InputError):
        wdp_check(A, lang, [])


def test_wdp_upto_table():
    lang = Language([("R", 2)])
    A = FinStructure(lang, ["a", "b", "c"], {})
    table = wdp_upto(A, 1)
    # edgeless: every singleton duplicates, under every sublanguage
    assert all(v is not None for v in table.values())
    assert len(table) == 2 * 3  # two sublanguages, three singletons
    only_full = wdp_upto(A, 1, full_language_only=True)
    assert len(only_full) == 3


def test_age():
    lang = Language([("R", 2)])
    path = FinStructure(lang, ["a", "b", "c"], {"R": [("a", "b"), ("b", "c")]})
    assert len(age(path, 2)) == 2  # one edge and no edge
    edgeless = FinStructure(lang, ["a", "b", "c"], {})
    assert len(age(edgeless, 2)) == 1
    assert age(path, 4) == []
