import pytest

from structo.errors import InputError
from structo.eqrel import FinER, PointMap, point_names, enumerate_homs, classify_hom, CB
from structo.logic import models, holds_classwise, structure_search
from structo import scott
from structo.verify import criterion_2, criterion_3


def test_code_er_examples():
    c = scott.code_er(FinER.delta(["a"]))
    assert c.bits == 1
    assert c.gmaps == ({"a": "a"},)

    c = scott.code_er(FinER.indiscrete(["a", "b"]))
    assert c.bits == 1
    assert c.gmaps[0] == {"a": "a", "b": "b"}
    assert c.gmaps[1] == {"a": "b", "b": "a"}

    c = scott.code_er(FinER.indiscrete(["a", "b", "c"]))
    assert c.bits == 2
    assert len(c.gmaps) == 3
    union = {(p, g[p]) for g in c.gmaps for p in "abc"}
    assert union == set(FinER.indiscrete(["a", "b", "c"]).pairs())


def test_code_er_rejects_empty_and_small_bit_counts():
    with pytest.raises(InputError):
        scott.code_er(FinER([]))
    with pytest.raises(InputError):
        scott.code_er(FinER.indiscrete(["a", "b", "c"]), bits=1)


def test_code_er_padding():
    c = scott.code_er(FinER.delta(["a"]), bits=3)
    assert c.coding["a"] == (0, 0, 0)


def test_sigma_model_counts():
    st = scott.scott_theory(scott.code_er(FinER.delta(["a"])))
    assert len(models(st.theory(), ["x"])) == 1
    assert len(models(st.theory(), ["x", "y"])) == 0

    st = scott.scott_theory(scott.code_er(FinER.indiscrete(["a", "b"])))
    assert len(models(st.theory(), ["x", "y"])) == 2


def test_canonical_structure_satisfies_sigma():
    for E in (FinER.delta(point_names(2)), FinER.indiscrete(point_names(3)), FinER([["a", "b"], ["c"]])):
        st = scott.scott_theory(scott.code_er(E))
        assert holds_classwise(st.canonical_structure(), st.sigma)


def test_decode_encode_round_trip():
    E = FinER.indiscrete(["a", "b"])
    st = scott.scott_theory(scott.code_er(E))
    F = FinER.indiscrete(["u", "v"])
    for f in enumerate_homs(F, E, ["cb"]):
        A = scott.cb_to_structure(st, f)
        assert scott.structures_to_cb(st, A) == f


def test_decode_identity_on_self():
    E = FinER([["a", "b"], ["c"]])
    st = scott.scott_theory(scott.code_er(E))
    assert scott.structures_to_cb(st, st.canonical_structure()) == PointMap.identity(E)


def test_decode_rejects_bad_structures():
    E = FinER.indiscrete(["a", "b"])
    st = scott.scott_theory(scott.code_er(E))
    from structo.structures import FinStructure, StructuredER

    F = FinER.indiscrete(["u", "v"])
    bad = StructuredER(F, FinStructure(st.language, F.points, {}))  # both code 0
    with pytest.raises(InputError):
        scott.structures_to_cb(st, bad)


def test_delta2_delta1_correspondence():
    E = FinER.delta(["e"])
    st = scott.scott_theory(scott.code_er(E))
    F = FinER.delta(["u", "v"])
    satisfying = [A for A in scott.all_structures(st.language, F) if holds_classwise(A, st.sigma)]
    assert len(satisfying) == 1
    assert len(enumerate_homs(F, E, ["cb"])) == 1

    I2 = FinER.indiscrete(["u", "v"])
    satisfying = [A for A in scott.all_structures(st.language, I2) if holds_classwise(A, st.sigma)]
    assert satisfying == []
    assert enumerate_homs(I2, E, ["cb"]) == []


def test_variant_cih_counts():
    E = FinER.delta(["e"])
    st = scott.scott_theory(scott.code_er(E))
    variants = st.variant_theories()
    F = FinER.delta(["u", "v"])
    cih = [A for A in scott.all_structures(st.language, F) if holds_classwise(A, variants["cih"].sentence)]
    assert len(cih) == 1

    E2 = FinER.indiscrete(["a", "b"])
    st2 = scott.scott_theory(scott.code_er(E2))
    variants2 = st2.variant_theories()
    F2 = FinER.indiscrete(["u", "v"])
    cih2 = [A for A in scott.all_structures(st2.language, F2) if holds_classwise(A, variants2["cih"].sentence)]
    assert len(cih2) == 2


def test_acceptance_criteria_2_and_3_small():
    assert all(item.passed for item in criterion_2(2))
    assert all(item.passed for item in criterion_3(2))
