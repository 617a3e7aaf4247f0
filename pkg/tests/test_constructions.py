import pytest

from structo.errors import InputError
from structo.eqrel import (
    FinER, PointMap, point_names, er_isomorphism, classify_hom, enumerate_homs, CB,
)
from structo.logic import holds_classwise
from structo.structures import classwise_pullback
from structo.constructions import (
    ltimes, ltimes_universal_map, tensor, pairing, tensor_vs_cross,
    tensor_class_count, Cocycle, identity_cocycle, skew_product,
    cocycle_from_enumeration, verify_identities,
    truth_theory, linear_order_theory, one_marked_theory,
)
from structo import scott


def I(n, prefix="p"):
    return FinER.indiscrete(point_names(n, prefix))


def D(n, prefix="p"):
    return FinER.delta(point_names(n, prefix))


def test_ltimes_examples():
    slo = linear_order_theory()
    R = ltimes(I(2), slo)
    assert len(R.space.classes) == 2 and R.space.class_sizes() == (2, 2)
    assert CB in classify_hom(R.projection)
    assert holds_classwise(R.structure, slo.sentence)

    R = ltimes(D(1), truth_theory())
    assert er_isomorphism(R.space, D(1, "z")) is not None

    R = ltimes(I(3), slo)
    assert len(R.space.classes) == 6 and len(R.space.points) == 18


def test_ltimes_unstructurable_class_reported():
    from structo.constructions import exactly_two_theory

    R = ltimes(FinER([["a"], ["b", "c"]]), exactly_two_theory())
    assert R.unstructurable == (("a",),)
    assert not R.projection.is_surjective()


def test_ltimes_universal_map_identity():
    slo = linear_order_theory()
    R = ltimes(I(2), slo)
    lifted = ltimes_universal_map(R, R.projection, R.structure)
    assert lifted == PointMap.identity(R.space)


def test_ltimes_universal_map_picks_matching_class():
    from structo.structures import FinStructure, StructuredER

    slo = linear_order_theory()
    E = I(2)
    R = ltimes(E, slo)
    F = I(2, "q")
    f = enumerate_homs(F, E, ["cb"])[0]
    order = StructuredER(F, FinStructure(slo.language, F.points, {"<": [("q0", "q1")]}))
    lifted = ltimes_universal_map(R, f, order)
    assert R.projection.compose(lifted) == f
    assert classwise_pullback(R.structure.structure, lifted) == order


def test_tensor_examples():
    t = tensor(D(2), D(3, "q"))
    assert er_isomorphism(t.space, D(6, "r")) is not None

    t = tensor(I(2), I(2, "q"))
    assert t.space.class_sizes() == (2, 2)

    E = FinER([["a"], ["b", "c"]])
    F = I(2, "q")
    t = tensor(E, F)
    assert t.space.class_sizes() == (2, 2)
    assert len(t.space.classes) == tensor_class_count(E, F)


def test_pairing_commutes():
    E, F, G = I(2), I(2, "q"), I(2, "r")
    t = tensor(E, F)
    f = enumerate_homs(G, E, ["cb"])[0]
    g = enumerate_homs(G, F, ["cb"])[1]
    paired = pairing(t, f, g)
    assert t.proj1.compose(paired) == f
    assert t.proj2.compose(paired) == g


def test_tensor_vs_cross_examples():
    rep = tensor_vs_cross(D(2), D(2, "q"))
    assert rep.iso and rep.surjective

    rep = tensor_vs_cross(FinER([["a"], ["b", "c"]]), I(2, "q"))
    assert not rep.surjective and not rep.uniform_criterion

    rep = tensor_vs_cross(I(2), I(2, "q"))
    from structo.eqrel import CI, REDUCTION

    # surjective and class-injective; injective as a point map (a bijection
    # of a 2-element class is pinned by one value) but not an isomorphism,
    # since it merges two tensor classes into the one product class
    assert rep.surjective and CI in rep.flags
    assert rep.map.is_injective() and not rep.iso
    assert REDUCTION not in rep.flags

    rep = tensor_vs_cross(I(3), I(3, "q"))
    assert rep.surjective and CI in rep.flags and not rep.map.is_injective()


def test_skew_product_trivial_cocycle():
    E = I(2)
    sk = skew_product(E, identity_cocycle(E, ["0", "1"]))
    assert sk.space.class_sizes() == (2, 2)
    assert CB in classify_hom(sk.projection)


def test_skew_product_swap():
    E = I(2)
    swap = {"0": "1", "1": "0"}
    ident = {"0": "0", "1": "1"}
    values = {
        ("p0", "p0"): ident, ("p1", "p1"): ident,
        ("p0", "p1"): swap, ("p1", "p0"): swap,
    }
    alpha = Cocycle(E, ("0", "1"), values)
    sk = skew_product(E, alpha)
    assert sk.space.class_sizes() == (2, 2)
    blocks = {frozenset(b) for b in sk.space.classes}
    assert frozenset({"(p0,0)", "(p1,1)"}) in blocks
    assert frozenset({"(p0,1)", "(p1,0)"}) in blocks


def test_cocycle_validation():
    E = I(2)
    swap = {"0": "1", "1": "0"}
    ident = {"0": "0", "1": "1"}
    with pytest.raises(InputError):
        Cocycle(E, ("0", "1"), {
            ("p0", "p0"): swap, ("p1", "p1"): ident,
            ("p0", "p1"): swap, ("p1", "p0"): swap,
        })
    with pytest.raises(InputError):
        Cocycle(E, ("0", "1"), {("p0", "p0"): ident})


def test_cocycle_from_enumeration():
    E = I(3)
    coded = scott.code_er(E)
    alpha = cocycle_from_enumeration(E, coded.enumeration())
    assert alpha.values[("p0", "p0")] == {"0": "0", "1": "1", "2": "2"}
    mixed = FinER([["a"], ["b", "c"]])
    with pytest.raises(InputError):
        cocycle_from_enumeration(mixed, {p: tuple(mixed.class_of(p)) for p in mixed.points})


def test_verify_identities_pass_small():
    items = verify_identities(2)
    assert all(item.passed for item in items), [i.line() for i in items]
