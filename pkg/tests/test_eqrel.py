import pytest

from structo.errors import InputError
from structo.eqrel import (
    FinER, PointMap, classify_hom, enumerate_homs, disjoint_sum, cross_product,
    fiber_product, independent, independent_join, quotient_by_subrelation,
    er_isomorphism, point_names, set_partitions,
    HOM, REDUCTION, CI, CS, CB, EMBEDDING, INV_EMBEDDING, SMOOTH,
)


def delta(n, prefix="p"):
    return FinER.delta(point_names(n, prefix))


def indiscrete(n, prefix="p"):
    return FinER.indiscrete(point_names(n, prefix))


def test_canonical_form():
    E = FinER([["b", "a"], ["c"]])
    assert E.classes == (("a", "b"), ("c",))
    assert E.points == ("a", "b", "c")
    assert E.related("a", "b")
    assert not E.related("a", "c")


def test_validation():
    with pytest.raises(InputError):
        FinER([["a"], ["a"]])
    with pytest.raises(InputError):
        FinER([[]])
    with pytest.raises(InputError):
        FinER([["bad name"]])


def test_identity_classifies_everything():
    for E in (delta(3), indiscrete(3), FinER([["a", "b"], ["c"]])):
        flags = classify_hom(PointMap.identity(E))
        for f in (HOM, REDUCTION, CI, CS, CB, EMBEDDING, INV_EMBEDDING, SMOOTH):
            assert f in flags


def test_identity_pointmap_delta_to_indiscrete():
    E, F = delta(2), indiscrete(2)
    f = PointMap(E, F, {p: p for p in E.points})
    assert classify_hom(f).flags == frozenset({HOM, CI, SMOOTH})


def test_constant_indiscrete_to_delta():
    E, F = indiscrete(2), delta(1, "q")
    f = PointMap(E, F, {p: "q0" for p in E.points})
    assert classify_hom(f).flags == frozenset({HOM, REDUCTION, CS, SMOOTH})


def test_non_hom_has_no_flags():
    E, F = indiscrete(2), delta(2, "q")
    f = PointMap(E, F, {"p0": "q0", "p1": "q1"})
    assert classify_hom(f).flags == frozenset()


def test_enumerate_homs_examples():
    assert len(enumerate_homs(delta(1), delta(1, "q"), ["cb"])) == 1
    assert len(enumerate_homs(delta(2), delta(1, "q"), ["cb"])) == 1
    assert enumerate_homs(indiscrete(2), delta(1, "q"), ["cb"]) == []


def test_enumerate_homs_order_is_lexicographic():
    maps = enumerate_homs(delta(2), delta(2, "q"), ["hom"])
    images = [tuple(m.mapping[p] for p in m.domain.points) for m in maps]
    assert images == sorted(images)


def test_disjoint_sum():
    total, injections = disjoint_sum([delta(1), delta(1)])
    assert total.class_sizes() == (1, 1)
    total, injections = disjoint_sum([indiscrete(2), indiscrete(3, "q")])
    assert total.class_sizes() == (2, 3)
    for inj in injections:
        assert INV_EMBEDDING in classify_hom(inj)
    empty, _ = disjoint_sum([])
    assert empty.points == ()


def test_cross_product():
    prod, p1, p2 = cross_product(delta(2), delta(3, "q"))
    assert prod.class_sizes() == (1,) * 6
    prod, p1, p2 = cross_product(indiscrete(2), indiscrete(2, "q"))
    assert prod.class_sizes() == (4,)
    assert CS in classify_hom(p1) and CS in classify_hom(p2)
    E = FinER([["a", "b"], ["c"]])
    prod, _, _ = cross_product(E, delta(1, "q"))
    assert er_isomorphism(prod, E) is not None


def test_fiber_product_diagonal():
    E = FinER([["a", "b"], ["c"]])
    ident = PointMap.identity(E)
    prod, p1, p2 = fiber_product(ident, ident)
    assert INV_EMBEDDING in classify_hom(p1) and p1.is_surjective()


def test_fiber_product_constants():
    D1 = delta(1, "e")
    f = PointMap(delta(2), D1, {"p0": "e0", "p1": "e0"})
    g = PointMap(delta(3, "q"), D1, {"q0": "e0", "q1": "e0", "q2": "e0"})
    prod, _, _ = fiber_product(f, g)
    assert er_isomorphism(prod, delta(6, "r")) is not None


def test_fiber_product_codomain_mismatch():
    f = PointMap.identity(delta(1))
    g = PointMap.identity(delta(1, "q"))
    with pytest.raises(InputError):
        fiber_product(f, g)


def test_independent_examples():
    pts = ["a", "b", "c"]
    E1 = FinER([["a", "b"], ["c"]])
    E2 = FinER([["b", "c"], ["a"]])
    join, indep = independent_join([E1, E2])
    assert indep
    assert join == FinER.indiscrete(pts)

    pair = FinER([["a", "b"]])
    join, indep = independent_join([pair, pair])
    assert not indep
    assert join == pair

    d = FinER.delta(pts)
    join, indep = independent_join([d, d, d])
    assert indep and join == d


def test_independent_point_set_mismatch():
    with pytest.raises(InputError):
        independent([delta(2), delta(3)])


def test_quotient_by_subrelation():
    E = indiscrete(4)
    D = FinER([["p0", "p1"], ["p2", "p3"]])
    quot, proj = quotient_by_subrelation(E, D)
    assert quot.class_sizes() == (2,)
    assert proj.is_surjective() and REDUCTION in classify_hom(proj)

    quot, proj = quotient_by_subrelation(E, FinER.delta(E.points))
    assert er_isomorphism(quot, E) is not None

    quot, _ = quotient_by_subrelation(E, E)
    assert quot.class_sizes() == (1,)


def test_quotient_requires_subrelation():
    E = delta(2)
    D = indiscrete(2)
    with pytest.raises(InputError):
        quotient_by_subrelation(E, D)


def test_partition_count_matches_bell_numbers():
    bell = {1: 1, 2: 2, 3: 5, 4: 15}
    for n, expected in bell.items():
        assert sum(1 for _ in set_partitions(point_names(n))) == expected
