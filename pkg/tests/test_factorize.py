import pytest

from structo.errors import InputError
from structo.eqrel import (
    FinER, PointMap, point_names, classify_hom, er_isomorphism,
    HOM, REDUCTION, CI, CS, CB, EMBEDDING,
)
from structo.factorize import factor_ci, factor_smooth, factor_cs_smooth


def I(n, prefix="p"):
    return FinER.indiscrete(point_names(n, prefix))


def D(n, prefix="p"):
    return FinER.delta(point_names(n, prefix))


def test_factor_ci_worked_example():
    # identity on two points, equality into the indiscrete relation
    E, F = D(2), I(2)
    f = PointMap(E, F, {"p0": "p0", "p1": "p1"})
    fac = factor_ci(f)
    assert fac.middle.class_sizes() == (2, 2)
    assert EMBEDDING in classify_hom(fac.section_embedding)
    assert CB in classify_hom(fac.cb_map)
    assert fac.cb_map.compose(fac.section_embedding) == f
    # image: one point per class
    image = set(fac.section_embedding.mapping.values())
    for block in fac.middle.classes:
        assert len(image & set(block)) == 1


def test_factor_ci_of_cb_map_is_iso_onto_section():
    E, F = I(2), I(2, "q")
    f = PointMap(E, F, {"p0": "q0", "p1": "q1"})
    assert CB in classify_hom(f)
    fac = factor_ci(f)
    assert fac.section_embedding.is_surjective()  # complete section is everything
    assert er_isomorphism(fac.middle, E) is not None


def test_factor_ci_rejects_non_ci():
    f = PointMap(I(2), D(1, "q"), {"p0": "q0", "p1": "q0"})
    with pytest.raises(InputError):
        factor_ci(f)


def test_factor_smooth_constant_map():
    # the constant map off a two-point class: kernel inside classes is the
    # whole class, so the quotient collapses it and the descended map is a
    # bijection of singleton-class spaces
    f = PointMap(I(2), D(1, "q"), {"p0": "q0", "p1": "q0"})
    fac = factor_smooth(f)
    assert fac.quotient.class_sizes() == (1,)
    assert fac.cb_map.compose(fac.section_embedding).compose(fac.surjective_reduction) == f


def test_factor_smooth_injective_reduction():
    E = I(2)
    f = PointMap(E, I(2, "q"), {"p0": "q0", "p1": "q1"})
    fac = factor_smooth(f)
    assert fac.surjective_reduction.is_injective()  # quotient collapses nothing


def test_factor_smooth_identity_delta_into_indiscrete():
    E, F = D(2), I(2)
    f = PointMap(E, F, {"p0": "p0", "p1": "p1"})
    fac = factor_smooth(f)
    assert er_isomorphism(fac.quotient, D(2)) is not None
    assert fac.middle.class_sizes() == (2, 2)


def test_factor_cs_examples():
    f = PointMap(I(2), D(1, "q"), {"p0": "q0", "p1": "q0"})
    fac = factor_cs_smooth(f)
    assert fac.surjective_reduction.is_surjective()
    assert CB in classify_hom(fac.cb_map)
    assert fac.cb_map.compose(fac.surjective_reduction) == f

    # two-to-one classwise surjection halves the class
    f = PointMap(I(4), I(2, "q"), {"p0": "q0", "p1": "q0", "p2": "q1", "p3": "q1"})
    fac = factor_cs_smooth(f)
    assert fac.quotient.class_sizes() == (2,)

    # class-bijective input: the reduction is an isomorphism
    f = PointMap(I(2), I(2, "q"), {"p0": "q0", "p1": "q1"})
    fac = factor_cs_smooth(f)
    assert fac.surjective_reduction.is_injective()


def test_factor_cs_rejects_non_cs():
    E, F = D(2), I(2)
    f = PointMap(E, F, {"p0": "p0", "p1": "p1"})
    with pytest.raises(InputError):
        factor_cs_smooth(f)


def test_stage_classifications_on_a_sweep():
    from structo.eqrel import all_relations_up_to, _all_maps

    for E in all_relations_up_to(3):
        for F in all_relations_up_to(3, prefix="q"):
            for f in _all_maps(E, F):
                flags = classify_hom(f)
                if HOM not in flags:
                    continue
                fac = factor_smooth(f)
                gf = classify_hom(fac.surjective_reduction)
                assert REDUCTION in gf and fac.surjective_reduction.is_surjective()
                hf = classify_hom(fac.section_embedding)
                assert EMBEDDING in hf
                kf = classify_hom(fac.cb_map)
                assert CB in kf
