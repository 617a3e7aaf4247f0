"""Factorization of maps between finite equivalence relations.

A class-injective map factors as a complete-section embedding followed by
a class-bijective map.  Since every map between finite relations is smooth,
every homomorphism factors further as a surjective reduction (collapse the
kernel inside classes), then that embedding, then a class-bijective map.
For class-surjective inputs the middle embedding disappears.
"""

from dataclasses import dataclass

from .errors import InputError, ContractViolation
from .eqrel import (
    FinER, PointMap, classify_hom, quotient_by_subrelation, tuple_name,
    HOM, REDUCTION, CI, CS, CB, EMBEDDING,
)


@dataclass
class CiFactorization:
    """f = cb_map o section_embedding, with the embedding's image meeting
    every class of the middle relation."""

    middle: FinER
    section_embedding: PointMap
    cb_map: PointMap


def _check_complete_section(g):
    image_classes = {g.codomain.class_index(q) for q in g.mapping.values()}
    return len(image_classes) == len(g.codomain.classes)


def factor_ci(f, selector=min):
    """Factor a class-injective map through the collapsed pair space.

    Pairs (x, y) with f(x) related to y are collapsed by identifying
    (x, y) with (x', y) for related x, x'; the collapsed point is named by
    the selected member of the class (minimal by default), which fixes the
    construction deterministically.
    """
    flags = classify_hom(f)
    if HOM not in flags or CI not in flags:
        raise InputError("factor_ci needs a class-injective homomorphism")
    E, F = f.domain, f.codomain

    def rep(x, y):
        return tuple_name(selector(E.class_of(x)), y)

    blocks = {}
    y_of = {}
    for x in E.points:
        for y in F.class_of(f.mapping[x]):
            key = (E.class_index(x), F.class_index(y))
            name = rep(x, y)
            blocks.setdefault(key, set()).add(name)
            y_of[name] = y
    middle = FinER([sorted(b) for b in blocks.values()])
    g = PointMap(E, middle, {x: rep(x, f.mapping[x]) for x in E.points})
    h = PointMap(middle, F, y_of)

    gflags = classify_hom(g)
    if EMBEDDING not in gflags or not _check_complete_section(g):
        raise ContractViolation("first stage is not a complete-section embedding")
    if CB not in classify_hom(h):
        raise ContractViolation("second stage is not class-bijective")
    if h.compose(g) != f:
        raise ContractViolation("stages do not recompose to the input")
    return CiFactorization(middle, g, h)


@dataclass
class SmoothFactorization:
    """f = cb_map o section_embedding o surjective_reduction."""

    quotient: FinER
    middle: FinER
    surjective_reduction: PointMap
    section_embedding: PointMap
    cb_map: PointMap


def _kernel_inside(E, f):
    blocks = {}
    for x in E.points:
        blocks.setdefault((E.class_index(x), f.mapping[x]), []).append(x)
    return FinER(blocks.values())


def factor_smooth(f):
    """Three-stage factorization of an arbitrary homomorphism.

    Collapsing the kernel inside classes always yields a class-injective
    descended map (two collapsed points of one class with equal image come
    from kernel-related points, hence coincide), so the pipeline never
    rejects a homomorphism.
    """
    flags = classify_hom(f)
    if HOM not in flags:
        raise InputError("factor_smooth needs a homomorphism")
    E, F = f.domain, f.codomain
    ker = _kernel_inside(E, f)
    quotient, g = quotient_by_subrelation(E, ker)
    descended = PointMap(quotient, F, {q: f.mapping[q] for q in quotient.points})
    dflags = classify_hom(descended)
    if CI not in dflags:
        raise ContractViolation("descended map is not class-injective")
    ci = factor_ci(descended)
    composite = ci.cb_map.compose(ci.section_embedding).compose(g)
    if composite != f:
        raise ContractViolation("stages do not recompose to the input")
    gflags = classify_hom(g)
    if REDUCTION not in gflags or not g.is_surjective():
        raise ContractViolation("first stage is not a surjective reduction")
    return SmoothFactorization(quotient, ci.middle, g, ci.section_embedding, ci.cb_map)


@dataclass
class CsFactorization:
    """f = cb_map o surjective_reduction."""

    quotient: FinER
    surjective_reduction: PointMap
    cb_map: PointMap


def factor_cs_smooth(f):
    """Two-stage factorization of a class-surjective homomorphism: the
    descended map is class-injective as always, and inherits
    class-surjectivity from f, so it is class-bijective."""
    flags = classify_hom(f)
    if HOM not in flags or CS not in flags:
        raise InputError("factor_cs_smooth needs a class-surjective homomorphism")
    E, F = f.domain, f.codomain
    ker = _kernel_inside(E, f)
    quotient, g = quotient_by_subrelation(E, ker)
    descended = PointMap(quotient, F, {q: f.mapping[q] for q in quotient.points})
    dflags = classify_hom(descended)
    if CB not in dflags:
        raise ContractViolation("descended map is not class-bijective")
    if descended.compose(g) != f:
        raise ContractViolation("stages do not recompose to the input")
    return CsFactorization(quotient, g, descended)
