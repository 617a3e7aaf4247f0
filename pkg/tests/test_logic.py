import pytest

from structo.errors import InputError
from structo.eqrel import FinER, point_names
from structo.structures import Language, FinStructure
from structo.logic import (
    parse, print_formula, eval_formula, models, first_model, satisfiable,
    structure_search, implies_star_n, holds_classwise, Theory,
    Atom, Eq, Not, And, Or, Exists, Forall, TRUE, FALSE, conj, disj,
)
from structo.constructions import linear_order_theory, exactly_two_theory, truth_theory
from structo.verify import brute_models


def test_parse_examples():
    phi = parse("(forall x (exists y (rel R x y)))")
    assert phi == Forall("x", Exists("y", Atom("R", ("x", "y"))))
    assert parse("(and)") == TRUE
    assert parse("(or)") == FALSE
    with pytest.raises(InputError):
        parse("(rel R x")
    with pytest.raises(InputError):
        parse("(frobnicate x)")


def test_print_parse_round_trip():
    texts = [
        "(forall x (exists y (rel R x y)))",
        "(and (rel P a) (not (eq a b)) (or (true) (false)))",
    ]
    for text in texts:
        assert print_formula(parse(text)) == print_formula(parse(print_formula(parse(text))))


def test_eval_examples():
    lang = Language([("R", 2)])
    A = FinStructure(lang, ["a", "b"], {"R": [("a", "b")]})
    assert eval_formula(A, TRUE)
    assert eval_formula(A, parse("(exists x (exists y (rel R x y)))"))
    assert not eval_formula(A, parse("(forall x (rel R x x))"))
    with pytest.raises(InputError):
        eval_formula(A, parse("(rel R x y)"), {"x": "a"})


def test_models_examples():
    assert len(models(linear_order_theory(), ["a", "b"])) == 2
    unary_any = Theory(Language([("P", 1)]), TRUE)
    assert len(models(unary_any, ["a"])) == 2
    bot = Theory(Language(()), FALSE)
    assert models(bot, ["a"]) == []


def test_models_against_brute_force():
    for theory in (linear_order_theory(), exactly_two_theory()):
        for n in (1, 2, 3):
            ours = [m.key() for m in models(theory, point_names(n))]
            brute = [m.key() for m in brute_models(theory, point_names(n))]
            assert len(ours) == len(set(ours))
            assert set(ours) == set(brute)


def test_first_model_is_first():
    theory = linear_order_theory()
    ms = models(theory, point_names(3))
    assert first_model(theory, point_names(3)) == ms[0]


def test_structure_search_examples():
    I3 = FinER.indiscrete(point_names(3))
    res = structure_search(I3, linear_order_theory())
    assert res.ok
    assert holds_classwise(res.structured, linear_order_theory().sentence)

    res = structure_search(I3, exactly_two_theory())
    assert not res.ok
    assert res.failed_class == I3.classes[0]

    res = structure_search(I3, truth_theory())
    assert res.ok


def test_implies_star_examples():
    slo = linear_order_theory()
    assert implies_star_n(slo, slo, 3).holds
    assert implies_star_n(slo, truth_theory(), 3).holds
    res = implies_star_n(truth_theory(), exactly_two_theory(), 3)
    assert not res.holds
    assert res.counterexample == FinER.delta(point_names(1))


def test_theory_validation():
    with pytest.raises(InputError):
        Theory(Language(()), Atom("R", ("x",)))
    with pytest.raises(InputError):
        Theory(Language([("R", 1)]), Atom("R", ("x",)))  # free variable
    with pytest.raises(InputError):
        Theory(Language([("R", 1)]), Forall("x", Atom("R", ("x", "x"))))
