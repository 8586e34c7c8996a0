import pytest

from qexp.equations import (
    Environment,
    ExpEquation,
    Solution,
    component_values,
    compose,
    find_conjugator,
    recompute_coefficients,
    shift_conjugator,
)
from qexp.exponential import ExpLetter, ExpWord
from qexp.formats import parse_solution
from qexp.params import LinPoly, ParamSystem, Retraction
from qexp.quadwords import QuadSystem, QuadWord, d, x
from qexp.words import Relator


def test_environment_checks_relators(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    with pytest.raises(ValueError):
        Environment(ab_product, {"1": frozenset({"A", "B"})}, {"2": [Relator(ab, 2)]})
    with pytest.raises(ValueError):
        Environment(ab_product, {"1": frozenset({"A"})}, {"1": [Relator(ab, 2)]})
    env = Environment(ab_product, {"1": frozenset({"A", "B"})}, {"1": [Relator(ab, 2)]})
    assert not env.is_free("1")
    assert env.indices == ["1"]


def test_validate(ab_product):
    env = Environment(ab_product, {"1": frozenset({"A"}), "2": frozenset({"A", "B"})})
    system = QuadSystem([QuadWord.parse("x1^-1 d1 x1")])
    b = ExpWord.of(ExpLetter.degenerate(ab_product.parse_word("B:b")))
    ExpEquation(env, system, {d(1): b}, ParamSystem(), ("2",)).validate()
    with pytest.raises(ValueError):
        ExpEquation(env, system, {d(1): b}, ParamSystem(), ("1",)).validate()
    with pytest.raises(ValueError):
        ExpEquation(env, system, {}, ParamSystem(), ("2",)).validate()
    with pytest.raises(ValueError):
        ExpEquation(env, system, {d(1): b}, ParamSystem(), ("2", "2")).validate()
    with pytest.raises(ValueError):
        ExpEquation(env, system, {d(1): b}, ParamSystem(), ("3",)).validate()


def test_worked_example_accessors(exx_equation):
    W = exx_equation
    W.validate()
    assert W.coefficients == [d(1), d(2), d(3)]
    assert W.parameters == frozenset({1, 2})
    assert W.support == frozenset({"H1", "H2"})
    assert W.index_of(d(1)) == "1"
    assert W.index_of(d(3)) == "2"
    assert W.relators_for(d(1)) == []
    assert len(W.relators_for(d(2))) == 1
    assert W.measure() == (6, 11, 3)
    assert W.is_constrained()


def test_with_beta_keeps_the_original(exx_equation):
    empty = exx_equation.with_beta(d(1), ExpWord())
    assert len(empty.beta[d(1)]) == 0
    assert len(exx_equation.beta[d(1)]) == 1
    assert empty.signature() != exx_equation.signature()
    assert exx_equation.with_L(exx_equation.L).signature() == exx_equation.signature()


def test_solution_completion(exx_equation, examples_dir):
    sol = parse_solution((examples_dir / "exx_eqn.sol").read_text(), exx_equation.product)
    assert sol.alpha.assignment == {1: 6, 2: 4}
    full = sol.complete(exx_equation)
    assert full.value(d(1), exx_equation.product).is_identity()
    assert str(full.value(x(3), exx_equation.product)) == "H1:c11.H2:c22"
    first, second = component_values(exx_equation, full)
    assert first.is_identity()
    assert str(second) == "H1:c12.H2:c22*c21.H1:c11.H2:c22*c21"


def test_find_conjugator():
    assert find_conjugator(QuadWord.parse("x1^-1 d1 x1"), d(1)) == x(1)
    w = QuadWord.parse("d2 x3^-1 d3 x3")
    assert find_conjugator(w, d(3)) == x(3)
    assert find_conjugator(w, d(2)) is None


def one_letter_equation(H, u):
    env = Environment(H, {"1": frozenset({"A", "B"})})
    system = QuadSystem([QuadWord.parse("x1^-1 d1 x1")])
    return ExpEquation(env, system, {d(1): u}, ParamSystem().with_strict(LinPoly.param(1)), ("1",))


def test_transfers(ab_product):
    H = ab_product
    a = H.parse_word("A:a")
    parent = one_letter_equation(H, ExpWord.of(ExpLetter.make(a, LinPoly.param(1))))
    sol = Solution({x(1): H.parse_word("B:b")}, Retraction({1: 2}))

    lifted = recompute_coefficients(parent)(sol)
    assert lifted.value(d(1), H) == H.parse_word("A:a^2")
    assert lifted.value(x(1), H) == H.parse_word("B:b")

    shifted = shift_conjugator(parent, x(1), lambda alpha: a)(sol)
    assert shifted.value(x(1), H) == H.parse_word("A:a.B:b")

    twice = compose(shift_conjugator(parent, x(1), lambda alpha: a), shift_conjugator(parent, x(1), lambda alpha: a))
    assert twice(sol).value(x(1), H) == H.parse_word("A:a^2.B:b")
