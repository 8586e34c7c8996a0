import pytest

from qexp.exponential import (
    ExpLetter,
    ExpWord,
    UnconstrainedError,
    exponent_length,
    exponential_length,
    h_length,
    hl_length,
    homogeneous_equation,
    is_constrained,
    omega,
    require_constrained,
    residue,
)
from qexp.params import LinPoly, ParamSystem, Retraction
from qexp.quadwords import d

l1, l2 = LinPoly.param(1), LinPoly.param(2)


def test_constant_exponents_fold(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    letter = ExpLetter.make(ab, 3)
    assert letter.is_degenerate
    assert str(letter) == "(A:a.B:b.A:a)"
    assert letter.exponent == LinPoly.const(3)
    assert ExpLetter.make(ab_product.identity, 5).length == 0
    with pytest.raises(ValueError):
        ExpLetter(ab, LinPoly.const(3))


def test_proper_letters(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    letter = ExpLetter.make(ab, l1)
    assert letter.is_proper
    assert not letter.is_minor
    assert str(letter) == "(A:a.B:b)^[l1]"
    assert str(letter.evaluate(Retraction({1: 3}))) == "A:a.B:b.A:a"
    with pytest.raises(ValueError):
        ExpLetter(ab_product.parse_word("A:a.B:b.A:a"), l1)


def test_dual_letter_has_same_value(ab_product):
    letter = ExpLetter.make(ab_product.parse_word("A:a.B:b^2"), l1 - 1)
    for value in range(-5, 6):
        alpha = Retraction({1: value})
        assert letter.dual().evaluate(alpha) == letter.evaluate(alpha)


def test_exp_word_reduces_and_prints(ab_product):
    a = ExpLetter.make(ab_product.parse_word("A:a"), l1)
    b = ExpLetter.make(ab_product.parse_word("B:b"), l2)
    u = ExpWord([(a, 1), (b, 1), (b, -1), (a, -1)])
    assert len(u) == 0
    assert str(u) == "1"
    v = ExpWord([(a, 1), (b, -1)])
    assert str(v) == "(A:a)^[l1] (B:b)^[l2]^-1"
    assert v.inverse() == ExpWord([(b, 1), (a, -1)])
    assert str(v.evaluate(Retraction({1: 2, 2: 3}), ab_product)) == "A:a^2.B:b^-3"
    assert v.parameters == frozenset({1, 2})


def test_lengths_of_worked_coefficient(exx_equation):
    u = exx_equation.beta[d(2)]
    assert hl_length(u) == 3
    assert exponential_length(u) == 1
    assert h_length(u) == 6
    assert omega(u) == 6
    alpha = Retraction({1: 6, 2: 4})
    assert h_length(u, alpha) == 2 + 4 + 2
    assert exponent_length(u, alpha) == 2 + 4 + 2


def test_residues_and_constraint(exx_equation, ab_product):
    L = exx_equation.L
    letter = exx_equation.beta[d(3)].letters[0]
    assert residue(letter, L) == 0
    assert is_constrained(exx_equation.beta[d(2)], L)
    assert exx_equation.is_constrained()

    free = ExpWord.of(ExpLetter.make(ab_product.parse_word("A:a.B:b"), l1))
    assert not is_constrained(free, ParamSystem())
    with pytest.raises(UnconstrainedError):
        require_constrained(free, ParamSystem())
    assert is_constrained(free, ParamSystem().with_congruence(l1 - 1, 2))


def test_homogeneous_equation_numbers_letters_sequentially(exx_z):
    z = [exx_z.beta[d(i)] for i in (1, 2, 3)]
    words, H = homogeneous_equation(z, exx_z.L, first_parameter=10)
    # parameters 10, 12, 14: positions count degenerate letters; see DESIGN.md, homogeneous numbering
    proper = [(a.exponent, a.length) for w in words for a, _ in w if a.is_proper]
    assert proper == [(LinPoly.param(10), 1), (LinPoly.param(12), 2), (LinPoly.param(14), 2)]
    assert LinPoly.param(10) - 1 in H.inequalities
    assert (LinPoly.param(12), 2) in H.congruences
    assert (LinPoly.param(14), 2) in H.congruences
    assert not any(f.parameters == {10} for f, _ in H.congruences)


def test_homogeneous_equation_requires_constraint(ab_product):
    free = ExpWord.of(ExpLetter.make(ab_product.parse_word("A:a.B:b"), l1))
    with pytest.raises(UnconstrainedError):
        homogeneous_equation([free], ParamSystem())
