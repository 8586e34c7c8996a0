import random

import pytest

from qexp.params import (
    LinPoly,
    ParameterPool,
    ParamSystem,
    Retraction,
    implies_congruence,
    implies_positive,
    implies_value,
    is_consistent,
    is_normalized,
    normalize_system,
)

l1, l2, l3 = LinPoly.param(1), LinPoly.param(2), LinPoly.param(3)


def test_linpoly_arithmetic_and_format():
    f = LinPoly.build({1: 2, 3: -1}, 4)
    assert str(f) == "2*l1 - l3 + 4"
    assert str(l1 - l1) == "0"
    assert str(LinPoly.param(-2)) == "t2"
    assert (f + l3).as_dict() == {1: 2}
    assert (3 * l2).coeff(2) == 3
    assert f.substitute({1: l2 + 1}).evaluate({2: 5, 3: 1}) == 2 * 6 - 1 + 4
    assert f.content() == 1
    assert LinPoly.build({1: 4, 2: 6}).content() == 2


def test_system_lines_and_satisfaction():
    L = ParamSystem().with_congruence(l1, 2).with_strict(l1 - 4).with_equation(l2 - 3)
    assert L.lines() == ["eq: l2 - 3 = 0", "cong: l1 = 0 mod 2", "ineq: l1 - 5 >= 0"]
    assert L.satisfied_by({1: 6, 2: 3})
    assert not L.satisfied_by({1: 4, 2: 3})
    assert L.parameters == frozenset({1, 2})
    with pytest.raises(ValueError):
        ParamSystem().with_congruence(l1, 0)


def test_normalize_system():
    L = ParamSystem().with_equation(2 * l1 - 4 * l2 + 6).with_congruence(l1 + 7, 4)
    N = normalize_system(L)
    assert N.normalized
    assert is_normalized(N)
    assert LinPoly.build({1: 1, 2: -2}, 3) in N.equations
    assert (LinPoly.build({1: 1}, 3), 4) in N.congruences
    assert not ParamSystem().with_congruence(l1 + 7, 4).normalized


def test_normalize_detects_trivial_contradictions():
    N = normalize_system(ParamSystem().with_equation(2 * l1 + 1))
    assert is_consistent(N) is None
    N = normalize_system(ParamSystem().with_inequality(LinPoly.const(-1)))
    assert is_consistent(N) is None
    N = normalize_system(ParamSystem().with_congruence(2 * l1 + 4, 2))
    assert N.is_empty()


def test_is_consistent_finds_solution():
    L = ParamSystem().with_congruence(l1, 2).with_strict(l1 - 4)
    alpha = is_consistent(L)
    assert alpha is not None
    assert alpha[1] % 2 == 0 and alpha[1] > 4


def test_is_consistent_rejects_empty_integer_hull():
    # 2 <= 3*l1 <= 2 has a rational but no integer solution
    L = ParamSystem().with_inequality(3 * l1 - 2).with_inequality(2 - 3 * l1)
    assert is_consistent(L) is None
    L = ParamSystem().with_equation(2 * l1 + 4 * l2 - 1)
    assert is_consistent(L) is None


def test_is_consistent_bounded_box():
    L = (
        ParamSystem()
        .with_inequality(l1 - 1)
        .with_inequality(l2 - 1)
        .with_inequality(5 - l1 - l2)
        .with_congruence(l1 - l2 - 1, 3)
    )
    alpha = is_consistent(L)
    assert alpha is not None
    assert L.satisfied_by(alpha)


def test_random_systems_agree_with_enumeration():
    rng = random.Random(7)
    box = range(-6, 7)
    for _ in range(60):
        L = ParamSystem()
        for _ in range(rng.randint(1, 3)):
            f = LinPoly.build({1: rng.randint(-3, 3), 2: rng.randint(-3, 3)}, rng.randint(-5, 5))
            L = L.with_inequality(f)
        if rng.random() < 0.5:
            L = L.with_congruence(LinPoly.build({1: rng.randint(1, 3), 2: rng.randint(-2, 2)}), rng.randint(2, 4))
        # keep the search space finite so enumeration is a complete check
        L = L.with_inequality(l1 + 6).with_inequality(6 - l1).with_inequality(l2 + 6).with_inequality(6 - l2)
        brute = any(L.satisfied_by({1: a, 2: b}) for a in box for b in box)
        found = is_consistent(L)
        assert (found is not None) == brute
        if found is not None:
            assert L.satisfied_by(found)


def test_implied_constraints():
    L = ParamSystem().with_congruence(l1, 2).with_strict(l1 - 4)
    assert implies_congruence(L, l1, 2) == 0
    assert implies_congruence(L, l1 + 1, 2) == 1
    assert implies_congruence(L, l1, 4) is None
    assert implies_positive(L, l1 - 5)
    assert not implies_positive(L, l1 - 6)
    assert implies_value(L, l1) is None
    M = L.with_inequality(6 - l1)
    assert implies_value(M, l1) == 6
    assert implies_value(M, LinPoly.const(3)) == 3
    with pytest.raises(ValueError):
        implies_congruence(L, l1, 0)


def test_retraction():
    alpha = Retraction({1: 6, 2: 4})
    assert alpha(l1 - l2) == 2
    assert alpha[7] == 0
    assert alpha.extended({3: 1})[3] == 1
    assert alpha.restricted([1]).assignment == {1: 6}


def test_parameter_pool():
    pool = ParameterPool.above([1, 4, 2])
    assert pool.fresh() == 5
    pool.reserve([9])
    assert pool.fresh() == 10
    assert pool.fresh_poly() == LinPoly.param(11)
