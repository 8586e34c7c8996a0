import random

import pytest

from qexp.decide import (
    SAT,
    UNSAT,
    UndecidedBackendError,
    Verdict,
    decide_bounded,
    decide_cyclic_free,
    dehn_reduce,
    dehn_steps,
    verify_solution,
    word_problem,
)
from qexp.equations import Environment, ExpEquation, Solution
from qexp.exponential import ExpLetter, ExpWord
from qexp.formats import parse_equation_file, parse_solution
from qexp.groups import CyclicGroup
from qexp.params import LinPoly, ParamSystem, Retraction
from qexp.quadwords import QuadSystem, QuadWord, d
from qexp.words import FreeProduct, Relator, cyclic_reduce


def test_word_problem_without_relators(ab_product):
    env = Environment(ab_product, {"1": frozenset({"A", "B"}), "2": frozenset({"A"})})
    a = ab_product.parse_word("A:a")
    assert word_problem(env, "1", ab_product.identity)
    assert not word_problem(env, "1", a)
    with pytest.raises(ValueError):
        word_problem(env, "3", a)
    with pytest.raises(ValueError):
        word_problem(env, "2", ab_product.parse_word("B:b"))


def test_dehn_reduction_for_high_powers(ab_product):
    H = ab_product
    ab = H.parse_word("A:a.B:b")
    relator = Relator(ab, 6)
    env = Environment(H, {"1": frozenset({"A", "B"})}, {"1": [relator]})
    b = H.parse_word("B:b")
    assert dehn_reduce(relator.s, relator).is_identity()
    assert word_problem(env, "1", relator.s)
    assert word_problem(env, "1", b * relator.s * b.inverse())
    assert not word_problem(env, "1", H.parse_word("A:a"))


def test_low_powers_only_accept(exx_equation):
    H = exx_equation.product
    env = exx_equation.env
    assert word_problem(env, "2", H.parse_word("H1:c12.H2:c22*c21.H1:c11.H2:c22*c21"))
    with pytest.raises(UndecidedBackendError):
        word_problem(env, "2", H.parse_word("H1:c11"))


def test_verify_worked_example(exx_equation, examples_dir):
    sol = parse_solution((examples_dir / "exx_eqn.sol").read_text(), exx_equation.product)
    assert verify_solution(exx_equation, sol)

    _, tight = parse_equation_file(examples_dir / "exx_eqn_L1.qeq")
    assert verify_solution(tight, sol)
    weak = parse_solution((examples_dir / "exx_eqn_44.sol").read_text(), tight.product)
    assert not verify_solution(tight, weak)


def test_verify_rejects_wrong_coefficient_value(exx_equation):
    H = exx_equation.product
    sol = Solution({d(1): H.parse_word("H2:c21")}, Retraction({1: 6, 2: 4}))
    assert not verify_solution(exx_equation, sol)


def test_cyclic_sat(examples_dir):
    _, W = parse_equation_file(examples_dir / "cyclic.qeq")
    verdict = decide_cyclic_free(W)
    assert verdict.status == "sat"
    assert verdict.solution.alpha[1] > 0
    assert verdict.solution.alpha[1] % 2 == 0
    assert verify_solution(W, verdict.solution)
    assert verdict.as_dict()["status"] == "sat"


def test_cyclic_unsat(examples_dir):
    _, W = parse_equation_file(examples_dir / "cyclic_unsat.qeq")
    verdict = decide_cyclic_free(W)
    assert verdict.status == "unsat"
    assert not verdict.inconsistent
    assert verdict.as_dict() == {"status": "unsat", "reason": verdict.reason}


def test_cyclic_backend_rejects_relators(exx_equation):
    with pytest.raises(ValueError):
        decide_cyclic_free(exx_equation)


def test_cyclic_backend_rejects_commutator_coefficients(ab_product):
    H = ab_product
    env = Environment(H, {"1": frozenset({"A", "B"})})
    commutator = ExpLetter.degenerate(H.parse_word("A:a.B:b.A:a^-1.B:b^-1"))
    W = ExpEquation(env, QuadSystem([QuadWord.parse("x1^-1 d1 x1")]), {d(1): ExpWord.of(commutator)}, ParamSystem(), ("1",))
    with pytest.raises(ValueError, match="several factors"):
        decide_cyclic_free(W)


def test_bounded_search(examples_dir):
    _, W = parse_equation_file(examples_dir / "cyclic.qeq")
    verdict = decide_bounded(W, 3, 2)
    assert verdict.status == "sat"
    assert verdict.solution.alpha[1] == 2
    assert verify_solution(W, verdict.solution)


def test_bounded_search_never_claims_unsat(examples_dir):
    _, W = parse_equation_file(examples_dir / "cyclic_unsat.qeq")
    assert decide_bounded(W, 0, 1).status == "unknown"
    with pytest.raises(ValueError):
        decide_bounded(W, -1, 1)


def test_verdict_constructors():
    assert Verdict.unknown("box", inconsistent=True).as_dict() == {
        "status": "unknown", "reason": "box", "inconsistent": True,
    }


l1, l2 = LinPoly.param(1), LinPoly.param(2)
INSTANCE_SHAPES = (
    "x1^-1 d1 x1",
    "x1^-1 d1 x1 x2^2",
    "x1^-1 d1 x1 [x2,x3]",
    "x1^-1 d1 x1 x2^-1 d2 x2",
    "d1 x1^2",
)


def random_cyclic_instance(rng):
    """One word over Z, Z/2 or Z/3 with one or two exponential letters per coefficient."""
    order = rng.choice((0, 0, 2, 3))
    H = FreeProduct([CyclicGroup("A", order, "a")])
    w = QuadWord.parse(rng.choice(INSTANCE_SHAPES))
    beta = {}
    for dd in sorted(w.coefficients):
        letters = []
        for _ in range(rng.randint(1, 2)):
            base = H.word([("A", rng.choice((1, -1, 2) if order == 0 else range(1, order)))])
            if rng.random() < 0.7:
                letter = ExpLetter.make(base, rng.choice((l1, l2, l1 + 1, 2 * l1, l1 - l2)))
            else:
                letter = ExpLetter.degenerate(base)
            letters.append((letter, rng.choice((1, -1))))
        beta[dd] = ExpWord(letters)
    L = ParamSystem()
    if rng.random() < 0.5:
        L = L.with_strict(l1)
    if rng.random() < 0.3:
        L = L.with_congruence(l2 - 1, 2)
    env = Environment(H, {"1": frozenset({"A"})})
    return ExpEquation(env, QuadSystem([w]), beta, L, ("1",))


def test_cyclic_backend_agrees_with_bounded_search():
    rng = random.Random(20240615)
    exact_sat = exact_unsat = both_sat = 0
    for _ in range(200):
        Q = random_cyclic_instance(rng)
        exact = decide_cyclic_free(Q)
        searched = decide_bounded(Q, 3, 2)
        assert searched.status != UNSAT
        if exact.status == SAT:
            assert verify_solution(Q, exact.solution)
            exact_sat += 1
        else:
            assert exact.status == UNSAT
            exact_unsat += 1
        if searched.status == SAT:
            assert verify_solution(Q, searched.solution)
            assert exact.status == SAT, Q
            both_sat += 1
    assert exact_unsat and both_sat
    assert both_sat <= exact_sat


def random_syllables(H, rng, length):
    first = rng.choice(("A", "B"))
    other = {"A": "B", "B": "A"}
    raw, fid = [], first
    for _ in range(length):
        raw.append((fid, rng.choice((-2, -1, 1, 2))))
        fid = other[fid]
    return H.word(raw)


def assert_dehn_steps_shrink(w, relator):
    lengths = [len(cyclic_reduce(w)[0])] + [len(v) for v in dehn_steps(w, relator)]
    assert all(a > b for a, b in zip(lengths, lengths[1:])), lengths


def test_dehn_accepts_random_consequences(ab_product):
    H = ab_product
    relator = Relator(H.parse_word("A:a.B:b"), 6)
    env = Environment(H, {"1": frozenset({"A", "B"})}, {"1": [relator]})
    rng = random.Random(20240616)
    for _ in range(50):
        w = H.identity
        for _ in range(rng.randint(1, 3)):
            g = random_syllables(H, rng, rng.randint(0, 3))
            s = relator.s if rng.random() < 0.5 else relator.s.inverse()
            w = w * g * s * g.inverse()
        assert word_problem(env, "1", w), w
        assert_dehn_steps_shrink(w, relator)


def test_dehn_rejects_random_nontrivial_words(ab_product):
    H = ab_product
    relator = Relator(H.parse_word("A:a.B:b"), 6)
    env = Environment(H, {"1": frozenset({"A", "B"})}, {"1": [relator]})
    rng = random.Random(20240617)
    rejected = 0
    while rejected < 50:
        w = random_syllables(H, rng, rng.randint(1, 14))
        # a -> 1, b -> -1 kills the relator, so a nonzero image proves w != 1
        image = sum(e if fid == "A" else -e for fid, e in w.syllables)
        if image == 0:
            continue
        assert not word_problem(env, "1", w), w
        assert not dehn_reduce(w, relator).is_identity()
        assert_dehn_steps_shrink(w, relator)
        rejected += 1
