import random

import pytest

import qexp.resolution as resolution_module
from qexp.decide import SAT, decide_bounded, decide_cyclic_free, verify_solution
from qexp.equations import Environment, ExpEquation, Solution, component_values
from qexp.exponential import ExpLetter, ExpWord, UnconstrainedError
from qexp.params import LinPoly, ParamSystem, is_consistent
from qexp.quadwords import QuadSystem, QuadWord, d, is_standard_system
from qexp.resolution import (
    PipelineLimitError,
    find_relator_reducible,
    find_relator_unconstrained,
    is_special,
    reduce_to_standard_form,
    relator_branches,
    constraint_branches,
    remove_singularities,
    rewrite_measure,
    special_resolution,
)
from qexp.groups import CyclicGroup
from qexp.words import FreeProduct, Relator

l1, l2 = LinPoly.param(1), LinPoly.param(2)


def negative_letter_equation(H, L):
    env = Environment(H, {"1": frozenset({"A", "B"})})
    ab = H.parse_word("A:a.B:b")
    beta = {d(1): ExpWord([(ExpLetter.make(ab, l1), -1)])}
    return ExpEquation(env, QuadSystem([QuadWord.parse("x1^-1 d1 x1")]), beta, L, ("1",))


def test_negative_letter_resolution(ab_product):
    W = negative_letter_equation(ab_product, ParamSystem().with_congruence(l1, 2))
    steps = []
    resolution = special_resolution(W, on_step=steps.append)
    assert steps[0].stage == "redundancy"
    assert steps[0].lemma == "negative letters"
    assert steps[0].branches == 2
    assert sorted(len(r.equation.system) for r in resolution) == [0, 1, 1]
    for resolvent in resolution:
        assert is_special(resolvent.equation)
        assert resolvent.history


def test_lifted_solutions_solve_the_source(ab_product):
    W = negative_letter_equation(ab_product, ParamSystem().with_congruence(l1, 2))
    lifted = 0
    for resolvent in special_resolution(W):
        V = resolvent.equation
        alpha = is_consistent(V.L)
        assert W.L.satisfied_by(alpha)
        sol = Solution({}, alpha).complete(V)
        if all(v.is_identity() for v in component_values(V, sol)):
            parent = resolvent.lift(sol)
            assert all(v.is_identity() for v in component_values(W, parent))
            lifted += 1
    assert lifted == 1


def test_inconsistent_system_gives_empty_resolution(ab_product):
    L = ParamSystem().with_strict(l1).with_strict(-l1)
    resolution = special_resolution(negative_letter_equation(ab_product, L))
    assert len(resolution) == 0
    assert "inconsistent" in resolution.diagnostic


def test_unconstrained_equation_is_rejected(ab_product):
    with pytest.raises(UnconstrainedError):
        special_resolution(negative_letter_equation(ab_product, ParamSystem()))


def test_branch_budget(ab_product):
    W = negative_letter_equation(ab_product, ParamSystem().with_congruence(l1, 2))
    with pytest.raises(PipelineLimitError):
        special_resolution(W, max_branches=1)


def test_growing_redundancy_rewrite_is_rejected(ab_product, monkeypatch):
    W = negative_letter_equation(ab_product, ParamSystem().with_congruence(l1, 2))
    assert rewrite_measure(W) == (2, 2)

    def detect(V):
        return d(1) if len(V.beta[d(1)]) == 1 else None

    def doubled(V, _):
        return [(V.with_beta(d(1), ExpWord(list(V.beta[d(1)].items) * 2)), lambda s: s)]

    monkeypatch.setattr(resolution_module, "STAGES", [("redundancy", "cases 1-3", detect, doubled)])
    with pytest.raises(PipelineLimitError, match="raised the measure"):
        special_resolution(W)


def test_worked_example_is_not_special(exx_equation):
    report = is_special(exx_equation)
    assert not report
    assert "standard_form" in report.failed
    assert "normalized" in report.failed
    assert len(report.checks) == 7


def test_reduce_worked_example_to_standard_form(exx_equation):
    child, transfer = reduce_to_standard_form(exx_equation)
    child.validate()
    assert is_standard_system(child.system)
    assert str(child.system) == "x1^-1 d1 x1 ; x2^-1 d2 x2 x3^-1 d3 x3"
    assert child.L == exx_equation.L


def test_worked_example_resolution(exx_equation):
    resolution = special_resolution(exx_equation)
    assert len(resolution) >= 1
    for resolvent in resolution:
        V = resolvent.equation
        assert is_special(V), is_special(V).failed
        assert V.L.normalized
        alpha = is_consistent(V.L)
        assert exx_equation.L.satisfied_by(alpha)


def relator_equation(H, letters, L):
    ab = H.parse_word("A:a.B:b")
    env = Environment(H, {"1": frozenset({"A", "B"})}, {"1": [Relator(ab, 2)]})
    return ExpEquation(env, QuadSystem([QuadWord.parse("x1^-1 d1 x1")]), {d(1): ExpWord.of(*letters)}, L, ("1",))


def test_degenerate_relator_reduction(ab_product):
    H = ab_product
    W = relator_equation(H, [ExpLetter.degenerate(H.parse_word("A:a.B:b.A:a"))], ParamSystem())
    site = find_relator_reducible(W)
    assert site.kind == "degenerate"
    [(child, _)] = relator_branches(W, site)
    assert str(child.beta[d(1)]) == "(B:b^-1)"


def test_relator_root_is_split_by_residue(ab_product):
    H = ab_product
    L = ParamSystem().with_congruence(l1, 2).with_strict(l1)
    W = relator_equation(H, [ExpLetter.make(H.parse_word("A:a.B:b"), l1)], L)
    site = find_relator_unconstrained(W)
    assert site.relator_length == 4
    children = constraint_branches(W, site)
    values = sorted(str(child.beta[d(1)]) for child, _ in children)
    assert values == ["(1)", "(A:a.B:b)"]


def test_remove_singularities_closes_indices(ab_product):
    H = ab_product
    env = Environment(H, {"1": frozenset({"A", "B"})})
    system = QuadSystem([QuadWord.parse("x1^-1 d1 x1 x2^-1 d2 x2")])
    beta = {d(1): ExpWord(), d(2): ExpWord.of(ExpLetter.degenerate(H.parse_word("A:a")))}
    W = ExpEquation(env, system, beta, ParamSystem(), ("1",))
    child, transfer = remove_singularities(W)
    assert str(child.system) == "x1^-1 d1 x1"
    assert str(child.beta[d(1)]) == "(A:a)"
    sol = Solution({}, is_consistent(child.L)).complete(child)
    parent = transfer(sol)
    assert parent.value(d(2), H) == H.parse_word("A:a")


CYCLIC_ORDERS = {"A": 0, "B": 2, "C": 3}
WORD_SHAPES = (
    "x{0}^-1 d{0} x{0}",
    "x{0}^-1 d{0} x{0} x{1}^2",
    "x{0}^-1 d{0} x{0} [x{1},x{2}]",
    "x{0}^-1 d{0} x{0} x{1}^-1 d{1} x{1}",
    "d{0} x{0}^2",
)
EXPONENTS = (l1, l2, l1 - 1, -l2, l1 + l2, l2 - 2)
CONSTRAINTS = (
    lambda L: L.with_strict(l1),
    lambda L: L.with_inequality(l2 + 1),
    lambda L: L.with_congruence(l1 - 1, 2),
    lambda L: L.with_congruence(l2, 3),
    lambda L: L.with_inequality(2 - l1),
)


def random_cyclic_equation(rng):
    """At most two words and four exponential letters, each word over one cyclic factor."""
    H = FreeProduct([CyclicGroup(fid, order, fid.lower()) for fid, order in CYCLIC_ORDERS.items()])
    words, beta, supports = [], {}, {}
    budget = 4
    for k in range(rng.randint(1, 2)):
        w = QuadWord.parse(rng.choice(WORD_SHAPES).format(3 * k + 1, 3 * k + 2, 3 * k + 3))
        words.append(w)
        fid = rng.choice(sorted(CYCLIC_ORDERS))
        order = CYCLIC_ORDERS[fid]
        supports[str(k + 1)] = frozenset({fid})
        for dd in sorted(w.coefficients):
            letters = []
            for _ in range(rng.randint(0, min(2, budget))):
                base = H.word([(fid, rng.choice((1, -1, 2) if order == 0 else range(1, order)))])
                if rng.random() < 0.6:
                    letter = ExpLetter.make(base, rng.choice(EXPONENTS))
                else:
                    letter = ExpLetter.degenerate(base)
                letters.append((letter, rng.choice((1, -1))))
            budget -= len(letters)
            beta[dd] = ExpWord(letters)
    L = ParamSystem()
    for constrain in rng.sample(CONSTRAINTS, rng.randint(0, 3)):
        L = constrain(L)
    env = Environment(H, supports)
    return ExpEquation(env, QuadSystem(words), beta, L, tuple(sorted(supports)))


@pytest.fixture(scope="module")
def random_resolutions():
    rng = random.Random(20240613)
    out = []
    for _ in range(200):
        W = random_cyclic_equation(rng)
        out.append((W, special_resolution(W)))
    return out


def test_random_resolutions_preserve_solvability(random_resolutions):
    solvable = 0
    for W, resolution in random_resolutions:
        verdict = decide_cyclic_free(W)
        lifted = 0
        for resolvent in resolution:
            found = decide_cyclic_free(resolvent.equation)
            if found.status == SAT:
                assert verify_solution(W, resolvent.lift(found.solution)), (W, resolvent.equation)
                lifted += 1
        assert (lifted > 0) == (verdict.status == SAT), W
        if decide_bounded(W, 2, 1).status == SAT:
            assert verdict.status == SAT, W
        solvable += lifted > 0
    assert 0 < solvable < len(random_resolutions)


def test_random_resolvents_are_special(random_resolutions):
    resolvents = 0
    for W, resolution in random_resolutions:
        assert len(resolution) >= 1
        for resolvent in resolution:
            V = resolvent.equation
            report = is_special(V)
            assert report, (V, report.failed)
            assert W.L.satisfied_by(is_consistent(V.L))
            resolvents += 1
    assert resolvents >= len(random_resolutions)
