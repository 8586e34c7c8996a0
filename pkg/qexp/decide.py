"""Solution verification and decision backends.

Three backends sit on top of the equation model:

- ``word_problem`` decides ``w = 1`` in ``G_k``. Without relators this is
  normal-form emptiness in the free product. With a single relator
  ``s = r^m`` and ``m >= 6`` it runs Dehn reduction on cyclic reductions.
- ``decide_cyclic_free`` decides equations whose components live in one
  cyclic factor, by abelianizing each component into a linear equation or
  congruence over the parameters.
- ``decide_bounded`` searches a box of retractions and short words. It can
  find solutions but never claims that none exist.

Verdicts are returned as ``Verdict`` values with a ``status`` of ``sat``,
``unsat`` or ``unknown``.

Usage:
    from qexp.decide import decide_bounded, decide_cyclic_free, verify_solution

    verdict = decide_cyclic_free(W)
    if verdict.status == "sat":
        assert verify_solution(W, verdict.solution)
"""

import logging
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Any, Dict, Iterator, List, Optional, Sequence

from qexp.equations import Environment, ExpEquation, Solution
from qexp.groups import FactorGroup
from qexp.params import LinPoly, ParameterPool, ParamSystem, Retraction, is_consistent
from qexp.quadwords import Letter, QuadWord
from qexp.words import Relator, Word, cyclic_reduce, find_relator_reduction, rotate

logger = logging.getLogger(__name__)

DEHN_MIN_POWER = 6

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


class UndecidedBackendError(RuntimeError):
    """Raised when no word-problem backend is known to be correct for ``G_k``."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision backend.

    Attributes:
        status: ``sat``, ``unsat`` or ``unknown``
        solution: Witness when ``status`` is ``sat``
        reason: Short human-readable explanation
        inconsistent: True when ``L`` itself has no integer solution
    """

    status: str
    solution: Optional[Solution] = None
    reason: str = ""
    inconsistent: bool = False

    @classmethod
    def sat(cls, solution: Solution, reason: str = "") -> "Verdict":
        return cls(SAT, solution, reason)

    @classmethod
    def unsat(cls, reason: str, inconsistent: bool = False) -> "Verdict":
        return cls(UNSAT, None, reason, inconsistent)

    @classmethod
    def unknown(cls, reason: str, inconsistent: bool = False) -> "Verdict":
        return cls(UNKNOWN, None, reason, inconsistent)

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"status": self.status, "reason": self.reason}
        if self.inconsistent:
            out["inconsistent"] = True
        if self.solution is not None:
            out["alpha"] = dict(sorted(self.solution.alpha.assignment.items()))
            out["phi"] = {str(a): str(v) for a, v in sorted(self.solution.phi.items())}
        return out


# Word problem ---------------------------------------------------------------


def dehn_steps(w: Word, relator: Relator) -> Iterator[Word]:
    """Yield the successive words of Dehn reduction of ``w`` modulo ``relator``.

    Each yielded word is cyclically reduced and strictly shorter than the one
    before it. The last word is either empty or admits no reduction on any
    cyclic permutation.
    """
    current, _ = cyclic_reduce(w)
    while len(current):
        site = None
        for k in range(len(current)):
            rotated = rotate(current, k)
            site = find_relator_reduction(rotated, relator)
            if site is not None:
                break
        if site is None:
            return
        start, length, v = site
        shorter, _ = cyclic_reduce(rotated[:start] * v.inverse() * rotated[start + length:])
        if len(shorter) >= len(current):
            raise AssertionError(f"Dehn step did not shorten {current}")
        current = shorter
        yield current


def dehn_reduce(w: Word, relator: Relator) -> Word:
    result, _ = cyclic_reduce(w)
    for result in dehn_steps(w, relator):
        pass
    return result


def word_problem(env: Environment, k: str, w: Word) -> bool:
    """Decide whether ``w`` is trivial in ``G_k``.

    Args:
        env: Environment holding the supports and relators
        k: Environment index
        w: Word over the free product

    Returns:
        True iff ``w`` lies in the normal closure of ``s_k`` in ``H_{*,k}``

    Raises:
        ValueError: If ``k`` is unknown or ``w`` leaves ``X_k``
        UndecidedBackendError: If ``s_k`` is not a single relator, or if ``m < 6`` and
            Dehn reduction stops at a nonempty word
    """
    if k not in env.supports:
        raise ValueError(f"Unknown environment index '{k}'")
    if not w.support <= env.supports[k]:
        raise ValueError(f"Word {w} uses factors outside X_{k} = {sorted(env.supports[k])}")
    relators = env.relators_of(k)
    if not relators:
        return w.is_identity()
    if len(relators) > 1:
        raise UndecidedBackendError(f"No word-problem backend for {len(relators)} relators at index '{k}'")
    relator = relators[0]
    reduced = dehn_reduce(w, relator)
    if relator.m < DEHN_MIN_POWER and not reduced.is_identity():
        # Reduction to 1 is a proof for any m; a remainder only decides when m >= 6
        raise UndecidedBackendError(
            f"Dehn backend needs a relator power m >= {DEHN_MIN_POWER} to reject {w}, got {relator!r}"
        )
    return reduced.is_identity()


# Verification ---------------------------------------------------------------


def verify_solution(Q: ExpEquation, sol: Solution) -> bool:
    """Check that ``sol`` solves ``Q``.

    ``α`` must satisfy ``L``. A ``φ(d)`` given in ``sol`` must equal
    ``α̂β(d)``; missing coefficient values are filled in. Every variable of
    component ``i`` must map into ``H_{*,a_i}`` and ``φ(w_i)`` must be trivial
    in ``G_{a_i}``.

    Raises:
        UndecidedBackendError: If some basis index has no word-problem backend
    """
    if not Q.L.satisfied_by(sol.alpha):
        logger.debug("alpha %s violates L", sol.alpha)
        return False
    for a, u in Q.beta.items():
        if a in sol.phi and sol.phi[a] != u.evaluate(sol.alpha, Q.product):
            logger.debug("phi(%s) = %s differs from its coefficient value", a, sol.phi[a])
            return False
    full = sol.complete(Q)
    for i, (w, k) in enumerate(zip(Q.system, Q.basis)):
        support = Q.env.supports[k]
        for a in w.variables:
            if not full.value(a, Q.product).support <= support:
                logger.debug("phi(%s) leaves X_%s", a, k)
                return False
        if not word_problem(Q.env, k, full.evaluate(w, Q.product)):
            logger.debug("component %d is not trivial under the solution", i + 1)
            return False
    return True


# Cyclic factors -------------------------------------------------------------


def _component_factor(Q: ExpEquation, i: int) -> Optional[FactorGroup]:
    """The single factor carrying the coefficients of component ``i``.

    Raises:
        ValueError: If the coefficients use more than one factor, or the factor
            is not cyclic, or the index carries relators
    """
    k = Q.basis[i]
    if not Q.env.is_free(k):
        raise ValueError(f"decide_cyclic_free needs relator-free indices, '{k}' has relators")
    w = Q.system[i]
    support = set()
    for a in w.coefficients:
        support |= Q.beta[a].support
    if len(support) > 1:
        raise ValueError(
            f"Component w{i + 1} has coefficients in several factors {sorted(support)}"
        )
    if not support:
        return None
    factor = Q.product.factor(support.pop())
    if factor.cyclic_order is None:
        raise ValueError(f"Factor {factor.factor_id} is not cyclic")
    return factor


def _unit_element(factor: FactorGroup) -> Any:
    """An element of exponent sum 1, or the identity in a trivial group."""
    for element in factor.elements(1):
        if factor.exponent_sum(element) == 1:
            return element
    return factor.identity


def _abelianized(Q: ExpEquation, w: QuadWord, factor: FactorGroup, squares: Dict[Letter, int]) -> LinPoly:
    """Exponent sum of ``φ(w)`` as a linear polynomial in parameters and square variables."""
    total = LinPoly.const(0)
    for a in sorted(w.coefficients):
        sign = sum(s for b, s in w if b == a)
        for letter, s in Q.beta[a]:
            if letter.is_degenerate:
                term = LinPoly.const(sum(factor.exponent_sum(e) for _, e in letter.base))
            elif len(letter.base):
                term = letter.exponent * factor.exponent_sum(letter.base[0][1])
            else:
                continue
            total = total + term * (s * sign)
    for a in sorted(w.variables):
        net = sum(s for b, s in w if b == a)
        if net:
            total = total + LinPoly.param(squares[a], net)
    return total


def decide_cyclic_free(Q: ExpEquation) -> Verdict:
    """Decide ``Q`` when every component lives in a single cyclic factor.

    Each component is abelianized. Conjugated coefficients contribute the
    exponent sums of their coefficient values, commutators contribute 0 and
    a variable occurring twice with the same sign contributes ``±2y`` for a
    fresh parameter ``y``. Infinite cyclic factors give linear equations and
    finite ones congruences modulo the order.

    Raises:
        ValueError: If ``Q`` is outside the cyclic relator-free regime
    """
    Q.validate()
    if is_consistent(Q.L) is None:
        return Verdict.unsat("parameter system L is inconsistent", inconsistent=True)
    pool = ParameterPool.above(Q.parameters)
    squares: Dict[Letter, int] = {}
    for a in sorted(Q.system.variables):
        squares[a] = pool.fresh()

    system = Q.L
    factors: List[Optional[FactorGroup]] = []
    for i, w in enumerate(Q.system):
        factor = _component_factor(Q, i)
        factors.append(factor)
        if factor is None:
            continue
        poly = _abelianized(Q, w, factor, squares)
        if factor.cyclic_order:
            system = system.with_congruence(poly, factor.cyclic_order)
        else:
            system = system.with_equation(poly)
        logger.debug("component w%d abelianizes to %s over %s", i + 1, poly, factor.factor_id)

    alpha = is_consistent(system)
    if alpha is None:
        return Verdict.unsat("abelianized system has no integer solution")

    phi: Dict[Letter, Word] = {}
    for i, w in enumerate(Q.system):
        factor = factors[i]
        for a in w.variables:
            if factor is None:
                phi[a] = Q.product.identity
                continue
            value = factor.power(_unit_element(factor), alpha[squares[a]])
            phi[a] = Q.product.word([(factor.factor_id, value)])
    solution = Solution(phi, alpha.restricted(Q.parameters)).complete(Q)
    if not verify_solution(Q, solution):
        raise AssertionError(f"abelianized witness does not verify: {solution}")
    logger.info("decide_cyclic_free: sat with alpha %s", solution.alpha)
    return Verdict.sat(solution, "abelianized system solved")


# Bounded search -------------------------------------------------------------


def bounded_words(env: Environment, k: str, max_length: int) -> List[Word]:
    """Words of ``H_{*,k}`` with at most ``max_length`` syllables.

    Infinite factors contribute powers of exponent at most ``max_length`` in
    absolute value (or elements of that length for ``FreeGroup`` factors).
    """
    product = env.product
    pieces = {}
    for fid in sorted(env.supports[k]):
        group = product.factor(fid)
        pieces[fid] = [e for e in group.elements(max_length) if not group.is_identity(e)]
    words = [product.identity]
    frontier = [product.identity]
    for _ in range(max_length):
        grown = []
        for w in frontier:
            last = w.syllables[-1][0] if len(w) else None
            for fid, elements in pieces.items():
                if fid == last:
                    continue
                for e in elements:
                    grown.append(Word(product, w.syllables + ((fid, e),)))
        words.extend(grown)
        frontier = grown
    return words


def _box(parameters: Sequence[int], bound: int) -> ParamSystem:
    box = ParamSystem()
    for p in parameters:
        box = box.with_inequality(LinPoly.param(p) + bound)
        box = box.with_inequality(LinPoly.const(bound) - LinPoly.param(p))
    return box


def _search_component(
    Q: ExpEquation, i: int, alpha: Retraction, candidates: List[Word]
) -> Optional[Dict[Letter, Word]]:
    w = Q.system[i]
    k = Q.basis[i]
    coefficients = {a: Q.beta[a].evaluate(alpha, Q.product) for a in w.coefficients}
    variables = sorted(w.variables)
    for values in cartesian(candidates, repeat=len(variables)):
        phi = dict(coefficients)
        phi.update(zip(variables, values))
        if word_problem(Q.env, k, Solution(phi, alpha).evaluate(w, Q.product)):
            return dict(zip(variables, values))
    return None


def decide_bounded(Q: ExpEquation, box_bound: int, length_bound: int) -> Verdict:
    """Search ``α ∈ [-B, B]^k`` and words of length at most ``M`` for a solution.

    Components are searched independently once ``α`` is fixed.

    Args:
        Q: Equation to search
        box_bound: B, the bound on every parameter value
        length_bound: M, the bound on the syllable length of ``φ(x)``

    Returns:
        ``sat`` with the first verified solution, otherwise ``unknown``

    Raises:
        ValueError: If a bound is negative
        UndecidedBackendError: If some basis index has no word-problem backend
    """
    if box_bound < 0 or length_bound < 0:
        raise ValueError(f"Bounds must be non-negative, got B={box_bound}, M={length_bound}")
    Q.validate()
    if is_consistent(Q.L) is None:
        return Verdict.unknown("parameter system L is inconsistent", inconsistent=True)
    parameters = sorted(Q.parameters)
    if is_consistent(Q.L.union(_box(parameters, box_bound))) is None:
        return Verdict.unknown(f"no solution of L inside the box [-{box_bound}, {box_bound}]")

    candidates = {k: bounded_words(Q.env, k, length_bound) for k in set(Q.basis)}
    tried = 0
    for values in cartesian(range(-box_bound, box_bound + 1), repeat=len(parameters)):
        alpha = Retraction(dict(zip(parameters, values)))
        if not Q.L.satisfied_by(alpha):
            continue
        tried += 1
        phi: Dict[Letter, Word] = {}
        for i, k in enumerate(Q.basis):
            found = _search_component(Q, i, alpha, candidates[k])
            if found is None:
                break
            phi.update(found)
        else:
            solution = Solution(phi, alpha).complete(Q)
            logger.info("decide_bounded: sat after %d retractions", tried)
            return Verdict.sat(solution, f"found within B={box_bound}, M={length_bound}")
    logger.info("decide_bounded: nothing found in %d retractions", tried)
    return Verdict.unknown(f"no solution within B={box_bound}, M={length_bound}")


if __name__ == "__main__":
    from qexp.exponential import ExpLetter, ExpWord
    from qexp.groups import CyclicGroup
    from qexp.quadwords import QuadSystem
    from qexp.words import FreeProduct

    H = FreeProduct([CyclicGroup("A", 0, "a")])
    env = Environment(H, {"1": frozenset({"A"})})
    a = H.parse_word("A:a")
    lam = LinPoly.param(1)
    W = ExpEquation(
        env,
        QuadSystem([QuadWord.parse("x1^-1 d1 x1 x2^2")]),
        {Letter("d", 1): ExpWord.of(ExpLetter.make(a, lam))},
        ParamSystem().with_strict(lam),
        ("1",),
    )
    print("cyclic:", decide_cyclic_free(W).as_dict())
    print("bounded:", decide_bounded(W, 3, 2).as_dict())
