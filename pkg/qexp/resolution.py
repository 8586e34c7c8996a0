"""Special resolution of constrained quadratic exponential equations.

The pipeline rewrites an equation until it is *special*: in standard form,
positive, cyclically irredundant, relator-reduced, relator-constrained,
non-singular and with a normalized parameter system. Stages are tried in a
fixed order and the first one that applies is used; its branches go back on
the worklist and are checked again from the first stage.

Each output carries the ordered list of steps that produced it and a
transfer function turning one of its solutions into a solution of the
input.

Usage:
    from qexp.resolution import special_resolution, is_special

    resolution = special_resolution(W, on_step=print)
    for resolvent in resolution:
        assert is_special(resolvent.equation)
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from qexp.equations import (
    ExpEquation,
    Solution,
    Transfer,
    compose,
    identity_transfer,
    recompute_coefficients,
)
from qexp.exponential import ExpLetter, ExpWord, Occurrence, require_constrained, residue
from qexp.params import (
    LinPoly,
    ParameterPool,
    ParamSystem,
    is_consistent,
    is_normalized,
    normalize_system,
)
from qexp.quadwords import Letter, QuadSystem, QuadWord, is_standard_system
from qexp.redundancy import (
    apply_cyclic_redundancy,
    apply_redundancy,
    find_cyclic_redundancy,
    find_redundancy,
    is_positive,
    non_positive_exponent,
    sign_split,
)
from qexp.stdform import to_standard_form
from qexp.words import (
    Relator,
    Word,
    cyclic_reduce,
    initial_segment,
    is_relator_reduced,
    power_prefix,
    relator_reduce,
    rotate,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_BRANCHES = 2000
DEFAULT_MAX_STEPS = 100000

# Stages whose rewrites never increase ``rewrite_measure``. Standard form and the
# relator stages are bounded by ``relator_reducibility`` instead.
MONOTONE_STAGES = frozenset({"redundancy", "positivity", "cyclic-redundancy", "singularities", "normalization"})

Child = Tuple[ExpEquation, Transfer]


class PipelineLimitError(RuntimeError):
    """Raised when a resolution grows beyond its branch or step budget, or a
    shrinking stage produces a child whose measure is larger than its parent's."""


@dataclass(frozen=True)
class ResolutionStep:
    """One rewrite: which stage fired, under which rule, where, and how many branches it left."""

    stage: str
    lemma: str
    site: str
    branches: int

    def as_dict(self) -> Dict[str, object]:
        return {"stage": self.stage, "lemma": self.lemma, "site": self.site, "branches": self.branches}


@dataclass
class Resolvent:
    equation: ExpEquation
    history: Tuple[ResolutionStep, ...] = ()
    transfer: Transfer = identity_transfer

    def lift(self, solution: Solution) -> Solution:
        """Solution of the original equation from a solution of this resolvent."""
        return self.transfer(solution)


@dataclass
class Resolution:
    source: ExpEquation
    resolvents: List[Resolvent] = field(default_factory=list)
    diagnostic: Optional[str] = None

    def __iter__(self):
        return iter(self.resolvents)

    def __len__(self) -> int:
        return len(self.resolvents)

    @property
    def equations(self) -> List[ExpEquation]:
        return [r.equation for r in self.resolvents]


# Standard form --------------------------------------------------------------


def pull_back(W: ExpEquation, w: QuadWord) -> ExpWord:
    """``β*(w)`` for a word over coefficient letters; letters outside ``β`` map to 1."""
    items: List[Occurrence] = []
    for a, sign in w:
        if a.kind != "d":
            raise ValueError(f"Expected a word over coefficient letters, found {a} in {w}")
        image = W.beta.get(a)
        if image is None:
            continue
        items.extend((image if sign == 1 else image.inverse()).items)
    return ExpWord(items)


def reduce_to_standard_form(W: ExpEquation) -> Child:
    """Carry ``W`` to standard form with ``δ = β*∘η⁻¹``.

    The transfer is ``φ = μ*∘η`` where ``μ*`` extends a solution of the
    standard equation by ``α̂δ*`` on other coefficient letters and 1 on other
    variables.
    """
    eta, standard = to_standard_form(W.system)
    delta = {a: pull_back(W, eta.preimage(a)) for a in sorted(standard.coefficients)}
    child = ExpEquation(W.env, standard, delta, W.L, W.basis)
    known = set(standard.coefficients) | set(standard.variables)

    def transfer(solution: Solution) -> Solution:
        product = W.product

        def mu(a: Letter) -> Word:
            if a in known and a.kind == "x":
                return solution.value(a, product)
            if a.kind == "d":
                return pull_back(W, eta.preimage(a)).evaluate(solution.alpha, product)
            return product.identity

        phi = {}
        for a in W.system.variables:
            value = product.identity
            for b, sign in eta.image(a):
                v = mu(b)
                value = value * (v if sign == 1 else v.inverse())
            phi[a] = value
        return Solution(phi, solution.alpha).complete(W)

    logger.debug("standard form %s with %d elementary steps", standard, len(eta))
    return child, transfer


# Relator reduction ----------------------------------------------------------


@dataclass(frozen=True)
class RelatorSite:
    """A relator-reducible letter: ``kind`` is degenerate, base or rotation."""

    letter: Letter
    index: int
    kind: str
    rotation: int = 0

    def __str__(self) -> str:
        extra = f" by {self.rotation}" if self.kind == "rotation" else ""
        return f"{self.letter}[{self.index}] {self.kind}{extra}"


def find_relator_reducible(W: ExpEquation) -> Optional[RelatorSite]:
    """Degenerate reducible letters first, then proper ones."""
    proper: Optional[RelatorSite] = None
    for dd in W.coefficients:
        rels = W.relators_for(dd)
        if not rels:
            continue
        for i, (a, _) in enumerate(W.beta[dd]):
            if a.is_degenerate:
                if not is_relator_reduced(a.base, rels):
                    return RelatorSite(dd, i, "degenerate")
                continue
            if proper is not None:
                continue
            if not is_relator_reduced(a.base, rels):
                proper = RelatorSite(dd, i, "base")
                continue
            for j in range(1, a.length):
                if not is_relator_reduced(rotate(a.base, j), rels):
                    proper = RelatorSite(dd, i, "rotation", j)
                    break
    return proper


def relator_reducibility(W: ExpEquation) -> int:
    """Sum of ``l_H`` over relator-reducible proper letters."""
    total = 0
    for dd in W.coefficients:
        rels = W.relators_for(dd)
        if not rels:
            continue
        for a, _ in W.beta[dd]:
            if a.is_proper and any(
                not is_relator_reduced(rotate(a.base, j), rels) for j in range(a.length)
            ):
                total += a.length
    return total


def _splice(u: ExpWord, index: int, letters: Sequence[ExpLetter]) -> ExpWord:
    replacement = ExpWord.of(*letters)
    if u[index][1] == -1:
        replacement = replacement.inverse()
    return ExpWord(list(u.items[:index]) + list(replacement.items) + list(u.items[index + 1:]))


def relator_branches(W: ExpEquation, site: RelatorSite, pool: Optional[ParameterPool] = None) -> List[Child]:
    """Replace a relator-reducible letter, splitting on its exponent when proper."""
    rels: List[Relator] = W.relators_for(site.letter)
    u = W.beta[site.letter]
    a = u[site.index][0]
    transfer = recompute_coefficients(W)
    if site.kind == "degenerate":
        reduced = ExpLetter.degenerate(relator_reduce(a.base, rels))
        return [(W.with_beta(site.letter, _splice(u, site.index, [reduced])), transfer)]

    pool = pool or ParameterPool.above(W.parameters)
    f = a.exponent
    m = a.length
    k = residue(a, W.L)
    if k is None:
        raise ValueError(f"Letter {a} is not constrained by {W.L}")
    lam = pool.fresh_poly()
    c0 = relator_reduce(initial_segment(a.base, k), rels)
    options: List[Tuple[List[ExpLetter], ParamSystem]] = [
        ([ExpLetter.degenerate(c0)], W.L.with_equation(f - k)),
    ]
    if site.kind == "base":
        a1, b = cyclic_reduce(relator_reduce(a.base, rels))
        options.append((
            [
                ExpLetter.degenerate(b.inverse()),
                ExpLetter.make(a1, lam * len(a1)),
                ExpLetter.degenerate(b * c0),
            ],
            W.L.with_equation(f - k - lam * m).with_strict(lam),
        ))
    else:
        head, tail = a.base[:site.rotation], a.base[site.rotation:]
        a1, b = cyclic_reduce(relator_reduce(tail * head, rels))
        a2 = relator_reduce(power_prefix(a.base, m + k), rels)
        options.append(([ExpLetter.degenerate(a2)], W.L.with_equation(f - m - k)))
        options.append((
            [
                ExpLetter.degenerate(relator_reduce(head * b.inverse(), rels)),
                ExpLetter.make(a1, lam * len(a1)),
                ExpLetter.degenerate(relator_reduce(b * tail * initial_segment(a.base, k), rels)),
            ],
            W.L.with_equation(f - lam * m - (k + m)).with_strict(lam),
        ))
    out = []
    for letters, L in options:
        if is_consistent(L) is None:
            continue
        out.append((W.with_L(L).with_beta(site.letter, _splice(u, site.index, letters)), transfer))
    return out


# Relator constraint ---------------------------------------------------------


@dataclass(frozen=True)
class ConstraintSite:
    letter: Letter
    index: int
    relator_length: int

    def __str__(self) -> str:
        return f"{self.letter}[{self.index}] mod {self.relator_length}"


def _root_of_relator(base: Word, rels: Sequence[Relator]) -> Optional[int]:
    n = len(base)
    if not n:
        return None
    for rel in rels:
        for rot in rel.rotations:
            if len(rot) % n == 0 and rot == base.syllables * (len(rot) // n):
                return len(rel)
    return None


def find_relator_unconstrained(W: ExpEquation) -> Optional[ConstraintSite]:
    """Proper letter whose base is a root of a cyclic permutation of a relator or its inverse."""
    for dd in W.coefficients:
        rels = W.relators_for(dd)
        if not rels:
            continue
        for i, (a, _) in enumerate(W.beta[dd]):
            if not a.is_proper:
                continue
            length = _root_of_relator(a.base, rels)
            if length is not None:
                return ConstraintSite(dd, i, length)
    return None


def constraint_branches(W: ExpEquation, site: ConstraintSite) -> List[Child]:
    """Split ``(s0, f)`` over the residues of ``f`` modulo ``l(s)``."""
    u = W.beta[site.letter]
    a = u[site.index][0]
    f = a.exponent
    n = site.relator_length
    transfer = recompute_coefficients(W)
    options: List[Tuple[ExpLetter, ParamSystem]] = []
    for j in range(1, n):
        if 2 * j < n:
            options.append((ExpLetter.degenerate(power_prefix(a.base, -j)), W.L.with_congruence(f + j, n)))
    for j in range(0, n // 2 + 1):
        options.append((ExpLetter.degenerate(power_prefix(a.base, j)), W.L.with_congruence(f - j, n)))
    out = []
    for letter, L in options:
        if is_consistent(L) is None:
            continue
        out.append((W.with_L(L).with_beta(site.letter, _splice(u, site.index, [letter])), transfer))
    return out


# Singularities --------------------------------------------------------------


def singularities(W: ExpEquation) -> List[Letter]:
    return [dd for dd in W.coefficients if not len(W.beta[dd])]


def remove_singularities(W: ExpEquation) -> Child:
    """Delete ``x_i⁻¹ d_i x_i`` for every ``β(d_i) = 1`` and close up the indices.

    Requires ``W`` in standard form. Components that become empty are
    dropped together with their basis entry.
    """
    removed = sorted(dd.index for dd in singularities(W))

    def sigma(i: int) -> int:
        return i - sum(1 for t in removed if t < i)

    words: List[QuadWord] = []
    basis: List[str] = []
    for w, k in zip(W.system, W.basis):
        kept = [(Letter(a.kind, sigma(a.index)), s) for a, s in w if a.index not in removed]
        if kept:
            words.append(QuadWord(kept))
            basis.append(k)
    beta = {
        Letter("d", sigma(dd.index)): u for dd, u in W.beta.items() if dd.index not in removed
    }
    child = ExpEquation(W.env, QuadSystem(words), beta, W.L, tuple(basis))

    def transfer(solution: Solution) -> Solution:
        product = W.product
        phi = {}
        for a in W.system.variables:
            if a.index in removed:
                phi[a] = product.identity
            else:
                phi[a] = solution.value(Letter(a.kind, sigma(a.index)), product)
        return Solution(phi, solution.alpha).complete(W)

    return child, transfer


# Predicates -----------------------------------------------------------------


def is_cyclically_irredundant(W: ExpEquation) -> bool:
    return find_redundancy(W) is None and find_cyclic_redundancy(W) is None


def is_relator_reduced_equation(W: ExpEquation) -> bool:
    return find_relator_reducible(W) is None


def is_relator_constrained(W: ExpEquation) -> bool:
    return find_relator_unconstrained(W) is None


def is_non_singular(W: ExpEquation) -> bool:
    return not singularities(W)


def has_normalized_system(W: ExpEquation) -> bool:
    return W.L.normalized and is_normalized(W.L)


@dataclass
class SpecialReport:
    """Per-property verdicts of ``is_special``."""

    checks: Dict[str, bool]

    def __bool__(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]


def is_special(W: ExpEquation) -> SpecialReport:
    return SpecialReport({
        "standard_form": is_standard_system(W.system),
        "cyclically_irredundant": is_cyclically_irredundant(W),
        "positive": is_positive(W),
        "relator_reduced": is_relator_reduced_equation(W),
        "relator_constrained": is_relator_constrained(W),
        "non_singular": is_non_singular(W),
        "normalized": has_normalized_system(W),
    })


# Pipeline -------------------------------------------------------------------

Stage = Tuple[str, str, Callable[[ExpEquation], Optional[object]], Callable[[ExpEquation, object], List[Child]]]


def _standard_site(W: ExpEquation):
    return None if is_standard_system(W.system) else "system"


def _redundancy_stage(cases):
    def detect(W: ExpEquation):
        return find_redundancy(W, cases)

    def apply(W: ExpEquation, found) -> List[Child]:
        dd, site = found
        return apply_redundancy(W, dd, site)

    return detect, apply


def _apply_sign_split(W: ExpEquation, f: LinPoly) -> List[Child]:
    transfer = recompute_coefficients(W)
    return [(child, transfer) for child, _ in sign_split(W, f)]


def _apply_cyclic(W: ExpEquation, found) -> List[Child]:
    dd, site = found
    return apply_cyclic_redundancy(W, dd, site)


def _singular_site(W: ExpEquation):
    found = singularities(W)
    return found or None


def _normalization_site(W: ExpEquation):
    return None if has_normalized_system(W) else "L"


STAGES: List[Stage] = [
    ("standard-form", "standard form", _standard_site, lambda W, _: [reduce_to_standard_form(W)]),
    ("redundancy", "cases 1-3", *_redundancy_stage((1, 2, 3))),
    ("redundancy", "negative letters", *_redundancy_stage((4,))),
    ("positivity", "sign split", non_positive_exponent, _apply_sign_split),
    ("redundancy", "cases 5-7", *_redundancy_stage((5, 6, 7))),
    ("cyclic-redundancy", "wrap-around pair", find_cyclic_redundancy, _apply_cyclic),
    ("relator-reduction", "relator reduction", find_relator_reducible, relator_branches),
    ("relator-constraint", "residue split", find_relator_unconstrained, constraint_branches),
    ("singularities", "delete trivial coefficients", _singular_site, lambda W, _: [remove_singularities(W)]),
    ("normalization", "normalize L", _normalization_site, lambda W, _: [(W.with_L(normalize_system(W.L)), identity_transfer)]),
]


def _describe(found) -> str:
    if isinstance(found, tuple) and len(found) == 2:
        return f"{found[0]}: {found[1]}"
    if isinstance(found, list):
        return ", ".join(str(a) for a in found)
    return str(found)


def resolution_step(W: ExpEquation) -> Optional[Tuple[ResolutionStep, List[Child]]]:
    """Apply the first stage that fires on ``W``; None when ``W`` is special."""
    for stage, lemma, detect, apply in STAGES:
        found = detect(W)
        if found is None:
            continue
        children = [(child, t) for child, t in apply(W, found) if is_consistent(child.L) is not None]
        return ResolutionStep(stage, lemma, _describe(found), len(children)), children
    return None


def rewrite_measure(W: ExpEquation) -> Tuple[int, int]:
    """``(H^Λ-length + exponential length, H-length)``, compared lexicographically.

    Merging a run, cancelling a pair, dropping a letter or a coefficient
    lowers the first entry; replacing a power by its root lowers the second.
    """
    return W.hl_length() + W.exponential_length(), W.h_length()


def special_resolution(
    W: ExpEquation,
    on_step: Optional[Callable[[ResolutionStep], None]] = None,
    max_branches: int = DEFAULT_MAX_BRANCHES,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> Resolution:
    """Compute a special resolution of ``W``.

    Args:
        W: Constrained equation
        on_step: Called with every ``ResolutionStep``
        max_branches: Bound on open plus finished branches
        max_steps: Bound on the number of rewrites

    Returns:
        Resolution whose resolvents are special; empty with a diagnostic
        when ``L`` is inconsistent

    Raises:
        UnconstrainedError: If some coefficient image is not constrained by ``L``
        PipelineLimitError: If a budget is exceeded, or a redundancy, positivity,
            singularity or normalization rewrite increases ``rewrite_measure``
    """
    W.validate()
    resolution = Resolution(W)
    if is_consistent(W.L) is None:
        resolution.diagnostic = f"parameter system is inconsistent: {W.L}"
        logger.info(resolution.diagnostic)
        return resolution
    for u in W.beta.values():
        require_constrained(u, W.L)

    pending: List[Resolvent] = [Resolvent(W)]
    steps = 0
    while pending:
        current = pending.pop()
        outcome = resolution_step(current.equation)
        if outcome is None:
            resolution.resolvents.append(current)
            continue
        step, children = outcome
        steps += 1
        if steps > max_steps:
            raise PipelineLimitError(f"Resolution exceeded {max_steps} rewrite steps")
        if on_step is not None:
            on_step(step)
        logger.debug("%s (%s) at %s -> %d branch(es)", step.stage, step.lemma, step.site, step.branches)
        if step.stage in MONOTONE_STAGES:
            before = rewrite_measure(current.equation)
            for child, _ in children:
                if rewrite_measure(child) > before:
                    raise PipelineLimitError(
                        f"{step.stage} ({step.lemma}) at {step.site} raised the measure "
                        f"from {before} to {rewrite_measure(child)}"
                    )
        for child, transfer in reversed(children):
            pending.append(Resolvent(child, current.history + (step,), compose(current.transfer, transfer)))
        if len(pending) + len(resolution.resolvents) > max_branches:
            raise PipelineLimitError(f"Resolution exceeded {max_branches} branches")
    logger.info("special resolution: %d equation(s) after %d step(s)", len(resolution), steps)
    return resolution


if __name__ == "__main__":
    from qexp.equations import Environment
    from qexp.groups import CyclicGroup
    from qexp.words import FreeProduct

    H = FreeProduct([CyclicGroup("A", 0, "a"), CyclicGroup("B", 0, "b")])
    env = Environment(H, {"1": frozenset({"A", "B"})})
    ab = H.parse_word("A:a.B:b")
    lam = LinPoly.param(1)
    beta = {Letter("d", 1): ExpWord([(ExpLetter.make(ab, lam), -1)])}
    W = ExpEquation(env, QuadSystem([QuadWord.parse("x1^-1 d1 x1")]), beta, ParamSystem().with_congruence(lam, 2), ("1",))
    for resolvent in special_resolution(W, on_step=lambda s: print("  ", s.stage, s.site)):
        print(resolvent.equation, "\n---")
