"""Redundancy in exponential words and the rewrites that remove it.

A word ``u`` over exponential letters, read under a parameter system ``L``,
is *redundant* when one of seven local patterns occurs:

1. a letter ``(1, f)``;
2. a letter whose exponent ``L`` forces to 0;
3. a proper letter ``(a, f)`` with ``a = a0^s``, ``s > 1``;
4. a letter with sign -1;
5. a run of letters whose values ``L`` fixes (all degenerate with at least
   two letters, or containing a proper letter with forced exponent);
6. ``(a, f)(b, g)`` with ``b^ε`` the ``k``-rotation of ``a`` where
   ``L ⊨ f ≡ k (mod l(a))``;
7. ``(a, f)(b, g)`` whose touching syllables cancel: ``a_k = b_1⁻¹``.

Detection reports the smallest case first, then the leftmost site. Each
rewrite yields one or two ``(word, system)`` branches whose solutions
evaluate to the same element of ``H`` as the original.

Usage:
    from qexp.redundancy import detect_redundancy, rewrite_word

    site = detect_redundancy(u, L)
    if site is not None:
        branches = rewrite_word(u, L, site)
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from qexp.equations import (
    ExpEquation,
    Transfer,
    find_conjugator,
    recompute_coefficients,
    shift_conjugator,
)
from qexp.exponential import ExpLetter, ExpWord, Occurrence, residue
from qexp.params import LinPoly, ParamSystem, Retraction, implies_value, is_consistent
from qexp.quadwords import Letter
from qexp.words import (
    Word,
    initial_segment,
    power_prefix,
    proper_root,
    rotate,
    terminal_segment,
)

logger = logging.getLogger(__name__)

Branch = Tuple[ExpWord, ParamSystem]


class RedundancyMismatchError(ValueError):
    """Raised when a rewrite is requested at a site that does not carry its case."""


@dataclass(frozen=True)
class RedundancySite:
    """Where and how a word is redundant.

    ``start`` and ``end`` delimit the occurrences involved (``end``
    exclusive). ``k`` is the forced residue and ``epsilon`` the orientation
    for cases 6 and 7; ``variant`` is ``"a"`` or ``"b"`` for case 5.
    """

    case: int
    start: int
    end: int
    k: int = 0
    epsilon: int = 1
    variant: str = ""

    def __str__(self) -> str:
        extra = f"{self.variant}" if self.variant else ""
        return f"case {self.case}{extra} at [{self.start}:{self.end}]"


# Helpers --------------------------------------------------------------------


def _residue(letter: ExpLetter, L: ParamSystem) -> Optional[int]:
    if letter.is_degenerate:
        return 0
    return residue(letter, L)


def _forced_value(letter: ExpLetter, L: ParamSystem) -> Optional[int]:
    if letter.is_degenerate:
        return letter.exponent.constant
    return implies_value(L, letter.exponent)


def _single(word: Word, index: int) -> Word:
    return Word(word.product, (word[index],))


def _cancels(a: Word, i: int, b: Word, j: int) -> bool:
    return (_single(a, i) * _single(b, j)).is_identity()


def _value_of(letter: ExpLetter, L: ParamSystem) -> Word:
    """``a\\^m`` for a letter whose exponent ``L`` fixes to ``m``."""
    if letter.is_degenerate:
        return letter.base
    m = implies_value(L, letter.exponent)
    return power_prefix(letter.base, m)


# Detection ------------------------------------------------------------------


def _find_case_1(u: ExpWord, L: ParamSystem) -> Optional[RedundancySite]:
    for i, (a, _) in enumerate(u):
        if not len(a.base):
            return RedundancySite(1, i, i + 1)
    return None


def _find_case_2(u: ExpWord, L: ParamSystem) -> Optional[RedundancySite]:
    for i, (a, _) in enumerate(u):
        if a.is_proper and implies_value(L, a.exponent) == 0:
            return RedundancySite(2, i, i + 1)
    return None


def _find_case_3(u: ExpWord, L: ParamSystem) -> Optional[RedundancySite]:
    for i, (a, _) in enumerate(u):
        if a.is_proper and a.length > 1 and proper_root(a.base)[1] > 1:
            return RedundancySite(3, i, i + 1)
    return None


def _find_case_4(u: ExpWord, L: ParamSystem) -> Optional[RedundancySite]:
    for i, (_, sign) in enumerate(u):
        if sign == -1:
            return RedundancySite(4, i, i + 1)
    return None


def _qualifies_for_run(occurrence: Occurrence, L: ParamSystem) -> bool:
    letter, sign = occurrence
    if sign != 1:
        return False
    return letter.is_degenerate or implies_value(L, letter.exponent) is not None


def _find_case_5(u: ExpWord, L: ParamSystem) -> Optional[RedundancySite]:
    flags = [_qualifies_for_run(item, L) for item in u]
    i = 0
    while i < len(u):
        if not flags[i]:
            i += 1
            continue
        j = i
        while j < len(u) and flags[j]:
            j += 1
        run = [a for a, _ in u.items[i:j]]
        if any(a.is_proper for a in run):
            return RedundancySite(5, i, j, variant="b")
        if j - i > 1:
            return RedundancySite(5, i, j, variant="a")
        i = j
    return None


def _pair_case_6(first: Occurrence, second: Occurrence, L: ParamSystem) -> Optional[Tuple[int, int]]:
    (a, s1), (b, s2) = first, second
    if s1 != 1 or s2 != 1 or not (a.is_proper or b.is_proper):
        return None
    m = a.length
    if m == 0 or b.length != m:
        return None
    k = _residue(a, L)
    if k is None:
        return None
    target = rotate(a.base, k) if a.is_proper else a.base
    if b.base == target:
        return k, 1
    if b.base.inverse() == target:
        return k, -1
    return None


def _pair_case_7(first: Occurrence, second: Occurrence, L: ParamSystem) -> Optional[int]:
    (a, s1), (b, s2) = first, second
    if s1 != 1 or s2 != 1 or not (a.is_proper or b.is_proper):
        return None
    m = a.length
    if m == 0 or b.length == 0:
        return None
    k = _residue(a, L)
    if k is None:
        return None
    last = (k - 1) % m
    if _cancels(a.base, last, b.base, 0):
        return k
    return None


def _find_case_6(u: ExpWord, L: ParamSystem) -> Optional[RedundancySite]:
    for i in range(len(u) - 1):
        found = _pair_case_6(u[i], u[i + 1], L)
        if found is not None:
            k, eps = found
            return RedundancySite(6, i, i + 2, k=k, epsilon=eps)
    return None


def _find_case_7(u: ExpWord, L: ParamSystem) -> Optional[RedundancySite]:
    for i in range(len(u) - 1):
        k = _pair_case_7(u[i], u[i + 1], L)
        if k is not None:
            return RedundancySite(7, i, i + 2, k=k)
    return None


_FINDERS = {
    1: _find_case_1,
    2: _find_case_2,
    3: _find_case_3,
    4: _find_case_4,
    5: _find_case_5,
    6: _find_case_6,
    7: _find_case_7,
}


def detect_redundancy(u: ExpWord, L: ParamSystem, cases=range(1, 8)) -> Optional[RedundancySite]:
    """Smallest redundancy case present in ``u`` (then leftmost site), or None."""
    for case in cases:
        site = _FINDERS[case](u, L)
        if site is not None:
            return site
    return None


def is_irredundant(u: ExpWord, L: ParamSystem, upto: int = 7) -> bool:
    return detect_redundancy(u, L, range(1, upto + 1)) is None


# Rewrites -------------------------------------------------------------------


def _replace_letter(u: ExpWord, old: ExpLetter, new: Optional[ExpLetter]) -> ExpWord:
    items = []
    for a, s in u:
        if a == old:
            if new is not None:
                items.append((new, s))
        else:
            items.append((a, s))
    return ExpWord(items)


def _replace_pair(u: ExpWord, first: Occurrence, second: Occurrence, new: List[Occurrence]) -> ExpWord:
    items: List[Occurrence] = []
    i = 0
    while i < len(u):
        if i + 1 < len(u) and u[i] == first and u[i + 1] == second:
            items.extend(new)
            i += 2
        else:
            items.append(u[i])
            i += 1
    return ExpWord(items)


def _check_site(u: ExpWord, L: ParamSystem, site: RedundancySite) -> None:
    found = _FINDERS[site.case](u[site.start:], L)
    if found is None or found.start != 0:
        raise RedundancyMismatchError(f"Word {u} has no {site}")


def merge_run(u: ExpWord, L: ParamSystem, start: int, end: int) -> ExpLetter:
    """Degenerate letter ``(c, l(c))`` with ``c`` the product of a fixed-value run."""
    value = None
    for a, _ in u.items[start:end]:
        part = _value_of(a, L)
        value = part if value is None else value * part
    return ExpLetter.degenerate(value)


def cancel_pair(first: ExpLetter, second: ExpLetter) -> List[Occurrence]:
    """Case 7 replacement of ``(a, f)(b, g)``: drop the cancelling syllables."""
    a, b = first, second
    if a.is_proper and b.is_proper:
        return [(ExpLetter.make(a.base, a.exponent - 1), 1), (ExpLetter.make(rotate(b.base, 1), b.exponent - 1), 1)]
    if a.is_proper:
        return [
            (ExpLetter.make(a.base, a.exponent - 1), 1),
            (ExpLetter.degenerate(terminal_segment(b.base, b.length - 1)), 1),
        ]
    return [
        (ExpLetter.degenerate(initial_segment(a.base, a.length - 1)), 1),
        (ExpLetter.make(rotate(b.base, 1), b.exponent - 1), 1),
    ]


def negative_branches(h: ExpLetter, L: ParamSystem) -> List[Tuple[ExpLetter, ParamSystem]]:
    """Replacements for ``(h, f)⁻¹`` with sign +1, each with its system.

    A degenerate letter becomes ``(h⁻¹, l(h))``. A proper letter with
    ``L ⊨ f ≡ k (mod m)`` splits into ``f >= 0`` and ``-f > 0``.
    """
    if h.is_degenerate:
        return [(h.dual(), L)]
    m = h.length
    k = _residue(h, L)
    if k is None:
        raise RedundancyMismatchError(f"Letter {h} is not constrained by {L}")
    f = h.exponent
    first = initial_segment(h.base, k).inverse() * terminal_segment(h.base, m - k).inverse()
    r = (-k) % m
    second = terminal_segment(h.base, r) * initial_segment(h.base, m - r)
    return [
        (ExpLetter.make(first, f), L.with_inequality(f)),
        (ExpLetter.make(second, -f), L.with_strict(-f)),
    ]


def rewrite_word(u: ExpWord, L: ParamSystem, site: RedundancySite) -> List[Branch]:
    """Apply the rewrite for ``site`` and return the consistent branches.

    Raises:
        RedundancyMismatchError: If ``u`` does not carry ``site``
    """
    _check_site(u, L, site)
    case = site.case
    letter = u[site.start][0]
    if case in (1, 2):
        return [(_replace_letter(u, letter, None), L)]
    if case == 3:
        root, _ = proper_root(letter.base)
        return [(_replace_letter(u, letter, ExpLetter.make(root, letter.exponent)), L)]
    if case == 4:
        out = []
        for new, system in negative_branches(letter, L):
            if is_consistent(system) is None:
                continue
            items = list(u.items)
            items[site.start] = (new, 1)
            out.append((ExpWord(items), system))
        return out
    if case == 5:
        merged = merge_run(u, L, site.start, site.end)
        items = list(u.items[:site.start]) + [(merged, 1)] + list(u.items[site.end:])
        return [(ExpWord(items), L)]
    first, second = u[site.start], u[site.start + 1]
    if case == 6:
        a, b = first[0], second[0]
        new = ExpLetter.make(a.base, a.exponent + b.exponent * site.epsilon)
        return [(_replace_pair(u, first, second, [(new, 1)]), L)]
    return [(_replace_pair(u, first, second, cancel_pair(first[0], second[0])), L)]


# Dualization, deletion, positivity -----------------------------------------


def dualize(u: ExpWord, at: ExpLetter) -> ExpWord:
    """Replace every occurrence of ``at`` by its dual ``(a⁻¹, -f)``."""
    return _replace_letter(u, at, at.dual())


def delete(u: ExpWord, at: ExpLetter) -> ExpWord:
    """Remove every occurrence of ``at`` and of its dual."""
    dual = at.dual()
    return ExpWord((a, s) for a, s in u if a != at and a != dual)


def _dualize_exponent(u: ExpWord, f: LinPoly) -> ExpWord:
    return ExpWord((a.dual() if a.is_proper and a.exponent == f else a, s) for a, s in u)


def _delete_exponent(u: ExpWord, f: LinPoly) -> ExpWord:
    return ExpWord((a, s) for a, s in u if not (a.is_proper and a.exponent in (f, -f)))


def exponent_set(W: ExpEquation) -> List[LinPoly]:
    """Proper exponents occurring in ``W``, in order of first occurrence."""
    seen: List[LinPoly] = []
    for dd in W.coefficients:
        for a, _ in W.beta[dd]:
            if a.is_proper and a.exponent not in seen:
                seen.append(a.exponent)
    return seen


def non_positive_exponent(W: ExpEquation) -> Optional[LinPoly]:
    """First exponent ``f`` with ``L ∪ {f <= 0}`` consistent."""
    for f in exponent_set(W):
        if is_consistent(W.L.with_inequality(-f)) is not None:
            return f
    return None


def is_positive(W: ExpEquation) -> bool:
    if any(not is_irredundant(u, W.L, 4) for u in W.beta.values()):
        return False
    return non_positive_exponent(W) is None


def sign_split(W: ExpEquation, f: LinPoly) -> List[Tuple[ExpEquation, str]]:
    """Split on the sign of ``f``: ``f < 0`` dualized, ``f = 0`` deleted, ``f > 0``.

    In the ``f > 0`` branch letters with exponent ``-f`` are dualized so
    that every exponent carried by the branch is positive.
    """
    out = []
    options = [
        ("f<0", W.L.with_strict(-f), lambda u: _dualize_exponent(u, f)),
        ("f=0", W.L.with_equation(f), lambda u: _delete_exponent(u, f)),
        ("f>0", W.L.with_strict(f), lambda u: _dualize_exponent(u, -f)),
    ]
    for label, system, rewrite in options:
        if is_consistent(system) is None:
            continue
        beta = {dd: rewrite(u) for dd, u in W.beta.items()}
        out.append((ExpEquation(W.env, W.system, beta, system, W.basis), label))
    return out


def make_positive(W: ExpEquation) -> List[ExpEquation]:
    """Split ``W`` until every exponent is forced positive.

    Raises:
        ValueError: If ``L`` is inconsistent
    """
    if is_consistent(W.L) is None:
        raise ValueError(f"Parameter system {W.L} is inconsistent")
    pending = [W]
    done: List[ExpEquation] = []
    while pending:
        current = pending.pop()
        f = non_positive_exponent(current)
        if f is None:
            done.append(current)
            continue
        pending.extend(eq for eq, _ in reversed(sign_split(current, f)))
    return done


# Equation-level application -------------------------------------------------


def find_redundancy(W: ExpEquation, cases=range(1, 8)) -> Optional[Tuple[Letter, RedundancySite]]:
    """First coefficient letter whose image is redundant, with its site."""
    for dd in W.coefficients:
        site = detect_redundancy(W.beta[dd], W.L, cases)
        if site is not None:
            return dd, site
    return None


def apply_redundancy(W: ExpEquation, dd: Letter, site: RedundancySite) -> List[Tuple[ExpEquation, Transfer]]:
    """``R(W, i)`` at ``β(dd)``: the rewritten equations with their transfers.

    Raises:
        RedundancyMismatchError: If ``β(dd)`` does not carry ``site``
    """
    out = []
    for u, L in rewrite_word(W.beta[dd], W.L, site):
        child = W.with_L(L).with_beta(dd, u)
        out.append((child, recompute_coefficients(W)))
    logger.debug("%s at %s: %d branch(es)", site, dd, len(out))
    return out


# Cyclic redundancy ----------------------------------------------------------


def detect_cyclic_redundancy(u: ExpWord, L: ParamSystem) -> Optional[RedundancySite]:
    """Case 5, 6 or 7 at the wrap-around pair ``p_n p_1`` of ``u``."""
    if len(u) < 2:
        return None
    pair = ExpWord([u[-1], u[0]])
    if len(pair) != 2:
        return None
    for case in (5, 6, 7):
        site = _FINDERS[case](pair, L)
        if site is not None and site.end - site.start == 2:
            return site
    return None


def find_cyclic_redundancy(W: ExpEquation) -> Optional[Tuple[Letter, RedundancySite]]:
    for dd in W.coefficients:
        site = detect_cyclic_redundancy(W.beta[dd], W.L)
        if site is not None:
            return dd, site
    return None


def apply_cyclic_redundancy(
    W: ExpEquation, dd: Letter, site: RedundancySite
) -> List[Tuple[ExpEquation, Transfer]]:
    """``R′(W, i)``: rewrite ``(b, g) p (a, f)`` and move ``b``'s prefix onto the conjugator.

    Raises:
        RedundancyMismatchError: If ``β(dd)`` has no cyclic redundancy of ``site.case``
    """
    u = W.beta[dd]
    found = detect_cyclic_redundancy(u, W.L)
    if found is None or found.case != site.case:
        raise RedundancyMismatchError(f"beta({dd}) = {u} has no cyclic {site}")
    site = found
    (b, _), (a, _) = u[0], u[-1]
    middle = list(u.items[1:-1])
    pair = ExpWord([u[-1], u[0]])
    if site.case in (5, 6):
        rewritten = rewrite_word(pair, W.L, site)[0][0]
        new = ExpWord(middle + list(rewritten.items))

        def left(alpha: Retraction, b=b) -> Word:
            return b.evaluate(alpha)

    else:
        first, second = cancel_pair(a, b)
        new = ExpWord([second] + middle + [first])
        b1 = _single(b.base, 0)

        def left(alpha: Retraction, b1=b1) -> Word:
            return b1

    child = W.with_beta(dd, new)
    conjugator = find_conjugator(W.system[W.component(dd)], dd)
    if conjugator is None:
        raise RedundancyMismatchError(f"Coefficient {dd} has no conjugating letter in {W.system}")
    logger.debug("cyclic %s at %s via conjugator %s", site, dd, conjugator)
    return [(child, shift_conjugator(W, conjugator, left))]


if __name__ == "__main__":
    from qexp.groups import CyclicGroup
    from qexp.words import FreeProduct

    H = FreeProduct([CyclicGroup("A", 0, "a"), CyclicGroup("B", 0, "b")])
    ab = H.parse_word("A:a.B:b")
    lam = LinPoly.param(1)
    L = ParamSystem().with_congruence(lam, 2).with_strict(lam)
    u = ExpWord.of(ExpLetter.make(ab, lam), ExpLetter.make(H.parse_word("B:b^-1.A:a"), lam))
    site = detect_redundancy(u, L)
    print(u, "->", site)
    for word, system in rewrite_word(u, L, site):
        print("  ", word, system)
