"""Exponential H-letters and words over them.

An exponential letter ``(h, f)`` pairs a free-product word ``h`` with a
linear polynomial ``f``. It is *proper* when ``f`` is not a constant (and
then ``h`` must be cyclically reduced) and *degenerate* when ``f = l(h)``.
Letters with any other constant exponent are folded into the degenerate
letter ``(h\\^f, l(h\\^f))`` by ``ExpLetter.make``.

Usage:
    from qexp.exponential import ExpLetter, ExpWord, is_constrained

    u = ExpWord.of(ExpLetter.make(a, LinPoly.param(1)))
    u.evaluate(Retraction({1: 3}))          # a\\^3
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from qexp.params import LinPoly, ParamSystem, PolyLike, Retraction, implies_congruence
from qexp.words import FreeProduct, Word, power_prefix

logger = logging.getLogger(__name__)


class UnconstrainedError(ValueError):
    """Raised when a proper letter has no residue forced by the parameter system."""


@dataclass(frozen=True)
class ExpLetter:
    """Exponential H-letter ``(base, exponent)``."""

    base: Word
    exponent: LinPoly

    def __post_init__(self):
        if self.exponent.is_constant():
            if self.exponent.constant != len(self.base):
                raise ValueError(
                    f"Degenerate letter ({self.base}, {self.exponent}) needs exponent l(h) = {len(self.base)}"
                )
        elif not self.base.is_cyclically_reduced():
            raise ValueError(f"Proper letter base {self.base} is not cyclically reduced")

    @classmethod
    def make(cls, base: Word, exponent: PolyLike) -> "ExpLetter":
        """Build ``(base, exponent)``, folding constant exponents into degenerate letters."""
        f = LinPoly.coerce(exponent)
        if f.is_constant():
            if f.constant == len(base):
                return cls(base, f)
            if not len(base):
                return cls(base, LinPoly.const(0))
            value = power_prefix(base, f.constant)
            return cls(value, LinPoly.const(len(value)))
        return cls(base, f)

    @classmethod
    def degenerate(cls, h: Word) -> "ExpLetter":
        return cls(h, LinPoly.const(len(h)))

    @property
    def is_proper(self) -> bool:
        return not self.exponent.is_constant()

    @property
    def is_degenerate(self) -> bool:
        return self.exponent.is_constant()

    @property
    def is_minor(self) -> bool:
        return len(self.base.support) <= 1

    @property
    def length(self) -> int:
        """``l(h)`` of the base."""
        return len(self.base)

    @property
    def support(self) -> frozenset:
        return self.base.support

    def dual(self) -> "ExpLetter":
        """``(a⁻¹, -f)``; degenerate letters dualize to ``(h⁻¹, l(h))``."""
        if self.is_degenerate:
            return ExpLetter.degenerate(self.base.inverse())
        return ExpLetter(self.base.inverse(), -self.exponent)

    def evaluate(self, alpha: Retraction) -> Word:
        """``α̂(h, f) = h\\^α(f)``."""
        if not len(self.base):
            return self.base
        if self.is_degenerate:
            return self.base
        return power_prefix(self.base, alpha(self.exponent))

    def h_length(self, alpha: Optional[Retraction] = None) -> int:
        """``l_H(h, f)``: ``l(h)`` symbolically, ``l(h\\^α(f))`` under ``α``."""
        if alpha is None or self.is_degenerate:
            return len(self.base)
        return len(self.evaluate(alpha))

    def substitute(self, mapping) -> "ExpLetter":
        return ExpLetter.make(self.base, self.exponent.substitute(mapping))

    def __str__(self) -> str:
        if self.is_degenerate:
            return f"({self.base})"
        return f"({self.base})^[{self.exponent}]"


Occurrence = Tuple[ExpLetter, int]


class ExpWord:
    """Freely reduced word over ``H^Λ ∪ (H^Λ)⁻¹``."""

    __slots__ = ("items",)

    def __init__(self, items: Iterable[Occurrence] = ()):
        stack: List[Occurrence] = []
        for letter, sign in items:
            if sign not in (1, -1):
                raise ValueError(f"Occurrence sign must be ±1, got {sign}")
            if stack and stack[-1][0] == letter and stack[-1][1] == -sign:
                stack.pop()
            else:
                stack.append((letter, sign))
        self.items: Tuple[Occurrence, ...] = tuple(stack)

    @classmethod
    def of(cls, *letters: ExpLetter) -> "ExpWord":
        return cls((letter, 1) for letter in letters)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Occurrence]:
        return iter(self.items)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return ExpWord(self.items[index])
        return self.items[index]

    def __add__(self, other: "ExpWord") -> "ExpWord":
        return ExpWord(self.items + other.items)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpWord) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __str__(self) -> str:
        if not self.items:
            return "1"
        return " ".join(str(a) if s == 1 else f"{a}^-1" for a, s in self.items)

    def __repr__(self) -> str:
        return f"ExpWord({self})"

    def inverse(self) -> "ExpWord":
        return ExpWord((a, -s) for a, s in reversed(self.items))

    @property
    def letters(self) -> List[ExpLetter]:
        return [a for a, _ in self.items]

    @property
    def exponents(self) -> List[LinPoly]:
        return [a.exponent for a, _ in self.items]

    @property
    def support(self) -> frozenset:
        found = set()
        for a, _ in self.items:
            found |= a.support
        return frozenset(found)

    @property
    def parameters(self) -> frozenset:
        found = set()
        for a, _ in self.items:
            found |= a.exponent.parameters
        return frozenset(found)

    def substitute(self, mapping) -> "ExpWord":
        """Substitute parameters in every exponent."""
        return ExpWord((a.substitute(mapping), s) for a, s in self.items)

    def evaluate(self, alpha: Retraction, product: FreeProduct) -> Word:
        """``α̂(u)`` as a normal-form word of ``product``."""
        out = product.identity
        for a, s in self.items:
            value = a.evaluate(alpha)
            out = out * (value if s == 1 else value.inverse())
        return out


# Lengths --------------------------------------------------------------------


def hl_length(u: ExpWord) -> int:
    """``|u|``: number of exponential letters."""
    return len(u)


def exponential_length(u: ExpWord) -> int:
    """``|u|_Λ``: number of proper letters."""
    return sum(1 for a, _ in u if a.is_proper)


def h_length(u: ExpWord, alpha: Optional[Retraction] = None) -> int:
    """``l_H(u)``, summed letter by letter."""
    return sum(a.h_length(alpha) for a, _ in u)


def exponent_length(u: ExpWord, alpha: Retraction) -> int:
    """``|u|_α = Σ |α(f_i)|``."""
    return sum(abs(alpha(a.exponent)) for a, _ in u)


def omega(u: ExpWord) -> int:
    """``Σ l(h)(l(h) - 1)`` over the letters of ``u``."""
    return sum(a.length * (a.length - 1) for a, _ in u)


def evaluate_word(u: ExpWord, alpha: Retraction, product: FreeProduct) -> Word:
    return u.evaluate(alpha, product)


# Constraint -----------------------------------------------------------------


def residue(letter: ExpLetter, L: ParamSystem) -> Optional[int]:
    """Residue ``k`` with ``L ⊨ f ≡ k (mod l(a))`` for a proper letter."""
    if not letter.length:
        return 0
    return implies_congruence(L, letter.exponent, letter.length)


def unconstrained_letters(u: ExpWord, L: ParamSystem) -> List[ExpLetter]:
    return [
        a for a, _ in u
        if a.is_proper and a.length >= 2 and residue(a, L) is None
    ]


def is_constrained(u: ExpWord, L: ParamSystem) -> bool:
    """True iff every proper letter ``(a, f)`` with ``l(a) >= 2`` has a forced residue."""
    return not unconstrained_letters(u, L)


def require_constrained(u: ExpWord, L: ParamSystem) -> None:
    """Raises:
        UnconstrainedError: If some proper letter of ``u`` is not constrained by ``L``
    """
    missing = unconstrained_letters(u, L)
    if missing:
        raise UnconstrainedError(
            f"Letter {missing[0]} is not constrained by {L}: no residue mod {missing[0].length} is forced"
        )


# Homogeneous systems --------------------------------------------------------


def homogeneous_equation(
    z: Sequence[ExpWord], L: ParamSystem, first_parameter: int = 1
) -> Tuple[List[ExpWord], ParamSystem]:
    """Replace the p-th proper letter's exponent by a fresh ``λ_p``.

    Letters are numbered ``p = 1, 2, …`` through ``z_1, z_2, …`` in order;
    ``λ_p`` gets parameter id ``first_parameter + p - 1``. The returned
    system holds ``λ_p - 1 >= 0`` for every proper letter and
    ``λ_p - k_p ≡ 0 (mod l(h_p))`` when ``l(h_p) > 1``.

    Raises:
        UnconstrainedError: If some word of ``z`` is not constrained by ``L``
    """
    for u in z:
        require_constrained(u, L)
    H = ParamSystem()
    out: List[ExpWord] = []
    p = 0
    for u in z:
        items: List[Occurrence] = []
        for letter, sign in u:
            p += 1
            if letter.is_degenerate:
                items.append((letter, sign))
                continue
            lam = LinPoly.param(first_parameter + p - 1)
            items.append((ExpLetter(letter.base, lam), sign))
            H = H.with_inequality(lam - 1)
            if letter.length > 1:
                k = residue(letter, L)
                H = H.with_congruence(lam - k, letter.length)
        out.append(ExpWord(items))
    logger.debug("homogeneous system over %d letters: %s", p, H)
    return out, H


if __name__ == "__main__":
    from qexp.groups import CyclicGroup

    H = FreeProduct([CyclicGroup("A", 0, "a"), CyclicGroup("B", 0, "b")])
    ab = H.parse_word("A:a.B:b")
    u = ExpWord.of(ExpLetter.make(ab, LinPoly.param(1)), ExpLetter.make(ab, 3))
    print(u, "->", u.evaluate(Retraction({1: 5}), H))
