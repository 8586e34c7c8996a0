"""Free-product words over declared factor groups.

A word is stored in free-product normal form: a tuple of syllables
``(factor_id, element)`` with adjacent syllables in distinct factors and no
syllable equal to its factor's identity. The length ``l(w)`` is the number of
syllables.

This module also provides the truncated power ``a\\^α`` (``power_prefix``),
period and cyclic-subword scans, and relator reduction with respect to a
relator ``s = r^m``.

Usage:
    from qexp.groups import CyclicGroup
    from qexp.words import FreeProduct, power_prefix

    H = FreeProduct([CyclicGroup("A", 0, "x"), CyclicGroup("B", 0, "y")])
    a = H.parse_word("A:x.B:y")
    power_prefix(a, 3)          # A:x.B:y.A:x
"""

from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import divisors

from qexp.groups import Element, FactorGroup

Syllable = Tuple[str, Element]


class UnknownFactorError(ValueError):
    """Raised when a syllable names a factor that was not declared."""


class FreeProduct:
    """Free product of a finite family of factor groups."""

    def __init__(self, factors: Iterable[FactorGroup]):
        self.factors: Dict[str, FactorGroup] = {}
        for group in factors:
            if group.factor_id in self.factors:
                raise ValueError(f"Duplicate factor id: {group.factor_id}")
            self.factors[group.factor_id] = group

    def factor(self, factor_id: str) -> FactorGroup:
        try:
            return self.factors[factor_id]
        except KeyError:
            raise UnknownFactorError(f"Unknown factor id: '{factor_id}'") from None

    @property
    def identity(self) -> "Word":
        return Word(self, ())

    def word(self, raw: Iterable[Syllable]) -> "Word":
        """Build the normal form of a syllable sequence.

        Adjacent syllables from the same factor are multiplied and identity
        syllables are removed.

        Raises:
            UnknownFactorError: If a syllable names an undeclared factor
            ValueError: If an element does not lie in its factor
        """
        stack: List[Syllable] = []
        for factor_id, element in raw:
            group = self.factor(factor_id)
            if not group.contains(element):
                raise ValueError(f"{element!r} is not an element of factor {factor_id}")
            if group.is_identity(element):
                continue
            if stack and stack[-1][0] == factor_id:
                merged = group.multiply(stack[-1][1], element)
                stack.pop()
                if not group.is_identity(merged):
                    stack.append((factor_id, merged))
            else:
                stack.append((factor_id, element))
        return Word(self, tuple(stack))

    def syllable(self, factor_id: str, text: str) -> "Word":
        """Single-syllable word from a factor id and an element literal."""
        return self.word([(factor_id, self.factor(factor_id).parse_element(text))])

    def parse_word(self, text: str) -> "Word":
        """Parse ``A:a.B:b^-1`` style literals; ``1`` or empty is the identity."""
        text = text.strip()
        if text in ("", "1"):
            return self.identity
        raw = []
        for token in text.split("."):
            if ":" not in token:
                raise ValueError(f"Syllable '{token}' must have the form factor:element")
            factor_id, element = token.split(":", 1)
            factor_id = factor_id.strip()
            raw.append((factor_id, self.factor(factor_id).parse_element(element)))
        return self.word(raw)

    def format_word(self, w: "Word") -> str:
        if not w.syllables:
            return "1"
        return ".".join(
            f"{fid}:{self.factors[fid].format_element(e)}" for fid, e in w.syllables
        )


def normal_form(product: FreeProduct, raw: Iterable[Syllable]) -> "Word":
    """Module-level alias of ``FreeProduct.word``."""
    return product.word(raw)


class Word:
    """Immutable free-product word in normal form.

    Construct words through ``FreeProduct.word`` or ``FreeProduct.parse_word``;
    the constructor trusts its syllables.
    """

    __slots__ = ("product", "syllables")

    def __init__(self, product: FreeProduct, syllables: Tuple[Syllable, ...]):
        self.product = product
        self.syllables = syllables

    def __len__(self) -> int:
        return len(self.syllables)

    def __iter__(self) -> Iterator[Syllable]:
        return iter(self.syllables)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word(self.product, self.syllables[index])
        return self.syllables[index]

    def __mul__(self, other: "Word") -> "Word":
        return self.product.word(self.syllables + other.syllables)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        result = self.product.identity
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self) -> int:
        return hash(self.syllables)

    def __repr__(self) -> str:
        return f"Word({self.product.format_word(self)})"

    def __str__(self) -> str:
        return self.product.format_word(self)

    def inverse(self) -> "Word":
        return Word(
            self.product,
            tuple(
                (fid, self.product.factors[fid].inverse(e))
                for fid, e in reversed(self.syllables)
            ),
        )

    def is_identity(self) -> bool:
        return not self.syllables

    @property
    def support(self) -> frozenset:
        """Set of factor ids occurring in the word."""
        return frozenset(fid for fid, _ in self.syllables)

    def is_cyclically_reduced(self) -> bool:
        return len(self) <= 1 or self.syllables[0][0] != self.syllables[-1][0]


# Cyclic structure -----------------------------------------------------------


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Return ``(u, c)`` with ``u`` cyclically reduced and ``w = c⁻¹ u c``."""
    u = w
    conjugator = w.product.identity
    while len(u) >= 2 and u[0][0] == u[-1][0]:
        g = u[:1]
        u = g.inverse() * u * g
        conjugator = g.inverse() * conjugator
    return u, conjugator


def initial_segment(a: Word, k: int) -> Word:
    """ι(a, k): the first ``k`` syllables of ``a``."""
    if not 0 <= k <= len(a):
        raise ValueError(f"Segment length {k} out of range for word of length {len(a)}")
    return a[:k]


def terminal_segment(a: Word, k: int) -> Word:
    """τ(a, k): the last ``k`` syllables of ``a``."""
    if not 0 <= k <= len(a):
        raise ValueError(f"Segment length {k} out of range for word of length {len(a)}")
    return a[len(a) - k:]


def rotate(a: Word, k: int) -> Word:
    """Cyclic permutation ``g_{k+1}…g_m g_1…g_k`` of a cyclically reduced word."""
    if not a.syllables:
        return a
    k %= len(a)
    return Word(a.product, a.syllables[k:] + a.syllables[:k])


def power_prefix(a: Word, alpha: int) -> Word:
    """Truncated power ``a\\^α``.

    With ``|α| = q·l(a) + r`` and ``0 <= r < l(a)`` this is ``a^q ι(a, r)``
    when ``α >= 0`` and ``(a⁻¹)^q ι(a⁻¹, r)`` otherwise.

    Raises:
        ValueError: If ``a`` is the empty word

    Examples:
        ``power_prefix(xy, 3)`` is ``xyx`` and ``power_prefix(xy, -3)`` is
        ``y⁻¹x⁻¹y⁻¹``.
    """
    if not len(a):
        raise ValueError("Truncated power needs a non-empty base (l(a) = 0)")
    base = a if alpha >= 0 else a.inverse()
    q, r = divmod(abs(alpha), len(a))
    return base ** q * base[:r]


def has_period(w: Word, period: int) -> bool:
    """True iff syllable ``i + period`` equals syllable ``i`` wherever both exist."""
    if not 0 < period <= len(w):
        raise ValueError(f"Period {period} out of range for word of length {len(w)}")
    s = w.syllables
    return all(s[i] == s[i + period] for i in range(len(s) - period))


def proper_root(a: Word) -> Tuple[Word, int]:
    """Return ``(a0, s)`` with ``a = a0^s`` and ``s`` maximal."""
    n = len(a)
    if n == 0:
        return a, 1
    for p in divisors(n):
        if has_period(a, p):
            return a[:p], n // p
    return a, 1


def cyclic_permutations(w: Word) -> List[Tuple[Syllable, ...]]:
    s = w.syllables
    return [s[k:] + s[:k] for k in range(len(s))] or [()]


def is_cyclic_subword(u: Word, v: Word) -> bool:
    """True iff ``u`` is a subword of some cyclic permutation of ``v``."""
    if not u.syllables:
        return True
    n = len(u)
    if n > len(v):
        return False
    return any(rot[:n] == u.syllables for rot in cyclic_permutations(v))


# Relators -------------------------------------------------------------------


class Relator:
    """Relator ``s = r^m`` with ``r`` cyclically reduced and not a proper power.

    Raises:
        ValueError: If ``l(r) < 2``, ``r`` is not cyclically reduced, ``r`` is a
            proper power or ``m < 1``
    """

    def __init__(self, r: Word, m: int = 1):
        if len(r) < 2:
            raise ValueError(f"Relator root must have length >= 2, got {len(r)}")
        if not r.is_cyclically_reduced():
            raise ValueError(f"Relator root {r} is not cyclically reduced")
        if proper_root(r)[1] != 1:
            raise ValueError(f"Relator root {r} is a proper power")
        if m < 1:
            raise ValueError(f"Relator exponent must be >= 1, got {m}")
        self.r = r
        self.m = m
        self.s = r ** m
        self._rotations = cyclic_permutations(self.s) + cyclic_permutations(self.s.inverse())

    @classmethod
    def from_word(cls, s: Word) -> "Relator":
        """Split a cyclically reduced word into root and exponent."""
        root, m = proper_root(s)
        return cls(root, m)

    @property
    def rotations(self) -> List[Tuple[Syllable, ...]]:
        """Cyclic permutations of ``s`` and ``s⁻¹``."""
        return self._rotations

    def __len__(self) -> int:
        return len(self.s)

    def __repr__(self) -> str:
        return f"Relator(({self.r})^{self.m})"


RelatorSet = Union[Relator, Sequence[Relator]]


def _as_relators(relators: RelatorSet) -> List[Relator]:
    if isinstance(relators, Relator):
        return [relators]
    return list(relators)


def find_relator_reduction(w: Word, relators: RelatorSet) -> Optional[Tuple[int, int, Word]]:
    """Locate the leftmost, longest reducible subword of ``w``.

    Returns ``(start, length, v)`` where ``w[start:start+length] v`` is a
    cyclic permutation of some ``s^{±1}`` and ``l(v) < length``, or None.
    """
    rels = _as_relators(relators)
    syl = w.syllables
    longest = max((len(rel) for rel in rels), default=0)
    for start in range(len(syl)):
        for length in range(min(longest, len(syl) - start), 0, -1):
            segment = syl[start:start + length]
            for rel in rels:
                if length > len(rel) or 2 * length <= len(rel):
                    continue
                for rot in rel.rotations:
                    if rot[:length] == segment:
                        return start, length, Word(w.product, rot[length:])
    return None


def relator_reduction_steps(w: Word, relators: RelatorSet) -> Iterator[Word]:
    """Yield the successive elementary relator-reductions of ``w``."""
    current = w
    while True:
        site = find_relator_reduction(current, relators)
        if site is None:
            return
        start, length, v = site
        current = current[:start] * v.inverse() * current[start + length:]
        yield current


def relator_reduce(w: Word, relators: RelatorSet) -> Word:
    """Relator-reduce ``w``: replace ``u`` by ``v⁻¹`` until no site remains.

    Each elementary step strictly decreases length, so this terminates.
    """
    result = w
    for result in relator_reduction_steps(w, relators):
        pass
    return result


def is_relator_reduced(w: Word, relators: RelatorSet) -> bool:
    return find_relator_reduction(w, relators) is None


if __name__ == "__main__":
    from qexp.groups import CyclicGroup

    H = FreeProduct([CyclicGroup("A", 0, "x"), CyclicGroup("B", 0, "y")])
    a = H.parse_word("A:x.B:y")
    print("a^3 =", power_prefix(a, 3), " a^-3 =", power_prefix(a, -3))
    s = Relator(a, 2)
    print("reduce A:x.B:y.A:x ->", relator_reduce(H.parse_word("A:x.B:y.A:x"), s))
