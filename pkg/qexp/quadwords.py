"""Quadratic words and the surfaces they describe.

Words over the alphabet ``D ∪ X`` (coefficients ``d1, d2, …`` and variables
``x1, x2, …``) are tuples of ``(Letter, ±1)``. A word is quadratic when every
variable occurs exactly twice and every coefficient exactly once.

The surface ``Σ(w)`` is classified combinatorially. The edges of a polygon
are labelled by ``w`` and paired variable edges are identified. Counting
vertex classes gives the Euler characteristic. Tracing the unpaired edges
gives the boundary components and their labels.

Usage:
    from qexp.quadwords import QuadWord, surface_of, standard_q

    w = QuadWord.parse("x1^-1 d1 x1 [x2,x3] x4^2")
    surface_of(w).boundary_count        # 1
    str(standard_q(3, 1, 1, 1))         # x4^-1 d4 x4 x5^-1 x6^-1 x5 x6 x7 x7
"""

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

_TOKEN_RE = re.compile(
    r"\[\s*([dx])(\d+)\s*,\s*([dx])(\d+)\s*\]|([dx])(\d+)(?:\^(-?\d+))?"
)


class NotQuadraticError(ValueError):
    """Raised when a word or system is not quadratic."""


@dataclass(frozen=True, order=True)
class Letter:
    """Coefficient (``kind == 'd'``) or variable (``kind == 'x'``) letter."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("d", "x"):
            raise ValueError(f"Letter kind must be 'd' or 'x', got '{self.kind}'")

    @property
    def is_coefficient(self) -> bool:
        return self.kind == "d"

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def d(i: int) -> Letter:
    return Letter("d", i)


def x(i: int) -> Letter:
    return Letter("x", i)


Occurrence = Tuple[Letter, int]


class QuadWord:
    """Freely reduced word over ``(D ∪ X)^{±1}``."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Occurrence] = ()):
        self.letters: Tuple[Occurrence, ...] = _free_reduce(letters)

    @classmethod
    def parse(cls, text: str) -> "QuadWord":
        """Parse ``x1^-1 d1 x1 [x2,x3] x4^2``; ``1`` or empty is the identity.

        ``[a,b]`` expands to ``a⁻¹b⁻¹ab`` and ``a^k`` to ``|k|`` copies of
        ``a^{sign k}``.
        """
        text = text.strip()
        if text in ("", "1"):
            return cls()
        out: List[Occurrence] = []
        pos = 0
        for match in _TOKEN_RE.finditer(text):
            gap = text[pos:match.start()]
            if gap.strip():
                raise ValueError(f"Unexpected text '{gap.strip()}' in quadratic word '{text}'")
            pos = match.end()
            if match.group(1):
                a = Letter(match.group(1), int(match.group(2)))
                b = Letter(match.group(3), int(match.group(4)))
                out += [(a, -1), (b, -1), (a, 1), (b, 1)]
            else:
                letter = Letter(match.group(5), int(match.group(6)))
                k = int(match.group(7) or 1)
                if k == 0:
                    continue
                out += [(letter, 1 if k > 0 else -1)] * abs(k)
        if text[pos:].strip():
            raise ValueError(f"Unexpected text '{text[pos:].strip()}' in quadratic word '{text}'")
        raw = cls.__new__(cls)
        raw.letters = tuple(out)
        return raw

    @classmethod
    def of(cls, *items: Occurrence) -> "QuadWord":
        return cls(items)

    @classmethod
    def letter(cls, a: Letter, sign: int = 1) -> "QuadWord":
        return cls([(a, sign)])

    # Sequence protocol ------------------------------------------------

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return QuadWord(self.letters[index])
        return self.letters[index]

    def __add__(self, other: "QuadWord") -> "QuadWord":
        return QuadWord(self.letters + other.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(str(a) if e == 1 else f"{a}^-1" for a, e in self.letters)

    def __repr__(self) -> str:
        return f"QuadWord('{self}')"

    # Structure ----------------------------------------------------------

    def is_freely_reduced(self) -> bool:
        return _free_reduce(self.letters) == self.letters

    def inverse(self) -> "QuadWord":
        return QuadWord([(a, -e) for a, e in reversed(self.letters)])

    def occurrences(self, a: Letter) -> int:
        """``O_a(w)``: number of occurrences of ``a``."""
        return sum(1 for b, _ in self.letters if b == a)

    @property
    def letter_set(self) -> FrozenSet[Letter]:
        return frozenset(a for a, _ in self.letters)

    @property
    def variables(self) -> FrozenSet[Letter]:
        """``L_X(w)``."""
        return frozenset(a for a, _ in self.letters if a.kind == "x")

    @property
    def coefficients(self) -> FrozenSet[Letter]:
        """``L_D(w)``."""
        return frozenset(a for a, _ in self.letters if a.kind == "d")

    def substitute(self, mapping: Mapping[Letter, "QuadWord"]) -> "QuadWord":
        out: List[Occurrence] = []
        for a, e in self.letters:
            if a in mapping:
                image = mapping[a] if e == 1 else mapping[a].inverse()
                out.extend(image.letters)
            else:
                out.append((a, e))
        return QuadWord(out)

    def cyclic_reduce(self) -> "QuadWord":
        letters = list(self.letters)
        while len(letters) >= 2 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
            letters = letters[1:-1]
        return QuadWord(letters)

    def is_cyclically_reduced(self) -> bool:
        return self.is_freely_reduced() and self.cyclic_reduce() == self

    def rotations(self) -> List["QuadWord"]:
        n = len(self.letters)
        return [QuadWord(self.letters[k:] + self.letters[:k]) for k in range(n)] or [self]

    def is_cyclic_conjugate(self, other: "QuadWord") -> bool:
        """True iff the cyclic reductions are cyclic permutations of each other."""
        a, b = self.cyclic_reduce(), other.cyclic_reduce()
        if len(a) != len(b):
            return False
        return any(rot == b for rot in a.rotations())


def _free_reduce(letters: Iterable[Occurrence]) -> Tuple[Occurrence, ...]:
    stack: List[Occurrence] = []
    for a, e in letters:
        if e not in (1, -1):
            raise ValueError(f"Letter exponent must be ±1, got {e}")
        if stack and stack[-1][0] == a and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((a, e))
    return tuple(stack)


def is_quadratic(w: QuadWord) -> bool:
    """``O_x(w) = 2`` for every variable and ``O_d(w) = 1`` for every coefficient."""
    counts = Counter(a for a, _ in w.letters)
    return all(c == (2 if a.kind == "x" else 1) for a, c in counts.items())


def occurrence_counts(w: QuadWord) -> Dict[Letter, int]:
    return dict(Counter(a for a, _ in w.letters))


class QuadSystem:
    """System of quadratic words with pairwise disjoint letter sets."""

    def __init__(self, words: Sequence[QuadWord]):
        self.words: Tuple[QuadWord, ...] = tuple(words)
        seen: Set[Letter] = set()
        for w in self.words:
            overlap = seen & w.letter_set
            if overlap:
                names = ", ".join(sorted(str(a) for a in overlap))
                raise ValueError(f"Letters {names} occur in more than one word of the system")
            seen |= w.letter_set

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __getitem__(self, i: int) -> QuadWord:
        return self.words[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadSystem) and self.words == other.words

    def __hash__(self) -> int:
        return hash(self.words)

    def __str__(self) -> str:
        return " ; ".join(str(w) for w in self.words)

    @property
    def coefficients(self) -> FrozenSet[Letter]:
        out: Set[Letter] = set()
        for w in self.words:
            out |= w.coefficients
        return frozenset(out)

    @property
    def variables(self) -> FrozenSet[Letter]:
        out: Set[Letter] = set()
        for w in self.words:
            out |= w.variables
        return frozenset(out)

    def is_quadratic(self) -> bool:
        return all(is_quadratic(w) for w in self.words)

    def component_of(self, a: Letter) -> int:
        for i, w in enumerate(self.words):
            if a in w.letter_set:
                return i
        raise KeyError(f"Letter {a} does not occur in the system")


# Surfaces -------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceClass:
    """Classification of ``Σ(w)`` for one quadratic word."""

    boundary_count: int
    orientable: bool
    euler_characteristic: int
    boundary: Tuple[QuadWord, ...]

    @property
    def genus(self) -> Fraction:
        """``t + p/2``, equal to ``(2 - χ - n) / 2``."""
        return Fraction(2 - self.euler_characteristic - self.boundary_count, 2)

    @property
    def representatives(self) -> FrozenSet[Tuple[int, int]]:
        h = 2 - self.euler_characteristic - self.boundary_count
        if self.orientable:
            return frozenset({(h // 2, 0)})
        return frozenset((t, h - 2 * t) for t in range(h // 2 + 1) if h - 2 * t >= 1)

    @property
    def closed(self) -> bool:
        return self.boundary_count == 0


def _prepare(w: QuadWord) -> QuadWord:
    if not w.letters:
        raise ValueError("The empty word has no associated surface")
    if not w.is_freely_reduced():
        raise ValueError(f"Word '{w}' is not cyclically reduced")
    u = w.cyclic_reduce()
    if not is_quadratic(w) or not is_quadratic(u) or not u.letters:
        raise NotQuadraticError(f"Word '{w}' is not quadratic")
    return u


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        self.parent[self.find(i)] = self.find(j)


def _trace_boundary(u: QuadWord) -> List[QuadWord]:
    """Read the boundary components of the polygon identification."""
    n = len(u)
    letters = u.letters
    if n == 1:
        return [QuadWord(letters)]
    partner: Dict[int, int] = {}
    positions: Dict[Letter, List[int]] = {}
    for k, (a, _) in enumerate(letters):
        positions.setdefault(a, []).append(k)
    for a, ks in positions.items():
        if a.kind == "x":
            partner[ks[0]], partner[ks[1]] = ks[1], ks[0]

    def tail(k: int) -> int:
        return k if letters[k][1] == 1 else (k + 1) % n

    def head(k: int) -> int:
        return (k + 1) % n if letters[k][1] == 1 else k

    def other_edge(corner: int, edge: int) -> int:
        return (corner - 1) % n if edge == corner else corner

    labels: List[QuadWord] = []
    visited: Set[int] = set()
    for start, (a, e) in enumerate(letters):
        if a.kind != "d" or start in visited:
            continue
        reading: List[Occurrence] = []
        edge, corner = start, (start + 1) % n
        reading.append((a, e))
        visited.add(start)
        for _ in range(4 * n + 4):
            nxt = other_edge(corner, edge)
            while letters[nxt][0].kind == "x":
                j = partner[nxt]
                corner = tail(j) if corner == tail(nxt) else head(j)
                nxt = other_edge(corner, j)
            if nxt == start:
                break
            b, sign = letters[nxt]
            if nxt == corner:
                reading.append((b, sign))
                corner = (corner + 1) % n
            else:
                reading.append((b, -sign))
                corner = nxt
            visited.add(nxt)
            edge = nxt
        else:
            raise RuntimeError(f"Boundary tracing did not close up for '{u}'")
        labels.append(QuadWord(reading))
    return labels


def surface_of(w: QuadWord) -> SurfaceClass:
    """Classify ``Σ(w)`` by vertex classes, orientability and boundary tracing.

    Words that become quadratic after cyclic reduction are accepted (for
    example ``x1^-1 d1 x1``).

    Raises:
        NotQuadraticError: If the word is not quadratic
        ValueError: If the word is empty or not freely reduced
    """
    u = _prepare(w)
    n = len(u)
    letters = u.letters
    uf = _UnionFind(n)
    positions: Dict[Letter, List[int]] = {}
    for k, (a, _) in enumerate(letters):
        positions.setdefault(a, []).append(k)

    def tail(k: int) -> int:
        return k if letters[k][1] == 1 else (k + 1) % n

    def head(k: int) -> int:
        return (k + 1) % n if letters[k][1] == 1 else k

    orientable = True
    pairs = 0
    for a, (i, j) in ((a, ks) for a, ks in positions.items() if a.kind == "x"):
        pairs += 1
        uf.union(tail(i), tail(j))
        uf.union(head(i), head(j))
        if letters[i][1] == letters[j][1]:
            orientable = False
    vertices = len({uf.find(c) for c in range(n)})
    edges = pairs + len(u.coefficients)
    chi = vertices - edges + 1
    boundary = tuple(_trace_boundary(u)) if u.coefficients else ()
    return SurfaceClass(len(boundary), orientable, chi, boundary)


def genus_of(w: QuadWord) -> FrozenSet[Tuple[int, int]]:
    """All ``(t, p)`` with ``Σ(w)`` capped off ≅ ``t`` tori # ``p`` projective planes."""
    return surface_of(w).representatives


def boundary_labels(w: QuadWord) -> List[QuadWord]:
    """One label per boundary component (empty for closed surfaces)."""
    return list(surface_of(w).boundary)


def boundary_label_readings(w: QuadWord) -> List[Tuple[QuadWord, QuadWord]]:
    """Both orientations of each boundary label.

    On non-orientable surfaces the label is only defined up to inversion, so
    callers receive ``(reading, inverse reading)`` per component.
    """
    return [(b, b.inverse()) for b in boundary_labels(w)]


# Standard words -------------------------------------------------------------


def standard_q(xi: int, n: int, t: int, p: int) -> QuadWord:
    """The standard word: ``n`` conjugated coefficients, ``t`` commutators, ``p`` squares."""
    if min(xi, n, t, p) < 0:
        raise ValueError("standard_q needs non-negative arguments")
    out: List[Occurrence] = []
    for i in range(1 + xi, n + xi + 1):
        out += [(x(i), -1), (d(i), 1), (x(i), 1)]
    for i in range(1 + xi, t + xi + 1):
        a, b = x(i + n), x(i + n + t)
        out += [(a, -1), (b, -1), (a, 1), (b, 1)]
    for i in range(1 + xi, p + xi + 1):
        out += [(x(i + n + 2 * t), 1)] * 2
    raw = QuadWord.__new__(QuadWord)
    raw.letters = tuple(out)
    return raw


def standard_offsets(targets: Sequence[Tuple[int, int, int]]) -> List[int]:
    """Offsets ``ξ_j`` for a positive 3-partition given as ``(n_j, t_j, p_j)``."""
    offsets = []
    xi = 0
    for n, t, p in targets:
        offsets.append(xi)
        xi += n + 2 * t + p
    return offsets


def standard_system(targets: Sequence[Tuple[int, int, int]]) -> QuadSystem:
    """``q(n, t, p)``: one standard word per target, with disjoint indices."""
    for n, t, p in targets:
        if n + t + p <= 0:
            raise ValueError("Each component of a standard system needs n + t + p > 0")
    return QuadSystem(
        [standard_q(xi, n, t, p) for xi, (n, t, p) in zip(standard_offsets(targets), targets)]
    )


def standard_parameters(w: QuadWord) -> Optional[Tuple[int, int, int, int]]:
    """Return ``(ξ, n, t, p)`` if ``w`` is literally a standard word, else None."""
    if not w.letters:
        return None
    indices = [a.index for a, _ in w.letters]
    xi = min(indices) - 1
    counts = Counter(a for a, _ in w.letters)
    n = sum(1 for a in counts if a.kind == "d")
    rest = sum(1 for a in counts if a.kind == "x") - n
    for t in range(rest // 2 + 1):
        p = rest - 2 * t
        if p < 0:
            continue
        if standard_q(xi, n, t, p) == w:
            return xi, n, t, p
    return None


def is_standard_system(system: QuadSystem) -> bool:
    """True iff the system equals ``q(n, t, p)`` for its own parameters."""
    targets = []
    for w in system:
        params = standard_parameters(w)
        if params is None:
            return False
        targets.append(params[1:])
    try:
        return standard_system(targets) == system
    except ValueError:
        return False


if __name__ == "__main__":
    for text in ["x1 x1", "x1^-1 x2^-1 x1 x2", "x1^-1 d1 x1", "x1 x1 x2 x2 x3 x3"]:
        w = QuadWord.parse(text)
        s = surface_of(w)
        print(f"{text:>24}: chi={s.euler_characteristic} orientable={s.orientable} "
              f"boundary={[str(b) for b in s.boundary]} genus={sorted(s.representatives)}")
