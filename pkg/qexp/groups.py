"""Factor groups with solvable word problem.

Every factor of a free product is one of three backends:

- ``CyclicGroup``: finite cyclic of a given order, or infinite cyclic (order 0).
- ``FreeGroup``: free product of cyclic groups on named generators. When all
  orders are 0 this is the free group on those generators.
- ``TableGroup``: a finite group given by its multiplication table.

Each backend decides equality of elements exactly, so words over the free
product of the factors have a solvable word problem.

Usage:
    from qexp.groups import CyclicGroup, FreeGroup, TableGroup

    z3 = CyclicGroup("A", 3, generator="a")
    z3.multiply(2, 2)                      # 1
    h1 = FreeGroup("H1", {"c11": 3, "c12": 3})
    h1.parse_element("c11^2*c12")          # (("c11", 2), ("c12", 1))
"""

import re
from itertools import product as cartesian
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

Element = Any

_POWER_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")
_IDENTITY_TOKENS = {"1", "e", "id"}


def _parse_power(token: str) -> Tuple[str, int]:
    """Split a ``gen`` or ``gen^k`` token into name and exponent."""
    match = _POWER_RE.match(token.strip())
    if not match:
        raise ValueError(f"Invalid element token: '{token}'")
    return match.group(1), int(match.group(2) or 1)


def _format_power(name: str, power: int) -> str:
    return name if power == 1 else f"{name}^{power}"


class FactorGroup:
    """Base class for factor-group backends.

    Subclasses implement the group operations on their own element
    representation. Elements are always hashable.
    """

    backend = "abstract"

    def __init__(self, factor_id: str):
        if not factor_id:
            raise ValueError("Factor id must be non-empty")
        self.factor_id = factor_id

    # Group operations ------------------------------------------------

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def inverse(self, x: Element) -> Element:
        raise NotImplementedError

    def contains(self, x: Element) -> bool:
        raise NotImplementedError

    def is_identity(self, x: Element) -> bool:
        return x == self.identity

    def power(self, x: Element, k: int) -> Element:
        """Return x**k using square-and-multiply."""
        base = x if k >= 0 else self.inverse(x)
        k = abs(k)
        result = self.identity
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    # Text ------------------------------------------------------------

    def parse_element(self, text: str) -> Element:
        raise NotImplementedError

    def format_element(self, x: Element) -> str:
        raise NotImplementedError

    # Enumeration and abelian data ------------------------------------

    def elements(self, max_length: int) -> Iterator[Element]:
        """Enumerate elements of word length at most ``max_length``."""
        raise NotImplementedError

    @property
    def cyclic_order(self) -> Optional[int]:
        """Order if the group is cyclic (0 when infinite), else None."""
        return None

    def exponent_sum(self, x: Element) -> int:
        """Image of ``x`` under the isomorphism with Z or Z/n.

        Only defined when ``cyclic_order`` is not None.
        """
        raise ValueError(f"Factor {self.factor_id} is not cyclic")

    def describe(self) -> str:
        return f"{self.factor_id} ({self.backend})"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.factor_id!r})"


class CyclicGroup(FactorGroup):
    """Cyclic group of order ``order`` (0 means infinite cyclic).

    Elements are integers: residues in ``[0, order)`` for finite groups and
    arbitrary integers for the infinite cyclic group.

    Examples:
        >>> z2 = CyclicGroup("A", 2, "a")
        >>> z2.multiply(1, 1)
        0
        >>> CyclicGroup("Z", 0, "t").format_element(-2)
        't^-2'
    """

    backend = "finite-cyclic"

    def __init__(self, factor_id: str, order: int, generator: str = "a"):
        super().__init__(factor_id)
        if order < 0:
            raise ValueError(f"Cyclic order must be >= 0, got {order}")
        self.order = order
        self.generator = generator
        if order == 0:
            self.backend = "infinite-cyclic"

    def _reduce(self, k: int) -> int:
        return k % self.order if self.order else k

    @property
    def identity(self) -> int:
        return 0

    def multiply(self, x: int, y: int) -> int:
        return self._reduce(x + y)

    def inverse(self, x: int) -> int:
        return self._reduce(-x)

    def power(self, x: int, k: int) -> int:
        return self._reduce(x * k)

    def contains(self, x: Element) -> bool:
        if not isinstance(x, int):
            return False
        return self.order == 0 or 0 <= x < self.order

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if text in _IDENTITY_TOKENS:
            return 0
        total = 0
        for piece in text.split("*"):
            name, power = _parse_power(piece)
            if name != self.generator:
                raise ValueError(
                    f"Unknown generator '{name}' for factor {self.factor_id}"
                )
            total += power
        return self._reduce(total)

    def format_element(self, x: int) -> str:
        if x == 0:
            return "1"
        return _format_power(self.generator, x)

    def elements(self, max_length: int) -> Iterator[int]:
        if self.order:
            yield from range(self.order)
            return
        yield 0
        for k in range(1, max_length + 1):
            yield k
            yield -k

    @property
    def cyclic_order(self) -> int:
        return self.order

    def exponent_sum(self, x: int) -> int:
        return x


class FreeGroup(FactorGroup):
    """Free product of cyclic groups on named generators.

    ``generators`` maps each generator name to its order (0 for infinite).
    Elements are reduced tuples of ``(generator, power)`` pairs with adjacent
    generators distinct and powers normalized into ``[1, order)`` for
    generators of finite order. Equality is therefore syntactic.

    Examples:
        >>> h = FreeGroup("H2", {"c21": 2, "c22": 2})
        >>> h.multiply(h.parse_element("c21"), h.parse_element("c21"))
        ()
    """

    backend = "finitely-generated-free"

    def __init__(self, factor_id: str, generators: Dict[str, int]):
        super().__init__(factor_id)
        if not generators:
            raise ValueError(f"Factor {factor_id} needs at least one generator")
        for name, order in generators.items():
            if not _POWER_RE.match(name) or "^" in name:
                raise ValueError(f"Invalid generator name: '{name}'")
            if order < 0 or order == 1:
                raise ValueError(
                    f"Generator order must be 0 or >= 2, got {order} for '{name}'"
                )
        self.generators = dict(generators)

    def _normal_power(self, gen: str, power: int) -> int:
        order = self.generators[gen]
        return power % order if order else power

    def _reduce(self, pairs: Sequence[Tuple[str, int]]) -> Tuple[Tuple[str, int], ...]:
        stack: List[Tuple[str, int]] = []
        for gen, power in pairs:
            power = self._normal_power(gen, power)
            if power == 0:
                continue
            if stack and stack[-1][0] == gen:
                merged = self._normal_power(gen, stack[-1][1] + power)
                stack.pop()
                if merged:
                    stack.append((gen, merged))
            else:
                stack.append((gen, power))
        return tuple(stack)

    @property
    def identity(self) -> Tuple:
        return ()

    def multiply(self, x: Tuple, y: Tuple) -> Tuple:
        return self._reduce(list(x) + list(y))

    def inverse(self, x: Tuple) -> Tuple:
        return self._reduce([(gen, -power) for gen, power in reversed(x)])

    def contains(self, x: Element) -> bool:
        if not isinstance(x, tuple):
            return False
        if any(gen not in self.generators for gen, _ in x):
            return False
        return self._reduce(x) == x

    def parse_element(self, text: str) -> Tuple:
        text = text.strip()
        if text in _IDENTITY_TOKENS:
            return ()
        pairs = []
        for piece in text.split("*"):
            name, power = _parse_power(piece)
            if name not in self.generators:
                raise ValueError(
                    f"Unknown generator '{name}' for factor {self.factor_id}"
                )
            pairs.append((name, power))
        return self._reduce(pairs)

    def format_element(self, x: Tuple) -> str:
        if not x:
            return "1"
        return "*".join(_format_power(gen, power) for gen, power in x)

    def elements(self, max_length: int) -> Iterator[Tuple]:
        """Enumerate reduced elements with at most ``max_length`` pieces."""
        letters = []
        for gen, order in self.generators.items():
            if order:
                letters.extend((gen, p) for p in range(1, order))
            else:
                letters.extend([(gen, 1), (gen, -1)])
        seen = set()
        for length in range(max_length + 1):
            for combo in cartesian(letters, repeat=length):
                element = self._reduce(combo)
                if element not in seen:
                    seen.add(element)
                    yield element

    @property
    def cyclic_order(self) -> Optional[int]:
        if len(self.generators) == 1:
            return next(iter(self.generators.values()))
        return None

    def exponent_sum(self, x: Tuple) -> int:
        if self.cyclic_order is None:
            return super().exponent_sum(x)
        total = sum(power for _, power in x)
        return total % self.cyclic_order if self.cyclic_order else total


class TableGroup(FactorGroup):
    """Finite group given by a multiplication table.

    Args:
        factor_id: Factor identifier
        names: Element names; ``names[0]`` is the identity
        table: ``table[i][j]`` is the index of ``names[i] * names[j]``

    Raises:
        ValueError: If the table is not a group table with identity at 0
    """

    backend = "finite-multiplication-table"

    def __init__(self, factor_id: str, names: Sequence[str], table: Sequence[Sequence[int]]):
        super().__init__(factor_id)
        n = len(names)
        if n == 0 or len(table) != n or any(len(row) != n for row in table):
            raise ValueError(f"Table for factor {factor_id} must be {n}x{n}")
        if len(set(names)) != n:
            raise ValueError(f"Duplicate element names in factor {factor_id}")
        self.names = list(names)
        self.table = [list(row) for row in table]
        self._index = {name: i for i, name in enumerate(self.names)}
        for i in range(n):
            if self.table[0][i] != i or self.table[i][0] != i:
                raise ValueError(f"Element 0 of factor {factor_id} is not an identity")
            if sorted(self.table[i]) != list(range(n)):
                raise ValueError(f"Row {i} of factor {factor_id} is not a permutation")
        self._inverses = []
        for i in range(n):
            inv = [j for j in range(n) if self.table[i][j] == 0]
            if len(inv) != 1 or self.table[inv[0]][i] != 0:
                raise ValueError(f"Element {names[i]} of factor {factor_id} has no inverse")
            self._inverses.append(inv[0])
        self._cyclic = self._find_generator()

    def _find_generator(self) -> Optional[Dict[int, int]]:
        """Discrete-log table for a generating element, if the group is cyclic."""
        n = len(self.names)
        for g in range(n):
            logs = {0: 0}
            x = g
            k = 1
            while x != 0:
                logs[x] = k
                x = self.table[x][g]
                k += 1
            if len(logs) == n:
                return logs
        return None

    @property
    def identity(self) -> int:
        return 0

    def multiply(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inverse(self, x: int) -> int:
        return self._inverses[x]

    def contains(self, x: Element) -> bool:
        return isinstance(x, int) and 0 <= x < len(self.names)

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if text in self._index:
            return self._index[text]
        if text in _IDENTITY_TOKENS:
            return 0
        result = 0
        for piece in text.split("*"):
            name, power = _parse_power(piece)
            if name not in self._index:
                raise ValueError(f"Unknown element '{name}' for factor {self.factor_id}")
            result = self.multiply(result, self.power(self._index[name], power))
        return result

    def format_element(self, x: int) -> str:
        return self.names[x]

    def elements(self, max_length: int) -> Iterator[int]:
        yield from range(len(self.names))

    @property
    def cyclic_order(self) -> Optional[int]:
        return len(self.names) if self._cyclic is not None else None

    def exponent_sum(self, x: int) -> int:
        if self._cyclic is None:
            return super().exponent_sum(x)
        return self._cyclic[x] % len(self.names)


if __name__ == "__main__":
    h1 = FreeGroup("H1", {"c11": 3, "c12": 3})
    x = h1.parse_element("c11^2*c12")
    print(h1.format_element(x), "inverse:", h1.format_element(h1.inverse(x)))
    z3 = CyclicGroup("A", 3, "a")
    print([z3.format_element(e) for e in z3.elements(3)])
