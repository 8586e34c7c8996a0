"""Reduction of quadratic systems to standard form.

An automorphism ``η`` of the free group on ``D ∪ X`` with ``η(F(D)) = F(D)``
is built from elementary substitutions. Each component word is cut into
blocks (cross-caps ``yy``, handles ``[x,y]`` and conjugated coefficients
``z⁻¹dz``). The blocks are then reordered and converted between handles and
cross-caps until the word is cyclically equal to ``q(ξ, n, t, p)``.

Every elementary step is recorded together with its inverse, so both ``η``
and ``η⁻¹`` can be applied to arbitrary words.

Usage:
    from qexp.quadwords import QuadSystem, QuadWord
    from qexp.stdform import to_standard_form

    eta, q = to_standard_form(QuadSystem([QuadWord.parse("x1 d1 x1^-1 x2 x2")]))
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from qexp.quadwords import (
    Letter,
    NotQuadraticError,
    Occurrence,
    QuadSystem,
    QuadWord,
    d,
    is_quadratic,
    standard_offsets,
    standard_q,
    standard_system,
    surface_of,
    x,
)

logger = logging.getLogger(__name__)

Mapping = Dict[Letter, QuadWord]
Target = Tuple[int, int, int]


class GenusMismatchError(ValueError):
    """Raised when a requested ``(n, t, p)`` does not match a component's surface."""


class Substitution:
    """Composite automorphism recorded as ``(forward, backward)`` steps."""

    def __init__(self):
        self.steps: List[Tuple[Mapping, Mapping]] = []

    def record(self, forward: Mapping, backward: Mapping) -> None:
        if forward:
            self.steps.append((dict(forward), dict(backward)))

    def apply(self, w: QuadWord) -> QuadWord:
        for forward, _ in self.steps:
            w = w.substitute(forward)
        return w

    def invert(self, w: QuadWord) -> QuadWord:
        for _, backward in reversed(self.steps):
            w = w.substitute(backward)
        return w

    def image(self, a: Letter) -> QuadWord:
        return self.apply(QuadWord.letter(a))

    def preimage(self, a: Letter) -> QuadWord:
        return self.invert(QuadWord.letter(a))

    def preserves_coefficients(self, letters) -> bool:
        """True iff every coefficient letter maps into ``F(D)``."""
        return all(
            all(b.kind == "d" for b, _ in self.image(a))
            for a in letters
            if a.kind == "d"
        )

    def is_identity(self) -> bool:
        return not self.steps

    def __len__(self) -> int:
        return len(self.steps)


def _w(*items: Occurrence) -> QuadWord:
    return QuadWord(items)


def _swap(a: Letter, b: Letter) -> Mapping:
    return {a: QuadWord.letter(b), b: QuadWord.letter(a)}


# Blocks ---------------------------------------------------------------------

CONJ, COMM, SQUARE = "conj", "comm", "square"
_ORDER = {CONJ: 0, COMM: 1, SQUARE: 2}

Block = Tuple[str, Tuple[Letter, ...]]


def _block_word(block: Block) -> QuadWord:
    kind, letters = block
    if kind == CONJ:
        z, dd = letters
        return _w((z, -1), (dd, 1), (z, 1))
    if kind == COMM:
        a, b = letters
        return _w((a, -1), (b, -1), (a, 1), (b, 1))
    (y,) = letters
    return _w((y, 1), (y, 1))


def _conjugate_block(block: Block, left: QuadWord) -> Tuple[Mapping, Mapping]:
    """Substitution sending the block ``K`` to ``left · K · left⁻¹``."""
    kind, letters = block
    if kind == CONJ:
        z = letters[0]
        zw = QuadWord.letter(z)
        return {z: zw + left.inverse()}, {z: zw + left}
    forward, backward = {}, {}
    for a in letters:
        aw = QuadWord.letter(a)
        forward[a] = left + aw + left.inverse()
        backward[a] = left.inverse() + aw + left
    return forward, backward


class _Normalizer:
    """Brings a single quadratic word to ``q(ξ, n, t, p)``."""

    def __init__(self, word: QuadWord, eta: Substitution, fresh_start: int):
        self.rest: List[Occurrence] = list(word.letters)
        self.blocks: List[Block] = []
        self.eta = eta
        self._fresh = fresh_start

    def fresh(self) -> Letter:
        self._fresh += 1
        return x(self._fresh)

    # Substitutions ------------------------------------------------------

    def _on_rest(self, forward: Mapping, backward: Mapping) -> None:
        self.eta.record(forward, backward)
        self.rest = list(QuadWord(self.rest).substitute(forward).letters)

    def _invert_letter(self, a: Letter) -> None:
        inv = QuadWord.letter(a, -1)
        self._on_rest({a: inv}, {a: inv})

    def _positions(self, a: Letter) -> List[int]:
        return [k for k, (b, _) in enumerate(self.rest) if b == a]

    def _move_to_front(self, block: Block, start: int) -> None:
        """``A K E`` becomes ``K A E`` where ``K`` starts at ``start``."""
        prefix = QuadWord(self.rest[:start])
        if prefix.letters:
            forward, backward = _conjugate_block(block, prefix.inverse())
            self._on_rest(forward, backward)
        size = len(_block_word(block))
        if tuple(self.rest[:size]) != _block_word(block).letters:
            raise RuntimeError(f"Block {block} did not reach the front of '{QuadWord(self.rest)}'")
        self.blocks.append(block)
        self.rest = self.rest[size:]

    def _merge_coefficients(self, start: int, end: int) -> Letter:
        """Make ``rest[start:end]`` (coefficients only) a single positive letter."""
        segment = self.rest[start:end]
        d0, e0 = segment[0]
        tail = QuadWord(segment[1:])
        if e0 == 1 and not tail.letters:
            return d0
        d0w = QuadWord.letter(d0)
        if e0 == 1:
            self._on_rest({d0: d0w + tail.inverse()}, {d0: d0w + tail})
        else:
            self._on_rest({d0: tail + d0w.inverse()}, {d0: d0w.inverse() + tail})
        return d0

    # Extraction ---------------------------------------------------------

    def _same_sign_pair(self) -> Optional[Letter]:
        seen: Dict[Letter, int] = {}
        for a, e in self.rest:
            if a.kind != "x":
                continue
            if a in seen and seen[a] == e:
                return a
            seen[a] = e
        return None

    def _extract_cross_cap(self, y: Letter) -> None:
        i, j = self._positions(y)
        if self.rest[i][1] == -1:
            self._invert_letter(y)
        i, j = self._positions(y)
        between = QuadWord(self.rest[i + 1:j])
        yw = QuadWord.letter(y)
        if between.letters:
            self._on_rest({y: yw + between.inverse()}, {y: yw + between})
        i, _ = self._positions(y)
        self._move_to_front((SQUARE, (y,)), i)

    def _interleaved_pair(self) -> Optional[Tuple[Letter, Letter]]:
        spans: Dict[Letter, Tuple[int, int]] = {}
        for a in {b for b, _ in self.rest if b.kind == "x"}:
            i, j = self._positions(a)
            spans[a] = (i, j)
        ordered = sorted(spans.items(), key=lambda item: item[1])
        for a, (i, j) in ordered:
            for b, (k, l) in ordered:
                if i < k < j < l:
                    return a, b
        return None

    def _extract_handle(self, a: Letter, b: Letter) -> None:
        if self.rest[self._positions(a)[0]][1] == -1:
            self._invert_letter(a)
        if self.rest[self._positions(b)[0]][1] == -1:
            self._invert_letter(b)
        aw, bw = QuadWord.letter(a), QuadWord.letter(b)
        # A a B b C a⁻¹ D b⁻¹ E
        p1, p2 = self._positions(a)
        q1, _ = self._positions(b)
        seg_b = QuadWord(self.rest[p1 + 1:q1])
        if seg_b.letters:
            self._on_rest({b: seg_b.inverse() + bw}, {b: seg_b + bw})
        # A a b C a⁻¹ D b⁻¹ B E
        p1, p2 = self._positions(a)
        seg_c = QuadWord(self.rest[p1 + 2:p2])
        if seg_c.letters:
            self._on_rest({b: bw + seg_c.inverse()}, {b: bw + seg_c})
        # A a b a⁻¹ G b⁻¹ B E
        _, p2 = self._positions(a)
        _, q2 = self._positions(b)
        seg_g = QuadWord(self.rest[p2 + 1:q2])
        if seg_g.letters:
            self._on_rest({a: seg_g + aw}, {a: seg_g.inverse() + aw})
        # A G a b a⁻¹ b⁻¹ B E
        inv = {a: aw.inverse(), b: bw.inverse()}
        self._on_rest(inv, inv)
        p1, _ = self._positions(a)
        self._move_to_front((COMM, (a, b)), p1)

    def _innermost_pair(self) -> Optional[Letter]:
        for a in sorted({b for b, _ in self.rest if b.kind == "x"}):
            i, j = self._positions(a)
            if j > i + 1 and all(b.kind == "d" for b, _ in self.rest[i + 1:j]):
                return a
        return None

    def _extract_conjugate(self, z: Letter) -> None:
        i, _ = self._positions(z)
        if self.rest[i][1] == 1:
            self._invert_letter(z)
        i, j = self._positions(z)
        d0 = self._merge_coefficients(i + 1, j)
        i, _ = self._positions(z)
        block = (CONJ, (z, d0))
        if i > 0:
            prefix = QuadWord(self.rest[:i])
            zw = QuadWord.letter(z)
            self._on_rest({z: zw + prefix}, {z: zw + prefix.inverse()})
        size = 3
        if tuple(self.rest[:size]) != _block_word(block).letters:
            raise RuntimeError(f"Coefficient block for {z} did not reach the front")
        self.blocks.append(block)
        self.rest = self.rest[size:]

    def _close_outer_boundary(self) -> None:
        d0 = self._merge_coefficients(0, len(self.rest))
        z = self.fresh()
        zw = QuadWord.letter(z)
        forward: Mapping = {}
        backward: Mapping = {}
        for block in self.blocks:
            f, b = _conjugate_block(block, zw)
            forward.update(f)
            backward.update(b)
        # z·B·z⁻¹·d0 is cyclically B·z⁻¹·d0·z
        self.eta.record(forward, backward)
        self.blocks.append((CONJ, (z, d0)))
        self.rest = []

    def extract(self) -> None:
        for _ in range(4 * len(self.rest) + 4):
            if not self.rest:
                return
            y = self._same_sign_pair()
            if y is not None:
                self._extract_cross_cap(y)
                continue
            pair = self._interleaved_pair()
            if pair is not None:
                self._extract_handle(*pair)
                continue
            z = self._innermost_pair()
            if z is not None:
                self._extract_conjugate(z)
                continue
            if all(a.kind == "d" for a, _ in self.rest):
                self._close_outer_boundary()
                return
            raise RuntimeError(f"No block can be extracted from '{QuadWord(self.rest)}'")
        raise RuntimeError("Block extraction did not terminate")

    # Arrangement --------------------------------------------------------

    def _apply_to_blocks(self, forward: Mapping, backward: Mapping, start: int, expected: List[Block]) -> None:
        segment = QuadWord(
            tuple(o for block in self.blocks[start:start + len(expected)] for o in _block_word(block))
        )
        result = segment.substitute(forward)
        target = QuadWord(tuple(o for block in expected for o in _block_word(block)))
        if result != target:
            raise RuntimeError(f"Block rewrite produced '{result}', expected '{target}'")
        self.eta.record(forward, backward)
        self.blocks[start:start + len(expected)] = expected

    def _swap(self, i: int) -> None:
        first, second = self.blocks[i], self.blocks[i + 1]
        forward, backward = _conjugate_block(first, _block_word(second))
        self._apply_to_blocks(forward, backward, i, [second, first])

    def sort_blocks(self) -> None:
        changed = True
        while changed:
            changed = False
            for i in range(len(self.blocks) - 1):
                if _ORDER[self.blocks[i][0]] > _ORDER[self.blocks[i + 1][0]]:
                    self._swap(i)
                    changed = True

    @staticmethod
    def _handle_to_caps_steps(a: Letter, b: Letter, c: Letter) -> List[Mapping]:
        """Forward steps turning ``[a,b] c c`` into ``a a b b c c``."""
        aw, bw, cw = QuadWord.letter(a), QuadWord.letter(b), QuadWord.letter(c)
        k = _w((a, -1), (b, -1), (a, 1), (b, 1))
        return [
            {c: k.inverse() + cw + k},
            {c: cw + aw},
            {a: aw + bw + cw.inverse()},
            {a: cw.inverse() + aw + cw},
            {b: bw + cw},
            {b: cw.inverse() + bw + cw},
        ]

    @staticmethod
    def _handle_to_caps_inverses(a: Letter, b: Letter, c: Letter) -> List[Mapping]:
        aw, bw, cw = QuadWord.letter(a), QuadWord.letter(b), QuadWord.letter(c)
        k = _w((a, -1), (b, -1), (a, 1), (b, 1))
        return [
            {c: k + cw + k.inverse()},
            {c: cw + aw.inverse()},
            {a: aw + cw + bw.inverse()},
            {a: cw + aw + cw.inverse()},
            {b: bw + cw.inverse()},
            {b: cw + bw + cw.inverse()},
        ]

    def _compose_into_blocks(
        self, steps: List[Tuple[Mapping, Mapping]], start: int, count: int, expected: List[Block]
    ) -> None:
        segment = QuadWord(
            tuple(o for block in self.blocks[start:start + count] for o in _block_word(block))
        )
        for forward, _ in steps:
            segment = segment.substitute(forward)
        target = QuadWord(tuple(o for block in expected for o in _block_word(block)))
        if segment != target:
            raise RuntimeError(f"Handle conversion produced '{segment}', expected '{target}'")
        for forward, backward in steps:
            self.eta.record(forward, backward)
        self.blocks[start:start + count] = expected

    def handles_to_caps(self) -> None:
        """``[a,b] c c`` at the handle/cap seam becomes ``a a b b c c``."""
        i = max(k for k, block in enumerate(self.blocks) if block[0] == COMM)
        a, b = self.blocks[i][1]
        (c,) = self.blocks[i + 1][1]
        forward = self._handle_to_caps_steps(a, b, c)
        backward = self._handle_to_caps_inverses(a, b, c)
        steps = list(zip(forward, backward))
        self._compose_into_blocks(steps, i, 2, [(SQUARE, (a,)), (SQUARE, (b,)), (SQUARE, (c,))])

    def caps_to_handle(self) -> None:
        """The first three cross-caps ``a a b b c c`` become ``[a,b] c c``."""
        i = min(k for k, block in enumerate(self.blocks) if block[0] == SQUARE)
        (a,) = self.blocks[i][1]
        (b,) = self.blocks[i + 1][1]
        (c,) = self.blocks[i + 2][1]
        forward = self._handle_to_caps_steps(a, b, c)
        backward = self._handle_to_caps_inverses(a, b, c)
        steps = list(zip(reversed(backward), reversed(forward)))
        self._compose_into_blocks(steps, i, 3, [(COMM, (a, b)), (SQUARE, (c,))])

    def counts(self) -> Tuple[int, int, int]:
        return tuple(sum(1 for block in self.blocks if block[0] == kind) for kind in (CONJ, COMM, SQUARE))

    def rename(self, xi: int) -> QuadWord:
        n, t, p = self.counts()
        targets: Dict[Letter, Letter] = {}
        conj = [b for b in self.blocks if b[0] == CONJ]
        comm = [b for b in self.blocks if b[0] == COMM]
        caps = [b for b in self.blocks if b[0] == SQUARE]
        for i, (_, (z, dd)) in enumerate(conj, start=xi + 1):
            targets[z], targets[dd] = x(i), d(i)
        for i, (_, (a, b)) in enumerate(comm, start=xi + 1):
            targets[a], targets[b] = x(i + n), x(i + n + t)
        for i, (_, (y,)) in enumerate(caps, start=xi + 1):
            targets[y] = x(i + n + 2 * t)
        for current, target in targets.items():
            if current != target:
                swap = _swap(current, target)
                self.eta.record(swap, swap)
        return standard_q(xi, n, t, p)


def _check_targets(system: QuadSystem, targets: Optional[Sequence[Target]]) -> List[Target]:
    chosen: List[Target] = []
    for j, w in enumerate(system):
        surface = surface_of(w)
        h = 2 - surface.euler_characteristic - surface.boundary_count
        default = (surface.boundary_count, h // 2, 0) if surface.orientable else (surface.boundary_count, 0, h)
        target = tuple(targets[j]) if targets is not None else default
        n, t, p = target
        if n != surface.boundary_count or (t, p) not in surface.representatives:
            raise GenusMismatchError(
                f"Component {j + 1} ('{w}') has {surface.boundary_count} boundary components "
                f"and genus representatives {sorted(surface.representatives)}; target {target} does not match"
            )
        chosen.append((n, t, p))
    return chosen


def to_standard_form(
    system: QuadSystem, targets: Optional[Sequence[Target]] = None
) -> Tuple[Substitution, QuadSystem]:
    """Compute ``η`` with ``η(w_j)`` cyclically equal to ``q(ξ_j, n_j, t_j, p_j)``.

    Args:
        system: Quadratic system with disjoint components
        targets: One ``(n, t, p)`` per component; defaults to ``(n, g, 0)`` for
            orientable and ``(n, 0, h)`` for non-orientable components

    Returns:
        Tuple of (substitution ``η``, standard system)

    Raises:
        NotQuadraticError: If a component is not quadratic
        GenusMismatchError: If a target does not match its component
    """
    if targets is not None and len(targets) != len(system):
        raise ValueError(f"Expected {len(system)} targets, got {len(targets)}")
    for w in system:
        if not is_quadratic(w):
            raise NotQuadraticError(f"Word '{w}' is not quadratic")
    chosen = _check_targets(system, targets)
    standard = standard_system(chosen)
    offsets = standard_offsets(chosen)

    eta = Substitution()
    if standard == system:
        return eta, standard

    top = max([a.index for w in system for a, _ in w] + [sum(n + 2 * t + p for n, t, p in chosen)])
    counter = top
    renamed: List[QuadWord] = []
    for w, q in zip(system, standard):
        if w == q:
            renamed.append(w)
            continue
        mapping: Mapping = {}
        for a in sorted(w.letter_set):
            counter += 1
            mapping.update(_swap(a, Letter(a.kind, counter)))
        eta.record(mapping, mapping)
        renamed.append(w.substitute(mapping))
    fresh = counter + 1

    for j, (w, q, (n, t, p), xi) in enumerate(zip(renamed, standard, chosen, offsets)):
        if w == q:
            continue
        normalizer = _Normalizer(w.cyclic_reduce(), eta, fresh)
        normalizer.extract()
        normalizer.sort_blocks()
        _, tc, pc = normalizer.counts()
        while tc > t:
            normalizer.handles_to_caps()
            tc, pc = tc - 1, pc + 2
        while tc < t:
            normalizer.caps_to_handle()
            tc, pc = tc + 1, pc - 2
        normalizer.rename(xi)
        fresh = normalizer._fresh + 1
        logger.debug("component %d normalized with %d steps so far", j + 1, len(eta))

    for j, (w, q) in enumerate(zip(system, standard)):
        image = eta.apply(w)
        if not image.is_cyclic_conjugate(q):
            raise RuntimeError(f"Standard form check failed for component {j + 1}: '{image}' vs '{q}'")
    return eta, standard


if __name__ == "__main__":
    system = QuadSystem([QuadWord.parse("x1 d1 x1^-1 x2 x2"), QuadWord.parse("d2 d3")])
    eta, q = to_standard_form(system)
    print("standard:", q)
    for a in sorted(system.coefficients | system.variables):
        print(f"  eta({a}) = {eta.image(a)}")
