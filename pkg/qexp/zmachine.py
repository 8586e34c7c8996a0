"""Corridor sections, the Z-graph and Z-cancellation.

A corridor is handled in encoded form: a sequence of squares, one per rank,
each carrying its left interior marking (an octuple), its left boundary
marking ``(p0, p1, ε0, ε1, r0, r1)``, the number of arcs it contains and its
base ``(x0, x1, y0, y1)``. Here ``x_i`` is the number of boundary syllables
the square consumes on side ``i``. The marking of rank ``s`` is the pair
(boundary marking, interior marking) of square ``s``.

Two ranks ``p < q`` with equal markings delimit a corridor section that can
be cut out (Z-cancellation) or spliced back in (Z-insertion). Cutting a
section with extent ``(α0, α1)`` lowers the exponent of boundary letter
``p_i`` by ``l(h_{p_i})·α_i``.

The Z-graph of a section catalog has marking sets as vertices and an edge
``R -> R ∪ m_{L(i)}`` labelled ``i`` whenever the left marking of ``L(i)``
lies in ``R``. Vertices are only materialized when reached from a start
vertex.

Usage:
    from qexp.zmachine import build_zgraph, path_subgraphs, basic_reduce_check

    G = build_zgraph(catalog, z)
    for P in path_subgraphs(G, start):
        alpha0 = basic_reduce_check(alpha_s, P, L, z, G)
"""

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from sympy import ilcm

from qexp.bounds import m_number, w_statistics
from qexp.exponential import ExpLetter, ExpWord
from qexp.params import LinPoly, ParameterPool, ParamSystem, Retraction, is_consistent
from qexp.pictures import ArcEnd, Picture, Piece, edge_classes

logger = logging.getLogger(__name__)

BoundaryMarking = Tuple[int, int, int, int, int, int]
InteriorMarking = Tuple[int, int, int, int, int, int, int, int]
Marking = Tuple[BoundaryMarking, InteriorMarking]
Vertex = FrozenSet[Marking]

ZERO_INTERIOR: InteriorMarking = (0, 0, 0, 0, 0, 0, 0, 0)


# Encoded corridors ----------------------------------------------------------


@dataclass(frozen=True)
class Square:
    """One rank of an encoded corridor."""

    type: int
    base: Tuple[int, int, int, int]
    boundary: BoundaryMarking
    interior: InteriorMarking = ZERO_INTERIOR
    arcs: int = 1

    @property
    def marking(self) -> Marking:
        return self.boundary, self.interior

    @property
    def advance(self) -> Tuple[int, int]:
        return self.base[0], self.base[1]


def _binding(squares: Sequence[Square]) -> Tuple[int, int, int, int]:
    """``(p0, p1, ε0, ε1)`` shared by every square.

    Raises:
        ValueError: If the squares bind different letters or orientations
    """
    if not squares:
        raise ValueError("A corridor needs at least one square")
    found = {sq.boundary[:4] for sq in squares}
    if len(found) != 1:
        raise ValueError(f"Squares bind different letters: {sorted(found)}")
    return next(iter(found))


@dataclass(frozen=True)
class EncodedCorridor:
    """A maximal ``j``-corridor as its square sequence.

    ``lengths`` holds ``(l(h_{p0}), l(h_{p1}))``.
    """

    id: str
    type: int
    squares: Tuple[Square, ...]
    lengths: Tuple[int, int]

    def __post_init__(self):
        if self.type not in (0, 1, 2):
            raise ValueError(f"Corridor type must be 0, 1 or 2, got {self.type}")
        _binding(self.squares)
        if min(self.lengths) < 1:
            raise ValueError(f"Bound letters need l(h) >= 1, got {self.lengths}")

    @property
    def width(self) -> int:
        return len(self.squares)

    @property
    def arc_count(self) -> int:
        return sum(sq.arcs for sq in self.squares)

    @property
    def letters(self) -> Tuple[int, int]:
        p0, p1, _, _ = _binding(self.squares)
        return p0, p1

    def marking(self, rank: int) -> Marking:
        return self.squares[rank].marking

    def chain_errors(self) -> List[str]:
        """Ranks where ``r_i`` does not advance by ``x_i`` modulo ``l(h_i)``."""
        errors = []
        for s in range(self.width - 1):
            here, there = self.squares[s], self.squares[s + 1]
            for i in (0, 1):
                expected = (here.boundary[4 + i] - here.advance[i]) % self.lengths[i]
                if there.boundary[4 + i] != expected:
                    errors.append(f"rank {s + 1} side {i}: r = {there.boundary[4 + i]}, expected {expected}")
        return errors


@dataclass(frozen=True)
class CorridorSection:
    """A corridor section ``L(i)``: squares between two equal markings, and its extent."""

    id: str
    type: int
    squares: Tuple[Square, ...]
    extent: Tuple[int, int]

    def __post_init__(self):
        if self.type not in (0, 1, 2):
            raise ValueError(f"Section type must be 0, 1 or 2, got {self.type}")
        _binding(self.squares)
        if min(self.extent) < 1:
            raise ValueError(f"Section {self.id}: extent must be positive, got {self.extent}")

    @property
    def width(self) -> int:
        return len(self.squares)

    @property
    def arc_count(self) -> int:
        return sum(sq.arcs for sq in self.squares)

    @property
    def left_boundary_marking(self) -> BoundaryMarking:
        return self.squares[0].boundary

    @property
    def left_interior_marking(self) -> InteriorMarking:
        return self.squares[0].interior

    @property
    def left_marking(self) -> Marking:
        return self.squares[0].marking

    @property
    def markings(self) -> FrozenSet[Marking]:
        """``m_{L(i)}``: the left markings of every rank."""
        return frozenset(sq.marking for sq in self.squares)

    @property
    def letters(self) -> Tuple[int, int]:
        p0, p1, _, _ = _binding(self.squares)
        return p0, p1

    def advance(self) -> Tuple[int, int]:
        return (sum(sq.advance[0] for sq in self.squares), sum(sq.advance[1] for sq in self.squares))


def zeta(section: CorridorSection, p: int) -> int:
    """``ζ(p, i)`` for the section ``L(i)`` and letter index ``p``."""
    p0, p1 = section.letters
    a0, a1 = section.extent
    if p == p0 and p == p1:
        return a0 + a1
    if p == p0:
        return a0
    if p == p1:
        return a1
    return 0


class ZStep(NamedTuple):
    corridor: EncodedCorridor
    section: CorridorSection
    deltas: Dict[int, int]


def _deltas(section: CorridorSection, lengths: Tuple[int, int], sign: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for i, p in enumerate(section.letters):
        out[p] = out.get(p, 0) + sign * lengths[i] * section.extent[i]
    return out


def z_cancel(C: EncodedCorridor, p: int, q: int) -> ZStep:
    """Cut the squares of ranks ``[p, q)`` out of ``C``.

    Raises:
        ValueError: If the ranks are out of range or their markings differ
    """
    if not 0 <= p < q < C.width:
        raise ValueError(f"Need 0 <= p < q < {C.width}, got p={p}, q={q}")
    if C.marking(p) != C.marking(q):
        raise ValueError(f"Markings of ranks {p} and {q} differ: {C.marking(p)} vs {C.marking(q)}")
    squares = C.squares[p:q]
    advance = [sum(sq.advance[i] for sq in squares) for i in (0, 1)]
    if any(advance[i] % C.lengths[i] for i in (0, 1)):
        raise ValueError(f"Ranks {p}..{q} consume {advance} syllables, not a multiple of {C.lengths}")
    extent = (advance[0] // C.lengths[0], advance[1] // C.lengths[1])
    section = CorridorSection(f"{C.id}[{p}:{q}]", C.type, squares, extent)
    remaining = EncodedCorridor(C.id, C.type, C.squares[:p] + C.squares[q:], C.lengths)
    logger.debug("Z-cancel %s ranks %d..%d, extent %s", C.id, p, q, extent)
    return ZStep(remaining, section, _deltas(section, C.lengths, -1))


def z_insert(C: EncodedCorridor, section: CorridorSection, p: int) -> ZStep:
    """Splice ``section`` into ``C`` so that it occupies ranks ``p`` onward.

    Raises:
        ValueError: If the section's left marking differs from rank ``p`` of ``C``
            or its extent disagrees with the syllables it consumes
    """
    if not 0 <= p < C.width:
        raise ValueError(f"Insertion rank {p} outside 0..{C.width - 1}")
    if section.type != C.type:
        raise ValueError(f"Section of type {section.type} in a {C.type}-corridor")
    if section.left_marking != C.marking(p):
        raise ValueError(f"Section {section.id} left marking {section.left_marking} differs from rank {p}")
    advance = section.advance()
    for i in (0, 1):
        if advance[i] != section.extent[i] * C.lengths[i]:
            raise ValueError(
                f"Section {section.id} consumes {advance[i]} syllables on side {i}, "
                f"extent {section.extent[i]} needs {section.extent[i] * C.lengths[i]}"
            )
    grown = EncodedCorridor(C.id, C.type, C.squares[:p] + section.squares + C.squares[p:], C.lengths)
    logger.debug("Z-insert %s into %s at rank %d", section.id, C.id, p)
    return ZStep(grown, section, _deltas(section, C.lengths, 1))


def find_cancellable(C: EncodedCorridor) -> Optional[Tuple[int, int]]:
    """The pair ``p < q`` of equal markings with the smallest ``q``."""
    first: Dict[Marking, int] = {}
    for q in range(C.width):
        m = C.marking(q)
        if m in first:
            return first[m], q
        first[m] = q
    return None


def exhaust_cancellation(C: EncodedCorridor) -> Tuple[EncodedCorridor, List[ZStep]]:
    """Z-cancel until no two ranks share a marking."""
    steps = []
    site = find_cancellable(C)
    while site is not None:
        step = z_cancel(C, *site)
        if step.corridor.arc_count >= C.arc_count:
            raise AssertionError(f"Z-cancellation of {C.id} did not remove arcs")
        steps.append(step)
        C = step.corridor
        site = find_cancellable(C)
    return C, steps


def corridor_sections(C: EncodedCorridor) -> List[CorridorSection]:
    """Sections cut between each rank and the next rank with the same marking."""
    found: Dict[Tuple[Square, ...], CorridorSection] = {}
    for p in range(C.width):
        for q in range(p + 1, C.width):
            if C.marking(q) == C.marking(p):
                section = z_cancel(C, p, q).section
                found.setdefault(section.squares, section)
                break
    return list(found.values())


def type0_corridor(
    letters: Tuple[int, int],
    lengths: Tuple[int, int],
    width: int,
    orientation: Tuple[int, int] = (1, -1),
    start: Tuple[int, int] = (0, 0),
    cid: str = "C",
) -> EncodedCorridor:
    """A type-0 corridor of ``width`` parallel arcs, one syllable apart on each side."""
    if width < 1:
        raise ValueError(f"Corridor width must be positive, got {width}")
    p0, p1 = letters
    e0, e1 = orientation
    squares = tuple(
        Square(
            0,
            (1, 1, 1, 1),
            (p0, p1, e0, e1, (start[0] - s) % lengths[0], (start[1] - s) % lengths[1]),
        )
        for s in range(width)
    )
    return EncodedCorridor(cid, 0, squares, lengths)


def type0_section(
    letters: Tuple[int, int],
    lengths: Tuple[int, int],
    orientation: Tuple[int, int] = (1, -1),
    start: Tuple[int, int] = (0, 0),
    sid: str = "L",
) -> CorridorSection:
    """The shortest type-0 section with the given left marking."""
    width = int(ilcm(*lengths))
    C = type0_corridor(letters, lengths, width, orientation, start, sid)
    return CorridorSection(sid, 0, C.squares, (width // lengths[0], width // lengths[1]))


# Type-0 detection -----------------------------------------------------------


def _letter_offsets(picture: Picture) -> Dict[str, int]:
    offsets, total = {}, 0
    for bid, b in picture.boundaries.items():
        offsets[bid] = total
        total += len(b.letters)
    return offsets


def _end_position(picture: Picture, bid: str, pos: int, offsets: Dict[str, int]) -> Optional[Tuple[int, int, int, int]]:
    """``(p, l(h_p), pieces before pos in its interval, interval length)``."""
    interval = picture.piece_interval(bid, pos)
    if interval is None:
        return None
    b = picture.boundaries[bid]
    length = b.letters[interval].length
    if length < 1:
        return None
    start = picture.points(bid)[interval]
    n = len(b.tokens)
    before = 0
    k = (start + 1) % n
    while k != pos:
        if isinstance(b.tokens[k], Piece):
            before += 1
        k = (k + 1) % n
    total = len(picture.intervals(bid)[interval])
    return offsets[bid] + interval + 1, length, before, total


def _corner_pieces(picture: Picture, bid: str, corner: int) -> int:
    b = picture.boundaries[bid]
    return sum(1 for pos in picture.boundary_corner_spans[bid][corner] if isinstance(b.tokens[pos], Piece))


def _chain(picture: Picture, arcs: Sequence[str]) -> Tuple[List[str], bool]:
    """Order the arcs of a parallel class along the corridor; True if it closes up."""
    members = set(arcs)
    neighbours: Dict[str, List[str]] = {a: [] for a in arcs}
    for region in picture.regions.values():
        sides = sorted(set(region.sides))
        if len(sides) == 2 and len(region.corners) == 2 and region.chi == 1 and set(sides) <= members:
            a, b = sides
            neighbours[a].append(b)
            neighbours[b].append(a)
    ends = sorted(a for a in arcs if len(neighbours[a]) < 2)
    cyclic = not ends
    order = [ends[0] if ends else min(arcs)]
    seen = {order[0]}
    while True:
        nxt = sorted(b for b in neighbours[order[-1]] if b not in seen)
        if not nxt:
            break
        order.append(nxt[0])
        seen.add(nxt[0])
    return order, cyclic


def detect_0corridors(picture: Picture) -> List[EncodedCorridor]:
    """Maximal classes of parallel type-I arcs, encoded as type-0 corridors.

    The arcs of a class are ordered along the corridor. Side 0 is the side
    of the first arc's first end. A class whose consecutive arcs leave a
    boundary interval is split where they do.
    """
    offsets = _letter_offsets(picture)
    order_on: Dict[str, List[int]] = {
        bid: [i for i, t in enumerate(b.tokens) if isinstance(t, ArcEnd)]
        for bid, b in picture.boundaries.items()
    }
    corridors: List[EncodedCorridor] = []
    for edge in edge_classes(picture):
        if not edge.type_one:
            continue
        order, cyclic = _chain(picture, edge.arcs)
        if len(order) != edge.width:
            logger.debug("class %s is not a single chain, skipped", edge.representative)
            continue
        sides: List[Tuple[Tuple[str, int], Tuple[str, int]]] = []
        first = [(owner, pos) for _, owner, pos in picture.arc_ends[order[0]]]
        sides.append((first[0], first[1]))
        for a in order[1:]:
            ends = [(owner, pos) for _, owner, pos in picture.arc_ends[a]]
            prev = sides[-1][0]
            ranks = order_on[prev[0]]
            idx = ranks.index(prev[1])
            adjacent = {ranks[(idx + 1) % len(ranks)], ranks[(idx - 1) % len(ranks)]}
            if ends[1][0] == prev[0] and ends[1][1] in adjacent and not (
                ends[0][0] == prev[0] and ends[0][1] in adjacent
            ):
                ends.reverse()
            sides.append((ends[0], ends[1]))
        orientation = []
        for i in (0, 1):
            if len(order) == 1:
                orientation.append(1 - 2 * i)
                continue
            (bid, pos), (_, nxt) = sides[0][i], sides[1][i]
            ranks = order_on[bid]
            orientation.append(1 if ranks[(ranks.index(pos) + 1) % len(ranks)] == nxt else -1)
        squares: List[Tuple[Tuple[int, int], Square]] = []
        lengths: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for s in range(len(order)):
            marking: List[int] = []
            advance: List[int] = []
            letters: List[int] = []
            lens: List[int] = []
            for i in (0, 1):
                bid, pos = sides[s][i]
                found = _end_position(picture, bid, pos, offsets)
                if found is None:
                    break
                p, length, before, total = found
                eps = orientation[i]
                letters.append(p)
                lens.append(length)
                marking.append((total - before) % length if eps == 1 else before % length)
                ranks = order_on[bid]
                idx = ranks.index(pos)
                advance.append(_corner_pieces(picture, bid, idx if eps == 1 else (idx - 1) % len(ranks)))
            else:
                key = (letters[0], letters[1])
                lengths[key] = (lens[0], lens[1])
                boundary = (letters[0], letters[1], orientation[0], orientation[1], marking[0], marking[1])
                squares.append((key, Square(0, (advance[0], advance[1], 1, 1), boundary)))
                continue
            squares.append((None, None))
        runs: List[List[Square]] = []
        current_key = None
        for key, sq in squares:
            if key is None:
                current_key = None
                continue
            if key != current_key:
                runs.append([])
                current_key = key
            runs[-1].append(sq)
        for n, run in enumerate(runs):
            key = run[0].boundary[:2]
            cid = edge.representative if len(runs) == 1 else f"{edge.representative}.{n + 1}"
            corridors.append(EncodedCorridor(cid, 0, tuple(run), lengths[key]))
        logger.debug("class %s: %d corridor(s), cyclic=%s", edge.representative, len(runs), cyclic)
    return corridors


def active_markings(corridors: Sequence[EncodedCorridor]) -> Vertex:
    """``v(Γ)``: every rank marking of the given corridors."""
    return frozenset(C.marking(s) for C in corridors for s in range(C.width))


# Z-graph --------------------------------------------------------------------


def letters_of(z: Sequence[ExpWord]) -> List[ExpLetter]:
    """Letters of ``z`` numbered ``1..W1`` in order."""
    return [letter for u in z for letter, _ in u]


@dataclass(frozen=True)
class ZEdge:
    source: Vertex
    target: Vertex
    label: int

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


class ZGraph:
    """Lazily materialized Z-graph of a section catalog."""

    def __init__(self, catalog: Sequence[CorridorSection]):
        self.catalog: Tuple[CorridorSection, ...] = tuple(catalog)
        self._edges: Dict[Vertex, List[ZEdge]] = {}

    @property
    def universe(self) -> Vertex:
        """``m_z``."""
        out = set()
        for section in self.catalog:
            out |= section.markings
        return frozenset(out)

    def section(self, label: int) -> CorridorSection:
        return self.catalog[label - 1]

    def edges_from(self, R: Vertex) -> List[ZEdge]:
        R = frozenset(R)
        if R not in self._edges:
            self._edges[R] = [
                ZEdge(R, R | section.markings, i)
                for i, section in enumerate(self.catalog, start=1)
                if section.left_marking in R
            ]
        return self._edges[R]

    def reachable(self, start: Vertex) -> Dict[Vertex, List[ZEdge]]:
        """Every vertex reachable from ``start`` with its outgoing edges."""
        start = frozenset(start)
        found = {start: self.edges_from(start)}
        stack = [start]
        while stack:
            for e in found[stack.pop()]:
                if e.target not in found:
                    found[e.target] = self.edges_from(e.target)
                    stack.append(e.target)
        return found


def check_catalog(catalog: Sequence[CorridorSection], z: Sequence[ExpWord], s_length: Optional[int] = None) -> None:
    """Check that every section marking refers to a bound letter of ``z``.

    Raises:
        ValueError: If a marking references a letter index outside ``1..W1``, a
            degenerate or minor letter, an ``r_i >= l(h)``, if the extent disagrees
            with the consumed syllables, or (with ``s_length``) if a section has
            more than ``M(j)`` arcs
    """
    letters = letters_of(z)
    W1 = len(letters)
    limits = None
    if s_length is not None:
        w = w_statistics(z, s_length)
        limits = [m_number(j, w["W2"], w["W3"], s_length) for j in range(3)]
    for section in catalog:
        for sq in section.squares:
            for i in (0, 1):
                p, r = sq.boundary[i], sq.boundary[4 + i]
                if not 1 <= p <= W1:
                    raise ValueError(f"Section {section.id}: letter index {p} outside 1..{W1}")
                letter = letters[p - 1]
                if letter.is_degenerate or letter.is_minor:
                    raise ValueError(f"Section {section.id}: letter {p} ({letter}) is degenerate or minor")
                if not 0 <= r < letter.length:
                    raise ValueError(f"Section {section.id}: r = {r} outside 0..{letter.length - 1}")
        advance = section.advance()
        for i, p in enumerate(section.letters):
            if advance[i] != section.extent[i] * letters[p - 1].length:
                raise ValueError(f"Section {section.id}: side {i} consumes {advance[i]} syllables, extent {section.extent}")
        if limits is not None and section.arc_count > limits[section.type]:
            raise ValueError(f"Section {section.id}: {section.arc_count} arcs exceed M({section.type}) = {limits[section.type]}")


def build_zgraph(
    catalog: Sequence[CorridorSection], z: Optional[Sequence[ExpWord]] = None, s_length: Optional[int] = None
) -> ZGraph:
    """Z-graph ``G(z)`` of ``catalog``; the catalog is checked against ``z`` when given."""
    if z is not None:
        check_catalog(catalog, z, s_length)
    G = ZGraph(catalog)
    logger.info("Z-graph over %d sections, %d markings", len(G.catalog), len(G.universe))
    return G


# Z-paths --------------------------------------------------------------------


@dataclass(frozen=True)
class PathSubgraph:
    """Edges of a simple directed path from ``start`` plus loops on its vertices."""

    start: Vertex
    edges: Tuple[ZEdge, ...] = ()

    @property
    def path(self) -> Tuple[ZEdge, ...]:
        return tuple(e for e in self.edges if not e.is_loop)

    @property
    def loops(self) -> Tuple[ZEdge, ...]:
        return tuple(e for e in self.edges if e.is_loop)

    @property
    def vertices(self) -> List[Vertex]:
        return [self.start] + [e.target for e in self.path]

    @property
    def terminal(self) -> Vertex:
        return self.vertices[-1]


def path_subgraphs(G: ZGraph, start: Vertex) -> Iterator[PathSubgraph]:
    """Path-subgraphs of all Z-paths starting at ``start``.

    Every non-loop edge strictly enlarges its source, so simple paths are
    exactly the non-loop edge sequences and the enumeration is finite.
    """
    start = frozenset(start)
    seen = set()

    def walk(vertex: Vertex, path: Tuple[ZEdge, ...]) -> Iterator[Tuple[ZEdge, ...]]:
        yield path
        for e in G.edges_from(vertex):
            if not e.is_loop:
                yield from walk(e.target, path + (e,))

    for path in walk(start, ()):
        vertices = [start] + [e.target for e in path]
        loops = [e for v in vertices for e in G.edges_from(v) if e.is_loop]
        for size in range(len(loops) + 1):
            for chosen in combinations(loops, size):
                key = frozenset(path + chosen)
                if key in seen:
                    continue
                seen.add(key)
                yield PathSubgraph(start, path + chosen)


def is_z_path(path: Sequence[ZEdge], start: Vertex) -> bool:
    """A connected directed path from ``start`` whose only cycles are loops."""
    current = frozenset(start)
    visited = {current}
    for e in path:
        if e.source != current:
            return False
        if not e.is_loop:
            if e.target in visited:
                return False
            visited.add(e.target)
        current = e.target
    return True


def weighting(path: Sequence[ZEdge]) -> Counter:
    """``w_p``: how often each edge occurs in ``path``."""
    return Counter(path)


# Parameter systems and transport --------------------------------------------


def _zeta_sum(G: ZGraph, q: int, weights: Mapping[ZEdge, LinPoly]) -> LinPoly:
    total = LinPoly.const(0)
    for e, n in weights.items():
        total = total + LinPoly.coerce(n) * zeta(G.section(e.label), q)
    return total


def transport_labels(
    m: Mapping[int, int],
    weights: Mapping[ZEdge, int],
    G: ZGraph,
    z: Sequence[ExpWord],
    inverse: bool = False,
) -> Dict[int, int]:
    """Boundary exponents after Z-insertion along a path with the given weights.

    ``m_q`` becomes ``m_q + l(h_q)·Σ n_i·ζ(q, s_i)``; with ``inverse`` the sum
    is subtracted, undoing the insertion.

    Raises:
        ValueError: If a weight is negative
    """
    if any(n < 0 for n in weights.values()):
        raise ValueError(f"Path weights must be nonnegative, got {dict(weights)}")
    letters = letters_of(z)
    sign = -1 if inverse else 1
    out = {}
    for q, value in m.items():
        shift = sum(n * zeta(G.section(e.label), q) for e, n in weights.items())
        out[q] = value + sign * letters[q - 1].length * shift
    return out


def homogeneous_ids(z: Sequence[ExpWord], first_parameter: int = 1) -> Dict[int, int]:
    """Letter index to the parameter id that the homogeneous system gives it."""
    return {q: first_parameter + q - 1 for q, letter in enumerate(letters_of(z), start=1) if letter.is_proper}


def section_system(
    alpha_s: Retraction,
    P: PathSubgraph,
    z: Sequence[ExpWord],
    G: ZGraph,
    first_parameter: int = 1,
    pool: Optional[ParameterPool] = None,
) -> Tuple[ParamSystem, Dict[ZEdge, int]]:
    """``L(Γ_s, P)`` and the fresh parameter ``λ'`` of each edge of ``P``.

    For every proper letter ``(h_q, f_q)``:
    ``f_q = α_s(λ_q) + l(h_q)·Σ λ'_i·ζ(q, s_i)``, with ``λ'_i >= 1`` and
    ``λ'_i = 1`` on non-loop edges.
    """
    hom = homogeneous_ids(z, first_parameter)
    letters = letters_of(z)
    if pool is None:
        used = set(hom.values()) | set(alpha_s.assignment)
        for u in z:
            used |= u.parameters
        pool = ParameterPool.above(used)
    lam: Dict[ZEdge, int] = {}
    system = ParamSystem()
    for e in P.edges:
        lam[e] = pool.fresh()
        system = system.with_inequality(LinPoly.param(lam[e]) - 1)
        if not e.is_loop:
            system = system.with_equation(LinPoly.param(lam[e]) - 1)
    weights = {e: LinPoly.param(pid) for e, pid in lam.items()}
    for q, pid in hom.items():
        letter = letters[q - 1]
        rhs = LinPoly.const(alpha_s[pid]) + _zeta_sum(G, q, weights) * letter.length
        system = system.with_equation(letter.exponent - rhs)
    return system, lam


def basic_reduce_check(
    alpha_s: Retraction,
    P: PathSubgraph,
    L: ParamSystem,
    z: Sequence[ExpWord],
    G: ZGraph,
    first_parameter: int = 1,
    pool: Optional[ParameterPool] = None,
    seed: Optional[Retraction] = None,
) -> Optional[Retraction]:
    """A solution of ``L ∪ L(Γ_s, P)``, or None.

    With ``seed`` every parameter of ``z`` and ``L`` is fixed to its seeded value.
    """
    if pool is None:
        used = set(L.parameters) | set(alpha_s.assignment) | set(homogeneous_ids(z, first_parameter).values())
        for u in z:
            used |= u.parameters
        pool = ParameterPool.above(used)
    system, _ = section_system(alpha_s, P, z, G, first_parameter, pool)
    combined = L.union(system)
    if seed is not None:
        fixed = set(L.parameters)
        for u in z:
            fixed |= u.parameters
        for pid in sorted(fixed):
            combined = combined.with_equation(LinPoly.param(pid) - seed[pid])
    alpha0 = is_consistent(combined)
    logger.debug("basic reduce along %d edges: %s", len(P.edges), alpha0)
    return alpha0


if __name__ == "__main__":
    C = type0_corridor((1, 2), (2, 2), 7)
    print("find_cancellable:", find_cancellable(C))
    reduced, steps = exhaust_cancellation(C)
    print("width", C.width, "->", reduced.width, "deltas", [s.deltas for s in steps])
    L1 = type0_section((1, 2), (2, 2))
    G = build_zgraph([L1])
    start = frozenset({L1.left_marking})
    print("edges from start:", [(e.label, e.is_loop) for e in G.edges_from(start)])
    print("path-subgraphs:", sum(1 for _ in path_subgraphs(G, start)))
