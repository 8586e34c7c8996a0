"""Combinatorial pictures on compact surfaces.

A picture is stored as incidence data rather than as an embedding:

- ``Vertex``: the cyclic list of arc ends around the vertex, one corner label
  between consecutive ends (``labels[i]`` sits between ``ends[i]`` and
  ``ends[i+1]``) and a sign ``ε``.
- ``Arc``: an id, a confluence sign ``δ`` and a closed-curve flag.
- ``Boundary``: a boundary component of the surface as a cyclic token list of
  arc ends, labelled pieces and partition points, plus one prime label per
  boundary interval.
- ``Region``: Euler characteristic, factor, the corner cycles of its boundary
  components (with reading signs) and the arcs on its sides.

Corners are addressed by ``CornerRef``: ``('v', vertex, i)`` for vertex
corners and ``('b', boundary, j)`` for the ``j``-th boundary corner.

Closed arcs carry no corners. They count in ``t(Δ)`` and ``ε(Δ)`` but not
in the Euler characteristic identity ``χ(Σ) = |V| - |A| + Σ χ(Δ)``.

Usage:
    from qexp.pictures import fan_picture, validate, region_stats

    picture, L, alpha = fan_picture(relator, signs=(1,))
    report = validate(picture, alpha)
    report.valid
"""

import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import igcd

from qexp.decide import decide_bounded
from qexp.equations import Environment, ExpEquation
from qexp.exponential import ExpLetter, ExpWord
from qexp.params import LinPoly, ParamSystem, Retraction, implies_congruence
from qexp.quadwords import Letter, QuadSystem, standard_q
from qexp.words import FreeProduct, Relator, Word, cyclic_permutations, rotate

logger = logging.getLogger(__name__)

DEFAULT_P2_LENGTH = 2


# Model ----------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceType:
    """Connected compact surface with ``n`` boundary components, ``t`` handles, ``p`` cross-caps."""

    n: int
    t: int = 0
    p: int = 0

    @property
    def chi(self) -> int:
        return 2 - 2 * self.t - self.p - self.n

    @property
    def orientable(self) -> bool:
        return self.p == 0


@dataclass(frozen=True)
class Vertex:
    id: str
    ends: Tuple[str, ...]
    labels: Tuple[Word, ...]
    sign: int = 1
    component: int = 0

    def label(self, start: int = 0) -> Tuple:
        """Syllables read once around the vertex from end ``start``."""
        out = []
        for lab in self.labels[start:] + self.labels[:start]:
            out.extend(lab.syllables)
        return tuple(out)


@dataclass(frozen=True)
class Arc:
    id: str
    delta: int = 1
    closed: bool = False
    component: int = 0


@dataclass(frozen=True)
class ArcEnd:
    arc: str


@dataclass(frozen=True)
class Piece:
    label: Word


@dataclass(frozen=True)
class Point:
    pass


Token = Union[ArcEnd, Piece, Point]


@dataclass(frozen=True)
class Boundary:
    """A boundary component of the surface, read in the direction of its orientation."""

    id: str
    tokens: Tuple[Token, ...]
    letters: Tuple[ExpLetter, ...] = ()
    component: int = 0


class CornerRef(NamedTuple):
    kind: str
    owner: str
    index: int

    def __str__(self) -> str:
        return f"{self.kind}:{self.owner}:{self.index}"


Cycle = Tuple[Tuple[CornerRef, int], ...]


@dataclass(frozen=True)
class Region:
    id: str
    chi: int
    factor: str
    cycles: Tuple[Cycle, ...]
    sides: Tuple[str, ...]
    component: int = 0
    orientable: bool = True

    @property
    def corners(self) -> List[CornerRef]:
        return [ref for cycle in self.cycles for ref, _ in cycle]


@dataclass(frozen=True, eq=False)
class Picture:
    product: FreeProduct
    surfaces: Tuple[SurfaceType, ...]
    vertices: Dict[str, Vertex] = field(default_factory=dict)
    arcs: Dict[str, Arc] = field(default_factory=dict)
    boundaries: Dict[str, Boundary] = field(default_factory=dict)
    regions: Dict[str, Region] = field(default_factory=dict)
    relator: Optional[Relator] = None
    L: ParamSystem = field(default_factory=ParamSystem)

    # Derived incidence -----------------------------------------------------

    @property
    def chi(self) -> int:
        return sum(s.chi for s in self.surfaces)

    @cached_property
    def arc_ends(self) -> Dict[str, List[Tuple[str, str, int]]]:
        """Arc id to its ends as ``(kind, owner, position)``."""
        ends: Dict[str, List[Tuple[str, str, int]]] = {a: [] for a in self.arcs}
        for v in self.vertices.values():
            for pos, a in enumerate(v.ends):
                ends.setdefault(a, []).append(("v", v.id, pos))
        for b in self.boundaries.values():
            for pos, token in enumerate(b.tokens):
                if isinstance(token, ArcEnd):
                    ends.setdefault(token.arc, []).append(("b", b.id, pos))
        return ends

    def meets_boundary(self, arc_id: str) -> bool:
        return any(kind == "b" for kind, _, _ in self.arc_ends.get(arc_id, []))

    def is_type_one(self, arc_id: str) -> bool:
        """Not closed and both ends on the surface boundary."""
        ends = self.arc_ends.get(arc_id, [])
        return not self.arcs[arc_id].closed and len(ends) == 2 and all(k == "b" for k, _, _ in ends)

    def arc_component(self, arc_id: str) -> int:
        ends = self.arc_ends.get(arc_id, [])
        if not ends:
            return self.arcs[arc_id].component
        kind, owner, _ = ends[0]
        return self.vertices[owner].component if kind == "v" else self.boundaries[owner].component

    @cached_property
    def boundary_corner_spans(self) -> Dict[str, List[List[int]]]:
        """Token positions of each boundary corner, in corner order."""
        spans = {}
        for b in self.boundaries.values():
            n = len(b.tokens)
            arcs = [i for i, t in enumerate(b.tokens) if isinstance(t, ArcEnd)]
            if not arcs:
                spans[b.id] = [list(range(n))]
                continue
            corners = []
            for j, start in enumerate(arcs):
                stop = arcs[(j + 1) % len(arcs)]
                span = []
                k = (start + 1) % n
                while k != stop:
                    span.append(k)
                    k = (k + 1) % n
                corners.append(span)
            spans[b.id] = corners
        return spans

    def corner_refs(self) -> List[CornerRef]:
        refs = [CornerRef("v", v.id, i) for v in self.vertices.values() for i in range(len(v.labels))]
        for bid, corners in self.boundary_corner_spans.items():
            refs.extend(CornerRef("b", bid, j) for j in range(len(corners)))
        return refs

    def corner_label(self, ref: CornerRef) -> Word:
        if ref.kind == "v":
            return self.vertices[ref.owner].labels[ref.index]
        b = self.boundaries[ref.owner]
        out = self.product.identity
        for pos in self.boundary_corner_spans[ref.owner][ref.index]:
            token = b.tokens[pos]
            if isinstance(token, Piece):
                out = out * token.label
        return out

    def corner_arcs(self, ref: CornerRef) -> Tuple[str, str]:
        """The two arcs meeting at a vertex corner."""
        v = self.vertices[ref.owner]
        return v.ends[ref.index], v.ends[(ref.index + 1) % len(v.ends)]

    @cached_property
    def region_of(self) -> Dict[CornerRef, str]:
        found = {}
        for region in self.regions.values():
            for ref in region.corners:
                found.setdefault(ref, region.id)
        return found

    # Boundary partitions ---------------------------------------------------

    def points(self, bid: str) -> List[int]:
        return [i for i, t in enumerate(self.boundaries[bid].tokens) if isinstance(t, Point)]

    def piece_interval(self, bid: str, pos: int) -> Optional[int]:
        points = self.points(bid)
        if not points:
            return None
        return (bisect_left(points, pos) - 1) % len(points)

    def intervals(self, bid: str) -> List[List[Word]]:
        """Piece labels of each boundary interval, in reading order."""
        b = self.boundaries[bid]
        points = self.points(bid)
        n = len(b.tokens)
        out = []
        for j, start in enumerate(points):
            stop = points[(j + 1) % len(points)]
            pieces = []
            k = (start + 1) % n
            while k != stop:
                if isinstance(b.tokens[k], Piece):
                    pieces.append(b.tokens[k].label)
                k = (k + 1) % n
            out.append(pieces)
        return out

    def corner_intervals(self, ref: CornerRef) -> Optional[Tuple[int, int]]:
        """``(i, k)``: the boundary corner meets ``k`` intervals starting at ``i``."""
        b = self.boundaries[ref.owner]
        points = self.points(ref.owner)
        if not points:
            return None
        span = self.boundary_corner_spans[ref.owner][ref.index]
        pieces = [pos for pos in span if isinstance(b.tokens[pos], Piece)]
        if not pieces:
            return None
        first = self.piece_interval(ref.owner, pieces[0])
        if len(span) == len(b.tokens):
            return first, len(points)
        interior = 0
        for idx, pos in enumerate(span):
            if isinstance(b.tokens[pos], Point) and 0 < idx < len(span) - 1:
                if isinstance(b.tokens[span[idx - 1]], Piece) and isinstance(b.tokens[span[idx + 1]], Piece):
                    interior += 1
        return first, interior + 1


# Region statistics ----------------------------------------------------------


@dataclass(frozen=True)
class RegionStats:
    t: int
    beta: int
    rho: int
    gamma: int
    epsilon: int
    chi: int
    collapsible: bool
    cornered_sides: int = 0

    @property
    def closed_sides(self) -> int:
        return self.t - self.cornered_sides


def region_stats(picture: Picture, region_id: str) -> RegionStats:
    """``t``, ``β``, ``ρ``, ``γ``, ``ε`` and collapsibility of a region.

    Raises:
        ValueError: If the region is unknown
    """
    if region_id not in picture.regions:
        raise ValueError(f"Unknown region '{region_id}'")
    region = picture.regions[region_id]
    corners = region.corners
    beta = sum(1 for ref in corners if ref.kind == "b")
    rho = sum(1 for ref in corners if ref.kind == "v")
    gamma = sum(
        1 for ref in corners
        if ref.kind == "b" and not any(isinstance(t, ArcEnd) for t in picture.boundaries[ref.owner].tokens)
    )
    epsilon = sum(
        1 for a in region.sides if picture.arcs[a].closed or picture.is_type_one(a)
    )
    t = len(region.sides)
    closed = sum(1 for a in region.sides if picture.arcs[a].closed)
    return RegionStats(
        t=t,
        beta=beta,
        rho=rho,
        gamma=gamma,
        epsilon=epsilon,
        chi=region.chi,
        collapsible=region.chi == 1 and t == 2,
        cornered_sides=t - closed,
    )


# Validation -----------------------------------------------------------------


@dataclass
class ValidationReport:
    """Structural errors, picture-axiom violations and undecided region checks."""

    errors: List[str] = field(default_factory=list)
    undecided: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors

    @property
    def status(self) -> str:
        if self.errors:
            return "invalid"
        return "undecided" if self.undecided else "valid"

    def as_dict(self) -> Dict:
        return {"status": self.status, "errors": list(self.errors), "undecided": list(self.undecided)}


def _check_structure(picture: Picture, report: ValidationReport) -> bool:
    errors = report.errors
    ok_before = len(errors)
    for c in [v.component for v in picture.vertices.values()] + [
        b.component for b in picture.boundaries.values()
    ] + [r.component for r in picture.regions.values()]:
        if not 0 <= c < len(picture.surfaces):
            errors.append(f"component {c} is not a surface component")
    for v in picture.vertices.values():
        if len(v.ends) != len(v.labels):
            errors.append(f"vertex {v.id}: {len(v.ends)} ends but {len(v.labels)} corner labels")
        if v.sign not in (1, -1):
            errors.append(f"vertex {v.id}: sign must be ±1")
    for arc_id, ends in picture.arc_ends.items():
        if arc_id not in picture.arcs:
            errors.append(f"arc {arc_id}: end refers to an undeclared arc")
            continue
        expected = 0 if picture.arcs[arc_id].closed else 2
        if len(ends) != expected:
            errors.append(f"arc {arc_id}: {len(ends)} ends, expected {expected}")
    for b in picture.boundaries.values():
        tokens = b.tokens
        n = len(tokens)
        if not any(isinstance(t, Piece) for t in tokens):
            errors.append(f"boundary {b.id}: no labelled piece")
        for i, token in enumerate(tokens):
            nxt = tokens[(i + 1) % n]
            if n > 1 and isinstance(token, Piece) and isinstance(nxt, Piece):
                errors.append(f"boundary {b.id}: adjacent pieces at token {i}")
            if n > 1 and isinstance(token, ArcEnd) and isinstance(nxt, ArcEnd):
                errors.append(f"boundary {b.id}: arc ends with no corner between them at token {i}")
            if isinstance(token, Point) and isinstance(nxt, Point):
                errors.append(f"boundary {b.id}: adjacent partition points at token {i}")
        if len(picture.points(b.id)) != len(b.letters):
            errors.append(
                f"boundary {b.id}: {len(picture.points(b.id))} partition points for {len(b.letters)} prime labels"
            )
    for c, surface in enumerate(picture.surfaces):
        count = sum(1 for b in picture.boundaries.values() if b.component == c)
        if count != surface.n:
            errors.append(f"component {c}: {count} boundary components, surface type needs {surface.n}")

    corners = set(picture.corner_refs())
    seen: Dict[CornerRef, str] = {}
    for region in picture.regions.values():
        for ref in region.corners:
            if ref not in corners:
                errors.append(f"region {region.id}: unknown corner {ref}")
            elif ref in seen:
                errors.append(f"corner {ref} lies in regions {seen[ref]} and {region.id}")
            else:
                seen[ref] = region.id
        for arc_id in region.sides:
            if arc_id not in picture.arcs:
                errors.append(f"region {region.id}: unknown arc {arc_id}")
    for ref in sorted(corners - set(seen)):
        errors.append(f"corner {ref} lies in no region")
    side_count: Dict[str, int] = {a: 0 for a in picture.arcs}
    for region in picture.regions.values():
        for arc_id in region.sides:
            if arc_id in side_count:
                side_count[arc_id] += 1
    for arc_id, count in side_count.items():
        if count != 2:
            errors.append(f"arc {arc_id}: {count} region sides, expected 2")

    if len(errors) == ok_before:
        for c, surface in enumerate(picture.surfaces):
            vs = sum(1 for v in picture.vertices.values() if v.component == c)
            arcs = sum(
                1 for a in picture.arcs
                if not picture.arcs[a].closed and picture.arc_component(a) == c
            )
            regions = sum(r.chi for r in picture.regions.values() if r.component == c)
            if vs - arcs + regions != surface.chi:
                errors.append(
                    f"component {c}: |V| - |A| + Σχ(Δ) = {vs - arcs + regions} but χ = {surface.chi}"
                )
    return len(errors) == ok_before


def _check_vertices(picture: Picture, report: ValidationReport) -> None:
    s = picture.relator
    if picture.vertices and s is None:
        report.errors.append("picture has vertices but no relator")
        return
    for v in picture.vertices.values():
        target = s.s if v.sign == 1 else s.s.inverse()
        if len(v.ends) != len(target):
            report.errors.append(f"P1 vertex {v.id}: degree {len(v.ends)} but l(s) = {len(target)}")
            continue
        if v.label() not in cyclic_permutations(target):
            report.errors.append(f"P1 vertex {v.id}: label is not a cyclic permutation of s^{v.sign}")


def region_genus(region: Region) -> Optional[Tuple[int, int, int]]:
    """``(n, t, p)`` of the region, or None if ``χ`` and orientability disagree."""
    n = len(region.cycles)
    h = 2 - n - region.chi
    if region.orientable:
        if h < 0 or h % 2:
            return None
        return n, h // 2, 0
    if h < 1:
        return None
    return n, 0, h


def region_labels(picture: Picture, region: Region) -> List[Word]:
    labels = []
    for cycle in region.cycles:
        out = picture.product.identity
        for ref, sign in cycle:
            lab = picture.corner_label(ref)
            out = out * (lab if sign == 1 else lab.inverse())
        labels.append(out)
    return labels


def _genus_equation_status(picture: Picture, region: Region, labels: List[Word], length_bound: int) -> str:
    """Solvability of the region's genus equation in its factor: sat, unsat or unknown."""
    n, t, p = region_genus(region)
    group = picture.product.factor(region.factor)
    if group.cyclic_order is not None:
        total = sum(group.exponent_sum(e) for w in labels for _, e in w)
        modulus = group.cyclic_order
        if p:
            modulus = igcd(2, modulus)
        if modulus == 0:
            return "sat" if total == 0 else "unsat"
        return "sat" if total % modulus == 0 else "unsat"
    if n + t + p == 0:
        return "sat"
    env = Environment(picture.product, {"0": frozenset({region.factor})})
    beta = {Letter("d", i + 1): ExpWord.of(ExpLetter.degenerate(w)) for i, w in enumerate(labels)}
    Q = ExpEquation(env, QuadSystem([standard_q(0, n, t, p)]), beta, ParamSystem(), ("0",))
    bound = 1 if group.backend == "finite-multiplication-table" else length_bound
    verdict = decide_bounded(Q, 0, bound)
    if verdict.status == "sat":
        return "sat"
    return "unsat" if group.backend == "finite-multiplication-table" else "unknown"


def _check_regions(picture: Picture, report: ValidationReport, length_bound: int) -> None:
    for region in picture.regions.values():
        try:
            picture.product.factor(region.factor)
        except ValueError as e:
            report.errors.append(f"region {region.id}: {e}")
            continue
        if region_genus(region) is None:
            report.errors.append(
                f"region {region.id}: χ = {region.chi} with {len(region.cycles)} boundary components "
                f"is not an {'orientable' if region.orientable else 'non-orientable'} surface"
            )
            continue
        for ref in region.corners:
            if not picture.corner_label(ref).support <= {region.factor}:
                report.errors.append(f"P2 region {region.id}: corner {ref} is not labelled in {region.factor}")
                break
        else:
            status = _genus_equation_status(picture, region, region_labels(picture, region), length_bound)
            if status == "unsat":
                report.errors.append(f"P2 region {region.id}: genus equation has no solution in {region.factor}")
            elif status == "unknown":
                report.undecided.append(f"P2 region {region.id}: no witness within length {length_bound}")
    sides: Dict[str, List[str]] = {}
    for region in picture.regions.values():
        for arc_id in region.sides:
            sides.setdefault(arc_id, []).append(region.factor)
    for arc_id, factors in sides.items():
        if len(factors) == 2 and factors[0] == factors[1]:
            report.errors.append(f"P3 arc {arc_id}: both sides lie in {factors[0]}-regions")


def admits(letter: ExpLetter, length: int, L: Optional[ParamSystem], alpha: Retraction) -> bool:
    """The three admissibility clauses for one boundary interval."""
    d = letter.length
    if d == 1:
        return length == 1
    if letter.is_degenerate:
        return length == d
    if d == 0:
        return length == 0
    if L is not None and not L.is_empty():
        k = implies_congruence(L, letter.exponent, d)
    else:
        k = alpha(letter.exponent) % d
    return k is not None and length >= 0 and (length - k) % d == 0


def _check_boundaries(picture: Picture, alpha: Retraction, report: ValidationReport) -> None:
    for b in picture.boundaries.values():
        if len(picture.points(b.id)) != len(b.letters):
            continue
        for j, (pieces, letter) in enumerate(zip(picture.intervals(b.id), b.letters)):
            if not admits(letter, len(pieces), picture.L, alpha):
                report.errors.append(
                    f"boundary {b.id} interval {j}: length {len(pieces)} does not admit {letter}"
                )
                continue
            label = picture.product.identity
            for w in pieces:
                label = label * w
            if label != letter.evaluate(alpha):
                report.errors.append(
                    f"boundary {b.id} interval {j}: label {label} differs from {letter.evaluate(alpha)}"
                )


def validate(picture: Picture, alpha: Retraction, length_bound: int = DEFAULT_P2_LENGTH) -> ValidationReport:
    """Check the picture axioms and the boundary partition.

    Structural consistency is checked first; axiom checks only run on a
    structurally consistent picture.

    Args:
        picture: Picture to check
        alpha: Retraction evaluating the prime labels
        length_bound: Word length bound for region equations over free factors

    Returns:
        ValidationReport with located errors
    """
    report = ValidationReport()
    if not picture.L.is_empty() and not picture.L.satisfied_by(alpha):
        report.errors.append(f"alpha {alpha} does not satisfy the parameter system")
    if _check_structure(picture, report):
        _check_vertices(picture, report)
        _check_regions(picture, report, length_bound)
        _check_boundaries(picture, alpha, report)
    logger.info("picture validation: %s (%d errors)", report.status, len(report.errors))
    return report


# Edges, minimalistic and reduced pictures -----------------------------------


@dataclass(frozen=True)
class EdgeClass:
    arcs: Tuple[str, ...]
    boundary: bool
    type_one: bool

    @property
    def width(self) -> int:
        return len(self.arcs)

    @property
    def representative(self) -> str:
        return min(self.arcs)


def edge_classes(picture: Picture) -> List[EdgeClass]:
    """Classes of parallel arcs.

    Two arcs are parallel when they are the two sides of a disk region with
    exactly two corners, or the two closed sides of an annulus region with no
    corners.
    """
    parent = {a: a for a in picture.arcs}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for region in picture.regions.values():
        distinct = sorted(set(region.sides))
        if len(region.sides) != 2 or len(distinct) != 2:
            continue
        a, b = distinct
        corners = len(region.corners)
        if region.chi == 1 and corners == 2:
            parent[find(a)] = find(b)
        elif region.chi == 0 and corners == 0 and picture.arcs[a].closed and picture.arcs[b].closed:
            parent[find(a)] = find(b)
    groups: Dict[str, List[str]] = {}
    for a in picture.arcs:
        groups.setdefault(find(a), []).append(a)
    classes = []
    for arcs in groups.values():
        arcs = tuple(sorted(arcs))
        classes.append(
            EdgeClass(
                arcs=arcs,
                boundary=any(picture.meets_boundary(a) for a in arcs),
                type_one=all(picture.is_type_one(a) for a in arcs),
            )
        )
    return sorted(classes, key=lambda c: c.representative)


def has_closed_arc(picture: Picture) -> bool:
    return any(a.closed for a in picture.arcs.values())


def genus_region_violations(picture: Picture) -> List[str]:
    """Regions with ``χ(Δ) < χ(Σ_Δ)``."""
    return [
        r.id for r in picture.regions.values()
        if r.chi < picture.surfaces[r.component].chi
    ]


def minimalistic_violations(picture: Picture) -> List[str]:
    out = [f"closed arc {a.id}" for a in picture.arcs.values() if a.closed]
    out += [f"region {rid} has χ below its surface" for rid in genus_region_violations(picture)]
    if picture.relator is not None:
        limit = len(picture.relator.r) - 2
        for edge in edge_classes(picture):
            if not edge.boundary and edge.width > limit:
                out.append(f"interior edge {edge.representative} has width {edge.width} > {limit}")
    return out


def is_minimalistic(picture: Picture) -> bool:
    return not minimalistic_violations(picture)


def cancelling_pairs(picture: Picture) -> List[Tuple[str, str, str]]:
    """``(u1, u2, arc)`` for distinct vertices that cancel along ``arc``."""
    found = []
    for arc_id, ends in picture.arc_ends.items():
        if len(ends) != 2 or any(kind != "v" for kind, _, _ in ends):
            continue
        (_, u1, p1), (_, u2, p2) = ends
        if u1 == u2:
            continue
        v1, v2 = picture.vertices[u1], picture.vertices[u2]
        delta = picture.arcs[arc_id].delta
        if delta * v1.sign * v2.sign != -1:
            continue
        w1 = picture.product.word(v1.label(p1))
        w2 = picture.product.word(v2.label(p2))
        if (w1 * (w2 if delta == 1 else w2.inverse())).is_identity():
            found.append((u1, u2, arc_id))
    return found


def is_reduced(picture: Picture) -> bool:
    return not cancelling_pairs(picture)


# Builders -------------------------------------------------------------------


def single_vertex_disk(relator: Relator, sign: int = 1, minor: bool = False):
    """One vertex on a disk with every arc running to the boundary."""
    return fan_picture(relator, (sign,), minor=minor)


def fan_picture(
    relator: Relator,
    signs: Sequence[int] = (1,),
    minor: bool = False,
    extra_boundaries: int = 0,
    genus: int = 0,
):
    """Vertices whose arcs all run to one boundary component.

    Each vertex contributes ``l(s) - 1`` collapsible regions. One further
    region meets every vertex and carries the topology of the surface
    (``genus`` handles and ``extra_boundaries`` unpartitioned boundary
    components).

    With ``minor`` every piece is its own interval with a degenerate one-letter
    prime label. Otherwise each vertex contributes one interval with prime
    label ``(r^{±1}, λ_v)``, ``λ_v ≡ 0 mod l(r)`` and ``α(λ_v) = l(s)``.

    Returns:
        ``(picture, L, alpha)``
    """
    if not signs:
        raise ValueError("fan_picture needs at least one vertex")
    product = relator.s.product
    size = len(relator.s)
    surface = SurfaceType(1 + extra_boundaries, genus, 0)
    vertices: Dict[str, Vertex] = {}
    arcs: Dict[str, Arc] = {}
    tokens: List[Token] = []
    letters: List[ExpLetter] = []
    regions: Dict[str, Region] = {}
    L = ParamSystem()
    values = {}
    big_cycle: List[Tuple[CornerRef, int]] = []
    big_sides: List[str] = []
    for v, sign in enumerate(signs):
        word = relator.s if sign == 1 else rotate(relator.s.inverse(), 1)
        base = relator.r if sign == 1 else rotate(relator.r.inverse(), 1)
        labels = tuple(word[i:i + 1] for i in range(size))
        ends = tuple(f"e{v + 1}_{i + 1}" for i in range(size))
        vid = f"v{v + 1}"
        vertices[vid] = Vertex(vid, ends, labels, sign)
        if not minor:
            tokens.append(Point())
            lam = LinPoly.param(v + 1)
            letters.append(ExpLetter(base, lam))
            L = L.with_congruence(lam, len(relator.r)).with_strict(lam)
            values[v + 1] = size
        for i in range(size):
            arcs[ends[i]] = Arc(ends[i])
            if minor:
                tokens.append(Point())
                letters.append(ExpLetter.degenerate(labels[i]))
            tokens.append(ArcEnd(ends[i]))
            tokens.append(Piece(labels[i]))
            corner_b = CornerRef("b", "beta1", v * size + i)
            corner_v = CornerRef("v", vid, i)
            if i < size - 1:
                rid = f"{vid}_r{i + 1}"
                regions[rid] = Region(
                    rid, 1, labels[i].syllables[0][0],
                    (((corner_v, 1), (corner_b, -1)),), (ends[i], ends[i + 1]),
                )
            else:
                big_cycle += [(corner_v, 1), (corner_b, -1)]
                big_sides += [ends[size - 1], ends[0]]
    boundaries = {"beta1": Boundary("beta1", tuple(tokens), tuple(letters))}
    cycles = [tuple(big_cycle)]
    for k in range(extra_boundaries):
        bid = f"beta{k + 2}"
        boundaries[bid] = Boundary(bid, (Piece(product.identity),))
        cycles.append(((CornerRef("b", bid, 0), -1),))
    factor = vertices["v1"].labels[-1].syllables[0][0]
    regions["outer"] = Region("outer", surface.chi, factor, tuple(cycles), tuple(big_sides))
    picture = Picture(
        product, (surface,), vertices, arcs, boundaries, regions, relator, L
    )
    return picture, L, Retraction(values)


def corridor_picture(r: Word, widths: Sequence[int] = (4,)):
    """Annuli crossed by parallel type-I arcs, one annulus per width.

    The outer boundary of each annulus reads ``r^(k/l(r))`` and the inner one
    its inverse. Consecutive arcs bound a disk region with one corner on each
    boundary, so every annulus carries a single type-0 corridor of width ``k``.

    Returns:
        ``(picture, L, alpha)``

    Raises:
        ValueError: If ``l(r) < 2`` or a width is not a positive multiple of ``l(r)``
    """
    size = len(r)
    if size < 2 or not r.is_cyclically_reduced():
        raise ValueError(f"Corridor base {r} must be cyclically reduced of length at least 2")
    product = r.product
    surfaces = []
    arcs: Dict[str, Arc] = {}
    boundaries: Dict[str, Boundary] = {}
    regions: Dict[str, Region] = {}
    L = ParamSystem()
    values = {}
    for c, k in enumerate(widths):
        if k <= 0 or k % size:
            raise ValueError(f"Corridor width {k} is not a positive multiple of l(r) = {size}")
        h = r ** (k // size)
        ids = [f"a{c + 1}_{i + 1}" for i in range(k)]
        outer, inner = f"beta{2 * c + 1}", f"beta{2 * c + 2}"
        outer_tokens: List[Token] = [Point()]
        for i in range(k):
            arcs[ids[i]] = Arc(ids[i], component=c)
            outer_tokens += [ArcEnd(ids[i]), Piece(h[i:i + 1])]
        inner_tokens: List[Token] = [Point(), ArcEnd(ids[0]), Piece(h[k - 1:k].inverse())]
        for i in range(k - 1, 0, -1):
            inner_tokens += [ArcEnd(ids[i]), Piece(h[i - 1:i].inverse())]
        lam, mu = LinPoly.param(2 * c + 1), LinPoly.param(2 * c + 2)
        boundaries[outer] = Boundary(outer, tuple(outer_tokens), (ExpLetter(r, lam),), c)
        boundaries[inner] = Boundary(inner, tuple(inner_tokens), (ExpLetter(r.inverse(), mu),), c)
        for f in (lam, mu):
            L = L.with_congruence(f, size).with_strict(f)
        values[2 * c + 1] = values[2 * c + 2] = k
        for i in range(1, k + 1):
            rid = f"c{c + 1}_r{i}"
            cycle = ((CornerRef("b", outer, i - 1), 1), (CornerRef("b", inner, (k - i) % k), 1))
            regions[rid] = Region(rid, 1, h[i - 1][0], (cycle,), (ids[i - 1], ids[i % k]), c)
        surfaces.append(SurfaceType(2))
    picture = Picture(product, tuple(surfaces), {}, arcs, boundaries, regions, None, L)
    return picture, L, Retraction(values)


def dipole_picture(relator: Relator) -> Picture:
    """Two mirror vertices on a sphere joined by ``l(s)`` arcs."""
    product = relator.s.product
    s = relator.s
    size = len(s)
    arcs = {f"e{i + 1}": Arc(f"e{i + 1}") for i in range(size)}
    u_ends = tuple(f"e{i + 1}" for i in range(size))
    v_ends = (u_ends[0],) + tuple(reversed(u_ends[1:]))
    u = Vertex("u", u_ends, tuple(s[i:i + 1] for i in range(size)), 1)
    inv = s.inverse()
    v = Vertex("v", v_ends, tuple(inv[i:i + 1] for i in range(size)), -1)
    regions = {}
    for i in range(1, size + 1):
        v_index = 0 if i == size else size - i
        cycle = ((CornerRef("v", "u", i - 1), 1), (CornerRef("v", "v", v_index), 1))
        sides = (u_ends[i - 1], u_ends[i % size])
        regions[f"r{i}"] = Region(f"r{i}", 1, s[i - 1][0], (cycle,), sides)
    return Picture(product, (SurfaceType(0),), {"u": u, "v": v}, arcs, {}, regions, relator)


if __name__ == "__main__":
    from qexp.groups import CyclicGroup

    H = FreeProduct([CyclicGroup("A", 0, "a"), CyclicGroup("B", 0, "b")])
    rel = Relator(H.parse_word("A:a.B:b"), 6)
    picture, L, alpha = single_vertex_disk(rel)
    print("single vertex disk:", validate(picture, alpha).as_dict())
    print("region stats:", region_stats(picture, "outer"))
    print("dipole reduced:", is_reduced(dipole_picture(rel)))
