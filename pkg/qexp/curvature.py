"""Angles and curvature of pictures.

Angles are exact rational multiples of π, stored as ``Fraction`` values of
the multiple. The base assignment is:

- boundary corners: ``-φ_i``, or ``-φ_i - φ_{i+k-1}`` for a corner meeting
  ``k > 1`` boundary intervals, where
  ``φ_j = d(d-1)(α(m)-1)/α(m)²`` for the prime label ``(h, m)`` of interval
  ``j`` with ``d = l(h)``;
- the vertex corner of a region with ``χ = 1``, ``ρ = 1`` and ``β = 1``:
  the negative of the region's boundary corner angle;
- any other vertex corner: ``(ρ - 2χ)/ρ + E·i/2`` with ``i`` the number of
  the corner's arcs that meet the surface boundary.

Curvature is then ``κ(v) = 2 - σ(v)``, ``κ(Δ) = σ(Δ) - t(Δ) + 2χ(Δ)`` and
``κ(β) = -σ(β)``. Here ``t(Δ)`` counts the arc sides of ``Δ`` that end in
corners. The total equals ``2χ(Σ)`` for every angle map.

Usage:
    from qexp.curvature import assign_angles, check_gauss_bonnet

    angles = assign_angles(picture, alpha)
    check_gauss_bonnet(picture, angles)
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

from qexp.exponential import ExpLetter
from qexp.params import Retraction
from qexp.pictures import CornerRef, Picture, Region, RegionStats, region_stats

logger = logging.getLogger(__name__)

AngleMap = Dict[CornerRef, Fraction]


def phi(d: int, value: int) -> Fraction:
    """``φ = d(d-1)(a-1)/a²`` for an interval with base length ``d`` and ``a = α(m)``.

    Raises:
        ValueError: If ``d >= 2`` and ``a <= 0``
    """
    if d <= 1:
        return Fraction(0)
    if value <= 0:
        raise ValueError(f"Interval exponent must be positive, got α(m) = {value}")
    return Fraction(d * (d - 1) * (value - 1), value * value)


def interval_phi(letter: ExpLetter, alpha: Retraction) -> Fraction:
    """``φ_j`` of an interval with prime label ``letter``; partisan intervals get 0."""
    if letter.is_minor:
        return Fraction(0)
    if letter.is_degenerate:
        return phi(letter.length, letter.length)
    return phi(letter.length, alpha(letter.exponent))


def boundary_corner_angle(picture: Picture, ref: CornerRef, alpha: Retraction) -> Fraction:
    found = picture.corner_intervals(ref)
    if found is None:
        return Fraction(0)
    i, k = found
    letters = picture.boundaries[ref.owner].letters
    angle = -interval_phi(letters[i], alpha)
    if k > 1:
        angle -= interval_phi(letters[(i + k - 1) % len(letters)], alpha)
    return angle


def _E(stats: RegionStats) -> Fraction:
    beta, rho, eps = stats.beta, stats.rho, stats.epsilon
    if beta == 0:
        return Fraction(1)
    if beta == eps:
        raise ValueError(f"E is undefined for a region with β = ε = {beta}")
    if rho >= eps:
        return Fraction(beta, beta - eps)
    return Fraction(2 * beta - eps + rho, 2 * (beta - eps))


def _vertex_corner_angle(picture: Picture, ref: CornerRef, region: Region, stats: RegionStats) -> Fraction:
    incidence = sum(1 for a in picture.corner_arcs(ref) if picture.meets_boundary(a))
    angle = Fraction(stats.rho - 2 * region.chi, stats.rho)
    if incidence:
        angle += _E(stats) * incidence / 2
    return angle


def assign_angles(picture: Picture, alpha: Retraction) -> AngleMap:
    """Base angle assignment for a validated picture.

    Raises:
        ValueError: If a needed interval has ``α(m) <= 0`` or ``E`` is undefined
    """
    angles: AngleMap = {}
    for ref in picture.corner_refs():
        if ref.kind == "b":
            angles[ref] = boundary_corner_angle(picture, ref, alpha)
    for region in picture.regions.values():
        stats = region_stats(picture, region.id)
        vertex_corners = [ref for ref in region.corners if ref.kind == "v"]
        if region.chi == 1 and stats.rho == 1 and stats.beta == 1:
            (bref,) = [ref for ref in region.corners if ref.kind == "b"]
            angles[vertex_corners[0]] = -angles[bref]
            continue
        for ref in vertex_corners:
            angles[ref] = _vertex_corner_angle(picture, ref, region, stats)
    logger.debug("assigned %d angles", len(angles))
    return angles


@dataclass
class CurvatureReport:
    vertices: Dict[str, Fraction] = field(default_factory=dict)
    regions: Dict[str, Fraction] = field(default_factory=dict)
    boundaries: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def total(self) -> Fraction:
        return sum(self.vertices.values(), Fraction(0)) + sum(self.regions.values(), Fraction(0)) + sum(
            self.boundaries.values(), Fraction(0)
        )

    def as_dict(self) -> Dict:
        return {
            "vertices": {k: str(v) for k, v in sorted(self.vertices.items())},
            "regions": {k: str(v) for k, v in sorted(self.regions.items())},
            "boundaries": {k: str(v) for k, v in sorted(self.boundaries.items())},
            "total": str(self.total),
        }


def curvature(picture: Picture, angles: AngleMap) -> CurvatureReport:
    """Curvature of every vertex, region and boundary component, in multiples of π."""
    report = CurvatureReport()
    for v in picture.vertices.values():
        sigma = sum((angles[ref] for ref in angles if ref.kind == "v" and ref.owner == v.id), Fraction(0))
        report.vertices[v.id] = 2 - sigma
    for region in picture.regions.values():
        stats = region_stats(picture, region.id)
        sigma = sum((angles[ref] for ref in region.corners), Fraction(0))
        report.regions[region.id] = sigma - stats.cornered_sides + 2 * region.chi
    for b in picture.boundaries.values():
        sigma = sum((angles[ref] for ref in angles if ref.kind == "b" and ref.owner == b.id), Fraction(0))
        report.boundaries[b.id] = -sigma
    return report


def check_gauss_bonnet(picture: Picture, angles: AngleMap) -> bool:
    """True iff the total curvature equals ``2χ(Σ)`` exactly."""
    total = curvature(picture, angles).total
    if total != 2 * picture.chi:
        logger.warning("total curvature %s differs from 2χ = %d", total, 2 * picture.chi)
        return False
    return True


def boundary_curvature_bound(picture: Picture, alpha: Retraction, bid: str) -> bool:
    """``κ(β) <= Σ l(h)(l(h) - 1)`` over the prime labels of boundary ``bid``."""
    angles = assign_angles(picture, alpha)
    kappa = curvature(picture, angles).boundaries[bid]
    bound = sum(a.length * (a.length - 1) for a in picture.boundaries[bid].letters)
    return kappa <= bound


def interior_region_flat(picture: Picture, angles: AngleMap) -> List[str]:
    """Interior non-collapsible regions whose curvature is not zero."""
    report = curvature(picture, angles)
    out = []
    for region in picture.regions.values():
        stats = region_stats(picture, region.id)
        if stats.beta == 0 and not stats.collapsible and report.regions[region.id] != 0:
            out.append(region.id)
    return out


if __name__ == "__main__":
    from qexp.groups import CyclicGroup
    from qexp.pictures import fan_picture
    from qexp.words import FreeProduct, Relator

    H = FreeProduct([CyclicGroup("A", 0, "a"), CyclicGroup("B", 0, "b")])
    rel = Relator(H.parse_word("A:a.B:b"), 6)
    picture, L, alpha = fan_picture(rel, (1, -1))
    angles = assign_angles(picture, alpha)
    print(curvature(picture, angles).as_dict())
    print("Gauss-Bonnet:", check_gauss_bonnet(picture, angles))
