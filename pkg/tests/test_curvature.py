import random
from fractions import Fraction

import pytest

from qexp.curvature import (
    assign_angles,
    boundary_curvature_bound,
    check_gauss_bonnet,
    curvature,
    interior_region_flat,
    interval_phi,
    phi,
)
from qexp.exponential import ExpLetter
from qexp.groups import CyclicGroup
from qexp.params import LinPoly, Retraction
from qexp.pictures import (
    corridor_picture,
    dipole_picture,
    fan_picture,
    is_minimalistic,
    single_vertex_disk,
    validate,
)
from qexp.words import FreeProduct, Relator


def test_phi():
    assert phi(2, 4) == Fraction(3, 8)
    assert phi(1, 7) == 0
    assert phi(2, 1) == 0
    with pytest.raises(ValueError):
        phi(2, 0)


def test_interval_phi(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    assert interval_phi(ExpLetter.make(ab, LinPoly.param(1)), Retraction({1: 12})) == Fraction(11, 72)
    assert interval_phi(ExpLetter.degenerate(ab), Retraction()) == Fraction(1, 2)


def test_corridor_annulus_curvature(ab_product):
    picture, _, alpha = corridor_picture(ab_product.parse_word("A:a.B:b"), (4,))
    angles = assign_angles(picture, alpha)
    assert set(angles.values()) == {Fraction(-3, 8)}
    report = curvature(picture, angles)
    assert all(k == Fraction(-3, 4) for k in report.regions.values())
    assert report.boundaries == {"beta1": Fraction(3, 2), "beta2": Fraction(3, 2)}
    assert report.total == 0
    assert check_gauss_bonnet(picture, angles)
    assert boundary_curvature_bound(picture, alpha, "beta1")
    assert interior_region_flat(picture, angles) == []


def test_single_vertex_disk_curvature(ab_product):
    relator = Relator(ab_product.parse_word("A:a.B:b"), 6)
    picture, _, alpha = single_vertex_disk(relator)
    angles = assign_angles(picture, alpha)
    report = curvature(picture, angles)
    assert report.vertices == {"v1": Fraction(1, 6)}
    assert set(report.regions.values()) == {Fraction(0)}
    assert report.boundaries == {"beta1": Fraction(11, 6)}
    assert report.as_dict()["total"] == "2"


def test_gauss_bonnet_holds_for_any_angles(ab_product):
    relator = Relator(ab_product.parse_word("A:a.B:b"), 6)
    picture, _, alpha = fan_picture(relator, (1, -1))
    assert check_gauss_bonnet(picture, assign_angles(picture, alpha))
    zero = {ref: Fraction(0) for ref in picture.corner_refs()}
    assert check_gauss_bonnet(picture, zero)
    assert curvature(picture, zero).total == 2


PICTURE_ROOTS = ("A:a.B:b", "A:a^2.B:b^-1", "A:a.B:b.A:a.B:b^-1")


def random_picture(H, rng):
    """Disks, annuli and genus-one fans with up to four vertices, corridors and dipoles."""
    r = H.parse_word(rng.choice(PICTURE_ROOTS))
    kind = rng.choice(("fan", "fan", "corridor", "dipole"))
    if kind == "corridor":
        widths = tuple(len(r) * rng.randint(1, 3) for _ in range(rng.randint(1, 2)))
        picture, _, alpha = corridor_picture(r, widths)
        return picture, alpha
    relator = Relator(r, rng.choice((2, 3, 6)))
    if kind == "dipole":
        return dipole_picture(relator), Retraction()
    signs = tuple(rng.choice((1, -1)) for _ in range(rng.randint(1, 4)))
    picture, _, alpha = fan_picture(
        relator,
        signs,
        minor=rng.random() < 0.3,
        extra_boundaries=rng.randint(0, 2),
        genus=rng.randint(0, 1),
    )
    return picture, alpha


@pytest.fixture(scope="module")
def random_pictures():
    H = FreeProduct([CyclicGroup("A", 0, "a"), CyclicGroup("B", 0, "b")])
    rng = random.Random(20240614)
    return [random_picture(H, rng) for _ in range(120)]


def test_random_pictures_satisfy_gauss_bonnet(random_pictures):
    rng = random.Random(5)
    chis = set()
    for picture, alpha in random_pictures:
        report = validate(picture, alpha)
        assert report.status == "valid", report.errors
        assert check_gauss_bonnet(picture, assign_angles(picture, alpha))
        refs = picture.corner_refs()
        for _ in range(10):
            angles = {ref: Fraction(rng.randint(-24, 24), rng.randint(1, 12)) for ref in refs}
            assert curvature(picture, angles).total == 2 * picture.chi
            assert check_gauss_bonnet(picture, angles)
        chis.add(picture.chi)
    assert {-1, 0, 1, 2} <= chis


def test_random_pictures_respect_curvature_bounds(random_pictures):
    minimalistic = 0
    for picture, alpha in random_pictures:
        for bid in picture.boundaries:
            assert boundary_curvature_bound(picture, alpha, bid), bid
        if is_minimalistic(picture):
            assert interior_region_flat(picture, assign_angles(picture, alpha)) == []
            minimalistic += 1
    assert minimalistic > 0
