from dataclasses import replace

import pytest

from qexp.exponential import ExpLetter
from qexp.params import LinPoly, Retraction
from qexp.pictures import (
    Region,
    SurfaceType,
    admits,
    cancelling_pairs,
    corridor_picture,
    dipole_picture,
    edge_classes,
    is_minimalistic,
    is_reduced,
    minimalistic_violations,
    region_genus,
    region_stats,
    single_vertex_disk,
    validate,
)
from qexp.words import Relator

l1 = LinPoly.param(1)


def test_surface_types():
    assert SurfaceType(1).chi == 1
    assert SurfaceType(2).chi == 0
    assert SurfaceType(1, 1).chi == -1
    assert not SurfaceType(0, 0, 1).orientable


def test_region_genus():
    assert region_genus(Region("r", 1, "A", ((),), ())) == (1, 0, 0)
    assert region_genus(Region("r", -1, "A", ((),), ())) == (1, 1, 0)
    assert region_genus(Region("r", 0, "A", ((),), ())) is None
    assert region_genus(Region("r", 0, "A", ((),), (), orientable=False)) == (1, 0, 1)


def test_corridor_annulus_is_valid(ab_product):
    picture, L, alpha = corridor_picture(ab_product.parse_word("A:a.B:b"), (4,))
    assert alpha.assignment == {1: 4, 2: 4}
    assert picture.chi == 0
    report = validate(picture, alpha)
    assert report.valid, report.errors
    assert report.status == "valid"
    [edge] = edge_classes(picture)
    assert edge.width == 4
    assert edge.boundary and edge.type_one
    assert is_minimalistic(picture)


def test_corridor_annulus_rejects_wrong_alpha(ab_product):
    picture, _, _ = corridor_picture(ab_product.parse_word("A:a.B:b"), (4,))
    report = validate(picture, Retraction({1: 3, 2: 4}))
    assert not report.valid
    assert report.as_dict()["status"] == "invalid"


def test_missing_region_is_a_structural_error(ab_product):
    picture, _, alpha = corridor_picture(ab_product.parse_word("A:a.B:b"), (4,))
    regions = {rid: r for rid, r in picture.regions.items() if rid != "c1_r1"}
    report = validate(replace(picture, regions=regions), alpha)
    assert any("lies in no region" in e for e in report.errors)


def test_corridor_width_must_divide(ab_product):
    with pytest.raises(ValueError):
        corridor_picture(ab_product.parse_word("A:a.B:b"), (3,))
    with pytest.raises(ValueError):
        corridor_picture(ab_product.parse_word("A:a"), (2,))


def test_single_vertex_disk(ab_product):
    relator = Relator(ab_product.parse_word("A:a.B:b"), 6)
    picture, L, alpha = single_vertex_disk(relator)
    assert alpha.assignment == {1: 12}
    assert validate(picture, alpha).valid
    stats = region_stats(picture, "outer")
    assert (stats.t, stats.beta, stats.rho, stats.gamma, stats.epsilon) == (2, 1, 1, 0, 0)
    assert stats.collapsible
    assert is_minimalistic(picture)
    assert is_reduced(picture)
    with pytest.raises(ValueError):
        region_stats(picture, "nowhere")


def test_dipole_cancels(ab_product):
    relator = Relator(ab_product.parse_word("A:a.B:b"), 6)
    picture = dipole_picture(relator)
    assert validate(picture, Retraction()).valid
    assert not is_reduced(picture)
    assert cancelling_pairs(picture)[0][:2] == ("u", "v")
    assert any("width 12" in v for v in minimalistic_violations(picture))


def test_admissible_interval_lengths(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    proper = ExpLetter.make(ab, l1)
    alpha = Retraction({1: 3})
    assert admits(proper, 3, None, alpha)
    assert admits(proper, 5, None, alpha)
    assert not admits(proper, 4, None, alpha)
    assert admits(ExpLetter.degenerate(ab), 2, None, alpha)
    assert not admits(ExpLetter.degenerate(ab), 3, None, alpha)
    assert admits(ExpLetter.make(ab_product.parse_word("A:a"), l1), 1, None, alpha)
