import random

import pytest

from qexp.formats import parse_catalog_file
from qexp.params import LinPoly, Retraction
from qexp.pictures import corridor_picture
from qexp.zmachine import (
    ZERO_INTERIOR,
    CorridorSection,
    Square,
    active_markings,
    basic_reduce_check,
    build_zgraph,
    corridor_sections,
    detect_0corridors,
    exhaust_cancellation,
    find_cancellable,
    homogeneous_ids,
    is_z_path,
    path_subgraphs,
    section_system,
    transport_labels,
    type0_corridor,
    type0_section,
    weighting,
    z_cancel,
    z_insert,
    zeta,
)


def labels(W):
    return [W.beta[a] for a in W.coefficients]


@pytest.fixture
def exx_catalog(examples_dir):
    return parse_catalog_file(examples_dir / "exx_z.qcat")


def test_type0_corridor_cancels_down():
    C = type0_corridor((1, 2), (2, 2), 7)
    assert C.chain_errors() == []
    assert find_cancellable(C) == (0, 2)
    reduced, steps = exhaust_cancellation(C)
    assert reduced.width == 1
    assert len(steps) == 3
    assert all(step.deltas == {1: -2, 2: -2} for step in steps)
    assert find_cancellable(reduced) is None


def test_cancel_then_insert_restores_the_corridor():
    rng = random.Random(20240611)
    for _ in range(200):
        lengths = (rng.randint(1, 4), rng.randint(1, 4))
        start = (rng.randrange(lengths[0]), rng.randrange(lengths[1]))
        C = type0_corridor((1, 2), lengths, rng.randint(1, 14), start=start)
        site = find_cancellable(C)
        if site is None:
            assert len(active_markings([C])) == C.width
            continue
        cut = z_cancel(C, *site)
        grown = z_insert(cut.corridor, cut.section, site[0])
        assert grown.corridor.squares == C.squares
        assert {p: -n for p, n in cut.deltas.items()} == grown.deltas
        assert cut.corridor.arc_count + cut.section.arc_count == C.arc_count


def test_z_cancel_rejects_mismatched_markings():
    C = type0_corridor((1, 2), (2, 2), 4)
    with pytest.raises(ValueError):
        z_cancel(C, 0, 1)
    with pytest.raises(ValueError):
        z_cancel(C, 2, 1)


def test_corridor_sections_are_deduplicated():
    sections = corridor_sections(type0_corridor((1, 2), (2, 2), 7))
    assert len(sections) == 2
    assert all(s.extent == (1, 1) for s in sections)


def test_zeta():
    section = type0_section((3, 5), (2, 2))
    assert section.extent == (1, 1)
    assert (zeta(section, 3), zeta(section, 5), zeta(section, 4)) == (1, 1, 0)
    assert zeta(type0_section((1, 1), (2, 2)), 1) == 2


def test_section_needs_positive_extent():
    sq = Square(0, (1, 1, 1, 1), (1, 2, 1, -1, 0, 0))
    with pytest.raises(ValueError):
        CorridorSection("bad", 0, (sq,), (0, 1))
    with pytest.raises(ValueError):
        CorridorSection("bad", 3, (sq,), (1, 1))


def test_small_zgraph_has_three_path_subgraphs():
    section = type0_section((1, 2), (2, 2))
    G = build_zgraph([section])
    start = frozenset({section.left_marking})
    [edge] = G.edges_from(start)
    assert not edge.is_loop
    assert sum(1 for _ in path_subgraphs(G, start)) == 3


def test_worked_catalog_zgraph(exx_z, exx_catalog):
    z = labels(exx_z)
    G = build_zgraph(exx_catalog, z, s_length=4)
    a = ((3, 5, 1, -1, 0, 0), ZERO_INTERIOR)
    b = ((3, 5, 1, -1, 1, 1), ZERO_INTERIOR)
    assert G.universe == frozenset({a, b})
    start = frozenset({exx_catalog[0].left_marking})
    assert start == frozenset({a})
    assert len(G.reachable(start)) == 2

    subgraphs = list(path_subgraphs(G, start))
    assert len(subgraphs) == 5
    assert sorted(len(P.loops) for P in subgraphs) == [0, 0, 1, 1, 2]
    for P in subgraphs:
        assert is_z_path(P.path + P.loops, start)
    longest = max(subgraphs, key=lambda P: len(P.edges))
    assert longest.terminal == frozenset({a, b})
    assert not is_z_path(longest.loops, start)


def test_catalog_must_bind_proper_letters(exx_z):
    z = labels(exx_z)
    bad = type0_section((2, 5), (2, 2))
    with pytest.raises(ValueError):
        build_zgraph([bad], z)
    with pytest.raises(ValueError):
        build_zgraph([type0_section((3, 9), (2, 2))], z)


def test_transport_labels(exx_z, exx_catalog):
    z = labels(exx_z)
    G = build_zgraph(exx_catalog, z)
    start = frozenset({exx_catalog[0].left_marking})
    [edge] = G.edges_from(start)
    moved = transport_labels({3: 4, 5: 2}, {edge: 2}, G, z)
    assert moved == {3: 8, 5: 6}
    assert transport_labels(moved, {edge: 2}, G, z, inverse=True) == {3: 4, 5: 2}
    with pytest.raises(ValueError):
        transport_labels({3: 4}, {edge: -1}, G, z)
    assert weighting([edge, edge]) == {edge: 2}


def test_basic_reduce_check(exx_z, exx_catalog):
    z = labels(exx_z)
    # positions count degenerate letters too; see DESIGN.md, Open Question decisions, homogeneous numbering
    assert homogeneous_ids(z) == {1: 1, 3: 3, 5: 5}
    G = build_zgraph(exx_catalog, z)
    start = frozenset({exx_catalog[0].left_marking})
    [P] = [P for P in path_subgraphs(G, start) if len(P.path) == 1 and not P.loops]

    alpha0 = basic_reduce_check(Retraction({1: 6, 3: 2, 5: 0}), P, exx_z.L, z, G)
    assert alpha0 is not None
    assert (alpha0[1], alpha0[2]) == (6, 4)

    assert basic_reduce_check(Retraction({1: 6, 3: 3, 5: 0}), P, exx_z.L, z, G) is None
    seeded = basic_reduce_check(Retraction({1: 6, 3: 2, 5: 0}), P, exx_z.L, z, G, seed=Retraction({1: 6, 2: 4}))
    assert seeded is not None
    assert basic_reduce_check(Retraction({1: 6, 3: 2, 5: 0}), P, exx_z.L, z, G, seed=Retraction({1: 8, 2: 4})) is None


def test_detect_corridor_in_annulus(ab_product):
    picture, _, _ = corridor_picture(ab_product.parse_word("A:a.B:b"), (4,))
    [C] = detect_0corridors(picture)
    assert C.width == 4
    assert C.letters == (1, 2)
    assert C.lengths == (2, 2)
    assert C.chain_errors() == []
    assert find_cancellable(C) == (0, 2)
    assert active_markings([C]) == frozenset({
        ((1, 2, 1, -1, 0, 0), ZERO_INTERIOR),
        ((1, 2, 1, -1, 1, 1), ZERO_INTERIOR),
    })


def test_section_system_of_a_single_edge(exx_z, exx_catalog):
    z = labels(exx_z)
    G = build_zgraph(exx_catalog, z)
    start = frozenset({exx_catalog[0].left_marking})
    [P] = [P for P in path_subgraphs(G, start) if len(P.path) == 1 and not P.loops]
    system, lam = section_system(Retraction({1: 6, 3: 2, 5: 0}), P, z, G)
    [(edge, pid)] = lam.items()
    assert edge == P.path[0]
    assert pid > 5
    assert LinPoly.param(pid) - 1 in system.equations
    assert LinPoly.param(pid) - 1 in system.inequalities
    assert system.satisfied_by({1: 6, 2: 4, pid: 1})
    assert not system.satisfied_by({1: 8, 2: 4, pid: 1})
