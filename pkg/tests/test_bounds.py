import pytest

from qexp.bounds import (
    b_number,
    b1_number,
    bounds,
    corridor_number,
    d_number,
    equation_bounds,
    equation_chi,
    m_number,
    n_number,
    picture_arc_bound,
    relator_length,
    w_statistics,
)
from qexp.equations import Environment


def labels(W):
    return [W.beta[a] for a in W.coefficients]


def test_worked_example_statistics(exx_z):
    stats = w_statistics(labels(exx_z), relator_length(exx_z.env))
    assert stats == {"W0": 10, "W1": 6, "W2": 2, "W3": 4}
    assert relator_length(exx_z.env) == 4


def test_m_numbers():
    assert m_number(0, 2, 4, 4) == 5
    assert m_number(1, 2, 4, 4) == 4672
    assert m_number(2, 2, 4, 4) == 536870916
    # odd relator length rounds up
    assert m_number(1, 1, 3, 3) == 341
    with pytest.raises(ValueError):
        m_number(3, 2, 4, 4)


def test_vertex_and_corridor_numbers():
    assert n_number(10, 6, 4, 1) == 2040
    assert d_number(4, 3) == 192
    assert b1_number(10, 6, 4, 1) == 2052
    assert corridor_number(3, 10, 6, 4, 1, 2052) == 3 + 3 * (625 * 2052 + 8) + 34 * 6


def test_full_bounds(exx_z):
    stats = bounds(labels(exx_z), exx_z.env, chi=1)
    assert (stats.n, stats.chi, stats.s_length) == (3, 1, 4)
    assert (stats.M0, stats.M1, stats.M2) == (5, 4672, 536870916)
    assert stats.Mz == stats.M2
    assert stats.B1 == 2052
    assert stats.B == b_number(3, 10, 6, 4, 1, 536870916)
    assert stats.B > stats.B1 >= 2 * stats.W1
    assert stats.as_dict()["W0"] == 10
    assert picture_arc_bound(labels(exx_z), exx_z.env, 1) == stats.B


def test_equation_bounds_use_the_surface(exx_z):
    assert equation_chi(exx_z) == 1
    assert equation_bounds(exx_z) == bounds(labels(exx_z), exx_z.env, chi=1)
    assert equation_bounds(exx_z, chi=-2).chi == -2


def test_empty_labels(ab_product):
    env = Environment(ab_product, {"1": frozenset({"A", "B"})})
    assert relator_length(env) == 0
    stats = bounds([], env)
    assert (stats.W0, stats.W1, stats.W2, stats.W3) == (0, 0, 1, 1)
    assert stats.M0 == 2
    assert bounds([], env, s_length=2).s_length == 2
