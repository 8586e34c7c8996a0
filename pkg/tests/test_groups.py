import pytest

from qexp.groups import CyclicGroup, FreeGroup, TableGroup


def test_cyclic_finite_arithmetic():
    z3 = CyclicGroup("A", 3, "a")
    assert z3.multiply(2, 2) == 1
    assert z3.inverse(1) == 2
    assert z3.power(1, 5) == 2
    assert z3.is_identity(z3.power(2, 3))
    assert list(z3.elements(10)) == [0, 1, 2]
    assert z3.cyclic_order == 3


def test_cyclic_infinite_formatting():
    z = CyclicGroup("Z", 0, "t")
    assert z.format_element(0) == "1"
    assert z.format_element(1) == "t"
    assert z.format_element(2) == "t^2"
    assert z.format_element(-1) == "t^-1"
    assert z.parse_element("t^2*t^-5") == -3
    assert list(z.elements(2)) == [0, 1, -1, 2, -2]


def test_cyclic_rejects_unknown_generator():
    with pytest.raises(ValueError):
        CyclicGroup("A", 2, "a").parse_element("b")
    with pytest.raises(ValueError):
        CyclicGroup("A", -1)


def test_free_group_reduces_finite_orders():
    h = FreeGroup("H1", {"c11": 3, "c12": 3})
    x = h.parse_element("c11^2*c11^2*c12")
    assert x == (("c11", 1), ("c12", 1))
    assert h.format_element(x) == "c11*c12"
    assert h.multiply(x, h.inverse(x)) == ()
    assert h.format_element(h.inverse(x)) == "c12^2*c11^2"


def test_free_group_involutions():
    h = FreeGroup("H2", {"c21": 2, "c22": 2})
    c21 = h.parse_element("c21")
    assert h.multiply(c21, c21) == ()
    assert h.inverse(c21) == c21
    assert h.contains((("c21", 1), ("c22", 1)))
    assert not h.contains((("c21", 1), ("c21", 1)))


def test_free_group_cyclic_order_only_for_one_generator():
    assert FreeGroup("C", {"c": 5}).cyclic_order == 5
    assert FreeGroup("H", {"a": 2, "b": 2}).cyclic_order is None


def test_free_group_validates_generators():
    with pytest.raises(ValueError):
        FreeGroup("H", {})
    with pytest.raises(ValueError):
        FreeGroup("H", {"a": 1})


def test_table_group_klein_four():
    names = ["e", "u", "v", "w"]
    table = [
        [0, 1, 2, 3],
        [1, 0, 3, 2],
        [2, 3, 0, 1],
        [3, 2, 1, 0],
    ]
    k4 = TableGroup("K", names, table)
    assert k4.multiply(1, 2) == 3
    assert k4.inverse(3) == 3
    assert k4.parse_element("u*v") == 3
    assert k4.format_element(0) == "e"
    assert k4.cyclic_order is None


def test_table_group_cyclic_detection():
    z3 = TableGroup("T", ["e", "g", "h"], [[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    assert z3.cyclic_order == 3


def test_table_group_rejects_bad_tables():
    with pytest.raises(ValueError):
        TableGroup("T", ["e", "g"], [[0, 1], [1, 1]])
    with pytest.raises(ValueError):
        TableGroup("T", ["g", "e"], [[1, 0], [0, 1]])
