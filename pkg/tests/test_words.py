import random

import pytest

from qexp.words import (
    Relator,
    UnknownFactorError,
    cyclic_reduce,
    find_relator_reduction,
    has_period,
    initial_segment,
    is_cyclic_subword,
    is_relator_reduced,
    normal_form,
    power_prefix,
    proper_root,
    relator_reduce,
    rotate,
    terminal_segment,
)


def random_word(product, rng, max_length=6):
    raw = []
    for _ in range(rng.randint(1, max_length)):
        factor = rng.choice(["A", "B"])
        raw.append((factor, rng.choice([-2, -1, 1, 2, 3])))
    return product.word(raw)


def test_word_normal_form(ab_product):
    H = ab_product
    w = H.parse_word("A:a.A:a^-1.B:b^2.B:b")
    assert str(w) == "B:b^3"
    assert H.parse_word("A:a.B:b.B:b^-1.A:a^-1").is_identity()
    assert str(H.parse_word("A:a^2.B:b^-1")) == "A:a^2.B:b^-1"
    assert str(H.identity) == "1"


def test_unknown_factor(ab_product):
    with pytest.raises(UnknownFactorError):
        ab_product.parse_word("C:c")


def test_inverse_and_support(ab_product):
    w = ab_product.parse_word("A:a.B:b^2")
    assert (w * w.inverse()).is_identity()
    assert w.support == frozenset({"A", "B"})
    assert not ab_product.parse_word("A:a.B:b.A:a").is_cyclically_reduced()


def test_segments_and_rotation(ab_product):
    w = ab_product.parse_word("A:a.B:b.A:a^2")
    assert str(initial_segment(w, 2)) == "A:a.B:b"
    assert str(terminal_segment(w, 1)) == "A:a^2"
    assert str(rotate(ab_product.parse_word("A:a.B:b"), 1)) == "B:b.A:a"
    with pytest.raises(ValueError):
        initial_segment(w, 4)


def test_power_prefix_examples(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    assert str(power_prefix(ab, 3)) == "A:a.B:b.A:a"
    assert str(power_prefix(ab, -3)) == "B:b^-1.A:a^-1.B:b^-1"
    assert power_prefix(ab, 0).is_identity()
    with pytest.raises(ValueError):
        power_prefix(ab_product.identity, 2)


def test_power_prefix_algebra(ab_product):
    rng = random.Random(20240607)
    for _ in range(1000):
        a = random_word(ab_product, rng)
        if a.is_identity():
            continue
        alpha = rng.randint(-25, 25)
        q = rng.randint(-4, 4)
        assert power_prefix(a, q * len(a)) == a ** q
        assert power_prefix(a, -alpha) == power_prefix(a.inverse(), alpha)


def test_cyclic_reduce(ab_product):
    w = ab_product.parse_word("A:a.B:b.A:a^-1")
    u, c = cyclic_reduce(w)
    assert str(u) == "B:b"
    assert c.inverse() * u * c == w


def test_proper_root(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    assert proper_root(ab ** 3) == (ab, 3)
    assert proper_root(ab) == (ab, 1)


def test_cyclic_subword(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    assert is_cyclic_subword(ab_product.parse_word("B:b.A:a"), ab)
    assert not is_cyclic_subword(ab_product.parse_word("B:b^2"), ab)


def test_relator_validation(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    with pytest.raises(ValueError):
        Relator(ab_product.parse_word("A:a"))
    with pytest.raises(ValueError):
        Relator(ab ** 2)
    with pytest.raises(ValueError):
        Relator(ab_product.parse_word("A:a.B:b.A:a"))
    with pytest.raises(ValueError):
        Relator(ab, 0)
    rel = Relator.from_word(ab ** 2)
    assert rel.r == ab and rel.m == 2 and len(rel) == 4


def test_relator_reduction(ab_product):
    ab = ab_product.parse_word("A:a.B:b")
    rel = Relator(ab, 2)
    aba = ab_product.parse_word("A:a.B:b.A:a")
    assert find_relator_reduction(aba, rel) == (0, 3, ab_product.parse_word("B:b"))
    assert str(relator_reduce(aba, rel)) == "B:b^-1"
    assert is_relator_reduced(ab, rel)


def test_worked_relator_reduces_long_subword(exx_product, exx_relator):
    w = exx_product.parse_word("H1:c11.H2:c22*c21.H1:c12")
    assert str(relator_reduce(w, exx_relator)) == "H2:c21*c22"


def test_normal_form_multiplies_adjacent_syllables(ab_product):
    w = normal_form(ab_product, [("A", 1), ("A", 2), ("B", 1), ("B", -1), ("A", -3), ("B", 2)])
    assert w == ab_product.parse_word("B:b^2")
    assert normal_form(ab_product, [("A", 1), ("A", -1)]).is_identity()


def test_has_period(ab_product):
    w = ab_product.parse_word("A:a.B:b.A:a.B:b.A:a")
    assert has_period(w, 2)
    assert not has_period(w, 3)
    assert has_period(w, len(w))
    with pytest.raises(ValueError):
        has_period(w, 0)
