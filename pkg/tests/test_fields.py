from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brauer_y02.errors import NonUnit, NotASquare
from brauer_y02.fields import CONWAY, FiniteField, ResidueRing

QS = [3, 5, 7, 9, 13, 25, 27, 49, 81, 125]


@pytest.mark.parametrize("q", QS)
def test_field_axioms(q):
    F = FiniteField.get(q)
    elems = F.elements()
    assert len(elems) == q
    g = F.primitive_element()
    assert len({g ** k for k in range(q - 1)}) == q - 1
    for x in elems[:12]:
        assert x + (-x) == 0
        assert x * 1 == x
        if x:
            assert x * x.inverse() == 1
        assert x ** q == x


@pytest.mark.parametrize("pk", sorted(CONWAY))
def test_conway_polynomials_are_primitive(pk):
    p, k = pk
    assert FiniteField(p, k).is_polynomial_primitive()


@given(st.sampled_from(QS), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_distributive(q, a, b, c):
    F = FiniteField.get(q)
    x, y, z = (F.from_code(v % q) for v in (a, b, c))
    assert x * (y + z) == x * y + x * z
    assert (x - y) + y == x


@given(st.sampled_from(QS), st.integers(0, 10 ** 6))
def test_square_roots(q, a):
    F = FiniteField.get(q)
    x = F.from_code(a % q)
    y = x * x
    assert y.is_square()
    r = y.sqrt()
    assert r * r == y


def test_non_square():
    F = FiniteField.get(13)
    with pytest.raises(NotASquare):
        F(2).sqrt()
    with pytest.raises(NonUnit):
        F(0).inverse()
    assert sum(1 for x in F.units() if x.is_square()) == 6


def test_residue_ring():
    R = ResidueRing(3, 4)
    x = R(Fraction(1, 2))
    assert x * 2 == 1
    with pytest.raises(NonUnit):
        R(Fraction(1, 3))
    with pytest.raises(NonUnit):
        R(6).inverse()
    assert R(5) ** -1 * 5 == 1
