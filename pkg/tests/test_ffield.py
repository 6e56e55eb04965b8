import itertools

import pytest

from ceamp.errors import FieldError
from ceamp.ffield import (
    FieldElement,
    elements,
    f_inv,
    is_prime,
    progression_center,
    progression_third,
    smallest_prime_geq,
)


def F(value, p=5):
    return FieldElement(value, p)


def test_inverse_examples():
    assert f_inv(F(2)) == F(3)
    assert f_inv(F(1, 13)) == F(1, 13)
    assert f_inv(F(4, 7)) == F(2, 7)


def test_inverse_of_zero():
    with pytest.raises(FieldError):
        f_inv(F(0))


@pytest.mark.parametrize("p", [p for p in range(2, 101) if is_prime(p)])
def test_inverse_property(p):
    for a in elements(p)[1:]:
        assert a * f_inv(a) == FieldElement(1, p)


def test_progression_third_examples():
    assert progression_third(F(1), F(3)) == F(0)
    assert progression_third(F(2), F(2)) == F(2)
    assert progression_third(F(0), F(2)) == F(4)


def test_progression_center_examples():
    assert progression_center(F(0), F(4)) == F(2)
    assert progression_center(F(3), F(3)) == F(3)
    assert progression_center(F(1), F(0)) == F(3)


def test_progressions_are_consistent_over_f5():
    for pv, r in itertools.product(elements(5), repeat=2):
        assert progression_third(pv, progression_center(pv, r)) == r


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_progression_third_is_a_bijection(p):
    for pv in elements(p):
        assert sorted(progression_third(pv, q) for q in elements(p)) == elements(p)


def test_progression_over_f2():
    assert progression_center(F(1, 2), F(1, 2)) == F(1, 2)
    with pytest.raises(FieldError):
        progression_center(F(0, 2), F(1, 2))


def test_modulus_mismatch():
    with pytest.raises(FieldError):
        progression_third(F(1, 5), F(1, 7))
    with pytest.raises(FieldError):
        progression_center(F(1, 5), F(1, 7))


def test_element_validation():
    with pytest.raises(FieldError):
        FieldElement(5, 5)
    with pytest.raises(FieldError):
        FieldElement(1, 6)
    assert FieldElement.of(-1, 5) == F(4)
    assert int(F(3)) == 3


@pytest.mark.parametrize("x, p", [(16, 17), (20, 23), (6, 7), (1, 2), (2, 2), (24, 29)])
def test_smallest_prime_geq(x, p):
    assert smallest_prime_geq(x) == p
