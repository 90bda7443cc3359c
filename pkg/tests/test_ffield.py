import random

import pytest
from hypothesis import given, settings, strategies as st

from gpaley.ffield import (
    FieldElement,
    FiniteField,
    arith,
    field_of_order,
    is_prime,
    make_field,
    multiplicative_order,
    prime_factors,
)

SMALL_FIELDS = [(2, 1), (3, 1), (13, 1), (2, 4), (3, 2), (5, 2), (7, 2), (2, 8), (3, 3)]


def test_number_theory_helpers():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_factors(360) == [2, 3, 5]
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(5, 3) == 2


def test_gf9_examples():
    F = make_field(3, 2)
    assert F.modulus == (1, 0, 1)  # x^2 + 1
    x = 3  # the element x, index 1*3 + 0
    assert F.mul(x, x) == 2
    assert F.inv(x) == 6
    assert F.frobenius(x, 1) == 6
    assert F.generator == 4


def test_prime_field_examples():
    F = make_field(13)
    assert F.residue_subgroup(3) == frozenset({1, 5, 8, 12})
    assert F.pow(2, 4) == 3
    assert F.div(1, 2) == 7


def test_chosen_moduli():
    assert make_field(2, 4).modulus == (1, 1, 0, 0, 1)
    F = make_field(41, 2)
    assert F.modulus == (3, 0, 1)
    assert F.generator == 43


def test_field_of_order():
    assert field_of_order(256).d == 8
    with pytest.raises(ValueError):
        field_of_order(12)


def test_errors():
    F = make_field(5)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ValueError):
        F.pow(0, 0)
    with pytest.raises(ValueError):
        F.element(5)
    with pytest.raises(ValueError):
        FiniteField(2, 2, [1, 0, 1])  # x^2 + 1 = (x + 1)^2 over GF(2)


def test_serialization_roundtrip():
    F = make_field(7, 2)
    G = FiniteField.from_json(F.to_json())
    assert G == F and hash(G) == hash(F)
    assert G.mul(10, 20) == F.mul(10, 20)


def test_field_element_operators():
    F = make_field(3, 2)
    a, b = FieldElement(F, 3), FieldElement(F, 5)
    assert int(a * b) == F.mul(3, 5)
    assert int(a + b) == F.add(3, 5)
    assert int((a / b) * b) == 3
    assert int(-a + a) == 0
    assert int(a ** 8) == 1
    with pytest.raises(ValueError):
        a + FieldElement(make_field(5), 1)
    assert arith(F, "mul", 3, 3) == 2


@pytest.mark.parametrize("p,d", SMALL_FIELDS)
def test_field_axioms_exhaustive_or_sampled(p, d):
    F = make_field(p, d)
    q = F.q
    rng = random.Random(p * 100 + d)
    for _ in range(300):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.sub(F.add(a, b), b) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(F.generator, F.log(a)) == a


@pytest.mark.parametrize("p,d", SMALL_FIELDS)
def test_generator_is_primitive(p, d):
    F = make_field(p, d)
    if F.q > 2:
        assert len({F.pow(F.generator, i) for i in range(F.q - 1)}) == F.q - 1


@pytest.mark.parametrize("p,d", [(2, 4), (3, 3), (5, 2), (7, 2), (2, 8)])
def test_frobenius_is_automorphism(p, d):
    F = make_field(p, d)
    rng = random.Random(7)
    for _ in range(1000):
        a, b = rng.randrange(F.q), rng.randrange(F.q)
        j = rng.randrange(d)
        assert F.frobenius(F.mul(a, b), j) == F.mul(F.frobenius(a, j), F.frobenius(b, j))
        assert F.frobenius(F.add(a, b), j) == F.add(F.frobenius(a, j), F.frobenius(b, j))


def test_vectorized_ops_match_scalar():
    F = make_field(3, 3)
    import numpy as np
    a = np.arange(F.q)
    b = (a * 7 + 3) % F.q
    assert F.add_vec(a, b).tolist() == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    assert F.sub_vec(a, b).tolist() == [F.sub(int(x), int(y)) for x, y in zip(a, b)]
    assert F.mul_vec(a, b).tolist() == [F.mul(int(x), int(y)) for x, y in zip(a, b)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(5, 1), (13, 1), (3, 2), (2, 4), (5, 2)]), st.data())
def test_cyclotomic_classes_partition(pd, data):
    F = make_field(*pd)
    divisors = [r for r in range(1, F.q) if (F.q - 1) % r == 0]
    r = data.draw(st.sampled_from(divisors))
    classes = F.cyclotomic_classes(r)
    assert len(classes) == r
    assert set().union(*classes) == set(range(1, F.q))
    assert classes[0] == F.residue_subgroup(r)
    # the class of g^i is the coset g^i * H
    h = next(iter(classes[0]))
    for i, c in enumerate(classes[:3]):
        gi = F.pow(F.generator, i)
        assert F.mul(gi, h) in c
