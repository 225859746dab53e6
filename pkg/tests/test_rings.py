import random
from fractions import Fraction

import pytest

from elimkit.rings import (
    QQ,
    NoSuchRootError,
    PrimeField,
    format_rational,
    is_prime,
    least_prime_above,
    parse_rational,
)


def test_rational_exact_arithmetic():
    assert QQ.add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)


def test_prime_field_inverse():
    assert PrimeField(7).inv(3) == 5


def test_division_by_zero_is_catchable():
    with pytest.raises(ZeroDivisionError):
        QQ.div(Fraction(1), Fraction(0))
    with pytest.raises(ZeroDivisionError):
        PrimeField(7).inv(0)


def test_field_axioms_randomized():
    rng = random.Random(0)
    fp = PrimeField(101)
    for _ in range(1000):
        a, b, c = (rng.randrange(101) for _ in range(3))
        assert fp.mul(a, fp.add(b, c)) == fp.add(fp.mul(a, b), fp.mul(a, c))
        assert fp.add(fp.add(a, b), c) == fp.add(a, fp.add(b, c))
        if a:
            assert fp.mul(a, fp.inv(a)) == fp.one
        qa, qb, qc = Fraction(a, 7), Fraction(b - 50, 9), Fraction(c, 11)
        assert QQ.mul(qa, QQ.add(qb, qc)) == QQ.add(QQ.mul(qa, qb), QQ.mul(qa, qc))


def test_primitive_root_examples():
    assert PrimeField(5).find_primitive_root(4) == 2
    g = PrimeField(7).find_primitive_root(3)
    assert pow(g, 3, 7) == 1 and g != 1
    with pytest.raises(NoSuchRootError):
        PrimeField(7).find_primitive_root(5)


def test_primitive_root_order_exact_small_primes():
    for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101]:
        fp = PrimeField(p)
        for d in range(1, p):
            if (p - 1) % d:
                continue
            g = fp.find_primitive_root(d)
            assert fp.element_order(g) == d


def test_is_prime_basics():
    assert is_prime(2) and is_prime(3) and is_prime(2305843009213693967)
    assert not is_prime(1) and not is_prime(2**61)
    # a 70-bit prime exercises the probabilistic branch
    assert is_prime(2**70 - 9) in (True, False)


def test_least_prime_above_residue_class():
    p = least_prime_above(100, congruent_to=1, modulus=4)
    assert p > 100 and is_prime(p) and p % 4 == 1
    assert least_prime_above(2**61) == 2305843009213693967


def test_rational_round_trip_format():
    for s in ["3", "-7/2", "0", "22/7"]:
        assert format_rational(parse_rational(s)) == s
