import random
from fractions import Fraction

import pytest

from elimkit.linalg import InconsistentSystemError
from elimkit.poly import MultiPoly, parse_poly
from elimkit.sequences import TestSequence as TSeq
from elimkit.value_encoding import MismatchedSequenceError, ValueCode, code_eq, decode, encode, injectivity_check


def gamma(*pts, m_size=4, seed=0):
    return TSeq(points=tuple((p,) for p in pts), M_size=m_size, seed=seed)


QUAD_BASIS = [MultiPoly.const(1), parse_poly("Y"), parse_poly("Y^2")]


def test_encode_examples():
    g = gamma(0, 1, 2, 3)
    assert encode(MultiPoly.zero(), g, variables=["Y"]).values == (0, 0, 0, 0)
    assert encode(parse_poly("Y^2 - 1"), g).values == (-1, 0, 3, 8)


def test_encode_homogeneous():
    g = gamma(0, 1, 2, 3)
    base = encode(parse_poly("Y"), g).values
    scaled = encode(parse_poly("7*Y"), g).values
    assert scaled == tuple(7 * v for v in base)


def test_decode_round_trip():
    g = gamma(0, 1, 2)
    f = parse_poly("12*Y^2 + 6*Y + 3")
    assert decode(encode(f, g), QUAD_BASIS) == f


def test_decode_zero_code():
    g = gamma(0, 1, 2)
    code = ValueCode(g, (Fraction(0),) * 3)
    assert decode(code, QUAD_BASIS) == MultiPoly.zero()


def test_decode_out_of_span():
    g = gamma(0, 1, 2, 3)
    cubic_code = encode(parse_poly("Y^3"), g)
    with pytest.raises(InconsistentSystemError):
        decode(cubic_code, QUAD_BASIS)


def test_code_eq():
    g = gamma(0, 1, 2)
    f = parse_poly("Y^2 - 1")
    assert code_eq(encode(f, g), encode(f, g))
    assert not code_eq(encode(parse_poly("Y"), g), encode(parse_poly("Y - 1"), g))
    other = gamma(0, 1, 2, seed=9)
    with pytest.raises(MismatchedSequenceError):
        code_eq(encode(f, g), encode(f, other))


def test_syntactically_different_same_object():
    g = gamma(0, 1, 2)
    a = parse_poly("Y^2 - 1")
    b = (parse_poly("Y") - 1) * (parse_poly("Y") + 1)
    assert code_eq(encode(a, g), encode(b, g))


def test_injectivity_check():
    cls = [parse_poly("Y") * Fraction(a) + MultiPoly.const(b) for a in range(-2, 3) for b in range(-2, 3)]
    assert injectivity_check(gamma(0, 1), cls, variables=["Y"])[0]
    ok, pair = injectivity_check(gamma(0), [parse_poly("Y"), parse_poly("2*Y")], variables=["Y"])
    assert not ok and pair is not None
    assert injectivity_check(gamma(0), [parse_poly("Y")], variables=["Y"])[0]


def test_length_mismatch_rejected():
    g = gamma(0, 1, 2)
    with pytest.raises(ValueError):
        ValueCode(g, (Fraction(1),))
