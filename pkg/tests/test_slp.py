import random
from fractions import Fraction

import pytest

from elimkit.families import fn_slp
from elimkit.poly import expand
from elimkit.rings import QQ, PrimeField
from elimkit.slp import (
    PoleError,
    SlpBuilder,
    SlpParseError,
    evaluate,
    parse_slp,
    profile,
    rearranged_size,
    serialize_slp,
    validate,
)


def squaring_chain_param(n):
    """(1 + T)^(2^n) by iterated squaring of a parameter expression."""
    b = SlpBuilder(params=["T"], variables=[])
    cur = b.add(b.param("T"), b.const(1))
    for _ in range(n):
        cur = b.mul(cur, cur)
    b.output(cur)
    return b.build()


def squaring_chain_var(n):
    b = SlpBuilder(variables=["Y"])
    cur = b.var("Y")
    for _ in range(n):
        cur = b.mul(cur, cur)
    b.output(cur)
    return b.build()


def test_evaluate_squaring_chain():
    slp = squaring_chain_param(3)
    assert evaluate(slp, {"T": Fraction(1)}, {}, QQ) == [Fraction(256)]


def test_evaluate_fn_example():
    fam = fn_slp(2)
    vals = evaluate(
        fam.slp,
        {"T": Fraction(0), "U1": Fraction(5), "U2": Fraction(7)},
        {"X1": Fraction(1), "X2": Fraction(1)},
        QQ,
    )
    assert vals == [Fraction(3)]


def test_evaluate_over_prime_field():
    slp = squaring_chain_var(4)
    fp = PrimeField(13)
    assert evaluate(slp, {}, {"Y": 2}, fp) == [pow(2, 16, 13)]


def test_validate_well_formed():
    assert validate(squaring_chain_var(3)).ok


def test_validate_divisor_depends_on_variable():
    b = SlpBuilder(variables=["Y"])
    y = b.var("Y")
    b.output(b.div(b.const(1), y))
    report = validate(b.build())
    assert not report.ok
    assert "divisor depends on variable" in report.first().reason


def test_validate_strict_rejects_division():
    b = SlpBuilder(params=["T"])
    b.output(b.div(b.param("T"), b.const(2)))
    assert validate(b.build(), strict=False).ok
    assert not validate(b.build(), strict=True).ok


def test_pole_error_carries_node():
    b = SlpBuilder(params=["T"])
    b.output(b.div(b.const(1), b.param("T")))
    with pytest.raises(PoleError):
        evaluate(b.build(), {"T": Fraction(0)}, {}, QQ)


def test_profile_nonscalar_counting():
    # squaring chain on a variable: every squaring is essential
    for n in (1, 3, 5):
        pr = profile(squaring_chain_var(n))
        assert pr.L_over_params == n
    # squaring chain on a parameter: free over the parameter field
    pr = profile(squaring_chain_param(3))
    assert pr.L_over_params == 0
    assert pr.L_over_scalars == 3


def test_profile_invariants_random():
    rng = random.Random(7)
    for _ in range(100):
        b = SlpBuilder(params=["T"], variables=["X", "Y"])
        pool = [b.param("T"), b.var("X"), b.var("Y"), b.const(rng.randint(-3, 3))]
        for _ in range(rng.randint(1, 12)):
            op = rng.choice(["add", "sub", "mul"])
            pool.append(getattr(b, op)(rng.choice(pool), rng.choice(pool)))
        b.output(pool[-1])
        pr = profile(b.build())
        assert 0 <= pr.L_over_params <= pr.L_over_scalars <= pr.total_ops


def test_profile_degree_bound_dominates_true_degree():
    rng = random.Random(11)
    for _ in range(50):
        b = SlpBuilder(variables=["X", "Y"])
        pool = [b.var("X"), b.var("Y"), b.const(rng.randint(-2, 2))]
        for _ in range(rng.randint(1, 8)):
            pool.append(getattr(b, rng.choice(["add", "sub", "mul"]))(rng.choice(pool), rng.choice(pool)))
        b.output(pool[-1])
        slp = b.build()
        p = expand(slp)
        assert profile(slp).var_degree_bound[0] >= p.total_degree()


def test_rearranged_size():
    assert rearranged_size(3, 2, 1) == 24
    assert rearranged_size(0, 1, 1) == 2
    assert rearranged_size(0, 0, 0) == 0


def test_parse_minimal_program():
    slp = parse_slp("slp v1\nvar Y\nt0 = mul Y Y\noutput t0\n")
    assert evaluate(slp, {}, {"Y": Fraction(3)}, QQ) == [Fraction(9)]


def test_serialize_parse_round_trip():
    fam = fn_slp(4)
    again = parse_slp(serialize_slp(fam.slp))
    assert again == fam.slp


def test_parse_error_carries_line_number():
    with pytest.raises(SlpParseError) as e:
        parse_slp("slp v1\nvar Y\nt0 = frobnicate Y Y\noutput t0\n")
    assert e.value.line_no == 3
