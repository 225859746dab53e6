import json
import random
from fractions import Fraction

import pytest

from elimkit import harness
from elimkit.families import fn_slp, pn_specialized
from elimkit.harness import (
    FIXED_62BIT_PRIME,
    blowup_report,
    distinctness_probe_gamma_n,
    eliminate_hypercube,
    independence_rank,
    lk_at_points_rank,
    robustness_probe_paradigm1,
    robustness_probe_paradigm2,
    separability_check,
    tangent_rank_paradigm1,
)
from elimkit.poly import parse_poly
from elimkit.rings import least_prime_above
from elimkit.slp import SlpBuilder


def test_eliminate_hypercube_examples():
    fam = fn_slp(2)
    assert str(eliminate_hypercube(fam, 0, [1, 1])) == "Y^4 - 6*Y^3 + 11*Y^2 - 6*Y"
    # n=3, all monomials 1: roots are 1..8
    fam3 = fn_slp(3)
    got = eliminate_hypercube(fam3, 1, [1, 1, 1])
    want = harness.families.product_of_linear_factors([Fraction(j + 1) for j in range(8)])
    assert got == want


def test_eliminate_hypercube_first_order_mode():
    fo = eliminate_hypercube(fn_slp(2), mode="first-order")
    assert fo.beta == (-6, 11, -6, 0)


def test_separability():
    fam = fn_slp(2)
    p = eliminate_hypercube(fam, 1, [2, 3])
    assert separability_check(p)["separable"]
    rep = separability_check(parse_poly("Y^2 - 2*Y + 1"))
    assert not rep["separable"]
    assert rep["gcd_with_derivative"] == parse_poly("Y - 1")
    assert separability_check(pn_specialized(2, 0, [1, 1]))["separable"]


def test_independence_rank_small():
    assert independence_rank(1).rank == 2
    assert independence_rank(2).rank == 4
    cert = independence_rank(3)
    assert cert.full_rank and cert.field == "Q"
    assert json.loads(cert.to_json())["rank"] == 8


def test_independence_rank_mod_p():
    cert = independence_rank(4, field="prime")
    assert cert.full_rank
    assert cert.extras["certified_over_Q"]
    assert str(FIXED_62BIT_PRIME) in cert.field


def test_lk_at_points_examples():
    cert = lk_at_points_rank(1, points=[(0,), (1,)], signed=False)
    assert cert.rank == 2
    cert2 = lk_at_points_rank(2, seed=0)
    assert cert2.rank == 4
    # sign convention cannot change the rank
    assert lk_at_points_rank(2, seed=0, signed=True).rank == lk_at_points_rank(2, seed=0, signed=False).rank


def test_tangent_rank_examples():
    assert tangent_rank_paradigm1(2, 5).rank == 2
    assert tangent_rank_paradigm1(4, 5).rank == 4
    with pytest.raises(ValueError):
        tangent_rank_paradigm1(5, 5)


def test_blowup_report():
    for n in (1, 3):
        rep = blowup_report(n)
        assert rep["certified_lower_bound_m_star"] == 2**n
        assert all(c.full_rank for c in rep["certificates"])


def test_robustness_paradigm1():
    rep = robustness_probe_paradigm1(4, 5)
    assert rep["fiber"] == [1, 2, 3, 4] and rep["fiber_size"] == 4
    assert rep["omega_vanishes"]


def test_robustness_paradigm2():
    rep = robustness_probe_paradigm2(2, samples=20, seed=0)
    assert rep["t0_slice_constant"]
    assert rep["t0_polynomial"] == "Y^4 - 6*Y^3 + 11*Y^2 - 6*Y"
    assert rep["t1_varies_with_u"]


def test_distinctness_probe():
    rep = distinctness_probe_gamma_n(3, 200, seed=0)
    assert rep["counterexamples"] == []
    assert rep["distinct_pairs"] + rep["equal_pairs"] == 200
    empty = distinctness_probe_gamma_n(2, 0)
    assert empty["distinct_pairs"] == 0 and empty["counterexamples"] == []


def test_rank_mod_p_matches_exact_on_random_matrices():
    from elimkit.linalg import bareiss_rank, rank_mod_p_fast

    rng = random.Random(4)
    p = FIXED_62BIT_PRIME
    for _ in range(20):
        n = rng.randint(1, 8)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        exact, _ = bareiss_rank(rows)
        modp, _ = rank_mod_p_fast([[e % p for e in row] for row in rows], p)
        # mod-p rank can only drop below the exact rank
        assert modp <= exact
        if modp == n:
            assert exact == n
