import random
from fractions import Fraction

import pytest

from elimkit import families
from elimkit.families import (
    ell_matrix,
    ell_matrix_mod,
    fd_slp,
    fn_slp,
    gtilde_chain_value,
    gtilde_system,
    omega_d,
    phi_formula,
    pn_first_order,
    pn_specialized,
    product_of_linear_factors,
    rn_slp,
    rn_value,
    sample_gamma_n,
)
from elimkit.poly import MultiPoly, expand, parse_poly
from elimkit.rings import QQ, PrimeField
from elimkit.slp import evaluate, profile


def test_fd_expansion_example():
    # d = 3: (U^3 - 1) * (1 + U*Y + U^2*Y^2 + U^3*Y^3); at U=2 the factor is 7
    p = expand(fd_slp(3))
    at2 = {"U": Fraction(2)}
    assert p.evaluate({**at2, "Y": Fraction(0)}) == 7
    assert p.evaluate({**at2, "Y": Fraction(1)}) == 7 * (1 + 2 + 4 + 8)
    # on the fiber u^d = 1 the whole family vanishes
    assert all(expand(fd_slp(1)).evaluate({"U": Fraction(1), "Y": Fraction(y)}) == 0 for y in range(-2, 3))
    # u = -1 is off the fiber for d = 3: the coefficient vector is nonzero
    assert any(v != 0 for v in omega_d(3, Fraction(-1)))


def test_fd_general_d_matches_sum_form():
    for d in (1, 2, 3, 4, 5, 6, 7):
        p = expand(fd_slp(d))
        u, y = MultiPoly.var("U"), MultiPoly.var("Y")
        s = MultiPoly.zero()
        for j in range(d + 1):
            s = s + u**j * y**j
        assert p == (u**d - MultiPoly.const(1)) * s


def test_omega_d_examples():
    assert omega_d(2, Fraction(2)) == [Fraction(3), Fraction(6), Fraction(12)]
    assert omega_d(2, Fraction(0)) == [Fraction(-1), Fraction(0), Fraction(0)]
    fp = PrimeField(5)
    assert omega_d(4, 2, fp) == [0, 0, 0, 0, 0]


def test_pn_specialized_examples():
    assert str(pn_specialized(2, 0, [1, 1])) == "Y^4 - 6*Y^3 + 11*Y^2 - 6*Y"
    assert pn_specialized(1, 1, [1]) == parse_poly("Y^2 - 3*Y + 2")
    assert pn_specialized(1, 0, [1]) == parse_poly("Y^2 - Y")


def test_product_of_linear_factors_matches_naive():
    rng = random.Random(3)
    for _ in range(25):
        roots = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(rng.randint(0, 40))]
        p = product_of_linear_factors(roots)
        q = MultiPoly.const(1)
        for r in roots:
            q = q * (MultiPoly.var("Y") - MultiPoly.const(r))
        assert p == q


def test_ell_matrix_examples():
    m1 = ell_matrix(1)
    assert m1.rows == ((1, 1), (1, 0))
    m2 = ell_matrix(2)
    assert tuple(m2.entry(2, j) for j in range(4)) == (6, 5, 4, 3)
    for n in (1, 2, 3):
        m = ell_matrix(n)
        assert all(m.entry(1, j) == 1 for j in range(2**n))


def test_ell_matrix_mod_consistent():
    p = 10007
    for n in (1, 2, 3, 4):
        exact = ell_matrix(n)
        modp = ell_matrix_mod(n, p)
        assert all(modp[k][j] == exact.rows[k][j] % p for k in range(2**n) for j in range(2**n))


def test_ell_degree_in_j():
    # row k of the ell-matrix is a degree-(k-1) polynomial in the column index
    m = ell_matrix(3)
    for k in range(1, 9):
        vals = [m.entry(k, j) for j in range(8)]
        for _ in range(k - 1):
            vals = [b - a for a, b in zip(vals, vals[1:])]
        assert len(set(vals)) == 1  # (k-1)-th finite difference is constant


def test_first_order_signs():
    fo = pn_first_order(2)
    assert fo.beta == (-6, 11, -6, 0)
    assert fo.beta_unsigned == (6, 11, 6, 0)
    l1 = fo.linear_form(1, signed=False)
    u1, u2 = MultiPoly.var("U1"), MultiPoly.var("U2")
    assert l1 == MultiPoly.const(1) + u1 + u2 + u1 * u2


def test_fn_slp_values():
    fam = fn_slp(3)
    v = evaluate(
        fam.slp,
        {"T": Fraction(1), "U1": Fraction(1), "U2": Fraction(1), "U3": Fraction(1)},
        {"X1": Fraction(1), "X2": Fraction(0), "X3": Fraction(1)},
        QQ,
    )
    assert v == [Fraction(6)]
    assert profile(fn_slp(5).slp).L_over_params == 4


def test_rn_value_examples():
    assert rn_value(3, 0, 1, [1, 1, 1], [1, 0, 1]) == 0
    assert rn_value(3, 1, 1, [1, 1, 1], [1, 0, 1]) == 6
    assert rn_value(3, 2, 0, [1, 1, 1], [0, 0, 1]) == 8


def test_rn_slp_matches_closed_form():
    rng = random.Random(2)
    for n in (1, 2, 3, 4):
        slp = rn_slp(n)
        for _ in range(10):
            z, t = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))
            u = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            x = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
            params = {"Z": z, "T": t, **{f"U{i+1}": u[i] for i in range(n)}}
            varsv = {f"X{i+1}": x[i] for i in range(n)}
            assert evaluate(slp, params, varsv, QQ) == [rn_value(n, z, t, u, x)]


def test_gtilde_system_shape_and_chain():
    for n in (2, 3, 5):
        sys_ = gtilde_system(n)
        eqs = sys_["equations"]
        assert len(eqs) == 3 * n - 1
        # every equation has at most 4 terms
        assert all(len(g.terms) <= 4 for g in eqs)
    # solving the chain at a hypercube vertex reproduces the F_n value
    rng = random.Random(6)
    for n in (2, 3, 4):
        fam = fn_slp(n)
        for _ in range(10):
            t = Fraction(rng.randint(-3, 3))
            u = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            eps = [rng.randint(0, 1) for _ in range(n)]
            params = {"T": t, **{f"U{i+1}": u[i] for i in range(n)}}
            varsv = {f"X{i+1}": Fraction(eps[i]) for i in range(n)}
            assert gtilde_chain_value(n, t, u, eps) == evaluate(fam.slp, params, varsv, QQ)[0]


def test_gamma_n_shape_and_range():
    for n in (1, 3, 6):
        g = sample_gamma_n(n, seed=1)
        assert len(g) == 4 * n + 10
        assert all(len(row) == n for row in g)
        assert all(abs(e) <= 3 * n**3 for row in g for e in row)
    assert sample_gamma_n(4, seed=2) == sample_gamma_n(4, seed=2)


def test_phi_formula():
    rep = phi_formula(4)
    assert rep["m"] == 26
    assert rep["length"] == len(rep["text"])
    sparse = phi_formula(4, variant="sparse")
    assert sparse["variant"] == "sparse" and sparse["length"] > 0
    with pytest.raises(ValueError):
        phi_formula(4, variant="nope")
