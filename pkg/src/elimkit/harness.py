"""Certificate suite: hypercube elimination, exact rank certificates, probes.

The lower-bound arguments reduce to the nonsingularity of two explicit
matrices (the first-order coefficient matrix, and that matrix evaluated at
points) and to a Vandermonde tangent matrix transported to a prime field.
Each check here emits a re-verifiable certificate: field, seed, points and
pivot sequence.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import families, linalg
from .families import HypercubeFamily, bit
from .poly import MultiPoly, uni_gcd
from .rings import QQ, PrimeField, least_prime_above
from .slp import evaluate as slp_evaluate

__all__ = [
    "RankCertificate",
    "FIXED_62BIT_PRIME",
    "eliminate_hypercube",
    "separability_check",
    "independence_rank",
    "lk_at_points_rank",
    "tangent_rank_paradigm1",
    "blowup_report",
    "robustness_probe_paradigm1",
    "robustness_probe_paradigm2",
    "distinctness_probe_gamma_n",
]

# Least prime above 2**61; used for all large rank certificates mod p.
FIXED_62BIT_PRIME = 2305843009213693967


@dataclass(frozen=True)
class RankCertificate:
    matrix_description: str
    side: int
    rank: int
    field: str
    witness: Tuple[Tuple[int, int], ...]
    extras: dict = dc_field(default_factory=dict)

    @property
    def full_rank(self) -> bool:
        return self.rank == self.side

    def to_json(self) -> str:
        return json.dumps(
            {
                "matrix": self.matrix_description,
                "side": self.side,
                "rank": self.rank,
                "field": self.field,
                "pivots": [list(p) for p in self.witness],
                **self.extras,
            }
        )


def eliminate_hypercube(fam: HypercubeFamily, t=None, u: Sequence = None, mode: str = "specialized"):
    """Elimination polynomial of the hypercube family.

    specialized mode evaluates the circuit at every vertex of {0,1}^n (no
    expansion) and multiplies the linear factors (Y - value); first-order mode
    returns the exact T^0/T^1 coefficient data of the generic product.
    """
    n = fam.n
    if mode == "first-order":
        return families.pn_first_order(n)
    if mode != "specialized":
        raise ValueError(f"unknown mode {mode!r}")
    if n > 20:
        raise ValueError("specialized elimination limited to n <= 20")
    if t is None or u is None:
        raise ValueError("specialized mode needs parameter values t and u")
    params = {"T": Fraction(t)}
    for i in range(1, n + 1):
        params[f"U{i}"] = Fraction(u[i - 1])
    roots = []
    for j in range(2**n):
        point = {f"X{i}": Fraction(bit(j, i)) for i in range(1, n + 1)}
        roots.append(slp_evaluate(fam.slp, params, point, QQ)[0])
    return families.product_of_linear_factors(roots)


def separability_check(p: MultiPoly) -> dict:
    """Separable iff gcd(p, p') = 1."""
    if p.is_zero():
        raise ValueError("separability of the zero polynomial is undefined")
    sup = p.support()
    if len(sup) != 1:
        raise ValueError("expected a nonconstant univariate polynomial")
    g = uni_gcd(p, p.derivative(sup[0]))
    return {"separable": g == MultiPoly.const(1), "gcd_with_derivative": g}


def independence_rank(n: int, field: str = "rationals", prime: Optional[int] = None) -> RankCertificate:
    """Exact rank of the first-order coefficient matrix; full rank certifies
    linear independence of the 2^n first-order forms.

    Over the rationals (n <= 6) Bareiss elimination is used; over F_p
    (n <= 10) ordinary elimination, and full rank mod p certifies full rank
    over Q as well.
    """
    if field == "rationals":
        if n > 6:
            raise ValueError("rational path limited to n <= 6")
        matrix = families.ell_matrix(n).rows
        rank, pivots = linalg.bareiss_rank(matrix)
        field_name = "Q"
        extras = {}
    elif field == "prime":
        if n > 10:
            raise ValueError("prime-field path limited to n <= 10")
        p = prime or FIXED_62BIT_PRIME
        matrix = families.ell_matrix_mod(n, p)
        rank, pivots = linalg.rank_mod_p_fast(matrix, p)
        field_name = f"F_{p}"
        extras = {
            "certified_over_Q": rank == 2**n,
            "note": "full rank mod p implies full rank over Q"
            if rank == 2**n
            else "inconclusive over Q, escalate to exact",
        }
    else:
        raise ValueError(f"unknown field {field!r}")
    return RankCertificate(
        matrix_description=f"first-order coefficient matrix, n={n}",
        side=2**n,
        rank=rank,
        field=field_name,
        witness=tuple(pivots),
        extras=extras,
    )


def _monomial_values(n: int, point: Sequence[int]) -> List[int]:
    """prod point_i^bit_i(j) for all j in [0, 2^n), by bit dynamic programming."""
    vals = [1]
    for i in range(n):
        vals = vals + [v * point[i] for v in vals]
    return vals


def _random_points(n: int, seed: int) -> List[Tuple[int, ...]]:
    rng = random.Random(seed)
    bound = 2**n
    return [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(2**n)]


def lk_at_points_rank(
    n: int,
    points: Optional[Sequence[Sequence[int]]] = None,
    seed: int = 0,
    field: str = "rationals",
    prime: Optional[int] = None,
    signed: bool = True,
    max_retries: int = 5,
) -> RankCertificate:
    """Rank of the first-order linear forms evaluated at 2^n points.

    With random small-integer points, full rank is expected; rank-deficient
    draws are retried with fresh seeds (logged, bounded).  Row scaling by the
    sign convention cannot change the rank.
    """
    if field == "rationals" and n > 6:
        raise ValueError("rational path limited to n <= 6")
    if field == "prime" and n > 10:
        raise ValueError("prime-field path limited to n <= 10")
    ell = families.ell_matrix(n) if field == "rationals" or n <= 6 else None
    attempts = []
    tries = 1 if points is not None else max_retries
    for attempt in range(tries):
        pts = [tuple(int(c) for c in pt) for pt in points] if points is not None else _random_points(n, seed + attempt)
        if len(pts) != 2**n:
            raise ValueError(f"need exactly {2**n} points")
        side = 2**n
        if field == "rationals":
            mono = [_monomial_values(n, pt) for pt in pts]
            matrix = [
                [
                    ((-1) ** k if signed else 1)
                    * sum(ell.entry(k, j) * mono[col][j] for j in range(side))
                    for col in range(side)
                ]
                for k in range(1, side + 1)
            ]
            rank, pivots = linalg.bareiss_rank(matrix)
            field_name = "Q"
        else:
            p = prime or FIXED_62BIT_PRIME
            ellp = families.ell_matrix_mod(n, p)
            mono = [[v % p for v in _monomial_values(n, pt)] for pt in pts]
            sgn = lambda k: (p - 1 if (signed and k % 2 == 1) else 1)
            matrix = [
                [
                    sgn(k) * sum(ellp[k - 1][j] * mono[col][j] for j in range(side)) % p
                    for col in range(side)
                ]
                for k in range(1, side + 1)
            ]
            rank, pivots = linalg.rank_mod_p_fast(matrix, p)
            field_name = f"F_{p}"
        attempts.append({"seed": None if points is not None else seed + attempt, "rank": rank})
        if rank == side:
            return RankCertificate(
                matrix_description=f"first-order forms at points, n={n}",
                side=side,
                rank=rank,
                field=field_name,
                witness=tuple(pivots),
                extras={"points": [list(pt) for pt in pts], "attempts": attempts},
            )
    if points is not None:
        return RankCertificate(
            matrix_description=f"first-order forms at points, n={n}",
            side=2**n,
            rank=rank,
            field=field_name,
            witness=tuple(pivots),
            extras={"points": [list(pt) for pt in pts], "attempts": attempts},
        )
    raise RuntimeError(f"no full-rank points found in {max_retries} retries: {attempts}")


def tangent_rank_paradigm1(d: int, p: int) -> RankCertificate:
    """Rank of the d x (d+1) tangent matrix (d * z^(k j)) over F_p.

    z is a primitive d-th root of unity in F_p; columns run over exponents
    j = -1, 0, ..., d-1.  A Vandermonde matrix on distinct nodes is
    nonsingular over any field, so full rank here is a finite-field transport
    of the complex roots-of-unity argument, not a statement about C.
    """
    if d < 1 or d > 64:
        raise ValueError("d must be in [1, 64]")
    if d % p == 0:
        raise ValueError("the field characteristic must not divide d")
    fp = PrimeField(p)
    zeta = fp.find_primitive_root(d)
    zinv = fp.inv(zeta)
    matrix = []
    for k in range(d):
        row = []
        zk = pow(zeta, k, p)
        val = pow(zinv, k, p)  # j = -1
        for _ in range(d + 1):
            row.append(d * val % p)
            val = val * zk % p
        matrix.append(row)
    rank, pivots = linalg.rank_mod_p(matrix, p)
    return RankCertificate(
        matrix_description=f"tangent matrix d={d} (finite-field transport)",
        side=d,
        rank=rank,
        field=f"F_{p}",
        witness=tuple(pivots),
        extras={"zeta": zeta, "columns": d + 1},
    )


def blowup_report(n: int, seed: int = 0) -> dict:
    """Bundle of the two rank certificates behind the 2^n output-size bound."""
    field = "rationals" if n <= 6 else "prime"
    cert_indep = independence_rank(n, field=field)
    cert_points = lk_at_points_rank(n, seed=seed, field=field)
    both_full = cert_indep.full_rank and cert_points.full_rank
    return {
        "n": n,
        "independent_directions": cert_indep.rank,
        "certified_lower_bound_m_star": 2**n if both_full else None,
        "certificates": [cert_indep, cert_points],
    }


def robustness_probe_paradigm1(d: int, p: int) -> dict:
    """Enumerate the fiber {u in F_p : u^d = 1}; it has exactly d elements
    when d divides p - 1 (finite fiber: the map collapses it to the origin)."""
    if (p - 1) % d != 0:
        raise ValueError(f"{d} does not divide {p} - 1")
    fp = PrimeField(p)
    fiber = [u for u in range(1, p) if pow(u, d, p) == 1]
    zero_checked = all(
        all(v == 0 for v in families.omega_d(d, u, fp)) for u in fiber
    )
    return {"d": d, "p": p, "fiber": fiber, "fiber_size": len(fiber), "omega_vanishes": zero_checked}


def robustness_probe_paradigm2(n: int, samples: int = 20, seed: int = 0) -> dict:
    """The slice t = 0 of the hypercube product is one and the same polynomial
    for every u (infinite fiber), while t = 1 genuinely varies with u."""
    if n > 10:
        raise ValueError("n must be <= 10")
    rng = random.Random(seed)
    reference = families.pn_specialized(n, 0, [0] * n)
    constant_slice = True
    for _ in range(samples):
        u = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
        if not (families.pn_specialized(n, 0, u) == reference):
            constant_slice = False
            break
    # two u with distinct monomial products must give distinct root multisets at t = 1
    u1 = [Fraction(2)] * n
    u2 = [Fraction(3)] * n
    varies = not (families.pn_specialized(n, 1, u1) == families.pn_specialized(n, 1, u2))
    return {
        "n": n,
        "samples": samples,
        "t0_slice_constant": constant_slice,
        "t0_polynomial": str(reference),
        "t1_varies_with_u": varies,
    }


def _rn_multipoly(n: int, z, t, u: Sequence) -> MultiPoly:
    lin = MultiPoly.zero()
    for i in range(1, n + 1):
        lin = lin + MultiPoly.var(f"X{i}") * Fraction(2 ** (i - 1))
    prod = MultiPoly.const(1)
    for i in range(1, n + 1):
        prod = prod * (MultiPoly.const(1) + MultiPoly.var(f"X{i}") * (Fraction(u[i - 1]) - 1))
    return (lin + prod * Fraction(t)) * Fraction(z)


def distinctness_probe_gamma_n(n: int, trials: int, seed: int = 0) -> dict:
    """Randomized identification check of gamma_n on the cone of R_n.

    Samples pairs of parameter tuples; whenever the two expanded polynomials
    differ, their value vectors at the rows of gamma_n must differ too.  Pairs
    with equal polynomials are excluded from the distinct-pair statistics.
    """
    if n > 8:
        raise ValueError("n must be <= 8")
    gamma = families.sample_gamma_n(n, seed)
    rng = random.Random(seed)
    distinct_pairs = 0
    equal_pairs = 0
    counterexamples = []
    for _ in range(trials):
        a = (rng.randint(-3, 3), rng.randint(-3, 3), [rng.randint(-3, 3) for _ in range(n)])
        bb = (rng.randint(-3, 3), rng.randint(-3, 3), [rng.randint(-3, 3) for _ in range(n)])
        pa = _rn_multipoly(n, *a)
        pb = _rn_multipoly(n, *bb)
        if pa == pb:
            equal_pairs += 1
            continue
        distinct_pairs += 1
        va = [pa.evaluate({f"X{i+1}": Fraction(pt[i]) for i in range(n)}) for pt in gamma]
        vb = [pb.evaluate({f"X{i+1}": Fraction(pt[i]) for i in range(n)}) for pt in gamma]
        if va == vb:
            counterexamples.append({"a": a, "b": bb})
    return {
        "n": n,
        "trials": trials,
        "distinct_pairs": distinct_pairs,
        "equal_pairs": equal_pairs,
        "counterexamples": counterexamples,
    }
