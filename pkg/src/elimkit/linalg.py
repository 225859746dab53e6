"""Exact linear algebra: fraction-free rank over Z/Q, fast rank mod p, solving.

Rank over the rationals uses Bareiss (fraction-free) elimination so that all
intermediate values stay integral.  Rank mod p comes in two flavours: a plain
Python version for small matrices and a numpy-vectorized one used for sides in
the hundreds with a 62-bit modulus.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "bareiss_rank",
    "rank_mod_p",
    "rank_mod_p_fast",
    "solve_exact",
    "SingularSystemError",
    "InconsistentSystemError",
]


class SingularSystemError(ValueError):
    """The design matrix does not have full column rank."""


class InconsistentSystemError(ValueError):
    """The right-hand side is not in the column span."""


def _clear_denominators(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in fr])
    return out


def bareiss_rank(matrix: Sequence[Sequence]) -> Tuple[int, List[Tuple[int, int]]]:
    """Exact rank and pivot positions via fraction-free Gaussian elimination.

    Accepts integer or rational entries; rational rows are scaled to integers
    first (row scaling does not change rank).  Returns (rank, pivots) where
    pivots is the list of (row, column) positions used, ordered by elimination
    step; it is a re-verification witness.
    """
    m = _clear_denominators(matrix)
    if not m:
        return 0, []
    nrows, ncols = len(m), len(m[0])
    pivots: List[Tuple[int, int]] = []
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        pivots.append((r, c))
        pv = m[r][c]
        for i in range(r + 1, nrows):
            fi = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c, ncols):
                row_i[j] = (pv * row_i[j] - fi * row_r[j]) // prev
        prev = pv
        r += 1
        if r == nrows:
            break
    return r, pivots


def rank_mod_p(matrix: Sequence[Sequence[int]], p: int) -> Tuple[int, List[Tuple[int, int]]]:
    """Rank over F_p by ordinary elimination; fine for small sides."""
    m = [[int(x) % p for x in row] for row in matrix]
    if not m:
        return 0, []
    nrows, ncols = len(m), len(m[0])
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        pivots.append((r, c))
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(r + 1, nrows):
            fi = m[i][c]
            if fi:
                row_i, row_r = m[i], m[r]
                m[i] = [(a - fi * b) % p for a, b in zip(row_i, row_r)]
        r += 1
        if r == nrows:
            break
    return r, pivots


# ---------------------------------------------------------------------------
# Fast elimination mod a 62-bit prime.
#
# Products a*b with a, b < p < 2**62 are reduced exactly: the quotient
# floor(a*b/p) is estimated in 80-bit extended precision (64-bit mantissa, so
# the estimate is off by at most a few units) and the remainder is recovered
# through wrap-around uint64 arithmetic, then corrected into [0, p).  This
# requires p < 2**62 so that the correction window fits in a signed int64.
# ---------------------------------------------------------------------------

_LONGDOUBLE_OK = np.finfo(np.longdouble).nmant >= 63


def _mulmod_vec(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    pf = np.longdouble(p)
    q = (a.astype(np.longdouble) * b.astype(np.longdouble) / pf).astype(np.uint64)
    r = (a * b - q * np.uint64(p)).astype(np.int64)
    ip = np.int64(p)
    for _ in range(3):
        r = np.where(r < 0, r + ip, r)
    for _ in range(3):
        r = np.where(r >= ip, r - ip, r)
    return r.astype(np.uint64)


def rank_mod_p_fast(matrix, p: int) -> Tuple[int, List[Tuple[int, int]]]:
    """Rank over F_p, vectorized; p must be prime with 2 < p < 2**62."""
    if p >= 2**62:
        raise ValueError("modulus too large for the fast elimination path")
    if not _LONGDOUBLE_OK:  # pragma: no cover - platform dependent
        return rank_mod_p(matrix, p)
    m = np.array([[int(x) % p for x in row] for row in matrix], dtype=np.uint64)
    if m.size == 0:
        return 0, []
    nrows, ncols = m.shape
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        pivots.append((r, c))
        inv = pow(int(m[r, c]), p - 2, p)
        m[r, c:] = _mulmod_vec(m[r, c:], np.uint64(inv), p)
        if r + 1 < nrows:
            f = m[r + 1 :, c]
            prod = _mulmod_vec(f[:, None], m[r, c:][None, :], p)
            diff = m[r + 1 :, c:].astype(np.int64) - prod.astype(np.int64)
            m[r + 1 :, c:] = np.where(diff < 0, diff + np.int64(p), diff).astype(np.uint64)
        r += 1
        if r == nrows:
            break
    return r, pivots


def solve_exact(a_rows: Sequence[Sequence], rhs: Sequence, ring) -> list:
    """Solve A x = rhs exactly over the given ring (possibly overdetermined).

    Raises SingularSystemError when A lacks full column rank and
    InconsistentSystemError when the system has no solution.
    """
    nrows = len(a_rows)
    ncols = len(a_rows[0]) if nrows else 0
    aug = [list(row) + [v] for row, v in zip(a_rows, rhs)]
    pivot_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not ring.is_zero(aug[i][c])), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = ring.inv(aug[r][c])
        aug[r] = [ring.mul(x, inv) for x in aug[r]]
        for i in range(nrows):
            if i != r and not ring.is_zero(aug[i][c]):
                fi = aug[i][c]
                aug[i] = [ring.sub(x, ring.mul(fi, y)) for x, y in zip(aug[i], aug[r])]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not ring.is_zero(aug[i][ncols]):
            raise InconsistentSystemError("values not in span")
    if len(pivot_cols) < ncols:
        raise SingularSystemError("points do not determine basis")
    sol = [ring.zero] * ncols
    for i, c in enumerate(pivot_cols):
        sol[c] = aug[i][ncols]
    return sol
