"""Generators for the explicit polynomial families and formulas.

Covers: the one-parameter family F_d = (U^d - 1) * sum U^j Y^j with its
coefficient map omega_d; the hypercube product P_n = prod_j (Y - (j + T *
prod U_i^bit)) with its first-order (mod T^2) structure and the integer
matrix of first-order coefficients; the hypercube circuit family F_n, its
four-term sparse equation chain, the cone R_n = Z * F_n, and the quantified
formulas built on R_n.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import MultiPoly
from .rings import QQ
from .slp import Slp, SlpBuilder, serialize_slp

try:  # GMP-backed multiplication for the Kronecker-packed products
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int

__all__ = [
    "EllMatrix",
    "HypercubeFamily",
    "FirstOrderData",
    "fd_slp",
    "omega_d",
    "pn_specialized",
    "product_of_linear_factors",
    "ell_matrix",
    "ell_matrix_mod",
    "pn_first_order",
    "fn_slp",
    "gtilde_system",
    "gtilde_chain_value",
    "rn_slp",
    "rn_value",
    "phi_formula",
    "sample_gamma_n",
    "bit",
]


def bit(j: int, i: int) -> int:
    """The i-th binary digit of j, i starting at 1."""
    return (j >> (i - 1)) & 1


# ---------------------------------------------------------------------------
# First paradigm: F_d and omega_d.
# ---------------------------------------------------------------------------


def _pow_ref(b: SlpBuilder, base, exponent: int):
    """base**exponent by binary powering; exponent >= 1."""
    result = None
    acc = base
    e = exponent
    while e:
        if e & 1:
            result = acc if result is None else b.mul(result, acc)
        e >>= 1
        if e:
            acc = b.mul(acc, acc)
    return result


def fd_slp(d: int) -> Slp:
    """Circuit computing (U^d - 1) * sum_{j=0}^{d} U^j Y^j (param U, var Y).

    For d = 2^(r+1) - 1 the geometric sum factors as prod_k (1 + (U Y)^(2^k)),
    giving a circuit of logarithmic size; other d fall back to a Horner chain
    of length d.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    b = SlpBuilder(params=["U"], variables=["Y"])
    u = b.param("U")
    y = b.var("Y")
    one = b.const(1)
    ud = _pow_ref(b, u, d)
    lead = b.sub(ud, one)
    z = b.mul(u, y)
    if (d + 1) & d == 0:  # d + 1 is a power of two
        r_plus_1 = (d + 1).bit_length() - 1
        power = z
        total = b.add(one, power)
        for _ in range(1, r_plus_1):
            power = b.mul(power, power)
            total = b.mul(total, b.add(one, power))
    else:
        total = b.add(one, z)
        for _ in range(d - 1):
            total = b.add(one, b.mul(z, total))
    b.output(b.mul(lead, total))
    return b.build()


def omega_d(d: int, u, ring=QQ) -> list:
    """Coefficient vector ((u^d - 1), (u^d - 1) u, ..., (u^d - 1) u^d)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    powers = [ring.one]
    for _ in range(d):
        powers.append(ring.mul(powers[-1], u))
    w = ring.sub(powers[d], ring.one)
    return [ring.mul(w, p) for p in powers]


# ---------------------------------------------------------------------------
# Second paradigm: the hypercube product P_n.
# ---------------------------------------------------------------------------


def product_of_linear_factors(roots: Sequence[Fraction], var: str = "Y") -> MultiPoly:
    """prod (var - root), exactly, via a balanced integer product.

    Roots are scaled to a common denominator so the heavy multiplications run
    on plain integers.
    """
    roots = [Fraction(r) for r in roots]
    if not roots:
        return MultiPoly.const(1)
    den = lcm(*[r.denominator for r in roots]) if len(roots) > 1 else roots[0].denominator
    scaled = [int(r * den) for r in roots]

    def pack(coeffs: List[int], slot_bytes: int) -> int:
        buf = bytearray(slot_bytes * len(coeffs))
        for i, x in enumerate(coeffs):
            if x:
                raw = x.to_bytes((x.bit_length() + 7) // 8, "little")
                off = i * slot_bytes
                buf[off : off + len(raw)] = raw
        return int.from_bytes(buf, "little")

    def pack_signed(coeffs: List[int], slot_bytes: int) -> int:
        pos = pack([x if x > 0 else 0 for x in coeffs], slot_bytes)
        neg = pack([-x if x < 0 else 0 for x in coeffs], slot_bytes)
        return pos - neg

    def mul_int(a: List[int], bq: List[int]) -> List[int]:
        if len(a) < 16 or len(bq) < 16:
            out = [0] * (len(a) + len(bq) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(bq):
                        out[i + j] += x * y
            return out
        # Kronecker substitution: pack each polynomial into one integer with
        # slots wide enough that convolution entries cannot overlap, multiply
        # once (GMP when available), and slice the slots back out.  Slot
        # values are signed; adding half a slot to each before slicing makes
        # them nonnegative so plain byte slicing recovers them.
        bits_a = max(max(a), -min(a)).bit_length()
        bits_b = max(max(bq), -min(bq)).bit_length()
        slot = bits_a + bits_b + min(len(a), len(bq)).bit_length() + 2
        sb = (slot + 7) // 8
        slot = 8 * sb
        half = 1 << (slot - 1)
        n_out = len(a) + len(bq) - 1
        prod_packed = int(_mpz(pack_signed(a, sb)) * _mpz(pack_signed(bq, sb)))
        offset = int.from_bytes(bytes(half.to_bytes(sb, "little")) * n_out, "little")
        raw = (prod_packed + offset).to_bytes(sb * (n_out + 1), "little")
        return [int.from_bytes(raw[i * sb : (i + 1) * sb], "little") - half for i in range(n_out)]

    def prod(lo: int, hi: int) -> List[int]:
        if hi - lo == 1:
            return [-scaled[lo], 1]  # Z - b, low-to-high
        mid = (lo + hi) // 2
        return mul_int(prod(lo, mid), prod(mid, hi))

    q = prod(0, len(roots))
    n = len(roots)
    # prod (Y - r_j) = prod (den*Y - b_j) / den^n; coefficient of Y^m is q_m / den^(n-m)
    den_pow = [1] * (n + 1)
    for k in range(1, n + 1):
        den_pow[k] = den_pow[k - 1] * den
    coeffs = [Fraction(q[m], den_pow[n - m]) for m in range(n + 1)]
    return MultiPoly.univariate(var, coeffs)


def pn_specialized(n: int, t, u: Sequence, max_n: int = 20) -> MultiPoly:
    """The monic degree-2^n product with roots j + t * prod u_i^bit_i(j)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > max_n:
        raise ValueError(f"n = {n} exceeds the specialized-product limit {max_n}")
    t = Fraction(t)
    u = [Fraction(x) for x in u]
    if len(u) != n:
        raise ValueError(f"expected {n} values for u")
    roots = []
    for j in range(2**n):
        mono = Fraction(1)
        for i in range(1, n + 1):
            if bit(j, i):
                mono *= u[i - 1]
        roots.append(j + t * mono)
    return product_of_linear_factors(roots)


@dataclass(frozen=True)
class EllMatrix:
    """Integer matrix of the first-order coefficients of the hypercube product.

    entry(k, j) with 1 <= k <= 2^n, 0 <= j < 2^n is the (k-1)-st elementary
    symmetric polynomial of {0, ..., 2^n - 1} with j removed.
    """

    n: int
    rows: Tuple[Tuple[int, ...], ...]  # rows indexed by k - 1

    @property
    def side(self) -> int:
        return 2**self.n

    def entry(self, k: int, j: int) -> int:
        return self.rows[k - 1][j]


def _full_symmetric_coeffs(values: Sequence[int]) -> List[int]:
    """[e_0, e_1, ..., e_N] of the given values."""
    e = [1]
    for a in values:
        e.append(0)
        for k in range(len(e) - 1, 0, -1):
            e[k] += a * e[k - 1]
    return e


def ell_matrix(n: int, max_n: int = 12) -> EllMatrix:
    """Exact integer first-order coefficient matrix, side 2^n.

    Column j comes from synthetic division of prod (x + j') by (x + j), which
    yields the elementary symmetric polynomials of the set minus j.
    """
    if not 1 <= n <= max_n:
        raise ValueError(f"n must be in [1, {max_n}]")
    side = 2**n
    full = _full_symmetric_coeffs(range(side))
    cols = []
    for j in range(side):
        q = [1]
        for k in range(1, side):
            q.append(full[k] - j * q[k - 1])
        cols.append(q)
    rows = tuple(tuple(cols[j][k] for j in range(side)) for k in range(side))
    return EllMatrix(n=n, rows=rows)


def ell_matrix_mod(n: int, p: int, max_n: int = 12) -> List[List[int]]:
    """The same matrix reduced mod p, built without big integers."""
    if not 1 <= n <= max_n:
        raise ValueError(f"n must be in [1, {max_n}]")
    side = 2**n
    e = [1]
    for a in range(side):
        e.append(0)
        for k in range(len(e) - 1, 0, -1):
            e[k] = (e[k] + a * e[k - 1]) % p
    cols = []
    for j in range(side):
        q = [1]
        for k in range(1, side):
            q.append((e[k] - j * q[k - 1]) % p)
        cols.append(q)
    return [[cols[j][k] for j in range(side)] for k in range(side)]


@dataclass(frozen=True)
class FirstOrderData:
    """T^0 and T^1 coefficients of the hypercube product, both conventions.

    beta[k-1] and ell give the true coefficients of the expanded product
    (carrying the (-1)^k factor); beta_unsigned / unsigned rows are the
    plain elementary-symmetric variant without it.
    """

    n: int
    beta: Tuple[Fraction, ...]
    beta_unsigned: Tuple[int, ...]
    ell: EllMatrix

    def linear_form(self, k: int, signed: bool = True) -> MultiPoly:
        """L_k as a polynomial in U_1..U_n: sum_j (+-)ell_{k,j} prod U_i^bit."""
        names = tuple(f"U{i}" for i in range(1, self.n + 1))
        sign = (-1) ** k if signed else 1
        terms = {}
        for j in range(2**self.n):
            exps = tuple(bit(j, i) for i in range(1, self.n + 1))
            c = sign * self.ell.entry(k, j)
            if c:
                terms[exps] = Fraction(c)
        return MultiPoly(names, terms)


def pn_first_order(n: int, max_n: int = 12) -> FirstOrderData:
    if not 1 <= n <= max_n:
        raise ValueError(f"n must be in [1, {max_n}]")
    side = 2**n
    e = _full_symmetric_coeffs(range(side))
    beta_unsigned = tuple(e[k] for k in range(1, side + 1))
    beta = tuple(Fraction((-1) ** k * e[k]) for k in range(1, side + 1))
    return FirstOrderData(n=n, beta=beta, beta_unsigned=beta_unsigned, ell=ell_matrix(n, max_n))


# ---------------------------------------------------------------------------
# The hypercube circuit family F_n and its relatives.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypercubeFamily:
    """F over params (T, U_1..U_n) and vars (X_1..X_n), with the implicit
    accompanying equations X_i^2 - X_i = 0."""

    n: int
    slp: Slp

    @property
    def param_names(self) -> Tuple[str, ...]:
        return self.slp.params

    @property
    def var_names(self) -> Tuple[str, ...]:
        return self.slp.vars


def _fn_body(b: SlpBuilder, n: int):
    """Builds sum 2^(i-1) X_i + T prod (1 + (U_i - 1) X_i); returns the ref."""
    t = b.param("T")
    us = [b.param(f"U{i}") for i in range(1, n + 1)]
    xs = [b.var(f"X{i}") for i in range(1, n + 1)]
    one = b.const(1)
    linear = xs[0]
    for i in range(2, n + 1):
        linear = b.add(linear, b.mul(b.const(2 ** (i - 1)), xs[i - 1]))
    prod = None
    for i in range(1, n + 1):
        factor = b.add(one, b.mul(b.sub(us[i - 1], one), xs[i - 1]))
        prod = factor if prod is None else b.mul(prod, factor)
    return b.add(linear, b.mul(t, prod))


def fn_slp(n: int) -> HypercubeFamily:
    if n < 1:
        raise ValueError("n must be >= 1")
    b = SlpBuilder()
    b.output(_fn_body(b, n))
    return HypercubeFamily(n=n, slp=b.build())


def rn_slp(n: int) -> Slp:
    """Circuit for the cone Z * (sum 2^(i-1) X_i + T prod (1 + (U_i-1) X_i))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    b = SlpBuilder()
    z = b.param("Z")
    b.output(b.mul(z, _fn_body(b, n)))
    return b.build()


def rn_value(n: int, z, t, u: Sequence, x: Sequence) -> Fraction:
    """Direct closed-form evaluation of R_n, independent of the circuit."""
    z, t = Fraction(z), Fraction(t)
    lin = sum(Fraction(2 ** (i - 1)) * Fraction(x[i - 1]) for i in range(1, n + 1))
    prod = Fraction(1)
    for i in range(1, n + 1):
        prod *= 1 + (Fraction(u[i - 1]) - 1) * Fraction(x[i - 1])
    return z * (lin + t * prod)


def gtilde_system(n: int) -> dict:
    """The sparse equation chain equivalent to the hypercube family.

    Returns {"equations": [3n-1 polynomials, each with at most four terms],
    "f": X_{2n-1} + T X_{3n-1}} over params T, U_1..U_n and variables
    X_1..X_{3n-1}.
    """
    if n < 2:
        raise ValueError("the sparse chain needs n >= 2")
    X = {i: MultiPoly.var(f"X{i}") for i in range(1, 3 * n)}
    U = {i: MultiPoly.var(f"U{i}") for i in range(1, n + 1)}
    T = MultiPoly.var("T")
    eqs: List[MultiPoly] = []
    for i in range(1, n + 1):
        eqs.append(X[i] * X[i] - X[i])
    eqs.append(X[n + 1] - 2 * X[2] - X[1])
    for j in range(n + 2, 2 * n):
        eqs.append(X[j] - X[j - 1] - (2 ** (j - n)) * X[j - n + 1])
    eqs.append(X[2 * n] - U[1] * X[1] + X[1] - 1)
    for k in range(2 * n + 1, 3 * n):
        i = k - 2 * n + 1
        eqs.append(X[k] - U[i] * X[k - 1] * X[i] + X[k - 1] * X[i] - X[k - 1])
    return {"equations": eqs, "f": X[2 * n - 1] + T * X[3 * n - 1]}


def gtilde_chain_value(n: int, t, u: Sequence, eps: Sequence[int]) -> Fraction:
    """Value of the chain's output polynomial at a hypercube vertex.

    Solves the triangular chain X_{n+1}..X_{3n-1} forward from X_i = eps_i and
    returns X_{2n-1} + t X_{3n-1}.
    """
    if n < 2:
        raise ValueError("the sparse chain needs n >= 2")
    x: Dict[int, Fraction] = {i + 1: Fraction(eps[i]) for i in range(n)}
    u = [Fraction(v) for v in u]
    x[n + 1] = 2 * x[2] + x[1]
    for j in range(n + 2, 2 * n):
        x[j] = x[j - 1] + (2 ** (j - n)) * x[j - n + 1]
    x[2 * n] = 1 + (u[0] - 1) * x[1]
    for k in range(2 * n + 1, 3 * n):
        i = k - 2 * n + 1
        x[k] = x[k - 1] * (1 + (u[i - 1] - 1) * x[i])
    return x[2 * n - 1] + Fraction(t) * x[3 * n - 1]


# ---------------------------------------------------------------------------
# The quantified formulas built on R_n.
# ---------------------------------------------------------------------------


def _m_of_n(n: int) -> int:
    return 4 * n + 10


def sample_gamma_n(n: int, seed: int = 0) -> List[List[int]]:
    """Seeded (m(n) x n) integer matrix with entries in [-3n^3, 3n^3]."""
    bound = 3 * n**3
    rows = []
    for i in range(_m_of_n(n)):
        row = []
        for j in range(n):
            digest = hashlib.sha256(f"gamma:{seed}:{i}:{j}".encode()).digest()
            row.append(int.from_bytes(digest, "big") % (2 * bound + 1) - bound)
        rows.append(row)
    return rows


def _pi_chain_lines(n: int, xs: Sequence[str], out_name: str) -> List[str]:
    """Sparse equation chain text binding `out_name` to Z*F_n at inputs xs."""
    loc = [f"W{j}" for j in range(n + 1, 3 * n)]  # chain variables
    names: Dict[int, str] = {i + 1: xs[i] for i in range(n)}
    for j in range(n + 1, 3 * n):
        names[j] = f"W{j}"
    lines = [f"exists {' '.join(loc)} ."]
    lines.append(f"  {names[n+1]} - 2*{names[2]} - {names[1]} = 0")
    for j in range(n + 2, 2 * n):
        lines.append(f"  & {names[j]} - {names[j-1]} - {2**(j-n)}*{names[j-n+1]} = 0")
    lines.append(f"  & {names[2*n]} - U1*{names[1]} + {names[1]} - 1 = 0")
    for k in range(2 * n + 1, 3 * n):
        i = k - 2 * n + 1
        lines.append(
            f"  & {names[k]} - U{i}*{names[k-1]}*{names[i]} + {names[k-1]}*{names[i]} - {names[k-1]} = 0"
        )
    lines.append(f"  & {out_name} = Z*{names[2*n-1]} + Z*T*{names[3*n-1]}")
    return lines


def phi_formula(n: int, variant: str = "circuit", seed: int = 0) -> dict:
    """Prenex existential formula with m(n) = 4n+10 value constraints.

    The circuit variant declares the R_n circuit once and references it by
    name in each constraint; the sparse variant inlines the four-term
    equation chain instead.  Lengths are relative to this serialization.
    Returns {n, variant, m, length, gamma_seed, gamma, text}.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if variant not in ("circuit", "sparse"):
        raise ValueError(f"unknown variant {variant!r}")
    m = _m_of_n(n)
    gamma = sample_gamma_n(n, seed)
    xs = [f"X{i}" for i in range(1, n + 1)]
    us = [f"U{i}" for i in range(1, n + 1)]
    lines: List[str] = []
    if variant == "circuit":
        lines.append("define Rn by circuit:")
        for ln in serialize_slp(rn_slp(n)).strip().splitlines():
            lines.append("  " + ln)
        lines.append("")
    lines.append(f"exists {' '.join(xs)} Z T {' '.join(us)} .")
    for i in range(1, n + 1):
        sep = "  " if i == 1 else "  & "
        lines.append(f"{sep}X{i}^2 - X{i} = 0")
    for k in range(1, m + 1):
        point = ", ".join(str(c) for c in gamma[k - 1])
        if variant == "circuit":
            lines.append(f"  & S{k} = Rn(Z, T, {', '.join(us)}, {point})")
        else:
            lines.append("  & (")
            lines += [
                "    " + ln
                for ln in _pi_chain_lines(n, [str(c) for c in gamma[k - 1]], f"S{k}")
            ]
            lines.append("  )")
    if variant == "circuit":
        lines.append(f"  & Y = Rn(Z, T, {', '.join(us)}, {', '.join(xs)})")
    else:
        lines.append("  & (")
        lines += ["    " + ln for ln in _pi_chain_lines(n, xs, "Y")]
        lines.append("  )")
    text = "\n".join(lines) + "\n"
    return {
        "n": n,
        "variant": variant,
        "m": m,
        "length": len(text),
        "gamma_seed": seed,
        "gamma": gamma,
        "text": text,
    }
