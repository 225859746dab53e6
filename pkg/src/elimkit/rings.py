"""Exact arithmetic backends: arbitrary-precision rationals and prime fields.

Both backends expose the same small protocol (add/sub/mul/div/neg/inv/eq,
zero/one, from_int) so that circuit evaluation and linear algebra can be
written once and run over either ring.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

__all__ = [
    "Rational",
    "RationalField",
    "PrimeField",
    "QQ",
    "NoSuchRootError",
    "is_prime",
    "least_prime_above",
    "format_rational",
    "parse_rational",
]

# Rationals are plain fractions.Fraction values: always stored reduced with a
# positive denominator, which is exactly the canonical form we need.
Rational = Fraction

# Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10^24,
# in particular for every 64-bit integer.
_SMALL_PRIME_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_MR_ROUNDS_ABOVE_64_BIT = 40
_MR_SEED = 0x5EED


class NoSuchRootError(ValueError):
    """No element of the requested multiplicative order exists."""


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test: deterministic below 2**64, 40 fixed-seed rounds above."""
    if n < 2:
        return False
    for p in _SMALL_PRIME_WITNESSES:
        if n % p == 0:
            return n == p
    if n < 2**64:
        return _miller_rabin(n, _SMALL_PRIME_WITNESSES)
    # Reproducible probabilistic check: bases derived from a fixed seed.
    import random

    rng = random.Random(_MR_SEED)
    bases = [rng.randrange(2, n - 1) for _ in range(_MR_ROUNDS_ABOVE_64_BIT)]
    return _miller_rabin(n, bases)


def least_prime_above(n: int, congruent_to: int = None, modulus: int = None) -> int:
    """Smallest prime > n, optionally restricted to a residue class."""
    m = n + 1
    if congruent_to is not None:
        if m % modulus != congruent_to % modulus:
            m += (congruent_to - m) % modulus
        step = modulus
    else:
        step = 1
    while not is_prime(m):
        m += step
    return m


def _factor(n: int) -> dict:
    """Trial-division factorization; adequate for desk-scale orders."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class RationalField:
    """The field Q with Fraction elements."""

    name = "Q"

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def from_rational(self, q: Fraction) -> Fraction:
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / a

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return a == 0

    def format(self, a: Fraction) -> str:
        return format_rational(a)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class PrimeField:
    """F_p with elements stored as canonical residues in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F_{p}"
        self.zero = 0
        self.one = 1 % p

    def from_int(self, n: int) -> int:
        return n % self.p

    def from_rational(self, q: Fraction) -> int:
        den = q.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator of {q} vanishes mod {self.p}")
        return q.numerator * pow(den, self.p - 2, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return a * pow(b, self.p - 2, self.p) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of zero in {self.name}")
        return pow(a, self.p - 2, self.p)

    def eq(self, a, b) -> bool:
        return (a - b) % self.p == 0

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def format(self, a: int) -> str:
        return str(a % self.p)

    def element_order(self, g: int) -> int:
        """Multiplicative order of g, by exponent-lattice descent."""
        g %= self.p
        if g == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        order = self.p - 1
        for q in _factor(self.p - 1):
            while order % q == 0 and pow(g, order // q, self.p) == 1:
                order //= q
        return order

    def find_primitive_root(self, d: int) -> int:
        """Element of multiplicative order exactly d.

        Scans candidates 2, 3, 4, ... and returns g0**((p-1)/d) for the first
        g0 whose power has full order d; deterministic.
        """
        p = self.p
        if d < 1 or (p - 1) % d != 0:
            raise NoSuchRootError(f"{d} does not divide {p} - 1")
        if d == 1:
            return 1
        prime_divs = list(_factor(d))
        for g0 in range(2, p):
            g = pow(g0, (p - 1) // d, p)
            if g == 1:
                continue
            if all(pow(g, d // q, p) != 1 for q in prime_divs):
                return g
        raise NoSuchRootError(f"no element of order {d} found in F_{p}")  # pragma: no cover

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


Ring = Union[RationalField, PrimeField]


def format_rational(q: Fraction) -> str:
    """Serialize as "num/den", omitting the denominator when it is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())
