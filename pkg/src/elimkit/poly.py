"""Exact sparse multivariate polynomials over Q: the brute-force oracle.

A MultiPoly is a map from exponent vectors to nonzero rational coefficients,
relative to an ordered tuple of variable names.  Polynomials over different
variable sets combine by merging variable names.  This representation is the
independent reference against which all circuit-level computations are
checked, so everything here is straightforward and exact.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg
from .rings import QQ, format_rational
from .slp import PoleError, Slp

__all__ = [
    "MultiPoly",
    "PolyRing",
    "ExpansionBudgetError",
    "UnsupportedDivisionError",
    "expand",
    "poly_arith",
    "uni_gcd",
    "squarefree_part",
    "interpolate",
    "count_terms",
    "default_budget",
    "parse_poly",
]

ExpVec = Tuple[int, ...]

_DEFAULT_BUDGET = 2_000_000


def default_budget() -> int:
    """Term-count budget for expansions; ELIMKIT_BUDGET overrides."""
    env = os.environ.get("ELIMKIT_BUDGET")
    return int(env) if env else _DEFAULT_BUDGET


class ExpansionBudgetError(RuntimeError):
    def __init__(self, term_count: int, budget: int):
        super().__init__(f"expansion too large: {term_count} terms exceeds budget {budget}")
        self.term_count = term_count
        self.budget = budget


class UnsupportedDivisionError(ValueError):
    """Symbolic division by a non-constant expression."""


class MultiPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str] = (), terms: Optional[Dict[ExpVec, Fraction]] = None):
        self.variables: Tuple[str, ...] = tuple(variables)
        clean: Dict[ExpVec, Fraction] = {}
        nv = len(self.variables)
        for exps, coeff in (terms or {}).items():
            c = Fraction(coeff)
            if c == 0:
                continue
            e = tuple(exps)
            if len(e) != nv:
                raise ValueError("exponent vector length mismatch")
            clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls((), {})

    @classmethod
    def const(cls, value) -> "MultiPoly":
        q = Fraction(value)
        return cls((), {(): q} if q else {})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls((name,), {(1,): Fraction(1)})

    @classmethod
    def univariate(cls, name: str, coeffs: Sequence) -> "MultiPoly":
        """From a low-to-high coefficient list."""
        return cls((name,), {(i,): Fraction(c) for i, c in enumerate(coeffs)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()), Fraction(0))

    def support(self) -> Tuple[str, ...]:
        """Variables that actually occur."""
        used = [False] * len(self.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        if name not in self.variables:
            return 0
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=0)

    def _canonical(self) -> Dict[Tuple[Tuple[str, int], ...], Fraction]:
        out = {}
        for exps, coeff in self.terms.items():
            key = tuple(sorted((v, e) for v, e in zip(self.variables, exps) if e))
            out[key] = coeff
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._canonical() == other._canonical()

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def _aligned(self, other: "MultiPoly"):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        merged = list(self.variables)
        for v in other.variables:
            if v not in merged:
                merged.append(v)
        merged_t = tuple(merged)

        def remap(poly: "MultiPoly"):
            idx = [merged.index(v) for v in poly.variables]
            out = {}
            for exps, coeff in poly.terms.items():
                vec = [0] * len(merged)
                for i, e in zip(idx, exps):
                    vec[i] = e
                out[tuple(vec)] = coeff
            return out

        return merged_t, remap(self), remap(other)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        variables, a, b = self._aligned(other)
        terms = dict(a)
        for exps, coeff in b.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return MultiPoly(variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.const(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return MultiPoly(self.variables, {e: c * q for e, c in self.terms.items()})
        variables, a, b = self._aligned(other)
        terms: Dict[ExpVec, Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return MultiPoly(variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def compose(self, substitutions: Dict[str, "MultiPoly"]) -> "MultiPoly":
        """Substitute polynomials for variables; untouched variables remain."""
        result = MultiPoly.zero()
        for exps, coeff in self.terms.items():
            term = MultiPoly.const(coeff)
            for v, e in zip(self.variables, exps):
                if e == 0:
                    continue
                factor = substitutions.get(v, MultiPoly.var(v))
                term = term * factor**e
            result = result + term
        return result

    def evaluate(self, assignment: Dict[str, object], ring=QQ):
        missing = [v for v in self.support() if v not in assignment]
        if missing:
            raise KeyError(f"unassigned variables: {', '.join(missing)}")
        total = ring.zero
        for exps, coeff in self.terms.items():
            val = ring.from_rational(coeff)
            for v, e in zip(self.variables, exps):
                if e:
                    base = assignment[v]
                    for _ in range(e):
                        val = ring.mul(val, base)
            total = ring.add(total, val)
        return total

    def derivative(self, name: str) -> "MultiPoly":
        if name not in self.variables:
            return MultiPoly.zero()
        i = self.variables.index(name)
        terms = {}
        for exps, coeff in self.terms.items():
            if exps[i] == 0:
                continue
            e = list(exps)
            c = coeff * e[i]
            e[i] -= 1
            key = tuple(e)
            terms[key] = terms.get(key, Fraction(0)) + c
        return MultiPoly(self.variables, terms)

    # -- univariate view ---------------------------------------------------

    def is_univariate(self) -> bool:
        return len(self.support()) <= 1

    def univariate_coeffs(self, name: Optional[str] = None) -> Tuple[str, List[Fraction]]:
        """Low-to-high coefficient list; degenerates to a constant in `name`."""
        support = self.support()
        if len(support) > 1:
            raise ValueError("polynomial is not univariate")
        var = name or (support[0] if support else "Y")
        if support and name is not None and support[0] != name:
            raise ValueError(f"polynomial is in {support[0]}, not {name}")
        deg = self.degree_in(var) if var in self.variables else 0
        coeffs = [Fraction(0)] * (deg + 1)
        vi = self.variables.index(var) if var in self.variables else None
        for exps, coeff in self.terms.items():
            coeffs[exps[vi] if vi is not None else 0] += coeff
        return var, coeffs

    # -- canonical text ----------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keyed = sorted(
            self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True
        )
        parts = []
        for exps, coeff in keyed:
            factors = []
            for v, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mag = abs(coeff)
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = format_rational(mag) + "*" + "*".join(factors)
            else:
                body = format_rational(mag)
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


# ---------------------------------------------------------------------------
# Expansion oracle: evaluate an Slp in the polynomial ring itself.
# ---------------------------------------------------------------------------


class PolyRing:
    """Ring adapter evaluating circuits with MultiPoly values.

    Multiplications enforce a term budget; division is only supported by
    (nonzero) constants, which is all an expansion of an essentially
    division-free program should need symbolically.
    """

    def __init__(self, budget: Optional[int] = None):
        self.budget = budget if budget is not None else default_budget()
        self.zero = MultiPoly.zero()
        self.one = MultiPoly.const(1)

    def from_int(self, n: int) -> MultiPoly:
        return MultiPoly.const(n)

    def from_rational(self, q: Fraction) -> MultiPoly:
        return MultiPoly.const(q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        if len(a.terms) * len(b.terms) > 4 * self.budget:
            raise ExpansionBudgetError(len(a.terms) * len(b.terms), self.budget)
        out = a * b
        if len(out.terms) > self.budget:
            raise ExpansionBudgetError(len(out.terms), self.budget)
        return out

    def div(self, a, b):
        if b.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if not b.is_constant():
            raise UnsupportedDivisionError(
                "unsupported division: divisor is a non-constant expression"
            )
        return a * (1 / b.constant_value())

    def neg(self, a):
        return -a

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.is_zero()


def expand(slp: Slp, output_index: int = 0, budget: Optional[int] = None) -> MultiPoly:
    """Exact expansion of one circuit output over params and vars."""
    from .slp import evaluate as slp_evaluate

    ring = PolyRing(budget)
    pvals = {n: MultiPoly.var(n) for n in slp.params}
    vvals = {n: MultiPoly.var(n) for n in slp.vars}
    try:
        outputs = slp_evaluate(slp, pvals, vvals, ring)
    except PoleError:
        raise UnsupportedDivisionError(
            "unsupported division: divisor expands to zero"
        ) from None
    return outputs[output_index]


def poly_arith(op: str, a: MultiPoly, b) -> MultiPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a**b
    if op == "compose":
        return a.compose(b)
    raise ValueError(f"unknown polynomial operation {op!r}")


# ---------------------------------------------------------------------------
# Univariate gcd / square-free part.
# ---------------------------------------------------------------------------


def _common_variable(a: MultiPoly, b: MultiPoly) -> str:
    sup = set(a.support()) | set(b.support())
    if len(sup) > 1:
        raise ValueError("polynomials are not univariate in a common variable")
    return sup.pop() if sup else "Y"


def _monic(coeffs: List[Fraction]) -> List[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return []
    lead = coeffs[-1]
    return [c / lead for c in coeffs]


def _poly_mod(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] / lead
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def uni_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic gcd over Q by the Euclidean algorithm."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    var = _common_variable(a, b)
    _, ca = a.univariate_coeffs(var) if not a.is_zero() else (var, [])
    _, cb = b.univariate_coeffs(var) if not b.is_zero() else (var, [])
    ca, cb = _monic(ca), _monic(cb)
    while cb:
        ca, cb = cb, _monic(_poly_mod(ca, cb))
    return MultiPoly.univariate(var, ca)


def _uni_exact_div(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    a = list(a)
    lead = b[-1]
    for shift in range(len(a) - len(b), -1, -1):
        f = a[shift + len(b) - 1] / lead
        q[shift] = f
        if f:
            for i, c in enumerate(b):
                a[shift + i] -= f * c
    if any(a):
        raise ValueError("division is not exact")
    return q


def squarefree_part(p: MultiPoly) -> MultiPoly:
    """Monic polynomial with the same roots, each simple: p / gcd(p, p')."""
    if p.is_zero():
        raise ValueError("square-free part of the zero polynomial is undefined")
    sup = p.support()
    if len(sup) > 1:
        raise ValueError("polynomial is not univariate")
    if not sup:
        return MultiPoly.const(1)
    var = sup[0]
    g = uni_gcd(p, p.derivative(var))
    _, cp = p.univariate_coeffs(var)
    _, cg = g.univariate_coeffs(var)
    return MultiPoly.univariate(var, _monic(_uni_exact_div(cp, cg)))


# ---------------------------------------------------------------------------
# Interpolation on an explicit monomial basis.
# ---------------------------------------------------------------------------


def interpolate(
    points: Sequence[Sequence],
    values: Sequence,
    basis: Sequence[MultiPoly],
    variables: Optional[Sequence[str]] = None,
    ring=QQ,
) -> list:
    """Coefficients c with sum c_i * basis_i(point_j) = value_j for all j.

    Point coordinates bind positionally to `variables` (default: the merged
    variable order of the basis).  Raises SingularSystemError when the points
    do not determine the basis and InconsistentSystemError when the values
    are not in the basis span.
    """
    if len(points) != len(values):
        raise ValueError("points and values must have equal length")
    if len(points) < len(basis):
        raise ValueError("need at least as many points as basis monomials")
    if variables is None:
        names: List[str] = []
        for mono in basis:
            for v in mono.variables:
                if v not in names:
                    names.append(v)
        variables = names
    design = []
    for pt in points:
        assignment = dict(zip(variables, pt))
        design.append([mono.evaluate(assignment, ring) for mono in basis])
    return linalg.solve_exact(design, list(values), ring)


def count_terms(p: MultiPoly, subset: Optional[Iterable[str]] = None) -> int:
    """Term count, optionally of p read as a polynomial in the subset only."""
    if subset is None:
        return len(p.terms)
    names = set(subset)
    # variables absent from p contribute exponent 0 everywhere, so only the
    # present ones matter for distinctness
    idx = [i for i, v in enumerate(p.variables) if v in names]
    return len({tuple(exps[i] for i in idx) for exps in p.terms})


# ---------------------------------------------------------------------------
# Canonical text parsing (inverse of str()).
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\d+/\d+|\d+|\^|\*|\+|-|\(|\))")


def parse_poly(text: str) -> MultiPoly:
    tokens: List[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad character in polynomial near {text[pos:pos+10]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    i = 0

    def parse_factor() -> MultiPoly:
        nonlocal i
        tok = tokens[i]
        i += 1
        if tok == "(":
            p = parse_sum()
            if i >= len(tokens) or tokens[i] != ")":
                raise ValueError("unbalanced parenthesis")
            i += 1
            base = p
        elif re.fullmatch(r"\d+(/\d+)?", tok):
            base = MultiPoly.const(Fraction(tok))
        elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            base = MultiPoly.var(tok)
        else:
            raise ValueError(f"unexpected token {tok!r}")
        if i < len(tokens) and tokens[i] == "^":
            i += 1
            if i >= len(tokens) or not tokens[i].isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            base = base ** int(tokens[i])
            i += 1
        return base

    def parse_term() -> MultiPoly:
        nonlocal i
        p = parse_factor()
        while i < len(tokens) and tokens[i] == "*":
            i += 1
            p = p * parse_factor()
        return p

    def parse_sum() -> MultiPoly:
        nonlocal i
        sign = 1
        if i < len(tokens) and tokens[i] in "+-":
            sign = -1 if tokens[i] == "-" else 1
            i += 1
        p = parse_term() * sign
        while i < len(tokens) and tokens[i] in "+-":
            sign = -1 if tokens[i] == "-" else 1
            i += 1
            p = p + parse_term() * sign
        return p

    if not tokens:
        raise ValueError("empty polynomial text")
    result = parse_sum()
    if i != len(tokens):
        raise ValueError(f"trailing tokens {tokens[i:]!r}")
    return result
