"""Encoding polynomials by their values at a test sequence, and decoding.

The encode map sends an object F to (F(g_1), ..., F(g_m)); on a class for
which gamma is an identification sequence that map is injective, so equality
of codes answers the identity question.  Decoding requires an explicit
monomial basis from the caller and is exact interpolation.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from . import poly as poly_mod
from .poly import MultiPoly
from .rings import QQ, format_rational
from .sequences import TestSequence
from .slp import Slp, evaluate as slp_evaluate

__all__ = ["ValueCode", "MismatchedSequenceError", "encode", "decode", "code_eq", "injectivity_check"]


class MismatchedSequenceError(ValueError):
    """Codes over different sequences cannot be compared."""


def _gamma_id(gamma: TestSequence) -> str:
    return hashlib.sha256(gamma.to_json().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ValueCode:
    sequence: TestSequence
    values: Tuple

    def __post_init__(self):
        if len(self.values) != self.sequence.m:
            raise ValueError("value count must equal the sequence length")

    def to_json(self) -> str:
        return json.dumps(
            {
                "gamma_id": _gamma_id(self.sequence),
                "values": [format_rational(v) for v in self.values],
            }
        )


def encode(
    f: Union[Slp, MultiPoly],
    gamma: TestSequence,
    variables: Optional[Sequence[str]] = None,
    ring=QQ,
) -> ValueCode:
    """Exact value vector of f at the points of gamma."""
    values = []
    if isinstance(f, Slp):
        if f.params:
            raise ValueError("encode requires parameters to be specialized")
        if len(f.vars) != gamma.t:
            raise ValueError(f"circuit has {len(f.vars)} variables, sequence has t = {gamma.t}")
        for pt in gamma.points:
            point = [ring.from_rational(c) for c in pt]
            out = slp_evaluate(f, {}, dict(zip(f.vars, point)), ring)
            values.append(out[0])
    else:
        names = list(variables) if variables is not None else list(f.support())
        if len(names) > gamma.t:
            raise ValueError("polynomial has more variables than the sequence provides")
        for pt in gamma.points:
            point = [ring.from_rational(c) for c in pt]
            values.append(f.evaluate(dict(zip(names, point)), ring))
    return ValueCode(sequence=gamma, values=tuple(values))


def decode(
    code: ValueCode,
    basis: Sequence[MultiPoly],
    variables: Optional[Sequence[str]] = None,
    ring=QQ,
) -> MultiPoly:
    """The unique basis-span polynomial with the given values, if any.

    Raises InconsistentSystemError when the code is not the encoding of any
    polynomial in the span, SingularSystemError when the points cannot
    determine the basis.
    """
    if len(basis) > code.sequence.m:
        raise ValueError("basis larger than the number of values")
    coeffs = poly_mod.interpolate(
        code.sequence.points, list(code.values), basis, variables=variables, ring=ring
    )
    result = MultiPoly.zero()
    for c, mono in zip(coeffs, basis):
        if ring is QQ:
            result = result + mono * c
        else:
            result = result + mono * int(c)
    return result


def code_eq(a: ValueCode, b: ValueCode) -> bool:
    if a.sequence != b.sequence:
        raise MismatchedSequenceError("codes are over different sequences")
    return all(x == y for x, y in zip(a.values, b.values))


def injectivity_check(gamma: TestSequence, class_enum: Sequence[MultiPoly], variables=None):
    """(True, None) iff encoding by values is injective on the enumerated
    class; otherwise (False, (p, q)) with two distinct members sharing a code."""
    names = variables
    if names is None:
        names = []
        for p in class_enum:
            for v in p.support():
                if v not in names:
                    names.append(v)
    seen: dict = {}
    for p in class_enum:
        key = tuple(encode(p, gamma, variables=names).values)
        if key in seen and not (seen[key] == p):
            return False, (seen[key], p)
        seen[key] = p
    return True, None
