"""Correct-test and identification sequences: bounds, sampling, verification.

Length and set-size requirements come straight from the degree-based bounds
for holomorphically encoded object classes; verification against finite
enumerated classes is exact and serves as the oracle for everything
probabilistic.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .poly import MultiPoly
from .rings import QQ
from .slp import Slp, evaluate as slp_evaluate

__all__ = [
    "ClassSpec",
    "TestSequence",
    "KINDS",
    "required_length",
    "required_set_size",
    "degree_bounds",
    "sample_sequence",
    "is_correct_test_sequence",
    "is_identification_sequence",
    "pit",
    "PitVerdict",
    "universality_probe",
]

KINDS = ("correct-test", "identification", "circuit-class")


@dataclass(frozen=True)
class ClassSpec:
    """Parameters of a constructible object class.

    L: data-structure size (ambient dimension of codes); t: variable count;
    Delta: degree bound of class members; K/Delta1: count and degree bound of
    the polynomials defining the data structure; Delta2: encoding degree
    bound; deg_closure_override: explicit degree of the class closure when
    known (otherwise the worst-case bound is used).
    """

    L: int
    t: int
    Delta: int
    K: int = 0
    Delta1: int = 1
    Delta2: int = 1
    deg_closure_override: Optional[int] = None

    def __post_init__(self):
        if self.L < 1 or self.t < 1 or self.Delta < 1 or self.Delta2 < 1:
            raise ValueError("require L >= 1, t >= 1, Delta >= 1, Delta2 >= 1")
        if self.K < 0 or self.Delta1 < 1:
            raise ValueError("require K >= 0, Delta1 >= 1")


@dataclass(frozen=True)
class TestSequence:
    """A tuple of m points in M^t, with M the integer interval [0, M_size)."""

    points: Tuple[Tuple[Fraction, ...], ...]
    M_size: int
    seed: Optional[int] = None

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def t(self) -> int:
        return len(self.points[0]) if self.points else 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "m": self.m,
                "t": self.t,
                "M": self.M_size,
                "seed": self.seed,
                "points": [[str(c) for c in pt] for pt in self.points],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TestSequence":
        data = json.loads(text)
        points = tuple(tuple(Fraction(c) for c in pt) for pt in data["points"])
        return cls(points=points, M_size=data["M"], seed=data.get("seed"))


def required_length(spec: ClassSpec, kind: str) -> int:
    if kind == "correct-test":
        return 2 * spec.L + 2
    if kind == "identification":
        return 4 * spec.L + 2
    if kind == "circuit-class":
        return 4 * (spec.L + spec.t + 1) ** 2 + 2
    raise ValueError(f"unknown sequence kind {kind!r}")


def degree_bounds(spec: ClassSpec, equidimensional: bool = False) -> dict:
    """Degree bounds for the data-structure and object-class closures."""
    deg_d = (1 + spec.K * spec.Delta1) ** spec.L
    deg_o = spec.Delta2**spec.L * deg_d
    if not equidimensional:
        deg_o *= spec.L + 1
    return {"deg_D_bound": deg_d, "deg_O_bound": deg_o}


def _ceil_nth_root(a: int, n: int) -> int:
    """Smallest integer r >= 1 with r**n >= a (a >= 1)."""
    if a <= 1:
        return 1
    lo, hi = 1, 1
    while hi**n < a:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**n >= a:
            hi = mid
        else:
            lo = mid + 1
    return lo


def required_set_size(spec: ClassSpec, kind: str) -> int:
    """Minimal cardinality of the sampling set M, never below 2.

    circuit-class uses the fixed 2**(4(L+1)) cardinality; otherwise the bound
    is ceil(Delta^2 * (deg closure)^(1/L)), computed exactly as an integer
    root, with the worst-case closure degree unless an override is given.
    """
    if kind == "circuit-class":
        return max(2, 2 ** (4 * (spec.L + 1)))
    if kind not in KINDS:
        raise ValueError(f"unknown sequence kind {kind!r}")
    deg_o = (
        spec.deg_closure_override
        if spec.deg_closure_override is not None
        else degree_bounds(spec)["deg_O_bound"]
    )
    # minimal M with M >= Delta^2 * deg_o^(1/L), i.e. M^L >= Delta^(2L) * deg_o
    m = _ceil_nth_root(spec.Delta ** (2 * spec.L) * deg_o, spec.L)
    return max(2, m)


def _draw(seed: int, i: int, j: int, m_size: int) -> int:
    digest = hashlib.sha256(f"{seed}:{i}:{j}".encode()).digest()
    return int.from_bytes(digest, "big") % m_size


def sample_sequence(spec: ClassSpec, kind: str, seed: int) -> TestSequence:
    """Seeded uniform sample from M^(m t), counter-based so that coordinate
    (i, j) depends only on (seed, i, j)."""
    m = required_length(spec, kind)
    m_size = required_set_size(spec, kind)
    points = tuple(
        tuple(Fraction(_draw(seed, i, j, m_size)) for j in range(spec.t))
        for i in range(m)
    )
    return TestSequence(points=points, M_size=m_size, seed=seed)


def _class_variables(class_enum: Sequence[MultiPoly], variables) -> List[str]:
    if variables is not None:
        return list(variables)
    names: List[str] = []
    for p in class_enum:
        for v in p.support():
            if v not in names:
                names.append(v)
    return names


def _value_vector(p: MultiPoly, gamma: TestSequence, variables: Sequence[str]):
    out = []
    for pt in gamma.points:
        assignment = dict(zip(variables, pt))
        out.append(p.evaluate(assignment, QQ))
    return tuple(out)


def is_correct_test_sequence(
    gamma: TestSequence, class_enum: Sequence[MultiPoly], variables=None
) -> Tuple[bool, Optional[MultiPoly]]:
    """True iff every nonzero member has a nonzero value at some point.

    On failure the violating member is returned as witness.
    """
    names = _class_variables(class_enum, variables)
    for p in class_enum:
        if p.is_zero():
            continue
        vals = _value_vector(p, gamma, names)
        if all(v == 0 for v in vals):
            return False, p
    return True, None


def is_identification_sequence(
    gamma: TestSequence, class_enum: Sequence[MultiPoly], variables=None
) -> Tuple[bool, Optional[Tuple[MultiPoly, MultiPoly]]]:
    """True iff distinct members always differ at some point of gamma."""
    names = _class_variables(class_enum, variables)
    seen: dict = {}
    for p in class_enum:
        key = _value_vector(p, gamma, names)
        if key in seen:
            if not (seen[key] == p):
                return False, (seen[key], p)
        else:
            seen[key] = p
    return True, None


@dataclass(frozen=True)
class PitVerdict:
    is_zero: bool
    witness_index: Optional[int] = None

    @property
    def verdict(self) -> str:
        return "zero" if self.is_zero else "nonzero"


def pit(f: Slp, gamma: TestSequence) -> PitVerdict:
    """Identity test of a fully specialized circuit against a sequence.

    "nonzero" is always correct; "zero" carries the per-sequence guarantee
    when gamma was sampled for a class spec covering f.
    """
    if len(f.params) != 0:
        raise ValueError("pit requires a circuit with parameters already specialized")
    if len(f.vars) != gamma.t:
        raise ValueError(f"circuit has {len(f.vars)} variables, sequence has t = {gamma.t}")
    for idx, pt in enumerate(gamma.points):
        vals = slp_evaluate(f, {}, dict(zip(f.vars, pt)), QQ)
        if any(v != 0 for v in vals):
            return PitVerdict(is_zero=False, witness_index=idx)
    return PitVerdict(is_zero=True)


def universality_probe(gamma: TestSequence, classes: Sequence[dict]) -> List[dict]:
    """Check one sequence against several enumerated classes.

    Each entry of `classes` is {"name", "kind", "class_enum", "variables"?}
    with kind "correct-test" or "identification".  Returns one report entry
    per class.
    """
    report = []
    for entry in classes:
        kind = entry["kind"]
        enum = entry["class_enum"]
        variables = entry.get("variables")
        if kind == "correct-test":
            ok, witness = is_correct_test_sequence(gamma, enum, variables)
            witness_text = str(witness) if witness is not None else None
        elif kind == "identification":
            ok, pair = is_identification_sequence(gamma, enum, variables)
            witness_text = f"{pair[0]} vs {pair[1]}" if pair is not None else None
        else:
            raise ValueError(f"unknown probe kind {kind!r}")
        report.append(
            {
                "name": entry.get("name", kind),
                "kind": kind,
                "passed": ok,
                "witness": witness_text,
            }
        )
    return report
