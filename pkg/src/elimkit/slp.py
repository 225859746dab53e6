"""Straight-line programs: arithmetic circuits over parameters and variables.

A program is a DAG of arithmetic nodes over named parameters (the ground
objects the circuit is linear over) and named variables.  Operand references
are ('p', i) for the i-th parameter, ('v', i) for the i-th variable and
('n', j) for the j-th node.  Divisions are only legal when the divisor's
sub-DAG is variable-free (essentially division-free circuits); a strict mode
rejects division entirely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .rings import format_rational, parse_rational

__all__ = [
    "Slp",
    "SlpBuilder",
    "SlpProfile",
    "Violation",
    "ValidationReport",
    "PoleError",
    "SlpParseError",
    "validate",
    "evaluate",
    "profile",
    "rearranged_size",
    "parse_slp",
    "serialize_slp",
]

Ref = Tuple[str, int]

_OPS = ("add", "sub", "mul", "div")


class PoleError(ZeroDivisionError):
    """Division by zero at the given specialization."""

    def __init__(self, node_index: int):
        super().__init__(f"pole at specialization: divisor of node {node_index} is zero")
        self.node_index = node_index


class SlpParseError(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


@dataclass(frozen=True)
class Slp:
    params: Tuple[str, ...]
    vars: Tuple[str, ...]
    nodes: Tuple[tuple, ...]
    outputs: Tuple[Tuple[int, Optional[str]], ...]

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class Violation:
    node_index: Optional[int]
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None


class SlpBuilder:
    """Incremental construction helper returning operand refs."""

    def __init__(self, params: Sequence[str] = (), variables: Sequence[str] = ()):
        self._params = list(params)
        self._vars = list(variables)
        self._nodes: List[tuple] = []
        self._outputs: List[Tuple[int, Optional[str]]] = []

    def param(self, name: str) -> Ref:
        if name not in self._params:
            self._params.append(name)
        return ("p", self._params.index(name))

    def var(self, name: str) -> Ref:
        if name not in self._vars:
            self._vars.append(name)
        return ("v", self._vars.index(name))

    def const(self, value) -> Ref:
        self._nodes.append(("const", Fraction(value)))
        return ("n", len(self._nodes) - 1)

    def _op(self, op: str, a: Ref, b: Ref) -> Ref:
        self._nodes.append((op, a, b))
        return ("n", len(self._nodes) - 1)

    def add(self, a: Ref, b: Ref) -> Ref:
        return self._op("add", a, b)

    def sub(self, a: Ref, b: Ref) -> Ref:
        return self._op("sub", a, b)

    def mul(self, a: Ref, b: Ref) -> Ref:
        return self._op("mul", a, b)

    def div(self, a: Ref, b: Ref) -> Ref:
        return self._op("div", a, b)

    def output(self, ref: Ref, sign: Optional[str] = None) -> None:
        if ref[0] != "n":
            # promote a bare input to a node so it can be an output
            ref = self._op("add", ref, self.const(0))
        self._outputs.append((ref[1], sign))

    def build(self) -> Slp:
        return Slp(
            params=tuple(self._params),
            vars=tuple(self._vars),
            nodes=tuple(self._nodes),
            outputs=tuple(self._outputs),
        )


def _var_dependent_flags(slp: Slp) -> List[bool]:
    flags: List[bool] = []
    for node in slp.nodes:
        if node[0] == "const":
            flags.append(False)
        else:
            dep = False
            for ref in node[1:]:
                if ref[0] == "v" or (ref[0] == "n" and flags[ref[1]]):
                    dep = True
            flags.append(dep)
    return flags


def validate(slp: Slp, strict: bool = False) -> ValidationReport:
    """Check the Slp invariants; strict mode additionally rejects division.

    Returns (rather than raises) a structured report naming the first
    offending node per violation kind.
    """
    violations: List[Violation] = []
    var_dep: List[bool] = []
    for idx, node in enumerate(slp.nodes):
        kind = node[0]
        if kind == "const":
            var_dep.append(False)
            continue
        if kind not in _OPS:
            violations.append(Violation(idx, f"unknown node kind {kind!r}"))
            var_dep.append(False)
            continue
        dep = False
        for ref in node[1:]:
            tag, i = ref
            if tag == "p":
                if not 0 <= i < len(slp.params):
                    violations.append(Violation(idx, "parameter index out of range"))
            elif tag == "v":
                if not 0 <= i < len(slp.vars):
                    violations.append(Violation(idx, "variable index out of range"))
                dep = True
            elif tag == "n":
                if i >= idx:
                    violations.append(Violation(idx, "forward reference"))
                elif i < 0:
                    violations.append(Violation(idx, "negative node reference"))
                elif var_dep[i]:
                    dep = True
            else:
                violations.append(Violation(idx, f"bad operand tag {tag!r}"))
        if kind == "div":
            if strict:
                violations.append(Violation(idx, "division not allowed in strict mode"))
            else:
                tag, i = node[2]
                if tag == "v" or (tag == "n" and i < idx and var_dep[i]):
                    violations.append(Violation(idx, "divisor depends on variable"))
        var_dep.append(dep)
    for out_idx, _sign in slp.outputs:
        if not 0 <= out_idx < len(slp.nodes):
            violations.append(Violation(None, f"output index {out_idx} out of range"))
    for _out_idx, sign in slp.outputs:
        if sign not in (None, "=0", "!=0"):
            violations.append(Violation(None, f"bad sign mark {sign!r}"))
    return ValidationReport(tuple(violations))


def evaluate(slp: Slp, param_values: Dict[str, object], var_values: Dict[str, object], ring) -> list:
    """Straightforward DAG evaluation; returns one value per output node."""
    missing = [n for n in slp.params if n not in param_values]
    missing += [n for n in slp.vars if n not in var_values]
    if missing:
        raise KeyError(f"unassigned inputs: {', '.join(missing)}")
    pvals = [param_values[n] for n in slp.params]
    vvals = [var_values[n] for n in slp.vars]
    values: List[object] = []

    def resolve(ref):
        tag, i = ref
        if tag == "p":
            return pvals[i]
        if tag == "v":
            return vvals[i]
        return values[i]

    for idx, node in enumerate(slp.nodes):
        kind = node[0]
        if kind == "const":
            values.append(ring.from_rational(node[1]))
            continue
        a = resolve(node[1])
        b = resolve(node[2])
        if kind == "add":
            values.append(ring.add(a, b))
        elif kind == "sub":
            values.append(ring.sub(a, b))
        elif kind == "mul":
            values.append(ring.mul(a, b))
        else:
            try:
                values.append(ring.div(a, b))
            except ZeroDivisionError:
                raise PoleError(idx) from None
    return [values[i] for i, _sign in slp.outputs]


@dataclass(frozen=True)
class SlpProfile:
    L_over_params: int
    L_over_scalars: int
    total_ops: int
    q: int
    var_degree_bound: Tuple[int, ...]
    param_degree_bound: Tuple[int, ...]


def profile(slp: Slp) -> SlpProfile:
    """Nonscalar-size accounting and per-output degree bounds.

    L_over_params counts multiplications whose operands both depend on a
    variable (parameter-linear operations are cost free); divisions never
    count since their divisor is parameter-only by invariant.  L_over_scalars
    counts every mul/div except multiplication by a ground-field constant and
    division by a ground-field constant.
    """
    var_dep: List[bool] = []
    pure_const: List[bool] = []
    vdeg: List[int] = []
    pdeg: List[int] = []
    l_params = 0
    l_scalars = 0
    total_ops = 0

    def ref_info(ref):
        tag, i = ref
        if tag == "p":
            return (False, False, 0, 1)
        if tag == "v":
            return (True, False, 1, 0)
        return (var_dep[i], pure_const[i], vdeg[i], pdeg[i])

    for node in slp.nodes:
        kind = node[0]
        if kind == "const":
            var_dep.append(False)
            pure_const.append(True)
            vdeg.append(0)
            pdeg.append(0)
            continue
        total_ops += 1
        a_dep, a_const, a_vd, a_pd = ref_info(node[1])
        b_dep, b_const, b_vd, b_pd = ref_info(node[2])
        dep = a_dep or b_dep
        const = a_const and b_const
        if kind in ("add", "sub"):
            vdeg.append(max(a_vd, b_vd))
            pdeg.append(max(a_pd, b_pd))
        elif kind == "mul":
            if a_dep and b_dep:
                l_params += 1
            if not (a_const or b_const):
                l_scalars += 1
            vdeg.append(a_vd + b_vd)
            pdeg.append(a_pd + b_pd)
        else:  # div: divisor parameter-only, so var degree is the numerator's
            if not b_const:
                l_scalars += 1
            vdeg.append(a_vd)
            pdeg.append(a_pd)
        var_dep.append(dep)
        pure_const.append(const)
    out_vd = tuple(vdeg[i] for i, _s in slp.outputs)
    out_pd = tuple(pdeg[i] for i, _s in slp.outputs)
    return SlpProfile(
        L_over_params=l_params,
        L_over_scalars=l_scalars,
        total_ops=total_ops,
        q=len(slp.outputs),
        var_degree_bound=out_vd,
        param_degree_bound=out_pd,
    )


def rearranged_size(L: int, t: int, q: int) -> int:
    """Parameter count of the canonical circuit rearrangement."""
    if L < 0 or t < 0 or q < 0:
        raise ValueError("L, t, q must be nonnegative")
    return L * L + (2 * t - 1) * L + q * (L + t + 1)


# --------------------------------------------------------------------------
# Text format (line-based, UTF-8, '#' comments):
#   slp v1
#   param <name> / var <name>
#   <id> = const <rational> | <id> = add|sub|mul|div <operand> <operand>
#   output <id> [=0|!=0]
# --------------------------------------------------------------------------

import re

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def serialize_slp(slp: Slp) -> str:
    lines = ["slp v1"]
    lines += [f"param {n}" for n in slp.params]
    lines += [f"var {n}" for n in slp.vars]

    def fmt_ref(ref):
        tag, i = ref
        if tag == "p":
            return slp.params[i]
        if tag == "v":
            return slp.vars[i]
        return f"t{i}"

    for idx, node in enumerate(slp.nodes):
        if node[0] == "const":
            lines.append(f"t{idx} = const {format_rational(node[1])}")
        else:
            lines.append(f"t{idx} = {node[0]} {fmt_ref(node[1])} {fmt_ref(node[2])}")
    for out_idx, sign in slp.outputs:
        lines.append(f"output t{out_idx}" + (f" {sign}" if sign else ""))
    return "\n".join(lines) + "\n"


def parse_slp(text: str) -> Slp:
    params: List[str] = []
    variables: List[str] = []
    nodes: List[tuple] = []
    outputs: List[Tuple[int, Optional[str]]] = []
    ids: Dict[str, int] = {}
    saw_header = False

    def ref_of(token: str, line_no: int) -> Ref:
        if token in ids:
            return ("n", ids[token])
        if token in params:
            return ("p", params.index(token))
        if token in variables:
            return ("v", variables.index(token))
        raise SlpParseError(line_no, f"unknown operand {token!r}")

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not saw_header:
            if line != "slp v1":
                raise SlpParseError(line_no, "expected header 'slp v1'")
            saw_header = True
            continue
        words = line.split()
        if words[0] in ("param", "var"):
            if len(words) != 2 or not _IDENT.match(words[1]):
                raise SlpParseError(line_no, f"bad {words[0]} declaration")
            name = words[1]
            if name in params or name in variables or name in ids:
                raise SlpParseError(line_no, f"duplicate identifier {name!r}")
            (params if words[0] == "param" else variables).append(name)
            continue
        if words[0] == "output":
            if len(words) not in (2, 3):
                raise SlpParseError(line_no, "bad output line")
            if words[1] not in ids:
                raise SlpParseError(line_no, f"unknown output id {words[1]!r}")
            sign = None
            if len(words) == 3:
                if words[2] not in ("=0", "!=0"):
                    raise SlpParseError(line_no, f"bad sign mark {words[2]!r}")
                sign = words[2]
            outputs.append((ids[words[1]], sign))
            continue
        if len(words) >= 3 and words[1] == "=":
            name = words[0]
            if not _IDENT.match(name):
                raise SlpParseError(line_no, f"bad identifier {name!r}")
            if name in ids or name in params or name in variables:
                raise SlpParseError(line_no, f"duplicate identifier {name!r}")
            op = words[2]
            if op == "const":
                if len(words) != 4:
                    raise SlpParseError(line_no, "const takes one rational")
                try:
                    val = parse_rational(words[3])
                except ValueError:
                    raise SlpParseError(line_no, f"bad rational {words[3]!r}") from None
                nodes.append(("const", val))
            elif op in _OPS:
                if len(words) != 5:
                    raise SlpParseError(line_no, f"{op} takes two operands")
                nodes.append((op, ref_of(words[3], line_no), ref_of(words[4], line_no)))
            else:
                raise SlpParseError(line_no, f"unknown opcode {op!r}")
            ids[name] = len(nodes) - 1
            continue
        raise SlpParseError(line_no, f"unrecognized line {line!r}")
    if not saw_header:
        raise SlpParseError(1, "empty program (missing 'slp v1' header)")
    return Slp(tuple(params), tuple(variables), tuple(nodes), tuple(outputs))
