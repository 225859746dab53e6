"""elimkit command-line front door.

JSON reports on stdout, progress on stderr.  Exit codes: 0 success,
1 verification/certificate failure, 2 usage error, 3 resource budget
exceeded.  All randomness flows from --seed (default 0).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import bounds as bounds_mod
from . import families, harness, sequences, value_encoding
from .poly import ExpansionBudgetError, MultiPoly, expand, parse_poly
from .rings import QQ, format_rational, least_prime_above, parse_rational
from .slp import parse_slp, profile, serialize_slp, validate
from .slp import evaluate as slp_evaluate

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _default(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, MultiPoly):
        return str(obj)
    if isinstance(obj, harness.RankCertificate):
        return json.loads(obj.to_json())
    if isinstance(obj, bounds_mod.BoundsReport):
        return json.loads(obj.to_json())
    if hasattr(obj, "to_json"):
        return json.loads(obj.to_json())
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)!r}")


def _emit(command: str, seed, payload, started: float, verdict=None) -> None:
    report = {"command": command, "seed": seed, "wall_time_s": round(time.time() - started, 3), "results": payload}
    if verdict is not None:
        report["verdict"] = "pass" if verdict else "fail"
    print(json.dumps(report, default=_default))


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _parse_assignment(text: str) -> dict:
    out = {}
    if text:
        for piece in text.split(","):
            k, _, v = piece.partition("=")
            if not _ or not k:
                raise ValueError(f"bad assignment piece {piece!r}")
            out[k.strip()] = parse_rational(v.strip())
    return out


def _parse_values(text: str) -> list:
    return [parse_rational(v.strip()) for v in text.split(",")] if text else []


def _class_from_file(path: str) -> list:
    data = json.loads(_read(path))
    return [parse_poly(s) for s in data]


def _spec_from_args(args) -> sequences.ClassSpec:
    return sequences.ClassSpec(
        L=args.L,
        t=args.t,
        Delta=args.delta,
        K=getattr(args, "K", 0),
        Delta1=getattr(args, "delta1", 1),
        Delta2=int(getattr(args, "delta2", 1)),
    )


def _cmd_slp(args, started) -> int:
    slp = parse_slp(_read(args.file))
    if args.action == "validate":
        report = validate(slp, strict=args.strict)
        payload = {"ok": report.ok, "violations": [{"node": v.node, "reason": v.reason} for v in report.violations]}
        _emit("slp validate", None, payload, started, verdict=report.ok)
        return EXIT_OK if report.ok else EXIT_VERIFY
    if args.action == "eval":
        at = _parse_assignment(args.at or "")
        params = {n: at[n] for n in slp.params}
        varsv = {n: at[n] for n in slp.vars}
        values = slp_evaluate(slp, params, varsv, QQ)
        _emit("slp eval", None, {"values": values}, started)
        return EXIT_OK
    if args.action == "expand":
        poly = expand(slp, output_index=args.output, budget=args.budget)
        _emit("slp expand", None, {"polynomial": str(poly)}, started)
        return EXIT_OK
    if args.action == "profile":
        pr = profile(slp)
        _emit(
            "slp profile",
            None,
            {
                "L_over_params": pr.L_over_params,
                "L_over_scalars": pr.L_over_scalars,
                "total_ops": pr.total_ops,
                "q": pr.q,
                "var_degree_bound": pr.var_degree_bound,
                "param_degree_bound": pr.param_degree_bound,
            },
            started,
        )
        return EXIT_OK
    raise AssertionError(args.action)


def _cmd_seq(args, started) -> int:
    if args.kind == "circuit":
        args.kind = "circuit-class"
    spec = _spec_from_args(args)
    if args.action == "params":
        payload = {
            "m": sequences.required_length(spec, args.kind),
            "M": sequences.required_set_size(spec, args.kind),
        }
        _emit("seq params", None, payload, started)
        return EXIT_OK
    if args.action == "sample":
        gamma = sequences.sample_sequence(spec, args.kind, args.seed)
        _emit("seq sample", args.seed, json.loads(gamma.to_json()), started)
        return EXIT_OK
    if args.action == "verify":
        gamma = sequences.sample_sequence(spec, args.kind, args.seed)
        class_enum = _class_from_file(args.class_file)
        if args.kind == "identification":
            ok, witness = sequences.is_identification_sequence(gamma, class_enum)
        else:
            ok, witness = sequences.is_correct_test_sequence(gamma, class_enum)
        payload = {"ok": ok, "witness": witness if witness is None else str(witness)}
        _emit("seq verify", args.seed, payload, started, verdict=ok)
        return EXIT_OK if ok else EXIT_VERIFY
    if args.action == "pit":
        slp = parse_slp(_read(args.file))
        gamma = sequences.sample_sequence(spec, "correct-test", args.seed)
        verdict = sequences.pit(slp, gamma)
        _emit(
            "seq pit",
            args.seed,
            {"verdict": verdict.verdict, "witness_index": verdict.witness_index},
            started,
        )
        return EXIT_OK
    raise AssertionError(args.action)


def _cmd_encode(args, started) -> int:
    gamma = sequences.TestSequence.from_json(_read(args.gamma))
    if args.action == "values":
        if args.file:
            f = parse_slp(_read(args.file))
        else:
            f = parse_poly(args.poly)
        code = value_encoding.encode(f, gamma)
        _emit("encode values", None, json.loads(code.to_json()), started)
        return EXIT_OK
    if args.action == "decode":
        basis = _class_from_file(args.basis_file)
        values = _parse_values(args.values)
        code = value_encoding.ValueCode(gamma, tuple(values))
        poly = value_encoding.decode(code, basis)
        _emit("encode decode", None, {"polynomial": str(poly)}, started)
        return EXIT_OK
    if args.action == "eq":
        va = _parse_values(args.values)
        vb = _parse_values(args.values_b)
        equal = value_encoding.code_eq(
            value_encoding.ValueCode(gamma, tuple(va)),
            value_encoding.ValueCode(gamma, tuple(vb)),
        )
        _emit("encode eq", None, {"equal": equal}, started, verdict=equal)
        return EXIT_OK if equal else EXIT_VERIFY
    raise AssertionError(args.action)


def _cmd_family(args, started) -> int:
    if args.action == "fd":
        slp = families.fd_slp(args.d)
        _emit("family fd", None, {"d": args.d, "slp": serialize_slp(slp)}, started)
        return EXIT_OK
    if args.action == "pn":
        u = _parse_values(args.u) if args.u else [Fraction(1)] * args.n
        t = parse_rational(args.t) if args.t is not None else Fraction(0)
        poly = families.pn_specialized(args.n, t, u)
        _emit("family pn", None, {"polynomial": str(poly)}, started)
        return EXIT_OK
    if args.action == "fn":
        fam = families.fn_slp(args.n)
        pr = profile(fam.slp)
        _emit(
            "family fn",
            None,
            {"n": args.n, "slp": serialize_slp(fam.slp), "L_over_params": pr.L_over_params},
            started,
        )
        return EXIT_OK
    if args.action == "rn":
        slp = families.rn_slp(args.n)
        pr = profile(slp)
        _emit("family rn", None, {"n": args.n, "slp": serialize_slp(slp), "total_ops": pr.total_ops}, started)
        return EXIT_OK
    if args.action == "gtilde":
        sys_ = families.gtilde_system(args.n)
        payload = {
            "n": args.n,
            "equations": [str(g) for g in sys_["equations"]],
            "f": str(sys_["f"]),
        }
        _emit("family gtilde", None, payload, started)
        return EXIT_OK
    if args.action == "phi":
        payload = families.phi_formula(args.n, variant=args.variant, seed=args.seed)
        _emit("family phi", args.seed, payload, started)
        return EXIT_OK
    raise AssertionError(args.action)


def _cmd_harness(args, started) -> int:
    if args.action == "elim":
        fam = families.fn_slp(args.n)
        u = _parse_values(args.u) if args.u else [Fraction(1)] * args.n
        t = parse_rational(args.t) if args.t is not None else Fraction(0)
        poly = harness.eliminate_hypercube(fam, t, u, mode=args.mode)
        payload = {"polynomial": str(poly)} if args.mode == "specialized" else {"n": args.n, "mode": args.mode}
        _emit("harness elim", None, payload, started)
        return EXIT_OK
    if args.action == "independence":
        field = args.field or ("rationals" if args.n <= 6 else "prime")
        _progress(f"eliminating {2**args.n} x {2**args.n} over {field}")
        cert = harness.independence_rank(args.n, field=field)
        _emit("harness independence", None, cert, started, verdict=cert.full_rank)
        return EXIT_OK if cert.full_rank else EXIT_VERIFY
    if args.action == "lk-rank":
        field = args.field or ("rationals" if args.n <= 6 else "prime")
        cert = harness.lk_at_points_rank(args.n, seed=args.seed, field=field)
        _emit("harness lk-rank", args.seed, cert, started, verdict=cert.full_rank)
        return EXIT_OK if cert.full_rank else EXIT_VERIFY
    if args.action == "tangent":
        p = args.p or least_prime_above(2**16, congruent_to=1, modulus=args.d)
        cert = harness.tangent_rank_paradigm1(args.d, p)
        _emit("harness tangent", None, cert, started, verdict=cert.full_rank)
        return EXIT_OK if cert.full_rank else EXIT_VERIFY
    if args.action == "blowup":
        report = harness.blowup_report(args.n, seed=args.seed)
        ok = report["certified_lower_bound_m_star"] == 2**args.n
        _emit("harness blowup", args.seed, report, started, verdict=ok)
        return EXIT_OK if ok else EXIT_VERIFY
    if args.action == "robust":
        if args.paradigm == 1:
            p = args.p or least_prime_above(100, congruent_to=1, modulus=args.d)
            report = harness.robustness_probe_paradigm1(args.d, p)
            ok = report["fiber_size"] == args.d and report["omega_vanishes"]
        else:
            report = harness.robustness_probe_paradigm2(args.n, seed=args.seed)
            ok = report["t0_slice_constant"] and report["t1_varies_with_u"]
        _emit("harness robust", args.seed, report, started, verdict=ok)
        return EXIT_OK if ok else EXIT_VERIFY
    if args.action == "distinctness":
        report = harness.distinctness_probe_gamma_n(args.n, args.trials, seed=args.seed)
        ok = not report["counterexamples"]
        _emit("harness distinctness", args.seed, report, started, verdict=ok)
        return EXIT_OK if ok else EXIT_VERIFY
    if args.action == "separable":
        report = harness.separability_check(parse_poly(args.poly))
        _emit(
            "harness separable",
            None,
            {"separable": report["separable"], "gcd_with_derivative": str(report["gcd_with_derivative"])},
            started,
            verdict=report["separable"],
        )
        return EXIT_OK if report["separable"] else EXIT_VERIFY
    raise AssertionError(args.action)


def _cmd_bounds(args, started) -> int:
    if args.action == "bezout":
        _emit("bounds bezout", None, {"bound": bounds_mod.bezout(args.degv, args.degw)}, started)
        return EXIT_OK
    if args.action == "degree":
        spec = _spec_from_args(args)
        payload = bounds_mod.degree_bounds(spec, equidimensional=args.equidimensional)
        _emit("bounds degree", None, payload, started)
        return EXIT_OK
    if args.action == "vc":
        report = bounds_mod.vc_upper(args.L, parse_rational(args.delta2), variant=args.variant)
        _emit("bounds vc", None, report, started)
        return EXIT_OK
    if args.action == "wlt":
        report = bounds_mod.wlt_vc_sandwich(args.L, args.t, parse_rational(args.eps))
        _emit("bounds wlt", None, report, started)
        return EXIT_OK
    if args.action == "shatter":
        class_enum = _class_from_file(args.class_file)
        pool = [tuple(_parse_values(pt)) for pt in args.pool.split(";")]
        result = bounds_mod.vc_shatter_oracle(class_enum, pool, args.max_s)
        _emit("bounds shatter", None, result, started)
        return EXIT_OK
    raise AssertionError(args.action)


def _cmd_reproduce(args, started) -> int:
    max_n = args.max_n
    rows = []

    def check(name, fn):
        _progress(f"check: {name}")
        try:
            ok = bool(fn())
        except Exception as exc:  # report, do not abort the table
            rows.append({"check": name, "pass": False, "error": f"{type(exc).__name__}: {exc}"})
            return
        rows.append({"check": name, "pass": ok})

    check(
        "independence ranks full",
        lambda: all(harness.independence_rank(n).full_rank for n in range(1, min(max_n, 6) + 1)),
    )
    check(
        "blowup lower bound 2^n",
        lambda: all(
            harness.blowup_report(n, seed=args.seed)["certified_lower_bound_m_star"] == 2**n
            for n in range(1, min(max_n, 6) + 1)
        ),
    )
    check(
        "fn nonscalar size n-1",
        lambda: all(profile(families.fn_slp(n).slp).L_over_params == n - 1 for n in range(1, max_n + 1)),
    )
    check(
        "elimination cross-oracle",
        lambda: str(families.pn_specialized(2, 0, [1, 1])) == "Y^4 - 6*Y^3 + 11*Y^2 - 6*Y",
    )
    check(
        "sequence spot values",
        lambda: (
            sequences.required_length(sequences.ClassSpec(L=2, t=1, Delta=1), "circuit-class"),
            sequences.required_set_size(sequences.ClassSpec(L=2, t=1, Delta=1), "circuit-class"),
        )
        == (66, 4096),
    )
    check(
        "tangent ranks d<=8",
        lambda: all(
            harness.tangent_rank_paradigm1(d, least_prime_above(2**16, congruent_to=1, modulus=d)).full_rank
            for d in range(1, 9)
        ),
    )
    check(
        "wlt sandwich (4,1,1)",
        lambda: (lambda r: (r.bounds["lower_strict"], r.bounds["upper"]) == (3, 10368))(
            bounds_mod.wlt_vc_sandwich(4, 1, 1)
        ),
    )
    check(
        "shatter tiny linear class",
        lambda: bounds_mod.vc_shatter_oracle(
            [
                parse_poly(s)
                for s in ["0", "1", "-1", "Y", "-Y", "Y + 1", "Y - 1", "-Y + 1", "-Y - 1"]
            ],
            [(-1,), (0,), (1,), (2,)],
            3,
        )["dimension"]
        == 2,
    )
    all_ok = all(r["pass"] for r in rows)
    _emit("reproduce", args.seed, {"table": rows}, started, verdict=all_ok)
    return EXIT_OK if all_ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="elimkit", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slp", help="evaluate, expand, profile, validate SLP files")
    p.add_argument("action", choices=["eval", "expand", "profile", "validate"])
    p.add_argument("--file", required=True)
    p.add_argument("--at", help="comma-separated name=value assignments")
    p.add_argument("--output", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(run=_cmd_slp)

    p = sub.add_parser("seq", help="sequence parameters, sampling, verification, identity tests")
    p.add_argument("action", choices=["params", "sample", "verify", "pit"])
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--K", type=int, default=0)
    p.add_argument("--delta1", type=int, default=1)
    p.add_argument("--delta2", type=int, default=1)
    p.add_argument(
        "--kind",
        default="correct-test",
        choices=["correct-test", "identification", "circuit-class", "circuit"],
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--class-file", dest="class_file")
    p.add_argument("--file", help="SLP file for pit")
    p.set_defaults(run=_cmd_seq)

    p = sub.add_parser("encode", help="value encodings over an identification sequence")
    p.add_argument("action", choices=["values", "decode", "eq"])
    p.add_argument("--gamma", required=True, help="TestSequence JSON file")
    p.add_argument("--poly")
    p.add_argument("--file", help="SLP file")
    p.add_argument("--basis-file", dest="basis_file")
    p.add_argument("--values")
    p.add_argument("--values-b", dest="values_b")
    p.set_defaults(run=_cmd_encode)

    p = sub.add_parser("family", help="explicit families: fd, pn, fn, gtilde, rn, phi")
    p.add_argument("action", choices=["fd", "pn", "fn", "gtilde", "rn", "phi"])
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--t")
    p.add_argument("--u", help="comma-separated rationals")
    p.add_argument("--variant", default="circuit", choices=["circuit", "sparse"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_family)

    p = sub.add_parser("harness", help="certificates and probes")
    p.add_argument(
        "action",
        choices=["elim", "independence", "lk-rank", "tangent", "blowup", "robust", "distinctness", "separable"],
    )
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--t")
    p.add_argument("--u")
    p.add_argument("--mode", default="specialized", choices=["specialized", "first-order"])
    p.add_argument("--field", choices=["rationals", "prime"])
    p.add_argument("--paradigm", type=int, default=1, choices=[1, 2])
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--poly")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_harness)

    p = sub.add_parser("bounds", help="closed-form bounds and the shattering oracle")
    p.add_argument("action", choices=["bezout", "degree", "vc", "wlt", "shatter"])
    p.add_argument("--degv", type=int)
    p.add_argument("--degw", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--K", type=int, default=0)
    p.add_argument("--delta1", type=int, default=1)
    p.add_argument("--delta2", default="1")
    p.add_argument("--equidimensional", action="store_true")
    p.add_argument("--variant", default="complex", choices=["complex", "real"])
    p.add_argument("--eps", default="1")
    p.add_argument("--class-file", dest="class_file")
    p.add_argument("--pool", help="semicolon-separated points, comma-separated coordinates")
    p.add_argument("--max-s", dest="max_s", type=int, default=3)
    p.set_defaults(run=_cmd_bounds)

    p = sub.add_parser("reproduce", help="run the reproduction battery")
    p.add_argument("--all", action="store_true")
    p.add_argument("--max-n", dest="max_n", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_reproduce)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    started = time.time()
    try:
        return args.run(args, started)
    except (ExpansionBudgetError, bounds_mod.BudgetExceededError) as exc:
        _progress(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except (OSError, ValueError, KeyError, TypeError) as exc:
        _progress(f"usage error: {type(exc).__name__}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
