"""Command-line front end.

Exit codes: 0 success (or "equal"/"valid"), 1 negative answer (unequal
expressions, invalid certificate, selftest disagreement), 2 error (bad
input, malformed files, context violations).

Context files are JSON objects such as {"case": "cm", "disc": -20}; see
make_context for the accepted cases and fields.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .arith import TorsionSubgroup, IntMatrix, matrix_isogeny_degree, count_subgroups
from .contexts import CM, IsogenyContext, make_context
from .errors import K0Error
from .expr import eval_expression, parse_expression
from .k0 import Derivation, derive_same_degree, k0_class, validate_derivation
from .kernels import kernel_from_counts, parse_kernel_literal
from .quadforms import class_group, square_classes
from . import oracle


def _load_context(path: str) -> IsogenyContext:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise K0Error(f"cannot read context file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise K0Error(f"context file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise K0Error("context file must hold a JSON object")
    return make_context(data)


def _emit(args, payload: dict, human: str) -> None:
    print(json.dumps(payload, indent=2) if args.json else human)


def _cmd_classgroup(args) -> int:
    cg = class_group(args.disc)
    sq = square_classes(args.disc)
    payload = {
        "disc": args.disc,
        "h": cg.h,
        "forms": [list(f.triple()) for f in cg.elements],
        "square_subgroup": sorted(list(f.triple()) for f in sq.squares),
        "coset_reps": [list(f.triple()) for f in sq.coset_reps],
        "index": sq.index,
    }
    lines = [f"discriminant {args.disc}: h = {cg.h}", "reduced forms:"]
    lines += [f"  {f}" for f in cg.elements]
    lines.append(f"square subgroup (order {len(sq.squares)}), coset index {sq.index}:")
    lines += [f"  coset of {f}" for f in sq.coset_reps]
    _emit(args, payload, "\n".join(lines))
    return 0


def _cmd_structure(args) -> int:
    ctx = _load_context(args.ctx)
    st = ctx.structure()
    payload = {"context": ctx.to_json(), "structure": st.to_json()}
    _emit(args, payload, f"{ctx.describe()}: {st.describe()}")
    return 0


def _cmd_dist(args) -> int:
    ctx = _load_context(args.ctx)
    if args.kernel is not None:
        p = getattr(ctx, "p", None)
        if p is None:
            raise K0Error("kernel input requires a characteristic-p context")
        counts = parse_kernel_literal(args.kernel)
        cls = k0_class(ctx, 1, kernel_from_counts(p, counts)).deg
    else:
        try:
            q = Fraction(args.degree)
        except (ValueError, ZeroDivisionError) as exc:
            raise K0Error(f"bad degree {args.degree!r}: {exc}") from exc
        cls = ctx.degree_class(q)
    payload = {"context": ctx.to_json(), "class": cls.to_json()}
    _emit(args, payload, cls.describe())
    return 0


def _cmd_eval(args) -> int:
    ctx = _load_context(args.ctx)
    left = eval_expression(ctx, parse_expression(args.expr))
    payload = {"context": ctx.to_json(), "value": left.to_json()}
    if args.equals is None:
        _emit(args, payload, left.describe())
        return 0
    right = eval_expression(ctx, parse_expression(args.equals))
    equal = left == right
    payload.update({"other": right.to_json(), "equal": equal})
    _emit(
        args,
        payload,
        f"{left.describe()} {'=' if equal else '!='} {right.describe()}",
    )
    return 0 if equal else 1


def _parse_hnf(text: str, level: int) -> TorsionSubgroup:
    parts = text.replace(",", " ").split()
    if len(parts) != 4:
        raise K0Error(f"subgroup basis needs 4 integers (row-major), got {text!r}")
    try:
        x = [int(v) for v in parts]
    except ValueError as exc:
        raise K0Error(f"bad subgroup basis {text!r}: {exc}") from exc
    return TorsionSubgroup(level, ((x[0], x[1]), (x[2], x[3])))


def _cmd_derive(args) -> int:
    c1 = _parse_hnf(args.c1, args.n)
    c2 = _parse_hnf(args.c2, args.n)
    derivation = derive_same_degree(args.n, c1, c2)
    cert = derivation.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(cert, fh, indent=2)
            fh.write("\n")
        _emit(
            args,
            {"ok": True, "steps": len(derivation.steps), "degree": derivation.degree, "out": args.out},
            f"wrote certificate ({len(derivation.steps)} steps, degree {derivation.degree}) to {args.out}",
        )
    else:
        print(json.dumps(cert, indent=2))
    return 0


def _cmd_check(args) -> int:
    try:
        with open(args.cert, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise K0Error(f"cannot read certificate: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise K0Error(f"certificate is not valid JSON: {exc}") from exc
    derivation = Derivation.from_json(data)
    result = validate_derivation(derivation)
    payload = {
        "valid": result.ok,
        "level": derivation.level,
        "steps": len(derivation.steps),
        "failures": list(result.failures),
    }
    if result.ok:
        _emit(args, payload, f"certificate valid ({len(derivation.steps)} steps)")
        return 0
    _emit(args, payload, "certificate INVALID:\n" + "\n".join(f"  {f}" for f in result.failures))
    return 1


def _selftest_suites(max_disc: int, max_level: int):
    def fundamental(limit):
        from .quadforms import is_fundamental_discriminant

        return [d for d in range(-3, -limit - 1, -1) if d % 4 in (0, 1) and is_fundamental_discriminant(d)]

    def suite_forms():
        for d in fundamental(max_disc):
            main = sorted(f.triple() for f in class_group(d).elements)
            ora = sorted(f.triple() for f in oracle.enumerate_reduced_forms(d))
            if main != ora:
                return f"form lists differ at disc {d}"
        return None

    def suite_squares():
        for d in fundamental(min(max_disc, 200)):
            main = {f.triple() for f in square_classes(d).squares}
            if main != oracle.square_class_triples(d):
                return f"square subgroups differ at disc {d}"
        return None

    def suite_norms():
        for d in (-4, -8, -20):
            ctx = CM(d)
            sq = oracle.square_class_triples(d)
            for ell in range(2, 100):
                if any(ell % f == 0 for f in range(2, ell)):
                    continue
                main = ctx.is_norm(ell)
                witness = oracle.norm_witness_search(ell, d)
                if main and (witness is None or not oracle.check_witness(ell, d, witness)):
                    return f"norm claim without witness: {ell} at disc {d}"
                if not main and witness is not None:
                    return f"witness against non-norm claim: {ell} at disc {d}"
        return None

    def suite_degrees():
        rng = random.Random(20260815)
        for _ in range(50):
            n = rng.randint(1, 4)
            g = rng.randint(1, 3)
            rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
            m = IntMatrix.from_rows(rows)
            if m.det() == 0:
                continue
            if matrix_isogeny_degree(m, g).as_fraction() != oracle.lattice_degree_oracle(rows, g):
                return f"degree mismatch for {rows} at g={g}"
        return None

    def suite_subgroup_counts():
        for n in range(1, max_level + 1):
            if count_subgroups(n) != len(oracle.exhaustive_subgroups(n)):
                return f"subgroup count differs at level {n}"
        return None

    def suite_derivations():
        for n in range(1, max_level + 1):
            subs = oracle.exhaustive_subgroups(n)
            by_order: dict[int, list[TorsionSubgroup]] = {}
            for s in subs:
                by_order.setdefault(s.order, []).append(s)
            for order, group in by_order.items():
                for c1 in group:
                    for c2 in group:
                        d = derive_same_degree(order, c1, c2)
                        if not validate_derivation(d):
                            return f"derivation failed for order {order} at level {n}"
        return None

    return [
        ("reduced forms vs enumeration", suite_forms),
        ("square subgroup vs ideal squaring", suite_squares),
        ("norm decisions vs witness search", suite_norms),
        ("matrix degrees vs lattice index", suite_degrees),
        ("subgroup counts vs enumeration", suite_subgroup_counts),
        ("derivations validate exhaustively", suite_derivations),
    ]


def _cmd_selftest(args) -> int:
    results = []
    ok = True
    for name, fn in _selftest_suites(args.max_disc, args.max_level):
        failure = fn()
        results.append({"suite": name, "ok": failure is None, "detail": failure})
        ok = ok and failure is None
        if not args.json:
            status = "ok" if failure is None else f"FAIL: {failure}"
            print(f"{name}: {status}")
    if args.json:
        print(json.dumps({"ok": ok, "suites": results}, indent=2))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k0",
        description="Grothendieck-group invariants of isogeny categories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=fn)
        return p

    p = add("classgroup", _cmd_classgroup, "reduced forms, class number, square classes")
    p.add_argument("--disc", type=int, required=True, help="fundamental discriminant (negative)")

    p = add("structure", _cmd_structure, "structure of the degree-class group")
    p.add_argument("--ctx", required=True, help="context file (JSON)")

    p = add("dist", _cmd_dist, "canonical degree class of a rational or kernel")
    p.add_argument("--ctx", required=True, help="context file (JSON)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--degree", help="positive rational, e.g. 15 or 3/4")
    group.add_argument("--kernel", help="kernel literal, e.g. '{mup:1, coprime:12}'")

    p = add("eval", _cmd_eval, "evaluate an expression to canonical form")
    p.add_argument("--ctx", required=True, help="context file (JSON)")
    p.add_argument("expr", help="expression, e.g. '[1; 15] - [1; 3]'")
    p.add_argument("--equals", help="second expression; exit 0 iff equal")

    p = add("derive", _cmd_derive, "produce a same-degree certificate")
    p.add_argument("--n", type=int, required=True, help="common subgroup order (and torsion level)")
    p.add_argument("--c1", required=True, help="subgroup basis, row-major 'a,b,0,d'")
    p.add_argument("--c2", required=True, help="subgroup basis, row-major 'a,b,0,d'")
    p.add_argument("--out", help="write the certificate to this file")

    p = add("check", _cmd_check, "validate a certificate")
    p.add_argument("--cert", required=True, help="certificate file (JSON)")

    p = add("selftest", _cmd_selftest, "run oracle agreement suites")
    p.add_argument("--max-disc", type=int, default=300, help="discriminant bound (default 300)")
    p.add_argument("--max-level", type=int, default=8, help="torsion level bound (default 8)")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except K0Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
