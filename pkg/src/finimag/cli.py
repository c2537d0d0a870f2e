"""Command-line front end: ``finimag <command> ...``.

Exit codes: 0 success, 1 failed check, 2 bad input, 3 resource budget.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import acceptance
from .codings import (
    Sort,
    code_gamma_function,
    cover_is_surjective,
    cover_preimage,
    embed_pair_twist,
    fv_decompose,
    rank_as_prime_field_map,
    subgroup_stabilizer_code,
)
from .cohomology import DEFAULT_BUDGET, factor_cocycle, h1
from .descent import descent_report, rational_points
from .errors import BudgetError, CheckFailure, InputError
from .galois_sorts import sorts_report
from .groupoid import iso_classes, random_instance, reduce_pipeline
from .io import load_instance
from .kummer import Tower, residue_iso_check, verify_ramified_duality

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _emit(args, data: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _expect(kind: str, want: str) -> None:
    if kind != want:
        raise InputError(f"expected a {want} instance, got {kind}")


def cmd_h1(args) -> int:
    kind, M = load_instance(args.path)
    _expect(kind, "gamma-group")
    H = h1(M, budget=args.budget)
    data = H.to_json()
    lines = [f"Z1={len(H.cocycles)} H1={H.count}"]
    for i, r in enumerate(H.representatives):
        lines.append(f"  class {i}: rep={list(r.values)} size={len(H.classes[i])}")
    if args.factor:
        data["factor"] = []
        for i, r in enumerate(H.representatives):
            f = factor_cocycle(r)
            data["factor"].append({"class": i, "g2": f.g2.sorted(), "index": f.index, "bound_ok": f.bound_ok,
                                   "factored": list(f.cocycle.values)})
            lines.append(f"  factor {i}: G2={f.g2.sorted()} index={f.index} bound={'ok' if f.bound_ok else 'VIOLATED'}")
            if not f.bound_ok:
                _emit(args, data, lines)
                return EXIT_CHECK
    _emit(args, data, lines)
    return EXIT_OK


def cmd_descent(args) -> int:
    kind, payload = load_instance(args.path)
    _expect(kind, "homogeneous-space")
    space, base = payload
    rat = rational_points(space)
    if base is None:
        if not rat:
            _emit(args, {"rational_points": [], "report": None}, ["no rational base point"])
            return EXIT_OK
        base = rat[0]
    elif base not in rat:
        raise InputError(f"base point {base} is not rational")
    rep = descent_report(space, base)
    status = "PASS" if rep.passed else "FAIL"
    lines = [f"orbits={len(rep.orbits)} kernel={len(rep.kernel)} {status}"]
    lines += [f"  orbit {i} -> class {c}" for i, c in rep.matching]
    lines += [f"  violation: {v}" for v in rep.violations]
    _emit(args, {"rational_points": rat, "report": rep.to_json()}, lines)
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_groupoid(args) -> int:
    if args.path:
        kind, payload = load_instance(args.path)
        _expect(kind, "groupoid")
        gpd, N, Nm = payload
        label = args.path
    else:
        inst = random_instance(random.Random(args.seed))
        gpd, N, Nm, label = inst.gpd, inst.N, inst.Nminus, inst.label
    data = {"instance": label, "objects": gpd.nobj, "morphisms": gpd.nmor, "sym_order": gpd.sym.order,
            "iso_classes": [{"subgroup": sub.sorted(), "classes": iso_classes(gpd, sub)} for sub in gpd.sym.subgroups]}
    lines = [f"groupoid {label}: objects={gpd.nobj} morphisms={gpd.nmor} |sym|={gpd.sym.order}"]
    for entry in data["iso_classes"]:
        lines.append(f"  sym' {entry['subgroup']}: {len(entry['classes'])} iso classes")
    code = EXIT_OK
    if args.pipeline:
        if N is None or Nm is None:
            raise InputError("--pipeline needs N and Nminus in the instance")
        r = reduce_pipeline(gpd, N, Nm)
        data["pipeline"] = r.to_json()
        for cert in r.certificates:
            lines.append(f"  {cert.step}: injective={cert.injective} surjective={cert.surjective}")
        lines.append(f"  composite bijective on every level: {all(c['bijective'] for c in r.composite)}")
        lines.append("PASS" if r.passed else "FAIL")
        code = EXIT_OK if r.passed else EXIT_CHECK
    _emit(args, data, lines)
    return code


def cmd_sorts(args) -> int:
    kind, A = load_instance(args.path)
    _expect(kind, "ambient-action")
    rep = sorts_report(A)
    lines = []
    for o in rep["objects"]:
        if o["galois"]:
            lines.append(f"galois m={o['m']} Gal={o['gal_name']} points={o['points']}")
        else:
            lines.append(f"irreducible m={o['m']} not galois (self-maps={o['self_maps']}) points={o['points']}")
    _emit(args, rep, lines)
    return EXIT_OK


def cmd_code(args) -> int:
    what = args.what
    vals = args.values
    if what == "fv":
        if not vals:
            raise InputError("code fv needs a relation file")
        kind, payload = load_instance(vals[0])
        _expect(kind, "relation")
        R, M1, M2 = payload
        dec = fv_decompose(R, M1, M2)
        lines = [f"atoms={len(dec.rects)}"]
        lines += [f"  {sorted(left)} x {list(atom)}" for left, atom in dec.rects]
        _emit(args, {"atoms": dec.to_json()}, lines)
    elif what == "pair":
        # tokens x=s1,s2
        h = {}
        for tok in vals:
            try:
                x, v = tok.split("=")
                a, b = v.split(",")
                h[int(x)] = (int(a), int(b))
            except ValueError:
                raise InputError(f"expected x=s1,s2, got {tok!r}") from None
        left, right = embed_pair_twist(h)
        _emit(args, {"left": left.to_json(), "right": right.to_json()},
              [f"left={left.to_json()}", f"right={right.to_json()}"])
    elif what == "power":
        d, k, *target = _ints(vals)
        B = Sort.cyclic(d)
        ok = cover_is_surjective(B, k)
        data = {"d": d, "k": k, "surjective": ok}
        lines = [f"cover d={d} k={k} surjective={ok}"]
        if target:
            pre = cover_preimage(B, k, target)
            data["preimage"] = [pre[0], list(pre[1])]
            lines.append(f"preimage b={pre[0]} exponents={list(pre[1])}")
        _emit(args, data, lines)
        return EXIT_OK if ok else EXIT_CHECK
    elif what == "gamma":
        try:
            h = [Fraction(v) for v in vals]
        except (ValueError, ZeroDivisionError):
            raise InputError("values must be rationals") from None
        code = code_gamma_function(h)
        _emit(args, code.to_json(), [f"image={[str(v) for v in code.image]} ranks={list(code.ranks)}"])
    elif what == "rank":
        ranks = _ints(vals)
        p, sets = rank_as_prime_field_map(ranks, args.prime)
        _emit(args, {"p": p, "sets": [sorted(s) for s in sets]}, [f"p={p} sets={[sorted(s) for s in sets]}"])
    elif what == "stabilizer":
        n, *H = _ints(vals)
        Y = subgroup_stabilizer_code(n, H)
        _emit(args, {"n": n, "Y": Y}, [f"Y={Y} stabilizer=H verified"])
    return EXIT_OK


def _ints(vals) -> list[int]:
    try:
        return [int(v) for v in vals]
    except ValueError:
        raise InputError(f"expected integers, got {vals}") from None


def cmd_kummer(args) -> int:
    if len(args.tower) == 1:
        kind, T = load_instance(args.tower[0])
        _expect(kind, "tower")
    elif len(args.tower) == 3:
        T = Tower(*_ints(args.tower))
    else:
        raise InputError("kummer takes N N' n or a tower file")
    info = T.verify()
    res = residue_iso_check(T)
    data = {"tower": [T.N, T.N2, T.n], "aut": info, "residue": res}
    lines = [f"aut order={info['order']} ramified={info['ramified']} unramified={info['unramified']}",
             f"residue iso verified order={res['left_order']}"]
    if args.duality:
        dual = verify_ramified_duality(T)
        data["duality"] = dual
        lines.append(f"iso verified order={dual['order']}")
    _emit(args, data, lines)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = []
    for k in sorted(acceptance.CRITERIA):
        r = acceptance.run_criterion(k, args.scale, args.seed)
        print(f"{r.line()} ({r.seconds:.2f}s)", file=sys.stderr)
        results.append(r)
    if args.json:
        print(acceptance.report_json(results))
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finimag", description="Finite models of imaginaries, cocycles and descent.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration cap")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("h1", parents=[common], help="first cohomology of a gamma-group")
    s.add_argument("path")
    s.add_argument("--factor", action="store_true", help="factor each class representative")
    s.set_defaults(func=cmd_h1)

    s = sub.add_parser("descent", parents=[common], help="orbits of rational points vs. H1 kernel")
    s.add_argument("path")
    s.set_defaults(func=cmd_descent)

    s = sub.add_parser("groupoid", parents=[common], help="iso classes and the reduction pipeline")
    s.add_argument("path", nargs="?")
    s.add_argument("--pipeline", action="store_true")
    s.set_defaults(func=cmd_groupoid)

    s = sub.add_parser("sorts", parents=[common], help="Galois sorts of an ambient action")
    s.add_argument("path")
    s.set_defaults(func=cmd_sorts)

    s = sub.add_parser("code", parents=[common], help="coding maps")
    s.add_argument("what", choices=["fv", "pair", "power", "gamma", "rank", "stabilizer"])
    s.add_argument("values", nargs="*")
    s.add_argument("--prime", type=int, default=None)
    s.set_defaults(func=cmd_code)

    s = sub.add_parser("kummer", parents=[common], help="automorphisms of a monomial tower")
    s.add_argument("tower", nargs="+", help="N N' n, or a tower file")
    s.add_argument("--duality", action="store_true", help="verify the ramified part against Hom(Z/n, mu_n)")
    s.set_defaults(func=cmd_kummer)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suites")
    s.add_argument("scale", choices=acceptance.SCALES)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
