"""Command-line front end.

Exit codes: 0 when every check passed (expected failures included), 1 on any
FAIL, 2 on INCONCLUSIVE without FAIL (truncated or over-budget runs).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import graph as graphmod
from .cartan import CartanError, parse_cartan
from .experiments import (DEFAULT_SEED, SCAN_COLUMNS, c_independence, psi_duality_test, scan_conjecture,
                          shift_test, summarize)
from .graph import BudgetExceeded, explore, hw_elements
from .lattice import (LatticeFunctionals, TruncationError, bl_factorization_witness, check_ell_condition,
                      cyclic_functionals, verify_lattice_embedding)
from .monomial import ORIGINAL, CMatrix, MonomialCrystal, MonomialRule, hw_monomial, parse_monomial
from .verify import FAIL, INCONCLUSIVE, CheckReport, all_checks, check_component_is_Blam, exit_code


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def _rule(args, spec):
    if args.rule == "original":
        return ORIGINAL
    if args.c:
        c = CMatrix.parse(args.c, spec, relaxed=args.relaxed)
    else:
        c = CMatrix.standard(spec)
    return MonomialRule.variant(c)


def _seed(args, spec):
    if args.seed_monomial:
        return parse_monomial(args.seed_monomial, spec)
    if args.hw:
        lam = spec.weight(int(x) for x in args.hw.split(","))
        return hw_monomial(spec, lam)
    raise SystemExit("need --seed-monomial or --hw")


def _add_generate_args(p):
    p.add_argument("--cartan", required=True, help='type such as A2, G2, A1~ or inline JSON')
    p.add_argument("--rule", choices=["original", "variant"], default="original")
    p.add_argument("--c", help='c-matrix, e.g. "1,2:0;2,1:1" or JSON')
    p.add_argument("--relaxed", action="store_true", help="allow c_ij + c_ji >= 1")
    p.add_argument("--seed-monomial", help='e.g. "Y1(0)^2 Y2(3)^-1"')
    p.add_argument("--hw", help='weight shorthand "a,b,..." meaning prod_i Y_i(0)^{a_i}')
    p.add_argument("--depth", type=int)
    p.add_argument("--direction", choices=["f", "e", "both"], default="both")
    p.add_argument("--budget", type=int, help=f"node cap (default ${graphmod.BUDGET_ENV} or 10^6)")


def _generate(args):
    spec = parse_cartan(args.cartan)
    B = MonomialCrystal(spec, _rule(args, spec))
    seed = _seed(args, spec)
    status = 0
    try:
        G = explore(B, [seed], depth=args.depth, direction=args.direction, budget=args.budget)
    except BudgetExceeded as exc:
        G = exc.graph
        print(f"budget of {exc.budget} nodes exceeded; writing partial graph", file=sys.stderr)
        status = 2
    if G.truncated:
        status = 2
    return spec, G, status


def cmd_generate(args) -> int:
    spec, G, status = _generate(args)
    if args.out:
        _write(args.out, graphmod.dumps(G) + "\n")
    if args.dot:
        _write(args.dot, graphmod.to_dot(G))
    print(f"nodes: {len(G)}")
    print(f"edges: {len(G.edges())}")
    print("highest weight elements: " + "; ".join(G.nodes[b].label for b in hw_elements(G)))
    print(f"truncated: {G.truncated}")
    return status


def cmd_check(args) -> int:
    if args.graph:
        G = graphmod.loads(Path(args.graph).read_text())
        spec = G.spec
    else:
        spec, G, _ = _generate(args)
    reports = all_checks(G, spec)
    tops = hw_elements(G)
    if spec.is_finite and not G.truncated and len(tops) == 1 and not G.axiom_unsafe:
        reports.append(check_component_is_Blam(G, spec, G.nodes[tops[0]].wt))
    doc = {"reports": [r.to_json() for r in reports], "exit_code": exit_code(reports)}
    if args.report:
        _write(args.report, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    for r in reports:
        print(f"{r.check_name}: {r.verdict}")
        for w in r.witnesses[:3]:
            print(f"  witness: {w.get('detail', '')}")
    return exit_code(reports)


def cmd_scan(args) -> int:
    types = [t.strip() for t in args.types.split(",") if t.strip()]
    lo, hi = (int(x) for x in args.c_range.split(","))
    rows, failed = scan_conjecture(types, bound=args.bound, rule=args.rule, c_lo=lo, c_hi=hi,
                                   c_total=args.c_sum, depth=args.depth, budget=args.budget)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    _write(args.out, buf.getvalue())
    if args.dump_dir:
        for k, G in failed.items():
            _write(Path(args.dump_dir) / f"fail_{k:04d}.json", graphmod.dumps(G) + "\n")
    print(summarize(rows), file=sys.stderr)
    if args.rule == "variant":
        ind = c_independence(rows)
        print(f"c-independent certificates: {sum(ind.values())}/{len(ind)} (type, weight) groups",
              file=sys.stderr)
    verdicts = {r["verdict"] for r in rows}
    if FAIL in verdicts or any(r["good_violation"] not in ("NONE", "n/a", "") for r in rows):
        return 1
    if INCONCLUSIVE in verdicts:
        structural_fail = any(r["structural"] == FAIL for r in rows)
        return 1 if structural_fail else 2
    return 0


def _functionals(args, spec):
    if args.preset == "cyclic":
        return cyclic_functionals(spec)
    if args.preset == "pm1":
        n = spec.rank
        return LatticeFunctionals([[-1 if i == j else 1 for j in range(n)] for i in range(n)])
    if args.L:
        return LatticeFunctionals.parse(args.L)
    raise SystemExit("need --L or --preset")


def cmd_lattice(args) -> int:
    spec = parse_cartan(args.cartan)
    L = _functionals(args, spec)
    ok, per_pair = check_ell_condition(L, spec)
    try:
        emb = verify_lattice_embedding(spec, L, args.depth)
    except TruncationError as exc:
        print(f"truncation guard tripped: {exc}; rerun with a larger depth margin", file=sys.stderr)
        return 2
    doc = {
        "cartan": spec.name or str(spec),
        "L": L.to_json()["L"],
        "condition": {"holds": ok, "pairs": {f"{i},{j}": v for (i, j), v in per_pair.items()}},
        "embedding": emb.to_json(),
    }
    if spec.rank == 2:
        wit = bl_factorization_witness(spec, L)
        doc["factorization"] = {"holds": wit is None, "witness": None if wit is None else list(map(str, wit))}
    _write(args.out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    print(f"condition holds: {ok}", file=sys.stderr)
    print(f"embedding at depth {args.depth}: {'PASS' if emb.passed else 'FAIL'} {emb.checks}", file=sys.stderr)
    return 0 if emb.passed else 1


def _cm(args, spec):
    return CMatrix.parse(args.c, spec) if args.c else CMatrix.standard(spec)


def _report_out(args, rep: CheckReport) -> int:
    _write(args.out, rep.dumps() + "\n")
    print(f"{rep.check_name}: {rep.verdict}", file=sys.stderr)
    return exit_code([rep])


def cmd_psi(args) -> int:
    spec = parse_cartan(args.cartan)
    return _report_out(args, psi_duality_test(spec, _cm(args, spec), args.count, args.seed))


def cmd_shift(args) -> int:
    spec = parse_cartan(args.cartan)
    return _report_out(args, shift_test(spec, _cm(args, spec), args.count, args.seed, args.max_shift))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kcrystals", description="Monomial and lattice crystal experiments.")
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("generate", help="explore a monomial crystal component")
    _add_generate_args(p)
    p.add_argument("--out", help="CrystalGraph JSON path ('-' for stdout)")
    p.add_argument("--dot", help="DOT output path")
    p.set_defaults(func=cmd_generate)

    p = sp.add_parser("check", help="run the crystal checkers on a graph")
    p.add_argument("--graph", help="CrystalGraph JSON produced by generate")
    _add_generate_args_optional(p)
    p.add_argument("--report", help="CheckReport JSON output path")
    p.set_defaults(func=cmd_check)

    p = sp.add_parser("scan-conjecture", help="sweep types and dominant weights")
    p.add_argument("--types", default="A1,A2,B2")
    p.add_argument("--bound", type=int, default=2, help="max pairing of the dominant weights")
    p.add_argument("--rule", choices=["original", "variant"], default="original")
    p.add_argument("--c-range", default="0,1", help="lo,hi for c entries (variant)")
    p.add_argument("--c-sum", type=int, default=1, help="value of c_ij + c_ji (1 = standard)")
    p.add_argument("--depth", type=int, default=5, help="depth bound for non-finite types")
    p.add_argument("--budget", type=int)
    p.add_argument("--out", default="-", help="CSV output path")
    p.add_argument("--dump-dir", help="directory for graphs of FAIL rows")
    p.set_defaults(func=cmd_scan)

    p = sp.add_parser("lattice", help="lattice realization: condition, embedding, factorization")
    p.add_argument("--cartan", required=True)
    p.add_argument("--L", help='JSON {"L": [[...]]}')
    p.add_argument("--preset", choices=["cyclic", "pm1"])
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_lattice)

    for name, func, helptext in (("dual-psi-test", cmd_psi, "psi duality on random monomials"),
                                 ("shift-test", cmd_shift, "shift isomorphism on random monomials")):
        p = sp.add_parser(name, help=helptext)
        p.add_argument("--cartan", required=True)
        p.add_argument("--c")
        p.add_argument("--count", type=int, default=500)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if name == "shift-test":
            p.add_argument("--max-shift", type=int, default=3)
        p.add_argument("--out", default="-")
        p.set_defaults(func=func)
    return ap


def _add_generate_args_optional(p):
    p.add_argument("--cartan")
    p.add_argument("--rule", choices=["original", "variant"], default="original")
    p.add_argument("--c")
    p.add_argument("--relaxed", action="store_true")
    p.add_argument("--seed-monomial")
    p.add_argument("--hw")
    p.add_argument("--depth", type=int)
    p.add_argument("--direction", choices=["f", "e", "both"], default="both")
    p.add_argument("--budget", type=int)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "check" and not args.graph and not args.cartan:
        raise SystemExit("check needs --graph or --cartan with a seed")
    try:
        return args.func(args)
    except (CartanError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
