"""Command-line interface: parse expressions, run the engine, emit reports.

Exit codes: 0 success (and all checks passed), 1 an identity check failed
unexpectedly, 2 usage or syntax error, 3 size-guardrail refusal.  Reports
go to stdout or --out; diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .algebra import JetPolynomial
from .calculus import NotAMember, derive, inversion_expansion, partner
from .combinatorics import (
    permutations_with_partial_sum,
    shift_split_permutation,
)
from .identities import (
    degree_two_basis,
    degree_two_level_dimension,
    probe_dimensions,
    verify_degree_two_basis,
    verify_general_identity,
    verify_split_identity,
)
from .subspaces import SizeLimitError, solve_subspace
from .textio import (
    ParseError,
    format_laurent,
    format_polynomial,
    parse_parts,
    parse_polynomial,
    parse_range,
)

SCHEMA_VERSION = 1

# Bijection checks enumerate full permutation sets; past this level only
# the counting legs run.
BIJECTION_MAX_LEVEL = 10


def _scalar(value):
    """JSON-safe exact scalar: rationals become strings, never floats."""
    return str(value)


def _poly_str(poly: JetPolynomial) -> str:
    return format_polynomial(poly)


# ---------------------------------------------------------------------------
# verb handlers: each returns (exit_code, parameters, result, lines, csv_table)
# where csv_table is (header, rows).


def _cmd_expand(args):
    poly = parse_polynomial(args.poly)
    expansion = inversion_expansion(poly)
    terms = sorted(
        expansion.terms.items(), key=lambda kv: (-kv[0][1], kv[0][0].sort_key())
    )
    rendered = format_laurent(expansion)
    result = {
        "rendered": rendered,
        "terms": [
            {
                "coefficient": _scalar(coeff),
                "numerator": "*".join(
                    f"x{r}^{e}" if e > 1 else f"x{r}" for r, e in reversed(numer.exps)
                )
                or "1",
                "x0_power": power,
            }
            for (numer, power), coeff in terms
        ],
    }
    lines = [f"poly: {_poly_str(poly)}", f"expansion: {rendered}"]
    rows = [
        [t["coefficient"], t["numerator"], t["x0_power"]] for t in result["terms"]
    ]
    return 0, {"poly": args.poly}, result, lines, (["coefficient", "numerator", "x0_power"], rows)


def _partner_payload(args):
    poly = parse_polynomial(args.poly)
    if not poly:
        raise ValueError("the zero polynomial has no partner")
    outcome = partner(poly, args.n)
    if isinstance(outcome, NotAMember):
        witness = (
            f"{outcome.witness_coefficient}*"
            + (
                "*".join(
                    f"x{r}^{e}" if e > 1 else f"x{r}"
                    for r, e in reversed(outcome.witness_numerator.exps)
                )
                or "1"
            )
            + f"/x0^{-outcome.witness_power}"
        )
        result = {
            "member": False,
            "partner": None,
            "min_x0_power": outcome.min_x0_power,
            "witness": witness,
        }
    else:
        result = {
            "member": True,
            "partner": _poly_str(outcome),
            "min_x0_power": inversion_expansion(poly).min_x0_power,
            "witness": None,
        }
    return poly, result


def _cmd_partner(args):
    poly, result = _partner_payload(args)
    lines = [f"poly: {_poly_str(poly)}", f"level: {args.n}"]
    if result["member"]:
        lines.append(f"partner: {result['partner']}")
    else:
        lines.append("not a member")
        lines.append(f"min x0 power: {result['min_x0_power']}")
        lines.append(f"witness: {result['witness']}")
    header = ["member", "min_x0_power", "partner", "witness"]
    rows = [[result["member"], result["min_x0_power"], result["partner"] or "", result["witness"] or ""]]
    return 0, {"poly": args.poly, "n": args.n}, result, lines, (header, rows)


def _cmd_member(args):
    poly, result = _partner_payload(args)
    lines = [f"poly: {_poly_str(poly)}", f"level: {args.n}"]
    if result["member"]:
        lines.append("member: yes")
        lines.append(f"partner: {result['partner']}")
    else:
        lines.append("member: no")
        lines.append(f"min x0 power: {result['min_x0_power']}")
        lines.append(f"witness: {result['witness']}")
    header = ["member", "min_x0_power", "partner", "witness"]
    rows = [[result["member"], result["min_x0_power"], result["partner"] or "", result["witness"] or ""]]
    return 0, {"poly": args.poly, "n": args.n}, result, lines, (header, rows)


def _cmd_derive(args):
    poly = parse_polynomial(args.poly)
    out = derive(poly)
    result = {"derivative": _poly_str(out)}
    lines = [f"poly: {_poly_str(poly)}", f"derivative: {result['derivative']}"]
    return 0, {"poly": args.poly}, result, lines, (["derivative"], [[result["derivative"]]])


def _cmd_basis(args):
    if args.source == "closed":
        if args.d not in (None, 2):
            raise ValueError("the closed-form basis exists for degree 2 only")
        if args.level is not None:
            raise ValueError("--level applies to --source solver only")
        elements = degree_two_basis(args.n)
        d = 2
        levels: dict[int, int] = {}
        for p in elements:
            levels[p.weight] = levels.get(p.weight, 0) + 1
    else:
        d = args.d if args.d is not None else 2
        report = solve_subspace(args.n, d, args.level)
        elements = report.basis
        levels = {l: v for l, v in (report.level_dimensions or {}).items() if v}
    result = {
        "n": args.n,
        "d": d,
        "level": args.level,
        "source": args.source,
        "dimension": len(elements),
        "level_dimensions": {str(l): v for l, v in sorted(levels.items())},
        "elements": [_poly_str(p) for p in elements],
    }
    lines = [
        f"n={args.n} d={d} source={args.source}"
        + (f" level={args.level}" if args.level is not None else ""),
        f"dimension: {len(elements)}",
        "levels: " + " ".join(f"{l}:{v}" for l, v in sorted(levels.items())),
        "basis:",
    ]
    lines.extend(f"  {e}" for e in result["elements"])
    header = ["n", "d", "level", "index", "element"]
    rows = [
        [args.n, d, "" if args.level is None else args.level, i, e]
        for i, e in enumerate(result["elements"])
    ]
    return 0, {"n": args.n, "d": args.d, "level": args.level, "source": args.source}, result, lines, (header, rows)


def _cmd_dims(args):
    records = []
    for n in args.n:
        solver_levels = None
        if args.solver:
            solver_levels = solve_subspace(n, 2).level_dimensions or {}
        for l in range(0, 2 * n - 3):
            record = {"n": n, "level": l, "closed_form": degree_two_level_dimension(n, l)}
            if solver_levels is not None:
                record["solver"] = solver_levels.get(l, 0)
                record["match"] = record["solver"] == record["closed_form"]
            records.append(record)
    all_match = all(r.get("match", True) for r in records)
    result = {"rows": records, "all_match": all_match}
    lines = []
    for r in records:
        line = f"n={r['n']} level={r['level']} closed={r['closed_form']}"
        if "solver" in r:
            line += f" solver={r['solver']} match={'yes' if r['match'] else 'NO'}"
        lines.append(line)
    if args.solver:
        lines.append(f"all match: {'yes' if all_match else 'NO'}")
    header = ["n", "level", "closed_form"] + (["solver", "match"] if args.solver else [])
    rows = [[r[h] for h in header] for r in records]
    code = 0 if all_match else 1
    return code, {"n": _range_str(args.n), "solver": args.solver}, result, lines, (header, rows)


def _cmd_solve(args):
    report = solve_subspace(args.n, args.d, args.level, method=args.method)
    levels = {l: v for l, v in (report.level_dimensions or {}).items() if v}
    result = {
        "n": args.n,
        "d": args.d,
        "level": args.level,
        "dimension": report.dimension,
        "candidate_count": report.candidate_count,
        "level_dimensions": {str(l): v for l, v in sorted(levels.items())},
        "basis": [_poly_str(p) for p in report.basis],
    }
    lines = [
        f"n={args.n} d={args.d}" + (f" level={args.level}" if args.level is not None else ""),
        f"dimension: {report.dimension}",
        f"candidates: {report.candidate_count}",
    ]
    if levels:
        lines.append("levels: " + " ".join(f"{l}:{v}" for l, v in sorted(levels.items())))
    lines.append("basis:")
    lines.extend(f"  {e}" for e in result["basis"])
    header = ["n", "d", "level", "dimension", "candidate_count", "index", "element"]
    rows = [
        [args.n, args.d, "" if args.level is None else args.level, report.dimension, report.candidate_count, i, e]
        for i, e in enumerate(result["basis"])
    ]
    if not rows:
        rows = [[args.n, args.d, "" if args.level is None else args.level, report.dimension, report.candidate_count, "", ""]]
    return 0, {"n": args.n, "d": args.d, "level": args.level, "method": args.method}, result, lines, (header, rows)


def _instance_json(instance):
    out = {}
    for key, value in instance.items():
        if key == "mu":
            out[key] = list(value)
        else:
            out[key] = value
    return out


def _cmd_identity(args):
    reports = []
    if args.check == "counts":
        for n in args.n:
            rep = verify_split_identity(n, check_bijection=n <= BIJECTION_MAX_LEVEL)
            reports.append((({"n": n}), rep))
    elif args.check == "counts-general":
        for n in args.n:
            k2_values = [args.k2] if args.k2 is not None else list(range(1, n - 2))
            for k2 in k2_values:
                rep = verify_general_identity(n, k2)
                reports.append(({"n": n, "k2": k2}, rep))
    else:
        for n in args.n:
            reports.append(({"n": n}, verify_degree_two_basis(n)))
    overall = all(rep.passed for _, rep in reports)
    result = {
        "check": args.check,
        "overall": overall,
        "reports": [
            {
                **params,
                "statement": rep.statement,
                "passed": rep.passed,
                "instances": [_instance_json(inst) for inst in rep.instances],
                "witnesses": [_instance_json(w) for w in rep.witnesses],
            }
            for params, rep in reports
        ],
    }
    lines = []
    header = ["n", "k2", "check", "mu", "left", "right", "passed"]
    rows = []
    for params, rep in reports:
        tag = " ".join(f"{k}={v}" for k, v in params.items())
        lines.append(f"[{args.check}] {tag}")
        for inst in rep.instances:
            desc = []
            if "mu" in inst:
                desc.append("mu=(" + ",".join(map(str, inst["mu"])) + ")")
            if "check" in inst:
                desc.append(inst["check"])
            for key in ("left", "right", "hits_upper", "hits_lower", "witness_count"):
                if key in inst:
                    desc.append(f"{key}={inst[key]}")
            if "bijection_ok" in inst:
                desc.append(f"bijection={'ok' if inst['bijection_ok'] else 'BROKEN'}")
            desc.append("pass" if inst["passed"] else "FAIL")
            lines.append("  " + " ".join(desc))
            rows.append(
                [
                    params.get("n", ""),
                    params.get("k2", ""),
                    inst.get("check", ""),
                    ",".join(map(str, inst["mu"])) if "mu" in inst else "",
                    inst.get("left", ""),
                    inst.get("right", ""),
                    inst["passed"],
                ]
            )
        for w in rep.witnesses:
            lines.append(
                "  witness mu=(" + ",".join(map(str, w["mu"])) + f") left={w['left']} right={w['right']}"
            )
    lines.append(f"overall: {'PASS' if overall else 'FAIL'}")
    return (0 if overall else 1), {"check": args.check, "n": _range_str(args.n), "k2": args.k2}, result, lines, (header, rows)


def _cmd_bijection(args):
    mu = parse_parts(args.mu)
    source = permutations_with_partial_sum(mu, args.n - 1)
    target = permutations_with_partial_sum(mu, args.n - 2)
    pairs = [(omega, shift_split_permutation(omega, args.n, mu)) for omega in source]
    images = [img for _, img in pairs]
    bijective = len(set(images)) == len(source) and set(images) == set(target)
    result = {
        "n": args.n,
        "mu": list(mu),
        "source_count": len(source),
        "target_count": len(target),
        "bijective": bijective,
        "pairs": [[list(a), list(b)] for a, b in pairs],
    }
    lines = [f"n={args.n} mu=(" + ",".join(map(str, mu)) + ")"]
    for a, b in pairs:
        lines.append("  (" + ",".join(map(str, a)) + ") -> (" + ",".join(map(str, b)) + ")")
    lines.append(f"source: {len(source)}  target: {len(target)}")
    lines.append(f"bijective: {'yes' if bijective else 'NO'}")
    header = ["source", "image"]
    rows = [[",".join(map(str, a)), ",".join(map(str, b))] for a, b in pairs]
    return (0 if bijective else 1), {"n": args.n, "mu": args.mu}, result, lines, (header, rows)


def _cmd_probe(args):
    records = []
    for n in args.n:
        probe = probe_dimensions(n, args.d)
        records.append(probe)
    consistent = all(p.consistent for p in records)
    result = {
        "d": args.d,
        "records": [
            {
                "n": p.n,
                "d": p.d,
                "dimension": p.dimension,
                "binomial": p.binomial,
                "matches_binomial": p.matches_binomial,
                "level_dimensions": {str(l): v for l, v in sorted(p.level_dimensions.items())},
                "support_ok": p.support_ok,
                "symmetry_ok": p.symmetry_ok,
                "consistent": p.consistent,
            }
            for p in records
        ],
        "all_consistent": consistent,
    }
    lines = []
    for p in records:
        lines.append(
            f"n={p.n} d={p.d} dimension={p.dimension} binomial={p.binomial}"
            f" matches_binomial={'yes' if p.matches_binomial else 'no'}"
        )
        lines.append(
            "  levels: " + " ".join(f"{l}:{v}" for l, v in sorted(p.level_dimensions.items()))
        )
        lines.append(
            f"  support_ok={'yes' if p.support_ok else 'no'}"
            f" symmetry_ok={'yes' if p.symmetry_ok else 'no'}"
            f" consistent={'yes' if p.consistent else 'NO'}"
        )
    header = [
        "n", "d", "dimension", "binomial", "matches_binomial",
        "support_ok", "symmetry_ok", "consistent", "level", "level_dimension",
    ]
    rows = []
    for p in records:
        for l, v in sorted(p.level_dimensions.items()):
            rows.append(
                [p.n, p.d, p.dimension, p.binomial, p.matches_binomial,
                 p.support_ok, p.symmetry_ok, p.consistent, l, v]
            )
    return (0 if consistent else 1), {"n": _range_str(args.n), "d": args.d}, result, lines, (header, rows)


def _range_str(r: range) -> str:
    return f"{r.start}..{r.stop - 1}"


# ---------------------------------------------------------------------------
# parser and dispatch


def _range_arg(text):
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetpoly",
        description="Exact jet-polynomial computations: expansions, partners, subspace bases, identity checks.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")
        p.add_argument("--out", default=None, help="write the report to a file instead of stdout")

    p = sub.add_parser("expand", help="inversion expansion of a polynomial")
    p.add_argument("--poly", required=True)
    p.set_defaults(handler=_cmd_expand)
    common(p)

    p = sub.add_parser("partner", help="level-n partner of a polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_partner)
    common(p)

    p = sub.add_parser("member", help="membership test with evidence")
    p.add_argument("--poly", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_member)
    common(p)

    p = sub.add_parser("derive", help="total derivative of a polynomial")
    p.add_argument("--poly", required=True)
    p.set_defaults(handler=_cmd_derive)
    common(p)

    p = sub.add_parser("basis", help="closed-form or solver basis")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--source", choices=["closed", "solver"], default="closed")
    p.set_defaults(handler=_cmd_basis)
    common(p)

    p = sub.add_parser("dims", help="degree-two slice dimension table")
    p.add_argument("--n", type=_range_arg, default=range(2, 13))
    p.add_argument("--solver", action="store_true", help="also run the kernel solver and compare")
    p.set_defaults(handler=_cmd_dims)
    common(p)

    p = sub.add_parser("solve", help="dimension and basis from the kernel solver")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--method", choices=["graded", "direct"], default="graded")
    p.set_defaults(handler=_cmd_solve)
    common(p)

    p = sub.add_parser("identity", help="verify a counting or basis identity over a grid")
    p.add_argument("--check", choices=["counts", "counts-general", "basis"], required=True)
    p.add_argument("--n", type=_range_arg, default=None)
    p.add_argument("--k2", type=int, default=None)
    p.set_defaults(handler=_cmd_identity)
    common(p)

    p = sub.add_parser("bijection", help="dump the split-shift map and check bijectivity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", required=True, help="composition as a comma list, e.g. 2,1,0")
    p.set_defaults(handler=_cmd_bijection)
    common(p)

    p = sub.add_parser("probe", help="record solver dimensions for an open (n, d) range")
    p.add_argument("--n", type=_range_arg, default=range(6, 10))
    p.add_argument("--d", type=int, default=3)
    p.set_defaults(handler=_cmd_probe)
    common(p)

    return parser


_IDENTITY_DEFAULT_RANGES = {
    "counts": range(4, 15),
    "counts-general": range(4, 13),
    "basis": range(2, 13),
}


def _emit(args, verb, exit_code, parameters, result, lines, csv_table):
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "verb": verb,
            "parameters": parameters,
            "result": result,
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif args.format == "csv":
        header, rows = csv_table
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
        text = buffer.getvalue()
    else:
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return exit_code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "identity" and args.n is None:
        args.n = _IDENTITY_DEFAULT_RANGES[args.check]
    try:
        exit_code, parameters, result, lines, csv_table = args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return _emit(args, args.verb, exit_code, parameters, result, lines, csv_table)


if __name__ == "__main__":
    sys.exit(main())
