"""Command-line entry point: ``cartan-lab <subcommand> ...``.

Exit codes: 0 success / EMPIRICALLY_PROPER / ADMISSIBLE / PASS, 2 parse
error, 3 math error, 4 VIOLATION (or failed check), 5 INCONCLUSIVE,
6 element cap hit (partial outputs are written and flagged).  Every nonzero
exit prints one ``cartan-lab: exit=<code> reason=<token> detail=<text>`` line
on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import platform
import random
import sys
import time
from pathlib import Path

from . import __version__
from ._backend import BACKEND
from .cartan import PairMu, cartan_projection, mu_scalar
from .errors import (
    CartanLabError,
    ConvergenceError,
    DeterminantError,
    ElementCapError,
    EntrySizeError,
    GroupSpecError,
    ScalarParseError,
)
from .groups import EnumConfig, generate_ball, max_elements_from_env
from .matrices import GeneratorSet, Pair, SLMatrix, group_spec_to_json, load_group_spec
from .properness import (
    EMPIRICALLY_PROPER,
    INCONCLUSIVE,
    VIOLATION,
    Scenario,
    graph_admissibility,
    graph_group,
    margin_rows,
    phi_generator_set,
    phi_images,
    properness_report,
    quadric_action,
    quadric_check,
    report_csv,
    report_summary,
    scenario_for,
    theorem12_check,
    torsion_demo,
)
from .scalars import FieldDescriptor
from .svg import scatter_pairs, scatter_sl3

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MATH = 3
EXIT_VIOLATION = 4
EXIT_INCONCLUSIVE = 5
EXIT_CAP = 6

VERDICT_EXIT = {EMPIRICALLY_PROPER: EXIT_OK, VIOLATION: EXIT_VIOLATION, INCONCLUSIVE: EXIT_INCONCLUSIVE}


class CliExit(Exception):
    def __init__(self, code, reason, detail=""):
        super().__init__(detail)
        self.code = code
        self.reason = reason
        self.detail = detail


def _float_list(text):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("values must be nonnegative")
    return vals


def _int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("values must be positive integers")
    return vals


def _pairs(text):
    out = []
    for item in text.split(","):
        a, sep, b = item.partition(":")
        if not sep or not a.strip().isdigit() or not b.strip().isdigit():
            raise argparse.ArgumentTypeError(f"pairs look like 1:2,2:1; got {item!r}")
        out.append((int(a), int(b)))
    return out


def _field(text):
    try:
        return FieldDescriptor.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.exit(_fail(EXIT_PARSE, "usage", message))


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--input", type=Path, help="JSON group spec")
    common.add_argument("--field", type=_field, help="real | padic:<p> | laurent:<p> (overrides the spec)")
    common.add_argument("--radius", type=_nonneg, default=3, help="word-ball radius")
    common.add_argument("--thresholds", type=_float_list, help="norm thresholds a,b,c")
    common.add_argument("--r-grid", type=_float_list, default=[0.0, 1.0, 2.0], help="R values for graph-check")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--oracle", choices=["snf", "minors", "both"], default="snf")

    parser = _Parser(prog="cartan-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("mu", parents=[common], help="Cartan projection of each generator")
    sub.add_parser("ball", parents=[common], help="enumerate a word ball")
    sub.add_parser("properness", parents=[common], help="margin census and properness verdict")
    g = sub.add_parser("graph-check", parents=[common], help="admissibility of a graph group")
    g.add_argument("--phi", default="trivial", help="trivial | identity | path to a spec of generator images")
    t = sub.add_parser("torsion-demo", parents=[common], help="infinite torsion group over F_p((t))")
    t.add_argument("--p", type=int, default=2)
    t.add_argument("--n", type=_int_list, default=[1, 2, 3], help="exponents n for (g_n, g_2n), (g_2n, g_n)")
    t.add_argument("--pairs", type=_pairs, help="alternative generators a:b meaning (g_a, g_b)")
    q = sub.add_parser("quadric", parents=[common], help="invariance of x1 x4 - x2 x3 under (g1, g2) . u")
    q.add_argument("--samples", type=_positive, default=1000)
    q.add_argument("--seed", type=int, default=0)
    s = sub.add_parser("selftest", parents=[common], help="quick end-to-end checks")
    s.add_argument("--seed", type=int, default=0)
    return parser


# --- helpers -------------------------------------------------------------------


def _load(args) -> GeneratorSet:
    if args.input is None:
        raise CliExit(EXIT_PARSE, "missing-input", "--input is required")
    try:
        return load_group_spec(args.input, args.field)
    except OSError as exc:
        raise CliExit(EXIT_PARSE, "unreadable-input", str(exc))


def _out_dir(args):
    if args.out is None:
        return None
    args.out.mkdir(parents=True, exist_ok=True)
    return args.out


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_json(path: Path, obj):
    _write(path, json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _write_meta(out: Path, args, extra=None):
    # run metadata stays out of the data files so those are reproducible byte for byte
    meta = {
        "command": args.command,
        "workers": args.workers,
        "backend": BACKEND,
        "python": platform.python_version(),
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    meta.update(extra or {})
    _write_json(out / "run_meta.json", meta)


def _enum(gens, args):
    cfg = EnumConfig(args.radius, max_elements_from_env(), parallel=args.workers > 1, workers=args.workers)
    return generate_ball(gens, cfg)


def _svg_for(rows, scenario):
    if scenario.kind == "double":
        return scatter_pairs(rows)
    if scenario.n == 3:
        return scatter_sl3(rows)
    return None


def _mu_line(label, mu):
    if isinstance(mu, PairMu):
        u, v = mu.scalars
        return f"{label}: mu = {mu.format()}; scalars = ({u}, {v}); norm = {mu.norm():.12g}; iota = {mu.iota().format()}"
    scalar = f"; scalar = {_num(mu.scalar)}" if mu.n == 2 else ""
    return f"{label}: mu = {mu.format()}{scalar}; norm = {mu.norm():.12g}; iota = {mu.iota().format()}"


def _num(x):
    return f"{x:.12g}" if isinstance(x, float) else str(x)


# --- subcommands ---------------------------------------------------------------


def cmd_mu(args):
    gens = _load(args)
    oracle = "snf" if gens.field.archimedean else args.oracle
    out = _out_dir(args)
    rows = []
    for label, g in zip(gens.labels, gens.generators):
        mu = cartan_projection(g, gens.field, oracle)
        print(_mu_line(label, mu))
        rows.append([label, mu.format(), _num(mu.norm()), mu.iota().format()])
    if out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["label", "mu", "norm", "iota"])
        w.writerows(rows)
        _write(out / "mu.csv", buf.getvalue())
    return EXIT_OK


def cmd_ball(args):
    gens = _load(args)
    out = _out_dir(args)
    partial = False
    try:
        ball = _enum(gens, args)
    except ElementCapError as exc:
        ball, partial = exc.partial, exc
    sizes = ball.layer_sizes()
    print(f"radius {ball.radius}: {len(ball)} elements; cumulative layer sizes {sizes}")
    if out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["word", "length", "key"])
        for e in ball:
            w.writerow([e.word.format(gens.labels), e.length, e.element.key().decode()])
        _write(out / "ball.csv", buf.getvalue())
        _write_json(out / "ball.json", {"radius": ball.radius, "size": len(ball), "layer_sizes": sizes,
                                        "partial": bool(partial)})
        _write_meta(out, args)
    if partial:
        raise CliExit(EXIT_CAP, "element-cap", f"completed radius {partial.completed_radius}; outputs flagged partial")
    return EXIT_OK


def _emit_report(report, scenario, out, args, extra=None):
    summary = report_summary(report)
    if extra:
        summary.update(extra)
    if out:
        _write(out / "report.csv", report_csv(report))
        _write_json(out / "summary.json", summary)
        svg = _svg_for(report.rows, scenario)
        if svg:
            _write(out / "scatter.svg", svg)
        _write_meta(out, args)
    return summary


def cmd_properness(args):
    gens = _load(args)
    scenario = scenario_for(gens)
    out = _out_dir(args)
    capped = None
    try:
        ball = _enum(gens, args)
    except ElementCapError as exc:
        ball, capped = exc.partial, exc
    report = properness_report(ball, scenario, args.thresholds, gens.field, args.workers)
    _emit_report(report, scenario, out, args, {"partial": True} if capped else None)
    print(f"scenario {scenario}, radius {ball.radius}, {len(ball)} elements")
    print(f"census: {report.census}")
    for row in report.thresholds:
        print(f"  norm >= {row['threshold']:.6g}: {row['count']} elements, min margin {_num(row['min_margin']) if row['min_margin'] is not None else '-'}")
    print(f"verdict: {report.verdict} ({report.notes[0]})")
    if capped:
        raise CliExit(EXIT_CAP, "element-cap", f"completed radius {capped.completed_radius}; outputs flagged partial")
    code = VERDICT_EXIT[report.verdict]
    if code:
        raise CliExit(code, report.verdict, f"{len(report.witnesses)} wall witnesses")
    return code


def _phi_gens(args, gens0: GeneratorSet) -> GeneratorSet:
    if args.phi == "trivial":
        e = SLMatrix.identity(gens0.n, gens0.domain)
        return phi_generator_set(gens0, [e] * len(gens0))
    if args.phi == "identity":
        return gens0
    spec = load_group_spec(Path(args.phi), args.field)
    if len(spec) != len(gens0) or spec.field != gens0.field or spec.n != gens0.n:
        raise GroupSpecError("phi spec must list one image per generator, over the same field and n")
    return phi_generator_set(gens0, spec.generators)


def cmd_graph_check(args):
    gens0 = _load(args)
    if gens0.is_pair or gens0.n != 2:
        raise GroupSpecError("graph-check takes a rank-one (SL_2) matrix group spec")
    phi = _phi_gens(args, gens0)
    out = _out_dir(args)
    ball0 = _enum(gens0, args)
    check = graph_admissibility(ball0, phi_images(ball0, phi), args.r_grid, gens0.field)
    graph = graph_group(gens0, phi)
    gball = _enum(graph, args)
    comp = theorem12_check(margin_rows(gball, Scenario.double_rank_one(), graph.field, args.workers),
                           Scenario.double_rank_one())
    for row in check.table:
        print(f"R = {row['R']:g}: {row['count']}/{row['total']} violations, max word length {row['max_length']}, "
              f"{'confined' if row['confined'] else 'reaches the ball radius'}")
    verdict = "ADMISSIBLE" if check.admissible else "NOT_ADMISSIBLE"
    print(f"verdict: {verdict}-at-scale (radius {check.radius}); component check: {comp.component}, "
          f"{len(comp.exceptions)} exceptions")
    if out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["R", "word", "length", "mu_scalar", "phi_mu_scalar"])
        for row in check.table:
            for v in row["violations"]:
                w.writerow([f"{row['R']:g}", v.word, v.length, _num(v.mu_gamma), _num(v.mu_phi)])
        _write(out / "violations.csv", buf.getvalue())
        _write_json(out / "graph.json", {
            "radius": check.radius,
            "verdict": verdict,
            "table": [{k: row[k] for k in ("R", "count", "total", "max_length", "confined")} for row in check.table],
            "component_check": {"component": comp.component, "exception_count": len(comp.exceptions),
                                "passed": comp.passed},
        })
        _write_meta(out, args)
    if not check.admissible:
        raise CliExit(EXIT_VIOLATION, "NOT_ADMISSIBLE", "violations reach the ball radius")
    return EXIT_OK


def cmd_torsion_demo(args):
    out = _out_dir(args)
    try:
        res = torsion_demo(args.p, args.n, args.radius, args.pairs, args.thresholds, args.workers)
    except ValueError as exc:
        raise CliExit(EXIT_PARSE, "bad-arguments", str(exc))
    rep = res.report
    print(f"group over F_{res.p}((t)) generated by {', '.join(f'(g_{a}, g_{b})' for a, b in res.pairs)}")
    for pc in res.power_checks:
        print(f"  mu(g_{pc['n']}^{pc['r']}) = {pc['mu']}, scalar {pc['scalar']} "
              f"{'== ' if pc['ok'] else '!= '}{2 * pc['n']}")
    print(f"ball radius {res.ball.radius}: {len(res.ball)} elements; every nontrivial element has order {res.p}: "
          f"{res.all_order_p}")
    print(f"census: {rep.census}")
    print(f"distinct norms: C_plus {len(res.component_norms['C_plus'])}, C_minus {len(res.component_norms['C_minus'])}")
    print(f"diagonal intersections (left == right): {len(res.diagonal_intersections)}")
    print(f"verdict: {rep.verdict}")
    if res.discrepancy:
        print(res.discrepancy)
    extra = {
        "power_checks": res.power_checks,
        "all_order_p": res.all_order_p,
        "order_failures": res.order_failures,
        "component_distinct_norms": res.component_norms,
        "diagonal_intersections": [dict(d, norm=float(f"{d['norm']:.12g}")) for d in res.diagonal_intersections],
        "wall_elements": res.wall_elements,
        "discrepancy": res.discrepancy,
    }
    if out:
        _write_json(out / "group.json", group_spec_to_json(res.gens))
    _emit_report(rep, Scenario.double_rank_one(), out, args, extra)
    if not all(pc["ok"] for pc in res.power_checks) or not res.all_order_p:
        raise CliExit(EXIT_VIOLATION, "check-failed", "power or order checks failed")
    code = VERDICT_EXIT[rep.verdict]
    if code:
        raise CliExit(code, rep.verdict, "discrepancy flagged" if res.discrepancy else "")
    return code


def _random_exact(rng, field, n=2):
    from .sampling import random_sl

    return random_sl(n, field, rng)


def _random_u(rng, domain, field):
    from .sampling import random_laurent, random_rational

    if field.kind == "laurent":
        return [[random_laurent(rng, field.p) if rng.random() < 0.8 else domain.zero for _ in range(2)] for _ in range(2)]
    return [[random_rational(rng, field.p or 2) if rng.random() < 0.8 else domain.zero for _ in range(2)] for _ in range(2)]


def cmd_quadric(args):
    field = args.field or FieldDescriptor.padic(3)
    if args.input is not None:
        gens = _load(args)
        field = gens.field
        pairs = [(g.left, g.right) if isinstance(g, Pair) else (g, g) for g in gens.generators]
    else:
        pairs = None
    rng = random.Random(args.seed)
    domain = field.default_domain()
    failures = 0
    for i in range(args.samples):
        if pairs:
            g1, g2 = pairs[i % len(pairs)]
        else:
            g1, g2 = _random_exact(rng, field), _random_exact(rng, field)
        if not quadric_check(g1, g2, _random_u(rng, domain, field)):
            failures += 1
    g = _random_exact(rng, field)
    e = [[domain.one, domain.zero], [domain.zero, domain.one]]
    fixed = quadric_action(g, g, e) == e
    print(f"quadric x1 x4 - x2 x3: {args.samples - failures}/{args.samples} samples preserved over {field}; "
          f"diagonal pair fixes (1, 0, 0, 1): {fixed}")
    if failures or not fixed:
        raise CliExit(EXIT_VIOLATION, "check-failed", f"{failures} invariance failures")
    print("PASS")
    return EXIT_OK


def cmd_selftest(args):
    from .cartan import check_mu_subadditivity, mu_nonarch_minors, mu_nonarch_snf
    from .matrices import rational_matrix
    from .properness import unipotent
    from .sampling import random_sl_laurent, random_sl_rational

    rng = random.Random(args.seed)
    checks = []
    for p in (2, 3, 5):
        field = FieldDescriptor.laurent(p)
        ok = all(mu_scalar(unipotent(p, n) ** r, field) == 2 * n for n in range(1, 6) for r in range(1, p))
        checks.append((f"unipotent scalars mu(g_n^r) = 2n over F_{p}((t))", ok))
    ok = True
    for n, p in [(2, 2), (3, 3), (4, 5)]:
        field = FieldDescriptor.padic(p)
        for _ in range(50):
            g = random_sl_rational(n, rng, p)
            ok &= mu_nonarch_snf(g, field) == mu_nonarch_minors(g, field)
    field = FieldDescriptor.laurent(2)
    for _ in range(50):
        g = random_sl_laurent(2, rng, 2)
        ok &= mu_nonarch_snf(g, field) == mu_nonarch_minors(g, field)
    checks.append(("Smith-form and minor oracles agree", ok))
    ok = True
    for field in (FieldDescriptor.padic(2), FieldDescriptor.real()):
        for _ in range(200):
            a, b = random_sl_rational(3, rng, 2), random_sl_rational(3, rng, 2)
            s1, s2 = check_mu_subadditivity(a, b, field)
            ok &= min(s1, s2) >= (-1e-8 if field.archimedean else 0)
    checks.append(("subadditivity slacks nonnegative", ok))
    sanov = GeneratorSet(FieldDescriptor.real(), 2, (rational_matrix([[1, 2], [0, 1]]), rational_matrix([[1, 0], [2, 1]])))
    sizes = generate_ball(sanov, EnumConfig(4)).layer_sizes()
    checks.append(("free ball sizes 2*3^L - 1", sizes == [2 * 3 ** L - 1 for L in range(5)]))
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    if not all(ok for _, ok in checks):
        raise CliExit(EXIT_VIOLATION, "selftest-failed", ", ".join(n for n, ok in checks if not ok))
    return EXIT_OK


COMMANDS = {
    "mu": cmd_mu,
    "ball": cmd_ball,
    "properness": cmd_properness,
    "graph-check": cmd_graph_check,
    "torsion-demo": cmd_torsion_demo,
    "quadric": cmd_quadric,
    "selftest": cmd_selftest,
}


def _fail(code, reason, detail):
    detail = " ".join(str(detail).split())
    print(f"cartan-lab: exit={code} reason={reason} detail={json.dumps(detail)}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliExit as exc:
        return _fail(exc.code, exc.reason, exc.detail)
    except (GroupSpecError, ScalarParseError, json.JSONDecodeError) as exc:
        return _fail(EXIT_PARSE, "parse-error", exc)
    except ElementCapError as exc:
        return _fail(EXIT_CAP, "element-cap", exc)
    except (ConvergenceError, EntrySizeError, DeterminantError, ArithmeticError) as exc:
        return _fail(EXIT_MATH, "math-error", exc)
    except CartanLabError as exc:
        return _fail(EXIT_MATH, "math-error", exc)


if __name__ == "__main__":
    sys.exit(main())
