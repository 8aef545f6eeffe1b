"""Command-line front end over every verification routine.

Each subcommand assembles a list of independent checks, runs them
through a worker pool, and writes one UTF-8 JSON line per report, in a
fixed order that does not depend on completion order.  Exit code 0
means every selected check passed, 1 means at least one check failed,
2 means the invocation itself was invalid.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import repcheck
from .currents import check_ope_formula
from .repcheck import (
    HW_SECTORS,
    check_drinfeld,
    check_screening,
    clifford_check,
    hw_verify,
    kernel_character,
)
from .reports import REPORT_SCHEMA, SERIES_SCHEMA
from .series import check_S, check_jacobi_triple_step, check_star_identity
from .vertexops import (
    CONDITIONS,
    VALID_PAIRS,
    VertexPair,
    check_intertwining,
    check_screening_anticommute,
    normalization_check,
    two_point,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

RELATIONS = ("R1", "R2", "R3", "R4", "R5", "R6", "R7")

WORKERS_ENV = "QBOSON_WORKERS"


# ---------------------------------------------------------------------------
# Argument parsing.
# ---------------------------------------------------------------------------


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") \
            from exc


def _sector(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"sector must look like 'l1,l2': {text!r}")
    l1 = _fraction(parts[0])
    try:
        l2 = int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"second sector label must be an integer: {parts[1]!r}") from exc
    return (l1, l2)


def _pair(text):
    parts = text.split("->")
    try:
        lam, mu = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"pair must look like '1->2': {text!r}") from None
    if (lam, mu) not in VALID_PAIRS:
        valid = ", ".join(f"{a}->{b}" for a, b in VALID_PAIRS)
        raise argparse.ArgumentTypeError(
            f"no operator exists for pair {text!r} (valid: {valid})")
    return (lam, mu)


def _specialization(text):
    if not text.startswith("u="):
        raise argparse.ArgumentTypeError(
            f"specialization must look like 'u=p/q': {text!r}")
    val = _fraction(text[2:])
    if val == 0:
        raise argparse.ArgumentTypeError("specialization point must be nonzero")
    return val


def _positive(text):
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n <= 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return n


def _nonneg(text):
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n < 0:
        raise argparse.ArgumentTypeError("value must be nonnegative")
    return n


def _default_workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def build_parser():
    top = argparse.ArgumentParser(
        prog="qboson",
        description="Exact symbolic verification of a two-boson free-field "
                    "realization: algebra relations, screening structure, "
                    "characters, series identities, operator products, and "
                    "vertex operators.")
    top.add_argument("--schema", action="store_true",
                     help="print the JSON schema of report and series lines "
                          "and exit")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE",
                        help="write JSON lines here instead of stdout")
    common.add_argument("--workers", type=_positive,
                        default=_default_workers(),
                        help="worker pool size (default from "
                             f"${WORKERS_ENV}, else 1)")
    common.add_argument("--specialize", type=_specialization, action="append",
                        default=None, metavar="u=p/q",
                        help="rational evaluation points used by the "
                             "specialize-then-confirm rank computations "
                             "(repeatable)")
    common.add_argument("--symbolic", action="store_true",
                        help="force fully symbolic linear algebra")

    sub = top.add_subparsers(dest="command")

    p = sub.add_parser("verify-relations", parents=[common],
                       help="defining current relations on the Fock sectors")
    p.add_argument("--relation", choices=RELATIONS, action="append",
                   help="restrict to one relation (repeatable; default all)")
    p.add_argument("--sector", type=_sector, action="append",
                   help="restrict to one sector 'l1,l2' (repeatable; "
                        "default the four standard sectors)")
    p.add_argument("--degree", type=_nonneg, default=3)
    p.add_argument("--window", type=_nonneg, default=2)

    p = sub.add_parser("verify-screening", parents=[common],
                       help="the screening charge commutes with the action "
                            "and squares to zero")
    p.add_argument("--degree", type=_nonneg, default=3)
    p.add_argument("--window", type=_nonneg, default=2,
                   help="mode window for the commutant checks")

    p = sub.add_parser("clifford", parents=[common],
                       help="ghost zero modes satisfy the Clifford relations")
    p.add_argument("--degree", type=_nonneg, default=3)

    p = sub.add_parser("kernel-character", parents=[common],
                       help="graded kernel dimensions against the closed "
                            "product forms")
    p.add_argument("--family", type=int, choices=(1, 2, 3, 4), action="append",
                   help="restrict to one family (repeatable; default all)")
    p.add_argument("--degree", type=_nonneg, default=3)
    p.add_argument("--window", type=_nonneg, default=2)

    p = sub.add_parser("hw-check", parents=[common],
                       help="highest-weight vectors and their weights")
    p.add_argument("--family", type=int, choices=(1, 2, 3, 4), action="append",
                   help="restrict to one family (repeatable; default all)")

    p = sub.add_parser("series-identity", parents=[common],
                       help="the graded q-series identities")
    p.add_argument("--which", choices=("star", "sl", "jacobi", "all"),
                   default="all")
    p.add_argument("--order", type=_nonneg, default=8)
    p.add_argument("--lmax", type=_nonneg, default=5,
                   help="range |l| <= lmax for the parametrized family")

    p = sub.add_parser("ope", parents=[common],
                       help="operator product expansions against their "
                            "closed forms")
    p.add_argument("--formula", type=int, choices=range(1, 9), action="append",
                   help="restrict to one formula (repeatable; default all)")
    p.add_argument("--order", type=_nonneg, default=8)

    p = sub.add_parser("intertwining", parents=[common],
                       help="vertex operators: intertwining relations, "
                            "screening anticommutation, normalization")
    p.add_argument("--type", choices=("I", "II"), action="append",
                   dest="kinds", help="restrict to one type (default both)")
    p.add_argument("--pair", type=_pair, action="append",
                   help="restrict to one module pair '1->2' (repeatable; "
                        "default all)")
    p.add_argument("--which", choices=CONDITIONS, action="append",
                   help="restrict to one condition (repeatable; default all)")
    p.add_argument("--degree", type=_nonneg, default=2)
    p.add_argument("--window", type=_nonneg, default=2)

    p = sub.add_parser("two-point", parents=[common],
                       help="vacuum two-point function against the "
                            "infinite-product form")
    p.add_argument("--order", type=_nonneg, default=3)

    p = sub.add_parser("all", parents=[common],
                       help="every check at its default bounds")
    p.add_argument("--degree", type=_nonneg, default=3)
    p.add_argument("--window", type=_nonneg, default=2)
    p.add_argument("--order", type=_nonneg, default=8)

    return top


# ---------------------------------------------------------------------------
# Job assembly.  A job is (label, thunk); thunks return a list of dicts.
# ---------------------------------------------------------------------------


def _report_job(fn, *args):
    def run():
        return [fn(*args).to_dict()]
    return run


def _series_report_job(fn, *args):
    def run():
        series, report = fn(*args)
        out = report.to_dict()
        out["series"] = series.to_json_dict()
        return [out]
    return run


def _two_point_job(order):
    def run():
        spm, smp, report = two_point(order)
        out = report.to_dict()
        if spm is not None:
            out["series_pm"] = spm.to_json_dict()
            out["series_mp"] = smp.to_json_dict()
        return [out]
    return run


def _relation_jobs(args):
    rels = args.relation or list(RELATIONS)
    sectors = args.sector or list(HW_SECTORS)
    return [(f"{rel}@{l1},{l2}", _report_job(check_drinfeld, rel, (l1, l2),
                                             args.degree, args.window))
            for (l1, l2) in sectors for rel in rels]


def _screening_jobs(args):
    return [("screening", _report_job(check_screening, args.window,
                                      args.degree))]


def _clifford_jobs(args):
    return [("clifford", _report_job(clifford_check, args.degree))]


def _kernel_jobs(args):
    fams = args.family or [1, 2, 3, 4]
    return [(f"kernel-character@{i}",
             _series_report_job(kernel_character, i, args.degree, args.window))
            for i in fams]


def _hw_jobs(args):
    fams = args.family or [1, 2, 3, 4]
    return [(f"hw@{i}", _report_job(hw_verify, i)) for i in fams]


def _series_jobs(args):
    jobs = []
    if args.which in ("star", "all"):
        jobs.append(("star", _report_job(check_star_identity, args.order)))
    if args.which in ("sl", "all"):
        for l in range(-args.lmax, args.lmax + 1):
            jobs.append((f"S@{l}", _report_job(check_S, l, args.order)))
    if args.which in ("jacobi", "all"):
        for l in (0, 1, 2):
            jobs.append((f"jacobi@{l}",
                         _report_job(check_jacobi_triple_step, l, args.order)))
    return jobs


def _ope_jobs(args):
    formulas = args.formula or list(range(1, 9))
    return [(f"ope@{f}", _report_job(check_ope_formula, f, args.order))
            for f in formulas]


def _intertwining_jobs(args):
    kinds = args.kinds or ["I", "II"]
    pairs = args.pair or list(VALID_PAIRS)
    conds = args.which or list(CONDITIONS)
    jobs = []
    for kind in kinds:
        for (lam, mu) in pairs:
            p = VertexPair(kind, lam, mu)
            tag = f"{kind}:{lam}->{mu}"
            for which in conds:
                jobs.append((f"{tag}:{which}",
                             _report_job(check_intertwining, p, which,
                                         args.degree, args.window)))
            jobs.append((f"{tag}:screening",
                         _report_job(check_screening_anticommute, p,
                                     args.degree)))
            jobs.append((f"{tag}:normalization",
                         _report_job(normalization_check, p)))
    return jobs


def _all_jobs(args):
    ns = argparse.Namespace(**vars(args))
    ns.relation = None
    ns.sector = None
    ns.family = None
    ns.which = None
    ns.formula = None
    ns.kinds = None
    ns.pair = None
    ns.lmax = 5
    jobs = list(_relation_jobs(ns))
    jobs += _screening_jobs(ns)
    jobs += _clifford_jobs(ns)
    jobs += _kernel_jobs(ns)
    jobs += _hw_jobs(ns)
    ns.which = "all"
    jobs += _series_jobs(ns)
    ns.which = None
    jobs += _ope_jobs(ns)
    sub = argparse.Namespace(**vars(ns))
    sub.degree = min(args.degree, 2)
    jobs += _intertwining_jobs(sub)
    jobs.append(("two-point", _two_point_job(3)))
    return jobs


_JOB_BUILDERS = {
    "verify-relations": _relation_jobs,
    "verify-screening": _screening_jobs,
    "clifford": _clifford_jobs,
    "kernel-character": _kernel_jobs,
    "hw-check": _hw_jobs,
    "series-identity": _series_jobs,
    "ope": _ope_jobs,
    "intertwining": _intertwining_jobs,
    "two-point": lambda args: [("two-point", _two_point_job(args.order))],
    "all": _all_jobs,
}


# ---------------------------------------------------------------------------
# Execution.
# ---------------------------------------------------------------------------


def _apply_config(args, parser):
    points = getattr(args, "specialize", None)
    if points:
        if len(set(points)) != len(points):
            parser.error("specialization points must be distinct")
        repcheck.SPECIALIZATION_POINTS = tuple(points)
    if getattr(args, "symbolic", False):
        # raising the direct-elimination threshold keeps every rank
        # computation on the fully symbolic path
        repcheck.SYMBOLIC_SIZE_LIMIT = 10 ** 9


def _run_jobs(jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [(label, thunk()) for label, thunk in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [(label, pool.submit(thunk)) for label, thunk in jobs]
        return [(label, fut.result()) for label, fut in futures]


def report_schema():
    """The machine-readable schema of every line this tool emits."""
    return {"report": REPORT_SCHEMA, "series": SERIES_SCHEMA}


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        print(json.dumps(report_schema(), indent=2, sort_keys=False))
        return EXIT_PASS
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    _apply_config(args, parser)
    jobs = _JOB_BUILDERS[args.command](args)
    results = _run_jobs(jobs, args.workers)

    lines = []
    ok = True
    for label, dicts in results:
        for d in dicts:
            d = {"check": label, **d}
            ok = ok and d.get("status") == "pass"
            lines.append(json.dumps(d, sort_keys=False, ensure_ascii=False))
    text = "\n".join(lines) + "\n" if lines else ""
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if ok else EXIT_FAIL


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
