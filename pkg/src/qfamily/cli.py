"""Command-line interface.

Exit codes: 0 all checks pass, 1 some check fails, 2 no failure but some
check is inconclusive, 64 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import chain
from math import factorial
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from . import __version__
from .finsemigroup import CayleyTable, NonAssociative, enumerate_tables, validate_associativity
from .numrep import (
    CONSTRUCTION_TOL,
    IDENTITY_TOL,
    RESIDUAL_CHECKS,
    SEPARATION_TOL,
    sample_reps,
    worst_residuals,
)
from .qfam import (
    CheckResult,
    CheckVerdict,
    GammaPresentation,
    PreconditionError,
    QFamConfig,
    antipode_candidates,
    build_gamma,
    check_antipode_candidate,
    search_counit,
    verify_theorem,
)
from .report import emit_report, gamma_export, make_report, summarize
from .starpoly import Preset
from .tablefile import TableParseError, read_table_file

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64

EXIT_FOR = {CheckVerdict.PASS: EXIT_OK, CheckVerdict.FAIL: EXIT_FAIL, CheckVerdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def _dims(text: str) -> List[int]:
    try:
        dims = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("--dims expects comma-separated integers, got %r" % text)
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError("--dims needs positive dimensions")
    return dims


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qfamily", description="Quantum families of maps into finite semigroups.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def table_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("table", help="JSON table file, or - for stdin")
        p.add_argument("--out", help="write the report here instead of stdout")
        return p

    def algebra_opts(p):
        p.add_argument("--points", type=int, help="number of domain points m (default: table order)")
        p.add_argument("--preset", choices=[x.value for x in Preset], default=Preset.ALL_MAPS.value)

    table_cmd("validate", "associativity and identity report")

    p = sub.add_parser("enumerate", help="stream Cayley tables as JSON lines")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--associative", action="store_true")
    p.add_argument("--out")

    algebra_opts(table_cmd("gamma", "export the comultiplication on generators"))

    p = table_cmd("verify", "run every theorem check")
    algebra_opts(p)
    p.add_argument("--numeric", action="store_true", help="cross-check with matrix representations")
    p.add_argument("--dims", type=_dims, default=[2, 4, 8])
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true", help="record elapsed seconds (reports stop being reproducible)")

    p = table_cmd("counit", "search counits and probe permutation antipodes")
    algebra_opts(p)
    p.add_argument("--cap", type=int, default=10_000, help="refuse searches with more candidates than this")

    p = sub.add_parser("atlas", help="verify every associative table of one order")
    p.add_argument("--order", type=int, required=True)
    algebra_opts(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    return parser


def _read_table(path: str):
    try:
        if path == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror or exc))
    try:
        return read_table_file(data)
    except TableParseError as exc:
        raise UsageError("%s: %s" % (path, exc))


def _config(args, table: CayleyTable, require_associative: bool = False) -> QFamConfig:
    try:
        return QFamConfig.create(table, args.points, Preset(args.preset), require_associative=require_associative)
    except ValueError as exc:
        raise UsageError(str(exc))


def _config_echo(cfg: QFamConfig, label) -> dict:
    return {
        "m": cfg.m,
        "n": cfg.n,
        "preset": cfg.preset.value,
        "table": cfg.table.rows(),
        "label": label,
        "tolerances": {"construction": CONSTRUCTION_TOL, "identity": IDENTITY_TOL, "separation": SEPARATION_TOL},
    }


def _write(args, payload: bytes) -> None:
    if getattr(args, "out", None):
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


def numeric_check(g: GammaPresentation, report_entries: List[CheckResult], dims, samples, seed) -> CheckResult:
    """Attach worst numeric residuals to the symbolic checks and judge agreement."""
    reps = sample_reps(g.config.m, g.config.n, dims, samples, seed, g.config.preset)
    worst = worst_residuals(g, reps)
    by_name = {e.name: e for e in report_entries}
    disagreements = []
    for key, check in RESIDUAL_CHECKS.items():
        if key not in worst or check not in by_name:
            continue
        entry = by_name[check]
        entry.residuals[key] = worst[key]
        if entry.verdict is CheckVerdict.PASS and worst[key] > IDENTITY_TOL:
            disagreements.append("%s: symbolic pass but residual %.3g" % (key, worst[key]))
        elif entry.verdict is CheckVerdict.INCONCLUSIVE and worst[key] > SEPARATION_TOL:
            entry.witness = "%s [numerically violated, residual %.3g]" % (entry.witness, worst[key])
    if worst["relations"] > CONSTRUCTION_TOL:
        disagreements.append("representation relations residual %.3g" % worst["relations"])
    res = {"relations": worst["relations"], "representations": float(len(reps))}
    if disagreements:
        return CheckResult("numeric_oracle", CheckVerdict.FAIL, "; ".join(disagreements), residuals=res)
    return CheckResult("numeric_oracle", CheckVerdict.PASS, residuals=res)


def cmd_validate(args) -> int:
    tf = _read_table(args.table)
    rec = validate_associativity(tf.table)
    out = {
        "tool": "qfamily",
        "version": __version__,
        "command": "validate",
        "table": tf.table.rows(),
        "label": tf.label,
        "associative": not isinstance(rec, NonAssociative),
        "witness": list(rec.witness) if isinstance(rec, NonAssociative) else None,
        "identity": None if isinstance(rec, NonAssociative) else rec.identity,
    }
    _write(args, emit_report(out))
    return EXIT_OK if out["associative"] else EXIT_FAIL


def cmd_enumerate(args) -> int:
    try:
        tables = enumerate_tables(args.order, args.associative)
        first = next(tables, None)
    except ValueError as exc:
        raise UsageError(str(exc))
    fh = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        if first is not None:
            for t in chain([first], tables):
                fh.write(json.dumps({"n": t.n, "table": t.rows()}) + "\n")
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def cmd_gamma(args) -> int:
    tf = _read_table(args.table)
    cfg = _config(args, tf.table, require_associative=False)
    _write(args, emit_report(gamma_export(build_gamma(cfg), tf.label)))
    return EXIT_OK


def cmd_verify(args) -> int:
    tf = _read_table(args.table)
    cfg = _config(args, tf.table)
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    g = build_gamma(cfg)
    report = verify_theorem(g)
    entries = list(report)
    config = _config_echo(cfg, tf.label)
    rec = validate_associativity(cfg.table)
    config["associative"] = not isinstance(rec, NonAssociative)
    if args.numeric:
        entries.append(numeric_check(g, entries, args.dims, args.samples, args.seed))
        config["numeric"] = {"dims": list(args.dims), "samples": args.samples, "seed": args.seed}
    out = make_report("verify", config, entries, timings=args.timings)
    _write(args, emit_report(out))
    return EXIT_FOR[CheckVerdict(out["summary"]["verdict"])]


def cmd_counit(args) -> int:
    tf = _read_table(args.table)
    cfg = _config(args, tf.table, require_associative=True)
    g = build_gamma(cfg)
    try:
        counits = search_counit(g, cap=args.cap)
    except PreconditionError as exc:
        raise UsageError(str(exc))
    probes = []
    for eps in counits:
        total = factorial(cfg.n) ** cfg.m
        if total > args.cap:
            raise UsageError("antipode probe over %d candidates exceeds cap %d" % (total, args.cap))
        for s in antipode_candidates(cfg.n, cfg.m):
            res = check_antipode_candidate(g, s, eps)
            probes.append(res)
    out = make_report(
        "counit",
        _config_echo(cfg, tf.label),
        probes,
        extra={"counits": [list(e.f) for e in counits]},
    )
    _write(args, emit_report(out))
    # the search is an experiment: failing antipode candidates are findings, not errors
    return EXIT_OK


def _atlas_one(job):
    rows, m, preset = job
    cfg = QFamConfig.create(rows, m, Preset(preset))
    report = verify_theorem(build_gamma(cfg))
    return report.verdict.value


def cmd_atlas(args) -> int:
    try:
        tables = list(enumerate_tables(args.order, associative_only=True))
        if tables:
            _config(args, tables[0])
    except ValueError as exc:
        raise UsageError(str(exc))
    jobs = [(t.rows(), args.points, args.preset) for t in tables]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            verdicts = list(pool.map(_atlas_one, jobs, chunksize=8))
    else:
        verdicts = [_atlas_one(j) for j in jobs]
    verdicts = [CheckVerdict(v) for v in verdicts]
    summary = summarize(verdicts)
    out = {
        "tool": "qfamily",
        "version": __version__,
        "command": "atlas",
        "config": {"order": args.order, "points": args.points or args.order, "preset": args.preset},
        "tables": len(tables),
        "summary": summary,
        "failing": [t.label() for t, v in zip(tables, verdicts) if v is CheckVerdict.FAIL],
        "inconclusive": [t.label() for t, v in zip(tables, verdicts) if v is CheckVerdict.INCONCLUSIVE],
    }
    _write(args, emit_report(out))
    return EXIT_FOR[CheckVerdict(summary["verdict"])]


COMMANDS = {
    "validate": cmd_validate,
    "enumerate": cmd_enumerate,
    "gamma": cmd_gamma,
    "verify": cmd_verify,
    "counit": cmd_counit,
    "atlas": cmd_atlas,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
