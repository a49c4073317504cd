"""Command-line front end.

Data goes to stdout as JSON lines (CSV with --csv where offered); summaries
and errors go to stderr.  Exit status: 0 success and the checked property
holds, 1 success but the property fails, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import chars, ff, search
from .arith import euler_phi
from .rstruct import bound_holds, compute_structure, min_q_satisfying_bound

VERBS = ("structure", "bound", "verify", "scan", "gamma-selftest", "katz")
REPORT_COLUMNS = (
    "q", "p", "k", "n", "r", "mode", "pass", "lines_checked",
    "min_count", "exception_count",
)


@dataclass
class RunConfig:
    verb: str
    n: int
    q: int | None = None
    q_lo: int | None = None
    q_hi: int | None = None
    q_max: int | None = None
    r: int = 1
    mode: str = "line"
    full_counts: bool = False
    csv: bool = False
    max_exceptions: int = search.MAX_EXCEPTIONS
    threads: int | None = None

    def validate(self) -> None:
        if self.verb not in VERBS:
            raise ValueError(f"unknown verb {self.verb!r}")
        if self.n < 2:
            raise ValueError(f"n={self.n} must be at least 2")
        if self.r < 1:
            raise ValueError(f"r={self.r} must be positive")
        if self.verb == "scan":
            if self.q_lo is None or self.q_hi is None or self.q_lo > self.q_hi:
                raise ValueError("scan needs q_lo <= q_hi")
        elif self.verb == "bound":
            if self.q_max is None:
                raise ValueError("bound needs q_max")
        elif self.q is None:
            raise ValueError(f"{self.verb} needs q")
        if self.max_exceptions < 0:
            raise ValueError("max_exceptions must be non-negative")
        if self.threads is not None and self.threads < 1:
            raise ValueError("threads must be at least 1")


class _Output:
    def __init__(self, stream, use_csv: bool, columns=REPORT_COLUMNS):
        self.stream = stream
        self.writer = csv.writer(stream, lineterminator="\n") if use_csv else None
        self.columns = columns
        if self.writer:
            self.writer.writerow(columns)

    def emit(self, record: dict) -> None:
        if self.writer:
            self.writer.writerow([_csv_cell(record[c]) for c in self.columns])
        else:
            self.stream.write(json.dumps(record) + "\n")


def _csv_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return value


def _context(q: int, n: int) -> ff.FieldContext:
    return ff.context_for_q(q, n)


def _run_structure(cfg: RunConfig, out, err) -> int:
    out.write(json.dumps(compute_structure(cfg.q, cfg.n, cfg.r).to_json()) + "\n")
    return 0


def _run_bound(cfg: RunConfig, out, err) -> int:
    rows = min_q_satisfying_bound(cfg.n, cfg.r, cfg.q_max)
    sink = _Output(out, cfg.csv, ("q", "holds"))
    for q, holds in rows:
        sink.emit({"q": q, "holds": holds})
    first = next((q for q, holds in rows if holds), None)
    err.write(json.dumps({"summary": "bound", "eligible": len(rows), "first_q_holding": first}) + "\n")
    return 0


def _verify_kwargs(cfg: RunConfig) -> dict:
    return {
        "full_counts": cfg.full_counts,
        "max_exceptions": cfg.max_exceptions,
        "threads": cfg.threads,
    }


def _run_verify(cfg: RunConfig, out, err) -> int:
    ctx = _context(cfg.q, cfg.n)
    report = search.verify_property(ctx, cfg.r, cfg.mode, **_verify_kwargs(cfg))
    record = report.to_json()
    record["field"] = ctx.describe()
    _Output(out, cfg.csv).emit(record)
    err.write(json.dumps({"summary": "verify", "pass": report.passed, "elapsed_s": round(report.elapsed, 3)}) + "\n")
    return 0 if report.passed else 1


def _run_scan(cfg: RunConfig, out, err) -> int:
    reports = search.scan(cfg.n, cfg.r, cfg.q_lo, cfg.q_hi, cfg.mode, **_verify_kwargs(cfg))
    sink = _Output(out, cfg.csv)
    bound_conflicts = []
    for rep in reports:
        sink.emit(rep.to_json())
        if bound_holds(compute_structure(rep.q, rep.n, rep.r)) and not rep.passed:
            bound_conflicts.append(rep.q)
    failing = [rep.q for rep in reports if not rep.passed]
    err.write(
        json.dumps(
            {
                "summary": "scan",
                "n": cfg.n,
                "r": cfg.r,
                "mode": cfg.mode,
                "q_lo": cfg.q_lo,
                "q_hi": cfg.q_hi,
                "fields": len(reports),
                "failing_q": failing,
                "largest_failing_q": search.largest_failing_q(reports),
                "bound_conflicts": bound_conflicts,
                "elapsed_s": round(sum(rep.elapsed for rep in reports), 3),
            }
        )
        + "\n"
    )
    return 0 if not failing else 1


def gamma_selftest(q: int, n: int, r: int) -> dict:
    """Pointwise comparison of both character forms of Gamma with the order test."""
    ctx = _context(q, n)
    if ctx.size > chars.KATZ_CAP:
        raise ValueError(f"field of size {ctx.size} exceeds the selftest cap {chars.KATZ_CAP}")
    structure = compute_structure(q, n, r)
    xs = np.arange(1, ctx.size, dtype=np.int64)
    direct = ff.r_primitive_log_mask(ctx, r)[ctx.log_table[xs]].astype(float)
    expanded = chars.gamma_char(ctx, structure, xs, "expanded")
    product = chars.gamma_char(ctx, structure, xs, "product")
    dev_e = float(np.abs(expanded - direct).max())
    dev_p = float(np.abs(product - direct).max())
    dev_f = float(np.abs(expanded - product).max())
    expected = euler_phi(ctx.group_order // r)
    total = complex(expanded.sum())
    ok = max(dev_e, dev_p, dev_f) < chars.TOL and abs(total - expected) < 1e-6
    return {
        "q": q,
        "n": n,
        "r": r,
        "elements": int(len(xs)),
        "max_dev_expanded": dev_e,
        "max_dev_product": dev_p,
        "max_dev_forms": dev_f,
        "sum_expanded": total.real,
        "expected_count": expected,
        "pass": ok,
    }


def _run_selftest(cfg: RunConfig, out, err) -> int:
    result = gamma_selftest(cfg.q, cfg.n, cfg.r)
    out.write(json.dumps(result) + "\n")
    return 0 if result["pass"] else 1


def _run_katz(cfg: RunConfig, out, err) -> int:
    report = chars.katz_sweep(_context(cfg.q, cfg.n))
    out.write(json.dumps(report.to_json()) + "\n")
    return 0 if report.ratio <= 1 + chars.TOL else 1


_DISPATCH = {
    "structure": _run_structure,
    "bound": _run_bound,
    "verify": _run_verify,
    "scan": _run_scan,
    "gamma-selftest": _run_selftest,
    "katz": _run_katz,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg.validate()
        return _DISPATCH[cfg.verb](cfg, out, err)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        err.write(json.dumps({"error": "precondition", "reason": str(exc)}) + "\n")
        return 2


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rprim",
        description="r-primitive elements on translates and lines of finite field extensions",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, q=True, r=True):
        if q:
            p.add_argument("--q", type=_positive_int, required=True, help="prime power q")
        p.add_argument("--n", type=_positive_int, required=True, help="extension degree")
        if r:
            p.add_argument("--r", type=_positive_int, default=1)

    def sweep_flags(p):
        p.add_argument("--mode", choices=("translate", "line"), default="line")
        p.add_argument("--full-counts", action="store_true",
                       help="also report the histogram of hit counts")
        p.add_argument("--csv", action="store_true")
        p.add_argument("--max-exceptions", type=int, default=search.MAX_EXCEPTIONS)
        p.add_argument("--threads", type=_positive_int, default=None)

    common(sub.add_parser("structure", help="decomposition of (q^n-1, r) as JSON"))

    p = sub.add_parser("bound", help="sufficient-condition verdicts for q <= q_max")
    common(p, q=False)
    p.add_argument("--q-max", type=_positive_int, required=True)
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("verify", help="check one field exhaustively")
    common(p)
    sweep_flags(p)

    p = sub.add_parser("scan", help="check every eligible prime power in a range")
    common(p, q=False)
    p.add_argument("--q-lo", type=_positive_int, required=True)
    p.add_argument("--q-hi", type=_positive_int, required=True)
    sweep_flags(p)

    common(sub.add_parser("gamma-selftest", help="character forms of Gamma vs direct test"))
    common(sub.add_parser("katz", help="largest translate character sum vs (n-1)sqrt(q)"), r=False)
    return parser


def parse_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    fields = {k.replace("-", "_"): v for k, v in vars(args).items()}
    known = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in fields.items() if k in known})


def main(argv=None) -> int:
    cfg = parse_config(argv)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
