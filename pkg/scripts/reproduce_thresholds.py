"""Reproduce the known small thresholds by exhaustive search.

    python scripts/reproduce_thresholds.py            # all four runs
    python scripts/reproduce_thresholds.py --only 2   # one run
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from rprim import ff, search


@dataclass(frozen=True)
class ThresholdRun:
    label: str
    n: int
    r: int
    mode: str
    q_lo: int
    q_hi: int
    expected_largest_failure: int | None


RUNS = (
    ThresholdRun("translate=line, n=2, r=1", 2, 1, "line", 2, 64, None),
    ThresholdRun("translate, n=3, r=1", 3, 1, "translate", 2, 49, 37),
    ThresholdRun("line, n=3, r=1", 3, 1, "line", 37, 41, 37),
    ThresholdRun("line, n=2, r=2", 2, 2, "line", 3, 101, 41),
)


def execute(run: ThresholdRun, threads: int | None) -> dict:
    start = time.perf_counter()
    reports = search.scan(run.n, run.r, run.q_lo, run.q_hi, run.mode, threads=threads)
    largest = search.largest_failing_q(reports)
    return {
        **asdict(run),
        "fields": len(reports),
        "failing_q": [rep.q for rep in reports if not rep.passed],
        "largest_failing_q": largest,
        "lines_checked": sum(rep.lines_checked for rep in reports),
        "matches": largest == run.expected_largest_failure,
        "elapsed_s": round(time.perf_counter() - start, 2),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--only", type=int, choices=range(1, len(RUNS) + 1))
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args()
    chosen = [RUNS[args.only - 1]] if args.only else RUNS
    for run in chosen:
        print(json.dumps(execute(run, args.threads)), flush=True)
    # Range ends of the n=3 line run, reported on their own.
    if not args.only or args.only == 3:
        for q in (37, 41):
            rep = search.verify_property(ff.context_for_q(q, 3), 1, "line", max_exceptions=3)
            print(json.dumps({k: v for k, v in rep.to_json().items() if k != "count_histogram"}))


if __name__ == "__main__":
    main()
