"""Largest translate character sum against (n-1)*sqrt(q), for every small field."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from rprim import chars, ff
from rprim.arith import prime_powers_in


@dataclass(frozen=True)
class SweepConfig:
    degrees: tuple[int, ...] = (2, 3)
    max_size: int = 1 << 16


def rows(cfg: SweepConfig):
    for n in cfg.degrees:
        for _, _, q in prime_powers_in(2, cfg.max_size):
            if q**n > cfg.max_size:
                break
            report = chars.katz_sweep(ff.context_for_q(q, n))
            yield {
                "q": q,
                "n": n,
                "bound": f"{report.bound:.6f}",
                "max_abs_sum": f"{report.max_abs_sum:.6f}",
                "ratio": f"{report.ratio:.12f}",
                "theta": report.theta_index,
                "m": report.character_m,
            }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--degrees", type=int, nargs="+", default=[2, 3])
    parser.add_argument("--max-size", type=int, default=1 << 16)
    args = parser.parse_args()
    cfg = SweepConfig(tuple(args.degrees), args.max_size)
    writer = csv.DictWriter(sys.stdout, ["q", "n", "bound", "max_abs_sum", "ratio", "theta", "m"])
    writer.writeheader()
    worst = 0.0
    for row in rows(cfg):
        writer.writerow(row)
        worst = max(worst, float(row["ratio"]))
    print(f"max ratio {worst:.12f}", file=sys.stderr)


if __name__ == "__main__":
    main()
