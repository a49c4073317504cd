"""Per-line main term, exact count and residual bound for one (q, n, r).

Shows how far the counting argument is from tight at small q.
"""

from __future__ import annotations

import argparse
import json
from collections import Counter

from rprim import chars, ff, search
from rprim.rstruct import compute_structure


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--q", type=int, default=7)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--r", type=int, default=2)
    parser.add_argument("--limit", type=int, default=5000, help="lines to examine")
    args = parser.parse_args()

    ctx = ff.context_for_q(args.q, args.n)
    structure = compute_structure(args.q, args.n, args.r)
    counts = Counter()
    worst = 0.0
    main_term = bound = None
    for i, line in enumerate(search.canonical_lines(ctx)):
        if i == args.limit:
            break
        res = chars.n_char(ctx, structure, line.b, line.theta)
        counts[round(res.value)] += 1
        worst = max(worst, abs(res.residual) / res.residual_bound)
        main_term, bound = res.main_term, res.residual_bound
    print(json.dumps({
        "structure": structure.to_json(),
        "main_term": main_term,
        "residual_bound": bound,
        "max_residual_over_bound": worst,
        "count_histogram": {str(k): v for k, v in sorted(counts.items())},
    }, indent=2))


if __name__ == "__main__":
    main()
