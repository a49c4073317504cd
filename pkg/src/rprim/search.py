"""Exhaustive verification of the translate and line properties.

A line {alpha * (theta + x) : x in F_q} is an affine F_q-line a + b*F_q with
b = alpha and a/b = theta.  Its canonical form takes b as the least index in
b * F_q^* and a as the least index among the q points.

The sweep never walks (a, b) pairs.  With M = (q^n - 1)/(q - 1), the powers
gamma^j for 0 <= j < M represent the direction classes, and every line is
gamma^j * T for exactly one such j and exactly one translate set T.  So the
hit count of all lines in class j is a lookup of (j + log T) in a bitmap of
r-primitive discrete logs.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import ff
from .arith import prime_powers_in
from .ff import FieldContext

MAX_EXCEPTIONS = 1000
_CHUNK = 1 << 23


@dataclass(frozen=True)
class CanonicalLine:
    a: int
    b: int
    theta: int

    @property
    def key(self) -> tuple[int, int]:
        return (self.b, self.a)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "theta": self.theta}


@dataclass
class PropertyReport:
    q: int
    p: int
    k: int
    n: int
    r: int
    mode: str
    passed: bool
    lines_checked: int
    min_count: int
    exceptions: list[CanonicalLine]
    exception_count: int
    elapsed: float = field(default=0.0, compare=False)
    count_histogram: dict[int, int] | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {
            "q": self.q,
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "r": self.r,
            "mode": self.mode,
            "pass": self.passed,
            "lines_checked": self.lines_checked,
            "min_count": self.min_count,
            "exception_count": self.exception_count,
            "exceptions": [e.to_json() for e in self.exceptions],
        }
        if self.count_histogram is not None:
            out["count_histogram"] = {str(c): v for c, v in sorted(self.count_histogram.items())}
        return out


def _check_r(ctx: FieldContext, r: int) -> None:
    if r < 1 or ctx.group_order % r:
        raise ValueError(f"r={r} does not divide q^n-1={ctx.group_order}")


def _class_count(ctx: FieldContext) -> int:
    return ctx.group_order // (ctx.q - 1)


def _direction_minima(ctx: FieldContext) -> np.ndarray:
    """Least index of gamma^j * F_q^* for each class j in [0, M)."""
    m = _class_count(ctx)
    j = np.arange(m, dtype=np.int64)[:, None]
    steps = np.arange(ctx.q - 1, dtype=np.int64)[None, :] * m
    return ctx.exp_table[(j + steps) % ctx.group_order].min(axis=1)


def _make_line(ctx: FieldContext, a: int, b: int) -> CanonicalLine:
    return CanonicalLine(a, b, ff.div(ctx, a, b))


def canonicalize(ctx: FieldContext, alpha: int, theta: int) -> CanonicalLine:
    """Canonical form of the line of alpha and theta."""
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if not ff.is_generator(ctx, theta):
        raise ValueError(f"theta={theta} is not a generator")
    la = ff.log(ctx, alpha)
    m = _class_count(ctx)
    b = int(ctx.exp_table[(la + np.arange(ctx.q - 1) * m) % ctx.group_order].min())
    points = ff.add_array(ctx, theta, ctx.subfield)
    a = int(ctx.exp_table[(ctx.log_table[points] + la) % ctx.group_order].min())
    return _make_line(ctx, a, b)


def line_points(ctx: FieldContext, line: CanonicalLine) -> np.ndarray:
    """The q points a + b*x, x running over F_q in subfield order."""
    scaled = np.zeros(ctx.q, dtype=np.int64)
    nz = ctx.subfield != 0
    lb = ff.log(ctx, line.b)
    scaled[nz] = ctx.exp_table[(ctx.log_table[ctx.subfield[nz]] + lb) % ctx.group_order]
    return ff.add_array(ctx, line.a, scaled)


def canonical_translates(ctx: FieldContext) -> Iterator[CanonicalLine]:
    for rep in ff.translate_representatives(ctx).tolist():
        yield CanonicalLine(rep, 1, rep)


def _line_table(ctx: FieldContext) -> tuple[np.ndarray, np.ndarray]:
    """(b, a) index arrays for every line, shape (M, #translate sets)."""
    tlogs = ctx.log_table[ff.translate_points(ctx, ff.translate_representatives(ctx))]
    m = _class_count(ctx)
    bmin = _direction_minima(ctx)
    a = np.empty((m, len(tlogs)), dtype=np.int64)
    rows = max(1, _CHUNK // max(1, tlogs.size))
    for lo in range(0, m, rows):
        js = np.arange(lo, min(m, lo + rows), dtype=np.int64)[:, None, None]
        a[lo : lo + rows] = ctx.exp_table[(tlogs[None] + js) % ctx.group_order].min(axis=2)
    return np.broadcast_to(bmin[:, None], a.shape), a


def canonical_lines(ctx: FieldContext) -> Iterator[CanonicalLine]:
    """Every line exactly once, ascending in (b, a)."""
    b, a = _line_table(ctx)
    b, a = b.ravel(), a.ravel()
    for i in np.lexsort((a, b)).tolist():
        yield _make_line(ctx, int(a[i]), int(b[i]))


def line_hit_count(ctx: FieldContext, line: CanonicalLine, r: int) -> int:
    """Number of r-primitive points on the line, by direct order tests."""
    _check_r(ctx, r)
    return sum(ff.is_r_primitive(ctx, int(x), r) for x in line_points(ctx, line))


def _counts_for_classes(tlogs, good2, js) -> np.ndarray:
    idx = tlogs[None, :, :] + js[:, None, None]
    return good2[idx].sum(axis=2, dtype=np.int32)


def _least_failures(ctx, tlogs, fail_j, fail_t, limit) -> list[CanonicalLine]:
    """The `limit` failing lines with the smallest (b, a), without materializing the rest."""
    if not len(fail_j) or limit <= 0:
        return []
    bmin = _direction_minima(ctx)
    rows = max(1, _CHUNK // max(1, tlogs.shape[1]))
    keep_b = np.empty(0, dtype=np.int64)
    keep_a = np.empty(0, dtype=np.int64)
    for lo in range(0, len(fail_j), rows):
        j = fail_j[lo : lo + rows]
        a = ctx.exp_table[(tlogs[fail_t[lo : lo + rows]] + j[:, None]) % ctx.group_order].min(axis=1)
        b = np.concatenate([keep_b, bmin[j]])
        a = np.concatenate([keep_a, a])
        order = np.lexsort((a, b))[:limit]
        keep_b, keep_a = b[order], a[order]
    return [_make_line(ctx, int(a), int(b)) for a, b in zip(keep_a.tolist(), keep_b.tolist())]


def _check_cap(ctx: FieldContext) -> None:
    if ctx.size > ff.field_cap():
        raise ValueError(f"field of size {ctx.size} exceeds cap {ff.field_cap()}")


def verify_property(
    ctx: FieldContext,
    r: int,
    mode: str = "line",
    *,
    full_counts: bool = False,
    max_exceptions: int = MAX_EXCEPTIONS,
    threads: int | None = None,
) -> PropertyReport:
    """Check that every translate set (or every line) holds an r-primitive element.

    Hit counts are always exact; full_counts additionally records the
    histogram of counts over all lines.
    """
    if mode not in ("translate", "line"):
        raise ValueError(f"mode must be 'translate' or 'line', got {mode!r}")
    _check_r(ctx, r)
    _check_cap(ctx)
    start = time.perf_counter()

    order = ctx.group_order
    reps = ff.translate_representatives(ctx)
    tlogs = ctx.log_table[ff.translate_points(ctx, reps)]
    good = ff.r_primitive_log_mask(ctx, r)
    # Doubled so that j + log never needs a reduction mod N.
    good2 = np.concatenate([good, good])

    if mode == "translate":
        counts = good[tlogs].sum(axis=1, dtype=np.int32)[None, :]
    else:
        m = _class_count(ctx)
        rows = max(1, _CHUNK // max(1, tlogs.size))
        chunks = [np.arange(lo, min(m, lo + rows), dtype=np.int64) for lo in range(0, m, rows)]
        workers = threads or os.cpu_count() or 1
        if workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(workers) as pool:
                parts = list(pool.map(lambda js: _counts_for_classes(tlogs, good2, js), chunks))
        else:
            parts = [_counts_for_classes(tlogs, good2, js) for js in chunks]
        counts = np.concatenate(parts, axis=0)

    fail_j, fail_t = np.nonzero(counts == 0)
    if mode == "translate":
        exceptions = [CanonicalLine(int(reps[t]), 1, int(reps[t])) for t in fail_t.tolist()]
        exceptions.sort(key=lambda ln: ln.key)
        exceptions = exceptions[:max_exceptions]
    else:
        exceptions = _least_failures(ctx, tlogs, fail_j, fail_t, max_exceptions)

    histogram = None
    if full_counts:
        values, freq = np.unique(counts, return_counts=True)
        histogram = dict(zip(values.tolist(), freq.tolist()))

    return PropertyReport(
        q=ctx.q,
        p=ctx.p,
        k=ctx.k,
        n=ctx.n,
        r=r,
        mode=mode,
        passed=not len(fail_j),
        lines_checked=int(counts.size),
        min_count=int(counts.min()) if counts.size else 0,
        exceptions=exceptions,
        exception_count=int(len(fail_j)),
        elapsed=time.perf_counter() - start,
        count_histogram=histogram,
    )


def eligible_prime_powers(n: int, r: int, q_lo: int, q_hi: int) -> list[tuple[int, int, int]]:
    return [(p, k, q) for p, k, q in prime_powers_in(max(2, q_lo), q_hi) if (q**n - 1) % r == 0]


def scan(
    n: int,
    r: int,
    q_lo: int,
    q_hi: int,
    mode: str = "line",
    **kwargs,
) -> list[PropertyReport]:
    """One report per prime power q in [q_lo, q_hi] with r | q^n - 1, ascending."""
    if n < 2:
        raise ValueError(f"n={n} must be at least 2")
    if r < 1:
        raise ValueError(f"r={r} must be positive")
    todo = eligible_prime_powers(n, r, q_lo, q_hi)
    cap = ff.field_cap()
    too_big = [q for _, _, q in todo if q**n > cap]
    if too_big:
        raise ValueError(f"q={too_big[0]} gives a field of size {too_big[0] ** n} above cap {cap}")
    return [verify_property(ff.build_context(p, k, n), r, mode, **kwargs) for p, k, _ in todo]


def largest_failing_q(reports: list[PropertyReport]) -> int | None:
    failing = [rep.q for rep in reports if not rep.passed]
    return max(failing) if failing else None


def admissible_pair_count(ctx: FieldContext) -> int:
    """|{(a, b) : b != 0, a/b a generator}|: each b pairs with b * (generators)."""
    gens = int(ff.generator_mask(ctx).sum())
    return (ctx.size - 1) * gens


def expected_line_count(ctx: FieldContext) -> int:
    pairs = admissible_pair_count(ctx)
    orbit = ctx.q * (ctx.q - 1)
    assert pairs % orbit == 0
    return pairs // orbit


__all__ = [
    "CanonicalLine",
    "PropertyReport",
    "canonical_lines",
    "canonical_translates",
    "canonicalize",
    "eligible_prime_powers",
    "expected_line_count",
    "largest_failing_q",
    "line_hit_count",
    "line_points",
    "scan",
    "verify_property",
]
