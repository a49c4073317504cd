"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line."""

import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from rprim import chars, ff, search
from rprim.arith import divisors, euler_phi, prime_powers_in
from rprim.rstruct import bound_holds, compute_structure

from conftest import small_fields

ROOT = Path(__file__).resolve().parent.parent
_SCANS = {}


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def scanned(n, r, lo, hi, mode, odd=False):
    key = (n, r, lo, hi, mode)
    if key not in _SCANS:
        start = time.perf_counter()
        reports = search.scan(n, r, lo, hi, mode)
        _SCANS[key] = (reports, time.perf_counter() - start)
    reports, elapsed = _SCANS[key]
    if odd:
        reports = [rep for rep in reports if rep.q % 2]
    return reports, elapsed


def test_criterion_1_line_scan_n2_r1(verdict):
    reports, elapsed = scanned(2, 1, 2, 64, "line")
    failing = [rep.q for rep in reports if not rep.passed]
    ok = not failing and len(reports) == len(prime_powers_in(2, 64)) and elapsed < 10
    verdict(1, ok, f"{len(reports)} fields, failing={failing}, {elapsed:.1f}s")


def test_criterion_2_translate_scan_n3_r1(verdict):
    reports, elapsed = scanned(3, 1, 2, 49, "translate")
    status = {rep.q: rep.passed for rep in reports}
    largest = search.largest_failing_q(reports)
    ok = largest == 37 and all(status[q] for q in (41, 43, 47, 49)) and elapsed < 120
    verdict(2, ok, f"largest failing q={largest}, {elapsed:.1f}s")


def test_criterion_3_line_verify_41_and_37(verdict):
    start = time.perf_counter()
    good = search.verify_property(ff.context_for_q(41, 3), 1, "line")
    bad = search.verify_property(ff.context_for_q(37, 3), 1, "line")
    elapsed = time.perf_counter() - start
    ok = good.passed and not bad.passed and good.lines_checked == 2_894_640 and elapsed < 900
    verdict(
        3, ok,
        f"q=41 pass={good.passed} over {good.lines_checked} lines (min {good.min_count}); "
        f"q=37 pass={bad.passed} with {bad.exception_count} exceptions; {elapsed:.1f}s",
    )


def test_criterion_4_line_scan_n2_r2(verdict):
    reports, elapsed = scanned(2, 2, 3, 101, "line")
    odd = [rep for rep in reports if rep.q % 2]
    largest = search.largest_failing_q(odd)
    ok = len(odd) == len(reports) and largest == 41 and elapsed < 60
    verdict(4, ok, f"{len(odd)} odd q, largest failing q={largest}, {elapsed:.1f}s")


def test_criterion_5_gamma_equivalence(verdict):
    worst_dev, worst_sum, cases = 0.0, 0.0, 0
    for args in small_fields(1 << 12):
        ctx = ff.build_context(*args)
        N = ctx.group_order
        xs = np.arange(1, ctx.size)
        logs = ctx.log_table[xs]
        for r in divisors(N):
            structure = compute_structure(ctx.q, ctx.n, r)
            values = chars.gamma_char(ctx, structure, xs)
            direct = (np.gcd(logs, N) == r).astype(float)
            worst_dev = max(worst_dev, float(np.abs(values - direct).max()))
            worst_sum = max(worst_sum, abs(complex(values.sum()) - euler_phi(N // r)))
            cases += 1
    ok = worst_dev < 1e-9 and worst_sum < 1e-6
    verdict(5, ok, f"{cases} (q,n,r) cases, max deviation {worst_dev:.2e}, max sum error {worst_sum:.2e}")


def test_criterion_6_katz(verdict):
    worst, cases = 0.0, 0
    for n in (2, 3):
        for _, _, q in prime_powers_in(2, 1 << 8):
            if q**n <= 1 << 16:
                worst = max(worst, chars.katz_max_ratio(ff.context_for_q(q, n)))
                cases += 1
    verdict(6, worst <= 1 + 1e-9, f"{cases} fields, max ratio {worst!r}")


def _criterion_7_lines():
    for q, n, r in [(7, 2, 2), (9, 2, 5), (5, 2, 4)]:
        ctx = ff.context_for_q(q, n)
        for line in search.canonical_lines(ctx):
            yield ctx, compute_structure(q, n, r), line, r
    ctx = ff.context_for_q(37, 3)
    structure = compute_structure(37, 3, 1)
    rng = np.random.default_rng(37)
    gens = np.flatnonzero(ff.generator_mask(ctx))
    for _ in range(100):
        alpha = int(rng.integers(1, ctx.size))
        theta = int(rng.choice(gens))
        yield ctx, structure, search.canonicalize(ctx, alpha, theta), 1


def test_criterion_7_n_char_agreement(verdict):
    worst, count = 0.0, 0
    for ctx, structure, line, r in _criterion_7_lines():
        value = chars.n_char(ctx, structure, line.b, line.theta).value
        worst = max(worst, abs(value - search.line_hit_count(ctx, line, r)))
        count += 1
    verdict(7, worst < 1e-6, f"{count} lines, max |n_char - direct| = {worst:.2e}")


def test_criterion_8_residual_bound(verdict):
    worst, violations, count = 0.0, 0, 0
    for ctx, structure, line, _ in _criterion_7_lines():
        res = chars.n_char(ctx, structure, line.b, line.theta)
        violations += abs(res.residual) > res.residual_bound
        if res.residual_bound:
            worst = max(worst, abs(res.residual) / res.residual_bound)
        count += 1
    verdict(8, violations == 0, f"{count} lines, {violations} violations, max residual/bound {worst:.3f}")


def test_criterion_9_bound_consistency(verdict):
    scans = [
        scanned(2, 1, 2, 64, "line")[0],
        scanned(2, 2, 3, 101, "line")[0],
        [search.verify_property(ff.context_for_q(q, 3), 1, "line") for q in (37, 41)],
    ]
    checked, holding, conflicts = 0, 0, []
    for reports in scans:
        for rep in reports:
            holds = bound_holds(compute_structure(rep.q, rep.n, rep.r))
            holding += holds
            checked += 1
            if holds and not rep.passed:
                conflicts.append((rep.q, rep.n, rep.r))
    verdict(9, checked > 0 and not conflicts,
            f"{checked} verified fields, {holding} with bound true, conflicts={conflicts}")


@pytest.mark.slow
def test_criterion_10_property_suites(verdict):
    others = sorted(str(p) for p in (ROOT / "tests").glob("test_*.py") if p.name != "test_acceptance.py")
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *others],
        cwd=ROOT, capture_output=True, text=True, env={**os.environ}, check=False,
    )
    elapsed = time.perf_counter() - start
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    verdict(10, proc.returncode == 0 and elapsed < 300, f"{tail} ({elapsed:.1f}s)")
