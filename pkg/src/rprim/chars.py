"""Multiplicative characters of F_{q^n}^* and the indicator functions built from them.

A character is stored as its exponent m: chi_m(gamma^a) = exp(2 pi i a m / N)
with N = q^n - 1.  Evaluating it is one discrete-log lookup and one lookup in
a shared table of N-th roots of unity, so no phase error accumulates.

Every function that takes an element also accepts an integer array of
elements and then returns an array.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import ff
from .arith import divisors, euler_phi, mobius
from .ff import FieldContext
from .rstruct import RStructure, ell_coefficient

TOL = 1e-9
_CHUNK = 1 << 21


@functools.lru_cache(maxsize=16)
def root_table(order: int) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(order) / order)
    roots.flags.writeable = False
    return roots


@dataclass(frozen=True)
class Character:
    ctx: FieldContext = field(repr=False, compare=False)
    m: int

    @property
    def order(self) -> int:
        return self.ctx.group_order // math.gcd(self.m, self.ctx.group_order)

    @property
    def trivial(self) -> bool:
        return self.m == 0

    def __mul__(self, other: Character) -> Character:
        if other.ctx is not self.ctx:
            raise ValueError("characters of different fields")
        return Character(self.ctx, (self.m + other.m) % self.ctx.group_order)


def _check_divisor(ctx: FieldContext, d: int, name: str) -> None:
    if d < 1 or ctx.group_order % d:
        raise ValueError(f"{name}={d} does not divide q^n-1={ctx.group_order}")


def characters_of_order(ctx: FieldContext, d: int) -> list[Character]:
    _check_divisor(ctx, d, "d")
    step = ctx.group_order // d
    return [Character(ctx, step * j) for j in range(d) if math.gcd(j, d) == 1]


def _logs(ctx: FieldContext, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if (x <= 0).any() or (x >= ctx.size).any():
        raise ValueError("characters are evaluated on nonzero elements only")
    return ctx.log_table[x]


def _unwrap(x, values):
    return complex(values) if np.ndim(x) == 0 else values


def _weighted_sum(ctx: FieldContext, ms, coefs, logs: np.ndarray) -> np.ndarray:
    """sum_j coefs[j] * chi_{ms[j]}(gamma^logs), elementwise over logs."""
    order = ctx.group_order
    roots = root_table(order)
    ms = np.asarray(ms, dtype=np.int64)
    coefs = np.asarray(coefs, dtype=np.float64)
    flat = logs.reshape(-1)
    out = np.zeros(flat.shape, dtype=np.complex128)
    rows = max(1, _CHUNK // max(1, flat.size))
    for lo in range(0, len(ms), rows):
        blk = (ms[lo : lo + rows, None] * flat[None, :]) % order
        out += coefs[lo : lo + rows] @ roots[blk]
    return out.reshape(logs.shape)


def evaluate(chi: Character, x):
    logs = _logs(chi.ctx, x)
    values = root_table(chi.ctx.group_order)[(chi.m * logs) % chi.ctx.group_order]
    return _unwrap(x, values)


def omega_m(ctx: FieldContext, m: int, x):
    """Indicator of m-free elements, as a character sum."""
    _check_divisor(ctx, m, "m")
    ms, coefs = [], []
    for d in divisors(m):
        mu = mobius(d)
        if mu == 0:
            continue
        for chi in characters_of_order(ctx, d):
            ms.append(chi.m)
            coefs.append(mu / euler_phi(d))
    values = euler_phi(m) / m * _weighted_sum(ctx, ms, coefs, _logs(ctx, x))
    return _unwrap(x, values)


def w_k_indicator(ctx: FieldContext, k_div: int, x):
    """Indicator of k_div-th powers, as a character sum."""
    _check_divisor(ctx, k_div, "k")
    ms = [chi.m for d in divisors(k_div) for chi in characters_of_order(ctx, d)]
    values = _weighted_sum(ctx, ms, np.ones(len(ms)), _logs(ctx, x)) / k_div
    return _unwrap(x, values)


def _check_structure(ctx: FieldContext, structure: RStructure) -> None:
    if (structure.q, structure.n) != (ctx.q, ctx.n):
        raise ValueError(
            f"structure for q={structure.q}, n={structure.n} "
            f"does not match field q={ctx.q}, n={ctx.n}"
        )


def gamma_product(ctx: FieldContext, structure: RStructure, x):
    """Omega_u * w_s * prod_i (w_{e_i} - w_{f_i})."""
    _check_structure(ctx, structure)
    values = np.asarray(omega_m(ctx, structure.u, x)) * np.asarray(
        w_k_indicator(ctx, structure.s, x)
    )
    for _, e, f in structure.pairs:
        values = values * (
            np.asarray(w_k_indicator(ctx, e, x)) - np.asarray(w_k_indicator(ctx, f, x))
        )
    return _unwrap(x, values)


def _convolve(acc: dict[int, Fraction], terms, order: int) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for m1, c1 in acc.items():
        for m2, c2 in terms:
            key = (m1 + m2) % order
            out[key] = out.get(key, 0) + c1 * c2
    return out


@functools.lru_cache(maxsize=32)
def _expansion(ctx: FieldContext, structure: RStructure) -> tuple[tuple[int, Fraction], ...]:
    order = ctx.group_order
    u_terms = []
    for d1 in divisors(structure.u):
        mu = mobius(d1)
        if mu == 0:
            continue
        coef = Fraction(mu, euler_phi(d1))
        u_terms += [(chi.m, coef) for chi in characters_of_order(ctx, d1)]
    s_terms = [
        (chi.m, Fraction(1))
        for d2 in divisors(structure.s)
        for chi in characters_of_order(ctx, d2)
    ]
    acc = _convolve({0: Fraction(1)}, u_terms, order)
    acc = _convolve(acc, s_terms, order)
    for i, (_, _, f) in enumerate(structure.pairs, start=1):
        terms = [
            (chi.m, ell_coefficient(structure, i, delta))
            for delta in divisors(f)
            for chi in characters_of_order(ctx, delta)
        ]
        acc = _convolve(acc, terms, order)
    return tuple(sorted(acc.items()))


def gamma_expansion(ctx: FieldContext, structure: RStructure) -> list[tuple[int, Fraction]]:
    """(m, c_m) pairs with Gamma = phi(u)/u / r * sum_m c_m chi_m, ascending in m.

    The factor orders are pairwise coprime, so each product character arises
    from exactly one divisor tuple and c_m is that tuple's coefficient.
    """
    _check_structure(ctx, structure)
    return list(_expansion(ctx, structure))


def gamma_expanded(ctx: FieldContext, structure: RStructure, x):
    terms = gamma_expansion(ctx, structure)
    prefactor = float(structure.phi_ratio_u / structure.r)
    ms = [m for m, _ in terms]
    coefs = [float(c) for _, c in terms]
    values = prefactor * _weighted_sum(ctx, ms, coefs, _logs(ctx, x))
    return _unwrap(x, values)


def gamma_char(ctx: FieldContext, structure: RStructure, x, form: str = "expanded"):
    """Indicator of r-primitive elements through characters.

    form="expanded" sums the full divisor-tuple expansion; form="product"
    multiplies the individual indicators.  Both equal is_r_primitive.
    """
    if form == "expanded":
        return gamma_expanded(ctx, structure, x)
    if form == "product":
        return gamma_product(ctx, structure, x)
    raise ValueError(f"unknown form {form!r}")


def _line_logs(ctx: FieldContext, alpha: int, theta: int) -> np.ndarray:
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if not ff.is_generator(ctx, theta):
        raise ValueError(f"theta={theta} does not generate F_{ctx.size} over F_{ctx.q}")
    shifted = ff.add_array(ctx, theta, ctx.subfield)
    logs = (ctx.log_table[shifted] + ctx.log_table[alpha]) % ctx.group_order
    assert (ctx.log_table[shifted] >= 0).all(), "zero on a line"
    return logs


def line_char_sum(ctx: FieldContext, chi: Character, alpha: int, theta: int) -> complex:
    """sum over x in F_q of chi(alpha * (theta + x))."""
    logs = _line_logs(ctx, alpha, theta)
    roots = root_table(ctx.group_order)
    return complex(roots[(chi.m * logs) % ctx.group_order].sum())


@dataclass(frozen=True)
class KatzReport:
    q: int
    n: int
    bound: float
    max_abs_sum: float
    ratio: float
    theta_index: int
    character_m: int

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "bound": self.bound,
            "max_abs_sum": self.max_abs_sum,
            "ratio": self.ratio,
            "argmax": {"theta_index": self.theta_index, "character_m": self.character_m},
        }


KATZ_CAP = 1 << 16


def katz_sweep(ctx: FieldContext) -> KatzReport:
    """Largest |sum_{x in F_q} chi(theta + x)| over nontrivial chi and generators theta.

    The sum only depends on the translate set of theta, and for a fixed set
    the sums over all chi at once are one DFT of its log-indicator vector.
    """
    if ctx.size > KATZ_CAP:
        raise ValueError(f"field of size {ctx.size} exceeds the exhaustive cap {KATZ_CAP}")
    order = ctx.group_order
    reps = ff.translate_representatives(ctx)
    logs = ctx.log_table[ff.translate_points(ctx, reps)]
    best, best_rep, best_m = -1.0, 0, 0
    rows = max(1, (1 << 22) // order)
    for lo in range(0, len(reps), rows):
        blk = logs[lo : lo + rows]
        hist = np.zeros((len(blk), order))
        hist[np.arange(len(blk))[:, None], blk] = 1.0
        mags = np.abs(np.fft.fft(hist, axis=1))
        mags[:, 0] = -1.0
        flat = int(np.argmax(mags))
        row, m = divmod(flat, order)
        if mags[row, m] > best:
            best, best_rep, best_m = float(mags[row, m]), int(reps[lo + row]), m
    bound = (ctx.n - 1) * math.sqrt(ctx.q)
    return KatzReport(ctx.q, ctx.n, bound, best, best / bound, best_rep, best_m)


def katz_max_ratio(ctx: FieldContext) -> float:
    return katz_sweep(ctx).ratio


@dataclass(frozen=True)
class NCharResult:
    value: float
    main_term: float
    residual: float
    residual_bound: float


def residual_weight(ctx: FieldContext, structure: RStructure) -> Fraction:
    """sum over nontrivial characters of |c_m|, i.e. the error-term weight."""
    return sum((abs(c) for m, c in gamma_expansion(ctx, structure) if m), Fraction(0))


def n_char(ctx: FieldContext, structure: RStructure, alpha: int, theta: int) -> NCharResult:
    """Number of r-primitive points on the line of alpha and theta, via characters.

    Also returns the main term q/r * prod(1 - 1/p_i) * phi(u)/u, the residual
    value - main_term, and the bound on |residual| obtained by giving every
    nontrivial character sum size sqrt(q).
    """
    _check_structure(ctx, structure)
    logs = _line_logs(ctx, alpha, theta)
    terms = gamma_expansion(ctx, structure)
    ms = np.array([m for m, _ in terms], dtype=np.int64)
    coefs = np.array([float(c) for _, c in terms])
    roots = root_table(ctx.group_order)
    sums = np.zeros(len(ms), dtype=np.complex128)
    rows = max(1, _CHUNK // len(logs))
    for lo in range(0, len(ms), rows):
        sums[lo : lo + rows] = roots[(ms[lo : lo + rows, None] * logs[None, :]) % ctx.group_order].sum(axis=1)
    theta_u = structure.phi_ratio_u
    value = float(theta_u / structure.r) * complex(coefs @ sums).real

    main = Fraction(ctx.q, structure.r) * theta_u
    for i in range(1, structure.k + 1):
        main *= ell_coefficient(structure, i, 1)
    bound = float(theta_u / structure.r * residual_weight(ctx, structure)) * math.sqrt(ctx.q)
    return NCharResult(value, float(main), value - float(main), bound)
