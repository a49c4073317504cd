"""The field F_{q^n} with q = p^k, as F_p[x]/(f) with deg f = k*n.

Elements are plain ints: the base-p digits of an index are the coefficients
of the residue polynomial, lowest degree first.  Multiplication and every
order computation go through a full discrete-log table, so a context costs
O(q^n) memory and nothing more per operation.

The subfield F_q is not built as a tower.  It is the subgroup of order q - 1
plus zero, read straight off the log table.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .arith import Factorization, factor, is_prime

FIELD_CAP = 1 << 27


def field_cap() -> int:
    """Largest allowed q^n; RPRIM_MAX_FIELD may lower it but never raise it."""
    env = os.environ.get("RPRIM_MAX_FIELD")
    if not env:
        return FIELD_CAP
    try:
        value = int(env)
    except ValueError:
        raise ValueError(f"RPRIM_MAX_FIELD={env!r} is not an integer") from None
    return max(1, min(value, FIELD_CAP))


# -- polynomials over F_p: coefficient lists, lowest degree first ------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, f, p)


def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic f over F_p."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    # x^(p^i) mod f for i = 0..d
    frob = [x]
    for _ in range(d):
        frob.append(_poly_powmod(frob[-1], p, f, p))
    if _poly_sub(frob[d], x, p):
        return False
    for ell, _ in factor(d):
        g = _poly_gcd(f, _poly_sub(frob[d // ell], x, p), p)
        if len(g) != 1:
            return False
    return True


def least_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of the given degree.

    Candidates are the coefficient tuples (c_0, ..., c_{degree-1}) compared
    lowest degree first; the leading 1 is appended to the result.
    """
    for low in itertools.product(range(p), repeat=degree):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


def _digits(index: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        index, d = divmod(index, p)
        out.append(d)
    return out


def _undigits(coeffs: list[int], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


def _mul_matrix(c: list[int], f: list[int], p: int) -> np.ndarray:
    """Matrix of y -> c*y on digit row vectors."""
    width = len(f) - 1
    rows = []
    xi = [1]
    for _ in range(width):
        prod = _poly_mulmod(c, xi, f, p)
        rows.append(prod + [0] * (width - len(prod)))
        xi = _poly_mulmod(xi, [0, 1], f, p)
    return np.array(rows, dtype=np.int64)


# -- the context -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldContext:
    p: int
    k: int
    n: int
    modulus: tuple[int, ...]
    gamma: int
    group_order: int
    factorization: Factorization
    log_table: np.ndarray = field(repr=False)
    exp_table: np.ndarray = field(repr=False)
    subfield: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def size(self) -> int:
        return self.group_order + 1

    @property
    def degree(self) -> int:
        return self.k * self.n

    @functools.cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.degree, dtype=np.int64)

    def describe(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "modulus": list(self.modulus),
            "gamma": self.gamma,
        }


def _find_gamma(p: int, f: list[int], order: int, fac: Factorization) -> int:
    width = len(f) - 1
    exps = [order // ell for ell, _ in fac]
    for index in range(1, p**width):
        g = _trim(_digits(index, p, width))
        if all(_poly_powmod(g, e, f, p) != [1] for e in exps):
            return index
    raise AssertionError("no primitive element found")


def _power_table(p: int, f: list[int], gamma: int, order: int) -> np.ndarray:
    """Indices of gamma^0 .. gamma^(order-1), by repeated doubling."""
    width = len(f) - 1
    powers = np.zeros((1, width), dtype=np.int64)
    powers[0, 0] = 1
    step = _trim(_digits(gamma, p, width))
    while len(powers) < order:
        mat = _mul_matrix(step, f, p)
        powers = np.vstack([powers, powers @ mat % p])
        step = _poly_mulmod(step, step, f, p)
    weights = p ** np.arange(width, dtype=np.int64)
    return powers[:order] @ weights


def build_context(p: int, k: int, n: int) -> FieldContext:
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if k < 1:
        raise ValueError(f"k={k} must be at least 1")
    if n < 2:
        raise ValueError(f"n={n} must be at least 2")
    size = p ** (k * n)
    if size > field_cap():
        raise ValueError(f"field of size {size} exceeds cap {field_cap()}")
    return _build(int(p), int(k), int(n))


@functools.lru_cache(maxsize=8)
def _build(p: int, k: int, n: int) -> FieldContext:
    size = p ** (k * n)
    order = size - 1
    fac = factor(order)
    f = list(least_irreducible(p, k * n))
    gamma = _find_gamma(p, f, order, fac)
    exp_table = _power_table(p, f, gamma, order)
    log_table = np.full(size, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(order, dtype=np.int64)
    if (log_table[1:] < 0).any():
        raise AssertionError("power table is not a bijection")

    q = p**k
    step = order // (q - 1)
    sub = np.concatenate([[0], exp_table[np.arange(q - 1) * step]])
    sub.sort()

    for arr in (exp_table, log_table, sub):
        arr.flags.writeable = False
    return FieldContext(p, k, n, tuple(f), gamma, order, fac, log_table, exp_table, sub)


def context_for_q(q: int, n: int) -> FieldContext:
    fac = factor(q)
    if len(fac.factors) != 1:
        raise ValueError(f"q={q} is not a prime power")
    p, k = fac.factors[0]
    return build_context(p, k, n)


# -- element arithmetic ------------------------------------------------------


def _check_element(ctx: FieldContext, a) -> None:
    if not 0 <= a < ctx.size:
        raise ValueError(f"{a} is not an element index of F_{ctx.size}")


def add_array(ctx: FieldContext, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if ctx.p == 2:
        return a ^ b
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    p = ctx.p
    for w in ctx._powers.tolist():
        out += ((a // w % p + b // w % p) % p) * w
    return out


def add(ctx: FieldContext, a: int, b: int) -> int:
    _check_element(ctx, a)
    _check_element(ctx, b)
    return int(add_array(ctx, a, b))


def neg(ctx: FieldContext, a: int) -> int:
    _check_element(ctx, a)
    p = ctx.p
    return _undigits([(-d) % p for d in _digits(int(a), p, ctx.degree)], p)


def log(ctx: FieldContext, a: int) -> int:
    _check_element(ctx, a)
    if a == 0:
        raise ValueError("zero has no discrete log")
    return int(ctx.log_table[a])


def mul(ctx: FieldContext, a: int, b: int) -> int:
    _check_element(ctx, a)
    _check_element(ctx, b)
    if a == 0 or b == 0:
        return 0
    return int(ctx.exp_table[(ctx.log_table[a] + ctx.log_table[b]) % ctx.group_order])


def inv(ctx: FieldContext, a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return int(ctx.exp_table[(-log(ctx, a)) % ctx.group_order])


def div(ctx: FieldContext, a: int, b: int) -> int:
    return mul(ctx, a, inv(ctx, b))


def power(ctx: FieldContext, a: int, e: int) -> int:
    if a == 0:
        if e <= 0:
            raise ValueError("zero raised to a non-positive power")
        return 0
    return int(ctx.exp_table[(log(ctx, a) * e) % ctx.group_order])


def gamma_power(ctx: FieldContext, e: int) -> int:
    return int(ctx.exp_table[e % ctx.group_order])


def order(ctx: FieldContext, x: int) -> int:
    return ctx.group_order // math.gcd(log(ctx, x), ctx.group_order)


def _check_divisor(ctx: FieldContext, m: int, name: str) -> None:
    if m < 1 or ctx.group_order % m:
        raise ValueError(f"{name}={m} does not divide q^n-1={ctx.group_order}")


def is_r_primitive(ctx: FieldContext, x: int, r: int) -> bool:
    _check_divisor(ctx, r, "r")
    return math.gcd(log(ctx, x), ctx.group_order) == r


def is_m_free(ctx: FieldContext, x: int, m: int) -> bool:
    _check_divisor(ctx, m, "m")
    return math.gcd(m, ctx.group_order // order(ctx, x)) == 1


def r_primitive_log_mask(ctx: FieldContext, r: int) -> np.ndarray:
    """Boolean array over discrete logs j: is gamma^j r-primitive."""
    _check_divisor(ctx, r, "r")
    j = np.arange(ctx.group_order, dtype=np.int64)
    return np.gcd(j, ctx.group_order) == r


def _proper_subfield_orders(ctx: FieldContext) -> list[int]:
    """|F_{q^(n/l)}^*| for each prime l dividing n."""
    return [ctx.q ** (ctx.n // ell) - 1 for ell, _ in factor(ctx.n)]


def is_generator(ctx: FieldContext, theta: int) -> bool:
    _check_element(ctx, theta)
    if theta == 0:
        return False
    # theta^(q^(n/l)) == theta  <=>  log(theta) * (q^(n/l) - 1) == 0 mod q^n - 1
    lt = log(ctx, theta)
    return all(lt * m % ctx.group_order for m in _proper_subfield_orders(ctx))


def generator_mask(ctx: FieldContext) -> np.ndarray:
    """Boolean array over element indices: generates F_{q^n} over F_q."""
    mask = np.zeros(ctx.size, dtype=bool)
    logs = ctx.log_table[1:]
    ok = np.ones(ctx.group_order, dtype=bool)
    for m in _proper_subfield_orders(ctx):
        ok &= (logs * m) % ctx.group_order != 0
    mask[1:] = ok
    return mask


def in_subfield(ctx: FieldContext, x: int) -> bool:
    i = np.searchsorted(ctx.subfield, x)
    return bool(i < len(ctx.subfield) and ctx.subfield[i] == x)


# -- translate sets ----------------------------------------------------------


def coset_min(ctx: FieldContext, elements) -> np.ndarray:
    """Least index in each coset x + F_q."""
    elements = np.asarray(elements, dtype=np.int64)
    if ctx.k == 1:
        # F_p is the constant polynomials: the low digit is free.
        return elements - elements % ctx.p
    best = elements.copy()
    for s in ctx.subfield[1:].tolist():
        np.minimum(best, add_array(ctx, elements, s), out=best)
    return best


def translate_representatives(ctx: FieldContext) -> np.ndarray:
    """One generator per translate set theta + F_q: its least index, ascending."""
    everything = np.arange(ctx.size, dtype=np.int64)
    gens = everything[generator_mask(ctx)]
    return gens[coset_min(ctx, gens) == gens]


def translate_points(ctx: FieldContext, reps) -> np.ndarray:
    """Array of shape (len(reps), q): row i lists reps[i] + F_q in subfield order."""
    reps = np.asarray(reps, dtype=np.int64)
    return add_array(ctx, reps[:, None], ctx.subfield[None, :])
