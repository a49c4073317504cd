"""Prime decomposition of (q^n - 1, r) and the explicit sufficiency bound.

Every prime p of q^n - 1 = prod p^a_p is sorted by how much of it r takes
(r = prod p^b_p):

    ps: b_p == a_p          (r takes all of p)
    pt: 0 < b_p < a_p       (r takes some of p)
    pu: b_p == 0            (r takes none of p)

with s = prod_{ps} p^b_p, t = prod_{pt} p^b_p and u = prod_{pu} p, so r = s*t
and u is the radical of the part of q^n - 1 coprime to r.  For p_i in pt,
e_i = p_i^b and f_i = e_i * p_i.

The line property for r-primitive elements is guaranteed once

    q > s * f_1 * ... * f_k * d(u) * sqrt(q),

which is evaluated here as q > (s * f_1 * ... * f_k * d(u))**2 to stay in
integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import divisor_count, factor, phi_ratio, prime_power, prime_powers_in


@dataclass(frozen=True)
class RStructure:
    q: int
    n: int
    r: int
    ps: tuple[int, ...]
    pt: tuple[int, ...]
    pu: tuple[int, ...]
    s: int
    t: int
    u: int
    pairs: tuple[tuple[int, int, int], ...]  # (p_i, e_i, f_i)
    a_r: int
    bound_rhs_root: int

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def phi_ratio_u(self) -> Fraction:
        return phi_ratio(self.u)

    @property
    def group_order(self) -> int:
        return self.q**self.n - 1

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "r": self.r,
            "ps": list(self.ps),
            "pt": list(self.pt),
            "pu": list(self.pu),
            "s": self.s,
            "t": self.t,
            "u": self.u,
            "pairs": [list(pr) for pr in self.pairs],
            "a_r": self.a_r,
            "bound_rhs_root": self.bound_rhs_root,
            "bound_holds": bound_holds(self),
        }


def compute_structure(q: int, n: int, r: int) -> RStructure:
    if prime_power(q) is None:
        raise ValueError(f"q={q} is not a prime power")
    if n < 2:
        raise ValueError(f"n={n} must be at least 2")
    if r < 1:
        raise ValueError(f"r={r} must be positive")
    order = q**n - 1
    if order % r:
        raise ValueError(f"r={r} does not divide q^n-1={order}")

    rfac = factor(r)
    ps, pt, pu, pairs = [], [], [], []
    a_r = 1
    for p, a in factor(order):
        b = rfac.exponent(p)
        if b == a:
            ps.append(p)
        elif b > 0:
            pt.append(p)
            pairs.append((p, p**b, p ** (b + 1)))
        else:
            pu.append(p)
        if b > 0:
            a_r *= p ** (b + 1)

    s = math.prod(p ** rfac.exponent(p) for p in ps)
    t = math.prod(e for _, e, _ in pairs)
    u = math.prod(pu)
    rhs = s * math.prod(f for _, _, f in pairs) * divisor_count(u)
    return RStructure(
        q, n, r, tuple(ps), tuple(pt), tuple(pu), s, t, u, tuple(pairs), a_r, rhs
    )


def ell_coefficient(structure: RStructure, i: int, d: int) -> Fraction:
    """Weight of the order-d characters in w_{e_i} - w_{f_i}, scaled by e_i.

    i is 1-based.  Equals 1 - 1/p_i for d != f_i and -1/p_i for d == f_i.
    """
    if not 1 <= i <= structure.k:
        raise ValueError(f"i={i} outside 1..{structure.k}")
    p, _, f = structure.pairs[i - 1]
    if d < 1 or f % d:
        raise ValueError(f"d={d} does not divide f_{i}={f}")
    if d == f:
        return Fraction(-1, p)
    return 1 - Fraction(1, p)


def bound_holds(structure: RStructure) -> bool:
    return structure.q > structure.bound_rhs_root**2


def min_q_satisfying_bound(n: int, r: int, q_max: int) -> list[tuple[int, bool]]:
    """Sufficient-condition verdict for every eligible prime power q <= q_max."""
    if q_max > 10**7:
        raise ValueError(f"q_max={q_max} exceeds 10**7")
    out = []
    if q_max < 2:
        return out
    for _, _, q in prime_powers_in(2, q_max):
        if (q**n - 1) % r == 0:
            out.append((q, bound_holds(compute_structure(q, n, r))))
    return out
