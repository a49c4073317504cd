import os

from hypothesis import HealthCheck, settings

from rprim.arith import prime_powers_in

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def small_fields(limit: int = 1 << 12) -> list[tuple[int, int, int]]:
    """Every (p, k, n) with n >= 2 and p^(k n) <= limit."""
    out = []
    for p, k, q in prime_powers_in(2, limit):
        n = 2
        while q**n <= limit:
            out.append((p, k, n))
            n += 1
    return sorted(out, key=lambda t: (t[0] ** (t[1] * t[2]), t))


SMALL_FIELDS = small_fields()
TINY_FIELDS = small_fields(256)
