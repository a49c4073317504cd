"""r-primitive elements on translates and lines of finite field extensions."""

from .arith import divisor_count, euler_phi, factor, is_prime, mobius, prime_powers_in
from .ff import FieldContext, build_context, context_for_q
from .rstruct import RStructure, bound_holds, compute_structure
from .search import CanonicalLine, PropertyReport, scan, verify_property

__all__ = [
    "CanonicalLine",
    "FieldContext",
    "PropertyReport",
    "RStructure",
    "bound_holds",
    "build_context",
    "compute_structure",
    "context_for_q",
    "divisor_count",
    "euler_phi",
    "factor",
    "is_prime",
    "mobius",
    "prime_powers_in",
    "scan",
    "verify_property",
]
