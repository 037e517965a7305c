"""qpade: exact-arithmetic rational approximants to a q-analogue of zeta(2),
with rigorous interval enclosures, verification suites, an HTTP service and
a command-line client."""

from .numeric import (
    BigRat,
    ConsistencyError,
    DomainError,
    Enclosure,
    IntegralityError,
    PrecisionError,
    SupportError,
    Valuation,
    default_precision,
    enclosure_sum,
    geometric_tail_bound,
    p_adic_valuation,
)
from .qcalc import QParam

__version__ = "0.1.0"

__all__ = [
    "BigRat",
    "ConsistencyError",
    "DomainError",
    "Enclosure",
    "IntegralityError",
    "PrecisionError",
    "SupportError",
    "Valuation",
    "QParam",
    "default_precision",
    "enclosure_sum",
    "geometric_tail_bound",
    "p_adic_valuation",
    "__version__",
]
