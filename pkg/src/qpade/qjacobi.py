"""Little q-Jacobi polynomials: the explicit basic-hypergeometric sum, the
q-difference Rodrigues construction, and rigorous verification of their
orthogonality on the geometric lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .numeric import (
    DomainError,
    Enclosure,
    Scalar,
    enclosure_sum,
    geometric_tail_bound,
    smallest_tail_index,
)
from .polyring import RatPoly
from .qcalc import QParam, q_derivative, q_pochhammer


@dataclass(frozen=True)
class QJacobiSpec:
    """Degree and parameters of a little q-Jacobi polynomial P_n(x; a, b | q).

    The approximation pipeline only uses a = b = 1 (the little q-Legendre
    case); general parameters are supported by the explicit sum.
    """

    n: int
    a: Fraction
    b: Fraction
    qp: QParam

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"degree must be >= 0, got {self.n}")


def little_qjacobi(spec: QJacobiSpec) -> RatPoly:
    """Exact degree-n polynomial from the terminating 2-phi-1 sum

        P_n(x; a, b | q) = sum_k [(q^-n;q)_k (abq^(n+1);q)_k /
                                  ((q;q)_k (aq;q)_k)] q^k x^k.
    """
    n, a, b, qp = spec.n, Fraction(spec.a), Fraction(spec.b), spec.qp
    q = qp.q
    coeffs = [Fraction(1)]
    c = Fraction(1)
    for k in range(1, n + 1):
        denom_factor = 1 - a * q**k
        if denom_factor == 0:
            raise DomainError(
                f"parameter a = {a} puts a zero in (aq;q)_k at k = {k}"
            )
        c *= (1 - qp.q_pow(k - 1 - n)) * (1 - a * b * q ** (n + k))
        c /= (1 - q**k) * denom_factor
        c *= q
        coeffs.append(c)
    return RatPoly(coeffs)


def little_qlegendre(n: int, qp: QParam) -> RatPoly:
    """P_n(x; 1, 1 | q), the case driving the whole construction."""
    return little_qjacobi(QJacobiSpec(n=n, a=Fraction(1), b=Fraction(1), qp=qp))


@lru_cache(maxsize=None)
def _qlegendre_cached(n: int, p: int) -> RatPoly:
    return little_qlegendre(n, QParam(p))


def jacobi_r(n: int, qp: QParam) -> RatPoly:
    """The pipeline polynomial z -> P_n(p z; 1, 1 | q).

    Its x^k coefficient is (-1)^k p^(k(k+1)/2 - nk) [n k]_p [n+k k]_p, which
    is exactly the coefficient pattern the approximant construction needs.
    """
    return _qlegendre_cached(n, qp.p).scale_argument(qp.p)


def rodrigues_rhs(n: int, qp: QParam) -> RatPoly:
    """Rodrigues-style construction at integer parameters a = b = 1:

        q^(n(n-1)/2) (1-q)^n / (q;q)_n * D_p^n [ (qx;q)_n x^n ],

    where the infinite-product weight ratio collapses to the finite
    polynomial (qx;q)_n (this is what restricts the construction to
    nonnegative-integer second parameter).  Equals the explicit sum exactly.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    q = qp.q
    weight = RatPoly.monomial(n)
    for j in range(1, n + 1):
        weight = weight * RatPoly([1, -(q**j)])
    for _ in range(n):
        weight = q_derivative(weight, qp, variant="p")
    constant = q ** (n * (n - 1) // 2) * (1 - q) ** n / q_pochhammer(q, qp, n)
    return weight.scale(constant)


def abs_coefficient_sum(poly: RatPoly) -> Fraction:
    """sum_i |c_i| -- bounds |poly(x)| for 0 <= x <= 1."""
    return sum((abs(c) for c in poly.coefficients), Fraction(0))


def _qq_infinity_lower_bound(qp: QParam) -> Fraction:
    """A positive rational lower bound on (q;q)_infinity.

    prod_{j>J}(1-q^j) >= 1 - sum_{j>J} q^j = 1 - q^(J+1)/(1-q), positive
    from J = 2 on for every p >= 2.
    """
    q = qp.q
    head = q_pochhammer(q, qp, 3)
    correction = 1 - q**4 / (1 - q)
    if correction <= 0:
        raise DomainError("lower bound for (q;q)_infinity collapsed")
    return head * correction


def orthogonality_defect(
    n: int, m: int, a: Scalar, b: Scalar, qp: QParam, bits: int = 128
) -> Enclosure:
    """Enclosure of sum_{k>=0} (bq;q)_k/(q;q)_k (aq)^k P_n(q^k;a,b|q) q^(km).

    For 0 <= m < n the sum is an orthogonality relation and the enclosure
    must contain 0; for m >= n it is the (positive) norm-side quantity.  The
    tail majorant requires 0 <= a*q < 1 and 0 <= b*q <= 1, which covers the
    pipeline's a = b = 1.
    """
    if n < 0 or m < 0:
        raise DomainError("indices must be >= 0")
    a, b = Fraction(a), Fraction(b)
    q = qp.q
    if not (0 <= a * q < 1 and 0 <= b * q <= 1):
        raise DomainError("tail bound requires 0 <= a*q < 1 and 0 <= b*q <= 1")
    poly = little_qjacobi(QJacobiSpec(n=n, a=a, b=b, qp=qp))
    height = abs_coefficient_sum(poly)
    ratio = a * q * q**m
    scale = height / _qq_infinity_lower_bound(qp)

    def tail_at(k: int) -> Fraction:
        return geometric_tail_bound(scale, ratio, k)

    target = Fraction(1, 2 ** (bits + 8))
    guess = int((bits + 16) / max(1e-9, -math.log2(float(ratio)))) + 4
    cutoff = smallest_tail_index(tail_at, target, guess=guess)

    weights = [Fraction(1)]
    for k in range(1, cutoff + 1):
        w = weights[-1] * (1 - b * q**k) / (1 - q**k) * (a * q)
        weights.append(w)

    def term(k: int) -> Fraction:
        return weights[k] * poly.evaluate(q**k) * q ** (k * m)

    t = tail_at(cutoff)
    return enclosure_sum(term, cutoff + 1, bits=bits, tail_lo=-t, tail_hi=t)
