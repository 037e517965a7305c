"""Construction of the simultaneous rational approximants to the q-zeta
value at 2: the auxiliary lattice function F_n = A_n + B_n log_q, the three
polynomials A_n, B_n, C_n in closed form, the rational approximants
a*/b*, the cleared integer sequences (a_n, b_n), and the q-Mellin transform
of F_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import clearing_factor_e
from .numeric import (
    DomainError,
    Enclosure,
    IntegralityError,
    Scalar,
    enclosure_sum,
    geometric_tail_bound,
    smallest_tail_index,
)
from .polyring import RatPoly
from .qcalc import QParam, p_pochhammer, q_binomial, q_pochhammer
from .qjacobi import abs_coefficient_sum, little_qlegendre


@dataclass(frozen=True)
class ApproximantRecord:
    """Everything exact about index n: the three polynomials, the rational
    approximant numerator/denominator, the clearing factor, and the cleared
    integer pair (a, b).  Error enclosures live in a separate record so this
    one stays immutable and cheap to cache."""

    n: int
    qp: QParam
    A: RatPoly
    B: RatPoly
    C: RatPoly
    a_star: Fraction
    b_star: Fraction
    e: int
    a: int
    b: int


def _alpha(n: int, k: int, qp: QParam) -> Fraction:
    """(-1)^k p^(k(k+1)/2 - nk) [n k]_p [n+k k]_p."""
    sign = -1 if k % 2 else 1
    return (
        sign
        * qp.q_pow(n * k - k * (k + 1) // 2)
        * q_binomial(n, k, "p", qp)
        * q_binomial(n + k, k, "p", qp)
    )


def _beta(n: int, i: int, qp: QParam) -> Fraction:
    """(-1)^i p^(i(i+1)/2 - ni) [n i]_p."""
    sign = -1 if i % 2 else 1
    return sign * qp.q_pow(n * i - i * (i + 1) // 2) * q_binomial(n, i, "p", qp)


def poly_b(n: int, qp: QParam) -> RatPoly:
    """Coefficient polynomial of the logarithm in F_n:
    B_n(x) = sum_k p^(k^2 - 2kn) [n k]_p^2 [n+k k]_p x^k."""
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    coeffs = []
    for k in range(n + 1):
        bk = q_binomial(n, k, "p", qp)
        coeffs.append(qp.q_pow(2 * k * n - k * k) * bk * bk * q_binomial(n + k, k, "p", qp))
    return RatPoly(coeffs)


def poly_a(n: int, qp: QParam) -> RatPoly:
    """Polynomial part of F_n.  Built pairwise from the (x^k - x^i) bincoms,
    with every partial sum reduced, so intermediate numerators stay small;
    A_n(1) = 0 by construction (the k = i diagonal is excluded and the
    off-diagonal terms pair up)."""
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    p = qp.p
    alphas = [_alpha(n, k, qp) for k in range(n + 1)]
    betas = [_beta(n, i, qp) for i in range(n + 1)]
    ppow = [p**j for j in range(n + 1)]
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        if alphas[k] == 0:
            continue
        for i in range(n + 1):
            if i == k:
                continue
            w = alphas[k] * betas[i] / (ppow[i] - ppow[k])
            coeffs[k] += w
            coeffs[i] -= w
    return RatPoly(coeffs)


def poly_c(n: int, qp: QParam) -> RatPoly:
    """The degree <= n-1 polynomial that absorbs the series part of the
    second approximation condition, in closed form: a double sum over the
    A-side bracket differences plus a single sum with squared denominators."""
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    p = qp.p
    # prefix polynomials S_k(x) = sum_{t<k} p^(k-t) x^t / (p^(k-t) - 1) and
    # T_k(x) = sum_{t<k} p^(k-t) x^t / (p^(k-t) - 1)^2, built incrementally:
    # S_{k+1} = x S_k + p^(k+1)/(p^(k+1) - 1).
    s_polys: list[list[Fraction]] = [[]]
    t_polys: list[list[Fraction]] = [[]]
    for k in range(1, n + 1):
        pk = Fraction(p**k)
        s_polys.append([pk / (pk - 1)] + s_polys[-1])
        t_polys.append([pk / (pk - 1) ** 2] + t_polys[-1])

    coeffs = [Fraction(0)] * max(n, 1)
    ppow = [p**j for j in range(n + 1)]
    nk = [q_binomial(n, k, "p", qp) for k in range(n + 1)]
    npk = [q_binomial(n + k, k, "p", qp) for k in range(n + 1)]
    for k in range(n + 1):
        for i in range(n + 1):
            if i == k:
                continue
            sign = -1 if (k + i) % 2 else 1
            gamma = (
                sign
                * nk[k]
                * nk[i]
                * npk[k]
                * qp.q_pow(n * k + n * i - k * (k + 1) // 2 - i * (i + 1) // 2)
                / (ppow[i] - ppow[k])
            )
            for t, c in enumerate(s_polys[k]):
                coeffs[t] += gamma * c
            for t, c in enumerate(s_polys[i]):
                coeffs[t] -= gamma * c
        delta = nk[k] * nk[k] * npk[k] * qp.q_pow(2 * k * n - k * k)
        for t, c in enumerate(t_polys[k]):
            coeffs[t] += delta * c
    return RatPoly(coeffs)


def harmonic_p_sum(n: int, p: int) -> Fraction:
    """sum_{k=1}^{n-1} k / (p^k - 1), the exact regrouping constant."""
    return sum((Fraction(k, p**k - 1) for k in range(1, n)), Fraction(0))


@lru_cache(maxsize=None)
def _approximant_cached(n: int, p: int) -> ApproximantRecord:
    qp = QParam(p)
    a_poly = poly_a(n, qp)
    b_poly = poly_b(n, qp)
    c_poly = poly_c(n, qp)
    pn = p**n
    b_star = b_poly.evaluate(pn)
    a_star = b_star * harmonic_p_sum(n, p) + c_poly.evaluate(pn)
    e = clearing_factor_e(n, p)
    a_val = e * a_star
    b_val = e * b_star
    if a_val.denominator != 1 or b_val.denominator != 1:
        raise IntegralityError(
            f"clearing factor failed to produce integers at n={n}, p={p}: "
            f"a={a_val}, b={b_val}"
        )
    if b_val <= 0:
        raise IntegralityError(f"cleared denominator not positive at n={n}, p={p}")
    return ApproximantRecord(
        n=n,
        qp=qp,
        A=a_poly,
        B=b_poly,
        C=c_poly,
        a_star=a_star,
        b_star=b_star,
        e=e,
        a=int(a_val),
        b=int(b_val),
    )


def approximant(n: int, qp: QParam) -> ApproximantRecord:
    """The full exact record for index n (cached per (n, p))."""
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    return _approximant_cached(n, qp.p)


def f_root_check(n: int, qp: QParam) -> bool:
    """True iff A_n(p^l) - l * B_n(p^l) = 0 exactly for l = 0..n, i.e. the
    lattice function A_n + B_n log_q vanishes at 1, p, ..., p^n."""
    rec = approximant(n, qp)
    for ell in range(n + 1):
        x = qp.p**ell
        if rec.A.evaluate(x) - ell * rec.B.evaluate(x) != 0:
            return False
    return True


def f_on_grid_prefix(n: int, k_max: int, qp: QParam) -> list[Fraction]:
    """Exact values [F_n(q^0), ..., F_n(q^k_max)] via the convolution

        F_n(q^k) = sum_{l=0}^{k-1} P_n(q^(k-l-1); 1,1 | q) (q^(l+1);q)_n,

    reorganised as n+1 geometric accumulators so the whole prefix costs
    O(k_max * n) exact operations."""
    if n < 0 or k_max < 0:
        raise DomainError("indices must be >= 0")
    c = little_qlegendre(n, qp).coefficients
    c = tuple(c) + (Fraction(0),) * (n + 1 - len(c))
    qpow = [qp.q_pow(i) for i in range(n + 1)]
    z = [Fraction(0)] * (n + 1)
    w = q_pochhammer(qp.q, qp, n)
    out = [Fraction(0)]
    p = qp.p
    pk = 1
    pn = p**n
    for k in range(1, k_max + 1):
        for i in range(n + 1):
            z[i] = z[i] * qpow[i] + w
        out.append(sum((c[i] * z[i] for i in range(n + 1)), Fraction(0)))
        pk *= p
        w *= Fraction(pk * pn - 1, pn * (pk - 1))  # (1-q^(k+n))/(1-q^k)
    return out


def f_on_grid(n: int, k: int, qp: QParam) -> Fraction:
    """Exact F_n(q^k); k = 0 gives the empty sum 0."""
    return f_on_grid_prefix(n, k, qp)[k]


def mellin_transform(n: int, s: int, qp: QParam) -> Fraction:
    """Closed form of the lattice Mellin transform of F_n:

        (p;p)_n / p^(n^2+n+1) * q^s (q^(s-n+1);q)_n / (q^(s+1);q)_(n+1)^2.

    Vanishes for s = 0..n-1 because the rising factor then contains 1 - q^0.
    """
    if n < 0 or s < 0:
        raise DomainError("indices must be >= 0")
    num = q_pochhammer(qp.q_pow(s - n + 1), qp, n)
    if num == 0:
        return Fraction(0)
    den = q_pochhammer(qp.q_pow(s + 1), qp, n + 1)
    return (
        p_pochhammer(qp, n)
        / Fraction(qp.p) ** (n * n + n + 1)
        * qp.q_pow(s)
        * num
        / (den * den)
    )


def pade_remainder(n: int, m_exp: int, qp: QParam, bits: int = 256) -> Enclosure:
    """Enclosure of A_n(z) f1(z) + B_n(z) f2(z) - C_n(z) at z = p^m_exp,

    where f1(z) = sum_k q^k/(z - q^k) and f2(z) = sum_k k q^k/(z - q^k).
    The point must be off the lattice {q^k : k >= 0}, i.e. m_exp >= 1.
    At z = p^n (n >= 1) this equals b*_n zeta_q(2) - a*_n after regrouping
    the finite harmonic-type sum into a*_n.
    """
    if m_exp < 1:
        raise DomainError("z = p^m with m < 1 hits the lattice poles of f1, f2")
    rec = approximant(n, qp)
    p = qp.p
    z = p**m_exp
    a_val = rec.A.evaluate(z)
    b_val = rec.B.evaluate(z)
    c_val = rec.C.evaluate(z)
    scale = max(abs(a_val), abs(b_val), Fraction(1))
    wbits = bits + scale.numerator.bit_length() + 16
    q = qp.q

    # q^k/(z - q^k) = 1/(p^(m+k) - 1): positive terms, geometric-type tails.
    def tail_at(k: int) -> Fraction:
        return geometric_tail_bound(qp.q_pow(m_exp) / (1 - q), q, k, "k")

    target = Fraction(1, 2 ** (wbits + 8))
    cutoff = smallest_tail_index(tail_at, target, guess=wbits // max(1, p.bit_length() - 1) + 8)
    denoms = []
    pmk = z
    for _ in range(cutoff + 1):
        denoms.append(pmk - 1)
        pmk *= p
    f1 = enclosure_sum(
        lambda k: Fraction(1, denoms[k]),
        cutoff + 1,
        bits=wbits,
        tail_hi=geometric_tail_bound(qp.q_pow(m_exp) / (1 - q), q, cutoff, 1),
    )
    f2 = enclosure_sum(
        lambda k: Fraction(k, denoms[k]),
        cutoff + 1,
        bits=wbits,
        tail_hi=tail_at(cutoff),
    )
    return f1.scale(a_val) + f2.scale(b_val) - c_val
