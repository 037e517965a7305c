"""Rigorous enclosures of the q-zeta values and everything error-related:
the error sequence |b_n zeta_q(2) - a_n| computed by independent routes
(definition, lattice series, double lattice integral), its exact upper
bound, and the per-n exponent table with the limiting reference constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .cyclotomic import d_n_value
from .hermite_pade import ApproximantRecord, approximant
from .numeric import (
    ConsistencyError,
    DomainError,
    Enclosure,
    default_precision,
    enclosure_sum,
    fraction_to_decimal,
    geometric_tail_bound,
    smallest_tail_index,
)
from .qcalc import QParam, q_pochhammer
from .qjacobi import abs_coefficient_sum, little_qlegendre

# Reference constants for the asymptotic exponents, held as exact rationals
# accurate far beyond every tolerance used against them.
_PI = Fraction("3.141592653589793238462643383279502884197")
_PI2 = _PI * _PI

REFERENCE_CONSTANTS: dict[str, Fraction] = {
    # limit of log_p d_n(p) / n^2
    "cyclotomic_growth": 3 / _PI2,
    # limit of log_p e_n / n^2
    "clearing_factor_growth": 6 / _PI2 + Fraction(1, 4),
    # limit of log_p b_n / n^2
    "denominator_growth": 6 / _PI2 + Fraction(5, 4),
    # limiting bound on log_p |b_n zeta - a_n| / n^2  (~ -0.64208)
    "error_decay": 6 / _PI2 - Fraction(5, 4),
    # limit of log_{b_n} |b_n zeta - a_n|  (~ -0.34558)
    "error_decay_vs_b": -(5 * _PI2 - 24) / (5 * _PI2 + 24),
    # resulting irrationality-measure upper bound (~ 3.8936)
    "irrationality_measure_bound": 10 * _PI2 / (5 * _PI2 - 24),
    # previously published upper bound, reported for comparison only
    "previous_measure_bound": Fraction("4.07869374"),
}


@dataclass(frozen=True)
class ErrorRecord:
    """Error data for index n: the enclosure of |b_n zeta_q(2) - a_n| (the
    intersection of two independently computed routes), the exact upper
    bound, and the derived exponent enclosures (None at n = 0)."""

    n: int
    qp: QParam
    err: Enclosure
    bound: Fraction
    log_p_err_over_n2: Optional[Enclosure]
    log_bn_err: Optional[Enclosure]


@lru_cache(maxsize=None)
def _zeta_q_cached(s: int, p: int, bits: int) -> Enclosure:
    qp = QParam(p)
    q = qp.q
    weight = 1 if s == 1 else "k"

    def tail_at(k: int) -> Fraction:
        return geometric_tail_bound(1 / (1 - q), q, k, weight)

    target = Fraction(1, 2 ** (bits + 8))
    guess = int((bits + 16) / math.log2(p)) + 8
    cutoff = smallest_tail_index(tail_at, target, guess=guess)
    denoms = []
    pk = 1
    for _ in range(cutoff + 1):
        pk *= p
        denoms.append(pk - 1)

    def term(k: int) -> Fraction:
        return Fraction(k ** (s - 1), denoms[k - 1])

    return enclosure_sum(term, cutoff, start=1, bits=bits, tail_hi=tail_at(cutoff))


def zeta_q(s: int, qp: QParam, bits: int) -> Enclosure:
    """Enclosure of sum_{k>=1} k^(s-1) q^k / (1 - q^k) for s in {1, 2},
    with width below 2^-(bits-8)."""
    if s not in (1, 2):
        raise DomainError(f"only depths 1 and 2 are supported, got {s}")
    return _zeta_q_cached(s, qp.p, bits)


def zeta_q_r_variant(r: int, qp: QParam, bits: int) -> Enclosure:
    """Enclosure of sum_{k>=1} k q^(rk) / (1 - q^k); r = 1 is zeta_q(2)."""
    if r < 1:
        raise DomainError(f"variant index must be >= 1, got {r}")
    if r == 1:
        return zeta_q(2, qp, bits)
    p = qp.p
    q = qp.q
    ratio = qp.q_pow(r)

    def tail_at(k: int) -> Fraction:
        return geometric_tail_bound(1 / (1 - q), ratio, k, "k")

    target = Fraction(1, 2 ** (bits + 8))
    guess = int((bits + 16) / (r * math.log2(p))) + 8
    cutoff = smallest_tail_index(tail_at, target, guess=guess)

    def term(k: int) -> Fraction:
        return Fraction(k, p ** ((r - 1) * k) * (p**k - 1))

    return enclosure_sum(term, cutoff, start=1, bits=bits, tail_hi=tail_at(cutoff))


def variant_shift_defect(r: int, qp: QParam) -> Fraction:
    """Exact rational difference zeta_q(2) - variant(r):
    sum_{i=1}^{r-1} q^i / (1 - q^i)^2."""
    if r < 1:
        raise DomainError(f"variant index must be >= 1, got {r}")
    q = qp.q
    return sum((q**i / (1 - q**i) ** 2 for i in range(1, r)), Fraction(0))


def error_upper_bound(n: int, qp: QParam) -> Fraction:
    """Exact rational upper bound on |b_n zeta_q(2) - a_n|:

        e_n (q;q)_n^2 q^(n+1) q^(3n(n+1)/2) / ((1-q)^2 (q^(n+1);q)_(n+1)),

    obtained by bounding the double lattice integral by its value at the
    corner x = y = 1 (the denominator product is minimal there and the
    weight (qx;q)_n x^n is maximal, using q <= 1/2)."""
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    rec = approximant(n, qp)
    q = qp.q
    poch = q_pochhammer(q, qp, n)
    return (
        rec.e
        * poch
        * poch
        * qp.q_pow(n + 1)
        * qp.q_pow(3 * n * (n + 1) // 2)
        / ((1 - q) ** 2 * q_pochhammer(qp.q_pow(n + 1), qp, n + 1))
    )


def _lattice_height(n: int, qp: QParam) -> Fraction:
    """Rigorous bound on max_{m>=0} |P_n(q^m; 1,1 | q)|.

    The polynomial's constant term is 1 and the other coefficients sum to at
    most M in absolute value, so |P_n(q^m)| <= 1 + M q^m <= 2 once
    q^m <= 1/M; the finitely many earlier lattice points are enclosed
    directly at low precision and their upper endpoints taken.
    """
    poly = little_qlegendre(n, qp)
    height = abs_coefficient_sum(poly)
    if height <= 2:
        return Fraction(2)
    m_switch = math.ceil(math.log2(float(height)) / math.log2(qp.p)) + 1
    best = Fraction(2)
    val = Enclosure.from_fraction(1, 128)
    q = qp.q
    for m in range(m_switch + 1):
        x = q**m
        enc = Enclosure.zero(128)
        for c in reversed(poly.coefficients):
            enc = enc.scale(x) + c
        cand = abs(enc).upper
        if cand > best:
            best = cand
    return best


def error_series_enclosure(record: ApproximantRecord, bits: int) -> Enclosure:
    """Route 2: the signed error e_n * sum_{k>=1} F_n(q^k)/(p^(n+k) - 1),
    which is the lattice series for b_n zeta_q(2) - a_n.

    F_n(q^k) is produced by the same n+1 geometric accumulators as the exact
    prefix routine, but in endpoint interval arithmetic at an elevated
    working precision: the accumulators stay of size ~k but carry weights up
    to ~p^(n^2/2), so about n^2 log2(p)/2 bits cancel in the final dot
    product and must be carried as extra guard digits.

    Tail majorant: |(q^(l+1);q)_n| <= 1 and |P_n(q^m;1,1|q)| <= C on the
    lattice (C from _lattice_height), so |F_n(q^k)| <= k C and

        |sum_{k>K}| <= C sum_{k>K} k/(p^(n+k)-1)
                    <= (C q^n/(1-q)) sum_{k>K} k q^k,

    a weighted geometric tail in closed form.
    """
    from .numeric import _add, _div_ints, _rnd  # raw endpoint kernels

    n = record.n
    qp = record.qp
    p = qp.p
    q = qp.q
    log2p = math.log2(p)
    wbits = bits + math.ceil(n * n * log2p / 2) + 96
    coeffs = little_qlegendre(n, qp).coefficients
    coeffs = tuple(coeffs) + (Fraction(0),) * (n + 1 - len(coeffs))
    height = _lattice_height(n, qp)

    def tail_at(k: int) -> Fraction:
        return geometric_tail_bound(height * qp.q_pow(n) / (1 - q), q, k, "k")

    target = Fraction(1, 2 ** (math.ceil((1.55 * n * n + n) * log2p) + 96))
    cutoff = smallest_tail_index(tail_at, target, guess=2 * n * n + 64)

    # Hot loop on raw (mant, exp) endpoint pairs; all scalars positive except
    # the polynomial coefficients, whose signs steer endpoint selection.
    ppow = [p**i for i in range(n + 1)]
    cnum = [c.numerator for c in coeffs]
    cden = [c.denominator for c in coeffs]
    zero = (0, 0)
    z_lo = [zero] * (n + 1)
    z_hi = [zero] * (n + 1)
    w0 = q_pochhammer(q, qp, n)
    w_lo = _div_ints(w0.numerator, w0.denominator, 0, wbits, False)
    w_hi = _div_ints(w0.numerator, w0.denominator, 0, wbits, True)
    acc_lo = acc_hi = zero
    pn = p**n
    pk = 1
    pnk = pn
    for k in range(1, cutoff + 1):
        f_lo = f_hi = zero
        for i in range(n + 1):
            pi = ppow[i]
            zl = _div_ints(z_lo[i][0], pi, z_lo[i][1], wbits, False)
            zh = _div_ints(z_hi[i][0], pi, z_hi[i][1], wbits, True)
            zl = _add(zl, w_lo, wbits, False)
            zh = _add(zh, w_hi, wbits, True)
            z_lo[i] = zl
            z_hi[i] = zh
            ci = cnum[i]
            if ci > 0:
                f_lo = _add(f_lo, _div_ints(zl[0] * ci, cden[i], zl[1], wbits, False), wbits, False)
                f_hi = _add(f_hi, _div_ints(zh[0] * ci, cden[i], zh[1], wbits, True), wbits, True)
            elif ci < 0:
                f_lo = _add(f_lo, _div_ints(zh[0] * ci, cden[i], zh[1], wbits, False), wbits, False)
                f_hi = _add(f_hi, _div_ints(zl[0] * ci, cden[i], zl[1], wbits, True), wbits, True)
        pnk *= p
        d = pnk - 1
        acc_lo = _add(acc_lo, _div_ints(f_lo[0], d, f_lo[1], wbits, False), wbits, False)
        acc_hi = _add(acc_hi, _div_ints(f_hi[0], d, f_hi[1], wbits, True), wbits, True)
        pk *= p
        rnum = pk * pn - 1
        rden = pn * (pk - 1)
        w_lo = _div_ints(w_lo[0] * rnum, rden, w_lo[1], wbits, False)
        w_hi = _div_ints(w_hi[0] * rnum, rden, w_hi[1], wbits, True)
    t = tail_at(cutoff)
    acc = Enclosure._raw(acc_lo, acc_hi, wbits) + Enclosure(-t, t, wbits)
    return acc.scale(record.e).round_to(bits)


def definition_error_enclosure(record: ApproximantRecord, bits: int) -> Enclosure:
    """Route 1: |b * zeta_q(2) - a| straight from the definition."""
    z2 = zeta_q(2, record.qp, bits)
    return abs(z2.scale(record.b) - record.a)


def error_term(record: ApproximantRecord, bits: Optional[int] = None) -> ErrorRecord:
    """Error enclosure for one approximant, computed by both the definition
    route and the lattice-series route; the stored value is their
    intersection and disjoint routes abort."""
    n = record.n
    qp = record.qp
    if bits is None:
        bits = default_precision(n, qp.p)
    route1 = definition_error_enclosure(record, bits)
    route2 = abs(error_series_enclosure(record, bits))
    err = route1.intersection(route2)
    if err is None:
        raise ConsistencyError(
            f"definition and series error enclosures are disjoint at n={n}, "
            f"p={qp.p}: {route1} vs {route2}"
        )
    bound = error_upper_bound(n, qp)
    log_p_err = None
    log_bn_err = None
    if n >= 1 and err.is_positive() and record.b > 1:
        log2p = Enclosure.from_fraction(qp.p, bits).log2()
        log2err = err.log2()
        log_p_err = (log2err / log2p).scale(Fraction(1, n * n))
        log2b = Enclosure.from_fraction(record.b, max(bits, record.b.bit_length() + 8)).log2()
        log_bn_err = log2err / log2b
    return ErrorRecord(
        n=n,
        qp=qp,
        err=err,
        bound=bound,
        log_p_err_over_n2=log_p_err,
        log_bn_err=log_bn_err,
    )


def double_integral_enclosure(n: int, qp: QParam, bits: int) -> tuple[Enclosure, bool]:
    """Route 3: e_n q^(n+1) * the double lattice sum of

        (qx;q)_n x^n (qy;q)_n y^n / prod_{j=0}^n (p^(n+j) - q x y)

    over x = q^k, y = q^l, organised as a Cauchy convolution since the
    denominator depends only on k+l.  Also reports strict positivity of the
    integrand at every sampled lattice point (all factors positive), which
    is what forbids the error from vanishing.
    """
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    p = qp.p
    q = qp.q
    log2p = math.log2(p)
    wbits = bits + 64
    gmax_den = Fraction(1)
    for j in range(n + 1):
        gmax_den *= p ** (n + j) - q
    gmax = 1 / gmax_den

    def tail_at(k: int) -> Fraction:
        return 2 * gmax * q ** (k + 1) / (1 - q) ** 2

    target = Fraction(1, 2 ** (math.ceil((1.5 * n * n + n) * log2p) + 96))
    cutoff = smallest_tail_index(tail_at, target, guess=2 * n * n + 64)

    # a_k = (q^(k+1);q)_n q^(kn), exact and strictly positive
    a_exact = [q_pochhammer(q, qp, n)]
    pk = 1
    pn = p**n
    for k in range(1, cutoff + 1):
        pk *= p
        a_exact.append(a_exact[-1] * Fraction(pk * pn - 1, pn * (pk - 1)) / pn)
    positive = all(a > 0 for a in a_exact)
    a_enc = [Enclosure.from_fraction(a, wbits) for a in a_exact]

    acc = Enclosure.zero(wbits)
    qs = Fraction(1)
    denom = Fraction(1)
    for j in range(n + 1):
        denom *= p ** (n + j) - q
    for s in range(0, 2 * cutoff + 1):
        if s > 0:
            qs *= q
            # advance prod_j (p^(n+j) - q^(s+1)) from the s-1 version
            denom = Fraction(1)
            for j in range(n + 1):
                denom *= p ** (n + j) - q ** (s + 1)
        if denom <= 0:
            positive = False
        conv = Enclosure.zero(wbits)
        for k in range(max(0, s - cutoff), min(s, cutoff) + 1):
            conv = conv + a_enc[k] * a_enc[s - k]
        acc = acc + conv.scale(qs / denom)
    acc = acc + Enclosure(0, tail_at(cutoff), wbits)
    e_n = approximant(n, qp).e
    return acc.scale(Fraction(e_n) * qp.q_pow(n + 1)), positive


def double_integral_check(n: int, qp: QParam, bits: Optional[int] = None) -> bool:
    """True iff the double-sum enclosure meets the stored error enclosure
    and the integrand was strictly positive at all sampled lattice points."""
    if bits is None:
        bits = default_precision(n, qp.p)
    record = error_term(approximant(n, qp), bits)
    enc, positive = double_integral_enclosure(n, qp, bits)
    return positive and enc.intersects(record.err)


@dataclass(frozen=True)
class AsymptoticsRow:
    n: int
    log_p_dn_over_n2: Enclosure
    log_p_en_over_n2: Enclosure
    log_p_bn_over_n2: Enclosure
    log_p_err_over_n2: Optional[Enclosure]
    log_bn_err: Optional[Enclosure]


@dataclass(frozen=True)
class AsymptoticsReport:
    qp: QParam
    rows: tuple[AsymptoticsRow, ...]
    references: dict[str, Fraction]


def error_sweep(qp: QParam, n_max: int, bits: Optional[int] = None) -> list[ErrorRecord]:
    """Error records for n = 0..n_max (per-n default precision unless fixed)."""
    return [error_term(approximant(n, qp), bits) for n in range(n_max + 1)]


def asymptotics_report(qp: QParam, n_max: int, bits: Optional[int] = None) -> AsymptoticsReport:
    """Per-n exponent enclosures with the limiting constants attached."""
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    p = qp.p
    log2p = Enclosure.from_fraction(p, 128).log2()
    rows = []
    for n in range(1, n_max + 1):
        rec = approximant(n, qp)
        erec = error_term(rec, bits)
        scale = Fraction(1, n * n)
        dn = d_n_value(n, p)
        row = AsymptoticsRow(
            n=n,
            log_p_dn_over_n2=(
                Enclosure.from_fraction(dn, 128).log2() / log2p
            ).scale(scale),
            log_p_en_over_n2=(
                Enclosure.from_fraction(rec.e, 128).log2() / log2p
            ).scale(scale),
            log_p_bn_over_n2=(
                Enclosure.from_fraction(rec.b, 128).log2() / log2p
            ).scale(scale),
            log_p_err_over_n2=erec.log_p_err_over_n2,
            log_bn_err=erec.log_bn_err,
        )
        rows.append(row)
    return AsymptoticsReport(qp=qp, rows=tuple(rows), references=dict(REFERENCE_CONSTANTS))
