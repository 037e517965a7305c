"""Numeric kernel: exact rationals, p-adic valuations, and rigorous
two-endpoint enclosures built on dyadic floats with directed rounding.

Exact scalars are `fractions.Fraction` (aliased ``BigRat``).  Infinite series
are never accumulated as exact rationals (denominators explode); instead each
term is generated exactly, folded into an :class:`Enclosure` with outward
rounding, and the truncated remainder is covered by a closed-form tail
majorant.  Every enclosure is therefore a mathematically guaranteed two-sided
bound on the real number it describes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Literal, NamedTuple, Optional, Union

BigRat = Fraction
Scalar = Union[Fraction, int]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PrecisionError(ValueError):
    """A precision or enclosure-width requirement is malformed or missed."""


class SupportError(DomainError):
    """A lattice sample outside a grid function's declared support was read."""


class ConsistencyError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class IntegralityError(ArithmeticError):
    """A quantity that must be an exact integer is not one."""


# ---------------------------------------------------------------------------
# Dyadic numbers: value = mant * 2**exp, held as plain int pairs.
# All rounding is directed: ``up=False`` rounds toward -inf, ``up=True``
# toward +inf, so endpoint arithmetic preserves enclosure soundness.
# ---------------------------------------------------------------------------

_ZERO = (0, 0)


class Dyadic(NamedTuple):
    """A dyadic rational mant * 2**exp (public view of an endpoint)."""

    mant: int
    exp: int

    def as_fraction(self) -> Fraction:
        return _to_fraction(self)


def _norm(m: int, e: int) -> tuple[int, int]:
    if m == 0:
        return _ZERO
    tz = (m & -m).bit_length() - 1
    if tz:
        m >>= tz
        e += tz
    return m, e


def _rnd(m: int, e: int, bits: int, up: bool) -> tuple[int, int]:
    """Round mant*2**exp to at most `bits` mantissa bits, directed."""
    if m == 0:
        return _ZERO
    extra = m.bit_length() - bits
    if extra > 0:
        if up:
            m = -((-m) >> extra)
        else:
            m >>= extra
        e += extra
    return _norm(m, e)


def _add(a: tuple[int, int], b: tuple[int, int], bits: int, up: bool) -> tuple[int, int]:
    m1, e1 = a
    m2, e2 = b
    if m1 == 0:
        return _rnd(m2, e2, bits, up)
    if m2 == 0:
        return _rnd(m1, e1, bits, up)
    if e1 >= e2:
        return _rnd((m1 << (e1 - e2)) + m2, e2, bits, up)
    return _rnd(m1 + (m2 << (e2 - e1)), e1, bits, up)


def _neg(a: tuple[int, int]) -> tuple[int, int]:
    return (-a[0], a[1])


def _mul(a: tuple[int, int], b: tuple[int, int], bits: int, up: bool) -> tuple[int, int]:
    return _rnd(a[0] * b[0], a[1] + b[1], bits, up)


def _div_ints(num: int, den: int, e: int, bits: int, up: bool) -> tuple[int, int]:
    """Directed rounding of (num/den) * 2**e to `bits` mantissa bits; den != 0."""
    if num == 0:
        return _ZERO
    shift = bits + 2 - num.bit_length() + den.bit_length()
    if shift < 0:
        shift = 0
    scaled = num << shift
    if up:
        q = -((-scaled) // den)
    else:
        q = scaled // den
    return _rnd(q, e - shift, bits, up)


def _div(a: tuple[int, int], b: tuple[int, int], bits: int, up: bool) -> tuple[int, int]:
    if b[0] == 0:
        raise ZeroDivisionError("dyadic division by zero")
    return _div_ints(a[0], b[0], a[1] - b[1], bits, up)


def _from_frac(num: int, den: int, bits: int, up: bool) -> tuple[int, int]:
    return _div_ints(num, den, 0, bits, up)


def _cmp(a: tuple[int, int], b: tuple[int, int]) -> int:
    m1, e1 = a
    m2, e2 = b
    if m1 == 0:
        return (m2 < 0) - (m2 > 0)
    if m2 == 0:
        return 1 if m1 > 0 else -1
    s1 = 1 if m1 > 0 else -1
    s2 = 1 if m2 > 0 else -1
    if s1 != s2:
        return 1 if s1 > s2 else -1
    # same sign: compare magnitude orders first, then exactly
    h1 = m1.bit_length() + e1
    h2 = m2.bit_length() + e2
    if h1 != h2:
        return s1 if h1 > h2 else -s1
    d = e1 - e2
    if d >= 0:
        c = (m1 << d) - m2
    else:
        c = m1 - (m2 << -d)
    return (c > 0) - (c < 0)


def _to_fraction(a: tuple[int, int]) -> Fraction:
    m, e = a
    if e >= 0:
        return Fraction(m << e, 1)
    return Fraction(m, 1 << -e)


def _cmp_pow10(m: int, e: int, t: int) -> int:
    """Compare |m|*2**e against 10**t exactly (m != 0)."""
    m = abs(m)
    if e >= 0:
        lhs_num, lhs_den = m << e, 1
    else:
        lhs_num, lhs_den = m, 1 << -e
    if t >= 0:
        rhs_num, rhs_den = 10**t, 1
    else:
        rhs_num, rhs_den = 1, 10**-t
    lhs = lhs_num * rhs_den
    rhs = rhs_num * lhs_den
    return (lhs > rhs) - (lhs < rhs)


def _to_decimal(a: tuple[int, int], digits: int, up: bool) -> str:
    """Decimal scientific string, rounded toward -inf (up=False) or +inf."""
    m, e = a
    if m == 0:
        return "0"
    neg = m < 0
    if neg:
        up = not up  # round the magnitude the other way
    am = abs(m)
    # exponent of the leading decimal digit
    e10 = math.floor((am.bit_length() - 1 + e) * math.log10(2))
    while _cmp_pow10(am, e, e10) < 0:
        e10 -= 1
    while _cmp_pow10(am, e, e10 + 1) >= 0:
        e10 += 1
    # integer M = |v| * 10**(digits-1-e10), directed rounding
    s = digits - 1 - e10
    num = am * (10**s if s >= 0 else 1) * (1 << e if e >= 0 else 1)
    den = (10**-s if s < 0 else 1) * (1 << -e if e < 0 else 1)
    if up:
        M = -((-num) // den)
    else:
        M = num // den
    if M >= 10**digits:  # rounding carried into a new digit
        M //= 10
        e10 += 1
    text = str(M).rstrip("0") or "0"
    head, tail = text[0], text[1:]
    body = f"{head}.{tail}" if tail else head
    sign = "-" if neg else ""
    return f"{sign}{body}e{e10:+d}"


def _log2_dyadic(a: tuple[int, int], fbits: int, up: bool) -> Fraction:
    """Directed bound on log2(mant*2**exp) for a positive dyadic.

    Uses the classic squaring loop on a guarded interval so every emitted
    bit is certain; an undecidable bit stops early with the uncertainty
    absorbed into the returned bound.
    """
    m, e = a
    if m <= 0:
        raise DomainError("log2 requires a strictly positive value")
    t = e + m.bit_length() - 1
    r = (m, e - t)  # value / 2**t, in [1, 2)
    if r[0] == 1 and r[1] == 0:
        return Fraction(t)
    guard = fbits + 32
    lo = hi = r
    acc = 0
    done = 0
    two = (1, 1)
    for _ in range(fbits):
        lo = _rnd(lo[0] * lo[0], 2 * lo[1], guard, False)
        hi = _rnd(hi[0] * hi[0], 2 * hi[1], guard, True)
        if _cmp(lo, two) >= 0:
            acc = (acc << 1) | 1
            lo = (lo[0], lo[1] - 1)
            hi = (hi[0], hi[1] - 1)
        elif _cmp(hi, two) < 0:
            acc <<= 1
        else:
            break
        done += 1
    frac_lo = Fraction(acc, 1 << done)
    if up:
        return t + frac_lo + Fraction(1, 1 << done)
    return t + frac_lo


# ---------------------------------------------------------------------------
# Enclosures
# ---------------------------------------------------------------------------


class Enclosure:
    """A closed interval [lo, hi] of dyadic rationals containing a real value.

    All operations round lo toward -inf and hi toward +inf at the working
    mantissa precision ``bits``, so results always contain the exact value.
    """

    __slots__ = ("_lo", "_hi", "bits")

    def __init__(self, lo: Scalar, hi: Scalar, bits: int):
        if bits < 1:
            raise PrecisionError(f"precision_bits must be positive, got {bits}")
        flo, fhi = Fraction(lo), Fraction(hi)
        if flo > fhi:
            raise DomainError("enclosure endpoints out of order")
        self._lo = _from_frac(flo.numerator, flo.denominator, bits, False)
        self._hi = _from_frac(fhi.numerator, fhi.denominator, bits, True)
        self.bits = bits

    @classmethod
    def _raw(cls, lo: tuple[int, int], hi: tuple[int, int], bits: int) -> "Enclosure":
        self = object.__new__(cls)
        self._lo = lo
        self._hi = hi
        self.bits = bits
        return self

    @classmethod
    def from_fraction(cls, value: Scalar, bits: int) -> "Enclosure":
        if bits < 1:
            raise PrecisionError(f"precision_bits must be positive, got {bits}")
        f = Fraction(value)
        return cls._raw(
            _from_frac(f.numerator, f.denominator, bits, False),
            _from_frac(f.numerator, f.denominator, bits, True),
            bits,
        )

    @classmethod
    def zero(cls, bits: int) -> "Enclosure":
        return cls._raw(_ZERO, _ZERO, bits)

    # -- introspection ------------------------------------------------------

    @property
    def lo(self) -> Dyadic:
        return Dyadic(*self._lo)

    @property
    def hi(self) -> Dyadic:
        return Dyadic(*self._hi)

    @property
    def lower(self) -> Fraction:
        """Exact value of the lower endpoint."""
        return _to_fraction(self._lo)

    @property
    def upper(self) -> Fraction:
        """Exact value of the upper endpoint."""
        return _to_fraction(self._hi)

    def width(self) -> Fraction:
        return self.upper - self.lower

    def mid(self) -> Fraction:
        return (self.upper + self.lower) / 2

    def __repr__(self) -> str:
        lo, hi = self.to_decimal(12)
        return f"Enclosure[{lo}, {hi}]({self.bits}b)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Enclosure):
            return NotImplemented
        return self._lo == other._lo and self._hi == other._hi

    def __hash__(self):
        return hash((self._lo, self._hi))

    def to_decimal(self, digits: int = 40) -> tuple[str, str]:
        """Outward-rounded decimal strings for the two endpoints."""
        return _to_decimal(self._lo, digits, False), _to_decimal(self._hi, digits, True)

    def round_to(self, bits: int) -> "Enclosure":
        """Outward re-rounding to a coarser mantissa precision."""
        if bits < 1:
            raise PrecisionError(f"precision_bits must be positive, got {bits}")
        return Enclosure._raw(
            _rnd(*self._lo, bits, False), _rnd(*self._hi, bits, True), bits
        )

    # -- predicates ---------------------------------------------------------

    def contains_zero(self) -> bool:
        return self._lo[0] <= 0 <= self._hi[0]

    def is_positive(self) -> bool:
        return self._lo[0] > 0

    def is_negative(self) -> bool:
        return self._hi[0] < 0

    def contains_fraction(self, value: Scalar) -> bool:
        f = Fraction(value)
        return self.lower <= f <= self.upper

    def contains(self, other: "Enclosure") -> bool:
        return _cmp(self._lo, other._lo) <= 0 and _cmp(other._hi, self._hi) <= 0

    def intersects(self, other: "Enclosure") -> bool:
        return _cmp(self._lo, other._hi) <= 0 and _cmp(other._lo, self._hi) <= 0

    def intersection(self, other: "Enclosure") -> Optional["Enclosure"]:
        lo = self._lo if _cmp(self._lo, other._lo) >= 0 else other._lo
        hi = self._hi if _cmp(self._hi, other._hi) <= 0 else other._hi
        if _cmp(lo, hi) > 0:
            return None
        return Enclosure._raw(lo, hi, min(self.bits, other.bits))

    def hull(self, other: "Enclosure") -> "Enclosure":
        lo = self._lo if _cmp(self._lo, other._lo) <= 0 else other._lo
        hi = self._hi if _cmp(self._hi, other._hi) >= 0 else other._hi
        return Enclosure._raw(lo, hi, min(self.bits, other.bits))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other: Union["Enclosure", Scalar]) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.from_fraction(other, self.bits)

    def __neg__(self) -> "Enclosure":
        return Enclosure._raw(_neg(self._hi), _neg(self._lo), self.bits)

    def __add__(self, other: Union["Enclosure", Scalar]) -> "Enclosure":
        o = self._coerce(other)
        bits = min(self.bits, o.bits)
        return Enclosure._raw(
            _add(self._lo, o._lo, bits, False),
            _add(self._hi, o._hi, bits, True),
            bits,
        )

    __radd__ = __add__

    def __sub__(self, other: Union["Enclosure", Scalar]) -> "Enclosure":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "Enclosure":
        return (-self) + other

    def __mul__(self, other: Union["Enclosure", Scalar]) -> "Enclosure":
        if not isinstance(other, Enclosure):
            return self.scale(other)
        bits = min(self.bits, other.bits)
        cands = []
        for x in (self._lo, self._hi):
            for y in (other._lo, other._hi):
                cands.append((x[0] * y[0], x[1] + y[1]))
        lo = min(cands, key=_MulKey)
        hi = max(cands, key=_MulKey)
        return Enclosure._raw(_rnd(*lo, bits, False), _rnd(*hi, bits, True), bits)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "Enclosure":
        """Multiply by an exact rational (tight: one rounding per endpoint)."""
        f = Fraction(factor)
        if f == 0:
            return Enclosure.zero(self.bits)
        n, d = f.numerator, f.denominator
        a = _div_ints(self._lo[0] * n, d, self._lo[1], self.bits, f < 0)
        b = _div_ints(self._hi[0] * n, d, self._hi[1], self.bits, f > 0)
        if f > 0:
            return Enclosure._raw(a, b, self.bits)
        return Enclosure._raw(b, a, self.bits)

    def __truediv__(self, other: Union["Enclosure", Scalar]) -> "Enclosure":
        if not isinstance(other, Enclosure):
            return self.scale(1 / Fraction(other))
        if other.contains_zero():
            raise DomainError("division by an enclosure containing zero")
        bits = min(self.bits, other.bits)
        los, his = [], []
        for x in (self._lo, self._hi):
            for y in (other._lo, other._hi):
                los.append(_div(x, y, bits, False))
                his.append(_div(x, y, bits, True))
        lo = los[0]
        for c in los[1:]:
            if _cmp(c, lo) < 0:
                lo = c
        hi = his[0]
        for c in his[1:]:
            if _cmp(c, hi) > 0:
                hi = c
        return Enclosure._raw(lo, hi, bits)

    def __abs__(self) -> "Enclosure":
        if self._lo[0] >= 0:
            return self
        if self._hi[0] <= 0:
            return -self
        hi = _neg(self._lo) if _cmp(_neg(self._lo), self._hi) >= 0 else self._hi
        return Enclosure._raw(_ZERO, hi, self.bits)

    def log2(self, fbits: int = 64) -> "Enclosure":
        """Enclosure of the base-2 logarithm (requires a positive interval)."""
        if not self.is_positive():
            raise DomainError("log2 requires a strictly positive enclosure")
        flo = _log2_dyadic(self._lo, fbits, False)
        fhi = _log2_dyadic(self._hi, fbits, True)
        return Enclosure(flo, fhi, max(self.bits, fbits))


class _MulKey:
    """Exact ordering key for dyadic (mant, exp) pairs."""

    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __lt__(self, other):
        return _cmp(self.t, other.t) < 0


# ---------------------------------------------------------------------------
# Tail majorants and rigorous series summation
# ---------------------------------------------------------------------------

TailWeight = Literal[1, "k"]


def geometric_tail_bound(c: Scalar, r: Scalar, n_stop: int, weight: TailWeight = 1) -> Fraction:
    """Exact upper bound on |sum_{k > n_stop} c * w(k) * r**k|.

    ``weight=1`` uses sum_{k>N} r^k = r^(N+1)/(1-r); ``weight="k"`` uses
    sum_{k>N} k r^k = r^(N+1)((N+1)(1-r)+r)/(1-r)^2.  Series with ratio
    q**r (variant q-zeta sums) are covered by passing that ratio directly.
    """
    c = Fraction(c)
    r = Fraction(r)
    if not 0 < r < 1:
        raise DomainError(f"geometric ratio must lie in (0,1), got {r}")
    if n_stop < 0:
        raise DomainError("tail index must be >= 0")
    if c == 0:
        return Fraction(0)
    head = abs(c) * r ** (n_stop + 1)
    if weight == 1:
        return head / (1 - r)
    if weight == "k":
        return head * ((n_stop + 1) * (1 - r) + r) / (1 - r) ** 2
    raise DomainError(f"unsupported tail weight {weight!r}")


def enclosure_sum(
    term: Callable[[int], Fraction],
    count: int,
    *,
    bits: int,
    start: int = 0,
    tail_lo: Scalar = 0,
    tail_hi: Scalar = 0,
) -> Enclosure:
    """Sum `count` exact terms and widen by bounds on the omitted remainder.

    The remainder of the series must lie in [tail_lo, tail_hi]; for a
    positive-term series pass ``tail_lo=0`` so the enclosure stays one-sided.
    """
    if bits < 1:
        raise PrecisionError(f"precision_bits must be positive, got {bits}")
    work = bits + 32
    lo = hi = _ZERO
    for i in range(start, start + count):
        t = Fraction(term(i))
        lo = _add(lo, _from_frac(t.numerator, t.denominator, work, False), work, False)
        hi = _add(hi, _from_frac(t.numerator, t.denominator, work, True), work, True)
    tl, th = Fraction(tail_lo), Fraction(tail_hi)
    if tl > th:
        raise DomainError("tail_lo exceeds tail_hi")
    lo = _add(lo, _from_frac(tl.numerator, tl.denominator, work, False), work, False)
    hi = _add(hi, _from_frac(th.numerator, th.denominator, work, True), work, True)
    return Enclosure._raw(_rnd(*lo, bits, False), _rnd(*hi, bits, True), bits)


def smallest_tail_index(
    tail_at: Callable[[int], Fraction], target: Fraction, guess: int = 8
) -> int:
    """Smallest N with tail_at(N) < target, for a nonincreasing tail bound."""
    if target <= 0:
        raise DomainError("tail target must be positive")
    n = max(guess, 1)
    while tail_at(n) >= target:
        n *= 2
        if n > 1 << 40:
            raise PrecisionError("tail bound does not reach the requested target")
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_at(mid) < target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def default_precision(n: int, p: int) -> int:
    """Default working precision for index n at base p.

    Sized to cover the integer sequences' growth plus the error's quadratic
    decay, with guard bits; override via the CLI ``--bits`` flag.
    """
    return math.ceil(1.9 * n * n * math.log2(p)) + 64


# ---------------------------------------------------------------------------
# p-adic valuations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Valuation:
    """Exponent of `base` in a rational; value None encodes +infinity (x=0).

    Additivity val(xy) = val(x) + val(y) holds whenever base is prime; for
    composite bases the value is still well defined (numerator multiplicity
    minus denominator multiplicity) but only subadditive.
    """

    base: int
    value: Optional[int]

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: "Valuation") -> "Valuation":
        if self.base != other.base:
            raise DomainError("cannot add valuations with different bases")
        if self.value is None or other.value is None:
            return Valuation(self.base, None)
        return Valuation(self.base, self.value + other.value)

    def at_least(self, bound: int) -> bool:
        return self.value is None or self.value >= bound


def _multiplicity(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def p_adic_valuation(x: Scalar, p: int) -> Valuation:
    """Largest e with p**e dividing x exactly (negative when p divides the
    denominator); +infinity for x = 0."""
    if p < 2:
        raise DomainError(f"valuation base must be >= 2, got {p}")
    f = Fraction(x)
    if f == 0:
        return Valuation(p, None)
    return Valuation(p, _multiplicity(abs(f.numerator), p) - _multiplicity(f.denominator, p))


def fraction_to_decimal(value: Scalar, digits: int = 12) -> str:
    """Deterministic decimal string of an exact rational (round toward zero)."""
    f = Fraction(value)
    if f == 0:
        return "0"
    t = _from_frac(f.numerator, f.denominator, digits * 4 + 16, f < 0)
    return _to_decimal(t, digits, f < 0)
