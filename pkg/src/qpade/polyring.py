"""Dense univariate polynomials and rational functions over exact rationals,
plus the double-pole partial-fraction decomposition used by the residue
bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .numeric import BigRat, ConsistencyError, DomainError, Scalar

NEG_INFINITY = float("-inf")


class RatPoly:
    """Immutable dense polynomial over Fraction, constant term first.

    The zero polynomial has degree -inf (sentinel); trailing zero
    coefficients are stripped on construction, so equality is structural.
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        self._c = tuple(cs)

    @classmethod
    def monomial(cls, power: int, coeff: Scalar = 1) -> "RatPoly":
        if power < 0:
            raise DomainError("monomial power must be >= 0")
        return cls([0] * power + [coeff])

    zero_poly = None  # set after class body
    one = None

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> Union[int, float]:
        return len(self._c) - 1 if self._c else NEG_INFINITY

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self._c):
            return self._c[i]
        return Fraction(0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self) -> str:
        if not self._c:
            return "RatPoly(0)"
        parts = [f"{c}*x^{i}" for i, c in enumerate(self._c) if c != 0]
        return "RatPoly(" + " + ".join(parts) + ")"

    def __neg__(self) -> "RatPoly":
        return RatPoly([-c for c in self._c])

    def __add__(self, other: Union["RatPoly", Scalar]) -> "RatPoly":
        if not isinstance(other, RatPoly):
            other = RatPoly([other])
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    __radd__ = __add__

    def __sub__(self, other: Union["RatPoly", Scalar]) -> "RatPoly":
        if not isinstance(other, RatPoly):
            other = RatPoly([other])
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "RatPoly":
        return (-self) + other

    def __mul__(self, other: Union["RatPoly", Scalar]) -> "RatPoly":
        if not isinstance(other, RatPoly):
            return self.scale(other)
        a, b = self._c, other._c
        if not a or not b:
            return RatPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return RatPoly(out)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "RatPoly":
        f = Fraction(factor)
        if f == 0:
            return RatPoly()
        return RatPoly([c * f for c in self._c])

    def scale_argument(self, factor: Scalar) -> "RatPoly":
        """Compose with the monomial factor*x: p(x) -> p(factor*x)."""
        f = Fraction(factor)
        out = []
        power = Fraction(1)
        for c in self._c:
            out.append(c * power)
            power *= f
        return RatPoly(out)

    def evaluate(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        fx = Fraction(x)
        for c in reversed(self._c):
            acc = acc * fx + c
        return acc

    def derivative(self) -> "RatPoly":
        return RatPoly([i * c for i, c in enumerate(self._c)][1:])


RatPoly.zero_poly = RatPoly()
RatPoly.one = RatPoly([1])


def poly_divmod(num: RatPoly, den: RatPoly) -> tuple[RatPoly, RatPoly]:
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num.coefficients)
    dc = den.coefficients
    dn = len(dc)
    lead = dc[-1]
    if len(rem) < dn:
        return RatPoly(), num
    quot = [Fraction(0)] * (len(rem) - dn + 1)
    for i in range(len(rem) - dn, -1, -1):
        c = rem[i + dn - 1] / lead
        if c == 0:
            continue
        quot[i] = c
        for j, d in enumerate(dc):
            rem[i + j] -= c * d
    return RatPoly(quot), RatPoly(rem)


def poly_exact_div(num: RatPoly, den: RatPoly) -> RatPoly:
    q, r = poly_divmod(num, den)
    if not r.is_zero():
        raise ConsistencyError("polynomial division left a nonzero remainder")
    return q


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd over the rationals (Euclid with monic normalisation)."""
    while not b.is_zero():
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a.is_zero():
        return a
    return a.scale(1 / a.coefficients[-1])


class RatFunc:
    """Reduced rational function num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: RatPoly, den: RatPoly):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        g = poly_gcd(num, den)
        if not g.is_zero() and g.degree > 0:
            num = poly_exact_div(num, g)
            den = poly_exact_div(den, g)
        lead = den.coefficients[-1]
        self.num = num.scale(1 / lead)
        self.den = den.scale(1 / lead)

    def evaluate(self, x: Scalar) -> Fraction:
        d = self.den.evaluate(x)
        if d == 0:
            raise DomainError(f"evaluation at a pole: x = {x}")
        return self.num.evaluate(x) / d

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r} / {self.den!r})"


@dataclass(frozen=True)
class PartialFractionDecomposition:
    """Coefficients of R(T) = sum_j [d1[j]/(1-q^j T) + d2[j]/(1-q^j T)^2].

    Index j runs 1..n+1; lists are 0-based (entry 0 corresponds to j=1).
    """

    n: int
    p: int
    d1: tuple[Fraction, ...]
    d2: tuple[Fraction, ...]


def partial_fractions_double_poles(r: RatFunc, qp, n: int) -> PartialFractionDecomposition:
    """Decompose a proper rational function whose poles are exactly the
    double points T = p**j for j = 1..n+1.

    Coefficients come from directed derivatives at each pole, evaluated on
    the factored denominator (log-derivative of the linear factors), so no
    high-degree expansion is differentiated.  The decomposition is re-summed
    and compared with the input exactly; a mismatch aborts.
    """
    p = qp.p
    q = qp.q
    # Structured denominator D(T) = prod_{j=1}^{n+1} (1 - q^j T)^2.
    factors = [RatPoly([1, -(q**j)]) for j in range(1, n + 2)]
    dpoly = RatPoly.one
    for f in factors:
        dpoly = dpoly * f * f
    lead = dpoly.coefficients[-1]
    monic_d = dpoly.scale(1 / lead)
    if r.den != monic_d:
        raise DomainError("denominator does not have the expected double poles at T = p^j")
    npoly = r.num.scale(lead)  # now r = npoly / dpoly exactly

    nprime = npoly.derivative()
    d1: list[Fraction] = []
    d2: list[Fraction] = []
    for j in range(1, n + 2):
        pj = Fraction(p) ** j
        dval = Fraction(1)
        dlog = Fraction(0)  # D_j'(p^j) / D_j(p^j)
        for m in range(1, n + 2):
            if m == j:
                continue
            fm = 1 - Fraction(p) ** (j - m)  # (1 - q^m T) at T = p^j
            dval *= fm * fm
            dlog += -2 * q**m / fm
        nj = npoly.evaluate(pj)
        d2.append(nj / dval)
        d1.append(-pj * (nprime.evaluate(pj) - nj * dlog) / dval)

    # Exact reconstruction over the common denominator:
    #   sum_j (d1[j](1 - q^j T) + d2[j]) * D(T)/(1 - q^j T)^2 == N(T).
    acc = RatPoly()
    for j in range(1, n + 2):
        f = factors[j - 1]
        cofactor = poly_exact_div(dpoly, f * f)
        acc = acc + (f.scale(d1[j - 1]) + d2[j - 1]) * cofactor
    if acc != npoly:
        raise ConsistencyError(
            f"partial-fraction reconstruction mismatch at n={n}, p={p}"
        )
    return PartialFractionDecomposition(n=n, p=p, d1=tuple(d1), d2=tuple(d2))
