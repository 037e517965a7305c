"""q-calculus primitives on the geometric lattice {q^i}: Pochhammer symbols,
q- and p-binomials, q-derivatives, lattice (Jackson-style) q-integrals, the
q-Leibniz rule, and a summation-by-parts harness.

Convention adopted throughout: the q-integral over [0, q^i] is the bare
lattice sum  sum_{k>=i} q^k f(q^k)  with NO (1-q) prefactor.  Much of the
literature includes that factor (it makes q-integration invert the
q-derivative); dropping it keeps the approximation formulas clean, at the
price of the telescoping identity picking up a 1/(1-q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Literal, Mapping, Optional, Union

from .numeric import (
    BigRat,
    DomainError,
    Enclosure,
    Scalar,
    SupportError,
    enclosure_sum,
)
from .polyring import RatPoly


@dataclass(frozen=True)
class QParam:
    """The base pair (p, q = 1/p) with integer p >= 2; q is held exactly."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2:
            raise DomainError(f"p must be an integer >= 2, got {self.p!r}")

    @property
    def q(self) -> Fraction:
        return Fraction(1, self.p)

    def q_pow(self, i: int) -> Fraction:
        """Exact q**i for any integer i (negative powers are integers)."""
        if i >= 0:
            return Fraction(1, self.p**i)
        return Fraction(self.p ** (-i))


def _pochhammer(a: Fraction, ratio: Fraction, n: int) -> Fraction:
    if n < 0:
        raise DomainError(f"pochhammer length must be >= 0, got {n}")
    out = Fraction(1)
    term = a
    for _ in range(n):
        out *= 1 - term
        if out == 0:
            return out
        term *= ratio
    return out


def q_pochhammer(a: Scalar, qp: QParam, n: int) -> Fraction:
    """(a;q)_n = prod_{j=0}^{n-1} (1 - a q^j); the empty product is 1."""
    return _pochhammer(Fraction(a), qp.q, n)


def p_pochhammer(qp: QParam, n: int) -> Fraction:
    """(p;p)_n = prod_{j=1}^{n} (1 - p^j)."""
    return _pochhammer(Fraction(qp.p), Fraction(qp.p), n)


@lru_cache(maxsize=None)
def _xx_pochhammer(p: int, base: str, j: int) -> Fraction:
    x = Fraction(1, p) if base == "q" else Fraction(p)
    return _pochhammer(x, x, j)


def q_binomial(n: int, k: int, base: Literal["q", "p"], qp: QParam) -> Fraction:
    """Gaussian binomial [n k] in base q or p.

    Out-of-range k (k < 0 or k > n) returns 0 by convention, which is what
    makes the hypergeometric sums below truncate cleanly.
    """
    if base not in ("q", "p"):
        raise DomainError(f"base must be 'q' or 'p', got {base!r}")
    if k < 0 or k > n:
        return Fraction(0)
    p = qp.p
    return _xx_pochhammer(p, base, n) / (
        _xx_pochhammer(p, base, k) * _xx_pochhammer(p, base, n - k)
    )


# ---------------------------------------------------------------------------
# Grid functions on the lattice {q^i}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridFunction:
    """Finite map from lattice exponent i to the exact value f(q^i).

    Reads outside [i_min, i_max] raise unless ``zero_extended`` is set, in
    which case they return 0 (the vanish-beyond-support convention).
    """

    values: Mapping[int, Fraction]
    i_min: int
    i_max: int
    zero_extended: bool = False

    @classmethod
    def sample(
        cls,
        fn: Callable[[Fraction], Fraction],
        qp: QParam,
        i_min: int,
        i_max: int,
        zero_extended: bool = False,
    ) -> "GridFunction":
        if i_min > i_max:
            raise DomainError("empty support")
        vals = {i: Fraction(fn(qp.q_pow(i))) for i in range(i_min, i_max + 1)}
        return cls(values=vals, i_min=i_min, i_max=i_max, zero_extended=zero_extended)

    def at(self, i: int) -> Fraction:
        if self.i_min <= i <= self.i_max:
            return self.values[i]
        if self.zero_extended:
            return Fraction(0)
        raise SupportError(
            f"lattice point q^{i} outside declared support [{self.i_min}, {self.i_max}]"
        )


DerivativeVariant = Literal["q", "p"]


def q_derivative(
    f: Union[GridFunction, RatPoly], qp: QParam, variant: DerivativeVariant = "q"
) -> Union[GridFunction, RatPoly]:
    """Difference quotient (f(x) - f(qx)) / (x(1-q)), or the p-variant.

    For polynomials this is the exact coefficient map
    x^m -> x^(m-1) (1-q^m)/(1-q); for grid functions it is pointwise, and
    the support shrinks by one index on the side the shifted sample needs.
    """
    if variant not in ("q", "p"):
        raise DomainError(f"variant must be 'q' or 'p', got {variant!r}")
    ratio = qp.q if variant == "q" else Fraction(qp.p)
    if isinstance(f, RatPoly):
        cs = f.coefficients
        out = []
        rm = Fraction(1)
        for m in range(1, len(cs)):
            rm *= ratio
            out.append(cs[m] * (1 - rm) / (1 - ratio))
        return RatPoly(out)
    if isinstance(f, GridFunction):
        shift = 1 if variant == "q" else -1
        new_min = f.i_min - min(shift, 0)
        new_max = f.i_max - max(shift, 0)
        if new_min > new_max:
            raise SupportError(
                f"support [{f.i_min}, {f.i_max}] too small for a {variant}-derivative"
            )
        vals = {}
        for i in range(new_min, new_max + 1):
            x = qp.q_pow(i)
            vals[i] = (f.at(i) - f.at(i + shift)) / (x * (1 - ratio))
        return GridFunction(values=vals, i_min=new_min, i_max=new_max)
    raise DomainError(f"unsupported operand type {type(f).__name__}")


def q_integral(
    f: GridFunction,
    qp: QParam,
    *,
    upper: int,
    lower: Optional[int] = None,
    tail: Scalar = 0,
    bits: int = 128,
) -> Union[Fraction, Enclosure]:
    """Lattice q-integral of f from q^lower (or from 0) up to q^upper.

    With integer bounds (upper <= lower) the result is the exact finite sum
    sum_{k=upper}^{lower-1} q^k f(q^k).  With ``lower=None`` the integral runs
    from 0: the sum covers the declared support and the caller must supply a
    ``tail`` majorant for everything below it (0 for a zero-extended grid);
    the result is then an enclosure.
    """
    if lower is not None:
        if upper > lower:
            raise DomainError("empty or reversed range requires upper <= lower")
        total = Fraction(0)
        for k in range(upper, lower):
            total += qp.q_pow(k) * f.at(k)
        return total
    if upper < f.i_min and not f.zero_extended:
        raise SupportError(
            f"integration from 0 starts at q^{upper} but support begins at q^{f.i_min}"
        )
    terms = [qp.q_pow(k) * f.at(k) for k in range(max(upper, f.i_min), f.i_max + 1)]
    t = Fraction(tail)
    return enclosure_sum(lambda i: terms[i], len(terms), bits=bits, tail_lo=-t, tail_hi=t)


def poly_q_integral_01(poly: RatPoly, qp: QParam) -> Fraction:
    """Exact q-integral of a polynomial over [0, 1]:
    sum_m a_m * 1/(1 - q^(m+1))."""
    total = Fraction(0)
    qpow = Fraction(1)
    for c in poly.coefficients:
        qpow *= qp.q
        total += c / (1 - qpow)
    return total


def q_leibniz_check(f: RatPoly, g: RatPoly, n: int, qp: QParam) -> bool:
    """True iff D_q^n(fg) = sum_k [n k]_q D_q^k f(x) * (D_q^(n-k) g)(q^k x)
    holds as an exact polynomial identity."""
    if n < 0:
        raise DomainError("order must be >= 0")
    lhs = f * g
    for _ in range(n):
        lhs = q_derivative(lhs, qp)
    fders = [f]
    gders = [g]
    for _ in range(n):
        fders.append(q_derivative(fders[-1], qp))
        gders.append(q_derivative(gders[-1], qp))
    rhs = RatPoly()
    for k in range(n + 1):
        shifted = gders[n - k].scale_argument(qp.q_pow(k))
        rhs = rhs + q_binomial(n, k, "q", qp) * (fders[k] * shifted)
    return lhs == rhs


def summation_by_parts_check(f: GridFunction, g: GridFunction, qp: QParam) -> bool:
    """Exact check of the lattice analogue of integration by parts:

        sum_k q^k f(q^k) (D_p g)(q^k)  ==  -q sum_k q^k g(q^k) (D_q f)(q^k),

    valid when g(p) = 0 or f(1) = 0 and both sides converge (here: finite
    support makes both sums finite).  The source statement joins the two
    boundary alternatives with a typo ("of"); either one is accepted.
    """
    if not (f.zero_extended and g.zero_extended):
        raise DomainError("summation by parts needs zero-extended grid functions")
    if f.at(0) != 0 and g.at(-1) != 0:
        raise DomainError("boundary condition violated: need g(p) = 0 or f(1) = 0")
    q = qp.q
    p = qp.p
    kmax = max(f.i_max, g.i_max) + 1
    lhs = Fraction(0)
    rhs = Fraction(0)
    for k in range(0, kmax + 1):
        x = qp.q_pow(k)
        dp_g = (g.at(k) - g.at(k - 1)) / (x * (1 - p))
        dq_f = (f.at(k) - f.at(k + 1)) / (x * (1 - q))
        lhs += x * f.at(k) * dp_g
        rhs += x * g.at(k) * dq_f
    return lhs == -q * rhs
