"""Cyclotomic polynomials over the integers, the running product
d_n(x) = prod_{d<=n} Phi_d(x), and the denominator-clearing factor
e_n = p^floor(n^2/4) * d_n(p)^2.

Phi_d is computed by exact integer polynomial division
Phi_d(x) = (x^d - 1) / prod_{e|d, e<d} Phi_e(x), never through floating
roots of unity.  Values are cached per d; the cache is a deterministic memo
table, so concurrent builds can only race to store identical entries.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

from .numeric import DomainError


class IntPoly:
    """Immutable dense polynomial with integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Sequence[int] = ()):
        cs = [int(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        self._c = tuple(cs)

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self) -> str:
        return f"IntPoly({list(self._c)})"

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        a, b = self._c, other._c
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPoly(out)

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def exact_div(self, den: "IntPoly") -> "IntPoly":
        """Exact division by a monic divisor; raises if it does not divide."""
        dc = den._c
        if not dc or dc[-1] != 1:
            raise DomainError("exact_div requires a monic divisor")
        rem = list(self._c)
        if len(rem) < len(dc):
            raise DomainError("division of a lower-degree polynomial")
        quot = [0] * (len(rem) - len(dc) + 1)
        for i in range(len(rem) - len(dc), -1, -1):
            c = rem[i + len(dc) - 1]
            quot[i] = c
            if c:
                for j, d in enumerate(dc):
                    rem[i + j] -= c * d
        if any(rem):
            raise DomainError("divisor does not divide exactly")
        return IntPoly(quot)


def x_power_minus_one(m: int) -> IntPoly:
    return IntPoly([-1] + [0] * (m - 1) + [1])


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> IntPoly:
    """The d-th cyclotomic polynomial Phi_d, exactly over the integers."""
    if d < 1:
        raise DomainError(f"cyclotomic index must be >= 1, got {d}")
    poly = x_power_minus_one(d)
    for e in range(1, d):
        if d % e == 0:
            poly = poly.exact_div(cyclotomic_poly(e))
    return poly


@lru_cache(maxsize=None)
def d_n_value(n: int, p: int) -> int:
    """d_n(p) = prod_{d=1}^{n} Phi_d(p), cross-checked against
    lcm{p^j - 1 : 1 <= j <= n}."""
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    if p < 2:
        raise DomainError(f"base must be >= 2, got {p}")
    product = 1
    for d in range(1, n + 1):
        product *= cyclotomic_poly(d).evaluate(p)
    lcm = 1
    for j in range(1, n + 1):
        lcm = math.lcm(lcm, p**j - 1)
    if product != lcm:
        raise ArithmeticError(f"cyclotomic product disagrees with lcm at n={n}, p={p}")
    return product


def clearing_factor_e(n: int, p: int) -> int:
    """e_n = p^floor(n^2/4) * d_n(p)^2, the integer that clears the
    approximants' denominators."""
    if n < 0:
        raise DomainError(f"index must be >= 0, got {n}")
    d = d_n_value(n, p)
    return p ** (n * n // 4) * d * d
