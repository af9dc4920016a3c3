"""Exact rational coefficient arithmetic.

Coefficients throughout the symbolic layer are exact rationals with
arbitrary-precision integer parts.  gmpy2's mpq is used when available
(large speedup on gcd-heavy workloads), with fractions.Fraction as a
drop-in fallback.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

try:
    from gmpy2 import mpq as QQ  # type: ignore

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    QQ = Fraction
    HAVE_GMPY2 = False

QQ_ZERO = QQ(0)
QQ_ONE = QQ(1)


def qq(p, q=1):
    """Exact rational p/q from ints, strings, Fractions, or another QQ."""
    if isinstance(p, float) or isinstance(q, float):
        raise TypeError("floating-point input is not allowed in exact coefficients")
    return QQ(p, q) if q != 1 else QQ(p)


def qq_is_integer(c) -> bool:
    return c.denominator == 1


def qq_floor(c) -> int:
    """Floor of an exact rational, as a Python int."""
    return c.numerator // c.denominator


def qq_to_str(c) -> str:
    """Serialize as "p" or "p/q" decimal strings."""
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def qq_from_str(s: str):
    if "/" in s:
        p, q = s.split("/")
        return QQ(int(p), int(q))
    return QQ(int(s))


def qq_binomial_int(a: int, k: int):
    """binom(a, k) for integer a (possibly negative), exact."""
    if k < 0:
        return QQ_ZERO
    if a >= 0:
        return QQ(comb(a, k)) if a >= k else (QQ(comb(a, k)) if k <= a else QQ_ZERO)
    # negative upper index: binom(a,k) = (-1)^k binom(k-a-1, k)
    return QQ((-1) ** k * comb(k - a - 1, k))


def qq_factorial(n: int):
    return QQ(factorial(n))
