"""Quotients of MultiPoly with canonical reduced form.

Invariants: gcd(num, den) = 1 and den has graded-lex leading coefficient 1.
Zero is 0/1.  Denominators keep their factored form when the inputs carried
one, so reduction stays cheap along the residue pipeline.
"""

from __future__ import annotations

from .coeffs import QQ_ONE, qq
from .poly import MultiPoly, PolynomialError, poly_gcd
from .symbols import VarTable


class RationalFn:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly, _canonical: bool = False):
        if den.is_zero():
            raise PolynomialError("zero denominator")
        if not _canonical:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFn":
        return cls(p, MultiPoly.const(p.table, 1), _canonical=True)

    @classmethod
    def const(cls, table: VarTable, c) -> "RationalFn":
        return cls.from_poly(MultiPoly.const(table, c))

    @classmethod
    def one(cls, table: VarTable) -> "RationalFn":
        return cls.const(table, 1)

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_constant() and self.num.is_constant() and (
            not self.num.is_zero() and self.num.constant_value() == self.den.constant_value()
        )

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalFn)
            and self.num == other.num
            and self.den == other.den
        )

    __hash__ = None

    def __repr__(self):
        from .printing import rational_str

        return f"RationalFn({rational_str(self)})"

    @property
    def table(self) -> VarTable:
        return self.num.table

    # -- arithmetic -----------------------------------------------------------

    def add(self, other: "RationalFn") -> "RationalFn":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b = self.num, self.den
        c, d = other.num, other.den
        if b.terms == d.terms:
            return RationalFn(a.add(c), b)
        g = poly_gcd(b, d)
        if g.is_constant():
            return RationalFn(a.mul(d).add(c.mul(b)), b.mul(d))
        b1 = b.exact_div(g)
        d1 = d.exact_div(g)
        t = a.mul(d1).add(c.mul(b1))
        return RationalFn(t, b.mul(d1))

    def sub(self, other: "RationalFn") -> "RationalFn":
        return self.add(other.neg())

    def neg(self) -> "RationalFn":
        return RationalFn(self.num.neg(), self.den, _canonical=True)

    def mul(self, other: "RationalFn") -> "RationalFn":
        if self.is_zero() or other.is_zero():
            return RationalFn.from_poly(MultiPoly.zero(self.table))
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        a = self.num if g1.is_constant() else self.num.exact_div(g1)
        d = other.den if g1.is_constant() else other.den.exact_div(g1)
        c = other.num if g2.is_constant() else other.num.exact_div(g2)
        b = self.den if g2.is_constant() else self.den.exact_div(g2)
        num = a.mul(c)
        den = b.mul(d)
        lc = den.leading_coeff()
        if lc != QQ_ONE:
            num = num.scale(QQ_ONE / lc)
            den = den.scale(QQ_ONE / lc)
        return RationalFn(num, den, _canonical=True)

    def mul_poly(self, p: MultiPoly) -> "RationalFn":
        return self.mul(RationalFn.from_poly(p))

    def div(self, other: "RationalFn") -> "RationalFn":
        if other.is_zero():
            raise PolynomialError("division by zero rational function")
        return self.mul(other.inverse())

    def inverse(self) -> "RationalFn":
        if self.is_zero():
            raise PolynomialError("inverse of zero")
        return RationalFn(self.den, self.num)

    def scale(self, c) -> "RationalFn":
        c = qq(c)
        return RationalFn(self.num.scale(c), self.den, _canonical=(c != 0))

    def pow(self, e: int) -> "RationalFn":
        if e < 0:
            return self.inverse().pow(-e)
        num, den = self.num.pow(e), self.den.pow(e)
        return RationalFn(num, den, _canonical=True)

    __add__ = add
    __sub__ = sub
    __mul__ = mul
    __neg__ = neg
    __truediv__ = div

    # -- calculus and substitution ---------------------------------------------

    def derivative(self, i: int) -> "RationalFn":
        """d/d(symbol_i), with the denominator grown factor-by-factor.

        For den = prod f_j^{e_j} with distinct factors the quotient rule gives
        (num' * F - num * sum e_j f_j' F/f_j) / (den * F), F = prod of the
        factors that involve symbol_i; no general gcd is needed afterwards
        beyond the normalize in the constructor.
        """
        n, d = self.num, self.den
        dn = n.derivative(i)
        if d.is_constant():
            return RationalFn(dn, d, _canonical=True)
        fac = d._factors
        if fac is not None:
            scalar, factors = fac
            active = [(f, e) for f, e in factors if f.degree_in(i) > 0]
            if not active:
                return RationalFn(dn, d, _canonical=True)
            table = n.table
            big_f = MultiPoly.from_factors(table, 1, [(f, 1) for f, _ in active])
            total = dn.mul(big_f)
            for f, e in active:
                cof = big_f.exact_div(f)
                total = total.sub(n.mul(f.derivative(i)).mul(cof).scale(e))
            new_den = MultiPoly.from_factors(
                table, scalar, [(f, e + (1 if f.degree_in(i) > 0 else 0)) for f, e in factors]
            )
            return RationalFn(total, new_den)
        dd = d.derivative(i)
        return RationalFn(dn.mul(d).sub(n.mul(dd)), d.mul(d))

    def subst(self, i: int, value: MultiPoly) -> "RationalFn":
        return RationalFn(self.num.subst(i, value), self.den.subst(i, value))

    def retable(self, table: VarTable) -> "RationalFn":
        return RationalFn(self.num.retable(table), self.den.retable(table), _canonical=True)

    def project(self, table: VarTable) -> "RationalFn":
        return RationalFn(self.num.project(table), self.den.project(table), _canonical=True)

    def map_symbols(self, table: VarTable, mapping) -> "RationalFn":
        return RationalFn(self.num.map_symbols(table, mapping), self.den.map_symbols(table, mapping))


def _reduce(num: MultiPoly, den: MultiPoly):
    if num.table != den.table:
        raise PolynomialError("numerator and denominator use different symbol tables")
    if num.is_zero():
        return num, MultiPoly.const(den.table, 1)
    g = poly_gcd(num, den)
    if not g.is_constant():
        num = num.exact_div(g)
        den = den.exact_div(g)
    lc = den.leading_coeff()
    if lc != QQ_ONE:
        num = num.scale(QQ_ONE / lc)
        den = den.scale(QQ_ONE / lc)
    return num, den


def normalize(r: RationalFn) -> RationalFn:
    """Re-canonicalize a rational function (idempotent)."""
    num, den = _reduce(r.num, r.den)
    return RationalFn(num, den, _canonical=True)
