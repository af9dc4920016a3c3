"""Exponential-power expressions.

A SymExpr is a finite sum of terms

    coeff(RationalFn) * exp(expArg) * prod_s s^(affine exponent),

where expArg is a polynomial of total degree <= 2, bilinear in
position x spectral symbols (each monomial at most degree 1 in positions and
degree 1 in spectrals, no constant term), and the power factors carry
affine exponents in the spectral symbols.  Integer parts of power exponents
are folded into the coefficient, so term keys are canonical and merging is
decidable.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .coeffs import QQ_ONE, QQ_ZERO, qq, qq_floor, qq_is_integer
from .poly import MultiPoly, PolynomialError
from .rational import RationalFn
from .symbols import VarTable


class ExprError(ArithmeticError):
    pass


class AffineForm:
    """const + sum(c_i * spectral_i), exact rationals, sparse."""

    __slots__ = ("const", "lin")

    def __init__(self, const=0, lin: Iterable[tuple[int, object]] = ()):
        self.const = qq(const)
        clean = {}
        for i, c in lin:
            c = qq(c)
            if c != 0:
                clean[i] = clean.get(i, QQ_ZERO) + c
        self.lin = tuple(sorted((i, c) for i, c in clean.items() if c != 0))

    def is_zero(self) -> bool:
        return self.const == 0 and not self.lin

    def is_constant(self) -> bool:
        return not self.lin

    def add(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(self.const + other.const, self.lin + other.lin)

    def neg(self) -> "AffineForm":
        return AffineForm(-self.const, tuple((i, -c) for i, c in self.lin))

    def shift(self, c) -> "AffineForm":
        return AffineForm(self.const + qq(c), self.lin)

    def key(self):
        return (self.const, self.lin)

    def __eq__(self, other):
        return isinstance(other, AffineForm) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_poly(self, table: VarTable) -> MultiPoly:
        terms = {}
        if self.const != 0:
            terms[0] = self.const
        for i, c in self.lin:
            terms[table.unit(i)] = c
        return MultiPoly(table, terms)

    def split_integer_part(self) -> tuple[int, "AffineForm"]:
        """(n, remainder) with n integer, remainder.const in [0, 1)."""
        n = qq_floor(self.const)
        return n, AffineForm(self.const - n, self.lin)


class Term:
    __slots__ = ("coeff", "exp_arg", "powers")

    def __init__(self, coeff: RationalFn, exp_arg: MultiPoly, powers: tuple):
        self.coeff = coeff
        self.exp_arg = exp_arg
        self.powers = powers  # sorted tuple of (symbol index, AffineForm)

    def key(self):
        return (self.exp_arg.key_tuple(), tuple((i, a.key()) for i, a in self.powers))


def _check_exp_arg(table: VarTable, arg: MultiPoly):
    for key in arg.terms:
        exps = table.unpack(key)
        dpos = sum(e for i, e in enumerate(exps) if table.is_position(i))
        dspec = sum(e for i, e in enumerate(exps) if table.is_spectral(i))
        if dpos > 1 or dspec > 1:
            raise ExprError(
                "exp argument must be bilinear in position x spectral symbols"
            )
        if dpos == 0 and dspec == 0:
            raise ExprError("exp argument must have no constant term")


class SymExpr:
    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: dict | None = None):
        self.table = table
        self.terms = terms if terms is not None else {}

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable) -> "SymExpr":
        return cls(table)

    @classmethod
    def from_term(
        cls,
        coeff: RationalFn,
        exp_arg: MultiPoly | None = None,
        powers: Mapping[str, AffineForm] | None = None,
    ) -> "SymExpr":
        table = coeff.table
        arg = exp_arg if exp_arg is not None else MultiPoly.zero(table)
        if not arg.is_zero():
            _check_exp_arg(table, arg)
        pw = []
        if powers:
            for name, aff in powers.items():
                i = table.index(name)
                if not table.is_position(i):
                    raise ExprError(f"power base {name!r} must be a position symbol")
                for j, _ in aff.lin:
                    if not table.is_spectral(j):
                        raise ExprError("power exponents must be affine in spectral symbols")
                pw.append((i, aff))
        out = cls(table)
        out._accumulate(coeff, arg, tuple(sorted(pw, key=lambda p: p[0])))
        return out

    @classmethod
    def from_coeff(cls, coeff: RationalFn) -> "SymExpr":
        return cls.from_term(coeff)

    @classmethod
    def exp_of(cls, arg: MultiPoly) -> "SymExpr":
        return cls.from_term(RationalFn.one(arg.table), arg)

    @classmethod
    def power(cls, table: VarTable, name: str, aff: AffineForm) -> "SymExpr":
        return cls.from_term(RationalFn.one(table), None, {name: aff})

    # -- internals ---------------------------------------------------------------

    def _accumulate(self, coeff: RationalFn, exp_arg: MultiPoly, powers: tuple):
        """Add one term, folding integer exponent parts into the coefficient."""
        if coeff.is_zero():
            return
        table = self.table
        folded = []
        for i, aff in powers:
            n, rem = aff.split_integer_part()
            if n:
                mono = MultiPoly(table, {table.unit(i): QQ_ONE})
                if n > 0:
                    coeff = coeff.mul_poly(mono.pow(n))
                else:
                    coeff = coeff.div(RationalFn.from_poly(_stamped_power(table, i, -n)))
            if not rem.is_zero():
                folded.append((i, rem))
        key = (exp_arg.key_tuple(), tuple((i, a.key()) for i, a in folded))
        existing = self.terms.get(key)
        if existing is None:
            self.terms[key] = Term(coeff, exp_arg, tuple(folded))
        else:
            s = existing.coeff.add(coeff)
            if s.is_zero():
                del self.terms[key]
            else:
                existing.coeff = s

    def iter_terms(self):
        return self.terms.values()

    def single_term(self) -> Term:
        if len(self.terms) != 1:
            raise ExprError(f"expected a single term, found {len(self.terms)}")
        return next(iter(self.terms.values()))

    # -- predicates ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymExpr) or self.table != other.table:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k].coeff == other.terms[k].coeff for k in self.terms)

    __hash__ = None

    def __repr__(self):
        from .printing import expr_str

        return f"SymExpr({expr_str(self)})"

    # -- algebra ---------------------------------------------------------------------

    def add(self, other: "SymExpr") -> "SymExpr":
        if self.table != other.table:
            raise ExprError("operands use different symbol tables")
        out = SymExpr(self.table, {k: Term(t.coeff, t.exp_arg, t.powers) for k, t in self.terms.items()})
        for t in other.iter_terms():
            out._accumulate(t.coeff, t.exp_arg, t.powers)
        return out

    def sub(self, other: "SymExpr") -> "SymExpr":
        return self.add(other.neg())

    def neg(self) -> "SymExpr":
        return SymExpr(
            self.table,
            {k: Term(t.coeff.neg(), t.exp_arg, t.powers) for k, t in self.terms.items()},
        )

    def mul(self, other: "SymExpr") -> "SymExpr":
        if self.table != other.table:
            raise ExprError("operands use different symbol tables")
        out = SymExpr(self.table)
        for a in self.iter_terms():
            for b in other.iter_terms():
                arg = a.exp_arg.add(b.exp_arg)
                if not arg.is_zero():
                    _check_exp_arg(self.table, arg)
                powers = _merge_powers(a.powers, b.powers)
                out._accumulate(a.coeff.mul(b.coeff), arg, powers)
        return out

    def mul_coeff(self, c: RationalFn) -> "SymExpr":
        out = SymExpr(self.table)
        for t in self.iter_terms():
            out._accumulate(t.coeff.mul(c), t.exp_arg, t.powers)
        return out

    def scale(self, c) -> "SymExpr":
        return self.mul_coeff(RationalFn.const(self.table, c))

    __add__ = add
    __sub__ = sub
    __mul__ = mul
    __neg__ = neg

    # -- calculus ----------------------------------------------------------------------

    def differentiate(self, name: str) -> "SymExpr":
        """Exact partial derivative: product rule over the three factor kinds."""
        i = self.table.index(name)
        table = self.table
        out = SymExpr(table)
        si = MultiPoly(table, {table.unit(i): QQ_ONE})
        for t in self.iter_terms():
            dc = t.coeff.derivative(i)
            darg = t.exp_arg.derivative(i)
            total = dc
            if not darg.is_zero():
                total = total.add(t.coeff.mul_poly(darg))
            aff = dict(t.powers).get(i)
            if aff is not None:
                # d/ds s^a = a * s^(a-1): the 1/s shift lives in the coefficient
                total = total.add(
                    t.coeff.mul(RationalFn(aff.to_poly(table), _stamped_power(table, i, 1)))
                )
            out._accumulate(total, t.exp_arg, t.powers)
        return out

    def substitute(self, name: str, value: MultiPoly) -> "SymExpr":
        """Exact substitution of a polynomial for a symbol.

        Substituting the base symbol of a power factor has no exact
        representation here and raises; the series engine owns that case.
        """
        i = self.table.index(name)
        if value.table != self.table:
            raise ExprError("substitution value uses a different symbol table")
        out = SymExpr(self.table)
        for t in self.iter_terms():
            for j, aff in t.powers:
                if j == i:
                    raise ExprError(
                        f"cannot substitute into power base {name!r} exactly; "
                        "use the series engine"
                    )
                if any(k == i for k, _ in aff.lin):
                    raise ExprError(
                        f"cannot substitute spectral symbol {name!r} inside a power exponent"
                    )
            coeff = t.coeff.subst(i, value)
            arg = t.exp_arg.subst(i, value)
            if not arg.is_zero():
                _check_exp_arg(self.table, arg)
            out._accumulate(coeff, arg, t.powers)
        return out

    # -- table management ------------------------------------------------------------------

    def retable(self, table: VarTable) -> "SymExpr":
        out = SymExpr(table)
        for t in self.iter_terms():
            out._accumulate(t.coeff.retable(table), t.exp_arg.retable(table), t.powers)
        return out

    def project(self, table: VarTable) -> "SymExpr":
        out = SymExpr(table)
        limit = len(table)
        for t in self.iter_terms():
            for i, aff in t.powers:
                if i >= limit or any(j >= limit for j, _ in aff.lin):
                    raise ExprError("projection would drop a used power symbol")
            out._accumulate(t.coeff.project(table), t.exp_arg.project(table), t.powers)
        return out

    def map_symbols(self, table: VarTable, mapping: Mapping[int, int]) -> "SymExpr":
        out = SymExpr(table)
        for t in self.iter_terms():
            powers = tuple(
                sorted(
                    (
                        (mapping.get(i, i), AffineForm(a.const, tuple((mapping.get(j, j), c) for j, c in a.lin)))
                        for i, a in t.powers
                    ),
                    key=lambda p: p[0],
                )
            )
            out._accumulate(
                t.coeff.map_symbols(table, mapping),
                t.exp_arg.map_symbols(table, mapping),
                powers,
            )
        return out

    def used_symbol_indices(self) -> set[int]:
        used = set()
        for t in self.iter_terms():
            used |= t.coeff.num.used_indices() | t.coeff.den.used_indices()
            used |= t.exp_arg.used_indices()
            for i, aff in t.powers:
                used.add(i)
                used |= {j for j, _ in aff.lin}
        return used


def _merge_powers(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for i, aff in b:
        cur = acc.get(i)
        acc[i] = aff if cur is None else cur.add(aff)
    return tuple(sorted(((i, aff) for i, aff in acc.items() if not aff.is_zero()), key=lambda p: p[0]))


def _stamped_power(table: VarTable, i: int, e: int) -> MultiPoly:
    sym = MultiPoly(table, {table.unit(i): QQ_ONE})
    return MultiPoly.from_factors(table, 1, [(sym, e)])
