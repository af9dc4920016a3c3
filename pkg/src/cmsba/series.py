"""Truncated Laurent expansion of exponential-power expressions.

Everything is exact: rational parts expand through series inversion of the
nonvanishing denominator factor, exponentials through their Taylor series,
and symbolic powers (base + t)^a through the binomial series with affine
exponent.  Coefficients are RationalFn in the remaining symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeffs import QQ_ONE, qq_factorial
from .expr import AffineForm, SymExpr
from .poly import MultiPoly
from .rational import RationalFn
from .symbols import PACK_BITS, VarTable


class SeriesError(ArithmeticError):
    pass


@dataclass
class LaurentSeries:
    """Finite window of a Laurent expansion around t = 0.

    Represents prefactor * sum(coeffs[k] * t**k for k <= order), where the
    prefactor carries any t-free exponential/power factors (exactly one of
    the spec examples, (u+t)^e -> u^e * (1 + e t / u), needs it).
    """

    var: str
    coeffs: dict[int, RationalFn]
    order: int
    prefactor_exp: MultiPoly | None = None
    prefactor_powers: tuple = ()

    def coefficient(self, k: int) -> RationalFn:
        if k > self.order:
            raise SeriesError(f"order {k} beyond truncation {self.order}")
        c = self.coeffs.get(k)
        if c is not None:
            return c
        table = next(iter(self.coeffs.values())).table if self.coeffs else None
        if table is None:
            raise SeriesError("empty series has no table context")
        return RationalFn.const(table, 0)

    def min_order(self) -> int:
        return min(self.coeffs) if self.coeffs else 0


class _Trunc:
    """Internal truncated series: dict order -> RationalFn."""

    __slots__ = ("coeffs", "upto")

    def __init__(self, coeffs: dict, upto: int):
        self.coeffs = {k: v for k, v in coeffs.items() if k <= upto and not v.is_zero()}
        self.upto = upto

    def mul(self, other: "_Trunc") -> "_Trunc":
        upto = min(self.upto, other.upto)
        out: dict = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                k = ka + kb
                if k > upto:
                    continue
                cur = out.get(k)
                p = va.mul(vb)
                out[k] = p if cur is None else cur.add(p)
        return _Trunc(out, upto)

    def add(self, other: "_Trunc") -> "_Trunc":
        upto = min(self.upto, other.upto)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            cur = out.get(k)
            out[k] = v if cur is None else cur.add(v)
        return _Trunc(out, upto)


def _decompose_denominator(den: MultiPoly, it: int):
    """den = t^k * U with U(0) nonzero; returns (k, U_parts, U0).

    U_parts is U decomposed by t-degree; U0 keeps a factored form when den
    carried one.
    """
    table = den.table
    if den._factors is not None:
        k = 0
        scalar, factors = den._factors
        u_factors = []
        u0_factors = []
        for f, e in factors:
            parts = f.as_univariate(it)
            dmin = min(parts)
            if dmin:
                k += dmin * e
                shifted = {d - dmin: c for d, c in parts.items()}
                f = _recombine_uni(shifted, it, table)
            u_factors.append((f, e))
            f0 = f.subst_zero(it)
            if f0.is_zero():
                raise SeriesError("denominator factor vanishes at the expansion center")
            u0_factors.append((f0, e))
        u = MultiPoly.from_factors(table, scalar, u_factors)
        u0 = MultiPoly.from_factors(table, scalar, u0_factors)
        return k, u.as_univariate(it), u0
    parts = den.as_univariate(it)
    k = min(parts)
    shifted = {d - k: c for d, c in parts.items()}
    u0 = shifted[0]
    if u0.is_zero():
        raise SeriesError("denominator has no nonzero constant part (internal error)")
    return k, shifted, u0


def _recombine_uni(parts: dict[int, MultiPoly], it: int, table: VarTable) -> MultiPoly:
    out = MultiPoly.zero(table)
    for d, c in parts.items():
        if d:
            out = out.add(c.mul(MultiPoly(table, {d << (PACK_BITS * it): QQ_ONE})))
        else:
            out = out.add(c)
    return out


def _inverse_series(u_parts: dict[int, MultiPoly], u0: MultiPoly, n_terms: int) -> list[RationalFn]:
    """Coefficients of 1/U(t) to order n_terms-1; U given by t-degree parts.

    Uses the polynomial recurrence w_j = -sum_i U_i w_{j-i} u0^{i-1}, with
    1/U = sum w_j / u0^{j+1} t^j, so each coefficient is built in one shot
    against a power of the (factored) constant part.
    """
    table = u0.table
    w = [MultiPoly.const(table, 1)]
    u0_pows = [MultiPoly.const(table, 1)]
    for j in range(1, n_terms):
        u0_pows.append(u0_pows[-1].mul(u0))
        acc = MultiPoly.zero(table)
        for i in range(1, j + 1):
            ui = u_parts.get(i)
            if ui is None or ui.is_zero():
                continue
            acc = acc.add(ui.mul(w[j - i]).mul(u0_pows[i - 1]))
        w.append(acc.neg())
    out = []
    for j in range(n_terms):
        out.append(RationalFn(w[j], u0_pows[j].mul(u0)))
    return out


def rational_series(coeff: RationalFn, it: int, upto: int) -> _Trunc:
    """Laurent window of num/den in t (symbol index it) up to order `upto`."""
    k, u_parts, u0 = _decompose_denominator(coeff.den, it)
    num_parts = coeff.num.as_univariate(it)
    a_min = min(num_parts)
    n_inv = upto + k - a_min + 1
    if n_inv <= 0:
        return _Trunc({}, upto)
    inv = _inverse_series(u_parts, u0, n_inv)
    out: dict = {}
    for a, na in num_parts.items():
        fa = RationalFn.from_poly(na)
        for j in range(0, upto + k - a + 1):
            order = a + j - k
            term = fa.mul(inv[j])
            cur = out.get(order)
            out[order] = term if cur is None else cur.add(term)
    return _Trunc(out, upto)


def exp_series(c: MultiPoly, upto: int) -> _Trunc:
    """Taylor window of exp(c * t) with polynomial c free of t."""
    table = c.table
    out = {0: RationalFn.one(table)}
    power = MultiPoly.const(table, 1)
    for j in range(1, upto + 1):
        power = power.mul(c)
        out[j] = RationalFn(power, MultiPoly.const(table, 1)).scale(
            QQ_ONE / qq_factorial(j)
        )
    return _Trunc(out, upto)


def binomial_series(table: VarTable, base_index: int, aff: AffineForm, upto: int) -> _Trunc:
    """Window of (base + t)^aff / base^aff = sum binom(aff, j) t^j / base^j.

    The base^aff power factor is NOT included; the caller reattaches it.
    """
    base = MultiPoly(table, {table.unit(base_index): QQ_ONE})
    base_stamped = MultiPoly.from_factors(table, 1, [(base, 1)])
    out = {0: RationalFn.one(table)}
    rising = MultiPoly.const(table, 1)
    base_pow = MultiPoly.const(table, 1)
    for j in range(1, upto + 1):
        rising = rising.mul(aff.shift(-(j - 1)).to_poly(table))
        base_pow = base_pow.mul(base_stamped)
        out[j] = RationalFn(rising, base_pow).scale(QQ_ONE / qq_factorial(j))
    return _Trunc(out, upto)


def series_expand(e: SymExpr, var: str, upto: int) -> LaurentSeries:
    """Expand a SymExpr in `var` around 0, exactly, to order `upto`.

    All terms must share the same var-free exponential/power prefactor
    (single-term inputs always do); rational parts may have poles in var,
    exp factors must be linear in var, and a power factor based on `var`
    itself is a branch point and is rejected.
    """
    it = e.table.index(var)
    table = e.table
    prefactor = None
    total: _Trunc | None = None
    for term in e.iter_terms():
        for i, aff in term.powers:
            if i == it:
                raise SeriesError(
                    f"power factor {var}^(symbolic) is a branch point at {var}=0"
                )
            for j, _ in aff.lin:
                if j == it:
                    raise SeriesError("expansion variable inside a power exponent")
        arg_parts = term.exp_arg.as_univariate(it)
        if any(d > 1 for d in arg_parts):
            raise SeriesError("exp argument must be linear in the expansion variable")
        e0 = arg_parts.get(0, MultiPoly.zero(table))
        c1 = arg_parts.get(1, MultiPoly.zero(table))
        pf = (e0.key_tuple(), tuple((i, a.key()) for i, a in term.powers))
        if prefactor is None:
            prefactor = (pf, e0, term.powers)
        elif prefactor[0] != pf:
            raise SeriesError(
                "terms carry different var-free exponential/power prefactors; "
                "expand term by term instead"
            )
        k, _, _ = _decompose_denominator(term.coeff.den, it)
        s = rational_series(term.coeff, it, upto)
        if not c1.is_zero():
            s = s.mul(exp_series(c1, upto + k))
        total = s if total is None else total.add(s)
    if total is None:
        return LaurentSeries(var, {}, upto)
    pf_exp = prefactor[1] if prefactor is not None and not prefactor[1].is_zero() else None
    pf_pows = prefactor[2] if prefactor is not None else ()
    return LaurentSeries(var, total.coeffs, upto, pf_exp, pf_pows)
