"""Shared pieces of the Baker-Akhiezer constructions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .coeffs import QQ_ONE
from .expr import SymExpr
from .poly import MultiPoly, PolynomialError
from .rational import RationalFn
from .symbols import VarTable

CASE_RATIONAL = "rational"
CASE_TRIG = "trig"
CASE_DEF_RAT = "def-rat"
CASE_DEF_TRIG = "def-trig"


class ConstructionError(RuntimeError):
    pass


@dataclass
class BAResult:
    """A constructed BA function with its construction metadata.

    normalization records the constants divided out of the raw residue
    output, innermost raise first; multiplying them back recovers the raw
    pipeline value exactly.
    """

    case: str
    n: int
    m: int
    expr: SymExpr
    table: VarTable
    normalization: list[tuple[str, RationalFn]] = field(default_factory=list)
    m_star: int | None = None

    def coefficient(self) -> RationalFn:
        return self.expr.single_term().coeff

    def exp_arg(self) -> MultiPoly:
        return self.expr.single_term().exp_arg


def symbol(table: VarTable, name: str) -> MultiPoly:
    return MultiPoly.symbol(table, name)


def diff_product(table: VarTable, names: list[str], power: int = 1) -> MultiPoly:
    """A(x) = prod_{i<j} (x_i - x_j), raised to `power`, factored form kept."""
    factors = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            factors.append(
                (MultiPoly.linear(table, {names[i]: 1, names[j]: -1}), power)
            )
    return MultiPoly.from_factors(table, 1, factors)


def cross_product(table: VarTable, us: list[str], vs: list[str], power: int = 1) -> MultiPoly:
    """A(u, v) = prod_i prod_j (u_i - v_j), raised to `power`."""
    factors = []
    for u in us:
        for v in vs:
            factors.append((MultiPoly.linear(table, {u: 1, v: -1}), power))
    return MultiPoly.from_factors(table, 1, factors)


def star_sign(k: int, l: int) -> int:
    """Sign relating A*(w, u) to A(w, u): (-1)**#{(i, j): i > j}.

    A*(w,u) = prod_{i<=j}(w_i-u_j) prod_{i>j}(u_j-w_i) with w of length k and
    u of length l; each i > j pair flips one sign.
    """
    flips = sum(min(i - 1, l) for i in range(1, k + 1))
    return -1 if flips % 2 else 1


def pair_sum(table: VarTable, names: list[str]) -> MultiPoly:
    return MultiPoly.linear(table, {n: 1 for n in names})


def square_sum(table: VarTable, names: list[str]) -> MultiPoly:
    out = MultiPoly.zero(table)
    for n in names:
        s = symbol(table, n)
        out = out.add(s.mul(s))
    return out


def recover_prefactor_poly(coeff: RationalFn, denominator: MultiPoly) -> MultiPoly:
    """P with coeff = P / denominator; raises if coeff has extra poles."""
    prod = coeff.mul_poly(denominator)
    if not prod.is_polynomial():
        raise ConstructionError(
            "coefficient has poles outside the expected denominator"
        )
    return prod.num.scale(QQ_ONE / prod.den.constant_value())


def spectral_leading_part(p: MultiPoly, spectral_indices: set[int]) -> MultiPoly:
    """Sum of monomials of maximal total degree in the given symbols."""
    if p.is_zero():
        raise PolynomialError("zero polynomial has no leading part")
    table = p.table
    best = -1
    groups: dict[int, dict] = {}
    for key, c in p.terms.items():
        exps = table.unpack(key)
        d = sum(exps[i] for i in spectral_indices)
        groups.setdefault(d, {})[key] = c
        best = max(best, d)
    return MultiPoly(table, groups[best])
