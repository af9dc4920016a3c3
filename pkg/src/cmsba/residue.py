"""Symbolic residues of exponential-power expressions.

residue_at extracts the order -1 Laurent coefficient after shifting the
integration variable to its center; iterated_residue folds a plan of
(variable, center, expected pole order) steps, innermost first.  One residue
step contributes no 2*pi*i factor: the circle-product constants of the
integral formulas are divided out with their (2*pi*i)^k part dropped to
match.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .coeffs import QQ_ONE
from .expr import AffineForm, ExprError, SymExpr
from .poly import MultiPoly
from .rational import RationalFn
from .series import SeriesError, _decompose_denominator, binomial_series, exp_series, rational_series
from .symbols import POSITION, VarTable


class ResidueError(ArithmeticError):
    pass


class PoleOrderError(ResidueError):
    """Pole order exceeded the declared maximum even after escalation."""


@dataclass(frozen=True)
class ResidueStep:
    var: str
    center: MultiPoly
    max_order: int


class ResiduePlan:
    """Ordered residue steps, evaluated innermost-first as listed."""

    def __init__(self, steps: Sequence[ResidueStep]):
        names = [s.var for s in steps]
        if len(set(names)) != len(names):
            raise ResidueError("a variable appears twice in the residue plan")
        for i, s in enumerate(steps):
            center_syms = {s.center.table.names[j] for j in s.center.used_indices()}
            blocked = set(names[: i + 1])
            if center_syms & blocked:
                raise ResidueError(
                    f"step {i}: center references already-integrated variables "
                    f"{sorted(center_syms & blocked)}"
                )
        self.steps = tuple(steps)

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)


_FRESH = "_t"


def residue_at(
    e: SymExpr,
    var: str,
    center: MultiPoly,
    max_order: int,
    escalate: bool = True,
) -> SymExpr:
    """Res_{var=center} e, exact; zero expression when there is no pole.

    Pole orders above max_order escalate once (the series is exact at any
    finite order) and raise PoleOrderError beyond that.
    """
    table = e.table
    ivar = table.index(var)
    out = SymExpr.zero(table)
    if e.is_zero():
        return out
    tname = _fresh_name(table)
    ext = table.extend([(tname, POSITION)])
    it = ext.index(tname)
    t_mono = MultiPoly(ext, {ext.unit(it): QQ_ONE})
    value = center.retable(ext).add(t_mono)
    for term in e.iter_terms():
        coeff = term.coeff.retable(ext).subst(ivar, value)
        exp_arg = term.exp_arg.retable(ext).subst(ivar, value)
        arg_parts = exp_arg.as_univariate(it)
        if any(d > 1 for d in arg_parts):
            raise ResidueError("substituted exp argument is nonlinear in the shift")
        e0 = arg_parts.get(0, MultiPoly.zero(ext))
        c1 = arg_parts.get(1, MultiPoly.zero(ext))
        binomials = []
        kept_powers = []
        for j, aff in term.powers:
            if j == ivar:
                if center.is_zero():
                    raise ResidueError(
                        f"{var}^(symbolic exponent) at center 0 is a branch point, "
                        "not a pole; unsupported"
                    )
                base = _center_symbol(center)
                if base is None:
                    raise ResidueError(
                        "power factor centered at a compound polynomial is unsupported"
                    )
                binomials.append((base, aff))
            else:
                kept_powers.append((j, aff))
        try:
            k, _, _ = _decompose_denominator(coeff.den, it)
        except SeriesError as exc:
            raise ResidueError(str(exc)) from exc
        if k > max_order:
            if not (escalate and k <= 2 * max_order + 2):
                raise PoleOrderError(
                    f"pole order {k} at {var}={_short(center)} exceeds max {max_order}"
                )
        if k <= 0:
            continue  # analytic: residue vanishes
        s = rational_series(coeff, it, -1)
        if not c1.is_zero():
            s = s.mul(exp_series(c1, k - 1))
        for base, aff in binomials:
            s = s.mul(binomial_series(ext, base, aff, k - 1))
        res = s.coeffs.get(-1)
        if res is None or res.is_zero():
            continue
        powers = dict(kept_powers)
        for base, aff in binomials:
            cur = powers.get(base)
            powers[base] = aff if cur is None else cur.add(aff)
        powers_t = tuple(sorted(((i, a) for i, a in powers.items() if not a.is_zero()), key=lambda p: p[0]))
        out._accumulate(
            res.project(table),
            e0.project(table),
            powers_t,
        )
    return out


def iterated_residue(e: SymExpr, plan: ResiduePlan) -> SymExpr:
    """Left fold of residue_at along the plan; empty plan is the identity."""
    cur = e
    for idx, step in enumerate(plan):
        try:
            cur = residue_at(cur, step.var, step.center, step.max_order)
        except ResidueError as exc:
            raise ResidueError(f"step {idx} ({step.var}): {exc}") from exc
    integrated = {s.var for s in plan}
    leftover = {
        cur.table.names[i] for i in cur.used_symbol_indices()
    } & integrated
    if leftover:
        raise ResidueError(f"integrated variables survived: {sorted(leftover)}")
    return cur


def _fresh_name(table: VarTable) -> str:
    i = 0
    while f"{_FRESH}{i}" in table:
        i += 1
    return f"{_FRESH}{i}"


def _center_symbol(center: MultiPoly) -> int | None:
    if len(center.terms) != 1:
        return None
    ((key, c),) = center.terms.items()
    if c != QQ_ONE:
        return None
    used = center.used_indices()
    if len(used) != 1:
        return None
    i = next(iter(used))
    return i if key == center.table.unit(i) else None


def _short(p: MultiPoly) -> str:
    from .printing import poly_str

    s = poly_str(p)
    return s if len(s) <= 40 else s[:37] + "..."
