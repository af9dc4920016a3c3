"""The trigonometric (Sutherland) Baker-Akhiezer function in exponential
variables u_i = exp(2 x_i).

The k+1-point function is obtained from the k-point one by residues at
w_i = u_i of

    A(u)^(m+1) A(w)^(m+1) / A*(w,u)^(m+1) * prod_i w_i^(m - nu_{k+1}) * Phi_k(w),

multiplied by prod_{i<=k+1} u_i^(nu_{k+1}) and divided by
prod_i binom(nu_i - nu_{k+1} - 1, m); A*(w,u) flips the sign of every
(u_j - w_i) pair with i > j.  The result is Q(u, nu) / (A(u)^m C_m(nu)) u^nu
with Q polynomial, C_m(nu) = prod_{k<=m} prod_{i<j} (nu_i - nu_j - k), and
coefficient 1 on the dominant monomial (the Weyl-chamber normalization).
"""

from __future__ import annotations

from .ba_common import (
    BAResult,
    CASE_TRIG,
    ConstructionError,
    cross_product,
    diff_product,
    recover_prefactor_poly,
    spectral_leading_part,
    square_sum,
    star_sign,
    symbol,
)
from .coeffs import QQ_ONE, qq_factorial
from .expr import AffineForm, SymExpr
from .poly import MultiPoly
from .rational import RationalFn
from .reports import Stopwatch, VerifyReport
from .residue import ResiduePlan, ResidueStep, iterated_residue
from .symbols import VarTable, positions, spectrals


def u_names(n: int) -> list[str]:
    return [f"u{i}" for i in range(1, n + 1)]


def nu_names(n: int) -> list[str]:
    return [f"nu{i}" for i in range(1, n + 1)]


def trig_table(n: int, extra: list[tuple[str, str]] | None = None) -> VarTable:
    entries = positions(*u_names(n)) + spectrals(*nu_names(n))
    if extra:
        entries = entries + list(extra)
    return VarTable(entries)


def c_norm(table: VarTable, n: int, m: int) -> MultiPoly:
    """C_m(nu) = prod_{k=1..m} prod_{i<j} (nu_i - nu_j - k)."""
    factors = []
    for k in range(1, m + 1):
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                factors.append(
                    (MultiPoly.linear(table, {f"nu{i}": 1, f"nu{j}": -1}, -k), 1)
                )
    return MultiPoly.from_factors(table, 1, factors)


def falling_binomial(table: VarTable, top: MultiPoly, m: int) -> MultiPoly:
    """binom(top, m) * m! = top (top-1) ... (top-m+1) as a polynomial."""
    out = MultiPoly.const(table, 1)
    for r in range(m):
        out = out.mul(top.add(MultiPoly.const(table, -r)))
    return out


def ba_trig_base() -> BAResult:
    """One-particle function u1^nu1 (any multiplicity)."""
    table = trig_table(1)
    expr = SymExpr.power(table, "u1", AffineForm(0, [(table.index("nu1"), 1)]))
    return BAResult(CASE_TRIG, 1, 0, expr, table)


def _free_power(n: int) -> BAResult:
    table = trig_table(n)
    expr = SymExpr.from_term(
        RationalFn.one(table),
        None,
        {u: AffineForm(0, [(table.index(nu), 1)]) for u, nu in zip(u_names(n), nu_names(n))},
    )
    return BAResult(CASE_TRIG, n, 0, expr, table)


def raise_rank_trig(prev: BAResult, m: int) -> BAResult:
    """k-point -> (k+1)-point trigonometric BA function at fixed m."""
    if prev.case != CASE_TRIG:
        raise ConstructionError("raise_rank_trig needs a trig-case input")
    if prev.m not in (m, 0):
        raise ConstructionError("multiplicity is fixed across the recursion")
    k = prev.n
    n = k + 1
    us, nus = u_names(n), nu_names(n)
    ws = [f"w{i}" for i in range(1, k + 1)]
    table = trig_table(n, positions(*ws))

    mapping = {}
    for i in range(1, k + 1):
        mapping[prev.table.index(f"u{i}")] = table.index(f"w{i}")
        mapping[prev.table.index(f"nu{i}")] = table.index(f"nu{i}")
    inner = prev.expr.map_symbols(table, mapping)

    a_u = diff_product(table, us, m + 1)
    a_w = diff_product(table, ws, m + 1)
    a_wu = cross_product(table, ws, us, m + 1)
    sign = star_sign(k, n) ** (m + 1)

    nu_last = table.index(nus[-1])
    w_powers = {w: AffineForm(m, [(nu_last, -1)]) for w in ws}
    integrand = SymExpr.from_term(
        RationalFn(a_u.mul(a_w).scale(sign), a_wu), None, w_powers
    ).mul(inner)

    plan = ResiduePlan(
        [ResidueStep(w, symbol(table, u), m + 1) for w, u in zip(ws, us)]
    )
    raw = iterated_residue(integrand, plan)

    prefactor = SymExpr.from_term(
        RationalFn.one(table),
        None,
        {u: AffineForm(0, [(nu_last, 1)]) for u in us},
    )
    raw = raw.mul(prefactor)

    c_binom = MultiPoly.const(table, 1)
    for i in range(1, k + 1):
        top = MultiPoly.linear(table, {f"nu{i}": 1, nus[-1]: -1}, -1)
        c_binom = c_binom.mul(falling_binomial(table, top, m))
    c = RationalFn(c_binom, MultiPoly.const(table, qq_factorial(m) ** k))
    result = raw.mul_coeff(c.inverse())

    out_table = trig_table(n)
    expr = result.project(out_table)
    used = {out_table.names[i] for i in expr.used_symbol_indices()}
    if used & set(ws):
        raise ConstructionError("integration variables leaked into the result")
    ba = BAResult(
        CASE_TRIG,
        n,
        m,
        expr,
        out_table,
        prev.normalization
        + [(f"C(k={k})", c.project(out_table)), (f"A*-sign(k={k})", RationalFn.const(out_table, sign))],
    )
    _check_shape(ba)
    return ba


def ba_trig(n: int, m: int) -> BAResult:
    """Phi_m^(n) by iterating the raise from u1^nu1; m = 0 is the free case."""
    if n < 1 or m < 0:
        raise ConstructionError(f"invalid parameters n={n}, m={m}")
    if m == 0:
        return _free_power(n)
    cur = ba_trig_base()
    for _ in range(n - 1):
        cur = raise_rank_trig(cur, m)
    if cur.n == 1:
        cur.m = m
    return cur


def apply_sutherland_u(e: SymExpr, n: int, m: int) -> SymExpr:
    """Sutherland operator rewritten through u_i = exp(2 x_i):

    -4 sum (u_i d/du_i)^2 + 8 m (m+1) sum_{i<j} u_i u_j / (u_i - u_j)^2.
    """
    table = e.table
    out = SymExpr.zero(table)
    for u in u_names(n):
        upart = _euler_op(e, u)
        out = out.sub(_euler_op(upart, u).scale(4))
    g = 8 * m * (m + 1)
    if g:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                ui, uj = symbol(table, f"u{i}"), symbol(table, f"u{j}")
                sep = MultiPoly.from_factors(
                    table,
                    1,
                    [(MultiPoly.linear(table, {f"u{i}": 1, f"u{j}": -1}), 2)],
                )
                out = out.add(
                    e.mul_coeff(RationalFn(ui.mul(uj).scale(g), sep))
                )
    return out


def _euler_op(e: SymExpr, name: str) -> SymExpr:
    """u * d/du."""
    return e.differentiate(name).mul_coeff(
        RationalFn.from_poly(symbol(e.table, name))
    )


def q_denominator(table: VarTable, n: int, m: int) -> MultiPoly:
    return diff_product(table, u_names(n), m).mul(c_norm(table, n, m))


def recover_q(ba: BAResult) -> MultiPoly:
    """Q with coefficient = Q / (A(u)^m C_m(nu))."""
    return recover_prefactor_poly(ba.coefficient(), q_denominator(ba.table, ba.n, ba.m))


def _check_shape(ba: BAResult):
    term = ba.expr.single_term()
    if not term.exp_arg.is_zero():
        raise ConstructionError("trig BA function must carry no exp factor")
    expected = tuple(
        (ba.table.index(u), AffineForm(0, [(ba.table.index(nu), 1)]))
        for u, nu in zip(u_names(ba.n), nu_names(ba.n))
    )
    if term.powers != expected:
        raise ConstructionError("trig BA function lost its u^nu power structure")


# -- verification ---------------------------------------------------------------


def verify_trig_suite(n: int, m: int, ba: BAResult | None = None) -> VerifyReport:
    """Eigen-equation, polynomial Q with correct leading term, denominator
    divisibility, and the dominant-monomial normalization, all exact."""
    with Stopwatch() as sw:
        ba = ba or ba_trig(n, m)
        table = ba.table
        failures = []

        nu_sq = square_sum(table, nu_names(n))
        residual = apply_sutherland_u(ba.expr, n, m).add(
            ba.expr.mul_coeff(RationalFn.from_poly(nu_sq.scale(4)))
        )
        if not residual.is_zero():
            failures.append("eigen-equation residual nonzero")

        den_bound = q_denominator(table, n, m)
        coeff = ba.coefficient()
        if den_bound.exact_div(coeff.den) is None:
            failures.append("denominator does not divide A(u)^m C_m(nu)")

        q = None
        try:
            q = recover_q(ba)
        except ConstructionError:
            failures.append("Q is not polynomial")
        if q is not None and n > 1 and m > 0:
            spectral = {table.index(nu) for nu in nu_names(n)}
            lead = spectral_leading_part(q, spectral)
            a_u = diff_product(table, u_names(n), m)
            a_nu = diff_product(table, nu_names(n), m)
            if lead != a_u.mul(a_nu):
                failures.append("leading term of Q is not A(u)^m A(nu)^m")
            if not _dominant_normalized(q, den_bound, table, n):
                failures.append("dominant-monomial coefficient is not 1")
    return VerifyReport(
        check_id=f"trig-suite:n={n}:m={m}",
        parameters={
            "n": n,
            "m": m,
            "eigenvalue": f"-4({'+'.join(f'nu{i}^2' for i in range(1, n + 1))})",
        },
        passed=not failures,
        residual="0" if not failures else "; ".join(failures),
        runtime_ms=sw.ms,
    )


def _dominant_normalized(q: MultiPoly, den: MultiPoly, table: VarTable, n: int) -> bool:
    """Coefficient of the lexicographically largest u-monomial of Q equals the
    matching coefficient of A(u)^m C_m(nu) (the u1 >> u2 >> ... limit)."""
    u_idx = [table.index(u) for u in u_names(n)]
    qc = _dominant_u_coeff(q, table, u_idx)
    dc = _dominant_u_coeff(den, table, u_idx)
    return qc == dc


def _dominant_u_coeff(p: MultiPoly, table: VarTable, u_idx: list[int]) -> MultiPoly:
    def ukey(key: int):
        exps = table.unpack(key)
        return tuple(exps[i] for i in u_idx)

    best = max(ukey(k) for k in p.terms)
    out = {}
    for k, c in p.terms.items():
        exps = list(table.unpack(k))
        if tuple(exps[i] for i in u_idx) == best:
            for i in u_idx:
                exps[i] = 0
            out[table.pack(exps)] = c
    return MultiPoly(table, out)
