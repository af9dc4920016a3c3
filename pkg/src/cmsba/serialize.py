"""Canonical JSON serialization of symbolic values.

The tree layout is {"symbols": [...], "terms": [...]} with monomials as
[[symbol-index, degree], ...] sorted by index, terms in descending
graded-lex order of their keys, and rationals as decimal strings "p/q".
Round trips are bit-exact: serialize(deserialize(s)) == s.
"""

from __future__ import annotations

import json
from typing import Any

from .ba_common import BAResult
from .coeffs import qq_from_str, qq_to_str
from .expr import AffineForm, SymExpr, Term
from .poly import MultiPoly
from .rational import RationalFn
from .symbols import VarTable


def table_to_obj(table: VarTable) -> list:
    return [[n, k] for n, k in zip(table.names, table.kinds)]


def table_from_obj(obj: list) -> VarTable:
    return VarTable([(n, k) for n, k in obj])


def _mono_to_obj(table: VarTable, key: int) -> list:
    exps = table.unpack(key)
    return [[i, e] for i, e in enumerate(exps) if e]


def _mono_from_obj(table: VarTable, obj: list) -> int:
    exps = [0] * len(table)
    for i, e in obj:
        exps[i] = e
    return table.pack(exps)


def poly_to_obj(p: MultiPoly) -> list:
    return [[_mono_to_obj(p.table, k), qq_to_str(c)] for k, c in p.sorted_terms()]


def poly_from_obj(table: VarTable, obj: list) -> MultiPoly:
    return MultiPoly(
        table, {_mono_from_obj(table, mono): qq_from_str(c) for mono, c in obj}
    )


def rational_to_obj(r: RationalFn) -> dict:
    return {"num": poly_to_obj(r.num), "den": poly_to_obj(r.den)}


def rational_from_obj(table: VarTable, obj: dict) -> RationalFn:
    return RationalFn(
        poly_from_obj(table, obj["num"]), poly_from_obj(table, obj["den"])
    )


def _affine_to_obj(aff: AffineForm) -> dict:
    return {"const": qq_to_str(aff.const), "lin": [[i, qq_to_str(c)] for i, c in aff.lin]}


def _affine_from_obj(obj: dict) -> AffineForm:
    return AffineForm(qq_from_str(obj["const"]), [(i, qq_from_str(c)) for i, c in obj["lin"]])


def expr_to_obj(e: SymExpr) -> dict:
    terms = []
    for t in sorted(e.iter_terms(), key=lambda t: _term_sort_key(e.table, t)):
        terms.append(
            {
                "coeff": rational_to_obj(t.coeff),
                "exp": poly_to_obj(t.exp_arg),
                "powers": [[i, _affine_to_obj(a)] for i, a in t.powers],
            }
        )
    return {"symbols": table_to_obj(e.table), "terms": terms}


def _term_sort_key(table: VarTable, t: Term):
    return (
        tuple(sorted(t.exp_arg.terms)),
        tuple((i, a.key()) for i, a in t.powers),
    )


def expr_from_obj(obj: dict) -> SymExpr:
    table = table_from_obj(obj["symbols"])
    out = SymExpr.zero(table)
    for t in obj["terms"]:
        out._accumulate(
            rational_from_obj(table, t["coeff"]),
            poly_from_obj(table, t["exp"]),
            tuple((i, _affine_from_obj(a)) for i, a in t["powers"]),
        )
    return out


def expr_to_json(e: SymExpr) -> str:
    return json.dumps(expr_to_obj(e), sort_keys=True, separators=(",", ":"))


def expr_from_json(s: str) -> SymExpr:
    return expr_from_obj(json.loads(s))


def ba_to_obj(ba: BAResult) -> dict:
    obj = {
        "case": ba.case,
        "n": ba.n,
        "m": ba.m,
        "expr": expr_to_obj(ba.expr),
        "normalization": [[label, rational_to_obj(c)] for label, c in ba.normalization],
    }
    if ba.m_star is not None:
        obj["m_star"] = ba.m_star
    return obj


def ba_from_obj(obj: dict) -> BAResult:
    expr = expr_from_obj(obj["expr"])
    table = expr.table
    norm = [
        (label, rational_from_obj(table, c)) for label, c in obj["normalization"]
    ]
    return BAResult(
        case=obj["case"],
        n=obj["n"],
        m=obj["m"],
        expr=expr,
        table=table,
        normalization=norm,
        m_star=obj.get("m_star"),
    )


def ba_to_json(ba: BAResult) -> str:
    return json.dumps(ba_to_obj(ba), sort_keys=True, separators=(",", ":"))


def ba_from_json(s: str) -> BAResult:
    return ba_from_obj(json.loads(s))
