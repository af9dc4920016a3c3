"""Plain-text and LaTeX rendering (display only, no round-trip contract)."""

from __future__ import annotations

from .coeffs import QQ_ONE, qq_to_str

_GREEK = {"lam": r"\lambda", "nu": r"\nu", "mu": r"\mu", "tau": r"\tau"}


def _mono_str(table, key, latex=False) -> str:
    parts = []
    exps = table.unpack(key)
    for i, e in enumerate(exps):
        if not e:
            continue
        name = _sym_str(table.names[i], latex)
        parts.append(name if e == 1 else (f"{name}^{{{e}}}" if latex else f"{name}^{e}"))
    return ("*" if not latex else " ").join(parts)


def _sym_str(name: str, latex: bool) -> str:
    if not latex:
        return name
    head = name.rstrip("0123456789")
    sub = name[len(head):]
    head = _GREEK.get(head, head)
    return f"{head}_{{{sub}}}" if sub else head


def poly_str(p, latex: bool = False) -> str:
    if p.is_zero():
        return "0"
    chunks = []
    for key, c in p.sorted_terms():
        mono = _mono_str(p.table, key, latex)
        if not mono:
            chunk = qq_to_str(c)
        elif c == QQ_ONE:
            chunk = mono
        elif c == -QQ_ONE:
            chunk = f"-{mono}"
        else:
            cs = qq_to_str(c)
            if "/" in cs and latex:
                num, den = cs.lstrip("-").split("/")
                cs = ("-" if cs.startswith("-") else "") + rf"\frac{{{num}}}{{{den}}}"
            chunk = f"{cs}{' ' if latex else '*'}{mono}"
        if chunks and not chunk.startswith("-"):
            chunks.append("+" + chunk)
        else:
            chunks.append(chunk)
    return " ".join(chunks) if latex else "".join(
        c if i == 0 else (c if c.startswith("+") or c.startswith("-") else "+" + c)
        for i, c in enumerate(chunks)
    )


def rational_str(r, latex: bool = False) -> str:
    ns = poly_str(r.num, latex)
    if r.den.is_constant() and r.den.constant_value() == QQ_ONE:
        return ns
    ds = poly_str(r.den, latex)
    if latex:
        return rf"\frac{{{ns}}}{{{ds}}}"
    return f"({ns})/({ds})"


def affine_str(table, aff, latex: bool = False) -> str:
    parts = []
    for i, c in aff.lin:
        name = _sym_str(table.names[i], latex)
        if c == QQ_ONE:
            parts.append(name)
        elif c == -QQ_ONE:
            parts.append(f"-{name}")
        else:
            parts.append(f"{qq_to_str(c)}{name}" if not latex else f"{qq_to_str(c)} {name}")
    if aff.const != 0:
        parts.append(qq_to_str(aff.const))
    s = ""
    for p in parts:
        if s and not p.startswith("-"):
            s += "+" + p
        else:
            s += p
    return s or "0"


def expr_str(e, latex: bool = False) -> str:
    from .expr import SymExpr

    assert isinstance(e, SymExpr)
    if not e.terms:
        return "0"
    chunks = []
    for term in e.iter_terms():
        bits = [f"[{rational_str(term.coeff, latex)}]"]
        if not term.exp_arg.is_zero():
            arg = poly_str(term.exp_arg, latex)
            bits.append(rf"e^{{{arg}}}" if latex else f"exp({arg})")
        for i, aff in term.powers:
            name = _sym_str(e.table.names[i], latex)
            a = affine_str(e.table, aff, latex)
            bits.append(f"{name}^{{{a}}}" if latex else f"{name}^({a})")
        joiner = r" \, " if latex else " * "
        chunks.append(joiner.join(bits))
    return (" + " if not latex else " + ").join(chunks)
