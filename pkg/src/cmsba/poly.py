"""Sparse exact multivariate polynomials over the rationals.

Terms live in a dict keyed by packed exponent integers (see symbols.VarTable);
coefficients are exact rationals.  Equality is structural; the canonical term
order is graded lexicographic in table order.

Polynomials built as products of factors (every denominator the residue
pipeline ever creates) carry their factorization along, which lets gcd and
exact division run by trial division against affine-linear factors.  The
general gcd is a content/subresultant-PRS recursion and is used whenever no
factorization is known.
"""

from __future__ import annotations

import random
from typing import Iterable, Mapping, Sequence

from .coeffs import QQ, QQ_ONE, QQ_ZERO, qq
from .symbols import PACK_BITS, PACK_MASK, VarTable


class PolynomialError(ArithmeticError):
    pass


class MultiPoly:
    __slots__ = ("table", "terms", "_factors")

    def __init__(self, table: VarTable, terms: dict, _factors=None):
        self.table = table
        self.terms = terms
        # invariant when set: self == scalar * prod(f_i ** e_i)
        self._factors = _factors

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, table: VarTable) -> "MultiPoly":
        return cls(table, {})

    @classmethod
    def const(cls, table: VarTable, c) -> "MultiPoly":
        c = qq(c) if not isinstance(c, type(QQ_ONE)) else c
        if c == 0:
            return cls(table, {})
        return cls(table, {0: c}, (c, ()))

    @classmethod
    def symbol(cls, table: VarTable, name: str) -> "MultiPoly":
        return cls(table, {table.unit(table.index(name)): QQ_ONE})

    @classmethod
    def linear(cls, table: VarTable, coeffs: Mapping[str, object], const=0) -> "MultiPoly":
        """Affine-linear combination sum(c_s * s) + const."""
        terms = {}
        for name, c in coeffs.items():
            c = qq(c)
            if c != 0:
                terms[table.unit(table.index(name))] = c
        c0 = qq(const)
        if c0 != 0:
            terms[0] = c0
        return cls(table, terms)

    @classmethod
    def monomial(cls, table: VarTable, exps: Sequence[int], coeff=1) -> "MultiPoly":
        c = qq(coeff)
        if c == 0:
            return cls.zero(table)
        return cls(table, {table.pack(exps): c})

    @classmethod
    def from_factors(cls, table: VarTable, scalar, factors: Iterable[tuple["MultiPoly", int]]) -> "MultiPoly":
        """Expanded product scalar * prod(f**e), stamped with its factorization.

        Factors are canonicalized to monic (graded-lex leading coefficient 1);
        scale changes fold into the scalar.
        """
        scalar = qq(scalar)
        canon: dict = {}
        order: list = []
        for f, e in factors:
            if e == 0:
                continue
            if e < 0:
                raise PolynomialError("negative factor exponent in from_factors")
            if f.is_zero():
                return cls.zero(table)
            if f.is_constant():
                scalar *= f.constant_value() ** e
                continue
            lc = f.leading_coeff()
            if lc != QQ_ONE:
                scalar *= lc**e
                f = f.scale(QQ_ONE / lc)
            k = f.key_tuple()
            if k in canon:
                prev_f, prev_e = canon[k]
                canon[k] = (prev_f, prev_e + e)
            else:
                canon[k] = (f, e)
                order.append(k)
        if scalar == 0:
            return cls.zero(table)
        stamped = tuple(canon[k] for k in order)
        acc = cls(table, {0: scalar})
        for f, e in stamped:
            for _ in range(e):
                acc = acc.mul(f)
        # fresh wrapper: never alias (and mutate) an input factor object
        return cls(table, acc.terms, (scalar, stamped))

    # -- basic predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        if not self.terms:
            return QQ_ZERO
        if self.is_constant():
            return self.terms[0]
        raise PolynomialError("not a constant polynomial")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.table == other.table
            and self.terms == other.terms
        )

    __hash__ = None  # structural identity via key_tuple when needed

    def key_tuple(self):
        return tuple(sorted(self.terms.items()))

    def __repr__(self):
        from .printing import poly_str

        return f"MultiPoly({poly_str(self)})"

    def used_indices(self) -> set[int]:
        used = set()
        for key in self.terms:
            i = 0
            while key:
                if key & PACK_MASK:
                    used.add(i)
                key >>= PACK_BITS
                i += 1
        return used

    # -- ring operations -----------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.table != other.table:
            raise PolynomialError("operands use different symbol tables")

    def add(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k)
            if s is None:
                terms[k] = c
            else:
                s = s + c
                if s == 0:
                    del terms[k]
                else:
                    terms[k] = s
        return MultiPoly(self.table, terms)

    def sub(self, other: "MultiPoly") -> "MultiPoly":
        return self.add(other.neg())

    def neg(self) -> "MultiPoly":
        fac = None
        if self._factors is not None:
            fac = (-self._factors[0], self._factors[1])
        return MultiPoly(self.table, {k: -c for k, c in self.terms.items()}, fac)

    def scale(self, c) -> "MultiPoly":
        c = qq(c)
        if c == 0:
            return MultiPoly.zero(self.table)
        if c == QQ_ONE:
            return self
        fac = None
        if self._factors is not None:
            fac = (self._factors[0] * c, self._factors[1])
        return MultiPoly(self.table, {k: v * c for k, v in self.terms.items()}, fac)

    def mul(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.table)
        if other.is_constant():
            return self.scale(other.terms[0])
        if self.is_constant():
            return other.scale(self.terms[0])
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                s = get(k)
                if s is None:
                    out[k] = ca * cb
                else:
                    s = s + ca * cb
                    if s == 0:
                        del out[k]
                    else:
                        out[k] = s
        fac = _merge_factors(self, other)
        return MultiPoly(self.table, out, fac)

    def pow(self, e: int) -> "MultiPoly":
        if e < 0:
            raise PolynomialError("negative power of a polynomial")
        if e == 0:
            return MultiPoly.const(self.table, 1)
        if self._factors is not None:
            s, fs = self._factors
            return MultiPoly.from_factors(self.table, s**e, [(f, k * e) for f, k in fs])
        out = self
        for _ in range(e - 1):
            out = out.mul(self)
        return out

    __add__ = add
    __sub__ = sub
    __mul__ = mul
    __neg__ = neg
    __pow__ = pow

    # -- degrees and leading structure ----------------------------------------

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        td = self.table.total_degree
        return max(td(k) for k in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        shift = PACK_BITS * i
        return max((k >> shift) & PACK_MASK for k in self.terms)

    def leading_key(self) -> int:
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        grlex = self.table.grlex
        return max(self.terms, key=grlex)

    def leading_coeff(self):
        return self.terms[self.leading_key()]

    def leading_part(self) -> "MultiPoly":
        """Sum of all monomials of maximal total degree."""
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading part")
        td = self.table.total_degree
        dmax = max(td(k) for k in self.terms)
        return MultiPoly(self.table, {k: c for k, c in self.terms.items() if td(k) == dmax})

    def monic(self) -> tuple["MultiPoly", object]:
        """(self/lc, lc) with lc the graded-lex leading coefficient."""
        lc = self.leading_coeff()
        if lc == QQ_ONE:
            return self, QQ_ONE
        return self.scale(QQ_ONE / lc), lc

    # -- calculus and substitution --------------------------------------------

    def derivative(self, i: int) -> "MultiPoly":
        shift = PACK_BITS * i
        unit = 1 << shift
        out = {}
        for k, c in self.terms.items():
            e = (k >> shift) & PACK_MASK
            if e:
                out[k - unit] = c * e
        return MultiPoly(self.table, out)

    def as_univariate(self, i: int) -> dict[int, "MultiPoly"]:
        """Decompose by the degree of symbol i; values are free of symbol i."""
        shift = PACK_BITS * i
        mask_out = ~(PACK_MASK << shift)
        buckets: dict[int, dict] = {}
        for k, c in self.terms.items():
            e = (k >> shift) & PACK_MASK
            buckets.setdefault(e, {})[k & mask_out] = c
        return {e: MultiPoly(self.table, t) for e, t in buckets.items()}

    def subst(self, i: int, value: "MultiPoly") -> "MultiPoly":
        """Exact substitution symbol_i -> value (a polynomial in the same table)."""
        self._check(value)
        if self._factors is not None and not self.is_constant():
            s, fs = self._factors
            return MultiPoly.from_factors(
                self.table, s, [(f.subst(i, value), e) for f, e in fs]
            )
        parts = self.as_univariate(i)
        out = MultiPoly.zero(self.table)
        vpow = MultiPoly.const(self.table, 1)
        last = 0
        for e in sorted(parts):
            for _ in range(e - last):
                vpow = vpow.mul(value)
            last = e
            out = out.add(parts[e].mul(vpow))
        return out

    def subst_zero(self, i: int) -> "MultiPoly":
        shift = PACK_BITS * i
        out = {k: c for k, c in self.terms.items() if not (k >> shift) & PACK_MASK}
        return MultiPoly(self.table, out)

    def retable(self, table: VarTable) -> "MultiPoly":
        """Move to an extended table (packed keys stay valid)."""
        if not table.extends(self.table):
            raise PolynomialError("retable target does not extend the current table")
        fac = None
        if self._factors is not None:
            s, fs = self._factors
            fac = (s, tuple((f.retable(table), e) for f, e in fs))
        return MultiPoly(table, self.terms, fac)

    def project(self, table: VarTable) -> "MultiPoly":
        """Move to a prefix table; the dropped symbols must be unused."""
        if not self.table.extends(table):
            raise PolynomialError("project target is not a prefix of the current table")
        limit = 1 << (PACK_BITS * len(table))
        for k in self.terms:
            if k >= limit:
                raise PolynomialError("projection would drop a used symbol")
        fac = None
        if self._factors is not None:
            s, fs = self._factors
            fac = (s, tuple((f.project(table), e) for f, e in fs))
        return MultiPoly(table, self.terms, fac)

    def map_symbols(self, table: VarTable, mapping: Mapping[int, int]) -> "MultiPoly":
        """Relabel symbol indices (old -> new) into a possibly different table."""
        if self._factors is not None and not self.is_constant():
            s, fs = self._factors
            return MultiPoly.from_factors(
                table, s, [(f.map_symbols(table, mapping), e) for f, e in fs]
            )
        out = {}
        n = len(self.table)
        for k, c in self.terms.items():
            exps = self.table.unpack(k)
            new = [0] * len(table)
            for i in range(n):
                if exps[i]:
                    new[mapping.get(i, i)] += exps[i]
            out[table.pack(new)] = c
        return MultiPoly(table, out)

    # -- division -------------------------------------------------------------

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly | None":
        """Exact quotient self/divisor, or None when not divisible."""
        self._check(divisor)
        if divisor.is_zero():
            raise PolynomialError("division by zero polynomial")
        if not self.terms:
            return self
        if divisor.is_constant():
            return self.scale(QQ_ONE / divisor.terms[0])
        if self._factors is not None and divisor._factors is not None:
            q = self._stamped_div(divisor)
            if q is not None:
                return q
        # fast reject on degrees
        if self.total_degree() < divisor.total_degree():
            return None
        if divisor.total_degree() == 1:
            return self._synthetic_div(divisor)
        return self._exact_div_general(divisor)

    def _synthetic_div(self, divisor: "MultiPoly") -> "MultiPoly | None":
        """Division by an affine-linear divisor in one pass per main-degree."""
        table = self.table
        lk = divisor.leading_key()
        lc = divisor.terms[lk]
        iu = next(iter((k for k in range(len(table)) if (lk >> (PACK_BITS * k)) & PACK_MASK)))
        v = MultiPoly(
            table,
            {k: -c / lc for k, c in divisor.terms.items() if k != lk},
        )
        parts = self.as_univariate(iu)
        d_max = max(parts)
        if d_max == 0:
            return None
        zero = MultiPoly.zero(table)
        carry = parts.get(d_max, zero)
        quo: dict = {}
        shift = PACK_BITS * iu
        for a in range(d_max - 1, -1, -1):
            if not carry.is_zero():
                for k, c in carry.terms.items():
                    quo[k + (a << shift)] = c
            nxt = parts.get(a, zero)
            if not v.is_zero() and not carry.is_zero():
                nxt = nxt.add(carry.mul(v))
            carry = nxt
        if not carry.is_zero():
            return None
        out = MultiPoly(table, quo)
        return out.scale(QQ_ONE / lc) if lc != QQ_ONE else out

    def _exact_div_general(self, divisor: "MultiPoly") -> "MultiPoly | None":
        import heapq

        table = self.table
        grlex = table.grlex
        dkey = divisor.leading_key()
        dexp = table.unpack(dkey)
        dc = divisor.terms[dkey]
        rem = dict(self.terms)
        # max-heap by graded-lex order, lazy deletion
        heap = [(-g[0], tuple(-e for e in g[1]), k) for k, g in ((k, grlex(k)) for k in rem)]
        heapq.heapify(heap)
        quo: dict = {}
        dterms = list(divisor.terms.items())
        while heap:
            _, _, lk = heapq.heappop(heap)
            if lk not in rem:
                continue
            lexp = table.unpack(lk)
            if any(le < de for le, de in zip(lexp, dexp)):
                return None
            qk = lk - dkey
            qc = rem.pop(lk) / dc
            quo[qk] = quo.get(qk, QQ_ZERO) + qc
            for k, c in dterms:
                if k == dkey:
                    continue
                kk = k + qk
                s = rem.get(kk)
                if s is None:
                    rem[kk] = -c * qc
                    g = grlex(kk)
                    heapq.heappush(heap, (-g[0], tuple(-e for e in g[1]), kk))
                else:
                    s = s - c * qc
                    if s == 0:
                        del rem[kk]
                    else:
                        rem[kk] = s
        if rem:
            return None
        return MultiPoly(table, {k: c for k, c in quo.items() if c != 0})

    def _stamped_div(self, divisor: "MultiPoly") -> "MultiPoly | None":
        """Quotient by factor-multiplicity subtraction when stamps align."""
        s_self, f_self = self._factors
        s_div, f_div = divisor._factors
        have = {f.key_tuple(): e for f, e in f_self}
        for f, e in f_div:
            if have.get(f.key_tuple(), 0) < e:
                return None
        need = {f.key_tuple(): e for f, e in f_div}
        out = [(f, e - need.get(f.key_tuple(), 0)) for f, e in f_self]
        return MultiPoly.from_factors(self.table, s_self / s_div, out)

    def divisible_power(self, factor: "MultiPoly", cap: int) -> tuple[int, "MultiPoly"]:
        """Largest k <= cap with factor**k | self; returns (k, self/factor**k)."""
        k = 0
        cur = self
        while k < cap:
            q = cur.exact_div(factor)
            if q is None:
                break
            cur = q
            k += 1
        return k, cur

    # -- canonical iteration ---------------------------------------------------

    def sorted_terms(self) -> list[tuple[int, object]]:
        grlex = self.table.grlex
        return sorted(self.terms.items(), key=lambda kv: grlex(kv[0]), reverse=True)


def _merge_factors(a: MultiPoly, b: MultiPoly):
    if a._factors is None or b._factors is None:
        return None
    sa, fa = a._factors
    sb, fb = b._factors
    canon: dict = {}
    order: list = []
    for f, e in fa + fb:
        k = f.key_tuple()
        if k in canon:
            pf, pe = canon[k]
            canon[k] = (pf, pe + e)
        else:
            canon[k] = (f, e)
            order.append(k)
    return (sa * sb, tuple(canon[k] for k in order))


# -- gcd ------------------------------------------------------------------


def _stamp_all_linear(p: MultiPoly) -> bool:
    if p._factors is None:
        return False
    return all(f.total_degree() == 1 for f, _ in p._factors[1])


def _gcd_from_stamps(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    # both stamped with affine-linear (hence irreducible) factors
    qmap = {f.key_tuple(): e for f, e in q._factors[1]}
    out = []
    for f, e in p._factors[1]:
        k = min(e, qmap.get(f.key_tuple(), 0))
        if k:
            out.append((f, k))
    return MultiPoly.from_factors(p.table, 1, out)


def _gcd_by_trial(stamped: MultiPoly, other: MultiPoly) -> MultiPoly:
    # every common divisor is a product of the stamped side's linear factors
    out = []
    rest = other
    for f, e in stamped._factors[1]:
        k, rest = rest.divisible_power(f, e)
        if k:
            out.append((f, k))
    return MultiPoly.from_factors(stamped.table, 1, out)


_PROBE_PRIMES = (1000003, 1000033, 1000037)


def _univariate_gcd_degree(a: list, b: list) -> int:
    """Degree of gcd of two univariate rational coefficient lists."""
    while b and not b[-1]:
        b.pop()
    while a and not a[-1]:
        a.pop()
    while b:
        # a mod b
        da, db = len(a) - 1, len(b) - 1
        inv = QQ_ONE / b[-1]
        bb = [c * inv for c in b]
        r = list(a)
        for i in range(da - db, -1, -1):
            c = r[db + i]
            if c:
                r[db + i] = QQ_ZERO
                for j in range(db):
                    r[i + j] -= c * bb[j]
        while r and not r[-1]:
            r.pop()
        a, b = b, r
    return len(a) - 1


def _coprime_probe(p: MultiPoly, q: MultiPoly, main: int) -> bool:
    """True if an evaluation image proves gcd(p, q) is constant."""
    rng = random.Random(0x5EB)
    others = (p.used_indices() | q.used_indices()) - {main}
    dp, dq = p.degree_in(main), q.degree_in(main)
    for _ in range(3):
        point = {i: qq(rng.randint(2, 97)) for i in others}
        ap = _eval_except(p, main, point)
        aq = _eval_except(q, main, point)
        if len(ap) - 1 == dp and len(aq) - 1 == dq:
            return _univariate_gcd_degree(ap, aq) == 0
    return False


def _eval_except(p: MultiPoly, main: int, point: dict) -> list:
    shift = PACK_BITS * main
    d = p.degree_in(main)
    out = [QQ_ZERO] * (d + 1)
    table = p.table
    for k, c in p.terms.items():
        e = (k >> shift) & PACK_MASK
        v = c
        kk = k - (e << shift)
        i = 0
        while kk:
            ee = kk & PACK_MASK
            if ee:
                v = v * point[i] ** ee
            kk >>= PACK_BITS
            i += 1
        out[e] += v
    while out and not out[-1]:
        out.pop()
    return out


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """gcd over Q[x...], normalized to graded-lex leading coefficient 1.

    Coprime inputs (the common case when reducing fractions) are detected
    by a univariate evaluation image; pipeline denominators resolve by
    trial division against their recorded linear factors; everything else
    goes through the content/subresultant recursion.
    """
    if p.is_zero():
        return q.monic()[0] if not q.is_zero() else q
    if q.is_zero():
        return p.monic()[0]
    if p.is_constant() or q.is_constant():
        return MultiPoly.const(p.table, 1)
    if p.terms == q.terms:
        return p.monic()[0]
    if _stamp_all_linear(p) and _stamp_all_linear(q):
        return _gcd_from_stamps(p, q).monic()[0]
    if _stamp_all_linear(p):
        return _gcd_by_trial(p, q).monic()[0]
    if _stamp_all_linear(q):
        return _gcd_by_trial(q, p).monic()[0]
    common = p.used_indices() & q.used_indices()
    if not common:
        return MultiPoly.const(p.table, 1)
    main = min(common, key=lambda i: min(p.degree_in(i), q.degree_in(i)))
    if _coprime_probe(p, q, main):
        return MultiPoly.const(p.table, 1)
    return _gcd_prs(p, q, main).monic()[0]


def _content_gcd(parts: Iterable[MultiPoly]) -> MultiPoly:
    g = None
    for c in parts:
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant() and not g.is_zero():
            return MultiPoly.const(g.table, 1)
    return g


def _prem(a: dict[int, MultiPoly], b: dict[int, MultiPoly], table: VarTable):
    """Pseudo-remainder of univariate polys with MultiPoly coefficients."""
    da, db = max(a), max(b)
    lb = b[db]
    r = dict(a)
    for d in range(da, db - 1, -1):
        rd = r.get(d)
        if rd is None or rd.is_zero():
            # still must scale the rest to keep the pseudo-division exact
            r = {k: v.mul(lb) for k, v in r.items() if not v.is_zero()}
            r.pop(d, None)
            continue
        r = {k: v.mul(lb) for k, v in r.items() if not v.is_zero()}
        for k, v in b.items():
            kk = k + d - db
            t = r.get(kk, MultiPoly.zero(table)).sub(v.mul(rd))
            if t.is_zero():
                r.pop(kk, None)
            else:
                r[kk] = t
        r.pop(d, None)
    return {k: v for k, v in r.items() if not v.is_zero()}


def _primitive(u: dict[int, MultiPoly], table: VarTable):
    cont = _content_gcd(u.values())
    if cont.is_constant():
        return u, MultiPoly.const(table, 1)
    out = {}
    for k, v in u.items():
        q = v.exact_div(cont)
        if q is None:
            raise PolynomialError("content division failed (internal error)")
        out[k] = q
    return out, cont


def _gcd_prs(p: MultiPoly, q: MultiPoly, main: int) -> MultiPoly:
    """Primitive subresultant PRS gcd with recursive content extraction."""
    table = p.table
    fu = p.as_univariate(main)
    gu = q.as_univariate(main)
    fu, contf = _primitive(fu, table)
    gu, contg = _primitive(gu, table)
    cont = poly_gcd(contf, contg)
    if max(fu) < max(gu):
        fu, gu = gu, fu
    g = MultiPoly.const(table, 1)
    h = MultiPoly.const(table, 1)
    while True:
        delta = max(fu) - max(gu)
        r = _prem(fu, gu, table)
        if not r:
            gu, _ = _primitive(gu, table)
            break
        if max(r) == 0:
            gu = {0: MultiPoly.const(table, 1)}
            break
        divisor = g.mul(h.pow(delta))
        nxt = {}
        for k, v in r.items():
            qv = v.exact_div(divisor)
            if qv is None:
                raise PolynomialError("subresultant division failed (internal error)")
            nxt[k] = qv
        fu, gu = gu, nxt
        g = fu[max(fu)]
        if delta > 0:
            h = g.pow(delta).exact_div(h.pow(delta - 1))
            if h is None:
                raise PolynomialError("subresultant h-update failed (internal error)")
    cand = _recombine(gu, main, table)
    cand, _ = _primitive_poly(cand, main)
    if p.exact_div(cand) is None or q.exact_div(cand) is None:
        raise PolynomialError("subresultant gcd failed divisibility check (internal error)")
    return cont.mul(cand)


def _recombine(u: dict[int, MultiPoly], main: int, table: VarTable) -> MultiPoly:
    out = MultiPoly.zero(table)
    shift = PACK_BITS * main
    for e, coef in u.items():
        if e:
            mono = MultiPoly(table, {e << shift: QQ_ONE})
            out = out.add(coef.mul(mono))
        else:
            out = out.add(coef)
    return out


def _primitive_poly(p: MultiPoly, main: int):
    u = p.as_univariate(main)
    u, cont = _primitive(u, p.table)
    return _recombine(u, main, p.table), cont
