"""Ordered symbol tables.

Every symbolic object references a VarTable: an ordered, immutable list of
distinct symbol names, each tagged as a position symbol (x, y, z, u, v, w, t
families) or a spectral symbol (lambda, nu, mu families).  Monomial exponent
vectors are packed into a single integer with 8 bits per symbol, in table
order; extending a table appends symbols, which leaves existing packed keys
valid.
"""

from __future__ import annotations

from typing import Iterable, Sequence

POSITION = "position"
SPECTRAL = "spectral"

PACK_BITS = 8
PACK_MASK = 0xFF
MAX_EXP = 255


class SymbolError(ValueError):
    pass


class VarTable:
    __slots__ = ("names", "kinds", "_index")

    def __init__(self, entries: Iterable[tuple[str, str]]):
        entries = tuple(entries)
        names = tuple(e[0] for e in entries)
        kinds = tuple(e[1] for e in entries)
        if len(set(names)) != len(names):
            raise SymbolError(f"duplicate symbol names in {names}")
        for k in kinds:
            if k not in (POSITION, SPECTRAL):
                raise SymbolError(f"unknown symbol kind {k!r}")
        self.names = names
        self.kinds = kinds
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VarTable)
            and self.names == other.names
            and self.kinds == other.kinds
        )

    def __hash__(self):
        return hash((self.names, self.kinds))

    def __repr__(self):
        return f"VarTable({list(zip(self.names, self.kinds))})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SymbolError(f"symbol {name!r} not registered in table {self.names}")

    def kind(self, name: str) -> str:
        return self.kinds[self.index(name)]

    def is_position(self, i: int) -> bool:
        return self.kinds[i] == POSITION

    def is_spectral(self, i: int) -> bool:
        return self.kinds[i] == SPECTRAL

    def extend(self, entries: Iterable[tuple[str, str]]) -> "VarTable":
        return VarTable(tuple(zip(self.names, self.kinds)) + tuple(entries))

    def extends(self, other: "VarTable") -> bool:
        """True if self appends symbols to other (prefix compatibility)."""
        k = len(other.names)
        return self.names[:k] == other.names and self.kinds[:k] == other.kinds

    # -- packed exponent keys ------------------------------------------------

    def pack(self, exps: Sequence[int]) -> int:
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXP:
                raise OverflowError(f"exponent {e} out of packed range")
            key |= e << (PACK_BITS * i)
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        out = []
        for _ in range(len(self.names)):
            out.append(key & PACK_MASK)
            key >>= PACK_BITS
        return tuple(out)

    def exponent(self, key: int, i: int) -> int:
        return (key >> (PACK_BITS * i)) & PACK_MASK

    def total_degree(self, key: int) -> int:
        t = 0
        while key:
            t += key & PACK_MASK
            key >>= PACK_BITS
        return t

    def grlex(self, key: int):
        """Sort key for graded-lexicographic order (max = leading)."""
        exps = self.unpack(key)
        return (sum(exps), exps)

    def unit(self, i: int) -> int:
        return 1 << (PACK_BITS * i)


def positions(*names: str) -> list[tuple[str, str]]:
    return [(n, POSITION) for n in names]


def spectrals(*names: str) -> list[tuple[str, str]]:
    return [(n, SPECTRAL) for n in names]
