"""Finite magmas and semigroups given by Cayley tables.

Elements are 0-based indices; ``table[r][s]`` is the product of r and s.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Sequence, Tuple, Union

__all__ = [
    "MAX_ORDER",
    "MAX_ASSOCIATIVE_ENUM_ORDER",
    "TableError",
    "CayleyTable",
    "SemigroupRecord",
    "NonAssociative",
    "validate_associativity",
    "associativity_witness",
    "find_identity",
    "enumerate_tables",
]

MAX_ORDER = 6
MAX_ASSOCIATIVE_ENUM_ORDER = 4


class TableError(ValueError):
    """Structurally malformed Cayley table (wrong shape or entry out of range)."""


@dataclass(frozen=True)
class CayleyTable:
    n: int
    table: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_ORDER:
            raise TableError("order must be an integer in 1..%d, got %r" % (MAX_ORDER, self.n))
        rows = tuple(tuple(row) for row in self.table)
        if len(rows) != self.n:
            raise TableError("expected %d rows, got %d" % (self.n, len(rows)))
        for r, row in enumerate(rows):
            if len(row) != self.n:
                raise TableError("row %d has %d entries, expected %d" % (r, len(row), self.n))
            for s, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, int):
                    raise TableError("entry %r is not an integer at row %d, col %d" % (v, r, s))
                if not 0 <= v < self.n:
                    raise TableError("entry %d out of range at row %d, col %d" % (v, r, s))
        object.__setattr__(self, "table", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CayleyTable":
        return cls(len(rows), tuple(tuple(r) for r in rows))

    def __call__(self, r: int, s: int) -> int:
        return self.table[r][s]

    def rows(self):
        return [list(r) for r in self.table]

    def label(self) -> str:
        return "/".join("".join(str(v) for v in row) for row in self.table)

    def __str__(self):
        return str(self.rows())


@dataclass(frozen=True)
class SemigroupRecord:
    table: CayleyTable
    identity: Optional[int] = None
    associative: bool = True

    def __post_init__(self):
        if not self.associative:
            raise ValueError("SemigroupRecord requires an associative table")
        e = self.identity
        if e is not None:
            t = self.table
            if any(t(e, s) != s or t(s, e) != s for s in range(t.n)):
                raise ValueError("%d is not a two-sided identity" % e)

    @property
    def n(self) -> int:
        return self.table.n


@dataclass(frozen=True)
class NonAssociative:
    table: CayleyTable
    witness: Tuple[int, int, int]

    def __bool__(self):
        return False


def associativity_witness(table: CayleyTable) -> Optional[Tuple[int, int, int]]:
    """Lexicographically smallest (r, s, t) with (rs)t != r(st), or None."""
    t = table.table
    rng = range(table.n)
    for r, s, u in product(rng, rng, rng):
        if t[t[r][s]][u] != t[r][t[s][u]]:
            return (r, s, u)
    return None


def _identity_of(table: CayleyTable) -> Optional[int]:
    t = table.table
    rng = range(table.n)
    found = [e for e in rng if all(t[e][s] == s and t[s][e] == s for s in rng)]
    if len(found) > 1:
        # two identities e, f would give e = ef = f
        raise ValueError("corrupt table: several identities %r" % found)
    return found[0] if found else None


def validate_associativity(table: CayleyTable) -> Union[SemigroupRecord, NonAssociative]:
    """Return a SemigroupRecord, or a NonAssociative carrying the failing triple.

    The NonAssociative result is falsy, so ``if validate_associativity(t):``
    reads naturally.
    """
    if not isinstance(table, CayleyTable):
        table = CayleyTable.from_rows(table)
    witness = associativity_witness(table)
    if witness is not None:
        return NonAssociative(table, witness)
    return SemigroupRecord(table, _identity_of(table))


def find_identity(rec: Union[SemigroupRecord, CayleyTable]) -> Optional[int]:
    table = rec.table if isinstance(rec, SemigroupRecord) else rec
    return _identity_of(table)


def enumerate_tables(n: int, associative_only: bool = False) -> Iterator[CayleyTable]:
    """Yield every labeled table of order n in lexicographic (row-major) order.

    With ``associative_only`` the search backtracks over partial tables and
    prunes as soon as a fully determined triple fails to associate.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("order must be a positive integer, got %r" % (n,))
    if associative_only:
        if n > MAX_ASSOCIATIVE_ENUM_ORDER:
            raise ValueError(
                "associative enumeration supports orders 1..%d, got %d" % (MAX_ASSOCIATIVE_ENUM_ORDER, n)
            )
        yield from _associative_tables(n)
        return
    if n > MAX_ORDER:
        raise ValueError("magma enumeration supports orders 1..%d, got %d" % (MAX_ORDER, n))
    for flat in product(range(n), repeat=n * n):
        yield CayleyTable(n, tuple(flat[i * n : (i + 1) * n] for i in range(n)))


def _associative_tables(n: int) -> Iterator[CayleyTable]:
    cells = n * n
    flat = [-1] * cells
    rng = range(n)

    def consistent() -> bool:
        # earlier prefixes passed, so any clash found here involves the new cell
        for a in rng:
            for b in rng:
                ab = flat[a * n + b]
                if ab < 0:
                    continue
                for c in rng:
                    bc = flat[b * n + c]
                    if bc < 0:
                        continue
                    left = flat[ab * n + c]
                    right = flat[a * n + bc]
                    if left >= 0 and right >= 0 and left != right:
                        return False
        return True

    def rec(pos: int):
        if pos == cells:
            yield CayleyTable(n, tuple(tuple(flat[i * n : (i + 1) * n]) for i in rng))
            return
        for v in rng:
            flat[pos] = v
            if consistent():
                yield from rec(pos + 1)
        flat[pos] = -1

    yield from rec(0)
