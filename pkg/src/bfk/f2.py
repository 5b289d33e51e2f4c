"""Sparse linear algebra and chain complexes over the two-element field.

Matrix semantics are the entry set.  Elimination packs each row into a
Python ``int`` bit-block; XOR on ints is the row operation.

Boundary convention: entry ``(i, j)`` means generator ``i`` occurs in the
boundary of generator ``j`` (column ``j`` is the boundary of ``j``).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import NotAComplex


@dataclass(frozen=True)
class SparseMatrixF2:
    rows: int
    cols: int
    entries: frozenset = frozenset()

    def __post_init__(self):
        for r, c in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseMatrixF2":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ent = frozenset((i, j) for i, row in enumerate(rows) for j, v in enumerate(row) if v % 2)
        return cls(nr, nc, ent)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrixF2":
        return cls(n, n, frozenset((i, i) for i in range(n)))

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c in self.entries:
            out[r][c] = 1
        return out

    def row_bits(self) -> list[int]:
        bits = [0] * self.rows
        for r, c in self.entries:
            bits[r] |= 1 << c
        return bits

    def columns(self) -> list[set[int]]:
        cols: list[set[int]] = [set() for _ in range(self.cols)]
        for r, c in self.entries:
            cols[c].add(r)
        return cols

    def __matmul__(self, other: "SparseMatrixF2") -> "SparseMatrixF2":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list[int]] = {}
        for r, c in self.entries:
            by_row.setdefault(c, []).append(r)
        acc: set = set()
        for r2, c2 in other.entries:
            for r in by_row.get(r2, ()):
                acc ^= {(r, c2)}
        return SparseMatrixF2(self.rows, other.cols, frozenset(acc))

    def is_zero(self) -> bool:
        return not self.entries


def rank_of_rows(rows: Iterable[int]) -> int:
    """Rank of a list of bit-packed rows (consumes a copy)."""
    pivots: dict[int, int] = {}
    r = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            piv = pivots.get(top)
            if piv is None:
                pivots[top] = row
                r += 1
                break
            row ^= piv
    return r


def rank(m: SparseMatrixF2) -> int:
    return rank_of_rows(m.row_bits())


@dataclass(frozen=True)
class ChainComplexF2:
    basis: tuple
    boundary: SparseMatrixF2

    def __init__(self, basis: Sequence[Hashable], boundary: SparseMatrixF2 | None = None):
        basis = tuple(basis)
        if boundary is None:
            boundary = SparseMatrixF2(len(basis), len(basis))
        if boundary.rows != len(basis) or boundary.cols != len(basis):
            raise ValueError("boundary must be square on the basis")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "boundary", boundary)

    @classmethod
    def from_map(cls, basis: Sequence[Hashable], d: dict) -> "ChainComplexF2":
        """Build from ``generator -> iterable of generators in its boundary``."""
        index = {b: i for i, b in enumerate(basis)}
        ent: set = set()
        for src, targets in d.items():
            j = index[src]
            for t in targets:
                ent ^= {(index[t], j)}
        return cls(basis, SparseMatrixF2(len(basis), len(basis), frozenset(ent)))

    def __len__(self) -> int:
        return len(self.basis)

    def squares_to_zero(self) -> bool:
        return (self.boundary @ self.boundary).is_zero()

    def check(self) -> "ChainComplexF2":
        if not self.squares_to_zero():
            raise NotAComplex("boundary does not square to zero")
        return self

    def to_text(self) -> str:
        lines = [f"generators {len(self.basis)}"]
        lines += [f"  {i}: {b}" for i, b in enumerate(self.basis)]
        pairs = sorted((c, r) for r, c in self.boundary.entries)
        lines.append("boundary " + " ".join(f"{c}->{r}" for c, r in pairs))
        return "\n".join(lines)


def homology_dim(c: ChainComplexF2) -> int:
    c.check()
    return len(c.basis) - 2 * rank(c.boundary)


def reduce(c: ChainComplexF2) -> ChainComplexF2:
    """Cancel boundary entries until none remain.

    Each cancellation removes the pair ``(i, j)`` with ``i`` in the boundary of
    ``j`` and rewires ``d'(x) = d(x) + <d x, i> d(j)`` on the survivors.  The
    entry chosen is always the smallest ``(row, col)`` still present.
    """
    c.check()
    n = len(c.basis)
    cols: list[set[int]] = c.boundary.columns()
    rows: list[set[int]] = [set() for _ in range(n)]
    for r, col in c.boundary.entries:
        rows[r].add(col)
    alive = [True] * n
    heap = sorted(c.boundary.entries)
    heapq.heapify(heap)

    def toggle(r: int, col: int) -> None:
        if r in cols[col]:
            cols[col].discard(r)
            rows[r].discard(col)
        else:
            cols[col].add(r)
            rows[r].add(col)
            heapq.heappush(heap, (r, col))

    while heap:
        i, j = heapq.heappop(heap)
        if i == j or not (alive[i] and alive[j]) or i not in cols[j]:
            continue
        targets = [y for y in cols[j] if y not in (i, j)]
        sources = [x for x in rows[i] if x not in (i, j)]
        for x in sources:
            for y in targets:
                toggle(y, x)
        for g in (i, j):
            alive[g] = False
            for col in list(rows[g]):
                cols[col].discard(g)
            rows[g].clear()
            for r in list(cols[g]):
                rows[r].discard(g)
            cols[g].clear()

    keep = [g for g in range(n) if alive[g]]
    new_index = {g: k for k, g in enumerate(keep)}
    ent = frozenset((new_index[r], new_index[col]) for col in keep for r in cols[col])
    return ChainComplexF2([c.basis[g] for g in keep], SparseMatrixF2(len(keep), len(keep), ent))
