"""Linear algebra over the two-element field.

Vectors and matrices are sparse position sets. Elimination densifies rows
into uint64 words. Pivots are always the first available nonzero in column
order, so reduced forms, particular solutions (free variables zero), and
kernel bases are deterministic functions of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

__all__ = [
    "BitMatrix2",
    "BitVector2",
    "Echelon",
    "binom_mod2",
    "echelonize",
    "mat_vec",
    "right_kernel_basis",
    "solve_right",
]


def binom_mod2(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) mod 2, via the digit criterion.

    Out-of-range arguments (k < 0, n < 0, k > n) give 0.
    """
    if k < 0 or n < 0 or k > n:
        return 0
    return 1 if (k & n) == k else 0


@dataclass(frozen=True)
class BitVector2:
    """Vector over GF(2): a length and the set of nonzero positions."""

    length: int
    support: frozenset[int]

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("negative length")
        if not isinstance(self.support, frozenset):
            object.__setattr__(self, "support", frozenset(self.support))
        for i in self.support:
            if not 0 <= i < self.length:
                raise ValueError(f"position {i} outside [0, {self.length})")

    def __add__(self, other: "BitVector2") -> "BitVector2":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BitVector2(self.length, self.support ^ other.support)

    def is_zero(self) -> bool:
        return not self.support


@dataclass(frozen=True)
class BitMatrix2:
    """Matrix over GF(2) stored as the set of (row, col) positions of ones."""

    nrows: int
    ncols: int
    entries: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("negative shape")
        if not isinstance(self.entries, frozenset):
            object.__setattr__(self, "entries", frozenset(self.entries))
        for r, c in self.entries:
            if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                raise ValueError(f"entry ({r}, {c}) outside {self.nrows}x{self.ncols}")

    @classmethod
    def from_columns(cls, nrows: int, columns: Iterable[Iterable[int]]) -> "BitMatrix2":
        entries = []
        ncols = 0
        for c, rows in enumerate(columns):
            ncols = c + 1
            entries.extend((r, c) for r in rows)
        return cls(nrows, ncols, frozenset(entries))

    def column(self, c: int) -> BitVector2:
        return BitVector2(self.nrows, frozenset(r for r, cc in self.entries if cc == c))


def mat_vec(m: BitMatrix2, v: BitVector2) -> BitVector2:
    """Product M v over GF(2)."""
    if v.length != m.ncols:
        raise ValueError("shape mismatch")
    rows: set[int] = set()
    for r, c in m.entries:
        if c in v.support:
            rows.symmetric_difference_update((r,))
    return BitVector2(m.nrows, frozenset(rows))


def _pack_rows(row_supports: list[Iterable[int]], ncols: int) -> np.ndarray:
    nwords = max(1, (ncols + 63) >> 6)
    out = np.zeros((len(row_supports), nwords), dtype=np.uint64)
    for r, cols in enumerate(row_supports):
        for c in cols:
            out[r, c >> 6] |= np.uint64(1 << (c & 63))
    return out


def _pack_matrix(m: BitMatrix2) -> np.ndarray:
    nwords = max(1, (m.ncols + 63) >> 6)
    out = np.zeros((m.nrows, nwords), dtype=np.uint64)
    for r, c in m.entries:
        out[r, c >> 6] |= np.uint64(1 << (c & 63))
    return out


class Echelon:
    """Row-reduced form of a packed bit matrix, shared by the heavier solvers.

    Pivots are claimed only among the first `nclaim` columns; any further
    columns ride along passively under the row operations, which lets one
    reduction answer many right-hand sides. `rows` is mutated in place.
    """

    def __init__(self, rows: np.ndarray, nclaim: int, ncols: int):
        if rows.ndim != 2 or rows.dtype != np.uint64:
            raise ValueError("expected a packed uint64 row array")
        self.rows = rows
        self.nclaim = nclaim
        self.ncols = ncols
        self.pivots: list[int] = self._reduce()
        self.rank = len(self.pivots)

    def _reduce(self) -> list[int]:
        rows = self.rows
        nrows = rows.shape[0]
        pivots: list[int] = []
        r = 0
        for c in range(self.nclaim):
            if r == nrows:
                break
            w = c >> 6
            mask = np.uint64(1 << (c & 63))
            below = np.nonzero(rows[r:, w] & mask)[0]
            if below.size == 0:
                continue
            p = r + int(below[0])
            if p != r:
                rows[[r, p]] = rows[[p, r]]
            hit = np.nonzero(rows[:, w] & mask)[0]
            hit = hit[hit != r]
            if hit.size:
                rows[hit] ^= rows[r]
            pivots.append(c)
            r += 1
        return pivots

    def _column_bits(self, c: int) -> np.ndarray:
        w = c >> 6
        mask = np.uint64(1 << (c & 63))
        return (self.rows[:, w] & mask) != 0

    def entry(self, r: int, c: int) -> int:
        return int((self.rows[r, c >> 6] >> np.uint64(c & 63)) & np.uint64(1))

    def solve_passive(self, passive_cols: Iterable[int]) -> Optional[set[int]]:
        """Solve for the XOR of passive columns as right-hand side.

        Returns the support of the particular solution with all free
        variables zero, or None when the system is inconsistent.
        """
        bits = np.zeros(self.rows.shape[0], dtype=bool)
        for c in passive_cols:
            if not self.nclaim <= c < self.ncols:
                raise ValueError(f"column {c} is not passive")
            bits ^= self._column_bits(c)
        if bits[self.rank :].any():
            return None
        return {self.pivots[r] for r in np.nonzero(bits[: self.rank])[0]}

    def kernel_basis(self) -> list[set[int]]:
        """Basis of the right kernel of the claimed block, one vector per free column."""
        pivot_set = set(self.pivots)
        free = [c for c in range(self.nclaim) if c not in pivot_set]
        basis = []
        for f in free:
            bits = self._column_bits(f)[: self.rank]
            vec = {self.pivots[r] for r in np.nonzero(bits)[0]}
            vec.add(f)
            basis.append(vec)
        return basis

    def free_columns(self) -> list[int]:
        pivot_set = set(self.pivots)
        return [c for c in range(self.nclaim) if c not in pivot_set]


def echelonize(m: BitMatrix2) -> tuple[BitMatrix2, tuple[int, ...]]:
    """Reduced row-echelon form and the strictly increasing pivot columns."""
    ech = Echelon(_pack_matrix(m), m.ncols, m.ncols)
    entries = set()
    for r in range(m.nrows):
        row = ech.rows[r]
        for w in range(row.shape[0]):
            word = int(row[w])
            while word:
                low = word & -word
                entries.add((r, (w << 6) + low.bit_length() - 1))
                word ^= low
    return BitMatrix2(m.nrows, m.ncols, frozenset(entries)), tuple(ech.pivots)


def solve_right(m: BitMatrix2, b: BitVector2) -> Optional[BitVector2]:
    """One solution x of M x = b, free variables set to zero; None if inconsistent."""
    if b.length != m.nrows:
        raise ValueError("shape mismatch")
    packed = np.zeros((m.nrows, max(1, (m.ncols + 1 + 63) >> 6)), dtype=np.uint64)
    for r, c in m.entries:
        packed[r, c >> 6] |= np.uint64(1 << (c & 63))
    bcol = m.ncols
    for r in b.support:
        packed[r, bcol >> 6] |= np.uint64(1 << (bcol & 63))
    ech = Echelon(packed, m.ncols, m.ncols + 1)
    sol = ech.solve_passive((bcol,))
    if sol is None:
        return None
    return BitVector2(m.ncols, frozenset(sol))


def right_kernel_basis(m: BitMatrix2) -> list[BitVector2]:
    """Basis of {x : M x = 0}; exactly ncols - rank vectors, deterministic order."""
    ech = Echelon(_pack_matrix(m), m.ncols, m.ncols)
    return [BitVector2(m.ncols, frozenset(v)) for v in ech.kernel_basis()]
