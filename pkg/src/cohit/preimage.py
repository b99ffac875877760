"""Preimage search for the chain transfer: solve phi_k(x) + delta(z) = y.

The unknowns are a divided power polynomial x in the source rank and a
boundary correction z one letter shorter than the target. A usable x must
also be annihilated by every dual square, which is again linear, so the
whole search stays inside GF(2) linear algebra: one echelon form of the
transfer columns answers every z-candidate by XOR of passive columns, and
the annihilation filter over a solution coset becomes integer minimization
over an affine subspace instead of a scan through kernel combinations.

The solution reported first is exactly the one a literal scan in kernel
combination order would reach first, and candidates_checked counts the
candidates that scan would have examined, so caps keep their plain meaning
even though no scan is materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from cohit.divided import DividedMonomial, is_A_annihilated, sq_star
from cohit.gf2 import BitMatrix2, BitVector2, Echelon
from cohit.lam import (
    Word,
    adem_reduce,
    admissible_words,
    differential,
    is_cocycle,
    positive_compositions,
)
from cohit.poly import monomials_of_degree
from cohit.transfer import VARIANTS, transfer_poly

__all__ = [
    "DEFAULT_KERNEL_CAP",
    "DEFAULT_MAX_Z_TERMS",
    "PreimageProblem",
    "PreimageSolution",
    "SearchResult",
    "assemble_system",
    "find_preimages",
    "verify_solution",
]

DEFAULT_KERNEL_CAP = 1 << 20
DEFAULT_MAX_Z_TERMS = 2

_Z_INDEX_CHOICES = ("positive", "nonneg")


@dataclass
class PreimageProblem:
    """A target cocycle and the bounds on the search space around it.

    Degrees are derived from the target when omitted: x lives in the degree
    the transfer must hit and z one higher, so that its boundary lands next
    to y. kernel_cap of None removes the per-candidate enumeration bound.
    """

    k: int
    y: frozenset[Word]
    deg_x: Optional[int] = None
    deg_z: Optional[int] = None
    variant: str = "chon-ha"
    max_z_terms: int = DEFAULT_MAX_Z_TERMS
    kernel_cap: Optional[int] = DEFAULT_KERNEL_CAP
    z_indices: str = "positive"

    def __post_init__(self) -> None:
        self.y = frozenset(self.y)
        if self.k < 1:
            raise ValueError("rank must be at least 1")
        if not self.y:
            raise ValueError("empty target")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.z_indices not in _Z_INDEX_CHOICES:
            raise ValueError(f"z_indices must be one of {_Z_INDEX_CHOICES}")
        if any(len(w) != self.k for w in self.y):
            raise ValueError(f"target words must have length {self.k}")
        if any(i < 0 for w in self.y for i in w):
            raise ValueError("negative letter index in target")
        degrees = {sum(w) for w in self.y}
        if len(degrees) != 1:
            raise ValueError("inhomogeneous target")
        degree = degrees.pop()
        if self.deg_x is None:
            self.deg_x = degree
        if self.deg_z is None:
            self.deg_z = self.deg_x + 1
        if self.deg_x != degree:
            raise ValueError(f"target has degree {degree}, not {self.deg_x}")
        if self.deg_z != self.deg_x + 1:
            raise ValueError("deg_z must exceed deg_x by one")
        if self.max_z_terms < 0:
            raise ValueError("negative max_z_terms")
        if self.kernel_cap is not None and self.kernel_cap < 1:
            raise ValueError("kernel_cap must be positive when given")


@dataclass(frozen=True)
class PreimageSolution:
    """One verified preimage: the annihilated x, the correction z, and the
    recomputed admissible form of phi_k(x) + delta(z)."""

    x: frozenset[DividedMonomial]
    z: frozenset[Word]
    certificate: frozenset[Word]


@dataclass
class SearchResult:
    """Search outcome. Empty solutions split into a definitive no (the joint
    system over every z at once is inconsistent) and a truncated search."""

    solutions: list[PreimageSolution]
    truncated: bool
    candidates_checked: int

    @property
    def status(self) -> str:
        if self.solutions:
            return "found"
        return "truncated" if self.truncated else "no_solution"


@lru_cache(maxsize=16)
def _x_basis(k: int, deg_x: int) -> tuple[DividedMonomial, ...]:
    """Exponent tuples ordered by their reversed form (last entry fastest).

    This matches the written layout of the worked computations and pins
    down which solution of an underdetermined system is reported first.
    """
    return tuple(sorted(monomials_of_degree(k, deg_x), key=lambda m: m[::-1]))


@lru_cache(maxsize=16)
def _phi_columns(k: int, deg_x: int, variant: str):
    basis = _x_basis(k, deg_x)
    cols = tuple(
        frozenset(adem_reduce(transfer_poly(k, {m}, variant))) for m in basis
    )
    return basis, cols


@lru_cache(maxsize=16)
def _boundary_columns(k: int, deg_z: int, z_indices: str):
    if z_indices == "positive":
        basis = tuple(positive_compositions(deg_z, k - 1))
    else:
        basis = tuple(monomials_of_degree(k - 1, deg_z))
    cols = tuple(frozenset(adem_reduce(differential({j}))) for j in basis)
    return basis, cols


@lru_cache(maxsize=16)
def _annihilation_columns(k: int, deg_x: int):
    """Per-x-column supports of all the stacked dual-square conditions."""
    basis = _x_basis(k, deg_x)
    row_index: dict[tuple[int, DividedMonomial], int] = {}
    powers = []
    t = 0
    while (1 << t) <= deg_x:
        for m in monomials_of_degree(k, deg_x - (1 << t)):
            row_index[(t, m)] = len(row_index)
        powers.append(t)
        t += 1
    cols = tuple(
        frozenset(row_index[(t, mm)] for t in powers for mm in sq_star({m}, 1 << t))
        for m in basis
    )
    return len(row_index), cols


def _check_target(problem: PreimageProblem) -> frozenset[Word]:
    y_adm = frozenset(adem_reduce(problem.y))
    # the sum-orientation recursion does not land in cocycles of this
    # differential, so the membership question stays a plain linear system
    if problem.variant == "chon-ha" and not is_cocycle(y_adm):
        raise ValueError("target is not a cocycle")
    return y_adm


def assemble_system(
    problem: PreimageProblem,
) -> tuple[BitMatrix2, list[DividedMonomial], list[Word], BitVector2]:
    """The linear model of the defining equation, for inspection and tests.

    Columns are the reduced transfer images of the x basis followed by the
    reduced boundaries of the z basis; rows are the admissible words of the
    target's length and degree.
    """
    y_adm = _check_target(problem)
    rows = admissible_words(problem.deg_x, problem.k)
    row_index = {w: i for i, w in enumerate(rows)}
    x_basis, x_raw = _phi_columns(problem.k, problem.deg_x, problem.variant)
    z_basis, z_raw = _boundary_columns(problem.k, problem.deg_z, problem.z_indices)
    supports = [frozenset(row_index[w] for w in col) for col in x_raw]
    supports += [frozenset(row_index[w] for w in col) for col in z_raw]
    matrix = BitMatrix2.from_columns(len(rows), supports)
    target = BitVector2(len(rows), frozenset(row_index[w] for w in y_adm))
    return matrix, list(x_basis), list(z_basis), target


def verify_solution(k, x, z, y, variant: str = "chon-ha") -> bool:
    """Recompute the defining equation and the annihilation condition directly."""
    lhs = adem_reduce(transfer_poly(k, set(x), variant) ^ differential(z))
    return lhs == adem_reduce(y) and is_A_annihilated(x)


def _pack_supports(supports: Sequence[frozenset[int]], nbits: int) -> np.ndarray:
    """One packed bit row per support set."""
    out = np.zeros((len(supports), max(1, (nbits + 63) >> 6)), dtype=np.uint64)
    for i, sup in enumerate(supports):
        for b in sup:
            out[i, b >> 6] |= np.uint64(1 << (b & 63))
    return out


def _pack_rows_from_columns(
    nrows: int, col_supports: Sequence[frozenset[int]]
) -> np.ndarray:
    out = np.zeros(
        (nrows, max(1, (len(col_supports) + 63) >> 6)), dtype=np.uint64
    )
    for c, sup in enumerate(col_supports):
        w, bit = c >> 6, np.uint64(1 << (c & 63))
        for r in sup:
            out[r, w] |= bit
    return out


def _xor_rows(packed: np.ndarray, support) -> np.ndarray:
    idx = sorted(support)
    if not idx:
        return np.zeros(packed.shape[1], dtype=np.uint64)
    return np.bitwise_xor.reduce(packed[idx], axis=0)


def _row_int(row: np.ndarray, start_word: int, nbits: int) -> int:
    out = 0
    for w in range(start_word, row.shape[0]):
        out |= int(row[w]) << ((w - start_word) << 6)
    return out & ((1 << nbits) - 1)


class _CosetLeader:
    """Least annihilated kernel-combination index, by algebra instead of a scan.

    Combination index i selects the kernel vectors at the set bits of i, in
    free-column order. The annihilated combinations form an affine subspace
    of index space; its least element falls out of a greedy descent over an
    XOR basis, which is the same candidate the scan i = 0, 1, 2, ... finds.
    """

    def __init__(self, ech: Echelon, a_cols: np.ndarray, nann: int):
        self.kernel = ech.kernel_basis()
        self.dim = len(self.kernel)
        self.ann_words = max(1, (nann + 63) >> 6)
        width = self.ann_words + max(1, (self.dim + 63) >> 6)
        rows = np.zeros((self.dim, width), dtype=np.uint64)
        for j, vec in enumerate(self.kernel):
            rows[j, : self.ann_words] = _xor_rows(a_cols, vec)
            rows[j, self.ann_words + (j >> 6)] |= np.uint64(1 << (j & 63))
        # claimed pad bits past nann are identically zero and never pivot
        self.ech = Echelon(rows, self.ann_words << 6, width << 6)
        self.combos = [
            _row_int(rows[i], self.ann_words, self.dim) for i in range(self.dim)
        ]
        self.null_basis: dict[int, int] = {}
        for i in range(self.ech.rank, self.dim):
            mask = self.combos[i]
            while mask:
                top = mask.bit_length() - 1
                if top in self.null_basis:
                    mask ^= self.null_basis[top]
                else:
                    self.null_basis[top] = mask
                    break

    def first_annihilated(self, residue: np.ndarray) -> Optional[int]:
        """Least index whose candidate cancels the residue; None if none does."""
        r = residue.copy()
        combo = 0
        for i, pivot in enumerate(self.ech.pivots):
            if (r[pivot >> 6] >> np.uint64(pivot & 63)) & np.uint64(1):
                r ^= self.ech.rows[i, : self.ann_words]
                combo ^= self.combos[i]
        if r.any():
            return None
        for top in sorted(self.null_basis, reverse=True):
            if (combo >> top) & 1:
                combo ^= self.null_basis[top]
        return combo


def _joint_feasible(
    phi_rows: np.ndarray,
    nclaim: int,
    ann_cols: Sequence[frozenset[int]],
    nann: int,
) -> bool:
    """Whether any (x, z) at all solves the system with x annihilated."""
    bottom = np.zeros((nann, phi_rows.shape[1]), dtype=np.uint64)
    for c, sup in enumerate(ann_cols):
        w, bit = c >> 6, np.uint64(1 << (c & 63))
        for r in sup:
            bottom[r, w] |= bit
    ech = Echelon(np.vstack([phi_rows, bottom]), nclaim, nclaim + 1)
    return ech.solve_passive((nclaim,)) is not None


def find_preimages(
    problem: PreimageProblem,
    all_solutions: bool = False,
    progress: Optional[Callable[[str], None]] = None,
) -> SearchResult:
    """Search z supports by increasing size, solving the x system per candidate.

    With all_solutions the search keeps going after a hit, returning the
    first-found x for every workable z-candidate inside the bounds; deeper
    kernel combinations past the first are never materialized. An empty
    result is definitive only when the joint system over all z at once is
    inconsistent; otherwise the caps cut the search short and the result
    says so.
    """
    y_adm = _check_target(problem)
    rows = admissible_words(problem.deg_x, problem.k)
    row_index = {w: i for i, w in enumerate(rows)}
    x_basis, x_raw = _phi_columns(problem.k, problem.deg_x, problem.variant)
    z_basis, z_raw = _boundary_columns(problem.k, problem.deg_z, problem.z_indices)
    nx, nz = len(x_basis), len(z_basis)
    x_cols = [frozenset(row_index[w] for w in col) for col in x_raw]
    z_cols = [frozenset(row_index[w] for w in col) for col in z_raw]
    y_sup = frozenset(row_index[w] for w in y_adm)

    packed = _pack_rows_from_columns(len(rows), x_cols + z_cols + [y_sup])
    ech = Echelon(packed.copy(), nx, nx + nz + 1)
    y_col = nx + nz

    nann, ann_cols = _annihilation_columns(problem.k, problem.deg_x)
    a_cols = _pack_supports(ann_cols, nann)
    leader: Optional[_CosetLeader] = None

    # an inconsistent joint system over every z at once settles the question
    # before any candidate is enumerated
    if not _joint_feasible(packed, nx + nz, ann_cols, nann):
        return SearchResult([], False, 0)

    solutions: list[PreimageSolution] = []
    truncated = False
    checked = 0

    def bump(amount) -> None:
        nonlocal checked
        before = checked
        checked += amount
        if progress is not None and checked // 10000 != before // 10000:
            progress(f"checked {checked} candidates")

    for n in range(problem.max_z_terms + 1):
        if n > nz:
            break
        if progress is not None:
            progress(f"searching z supports of size {n} ({comb(nz, n)} candidates)")
        for combo in [()] if n == 0 else combinations(range(nz), n):
            x_sup = ech.solve_passive(tuple(nx + c for c in combo) + (y_col,))
            if x_sup is None:
                continue
            residue = _xor_rows(a_cols, x_sup)
            if not residue.any():
                first = 0
            else:
                if leader is None:
                    leader = _CosetLeader(ech, a_cols, nann)
                first = leader.first_annihilated(residue)
                if first is None:
                    # a literal scan would exhaust every combination here
                    room = 1 << leader.dim
                    if problem.kernel_cap is not None and problem.kernel_cap < room:
                        truncated = True
                        bump(problem.kernel_cap)
                    else:
                        bump(room)
                    continue
            if problem.kernel_cap is not None and first >= problem.kernel_cap:
                truncated = True
                bump(problem.kernel_cap)
                continue
            bump(first + 1)
            x_support = set(x_sup)
            if first:
                for j in range(first.bit_length()):
                    if (first >> j) & 1:
                        x_support ^= leader.kernel[j]
            x_poly = frozenset(x_basis[c] for c in x_support)
            z_poly = frozenset(z_basis[c] for c in combo)
            certificate = frozenset(
                adem_reduce(
                    transfer_poly(problem.k, set(x_poly), problem.variant)
                    ^ differential(z_poly)
                )
            )
            solutions.append(PreimageSolution(x_poly, z_poly, certificate))
            if progress is not None:
                progress(f"solution found after {checked} candidates")
            if not all_solutions:
                return SearchResult(solutions, truncated, checked)

    if not solutions:
        # the joint system was consistent, so emptiness here is the caps' doing
        truncated = True
    return SearchResult(solutions, truncated, checked)
