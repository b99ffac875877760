"""Admissible monomial bases of the cohit quotient, with a global reducer.

The degree-d part of the polynomial algebra is quotiented by the span of
all two-power Steenrod squares of lower-degree monomials (those generate
the whole positive-degree action, so nothing is lost). Row reducing that
span augmented with the identity, in the fixed monomial order, selects one
representative monomial per quotient coordinate and simultaneously writes
every monomial as a combination of the selected ones modulo the span.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from cohit.gf2 import BitMatrix2, BitVector2, Echelon
from cohit.poly import (
    Monomial,
    Poly,
    monomial_sort_key,
    monomials_of_degree,
    sq,
)

__all__ = [
    "CACHE_VERSION",
    "HitBasis",
    "admissible_basis_and_reducer",
    "build_hit_matrix",
    "decompose",
    "zero_plus_split",
]

CACHE_VERSION = "cohit-cache v1"

ParMap = Callable[[Callable, Iterable], Iterable]


@dataclass(frozen=True)
class HitBasis:
    """Admissible basis of one degree, plus the map onto its coordinates.

    decomposition sends every degree-d monomial to its coordinate vector
    over the admissible list; admissible monomials map to unit vectors.
    """

    k: int
    d: int
    ordered_monomials: tuple[Monomial, ...]
    admissible: tuple[Monomial, ...]
    decomposition: dict[Monomial, BitVector2]


def _square_column(task: tuple[int, Monomial]) -> frozenset[Monomial]:
    i, g = task
    return frozenset(sq(1 << i, {g}))


def _hit_column_tasks(k: int, d: int) -> list[tuple[int, Monomial]]:
    tasks = []
    i = 0
    while (1 << i) <= d:
        for g in sorted(monomials_of_degree(k, d - (1 << i)), key=monomial_sort_key):
            tasks.append((i, g))
        i += 1
    return tasks


def _hit_columns(k: int, d: int, par_map: ParMap = map) -> list[frozenset[Monomial]]:
    """Nonzero two-power square images, ordered by (power, source monomial)."""
    images = par_map(_square_column, _hit_column_tasks(k, d))
    return [img for img in images if img]


def build_hit_matrix(k: int, d: int, par_map: ParMap = map) -> BitMatrix2:
    """Matrix whose column space is the hit part of the degree-d slice."""
    if k < 1 or d < 0:
        raise ValueError("need k >= 1 and d >= 0")
    rows = sorted(monomials_of_degree(k, d), key=monomial_sort_key)
    index = {m: i for i, m in enumerate(rows)}
    cols = [[index[m] for m in col] for col in _hit_columns(k, d, par_map)]
    return BitMatrix2.from_columns(len(rows), cols) if cols else BitMatrix2(
        len(rows), 0, frozenset()
    )


def _compute(k: int, d: int, par_map: ParMap) -> HitBasis:
    rows = sorted(monomials_of_degree(k, d), key=monomial_sort_key)
    index = {m: i for i, m in enumerate(rows)}
    n = len(rows)
    hit_cols = [
        frozenset(index[m] for m in col) for col in _hit_columns(k, d, par_map)
    ]
    nhit = len(hit_cols)
    ncols = nhit + n
    nwords = max(1, (ncols + 63) >> 6)
    packed = np.zeros((n, nwords), dtype=np.uint64)
    for c, sup in enumerate(hit_cols):
        w, bit = c >> 6, np.uint64(1 << (c & 63))
        for r in sup:
            packed[r, w] |= bit
    for r in range(n):
        c = nhit + r
        packed[r, c >> 6] |= np.uint64(1 << (c & 63))

    # claim everything: identity pivots land exactly on the monomials that
    # are independent of the hit span and of all smaller monomials
    ech = Echelon(packed, ncols, ncols)
    adm_cols = [c for c in ech.pivots if c >= nhit]
    admissible = tuple(rows[c - nhit] for c in adm_cols)
    adm_index = {c: j for j, c in enumerate(adm_cols)}

    pivot_col_of_row = ech.pivots
    decomposition: dict[Monomial, BitVector2] = {}
    nadm = len(admissible)
    for r, m in enumerate(rows):
        c = nhit + r
        if c in adm_index:
            decomposition[m] = BitVector2(nadm, frozenset({adm_index[c]}))
            continue
        w, bit = c >> 6, np.uint64(1 << (c & 63))
        on = np.nonzero((ech.rows[: ech.rank, w] & bit) != 0)[0]
        support = frozenset(
            adm_index[pivot_col_of_row[i]]
            for i in on
            if pivot_col_of_row[i] in adm_index
        )
        decomposition[m] = BitVector2(nadm, support)
    return HitBasis(k, d, tuple(rows), admissible, decomposition)


def _cache_path(cache_dir: Path, k: int, d: int) -> Path:
    return Path(cache_dir) / f"basis-k{k}-d{d}.txt"


def _serialize(basis: HitBasis) -> str:
    lines = [f"{CACHE_VERSION} k={basis.k} d={basis.d}"]
    for m in basis.admissible:
        lines.append(",".join(str(e) for e in m))
    width = len(basis.admissible)
    for m in basis.ordered_monomials:
        vec = basis.decomposition[m]
        bits = "".join("1" if i in vec.support else "0" for i in range(width))
        lines.append(",".join(str(e) for e in m) + " : " + bits)
    return "\n".join(lines) + "\n"


def _deserialize(text: str, k: int, d: int) -> HitBasis:
    lines = text.splitlines()
    if not lines or lines[0] != f"{CACHE_VERSION} k={k} d={d}":
        raise ValueError("cache header mismatch")
    admissible: list[Monomial] = []
    ordered: list[Monomial] = []
    decomposition: dict[Monomial, BitVector2] = {}
    body = lines[1:]
    split = next((i for i, ln in enumerate(body) if " : " in ln), len(body))
    for ln in body[:split]:
        admissible.append(tuple(int(p) for p in ln.split(",")))
    width = len(admissible)
    for ln in body[split:]:
        head, bits = ln.split(" : ")
        m = tuple(int(p) for p in head.split(","))
        if len(bits) != width:
            raise ValueError("cache row width mismatch")
        ordered.append(m)
        decomposition[m] = BitVector2(
            width, frozenset(i for i, ch in enumerate(bits) if ch == "1")
        )
    expected = sorted(monomials_of_degree(k, d), key=monomial_sort_key)
    if ordered != expected:
        raise ValueError("cache monomial list mismatch")
    return HitBasis(k, d, tuple(ordered), tuple(admissible), decomposition)


def admissible_basis_and_reducer(
    k: int,
    d: int,
    cache_dir: Optional[Path] = None,
    par_map: ParMap = map,
) -> HitBasis:
    """Cache-first construction of the admissible basis and reducer map."""
    if k < 1 or d < 0:
        raise ValueError("need k >= 1 and d >= 0")
    path = _cache_path(cache_dir, k, d) if cache_dir is not None else None
    if path is not None and path.exists():
        try:
            return _deserialize(path.read_text(), k, d)
        except (ValueError, OSError) as exc:
            warnings.warn(f"ignoring unusable cache {path}: {exc}")
    basis = _compute(k, d, par_map)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_serialize(basis))
    return basis


def decompose(f: Iterable[Monomial], basis: HitBasis) -> BitVector2:
    """Coordinates of a polynomial over the admissible basis; zero iff hit."""
    out = frozenset()
    for m in f:
        if len(m) != basis.k or sum(m) != basis.d:
            raise ValueError(f"monomial {m} is not degree {basis.d} in {basis.k} variables")
        out ^= basis.decomposition[m].support
    return BitVector2(len(basis.admissible), out)


def zero_plus_split(
    basis: HitBasis,
) -> tuple[tuple[Monomial, ...], tuple[Monomial, ...]]:
    """Admissible monomials with a zero exponent, and those without."""
    zero = tuple(m for m in basis.admissible if 0 in m)
    plus = tuple(m for m in basis.admissible if 0 not in m)
    return zero, plus
