"""Polynomials in k variables over GF(2), with the Steenrod action.

A monomial is the tuple of its exponents, one entry per variable; a
polynomial is a set of monomials (coefficients are 0 or 1, so addition is
symmetric difference). All per-monomial operators are memoized.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from cohit.gf2 import binom_mod2

Monomial = tuple[int, ...]
Poly = set[Monomial]

__all__ = [
    "Monomial",
    "Poly",
    "apply_rho",
    "compare_monomials",
    "degree",
    "format_monomial",
    "format_poly",
    "monomial_sort_key",
    "monomials_of_degree",
    "parse_monomial",
    "parse_poly",
    "sq",
    "weight_vector",
]


def degree(m: Monomial) -> int:
    return sum(m)


def monomials_of_degree(k: int, d: int) -> list[Monomial]:
    """All exponent tuples of length k summing to d, in ascending lexicographic order."""
    if k < 0 or d < 0:
        raise ValueError("k and d must be nonnegative")
    if k == 0:
        return [()] if d == 0 else []
    out: list[Monomial] = []

    def rec(prefix: Monomial, rest: int, parts: int) -> None:
        if parts == 1:
            out.append(prefix + (rest,))
            return
        for v in range(rest + 1):
            rec(prefix + (v,), rest - v, parts - 1)

    rec((), d, k)
    return out


@lru_cache(maxsize=None)
def _sq_monomial(i: int, m: Monomial) -> frozenset[Monomial]:
    if i == 0:
        return frozenset({m})
    if not m:
        return frozenset()
    e = m[0]
    out: set[Monomial] = set()
    for j in range(min(i, e) + 1):
        if binom_mod2(e, j):
            for rest in _sq_monomial(i - j, m[1:]):
                out.add((e + j,) + rest)
    return frozenset(out)


def sq(i: int, f: Iterable[Monomial]) -> Poly:
    """Steenrod square Sq^i applied to a polynomial.

    Splits across variables by the Cartan formula; on a single power,
    Sq^j(x^e) = C(e, j) x^(e+j) for j <= e and 0 beyond. Consequently
    Sq^i vanishes above the degree and squares on the degree itself.
    """
    if i < 0:
        raise ValueError("negative square")
    out: set[Monomial] = set()
    for m in f:
        out ^= _sq_monomial(i, m)
    return out


@lru_cache(maxsize=None)
def weight_vector(m: Monomial) -> tuple[int, ...]:
    """Counts of set bits per binary place across the exponents, trailing zeros dropped."""
    out = []
    j = 0
    while any(e >> j for e in m):
        out.append(sum((e >> j) & 1 for e in m))
        j += 1
    return tuple(out)


def monomial_sort_key(m: Monomial) -> tuple[tuple[int, ...], Monomial]:
    return (weight_vector(m), m)


def compare_monomials(a: Monomial, b: Monomial) -> int:
    """Total order: weight vectors lexicographically, then exponents lexicographically.

    Returns -1, 0, or 1. Comparing different variable counts is an error.
    """
    if len(a) != len(b):
        raise ValueError("monomials live in different variable counts")
    ka, kb = monomial_sort_key(a), monomial_sort_key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def apply_rho(p: Iterable[Monomial], j: int, k: int) -> Poly:
    """Action of the j-th standard generator on k variables.

    For j < k this transposes variables j and j+1. For j = k it substitutes
    the sum of the last two variables for the last one, which needs k >= 2.
    """
    if not 1 <= j <= k:
        raise ValueError(f"generator index {j} outside 1..{k}")
    if j == k and k < 2:
        raise ValueError("the substitution generator needs at least two variables")
    out: set[Monomial] = set()
    for m in p:
        if len(m) != k:
            raise ValueError("monomial has wrong variable count")
        if j < k:
            mm = list(m)
            mm[j - 1], mm[j] = mm[j], mm[j - 1]
            out ^= {tuple(mm)}
        else:
            a = m[-1]
            for s in range(a + 1):
                if binom_mod2(a, s):
                    out ^= {m[:-2] + (m[-2] + s, a - s)}
    return out


def parse_monomial(text: str) -> Monomial:
    """Parse a comma-separated exponent tuple, e.g. "7,7,9,10"."""
    parts = [p.strip() for p in text.strip().split(",")]
    if not parts or any(not p for p in parts):
        raise ValueError(f"malformed monomial {text!r}")
    values = []
    for p in parts:
        try:
            v = int(p)
        except ValueError as exc:
            raise ValueError(f"malformed monomial {text!r}") from exc
        if v < 0:
            raise ValueError(f"negative exponent in {text!r}")
        values.append(v)
    return tuple(values)


def parse_poly(text: str) -> Poly:
    """Parse a sum of monomials joined by '+'; "0" or an empty string is the zero polynomial."""
    s = text.strip()
    if s in ("", "0"):
        return set()
    out: set[Monomial] = set()
    for term in s.split("+"):
        out ^= {parse_monomial(term)}
    return out


def format_monomial(m: Monomial) -> str:
    return ",".join(str(e) for e in m)


def format_poly(p: Iterable[Monomial], key=monomial_sort_key) -> str:
    terms = sorted(p, key=key)
    if not terms:
        return "0"
    return " + ".join(format_monomial(m) for m in terms)
