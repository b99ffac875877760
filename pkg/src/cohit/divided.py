"""Divided power algebra dual to the polynomial algebra, with the dual Steenrod action.

Monomials are tuples of divided-power exponents, one entry per generator,
in the same positional convention as the polynomial side. Zero entries are
legal and preserved, so the variable count is always readable off a term.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from cohit.gf2 import binom_mod2
from cohit.poly import Monomial, format_monomial, format_poly, parse_monomial, parse_poly

DividedMonomial = Monomial
DividedPoly = set[DividedMonomial]

__all__ = [
    "DividedMonomial",
    "DividedPoly",
    "format_divided",
    "is_A_annihilated",
    "pairing",
    "parse_divided",
    "sq_star",
]


@lru_cache(maxsize=None)
def _sq_star_monomial(m: DividedMonomial, j: int) -> frozenset[DividedMonomial]:
    if j == 0:
        return frozenset({m})
    if not m:
        return frozenset()
    t = m[0]
    out: set[DividedMonomial] = set()
    for j1 in range(min(j, t // 2) + 1):
        if binom_mod2(t - j1, j1):
            for rest in _sq_star_monomial(m[1:], j - j1):
                out.add((t - j1,) + rest)
    return frozenset(out)


def sq_star(x: Iterable[DividedMonomial], j: int) -> DividedPoly:
    """Right action of Sq^j on a divided polynomial.

    On one factor, a^(t) is sent to C(t-j, j) a^(t-j); across factors the
    action splits over all ways of distributing j. Entries never go
    negative because a factor absorbs at most half its exponent.
    """
    if j < 0:
        raise ValueError("negative operation degree")
    out: set[DividedMonomial] = set()
    for m in x:
        out ^= _sq_star_monomial(m, j)
    return out


def is_A_annihilated(x: Iterable[DividedMonomial]) -> bool:
    """Whether every Sq^(2^t) with 2^t <= deg(x) acts as zero on x.

    The powers of two generate the whole Steenrod algebra, so this is
    annihilation by every positive-degree operation. The zero polynomial
    and degree-zero terms are annihilated vacuously.
    """
    terms = set(x)
    if not terms:
        return True
    degs = {sum(m) for m in terms}
    if len(degs) != 1:
        raise ValueError("inhomogeneous divided polynomial")
    d = degs.pop()
    t = 0
    while (1 << t) <= d:
        if sq_star(terms, 1 << t):
            return False
        t += 1
    return True


def pairing(f: Iterable[Monomial], x: Iterable[DividedMonomial]) -> int:
    """Kronecker pairing of a polynomial against a divided polynomial.

    Monomials pair to 1 exactly when their exponent tuples agree, so the
    value is the parity of the common support. Mismatched degrees pair to
    0; mismatched variable counts are an error.
    """
    f, x = set(f), set(x)
    kf = {len(m) for m in f}
    kx = {len(m) for m in x}
    if len(kf | kx) > 1:
        raise ValueError("mixed variable counts in pairing")
    return len(f & x) & 1


def parse_divided(text: str) -> DividedPoly:
    return parse_poly(text)


def format_divided(x: Iterable[DividedMonomial]) -> str:
    return format_poly(x, key=lambda m: m)


def format_divided_monomial(m: DividedMonomial) -> str:
    return format_monomial(m)


def parse_divided_monomial(text: str) -> DividedMonomial:
    return parse_monomial(text)
