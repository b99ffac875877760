"""Chain-level algebraic transfer from the divided power algebra into lambda words.

Two recursions are provided. The default one peels off the first generator's
exponent and prepends a letter; the alternative peels off the last exponent
and appends instead. They are conjugate under reversing both the exponent
tuple and the output words, and only the default lands in cocycles on
annihilated input. Outputs are raw word sets; callers straighten when needed.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from cohit.divided import DividedMonomial, DividedPoly, sq_star
from cohit.lam import LambdaPoly, Word

VARIANTS = ("chon-ha", "sum")

__all__ = ["VARIANTS", "transfer", "transfer_poly", "transfer_sum_variant"]


@lru_cache(maxsize=None)
def _descend_first(m: DividedMonomial) -> frozenset[Word]:
    if not m:
        return frozenset({()})
    head, rest = m[0], m[1:]
    out: set[Word] = set()
    # the per-factor action kills anything past half of each remaining exponent
    for i in range(head, head + sum(t // 2 for t in rest) + 1):
        for stepped in sq_star({rest}, i - head):
            for tail in _descend_first(stepped):
                out ^= {(i, *tail)}
    return frozenset(out)


@lru_cache(maxsize=None)
def _descend_last(m: DividedMonomial) -> frozenset[Word]:
    if not m:
        return frozenset({()})
    head, rest = m[-1], m[:-1]
    out: set[Word] = set()
    for i in range(head, head + sum(t // 2 for t in rest) + 1):
        for stepped in sq_star({rest}, i - head):
            for lead in _descend_last(stepped):
                out ^= {(*lead, i)}
    return frozenset(out)


def _check_shape(k: int, m: DividedMonomial) -> DividedMonomial:
    m = tuple(m)
    if len(m) != k:
        raise ValueError(f"expected {k} exponents, got {len(m)}")
    if any(t < 0 for t in m):
        raise ValueError(f"negative exponent in {m}")
    return m


def transfer(k: int, m: DividedMonomial) -> LambdaPoly:
    """Transfer of a single basis monomial, as an unreduced set of length-k words.

    The exponent at position j belongs to the j-th generator; the recursion
    consumes position 0 first and that choice fixes the word orientation.
    Every output word sums to the degree of the input.
    """
    return set(_descend_first(_check_shape(k, m)))


def transfer_sum_variant(k: int, m: DividedMonomial) -> LambdaPoly:
    """Mirror-orientation transfer: consumes the last exponent, appends letters.

    Kept as a first-class operation so published computations that used this
    orientation can be rerun verbatim and compared against the default.
    """
    return set(_descend_last(_check_shape(k, m)))


def transfer_poly(k: int, x: DividedPoly, variant: str = "chon-ha") -> LambdaPoly:
    """Additive extension of the chosen transfer recursion over a polynomial."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    descend = _descend_first if variant == "chon-ha" else _descend_last
    out: set[Word] = set()
    for m in x:
        out ^= descend(_check_shape(k, m))
    return out
