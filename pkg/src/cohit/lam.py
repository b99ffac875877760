"""The mod-2 lambda algebra: words of generator indices, straightening, differential.

A word is the tuple of indices of its letters, left to right. A word is
admissible when each index is at most twice its right neighbour; the
straightening rule rewrites the leftmost offending adjacent pair and is
applied to a fixed point, which is the admissible normal form. Index zero
is a legal letter everywhere.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional

from cohit.gf2 import binom_mod2
from cohit.poly import format_poly, monomials_of_degree, parse_monomial, parse_poly

Word = tuple[int, ...]
LambdaPoly = set[Word]

__all__ = [
    "AdemBudgetError",
    "LambdaPoly",
    "Word",
    "adem_reduce",
    "admissible_words",
    "differential",
    "format_lambda",
    "is_admissible",
    "is_cocycle",
    "parse_lambda",
    "parse_word",
    "positive_compositions",
]

DEFAULT_STEP_BUDGET = 1_000_000


class AdemBudgetError(RuntimeError):
    """Straightening exceeded its step budget; indicates a runaway rewrite."""


def is_admissible(w: Word) -> bool:
    return all(w[i] <= 2 * w[i + 1] for i in range(len(w) - 1))


@lru_cache(maxsize=None)
def _straighten_pair(s: int, t: int) -> frozenset[Word]:
    """Rewrite lambda_s lambda_t with s > 2t as a sum of admissible pairs."""
    out: set[Word] = set()
    for j in range((s + 1) // 2, s - t):
        if binom_mod2(j - t - 1, 2 * j - s):
            out ^= {(s + t - j, j)}
    return frozenset(out)


_normal_forms: dict[Word, frozenset[Word]] = {}


def _first_inadmissible(w: Word) -> Optional[int]:
    for i in range(len(w) - 1):
        if w[i] > 2 * w[i + 1]:
            return i
    return None


def _normal_form(w: Word, budget: list[int]) -> frozenset[Word]:
    cached = _normal_forms.get(w)
    if cached is not None:
        return cached
    i = _first_inadmissible(w)
    if i is None:
        nf = frozenset({w})
        _normal_forms[w] = nf
        return nf
    budget[0] -= 1
    if budget[0] < 0:
        raise AdemBudgetError("straightening step budget exhausted")
    acc: set[Word] = set()
    for pair in _straighten_pair(w[i], w[i + 1]):
        acc ^= _normal_form(w[:i] + pair + w[i + 2 :], budget)
    nf = frozenset(acc)
    _normal_forms[w] = nf
    return nf


def adem_reduce(p: Iterable[Word], max_steps: int = DEFAULT_STEP_BUDGET) -> LambdaPoly:
    """Admissible normal form of a lambda polynomial.

    Rewrites the leftmost inadmissible pair of each word until none remain.
    Raises AdemBudgetError past max_steps fresh rewrites; the bound exists
    to turn a straightening bug into a loud failure instead of a hang.
    """
    budget = [max_steps]
    out: set[Word] = set()
    for w in p:
        out ^= _normal_form(w, budget)
    return out


@lru_cache(maxsize=None)
def _differential_letter(n: int) -> frozenset[Word]:
    out = set()
    for t in range(max(0, n - 1)):
        if binom_mod2(n - 1 - t, t + 1):
            out.add((t, n - 1 - t))
    return frozenset(out)


def differential(p: Iterable[Word]) -> LambdaPoly:
    """Differential extended by the Leibniz rule, without straightening the result.

    Each letter lambda_n is replaced in turn by its boundary
    sum of lambda_t lambda_(n-1-t) with C(n-1-t, t+1) odd; signs are
    invisible mod 2. The letter order matters: with the smaller index first
    the square of the differential vanishes, which the other order breaks.
    Words gain one letter and lose one from the index sum.
    """
    out: set[Word] = set()
    for w in p:
        for i, n in enumerate(w):
            for pair in _differential_letter(n):
                out ^= {w[:i] + pair + w[i + 1 :]}
    return out


def is_cocycle(p: Iterable[Word]) -> bool:
    return not adem_reduce(differential(p))


def positive_compositions(total: int, parts: int) -> list[Word]:
    """All tuples of strictly positive integers with the given length and sum, ascending."""
    if parts < 0:
        raise ValueError("negative parts")
    if parts == 0:
        return [()] if total == 0 else []
    if total < parts:
        return []
    return [
        tuple(e + 1 for e in m) for m in monomials_of_degree(parts, total - parts)
    ]


def admissible_words(total: int, length: int) -> list[Word]:
    """All admissible words of the given length and index sum, ascending lexicographic."""
    return [w for w in monomials_of_degree(length, total) if is_admissible(w)]


def parse_word(text: str) -> Word:
    return parse_monomial(text)


def parse_lambda(text: str) -> LambdaPoly:
    return parse_poly(text)


def format_lambda(p: Iterable[Word]) -> str:
    return format_poly(p, key=lambda w: (sum(w), w))
