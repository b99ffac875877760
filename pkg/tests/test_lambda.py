import itertools
import random

import pytest

from cohit.lam import (
    AdemBudgetError,
    adem_reduce,
    admissible_words,
    differential,
    format_lambda,
    is_admissible,
    is_cocycle,
    parse_lambda,
    positive_compositions,
)


def reduce_rightmost(p):
    """Straightening that always rewrites the rightmost bad pair instead.

    Used to witness that the normal form does not depend on strategy.
    """
    from cohit.gf2 import binom_mod2

    work = set(p)
    done = set()
    steps = 0
    while work:
        w = work.pop()
        spot = None
        for i in reversed(range(len(w) - 1)):
            if w[i] > 2 * w[i + 1]:
                spot = i
                break
        if spot is None:
            done ^= {w}
            continue
        steps += 1
        assert steps < 200000
        s, t = w[spot], w[spot + 1]
        for j in range((s + 1) // 2, s - t):
            if binom_mod2(j - t - 1, 2 * j - s):
                nxt = w[:spot] + (s + t - j, j) + w[spot + 2 :]
                if nxt in work:
                    work.remove(nxt)
                else:
                    work.add(nxt)
    return done


def test_is_admissible():
    assert is_admissible((3, 3, 2))
    assert is_admissible(())
    assert is_admissible((5,))
    assert is_admissible((0, 0))
    assert not is_admissible((7, 1))
    assert not is_admissible((1, 0))


def test_straightening_pairs():
    assert adem_reduce({(7, 1)}) == {(3, 5)}
    assert adem_reduce({(5, 1)}) == {(3, 3)}
    assert adem_reduce({(6, 2)}) == {(5, 3)}
    assert adem_reduce({(3, 1)}) == set()
    assert adem_reduce({(2, 0)}) == {(1, 1)}
    assert adem_reduce({(1, 0)}) == set()


def test_straightening_inside_longer_words():
    assert adem_reduce({(3, 3, 7, 1)}) == {(3, 3, 3, 5)}
    assert adem_reduce({(3, 5, 1, 5)}) == {(3, 3, 3, 5)}
    assert adem_reduce({(3, 5, 5, 1)}) == {(3, 5, 3, 3)}


def test_straightening_is_idempotent_and_leaves_admissibles_alone():
    p = {(3, 3, 2), (2, 4, 1)}
    q = adem_reduce(p)
    assert all(is_admissible(w) for w in q)
    assert adem_reduce(q) == q
    assert adem_reduce({(3, 3, 2)}) == {(3, 3, 2)}


def test_budget_error_on_tiny_budget():
    with pytest.raises(AdemBudgetError):
        adem_reduce({(40, 3, 1, 1)}, max_steps=1)


def test_differential_letters():
    assert differential({(9,)}) == {(1, 7), (3, 5)}
    assert differential({(8,)}) == {(0, 7), (1, 6), (3, 4)}
    assert differential({(7,)}) == set()
    assert differential({(0,)}) == set()
    assert differential({(1,)}) == set()


def test_differential_leibniz_on_words():
    assert differential({(3, 3, 9)}) == {(3, 3, 1, 7), (3, 3, 3, 5)}
    assert differential({(3, 9, 3)}) == {(3, 1, 7, 3), (3, 3, 5, 3)}


def test_differential_of_two_term_cycle_candidate():
    # the lambda_3 lambda_1 factors die in straightening, leaving two words
    z = {(3, 3, 9), (3, 9, 3)}
    assert adem_reduce(differential(z)) == {(3, 3, 3, 5), (3, 3, 5, 3)}
    assert not is_cocycle(z)


def test_is_cocycle_examples():
    assert is_cocycle({(7,)})
    assert is_cocycle(set())
    assert not is_cocycle({(9,)})
    # boundaries are cocycles
    assert is_cocycle(differential({(4, 9)}))


def exhaustive_words(max_len, max_sum):
    for length in range(1, max_len + 1):
        for w in itertools.product(range(max_sum + 1), repeat=length):
            if sum(w) <= max_sum:
                yield w


def test_differential_squares_to_zero_short_words():
    for w in exhaustive_words(3, 20):
        assert adem_reduce(differential(differential({w}))) == set(), w


def test_confluence_on_random_words():
    rng = random.Random(20260822)
    for _ in range(1000):
        length = rng.randint(1, 4)
        while True:
            w = tuple(rng.randint(0, 16) for _ in range(length))
            if sum(w) <= 16:
                break
        assert adem_reduce({w}) == reduce_rightmost({w}), w


def test_differential_commutes_with_straightening():
    rng = random.Random(7)
    for _ in range(300):
        length = rng.randint(1, 4)
        w = tuple(rng.randint(0, 12) for _ in range(length))
        lhs = adem_reduce(differential({w}))
        rhs = adem_reduce(differential(adem_reduce({w})))
        assert lhs == rhs, w


def test_straightening_preserves_length_and_index_sum():
    rng = random.Random(99)
    for _ in range(300):
        length = rng.randint(1, 4)
        w = tuple(rng.randint(0, 14) for _ in range(length))
        for v in adem_reduce({w}):
            assert len(v) == length and sum(v) == sum(w)


def test_positive_compositions():
    assert positive_compositions(4, 2) == [(1, 3), (2, 2), (3, 1)]
    assert len(positive_compositions(15, 3)) == 91
    assert positive_compositions(2, 3) == []
    assert positive_compositions(0, 0) == [()]


def test_admissible_words_listing():
    brute = [
        w
        for w in itertools.product(range(9), repeat=3)
        if sum(w) == 8 and w[0] <= 2 * w[1] and w[1] <= 2 * w[2]
    ]
    assert admissible_words(8, 3) == sorted(brute)


def test_lambda_text_round_trip():
    p = parse_lambda("3,3,9 + 3,9,3")
    assert p == {(3, 3, 9), (3, 9, 3)}
    assert format_lambda({(3, 5, 3, 3), (3, 3, 3, 5)}) == "3,3,3,5 + 3,5,3,3"
