import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohit.gf2 import BitVector2
from cohit.hitbasis import (
    CACHE_VERSION,
    admissible_basis_and_reducer,
    build_hit_matrix,
    decompose,
    zero_plus_split,
)
from cohit.poly import compare_monomials, monomials_of_degree, sq
from golden33 import PLUS_PART_33, ZERO_PART_33


def mask_rank(masks):
    pivots = {}
    for r in masks:
        while r:
            b = r.bit_length() - 1
            if b in pivots:
                r ^= pivots[b]
            else:
                pivots[b] = r
                break
    return len(pivots)


def full_action_cohit_dim(k: int, d: int) -> int:
    """Quotient dimension using every positive square, not just two-powers."""
    order = sorted(monomials_of_degree(k, d), key=lambda m: m)
    index = {m: i for i, m in enumerate(order)}
    masks = []
    for j in range(1, d + 1):
        for g in monomials_of_degree(k, d - j):
            image = sq(j, {g})
            if image:
                masks.append(sum(1 << index[m] for m in image))
    return len(order) - mask_rank(masks)


def test_rank_one_basis_is_the_spike_pattern():
    for d in range(1, 16):
        basis = admissible_basis_and_reducer(1, d)
        expected = 1 if (d & (d + 1)) == 0 else 0
        assert len(basis.admissible) == expected, d


@pytest.mark.parametrize(
    "k,dmax",
    [(2, 10), (3, 6)],
)
def test_small_rank_dims_match_full_action_oracle(k, dmax):
    for d in range(0, dmax + 1):
        basis = admissible_basis_and_reducer(k, d)
        assert len(basis.admissible) == full_action_cohit_dim(k, d), (k, d)


@pytest.mark.parametrize("k,d", [(2, 8), (3, 7), (3, 8)])
def test_reducer_kills_every_two_power_image(k, d):
    basis = admissible_basis_and_reducer(k, d)
    i = 0
    while (1 << i) <= d:
        for g in monomials_of_degree(k, d - (1 << i)):
            image = sq(1 << i, {g})
            if image:
                assert not decompose(image, basis).support, (g, i)
        i += 1


def test_admissible_monomials_decompose_to_unit_vectors():
    basis = admissible_basis_and_reducer(3, 8)
    for j, m in enumerate(basis.admissible):
        assert decompose({m}, basis).support == {j}


def test_decomposition_uses_strictly_smaller_admissibles():
    basis = admissible_basis_and_reducer(3, 8)
    admissible = set(basis.admissible)
    for m in basis.ordered_monomials:
        if m in admissible:
            continue
        for j in basis.decomposition[m].support:
            assert compare_monomials(basis.admissible[j], m) < 0, m


def test_decompose_rejects_foreign_monomials():
    basis = admissible_basis_and_reducer(3, 8)
    with pytest.raises(ValueError):
        decompose({(4, 4)}, basis)
    with pytest.raises(ValueError):
        decompose({(4, 4, 1)}, basis)


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_decompose_is_linear(data):
    basis = admissible_basis_and_reducer(3, 7)
    pool = sorted(basis.ordered_monomials)
    a = frozenset(data.draw(st.sets(st.sampled_from(pool), max_size=6)))
    b = frozenset(data.draw(st.sets(st.sampled_from(pool), max_size=6)))
    lhs = decompose(a ^ b, basis)
    rhs = BitVector2(len(basis.admissible), decompose(a, basis).support ^ decompose(b, basis).support)
    assert lhs == rhs


def test_hit_matrix_rank_accounts_for_the_quotient():
    k, d = 3, 8
    matrix = build_hit_matrix(k, d)
    basis = admissible_basis_and_reducer(k, d)
    from cohit.gf2 import echelonize

    _, pivots = echelonize(matrix)
    assert matrix.nrows == len(basis.ordered_monomials)
    assert matrix.nrows - len(pivots) == len(basis.admissible)


def test_big_run_counts_and_split(big_basis):
    assert len(big_basis.ordered_monomials) == 7140
    assert len(big_basis.admissible) == 136
    zero, plus = zero_plus_split(big_basis)
    assert (len(zero), len(plus)) == (52, 84)
    assert set(zero) == set(ZERO_PART_33)
    assert set(plus) == set(PLUS_PART_33)


def test_cache_round_trip(tmp_path):
    first = admissible_basis_and_reducer(3, 8, cache_dir=tmp_path)
    files = list(tmp_path.glob("*.txt"))
    assert len(files) == 1
    second = admissible_basis_and_reducer(3, 8, cache_dir=tmp_path)
    assert first == second


def test_corrupt_cache_warns_and_recomputes(tmp_path):
    admissible_basis_and_reducer(3, 8, cache_dir=tmp_path)
    path = next(tmp_path.glob("*.txt"))
    path.write_text("garbage\n")
    with pytest.warns(UserWarning, match="unusable cache"):
        basis = admissible_basis_and_reducer(3, 8, cache_dir=tmp_path)
    assert len(basis.admissible) == len(admissible_basis_and_reducer(3, 8).admissible)


def test_stale_cache_version_warns(tmp_path):
    admissible_basis_and_reducer(3, 8, cache_dir=tmp_path)
    path = next(tmp_path.glob("*.txt"))
    text = path.read_text().replace(CACHE_VERSION, "cohit-cache v0")
    path.write_text(text)
    with pytest.warns(UserWarning, match="unusable cache"):
        admissible_basis_and_reducer(3, 8, cache_dir=tmp_path)


def test_parallel_map_hook_gives_identical_result():
    serial = admissible_basis_and_reducer(3, 8)

    def shuffled_map(fn, items):
        items = list(items)
        return [fn(x) for x in items]

    hooked = admissible_basis_and_reducer(3, 8, par_map=shuffled_map)
    assert serial == hooked
