import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohit.divided import is_A_annihilated
from cohit.lam import admissible_words, adem_reduce, differential, is_cocycle
from cohit.preimage import (
    PreimageProblem,
    assemble_system,
    find_preimages,
    verify_solution,
)
from cohit.transfer import transfer_poly
from golden import C0_TARGET, C0_X_DISPLAY, D0_TARGET, YBAR_VERBATIM, positional


def test_problem_validation():
    with pytest.raises(ValueError):
        PreimageProblem(k=0, y=frozenset({(3,)}))
    with pytest.raises(ValueError):
        PreimageProblem(k=3, y=frozenset())
    with pytest.raises(ValueError):
        PreimageProblem(k=3, y=frozenset({(3, 3)}))
    with pytest.raises(ValueError):
        PreimageProblem(k=2, y=frozenset({(3, 2), (4, 2)}))
    with pytest.raises(ValueError):
        PreimageProblem(k=2, y=frozenset({(5, 3)}), variant="mystery")


def test_degree_relations_derived():
    prob = PreimageProblem(k=3, y=C0_TARGET)
    assert prob.deg_x == 8
    assert prob.deg_z == 9


def test_non_cocycle_target_refused_for_standard_variant():
    bad = frozenset({(2, 2)})
    assert not is_cocycle(bad)
    with pytest.raises(ValueError):
        find_preimages(PreimageProblem(k=2, y=bad))
    # the last-position variant does not produce cocycles of this
    # differential, so there the membership question is a plain linear
    # system and the guard stays out of the way
    find_preimages(PreimageProblem(k=2, y=bad, variant="sum"))


def test_assemble_system_shapes():
    prob = PreimageProblem(k=3, y=C0_TARGET)
    matrix, x_cols, z_cols, target = assemble_system(prob)
    assert len(x_cols) == 45
    assert len(z_cols) == 8
    rows = admissible_words(8, 3)
    assert matrix.nrows == len(rows)
    assert matrix.ncols == 53
    # y is already admissible, so its target support is the word set itself
    assert {rows[i] for i in target.support} == set(C0_TARGET)


def test_verify_solution_and_perturbation():
    x = positional(C0_X_DISPLAY)
    assert verify_solution(3, x, frozenset(), C0_TARGET)
    flipped = set(x)
    flipped.remove(next(iter(x)))
    assert not verify_solution(3, frozenset(flipped), frozenset(), C0_TARGET)
    extra = set(x) | {(8, 0, 0)}
    assert not verify_solution(3, frozenset(extra), frozenset(), C0_TARGET)


def test_worked_rank_three_search():
    res = find_preimages(PreimageProblem(k=3, y=C0_TARGET))
    assert res.status == "found"
    sol = res.solutions[0]
    assert sol.z == frozenset()
    assert sol.x == positional(C0_X_DISPLAY)
    assert sol.certificate == frozenset(C0_TARGET)
    assert res.candidates_checked == 1201


def test_refutation_is_definitive():
    res = find_preimages(PreimageProblem(k=4, y=YBAR_VERBATIM, variant="sum"))
    assert res.status == "no_solution"
    assert not res.truncated
    assert res.solutions == []


def test_worked_rank_four_search_uncapped():
    res = find_preimages(PreimageProblem(k=4, y=D0_TARGET, kernel_cap=None))
    assert res.status == "found"
    sol = res.solutions[0]
    assert sol.z == frozenset()
    assert len(sol.x) == 38
    assert is_A_annihilated(sol.x)
    assert verify_solution(4, sol.x, sol.z, frozenset(D0_TARGET))


def test_worked_rank_four_truncates_under_default_cap():
    # The least annihilated kernel combination sits far beyond 2**20 for
    # every candidate at this degree, so the capped scan must report the
    # truncation instead of pretending the search was exhaustive.
    res = find_preimages(PreimageProblem(k=4, y=D0_TARGET))
    assert res.status == "truncated"
    assert res.solutions == []


def literal_search(prob):
    """Scan kernel combinations by counting, mirroring the solver's contract.

    Reimplements the search as the plain nested loop: per z-candidate, a
    particular solution off the shared echelon, then candidates
    x_p + combination(i) for i = 0, 1, 2, ... each tested by direct
    recomputation of the annihilation condition.
    """
    from cohit.gf2 import Echelon
    from cohit.preimage import (
        _boundary_columns,
        _pack_rows_from_columns,
        _phi_columns,
    )

    rows = admissible_words(prob.deg_x, prob.k)
    row_index = {w: i for i, w in enumerate(rows)}
    x_basis, x_raw = _phi_columns(prob.k, prob.deg_x, prob.variant)
    z_basis, z_raw = _boundary_columns(prob.k, prob.deg_z, prob.z_indices)
    nx, nz = len(x_basis), len(z_basis)
    x_cols = [frozenset(row_index[w] for w in c) for c in x_raw]
    z_cols = [frozenset(row_index[w] for w in c) for c in z_raw]
    y_sup = frozenset(row_index[w] for w in adem_reduce(prob.y))
    packed = _pack_rows_from_columns(len(rows), x_cols + z_cols + [y_sup])
    ech = Echelon(packed, nx, nx + nz + 1)
    kernel = ech.kernel_basis()
    cap = prob.kernel_cap if prob.kernel_cap is not None else 1 << len(kernel)
    checked = 0
    truncated = False
    for n in range(prob.max_z_terms + 1):
        if n > nz:
            break
        for combo in [()] if n == 0 else itertools.combinations(range(nz), n):
            sup = ech.solve_passive(tuple(nx + c for c in combo) + (nx + nz,))
            if sup is None:
                continue
            room = 1 << len(kernel)
            for i in range(min(cap, room)):
                support = set(sup)
                for j in range(i.bit_length()):
                    if (i >> j) & 1:
                        support ^= kernel[j]
                checked += 1
                x = frozenset(x_basis[c] for c in support)
                if is_A_annihilated(x):
                    return (
                        frozenset(z_basis[c] for c in combo),
                        x,
                        checked,
                        truncated,
                    )
            if cap < room:
                truncated = True
    return None, None, checked, truncated


@pytest.mark.parametrize("cap", [4, 64, 2048])
def test_matches_literal_scan_under_any_cap(cap):
    # a boundary in tiny degree, so the literal loop is affordable
    y = frozenset({(1, 3, 4), (1, 4, 3), (3, 3, 2)})
    assert is_cocycle(y)
    prob = PreimageProblem(k=3, y=y, kernel_cap=cap)
    res = find_preimages(prob)
    z_lit, x_lit, checked_lit, trunc_lit = literal_search(prob)
    if z_lit is None:
        assert res.solutions == []
        assert res.truncated == trunc_lit or res.status == "no_solution"
    else:
        sol = res.solutions[0]
        assert sol.z == z_lit
        assert sol.x == x_lit
        assert res.candidates_checked == checked_lit


def test_matches_literal_scan_on_worked_rank_three():
    prob = PreimageProblem(k=3, y=C0_TARGET)
    res = find_preimages(prob)
    z_lit, x_lit, checked_lit, _ = literal_search(prob)
    sol = res.solutions[0]
    assert (sol.z, sol.x) == (z_lit, x_lit)
    assert res.candidates_checked == checked_lit == 1201


length_two_words = st.builds(
    lambda b, extra: (min(2 * b, b + extra), b),
    st.integers(1, 4),
    st.integers(0, 4),
)


@settings(max_examples=40, deadline=None)
@given(st.sets(length_two_words, min_size=1, max_size=4))
def test_rank_two_agrees_with_brute_force(words):
    y = frozenset(words)
    degs = {sum(w) for w in y}
    if len(degs) != 1 or not is_cocycle(y):
        return
    deg = degs.pop()
    prob = PreimageProblem(k=2, y=y, kernel_cap=None)
    res = find_preimages(prob)

    x_basis = [(a, deg - a) for a in range(deg + 1)]
    z_basis = [(deg + 1,)]
    target = adem_reduce(y)
    solvable = False
    for xbits in range(1 << len(x_basis)):
        x = frozenset(x_basis[i] for i in range(len(x_basis)) if (xbits >> i) & 1)
        if not is_A_annihilated(x):
            continue
        for zbits in range(1 << len(z_basis)):
            z = frozenset(
                z_basis[i] for i in range(len(z_basis)) if (zbits >> i) & 1
            )
            lhs = adem_reduce(transfer_poly(2, set(x)) ^ differential(z))
            if lhs == target:
                solvable = True
                break
        if solvable:
            break

    if solvable:
        assert res.status == "found"
        sol = res.solutions[0]
        assert verify_solution(2, sol.x, sol.z, y)
    else:
        assert res.status == "no_solution"


def test_all_solutions_reports_one_per_workable_candidate():
    res = find_preimages(PreimageProblem(k=3, y=C0_TARGET), all_solutions=True)
    assert len(res.solutions) >= 1
    seen_z = [sol.z for sol in res.solutions]
    assert len(seen_z) == len(set(seen_z))
    for sol in res.solutions:
        assert verify_solution(3, sol.x, sol.z, C0_TARGET)
