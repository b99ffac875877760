"""Invariants of the cohit quotient under the symmetric and general linear groups.

The admissible basis splits by weight vector. Within one weight stratum the
transpositions act through the reducer map, carving the stratum into
connected components; each component carries its own linear system for the
symmetric invariants. The substitution generator then cuts the symmetric
invariants down to the full group, first weight by weight, then globally
through a three-way case split with an explicit lower-weight correction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from cohit.gf2 import BitMatrix2, BitVector2, Echelon
from cohit.hitbasis import HitBasis, decompose
from cohit.poly import Monomial, apply_rho, weight_vector

WeightVector = tuple[int, ...]

__all__ = [
    "GlkCertificate",
    "SigmaComponent",
    "WeightStratum",
    "component_invariants",
    "detect_case",
    "global_glk_invariants",
    "meaningful_combinations",
    "particular_correction",
    "sigma_components",
    "stratum_sigma_invariants",
    "verify_global_sigma",
    "weight_strata",
    "weightwise_glk",
]


@dataclass(frozen=True)
class WeightStratum:
    """One weight's slice of the admissible basis, in basis order."""

    omega: WeightVector
    basis: tuple[Monomial, ...]


@dataclass(frozen=True)
class SigmaComponent:
    """A connected block of a stratum under the transposition actions.

    kernel holds coefficient vectors over members for the symmetric
    invariants supported on this component; constraints are the per-
    generator matrices whose common kernel that is.
    """

    members: tuple[Monomial, ...]
    kernel: tuple[BitVector2, ...] = ()
    constraints: tuple[BitMatrix2, ...] = ()


@dataclass(frozen=True)
class GlkCertificate:
    """Outcome of the global full-group invariant construction."""

    case_tag: str
    main_weight: Optional[WeightVector]
    h: Optional[frozenset[Monomial]]
    h_prime: Optional[frozenset[Monomial]]
    global_sigma_basis: tuple[frozenset[Monomial], ...]
    constraint_equations: tuple[tuple[int, ...], ...]
    invariant_basis: tuple[frozenset[Monomial], ...]


def weight_strata(basis: HitBasis) -> list[WeightStratum]:
    """Partition of the admissible basis by weight vector, weights in lex order."""
    groups: dict[WeightVector, list[Monomial]] = {}
    for m in basis.admissible:
        groups.setdefault(weight_vector(m), []).append(m)
    return [
        WeightStratum(w, tuple(groups[w])) for w in sorted(groups)
    ]


def sigma_components(stratum: WeightStratum, basis: HitBasis) -> list[SigmaComponent]:
    """Connected components of the stratum under transposition adjacency.

    Two members are adjacent when some transposition sends one to a class
    whose reduced coordinates touch the other. Components come back sorted
    by least member, members in stratum order.
    """
    members = stratum.basis
    if not members:
        return []
    k = len(members[0])
    pos = {m: i for i, m in enumerate(members)}
    parent = list(range(len(members)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for i, m in enumerate(members):
        for j in range(1, k):
            image = apply_rho({m}, j, k)
            vec = decompose(image, basis)
            for c in vec.support:
                other = basis.admissible[c]
                if other in pos:
                    union(i, pos[other])

    blocks: dict[int, list[int]] = {}
    for i in range(len(members)):
        blocks.setdefault(find(i), []).append(i)
    ordered = sorted(blocks.values(), key=lambda idx: idx[0])
    return [SigmaComponent(tuple(members[i] for i in idx)) for idx in ordered]


def _pack_equation_rows(rows: Sequence[Iterable[int]], ncols: int) -> np.ndarray:
    nwords = max(1, (ncols + 63) >> 6)
    out = np.zeros((len(rows), nwords), dtype=np.uint64)
    for r, cols in enumerate(rows):
        for c in cols:
            out[r, c >> 6] |= np.uint64(1 << (c & 63))
    return out


def component_invariants(
    component: SigmaComponent, basis: HitBasis
) -> SigmaComponent:
    """Fill in the symmetric-invariant kernel of one component.

    For each transposition the member images decompose back into the
    component; adding the identity to that matrix expresses invariance,
    and the stacked system's kernel is the answer.
    """
    members = component.members
    n = len(members)
    k = len(members[0])
    pos = {m: i for i, m in enumerate(members)}
    constraints: list[BitMatrix2] = []
    stacked: list[set[int]] = []
    for j in range(1, k):
        entries: set[tuple[int, int]] = set()
        for i, m in enumerate(members):
            vec = decompose(apply_rho({m}, j, k), basis)
            for c in vec.support:
                other = basis.admissible[c]
                if other in pos:
                    entries.add((pos[other], i))
        for i in range(n):
            entries ^= {(i, i)}
        constraints.append(BitMatrix2(n, n, frozenset(entries)))
        rows: list[set[int]] = [set() for _ in range(n)]
        for r, c in entries:
            rows[r].add(c)
        stacked.extend(rows)
    ech = Echelon(_pack_equation_rows(stacked, n), n, n)
    kernel = tuple(BitVector2(n, frozenset(v)) for v in ech.kernel_basis())
    return SigmaComponent(members, kernel, tuple(constraints))


def _try_insert(span: dict[int, int], candidate: int) -> bool:
    """Grow an XOR basis keyed by leading bit; False if already spanned."""
    mask = candidate
    while mask:
        top = mask.bit_length() - 1
        if top not in span:
            span[top] = mask
            return True
        mask ^= span[top]
    return False


def meaningful_combinations(
    kernel: Sequence[BitVector2], component_size: int
) -> list[tuple[tuple[int, ...], int, BitVector2]]:
    """Kernel basis re-expressed through preferred linear combinations.

    Small components get the exhaustive selection by fewest summands then
    fewest terms; larger ones aim for term counts near N/3, 4N/9 and 2N/3
    before independence completion. The output is always a basis, sorted
    by term count.
    """
    dim = len(kernel)
    if dim == 0:
        return []
    length = kernel[0].length
    combos = []
    for i in range(1, 1 << dim):
        support = frozenset()
        for j in range(dim):
            if (i >> j) & 1:
                support ^= kernel[j].support
        coeffs = tuple((i >> j) & 1 for j in range(dim))
        terms = len(support)
        if terms:
            combos.append(
                {
                    "coeffs": coeffs,
                    "complexity": sum(coeffs),
                    "terms": terms,
                    "vector": BitVector2(length, support),
                    "mask": i,
                }
            )

    def greedy(pool, chosen, span):
        for combo in pool:
            if len(chosen) == dim:
                break
            if _try_insert(span, combo["mask"]):
                chosen.append(combo)
        return chosen

    if component_size < 30:
        combos.sort(key=lambda c: (c["complexity"], c["terms"], c["coeffs"]))
        chosen = greedy(combos, [], {})
    else:
        targets = sorted(
            {component_size // 3, 4 * component_size // 9, 2 * component_size // 3}
        )
        used: set[int] = set()
        picked = []
        for t in targets:
            best = None
            for idx, combo in enumerate(combos):
                if idx in used:
                    continue
                key = (
                    abs(combo["terms"] - t),
                    combo["complexity"],
                    combo["terms"],
                    combo["coeffs"],
                )
                if best is None or key < best[0]:
                    best = (key, idx)
            if best is not None:
                used.add(best[1])
                picked.append(combos[best[1]])
        picked.sort(key=lambda c: (c["complexity"], c["terms"], c["coeffs"]))
        span: dict[int, int] = {}
        chosen = greedy(picked, [], span)
        if len(chosen) < dim:
            remaining = [c for idx, c in enumerate(combos) if idx not in used]
            remaining.sort(key=lambda c: (c["complexity"], c["terms"], c["coeffs"]))
            chosen = greedy(remaining, chosen, span)
    chosen.sort(key=lambda c: c["terms"])
    return [(c["coeffs"], c["terms"], c["vector"]) for c in chosen]


def stratum_sigma_invariants(
    stratum: WeightStratum, basis: HitBasis
) -> list[frozenset[Monomial]]:
    """Symmetric invariants of one stratum, component by component."""
    out: list[frozenset[Monomial]] = []
    for component in sigma_components(stratum, basis):
        filled = component_invariants(component, basis)
        for _, _, vec in meaningful_combinations(filled.kernel, len(filled.members)):
            out.append(frozenset(filled.members[i] for i in vec.support))
    return out


def weightwise_glk(
    stratum: WeightStratum,
    sigma_invariants: Sequence[Iterable[Monomial]],
    basis: HitBasis,
) -> list[frozenset[Monomial]]:
    """Full-group invariants of one stratum, judged inside the stratum only.

    The substitution generator's error is reduced and then restricted to
    the stratum's own admissible positions; leakage into other weights is
    deliberately not examined at this stage.
    """
    n = len(sigma_invariants)
    if n == 0:
        return []
    k = len(stratum.basis[0])
    local = {m: i for i, m in enumerate(stratum.basis)}
    rows: list[set[int]] = [set() for _ in range(len(stratum.basis))]
    polys = [frozenset(s) for s in sigma_invariants]
    for j, s in enumerate(polys):
        error = apply_rho(s, k, k) ^ s
        for c in decompose(error, basis).support:
            m = basis.admissible[c]
            if m in local:
                rows[local[m]].add(j)
    ech = Echelon(_pack_equation_rows(rows, n), n, n)
    out = []
    for v in ech.kernel_basis():
        inv: frozenset[Monomial] = frozenset()
        for j in v:
            inv ^= polys[j]
        if inv:
            out.append(inv)
    return out


def detect_case(
    glk_by_weight: dict[WeightVector, Sequence],
    sigma_by_weight: dict[WeightVector, Sequence],
) -> tuple[str, Optional[WeightVector]]:
    """Route the global construction: direct, corrected, or trivial."""
    glk_weights = [w for w, invs in glk_by_weight.items() if invs]
    if not glk_weights or not sigma_by_weight:
        return "CASE_3", None
    min_sigma = min(sigma_by_weight)
    if min_sigma in glk_weights and not any(w > min_sigma for w in glk_weights):
        return "CASE_1", min_sigma
    return "CASE_2", max(glk_weights)


def verify_global_sigma(p: Iterable[Monomial], basis: HitBasis) -> bool:
    """Whether every transposition error reduces to zero globally."""
    p = frozenset(p)
    if not p:
        return True
    k = len(next(iter(p)))
    for j in range(1, k):
        if not decompose(apply_rho(p, j, k) ^ p, basis).is_zero():
            return False
    return True


def particular_correction(
    h: Iterable[Monomial],
    correction_basis: Sequence[Monomial],
    basis: HitBasis,
) -> frozenset[Monomial]:
    """Lower-weight correction making the candidate globally symmetric.

    Solves the stacked per-transposition system over the correction
    monomials; free variables are zero, so the answer is determined by
    the basis order.
    """
    h = frozenset(h)
    k = basis.k
    nadm = len(basis.admissible)
    ncorr = len(correction_basis)
    nrows = (k - 1) * nadm
    rows: list[set[int]] = [set() for _ in range(nrows)]
    for j, b_j in enumerate(correction_basis):
        for i in range(1, k):
            effect = apply_rho({b_j}, i, k) ^ {b_j}
            for c in decompose(effect, basis).support:
                rows[(i - 1) * nadm + c].add(j)
    target_col = ncorr
    for i in range(1, k):
        error = apply_rho(h, i, k) ^ h
        for c in decompose(error, basis).support:
            rows[(i - 1) * nadm + c].add(target_col)
    ech = Echelon(_pack_equation_rows(rows, ncorr + 1), ncorr, ncorr + 1)
    sol = ech.solve_passive((target_col,))
    if sol is None:
        raise RuntimeError("system for the particular correction is inconsistent")
    out: frozenset[Monomial] = frozenset()
    for j in sol:
        out ^= {correction_basis[j]}
    return out


def global_glk_invariants(k: int, d: int, basis: HitBasis) -> GlkCertificate:
    """The complete pipeline from weight strata to the full-group basis."""
    strata = weight_strata(basis)
    sigma_by_weight: dict[WeightVector, list[frozenset[Monomial]]] = {}
    glk_by_weight: dict[WeightVector, list[frozenset[Monomial]]] = {}
    for stratum in strata:
        sigma = stratum_sigma_invariants(stratum, basis)
        sigma_by_weight[stratum.omega] = sigma
        glk_by_weight[stratum.omega] = weightwise_glk(stratum, sigma, basis)

    case_tag, main_weight = detect_case(glk_by_weight, sigma_by_weight)
    if case_tag == "CASE_3":
        return GlkCertificate("CASE_3", None, None, None, (), (), ())
    if case_tag == "CASE_1":
        invariants = tuple(glk_by_weight[main_weight])
        return GlkCertificate("CASE_1", main_weight, None, None, (), (), invariants)

    seeds = list(glk_by_weight[main_weight])
    if len(seeds) > 1:
        warnings.warn(
            "several main-weight candidates; each is corrected independently"
        )
    min_weight = min(sigma_by_weight)
    correction_weights = {w for w in sigma_by_weight if w < main_weight}
    correction_basis = [
        m for m in basis.admissible if weight_vector(m) in correction_weights
    ]

    corrected: list[frozenset[Monomial]] = []
    h_prime: Optional[frozenset[Monomial]] = None
    for seed in seeds:
        correction = particular_correction(seed, correction_basis, basis)
        if h_prime is None:
            h_prime = correction
        corrected.append(seed ^ correction)

    homogeneous = list(sigma_by_weight.get(min_weight, []))
    for w in sorted(sigma_by_weight):
        if w == min_weight or not w < main_weight:
            continue
        for candidate in sigma_by_weight[w]:
            if verify_global_sigma(candidate, basis):
                homogeneous.append(candidate)

    global_basis = corrected + homogeneous
    nadm = len(basis.admissible)
    rows: list[set[int]] = [set() for _ in range(nadm)]
    for j, p in enumerate(global_basis):
        error = apply_rho(p, k, k) ^ p
        for c in decompose(error, basis).support:
            rows[c].add(j)
    equations: list[tuple[int, ...]] = []
    for row in rows:
        if row:
            eq = tuple(sorted(row))
            if eq not in equations:
                equations.append(eq)
    ech = Echelon(_pack_equation_rows(rows, len(global_basis)), len(global_basis), len(global_basis))
    invariants = []
    for v in ech.kernel_basis():
        inv: frozenset[Monomial] = frozenset()
        for j in v:
            inv ^= global_basis[j]
        if inv:
            invariants.append(inv)

    return GlkCertificate(
        "CASE_2",
        main_weight,
        seeds[0],
        h_prime,
        tuple(global_basis),
        tuple(equations),
        tuple(invariants),
    )
