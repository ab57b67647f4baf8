import math
import random
from itertools import combinations

import pytest

from hamcons.accept import FOUND, UNKNOWN, find_acceptable_cycle
from hamcons.core import IntervalPattern, SetFamily
from hamcons.exact import (
    CYCLE,
    PATH,
    AsymptoticBound,
    NotBlocking,
    bound_report,
    build_cover_instance,
    cover_counts,
    degree,
    exhaustive_min_cover,
    kr_deletion_view,
    kr_pattern,
    min_blocking_family,
    minimality_check,
    placement_multiplicity,
    solve_cover,
    verify_blocking,
)
from hamcons.families import pair_degree_family, partition_family, star_family
from hamcons.graphs import is_hamiltonian

import oracles

X22 = IntervalPattern([2, 2])


@pytest.mark.parametrize("n,lengths,variant", [(5, (2, 2), CYCLE), (6, (2, 1), CYCLE), (5, (3, 1), PATH),
                                               (6, (2, 2), CYCLE), (5, (1, 1, 1), CYCLE)])
def test_incidence_matches_brute_force(n, lengths, variant):
    inst = build_cover_instance(n, IntervalPattern(lengths), variant)
    wrap = variant == CYCLE
    classes = list(oracles.cycle_classes(n) if wrap else oracles.path_classes(n))
    assert sorted(inst.classes) == sorted(classes)
    for j, F in enumerate(inst.candidates):
        expected = {s for s in inst.classes if oracles.contains_union(s, F, lengths, wrap)}
        got = {inst.classes[i] for i in range(len(inst.classes)) if inst.columns[j] >> i & 1}
        assert got == expected


@pytest.mark.parametrize("n,lengths,variant", [
    (4, (2, 2), CYCLE), (5, (2, 2), CYCLE), (6, (2, 2), CYCLE), (5, (2, 1), CYCLE), (6, (2, 1), CYCLE),
    (6, (3, 1), CYCLE), (5, (1, 1, 1), CYCLE), (6, (2, 1, 1), CYCLE), (4, (2, 2), PATH), (5, (2, 2), PATH),
    (5, (2, 1), PATH),
])
def test_solver_matches_naive_minimum(n, lengths, variant):
    x = IntervalPattern(lengths)
    res = min_blocking_family(n, x, variant)
    assert res.kind == FOUND
    assert res.size == oracles.min_cover_size(n, x.r, [lengths], variant == CYCLE)
    assert oracles.blocking(n, res.family.members, [lengths], variant == CYCLE)
    inst = build_cover_instance(n, x, variant)
    assert exhaustive_min_cover(inst, res.size)[0] == res.size


def test_deterministic_optimum_is_lexicographically_least():
    inst = build_cover_instance(6, X22, CYCLE)
    res = solve_cover(inst)
    best = None
    for combo in combinations(range(len(inst.candidates)), res.size):
        m = 0
        for c in combo:
            m |= inst.columns[c]
        if m == inst.full:
            best = combo
            break
    assert res.family.members == tuple(inst.candidates[c] for c in best)


def test_known_small_values():
    assert min_blocking_family(4, X22).size == 1
    assert min_blocking_family(5, X22).size == 1
    assert 2 <= min_blocking_family(6, X22).size <= 6


def test_budget_exhaustion_is_unknown_with_bounds():
    res = solve_cover(build_cover_instance(7, X22, CYCLE), budget_nodes=3)
    assert res.kind == UNKNOWN and res.size is None
    assert res.lower <= 5 <= res.upper


def test_universe_limit():
    with pytest.raises(ValueError):
        build_cover_instance(9, X22, PATH)


def test_verify_blocking_examples():
    cert = verify_blocking(star_family(6, X22), X22, keep_witnesses=True)
    assert cert.blocked and cert.classes == 60 and len(cert.witnesses) == 60
    cert = verify_blocking(SetFamily(5, 4), X22)
    assert cert.blocked is False and cert.counterexample is not None
    assert verify_blocking(partition_family(7, 3), IntervalPattern([2, 1])).blocked
    assert verify_blocking(star_family(7, X22), X22, mode="search").blocked
    unknown = verify_blocking(star_family(9, X22), X22, mode="search", budget_nodes=10)
    assert unknown.blocked is None and unknown.kind == UNKNOWN


def test_cover_counts_match_oracle():
    rng = random.Random(9)
    fam = star_family(7, X22)
    for _ in range(50):
        seq = [1] + rng.sample(range(2, 8), 6)
        hits = cover_counts(seq, fam, X22)
        brute = [m for m in fam if oracles.contains_union(seq, m, (2, 2))]
        assert sorted(hits) == sorted(brute)
        assert placement_multiplicity(seq, fam, X22) >= len(hits)


def test_minimality_examples():
    assert minimality_check(star_family(6, X22), X22, PATH) == (True, None)
    padded = star_family(6, X22).union([(3, 4, 5, 6)])
    minimal, removable = minimality_check(padded, X22, PATH)
    assert not minimal and removable == (3, 4, 5, 6)
    with pytest.raises(NotBlocking):
        minimality_check(SetFamily(6, 4, [(1, 2, 3, 4)]), X22, CYCLE)


def test_star_is_not_minimal_for_cycles_at_7():
    minimal, removable = minimality_check(star_family(7, X22), X22, CYCLE)
    assert not minimal
    rest = star_family(7, X22).without(removable)
    assert oracles.blocking(7, rest.members, [(2, 2)])


def test_degree_examples():
    assert degree(star_family(6, X22), 0) == (6, ())
    assert degree(star_family(9, X22), 2) == (math.comb(7, 2), (1, 2))
    fam = pair_degree_family(10)
    brute = max(sum(set(D) <= set(m) for m in fam) for D in combinations(range(1, 11), 2))
    assert degree(fam, 2)[0] == brute
    with pytest.raises(ValueError):
        degree(star_family(6, X22), 4)


def test_bound_report_examples():
    rep = bound_report(X22, 6)
    assert (rep.lb_avg, rep.ub_star, rep.hf) == (2, 6, 72)
    rep = bound_report(kr_pattern(3), 9)
    assert (rep.specialized["kr_lb"], rep.specialized["kr_ub"]) == (3, 4)
    rep = bound_report(X22, 10, PATH)
    assert (rep.lower, rep.upper) == (10, 28)
    assert isinstance(rep.specialized["lb_one_ninth"], AsymptoticBound)
    assert bound_report(X22, 7, exact=5).sandwich_ok
    assert bound_report(X22, 7, exact=11).sandwich_ok is False
    with pytest.raises(ValueError):
        bound_report(X22, 3)


def test_formula_fallback_for_large_n():
    rep = bound_report(X22, 14)
    assert rep.hf_source == "formula"
    assert rep.hf == 12 * math.factorial(11)


def test_kr_view_examples():
    assert not is_hamiltonian(kr_deletion_view(partition_family(7, 3)))
    assert is_hamiltonian(kr_deletion_view(SetFamily(7, 3)))
    assert kr_pattern(4) == IntervalPattern([2, 1, 1])
