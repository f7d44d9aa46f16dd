"""Degree decision procedures, checked against the brute-force enumerator."""

import pytest

from eqideal.degrees import (
    DegreeSetDescriptor,
    SignPattern,
    degree_exists,
    degree_set,
    equations_of_degree,
    fixed_degree_length_bound,
    min_degree,
    multi_degree_exists,
    witness_length_bound,
)
from eqideal.ideal import build_G, normal_generators, problem_from_strings
from eqideal.oracle import cyclic_key, enumerate_kernel_loops
from eqideal.words import WordError, degree, equation_word, evaluate, multi_degree

H52 = (2, ["ba", "abbA"], ["a"])
H53 = (2, ["b", "ababa"], ["a"])
H54 = (2, ["aaBA", "aaa", "baB"], ["aaB"])


def test_length_bounds_grow_as_stated():
    assert witness_length_bound(3, 2) == 16 * 9 * 2
    assert witness_length_bound(1, 1) == 16
    assert fixed_degree_length_bound(2, 3) == 32 * 16 * 9 + 16 * 8 * 3
    # the fixed-degree bound dominates the witness bound
    for L in (1, 2, 5):
        for d in (1, 2, 4):
            assert fixed_degree_length_bound(L, d) >= witness_length_bound(L, d)


def test_sign_pattern_basics():
    p = SignPattern((1, -1, 1, 1))
    assert p.degree == 4
    assert p.constrained_slots() == [1, 2]
    assert SignPattern((1, 1)).constrained_slots() == []
    assert SignPattern((1, -1)).canonical() == SignPattern((-1, 1)).canonical()
    with pytest.raises(WordError):
        SignPattern(())
    with pytest.raises(WordError):
        SignPattern((1, 0))


def test_all_patterns_counts():
    # necklaces over {+,-} up to rotation and global flip
    assert len(SignPattern.all_patterns(1)) == 1
    assert len(SignPattern.all_patterns(2)) == 2
    assert len(SignPattern.all_patterns(3)) == 2
    assert len(SignPattern.all_patterns(4)) == 4
    for p in SignPattern.all_patterns(5):
        assert p.degree == 5


def test_degree_flags_medium_instance():
    p = problem_from_strings(*H52)
    assert not degree_exists(p, None, 1)
    assert not degree_exists(p, None, 2)
    assert not degree_exists(p, None, 3)
    assert degree_exists(p, None, 4)
    assert not degree_exists(p, None, 5)
    assert degree_exists(p, None, 6)


def test_degree_zero_is_never_an_equation():
    p = problem_from_strings(*H52)
    assert not degree_exists(p, None, 0)


def test_min_degree_witnesses():
    for args, want in [(H52, 4), (H53, 2), (H54, 2)]:
        p = problem_from_strings(*args)
        pres = normal_generators(p)
        d, w = min_degree(p, pres)
        assert d == want
        assert degree(w) == want
        assert len(evaluate(w, list(pres.h_basis), list(p.g_values))) == 0
        for e in range(1, d):
            assert not degree_exists(p, pres, e)


def test_min_degree_one_when_target_in_subgroup():
    p = problem_from_strings(2, ["a", "b"], ["abab"])
    d, w = min_degree(p)
    assert d == 1
    assert degree(w) == 1
    pres = normal_generators(p)
    assert len(evaluate(w, list(pres.h_basis), list(p.g_values))) == 0


def test_min_degree_rejects_independent_instance():
    with pytest.raises(WordError):
        min_degree(problem_from_strings(2, ["aa"], ["b"]))


def test_degree_set_even_only_case():
    ds = degree_set(problem_from_strings(*H52))
    assert ds.case == "even-only"
    assert ds.base == "2N"
    assert ds.exceptional == frozenset({2})
    assert not ds.contains(0)
    assert not ds.contains(2)
    assert ds.contains(4)
    assert not ds.contains(5)
    assert ds.contains(6)
    assert ds.contains(100)
    assert not ds.contains(101)


def test_degree_set_odd_present_case():
    for args in (H53, H54):
        ds = degree_set(problem_from_strings(*args))
        assert ds.case == "odd-present"
        assert ds.base == "N"
        assert ds.exceptional == frozenset({1})
        assert not ds.contains(1)
        assert ds.contains(2)
        assert ds.contains(3)
        assert ds.contains(97)


def test_degree_set_matches_pointwise_decision():
    for args in (H52, H53, H54):
        p = problem_from_strings(*args)
        pres = normal_generators(p)
        ds = degree_set(p, pres)
        for d in range(1, ds.verified_up_to + 1):
            assert ds.contains(d) == degree_exists(p, pres, d), (args, d)


def test_degree_set_refuses_multiple_targets():
    with pytest.raises(WordError):
        degree_set(problem_from_strings(2, ["ba", "abbA"], ["a", "b"]))


def test_descriptor_json_roundtrip_shape():
    ds = DegreeSetDescriptor("even-only", "2N", frozenset({2}), 8)
    blob = ds.to_json_dict()
    assert blob == {
        "case": "even-only",
        "base": "2N",
        "exceptional": [2],
        "verified_up_to": 8,
    }


def test_rebasing_is_transparent():
    # rank-deficient inside F3: relative and absolute runs must agree
    cases = [
        (3, ["ab", "ba"], ["abba"]),
        (3, ["aa", "bb", "abAB"], ["ab"]),
    ]
    for args in cases:
        p = problem_from_strings(*args)
        pres = normal_generators(p)
        for d in range(1, 5):
            assert degree_exists(p, pres, d, relative_ambient=True) == degree_exists(
                p, pres, d, relative_ambient=False
            ), (args, d)
        da, wa = min_degree(p, pres, relative_ambient=True)
        db, wb = min_degree(p, pres, relative_ambient=False)
        assert da == db
        assert len(evaluate(wa, list(pres.h_basis), list(p.g_values))) == 0
        assert len(evaluate(wb, list(pres.h_basis), list(p.g_values))) == 0


def test_degree_flags_agree_with_enumeration():
    p = problem_from_strings(*H52)
    pres = normal_generators(p)
    wedge = build_G(p)
    seen = {kl.degree for kl in enumerate_kernel_loops(wedge, max_len=14)}
    for d in seen:
        assert degree_exists(p, pres, d)


def test_multi_degree_exists_projects_to_single():
    p1 = problem_from_strings(*H52)
    pres = normal_generators(p1)
    for d in range(1, 7):
        assert multi_degree_exists(p1, (d,)) == degree_exists(p1, pres, d)


def test_multi_degree_exists_on_two_targets():
    p = problem_from_strings(2, ["ba", "abbA"], ["a", "b"])
    pres = normal_generators(p)
    for eq in pres.generators:
        assert multi_degree_exists(p, multi_degree(eq))
    assert multi_degree_exists(p, (1, 1))
    assert multi_degree_exists(p, (4, 0))
    assert not multi_degree_exists(p, (0, 0))
    with pytest.raises(WordError):
        multi_degree_exists(p, (1,))


def test_equations_of_degree_two_family():
    p = problem_from_strings(*H53)
    pres = normal_generators(p)
    res = equations_of_degree(p, pres, 2, cap_len=16)
    assert res.degree == 2
    assert res.cap_len == 16
    assert not res.complete
    assert res.theoretical_bound > res.cap_len
    # [h2 h1, x h1] written out, up to rotation and inversion
    family = equation_word("h2 h1 x ~h2 ~h1 ~x", 2)
    keys = {cyclic_key(eq.letters) for eq in res.bases}
    assert keys == {cyclic_key(family.letters)}
    for eq in res.bases:
        assert degree(eq) == 2
        assert len(evaluate(eq, list(pres.h_basis), list(p.g_values))) == 0


def test_equations_of_degree_empty_when_absent():
    p = problem_from_strings(*H52)
    pres = normal_generators(p)
    res = equations_of_degree(p, pres, 3, cap_len=14)
    assert res.bases == ()
