"""Rational subsets: saturation, reduced-language automata, set algebra."""

import random

import pytest

from eqideal.folding import contains, subgroup_graph
from eqideal.rational import (
    CapExceeded,
    Dfa,
    concat_nfas,
    determinize_reduced_language,
    dfa_intersect,
    dfa_union,
    empty_dfa,
    identity_dfa,
    nfa_chain,
    ordered_letters,
    reduced_dfa,
    subgroup_nfa,
)
from eqideal.words import FreeWord, ambient_word, _free_reduce


def all_reduced_words(n, max_len):
    """Every freely reduced letter tuple up to a length, identity included."""
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for word in frontier:
            for l in ordered_letters(n):
                if word and word[-1] == -l:
                    continue
                nxt.append(word + (l,))
        out.extend(nxt)
        frontier = nxt
    return out


def dfa_language(dfa, n, max_len):
    return {w for w in all_reduced_words(n, max_len) if dfa.accepts_word(w)}


def test_ordered_letters():
    assert ordered_letters(2) == [1, -1, 2, -2]


def test_nfa_chain_reduced_dfa():
    d = reduced_dfa(nfa_chain(2, (1, 2)))
    assert d.accepts_word((1, 2))
    assert not d.accepts_word((1,))
    assert not d.contains_identity
    assert d.shortest_word() == [1, 2]


def test_subgroup_dfa_matches_graph_membership():
    h_graph = subgroup_graph(2, [ambient_word("ba", 2), ambient_word("abbA", 2)])
    d = reduced_dfa(subgroup_nfa(h_graph))
    for word in all_reduced_words(2, 6):
        expected = contains(h_graph, FreeWord(h_graph.alphabet, word))
        assert d.accepts_word(word) == expected, word


def test_subgroup_nontrivial_excludes_identity():
    h_graph = subgroup_graph(2, [ambient_word("ba", 2)])
    d_all = reduced_dfa(subgroup_nfa(h_graph))
    d_star = reduced_dfa(subgroup_nfa(h_graph, nontrivial=True))
    assert d_all.contains_identity
    assert not d_star.contains_identity
    for word in all_reduced_words(2, 6):
        if word:
            assert d_star.accepts_word(word) == d_all.accepts_word(word)


def test_concat_saturation_cancels():
    # <ab> concatenated with <ba>: the product set contains ab ~a~b ... etc;
    # saturation must find deep cancellations like (ab)(BA) -> identity
    g1 = subgroup_graph(2, [ambient_word("ab", 2)])
    g2 = subgroup_graph(2, [ambient_word("ab", 2)])
    prod = reduced_dfa(concat_nfas([subgroup_nfa(g1), subgroup_nfa(g2)]))
    assert prod.contains_identity
    # brute-force product of reduced words, then reduce
    w1 = [w for w in all_reduced_words(2, 4) if reduced_dfa(subgroup_nfa(g1)).accepts_word(w)]
    expected = set()
    for u in w1:
        for v in w1:
            r = _free_reduce(list(u) + list(v))
            if len(r) <= 4:
                expected.add(r)
    got = {w for w in all_reduced_words(2, 4) if prod.accepts_word(w)}
    assert expected <= got


def test_concat_exact_on_chain_times_subgroup():
    # a . <b> = {a b^k} reduced
    g = subgroup_graph(2, [ambient_word("b", 2)])
    prod = reduced_dfa(concat_nfas([nfa_chain(2, (1,)), subgroup_nfa(g)]))
    lang = dfa_language(prod, 2, 4)
    assert (1,) in lang
    assert (1, 2) in lang and (1, -2, -2) in lang
    assert (2, 1) not in lang and () not in lang


def test_canonical_dfa_equality_is_language_equality():
    g = subgroup_graph(2, [ambient_word("ab", 2)])
    # two syntactically different routes to the same language
    d1 = reduced_dfa(subgroup_nfa(g))
    d2 = reduced_dfa(concat_nfas([subgroup_nfa(g), subgroup_nfa(g)]))
    # <ab> is a subgroup: S . S = S
    assert d1 == d2
    d3 = reduced_dfa(concat_nfas([nfa_chain(2, (1,)), subgroup_nfa(g)]))
    assert d1 != d3


def test_union_and_intersection():
    da = reduced_dfa(nfa_chain(2, (1,)))
    db = reduced_dfa(nfa_chain(2, (2,)))
    u = dfa_union([da, db])
    assert u.accepts_word((1,)) and u.accepts_word((2,))
    assert not u.accepts_word((1, 2))
    i = dfa_intersect(u, da)
    assert i == da
    assert dfa_intersect(da, db).is_empty


def test_empty_and_identity():
    e = empty_dfa(2)
    assert e.is_empty and not e.contains_identity
    assert e.shortest_word() is None
    i = identity_dfa(2)
    assert i.contains_identity and not i.accepts_word((1,))
    assert i.shortest_word() == []


def test_shortest_word_is_minimal_and_lex_least():
    g = subgroup_graph(2, [ambient_word("ba", 2), ambient_word("abbA", 2)])
    d = reduced_dfa(subgroup_nfa(g, nontrivial=True))
    shortest = d.shortest_word()
    assert shortest is not None
    lengths = sorted(len(w) for w in dfa_language(d, 2, 4))
    assert len(shortest) == lengths[0]
    candidates = [w for w in dfa_language(d, 2, len(shortest)) if len(w) == len(shortest)]
    ranked = sorted(candidates, key=lambda w: [ordered_letters(2).index(l) for l in w])
    assert tuple(shortest) == ranked[0]


def test_accepted_words_are_reduced_language():
    # the reduced-language dfa never accepts an unreduced spelling
    g = subgroup_graph(2, [ambient_word("aba", 2), ambient_word("bb", 2)])
    d = reduced_dfa(concat_nfas([subgroup_nfa(g), nfa_chain(2, (1,))]))
    rng = random.Random(5)
    for _ in range(200):
        word = []
        for _ in range(rng.randint(1, 6)):
            word.append(rng.choice(ordered_letters(2)))
        if tuple(_free_reduce(word)) != tuple(word):
            assert not d.accepts_word(tuple(word))


def test_determinize_reduced_language_plain():
    d = determinize_reduced_language(nfa_chain(2, (1, -1, 2)))
    # no saturation requested: the raw word a~ab is unreduced, so it is dropped
    assert d.is_empty or not d.accepts_word((2,))


def test_state_cap_raises():
    gens = [ambient_word(w, 2) for w in ("ab", "ba", "aabb", "abab")]
    g = subgroup_graph(2, gens)
    with pytest.raises(CapExceeded):
        reduced_dfa(concat_nfas([subgroup_nfa(g)] * 4), cap=3)


def test_dfa_is_frozen():
    d = identity_dfa(2)
    with pytest.raises(AttributeError):
        d.start = 5
