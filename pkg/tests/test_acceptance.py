"""Acceptance gate: one test and one verdict line per criterion.

Verdict lines are emitted outside pytest's capture so they show up in
the -v stream next to the test that produced them.
"""

import random
import sys
from math import gcd

from eqideal.degrees import (
    _Sweep,
    degree_exists,
    degree_set,
    equations_of_degree,
    min_degree,
)
from eqideal.folding import fold
from eqideal.graphs import label_process, wedge_of_words
from eqideal.ideal import (
    Problem,
    build_G,
    cyclic_generator,
    depends,
    normal_generators,
    parity_class,
    problem_from_strings,
)
from eqideal.moves import (
    InsertionSpec,
    ParallelCouple,
    _insert_full,
    apply_insertions,
    cancel,
    cancel_inverse_spec,
    consolidate,
    find_parallel_couples,
    insert,
    insertion_words,
)
from eqideal.oracle import (
    SearchBudgetExceeded,
    cyclic_key,
    enumerate_kernel_loops,
)
from eqideal.words import (
    Alphabet,
    FreeWord,
    ambient_word,
    degree,
    equation_word,
    evaluate,
)

H52 = (2, ["ba", "abbA"], ["a"])
H53 = (2, ["b", "ababa"], ["a"])
H54 = (2, ["aaBA", "aaa", "baB"], ["aaB"])


def _verdict(label, body, capsys):
    try:
        body()
    except BaseException:
        with capsys.disabled():
            sys.stdout.write("\n%s: FAIL\n" % label)
        raise
    with capsys.disabled():
        sys.stdout.write("\n%s: PASS\n" % label)


def _random_word(rng, n, maxlen):
    choices = [s * l for l in range(1, n + 1) for s in (1, -1)]
    while True:
        letters = [rng.choice(choices) for _ in range(rng.randint(1, maxlen))]
        w = FreeWord(Alphabet.ambient(n), letters)
        if len(w) > 0:
            return w


def _random_problem(rng, max_h=3, h_len=6, g_len=4):
    while True:
        n = rng.randint(1, 3)
        h = tuple(_random_word(rng, n, h_len) for _ in range(rng.randint(1, max_h)))
        g = _random_word(rng, n, g_len)
        try:
            return Problem(n, h, (g,))
        except Exception:
            continue


def _reduced_path_count(graph, cap, limit):
    """Reduced paths from the basepoint of length <= cap, stopping at limit."""
    cur = {}
    for signed, _, far in graph.ends(graph.basepoint):
        cur[(far, signed)] = cur.get((far, signed), 0) + 1
    total = sum(cur.values())
    for _ in range(cap - 1):
        nxt = {}
        for (v, last), cnt in cur.items():
            for signed, _, far in graph.ends(v):
                if signed == -last:
                    continue
                nxt[(far, signed)] = nxt.get((far, signed), 0) + cnt
        cur = nxt
        total += sum(cur.values())
        if total > limit:
            return total
    return total


def test_criterion_1_cyclic_subgroups(capsys):
    def body():
        assert cyclic_generator(5, 2).letters == (1, -2, -2, 1, -2, -2, -2)
        for m in range(1, 8):
            for k in range(1, 8):
                if gcd(m, k) != 1:
                    continue
                w = cyclic_generator(m, k)
                letters = list(w.letters)
                assert letters.count(1) == k
                assert letters.count(-2) == m
                assert len(letters) == m + k
                value = evaluate(w, [ambient_word("a" * m, 1)], [ambient_word("a" * k, 1)])
                assert len(value) == 0

                p = problem_from_strings(1, ["a" * m], ["a" * k])
                pres = normal_generators(p)
                d_min, witness = min_degree(p, pres)
                assert d_min == (1 if m == 1 else 2)
                assert degree(witness) == d_min
                assert len(evaluate(witness, list(pres.h_basis), list(p.g_values))) == 0

                ds = degree_set(p, pres)
                if m == 1:
                    assert (ds.base, ds.exceptional) == ("N", frozenset())
                elif m % 2 == 0:
                    assert ds.case == "even-only"
                    assert (ds.base, ds.exceptional) == ("2N", frozenset())
                else:
                    assert ds.case == "odd-present"
                    assert ds.base == "N"
                    assert ds.exceptional == frozenset(range(1, m, 2))
                sweep = _Sweep(p, True, 200000)
                for d in range(1, 3 * m + 1):
                    assert ds.contains(d) == degree_exists(p, pres, d, _sweep=sweep), (m, k, d)

    _verdict("criterion 1 (rank-one subgroups)", body, capsys)


def test_criterion_2_even_only_instance(capsys):
    def body():
        p = problem_from_strings(*H52)
        pres = normal_generators(p)
        assert len(pres.generators) == 1
        expected = equation_word("~x h2 x x ~h1 x ~h1", 2)
        assert cyclic_key(pres.generators[0].letters) == cyclic_key(expected.letters)

        d_min, witness = min_degree(p, pres)
        assert d_min == 4
        assert degree(witness) == 4
        assert len(evaluate(witness, list(pres.h_basis), list(p.g_values))) == 0
        assert not degree_exists(p, pres, 2)
        assert degree_exists(p, pres, 4)
        assert degree_exists(p, pres, 6)

        ds = degree_set(p, pres)
        assert ds.case == "even-only"
        assert ds.exceptional == frozenset({2})

    _verdict("criterion 2 (even-only instance)", body, capsys)


def test_criterion_3_degree_two_family(capsys):
    def body():
        p = problem_from_strings(*H53)
        pres = normal_generators(p)
        assert len(pres.generators) == 1
        expected = equation_word("~h2 x h1 x h1 x", 2)
        assert cyclic_key(pres.generators[0].letters) == cyclic_key(expected.letters)

        alpha = Alphabet.equation(2, 1)
        h2h1 = FreeWord(alpha, [2, 1])
        xh1 = FreeWord(alpha, [3, 1])
        family = {}
        for i in range(-8, 9):
            if i == 0:
                continue
            member = (h2h1 ** i) * xh1 * (h2h1 ** -i) * ~xh1
            family[cyclic_key(member.letters)] = i

        d_min, witness = min_degree(p, pres)
        assert d_min == 2
        assert cyclic_key(witness.letters) in family

        ds = degree_set(p, pres)
        assert ds.case == "odd-present"
        assert ds.exceptional == frozenset({1})

        res = equations_of_degree(p, pres, 2, cap_len=16)
        assert res.bases
        for eq in res.bases:
            assert cyclic_key(eq.letters) in family

    _verdict("criterion 3 (degree-two family)", body, capsys)


def test_criterion_4_two_generator_ideal(capsys):
    def body():
        p = problem_from_strings(*H54)
        pres = normal_generators(p)
        assert len(pres.generators) == 2
        for eq in pres.generators:
            assert len(evaluate(eq, list(pres.h_basis), list(p.g_values))) == 0
        wedge = build_G(p)
        assert len(pres.generators) == wedge.graph.rank() - pres.rank_hg
        assert wedge.graph.rank() == 4 and pres.rank_hg == 2

        h_in = [ambient_word(s, 2) for s in H54[1]]
        g_in = [ambient_word(H54[2][0], 2)]
        for text in ("~x h1 x ~h3 ~x h2 ~x h1", "~x h1 x h3 ~x"):
            eq = equation_word(text, 3)
            assert len(evaluate(eq, h_in, g_in)) == 0

        d_min, witness = min_degree(p, pres)
        assert d_min == 2
        assert len(evaluate(witness, list(pres.h_basis), list(p.g_values))) == 0
        ds = degree_set(p, pres)
        assert ds.case == "odd-present"
        assert ds.exceptional == frozenset({1})

    _verdict("criterion 4 (two-generator ideal)", body, capsys)


def test_criterion_5_fold_order_independence(capsys):
    def body():
        rng = random.Random(20260814)
        for _ in range(100):
            n = rng.randint(1, 3)
            words = [_random_word(rng, n, 8) for _ in range(rng.randint(1, 4))]
            g0 = wedge_of_words(n, words)
            canon = None
            for _ in range(5):
                tr = fold(g0, random.Random(rng.randint(0, 10 ** 9)))
                assert tr.k == g0.num_vertices - tr.final.num_vertices
                c = tr.final.canonical_form()
                if canon is None:
                    canon = c
                assert c == canon

    _verdict("criterion 5 (fold-order independence)", body, capsys)


def test_criterion_6_oracle_equivalence(capsys):
    def body():
        rng = random.Random(5151)
        accepted = 0
        with_hits = 0
        guard = 0
        while accepted < 50:
            guard += 1
            assert guard < 20000
            p = _random_problem(rng)
            if not depends(p):
                continue
            wedge = build_G(p)
            if len(wedge.graph.edges) > 10:
                continue
            # skip instances whose cap-16 enumeration is not affordable
            if _reduced_path_count(wedge.graph, 16, 500_000) > 500_000:
                continue
            try:
                loops = enumerate_kernel_loops(wedge, max_len=16, node_budget=100_000)
            except SearchBudgetExceeded:
                continue
            accepted += 1
            pres = normal_generators(p)
            oracle_degrees = {kl.degree for kl in loops if kl.degree <= 6}
            if oracle_degrees:
                with_hits += 1
            sweep = _Sweep(p, True, 200000)
            for d in range(1, 7):
                flag = degree_exists(p, pres, d, _sweep=sweep)
                if d in oracle_degrees:
                    assert flag, (p, d)
                if not flag:
                    assert d not in oracle_degrees, (p, d)
        assert accepted == 50
        assert with_hits >= 40

    _verdict("criterion 6 (oracle equivalence)", body, capsys)


def test_criterion_7_move_calculus(capsys):
    def body():
        rng = random.Random(777)
        pairs = 0
        commuted = 0
        consolidated = 0
        guard = 0
        while pairs < 200:
            guard += 1
            assert guard < 20000
            p = _random_problem(rng)
            if not depends(p):
                continue
            wedge = build_G(p)
            pres = normal_generators(p)
            for path in pres.generator_paths:
                if not path.steps:
                    continue
                proc = label_process(path)
                if 2 * len(proc.couples) != len(path.steps):
                    continue
                with_words = []
                for c in range(len(proc.couples)):
                    for w in insertion_words(wedge, path, proc, c, 6)[:3]:
                        if pairs >= 200:
                            break
                        pairs += 1
                        with_words.append((c, w))
                        spec = InsertionSpec(c, w)
                        p2, pr2, old_to_new, created = _insert_full(wedge, path, proc, spec)
                        pc = ParallelCouple(old_to_new[c], created[-1])
                        assert pc in find_parallel_couples(p2, pr2)
                        # cancel after insert: back to the start
                        p3, pr3 = cancel(p2, pr2, pc)
                        assert p3.steps == path.steps and pr3.couples == proc.couples
                        # insert after cancel: back to the inserted path
                        back = cancel_inverse_spec(p2, pr2, pc)
                        assert back == spec
                        p4, pr4 = insert(wedge, p3, pr3, back)
                        assert p4.steps == p2.steps and pr4.couples == pr2.couples
                        # same-couple pair consolidates to one insertion
                        if consolidated < 30:
                            consolidated += 1
                            twice = [spec, InsertionSpec(old_to_new[c], w)]
                            target, _ = apply_insertions(wedge, path, proc, twice)
                            merged = consolidate(wedge, path, proc, twice)
                            assert len(merged) == 1 and merged[0].couple == c
                            replay, _ = apply_insertions(wedge, path, proc, merged)
                            assert replay.steps == target.steps
                couples_seen = sorted({c for c, _ in with_words})
                if len(couples_seen) >= 2 and commuted < 30:
                    commuted += 1
                    c1 = couples_seen[0]
                    c2 = couples_seen[1]
                    w1 = next(w for c, w in with_words if c == c1)
                    w2 = next(w for c, w in with_words if c == c2)
                    _, _, map1, _ = _insert_full(wedge, path, proc, InsertionSpec(c1, w1))
                    ab = apply_insertions(
                        wedge, path, proc,
                        [InsertionSpec(c1, w1), InsertionSpec(map1[c2], w2)],
                    )
                    _, _, map2, _ = _insert_full(wedge, path, proc, InsertionSpec(c2, w2))
                    ba = apply_insertions(
                        wedge, path, proc,
                        [InsertionSpec(c2, w2), InsertionSpec(map2[c1], w1)],
                    )
                    assert ab[0].steps == ba[0].steps
                    assert ab[1].couples == ba[1].couples
        assert pairs == 200
        assert commuted >= 10
        assert consolidated >= 30

    _verdict("criterion 7 (move calculus)", body, capsys)


def test_criterion_8_parity_and_closure(capsys):
    def body():
        instances = [
            problem_from_strings(1, ["a"], ["aaa"]),
            problem_from_strings(1, ["aa"], ["aaa"]),
            problem_from_strings(1, ["aaaaa"], ["aa"]),
            problem_from_strings(*H52),
            problem_from_strings(*H53),
            problem_from_strings(*H54),
        ]
        rng = random.Random(999)
        while len(instances) < 12:
            p = _random_problem(rng)
            if depends(p) and len(build_G(p).graph.edges) <= 10:
                instances.append(p)

        for p in instances:
            pres = normal_generators(p)
            if not pres.generators:
                continue
            sweep = _Sweep(p, True, 200000)
            flags = {d: degree_exists(p, pres, d, _sweep=sweep) for d in range(1, 12)}
            if parity_class(pres) == "all-even":
                assert not any(flags[d] for d in range(1, 12, 2)), p
            if any(flags[d] for d in range(1, 12, 2)):
                assert parity_class(pres) == "has-odd", p
            realized = [d for d in range(1, 7) if flags[d]]
            for d in realized:
                for d2 in realized:
                    for k in range(5):
                        target = d + d2 + 2 * k
                        assert degree_exists(p, pres, target, _sweep=sweep), (p, d, d2, k)

    _verdict("criterion 8 (parity and closure)", body, capsys)
