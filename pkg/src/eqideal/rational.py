"""Rational subsets of a free group as automata over signed letters.

A subset is represented by the regular language of the reduced words of its
elements.  Products with cancellation are handled by epsilon-pair saturation:
whenever r --l--> p, p ~ q and q --(-l)--> s for states already linked by a
trivial-in-the-group word, r ~ s is added, and the relation is closed under
transitivity.  Filtering the saturated automaton to reduced words and
determinizing then gives a canonical DFA for the subset, so subset equality,
intersection and membership of the identity all become automaton operations.

States are plain ints; transitions read nonzero signed letters (+a, -a).
Letter order is a < ~a < b < ~b < ..., which fixes every determinization and
every shortest-word extraction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graphs import LabeledGraph

DEFAULT_STATE_CAP = 50_000


class CapExceeded(RuntimeError):
    """An automaton construction outgrew its state budget."""


def letter_key(letter: int) -> tuple[int, int]:
    return (abs(letter), 0 if letter > 0 else 1)


def ordered_letters(n: int) -> list[int]:
    out = []
    for a in range(1, n + 1):
        out.append(a)
        out.append(-a)
    return out


@dataclass
class Nfa:
    """Nondeterministic automaton with optional epsilon pairs."""

    n: int
    num_states: int
    start: int
    accepts: set[int]
    trans: list[dict[int, set[int]]]
    eps: set[tuple[int, int]] = field(default_factory=set)

    def add_state(self) -> int:
        self.trans.append({})
        self.num_states += 1
        return self.num_states - 1

    def add_arc(self, src: int, letter: int, dst: int) -> None:
        self.trans[src].setdefault(letter, set()).add(dst)


def nfa_chain(n: int, letters: Sequence[int]) -> Nfa:
    """The singleton subset given by one (not necessarily reduced) word."""
    trans: list[dict[int, set[int]]] = [{} for _ in range(len(letters) + 1)]
    for i, letter in enumerate(letters):
        trans[i].setdefault(letter, set()).add(i + 1)
    return Nfa(n, len(letters) + 1, 0, {len(letters)}, trans)


def subgroup_nfa(graph: LabeledGraph, nontrivial: bool = False) -> Nfa:
    """The subgroup carried by a folded based graph, optionally minus 1.

    The plain version uses the graph itself (loops at the basepoint).  The
    nontrivial version tracks the last letter read so that only nonempty
    reduced loops are accepted, which is exactly H without the identity.
    """
    n = graph.n
    if not nontrivial:
        trans: list[dict[int, set[int]]] = [{} for _ in range(graph.num_vertices)]
        for e in graph.edges:
            trans[e.source].setdefault(e.label, set()).add(e.target)
            trans[e.target].setdefault(-e.label, set()).add(e.source)
        return Nfa(n, graph.num_vertices, graph.basepoint, {graph.basepoint}, trans)

    index: dict[tuple[int, int], int] = {}
    states = 1  # 0 is the fresh start
    arcs: list[tuple[int, int, int]] = []
    for v in range(graph.num_vertices):
        for signed, _, far in graph.ends(v):
            if (far, signed) not in index:
                index[(far, signed)] = states
                states += 1
    for v in range(graph.num_vertices):
        for signed, _, far in graph.ends(v):
            dst = index[(far, signed)]
            if v == graph.basepoint:
                arcs.append((0, signed, dst))
    for (v, last), src in list(index.items()):
        for signed, _, far in graph.ends(v):
            if signed == -last:
                continue
            arcs.append((src, signed, index[(far, signed)]))
    trans = [{} for _ in range(states)]
    nfa = Nfa(graph.n, states, 0, set(), trans)
    for src, letter, dst in arcs:
        nfa.add_arc(src, letter, dst)
    nfa.accepts = {index[(graph.basepoint, l)] for (v, l) in index if v == graph.basepoint}
    return nfa


def concat_nfas(parts: Sequence[Nfa]) -> Nfa:
    """Concatenation; factor boundaries become epsilon pairs."""
    if not parts:
        raise ValueError("need at least one factor")
    n = parts[0].n
    total = sum(p.num_states for p in parts)
    trans: list[dict[int, set[int]]] = [{} for _ in range(total)]
    eps: set[tuple[int, int]] = set()
    offset = 0
    offsets = []
    for p in parts:
        if p.n != n:
            raise ValueError("mixed ambient ranks")
        offsets.append(offset)
        for s, arcs in enumerate(p.trans):
            for letter, dsts in arcs.items():
                trans[s + offset].setdefault(letter, set()).update(d + offset for d in dsts)
        eps.update((a + offset, b + offset) for a, b in p.eps)
        offset += p.num_states
    for i in range(len(parts) - 1):
        bridge_to = parts[i + 1].start + offsets[i + 1]
        eps.update((acc + offsets[i], bridge_to) for acc in parts[i].accepts)
    return Nfa(
        n,
        total,
        parts[0].start,
        {a + offsets[-1] for a in parts[-1].accepts},
        trans,
        eps,
    )


def _saturate(nfa: Nfa) -> list[set[int]]:
    """Close the epsilon relation under Benois' rules; forward sets returned."""
    fwd: list[set[int]] = [set() for _ in range(nfa.num_states)]
    bwd: list[set[int]] = [set() for _ in range(nfa.num_states)]
    in_trans: list[dict[int, set[int]]] = [{} for _ in range(nfa.num_states)]
    for src, arcs in enumerate(nfa.trans):
        for letter, dsts in arcs.items():
            for dst in dsts:
                in_trans[dst].setdefault(letter, set()).add(src)

    work: deque[tuple[int, int]] = deque()

    def add(p: int, q: int) -> None:
        if p != q and q not in fwd[p]:
            fwd[p].add(q)
            bwd[q].add(p)
            work.append((p, q))

    for p, q in nfa.eps:
        add(p, q)
    for v in range(nfa.num_states):
        for letter, preds in in_trans[v].items():
            succs = nfa.trans[v].get(-letter)
            if not succs:
                continue
            for r in preds:
                for s in succs:
                    add(r, s)

    while work:
        p, q = work.popleft()
        for r in list(bwd[p]):
            add(r, q)
        for s in list(fwd[q]):
            add(p, s)
        for letter, preds in in_trans[p].items():
            succs = nfa.trans[q].get(-letter)
            if not succs:
                continue
            for r in preds:
                for s in succs:
                    add(r, s)
    return fwd


@dataclass(frozen=True)
class Dfa:
    """Canonical trim minimal DFA of a reduced-word language.

    Two rational subsets are equal iff their Dfa values are equal.  The empty
    subset is the one-state automaton with no accepting states.
    """

    n: int
    num_states: int
    start: int
    accepts: frozenset[int]
    trans: tuple[tuple[tuple[int, int], ...], ...]

    def step(self, state: int, letter: int) -> Optional[int]:
        for l, dst in self.trans[state]:
            if l == letter:
                return dst
        return None

    def accepts_word(self, letters: Iterable[int]) -> bool:
        state = self.start
        for letter in letters:
            state = self.step(state, letter)
            if state is None:
                return False
        return state in self.accepts

    @property
    def contains_identity(self) -> bool:
        return self.start in self.accepts

    @property
    def is_empty(self) -> bool:
        return not self.accepts

    def shortest_word(self) -> Optional[list[int]]:
        """Lexicographically least shortest accepted word, None when empty.

        Transitions are stored in letter order, so breadth-first discovery
        order is lexicographic among words of equal length.
        """
        if self.is_empty:
            return None
        if self.start in self.accepts:
            return []
        prev: dict[int, tuple[int, int]] = {}
        seen = {self.start}
        queue = deque([self.start])
        goal = None
        while queue and goal is None:
            state = queue.popleft()
            for letter, dst in self.trans[state]:
                if dst in seen:
                    continue
                seen.add(dst)
                prev[dst] = (state, letter)
                if dst in self.accepts:
                    goal = dst
                    break
                queue.append(dst)
        assert goal is not None
        out: list[int] = []
        state = goal
        while state != self.start:
            state, letter = prev[state]
            out.append(letter)
        out.reverse()
        return out

    def to_nfa(self) -> Nfa:
        trans: list[dict[int, set[int]]] = [{} for _ in range(self.num_states)]
        for src, arcs in enumerate(self.trans):
            for letter, dst in arcs:
                trans[src].setdefault(letter, set()).add(dst)
        return Nfa(self.n, self.num_states, self.start, set(self.accepts), trans)


def _canonicalize(
    n: int,
    num_states: int,
    start: int,
    accepts: set[int],
    trans: list[dict[int, int]],
) -> Dfa:
    """Trim to useful states, minimize, and renumber breadth-first."""
    # states that can reach an accepting state
    rev: list[set[int]] = [set() for _ in range(num_states)]
    for src, arcs in enumerate(trans):
        for dst in arcs.values():
            rev[dst].add(src)
    live = set(accepts)
    queue = deque(accepts)
    while queue:
        v = queue.popleft()
        for u in rev[v]:
            if u not in live:
                live.add(u)
                queue.append(u)
    if start not in live:
        return Dfa(n, 1, 0, frozenset(), ((),))

    # Moore refinement over live states, with a virtual sink class None
    letters = ordered_letters(n)
    cls: dict[int, int] = {v: (1 if v in accepts else 0) for v in live}
    while True:
        sig: dict[int, tuple] = {}
        for v in live:
            row = []
            for letter in letters:
                dst = trans[v].get(letter)
                row.append(cls[dst] if dst in cls else -1)
            sig[v] = (cls[v], tuple(row))
        relabel: dict[tuple, int] = {}
        new_cls: dict[int, int] = {}
        for v in sorted(live):
            if sig[v] not in relabel:
                relabel[sig[v]] = len(relabel)
            new_cls[v] = relabel[sig[v]]
        if len(relabel) == len(set(cls.values())):
            cls = new_cls
            break
        cls = new_cls

    class_trans: dict[int, dict[int, int]] = {}
    class_accepts: set[int] = set()
    for v in live:
        c = cls[v]
        row = class_trans.setdefault(c, {})
        for letter, dst in trans[v].items():
            if dst in cls:
                row[letter] = cls[dst]
        if v in accepts:
            class_accepts.add(c)

    # canonical numbering by BFS from the start class in letter order
    order: dict[int, int] = {cls[start]: 0}
    queue = deque([cls[start]])
    while queue:
        c = queue.popleft()
        for letter in letters:
            dst = class_trans.get(c, {}).get(letter)
            if dst is not None and dst not in order:
                order[dst] = len(order)
                queue.append(dst)
    out_trans: list[tuple[tuple[int, int], ...]] = [() for _ in range(len(order))]
    for c, idx in order.items():
        row = [
            (letter, order[dst])
            for letter, dst in class_trans.get(c, {}).items()
            if dst in order
        ]
        row.sort(key=lambda a: letter_key(a[0]))
        out_trans[idx] = tuple(row)
    out_accepts = frozenset(order[c] for c in class_accepts if c in order)
    return Dfa(n, len(order), 0, out_accepts, tuple(out_trans))


def _determinize(
    nfa: Nfa,
    closure: Optional[list[set[int]]],
    reduced_filter: bool,
    cap: int,
) -> Dfa:
    def close(states: Iterable[int]) -> frozenset[int]:
        if closure is None:
            return frozenset(states)
        out = set(states)
        for s in list(out):
            out.update(closure[s])
        return frozenset(out)

    start_set = close({nfa.start})
    key0 = (start_set, 0)
    index: dict[tuple[frozenset[int], int], int] = {key0: 0}
    rows: list[dict[int, int]] = [{}]
    accepts: set[int] = set()
    if start_set & nfa.accepts:
        accepts.add(0)
    queue = deque([key0])
    letters = ordered_letters(nfa.n)
    while queue:
        key = queue.popleft()
        states, last = key
        src = index[key]
        for letter in letters:
            if reduced_filter and letter == -last:
                continue
            targets: set[int] = set()
            for s in states:
                targets.update(nfa.trans[s].get(letter, ()))
            if not targets:
                continue
            closed = close(targets)
            new_key = (closed, letter if reduced_filter else 0)
            if new_key not in index:
                if len(index) >= cap:
                    raise CapExceeded(
                        "determinization exceeded %d states" % cap
                    )
                index[new_key] = len(rows)
                rows.append({})
                if closed & nfa.accepts:
                    accepts.add(index[new_key])
                queue.append(new_key)
            rows[src][letter] = index[new_key]
    return _canonicalize(nfa.n, len(rows), 0, accepts, rows)


def reduced_dfa(nfa: Nfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Canonical DFA of the reduced words of the subset the NFA describes."""
    closure = _saturate(nfa)
    return _determinize(nfa, closure, True, cap)


def determinize_reduced_language(nfa: Nfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Canonicalize an NFA whose language already consists of reduced words."""
    if nfa.eps:
        raise ValueError("epsilon pairs need the saturating construction")
    return _determinize(nfa, None, False, cap)


def dfa_union(parts: Sequence[Dfa], cap: int = DEFAULT_STATE_CAP) -> Dfa:
    if not parts:
        raise ValueError("need at least one operand")
    n = parts[0].n
    total = 1 + sum(p.num_states for p in parts)
    trans: list[dict[int, set[int]]] = [{} for _ in range(total)]
    accepts: set[int] = set()
    offset = 1
    for p in parts:
        if p.n != n:
            raise ValueError("mixed ambient ranks")
        for src, arcs in enumerate(p.trans):
            for letter, dst in arcs:
                trans[src + offset].setdefault(letter, set()).add(dst + offset)
        for letter, dst in p.trans[p.start]:
            trans[0].setdefault(letter, set()).add(dst + offset)
        accepts.update(a + offset for a in p.accepts)
        if p.start in p.accepts:
            accepts.add(0)
        offset += p.num_states
    union = Nfa(n, total, 0, accepts, trans)
    return _determinize(union, None, False, cap)


def dfa_intersect(a: Dfa, b: Dfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    if a.n != b.n:
        raise ValueError("mixed ambient ranks")
    index: dict[tuple[int, int], int] = {(a.start, b.start): 0}
    rows: list[dict[int, int]] = [{}]
    accepts: set[int] = set()
    if a.start in a.accepts and b.start in b.accepts:
        accepts.add(0)
    queue = deque([(a.start, b.start)])
    while queue:
        sa, sb = queue.popleft()
        src = index[(sa, sb)]
        moves_b = dict(b.trans[sb])
        for letter, da in a.trans[sa]:
            db = moves_b.get(letter)
            if db is None:
                continue
            key = (da, db)
            if key not in index:
                if len(index) >= cap:
                    raise CapExceeded("intersection exceeded %d states" % cap)
                index[key] = len(rows)
                rows.append({})
                if da in a.accepts and db in b.accepts:
                    accepts.add(index[key])
                queue.append(key)
            rows[src][letter] = index[key]
    return _canonicalize(a.n, len(rows), 0, accepts, rows)


def empty_dfa(n: int) -> Dfa:
    return Dfa(n, 1, 0, frozenset(), ((),))


def identity_dfa(n: int) -> Dfa:
    return Dfa(n, 1, 0, frozenset({0}), ((),))
