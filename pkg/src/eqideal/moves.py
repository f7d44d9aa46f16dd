"""Parallel cancellation and insertion moves on paths with processes.

Two couples of a maximal reduction process are parallel when one nests
inside the other and the four coupled steps traverse, pairwise, the same
edge with the same orientation.  Cancelling collapses the two arcs between
them; inserting splices a loop u (and its inverse) around a couple whose
steps lie in the core of the subgroup part, creating |u| new nested couples.
These are exact inverses of each other, disjoint insertions commute, and
stacked insertions consolidate to one per original couple.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .graphs import GraphError, GraphPath, ReductionProcess
from .ideal import WedgeData, loop_degree
from .words import FreeWord, WordError


@dataclass(frozen=True)
class ParallelCouple:
    """Indices of a nested pair of couples: alpha inside, beta outside."""

    alpha: int
    beta: int

    def __post_init__(self):
        if not (0 <= self.alpha < self.beta):
            raise GraphError("a parallel couple needs 0 <= alpha < beta")


@dataclass(frozen=True)
class InsertionSpec:
    """An insertion: the couple to wrap and the loop word to splice in."""

    couple: int
    word: FreeWord


def _validate_parallel(proc: ReductionProcess, pc: ParallelCouple) -> tuple:
    if pc.alpha >= len(proc.couples) or pc.beta >= len(proc.couples):
        raise GraphError("couple index out of range")
    sa, ta = proc.couples[pc.alpha]
    sb, tb = proc.couples[pc.beta]
    steps = proc.path.steps
    if not (sb < sa and ta < tb):
        raise GraphError("couples are not nested in the parallel order")
    if steps[sa] != steps[sb] or steps[ta] != steps[tb]:
        raise GraphError("couple steps do not traverse matching edges")
    return sa, ta, sb, tb


def find_parallel_couples(path: GraphPath, proc: ReductionProcess) -> list[ParallelCouple]:
    """All parallel pairs of the process, lexicographically ordered."""
    if proc.path != path:
        raise GraphError("process does not belong to this path")
    if not proc.is_maximal:
        raise GraphError("parallel couples are defined for maximal processes")
    steps = path.steps
    out = []
    couples = proc.couples
    for b in range(len(couples)):
        sb, tb = couples[b]
        for a in range(b):
            sa, ta = couples[a]
            if sb < sa and ta < tb and steps[sa] == steps[sb] and steps[ta] == steps[tb]:
                out.append(ParallelCouple(a, b))
    out.sort(key=lambda pc: (pc.alpha, pc.beta))
    return out


def cancel(
    path: GraphPath, proc: ReductionProcess, pc: ParallelCouple
) -> tuple[GraphPath, ReductionProcess]:
    """Collapse the two arcs between a parallel pair of couples.

    Every couple of the process has either both or neither of its steps in
    the collapsed arcs, so the surviving couples reindex to a maximal
    process for the shorter path.
    """
    if proc.path != path:
        raise GraphError("process does not belong to this path")
    sa, ta, sb, tb = _validate_parallel(proc, pc)
    removed = sorted(set(range(sb, sa)) | set(range(ta + 1, tb + 1)))
    removed_set = set(removed)

    def new_pos(p: int) -> int:
        return p - bisect_left(removed, p)

    steps = list(path.steps)
    kept_steps = [s for i, s in enumerate(steps) if i not in removed_set]
    new_path = GraphPath(path.graph, kept_steps, start=path.start)
    new_couples = []
    for s, t in proc.couples:
        inside = (s in removed_set, t in removed_set)
        if inside == (True, True):
            continue
        if inside != (False, False):
            raise GraphError("process couple straddles the collapsed arcs")
        new_couples.append((new_pos(s), new_pos(t)))
    new_couples.sort(key=lambda c: c[1])
    return new_path, ReductionProcess(new_path, tuple(new_couples))


def cancel_inverse_spec(
    path: GraphPath, proc: ReductionProcess, pc: ParallelCouple
) -> InsertionSpec:
    """The insertion that undoes cancel(path, proc, pc) on the result.

    The word is the label word of the left collapsed arc; the couple index
    is where alpha lands in the cancelled process.
    """
    sa, ta, sb, tb = _validate_parallel(proc, pc)
    removed = sorted(set(range(sb, sa)) | set(range(ta + 1, tb + 1)))
    removed_set = set(removed)
    letters = [path.signed_label(i) for i in range(sb, sa)]
    word = FreeWord.raw(_ambient(path), letters)
    survivors = []
    for idx, (s, t) in enumerate(proc.couples):
        if s in removed_set:
            continue
        survivors.append((idx, t - bisect_left(removed, t)))
    survivors.sort(key=lambda a: a[1])
    for new_idx, (old_idx, _) in enumerate(survivors):
        if old_idx == pc.alpha:
            return InsertionSpec(new_idx, word)
    raise GraphError("alpha vanished during cancellation")


def _ambient(path: GraphPath):
    from .words import Alphabet

    return Alphabet.ambient(path.graph.n)


def is_degree_preserving(
    wedge: WedgeData, path: GraphPath, proc: ReductionProcess, pc: ParallelCouple
) -> bool:
    """True when cancelling the pair keeps the equation degree."""
    new_path, _ = cancel(path, proc, pc)
    return loop_degree(wedge, path) == loop_degree(wedge, new_path)


def _trace_in_subset(graph, edge_ids, word: FreeWord, start: int):
    """Trace a word using only the given edges; None when stuck."""
    steps = []
    v = start
    for letter in word.letters:
        hit = None
        for signed, eid, far in graph.ends(v):
            if signed == letter and eid in edge_ids:
                hit = (eid, 1 if signed > 0 else -1, far)
                break
        if hit is None:
            return None
        steps.append((hit[0], hit[1]))
        v = hit[2]
    return steps, v


def _validate_insertion(
    wedge: WedgeData, path: GraphPath, proc: ReductionProcess, spec: InsertionSpec
):
    if proc.path != path:
        raise GraphError("process does not belong to this path")
    if not proc.is_maximal:
        raise GraphError("insertion needs a maximal process")
    if not (0 <= spec.couple < len(proc.couples)):
        raise GraphError("insertion couple index out of range")
    sa, ta = proc.couples[spec.couple]
    for pos in (sa, ta):
        if path.steps[pos][0] not in wedge.h_core_edge_ids:
            raise GraphError("insertion couple must lie in the core of the subgroup part")
    u = spec.word
    if u.alphabet.kind != "ambient" or u.alphabet.n != wedge.graph.n:
        raise WordError("insertion word must be an ambient word")
    if len(u) == 0:
        raise WordError("insertion word must be nonempty")
    if not u.is_cyclically_reduced:
        raise WordError("insertion word must be cyclically reduced")
    if u.letters[0] != path.signed_label(sa):
        raise WordError("insertion word must begin with the couple's label")
    v1 = path.step_source(sa)
    v2 = path.step_target(ta)
    t1 = _trace_in_subset(wedge.graph, wedge.h_core_edge_ids, u, v1)
    if t1 is None or t1[1] != v1:
        raise WordError("insertion word does not close up in core(H) at the left vertex")
    t2 = _trace_in_subset(wedge.graph, wedge.h_core_edge_ids, u, v2)
    if t2 is None or t2[1] != v2:
        raise WordError("insertion word does not close up in core(H) at the right vertex")
    return sa, ta, t1[0], t2[0]


def _insert_full(
    wedge: WedgeData, path: GraphPath, proc: ReductionProcess, spec: InsertionSpec
):
    """Insert and report index bookkeeping.

    Returns (path2, proc2, old_to_new, created) where old_to_new maps old
    couple indices into proc2 and created[j-1] is the proc2 index of the
    j-th new couple, innermost first.
    """
    sa, ta, tau1, tau2_fwd = _validate_insertion(wedge, path, proc, spec)
    ell = len(spec.word)
    tau2 = [(e, -d) for e, d in reversed(tau2_fwd)]
    steps = list(path.steps)
    new_steps = steps[:sa] + tau1 + steps[sa : ta + 1] + tau2 + steps[ta + 1 :]
    new_path = GraphPath(path.graph, new_steps, start=path.start)

    def shift(p: int) -> int:
        out = p
        if p >= sa:
            out += ell
        if p > ta:
            out += ell
        return out

    tagged = []
    for idx, (s, t) in enumerate(proc.couples):
        tagged.append(((shift(s), shift(t)), ("old", idx)))
    for j in range(1, ell + 1):
        tagged.append(((sa + ell - j, ta + ell + j), ("new", j)))
    tagged.sort(key=lambda item: item[0][1])
    couples = tuple(c for c, _ in tagged)
    proc2 = ReductionProcess(new_path, couples)
    old_to_new: dict[int, int] = {}
    created: list[int] = [0] * ell
    for pos, (_, tag) in enumerate(tagged):
        kind, value = tag
        if kind == "old":
            old_to_new[value] = pos
        else:
            created[value - 1] = pos
    return new_path, proc2, old_to_new, created


def insert(
    wedge: WedgeData, path: GraphPath, proc: ReductionProcess, spec: InsertionSpec
) -> tuple[GraphPath, ReductionProcess]:
    """Splice loops reading u and its inverse around the chosen couple."""
    new_path, proc2, _, _ = _insert_full(wedge, path, proc, spec)
    return new_path, proc2


def apply_insertions(
    wedge: WedgeData, path: GraphPath, proc: ReductionProcess, specs
) -> tuple[GraphPath, ReductionProcess]:
    for spec in specs:
        path, proc = insert(wedge, path, proc, spec)
    return path, proc


def insertion_words(
    wedge: WedgeData,
    path: GraphPath,
    proc: ReductionProcess,
    couple: int,
    max_len: int,
) -> list[FreeWord]:
    """All valid insertion words of length <= max_len at the couple.

    Enumerates reduced loops in core(H) at the couple's left vertex whose
    first letter matches the couple label, then keeps those that also close
    up at the right vertex and are cyclically reduced.
    """
    if not (0 <= couple < len(proc.couples)):
        raise GraphError("insertion couple index out of range")
    sa, ta = proc.couples[couple]
    if path.steps[sa][0] not in wedge.h_core_edge_ids or path.steps[ta][0] not in wedge.h_core_edge_ids:
        return []
    first = path.signed_label(sa)
    v1 = path.step_source(sa)
    v2 = path.step_target(ta)
    graph = wedge.graph
    core = wedge.h_core_edge_ids
    from .words import Alphabet

    ambient = Alphabet.ambient(graph.n)
    out: list[FreeWord] = []

    def walk(vertex: int, letters: list[int]) -> None:
        if letters and vertex == v1 and letters[0] != -letters[-1]:
            u = FreeWord.raw(ambient, list(letters))
            check = _trace_in_subset(graph, core, u, v2)
            if check is not None and check[1] == v2:
                out.append(u)
        if len(letters) == max_len:
            return
        for signed, eid, far in graph.ends(vertex):
            if eid not in core:
                continue
            if letters and signed == -letters[-1]:
                continue
            if not letters and signed != first:
                continue
            letters.append(signed)
            walk(far, letters)
            letters.pop()

    walk(v1, [])
    out.sort(key=lambda w: (len(w), w.letters))
    return out


def consolidate(
    wedge: WedgeData, path: GraphPath, proc: ReductionProcess, specs
) -> list[InsertionSpec]:
    """Collapse a sequence of insertions to one per original couple.

    Insertions at the same couple concatenate; an insertion at a couple
    created by an earlier insertion splices into the parent's word at the
    nesting depth of that couple.  The returned specs are sequentially
    valid in ascending original-couple order and replay to the same path.
    """
    if not specs:
        return []
    tags: list[tuple] = [("orig", i) for i in range(len(proc.couples))]
    words: dict[int, list[int]] = {}
    cur_path, cur_proc = path, proc
    original = (path, proc)
    for spec in specs:
        kind_owner = tags[spec.couple]
        if kind_owner[0] == "orig":
            owner, depth = kind_owner[1], 0
        else:
            _, owner, depth = kind_owner
        w = words.get(owner, [])
        ell = len(spec.word)
        cut = len(w) - depth
        words[owner] = w[:cut] + list(spec.word.letters) + w[cut:]
        cur_path, cur_proc, old_to_new, created = _insert_full(wedge, cur_path, cur_proc, spec)
        new_tags: list[tuple] = [None] * len(cur_proc.couples)
        for old_idx, new_idx in old_to_new.items():
            tag = tags[old_idx]
            if tag[0] == "new" and tag[1] == owner and tag[2] > depth:
                tag = ("new", owner, tag[2] + ell)
            new_tags[new_idx] = tag
        for j, new_idx in enumerate(created, start=1):
            new_tags[new_idx] = ("new", owner, depth + j)
        tags = new_tags

    out: list[InsertionSpec] = []
    shift = 0
    ambient = _ambient(path)
    for owner in sorted(words):
        letters = words[owner]
        word = FreeWord.raw(ambient, letters)
        if len(word.reduced()) != len(letters):
            raise GraphError("consolidated insertion word failed to stay reduced")
        out.append(InsertionSpec(owner + shift, word))
        shift += len(letters)

    replay_path, replay_proc = apply_insertions(wedge, original[0], original[1], out)
    if replay_path.steps != cur_path.steps:
        raise GraphError("consolidated insertions do not replay to the same path")
    return out
