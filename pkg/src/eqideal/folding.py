"""Stallings folding with a rank-preserving-first schedule.

A fold merges two distinct edges that leave (or enter) a common vertex with
the same label.  When the far endpoints are distinct vertices the fold is a
homotopy equivalence (rank-preserving); otherwise it kills a basis element.
``fold`` performs a maximal run of rank-preserving folds before any other,
so the trace splits as G^0 -> ... -> G^k -> ... -> G^m with the first k
steps rank-preserving; k always equals the number of vertices lost, and the
final folded graph does not depend on the fold order.

Vertex and edge ids of the initial graph persist through the trace: a stage
graph has vertex set {root_at(v, stage)} and the surviving edges.  For the
rank-preserving part the trace can lift paths back to G^0 (a homotopy
inverse), inserting a two-step detour across each merged vertex pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .graphs import (
    GraphError,
    GraphPath,
    LabeledGraph,
    pointed_core,
    reduce_path,
    wedge_of_words,
)
from .words import FreeWord


@dataclass(frozen=True)
class FoldStep:
    """One fold: ``removed_edge`` is identified with ``kept_edge``.

    ``merged`` is the pair (kept_far, removed_far) of distinct vertices
    glued by a rank-preserving fold, None otherwise.  ``detour`` is a
    two-step path from kept_far to removed_far valid just before the fold,
    used when lifting paths back through the step.
    """

    kept_edge: int
    removed_edge: int
    merged: Optional[tuple[int, int]]
    detour: Optional[tuple[tuple[int, int], tuple[int, int]]]

    @property
    def rank_preserving(self) -> bool:
        return self.merged is not None


def _union_orientation(
    basepoint: Optional[int], kept_far: int, removed_far: int
) -> tuple[int, int]:
    """(child, parent) for the vertex union of a rank-preserving fold.

    The basepoint, else the smaller id, stays a root; this keeps the
    basepoint its own representative at every stage.  Both ``fold`` and
    ``FoldingTrace`` must apply the same rule or their stage vertex ids
    drift apart.
    """
    if removed_far == basepoint or (kept_far != basepoint and removed_far < kept_far):
        return kept_far, removed_far
    return removed_far, kept_far


class FoldingTrace:
    """The full record of a folding run on one initial graph."""

    def __init__(self, initial: LabeledGraph, steps: Sequence[FoldStep]):
        self.initial = initial
        self.steps = tuple(steps)
        self.k = sum(1 for s in self.steps if s.rank_preserving)
        if any(s.rank_preserving for s in self.steps[self.k:]):
            raise GraphError("rank-preserving steps must come first")
        self._merged_at: dict[int, tuple[int, int]] = {}
        self._removed_at: dict[int, tuple[int, int]] = {}
        for i, s in enumerate(self.steps):
            self._removed_at[s.removed_edge] = (i, s.kept_edge)
            if s.merged is not None:
                child, parent = _union_orientation(initial.basepoint, *s.merged)
                self._merged_at[child] = (i, parent)

    def __len__(self) -> int:
        return len(self.steps)

    def root_at(self, vertex: int, stage: int) -> int:
        """The vertex class representative after ``stage`` folds."""
        while vertex in self._merged_at and self._merged_at[vertex][0] < stage:
            vertex = self._merged_at[vertex][1]
        return vertex

    def edge_rep_at(self, eid: int, stage: int) -> int:
        """The surviving edge that ``eid`` has been identified with."""
        while eid in self._removed_at and self._removed_at[eid][0] < stage:
            eid = self._removed_at[eid][1]
        return eid

    def alive_edges(self, stage: int) -> list[int]:
        dead = {s.removed_edge for s in self.steps[:stage]}
        return [e for e in range(len(self.initial.edges)) if e not in dead]

    def step_endpoints(self, eid: int, direction: int, stage: int) -> tuple[int, int]:
        """(from, to) vertices of a traversal at a given stage."""
        e = self.initial.edges[eid]
        s = self.root_at(e.source, stage)
        t = self.root_at(e.target, stage)
        return (s, t) if direction > 0 else (t, s)

    def graph_at(self, stage: int) -> tuple[LabeledGraph, dict[int, int], dict[int, int]]:
        """Materialize the stage graph with dense ids.

        Returns (graph, edge_map, vertex_map) sending persistent ids to the
        dense ids of the returned graph.
        """
        roots = sorted({self.root_at(v, stage) for v in range(self.initial.num_vertices)})
        vmap = {r: i for i, r in enumerate(roots)}
        alive = self.alive_edges(stage)
        emap = {eid: i for i, eid in enumerate(alive)}
        edges = []
        for eid in alive:
            e = self.initial.edges[eid]
            edges.append(
                (vmap[self.root_at(e.source, stage)], vmap[self.root_at(e.target, stage)], e.label)
            )
        basepoint = self.initial.basepoint
        graph = LabeledGraph(
            self.initial.n,
            len(roots),
            edges,
            vmap[self.root_at(basepoint, stage)] if basepoint is not None else None,
        )
        return graph, emap, vmap

    @property
    def final(self) -> LabeledGraph:
        return self.graph_at(len(self.steps))[0]

    def project_steps(self, steps: Sequence[tuple[int, int]], stage: int) -> list[tuple[int, int]]:
        """Push persistent-id steps forward onto their stage representatives."""
        return [(self.edge_rep_at(e, stage), d) for e, d in steps]

    def lift_steps(
        self, steps: Sequence[tuple[int, int]], start: int, end: int, stage: int
    ) -> list[tuple[int, int]]:
        """Lift a stage path (persistent ids) back to the initial graph.

        ``start``/``end`` anchor the path at stage vertices (root ids, which
        are also valid at every earlier stage).  At each rank-preserving step
        the merged pair may force a two-step detour at a junction.
        """
        for i in range(stage, 0, -1):
            fs = self.steps[i - 1]
            if not fs.rank_preserving:
                raise GraphError("cannot lift through a non-rank-preserving fold")
            kept_far, removed_far = fs.merged
            lifted: list[tuple[int, int]] = []
            cur = start

            def bridge(cur: int, want: int) -> list[tuple[int, int]]:
                if cur == want:
                    return []
                if (cur, want) == (kept_far, removed_far):
                    return list(fs.detour)
                if (cur, want) == (removed_far, kept_far):
                    return [(e, -d) for e, d in reversed(fs.detour)]
                raise GraphError("junction does not sit on the merged pair")

            for e, d in steps:
                s, t = self.step_endpoints(e, d, i - 1)
                lifted.extend(bridge(cur, s))
                lifted.append((e, d))
                cur = t
            lifted.extend(bridge(cur, end))
            steps = lifted
        return list(steps)


def _fold_candidates(graph: LabeledGraph, merged_at, alive):
    """All foldable pairs, grouped by (vertex root, signed label)."""

    def root(v):
        while v in merged_at:
            v = merged_at[v][1]
        return v

    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for eid in alive:
        e = graph.edges[eid]
        s, t = root(e.source), root(e.target)
        groups.setdefault((s, e.label), []).append((eid, t))   # leaves s
        groups.setdefault((t, -e.label), []).append((eid, s))  # enters t
    candidates = []
    for (vertex, signed), members in groups.items():
        if len(members) < 2:
            continue
        members.sort()
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                e1, far1 = members[a]
                e2, far2 = members[b]
                if e1 == e2:
                    continue
                candidates.append((abs(signed), e1, e2, signed > 0, far1, far2))
    candidates.sort(key=lambda c: (c[0], c[1], c[2], not c[3]))
    return candidates


def fold(graph: LabeledGraph, rng: Optional[random.Random] = None) -> FoldingTrace:
    """Fold a graph completely, rank-preserving steps first.

    With ``rng`` the candidate executed at each step is chosen at random
    (still within the rank-preserving phase discipline); the default order
    is the lexicographically least candidate by (label, edge ids).  Either
    way the final graph is the same up to canonical relabeling.
    """
    merged_at: dict[int, tuple[int, int]] = {}
    removed_at: dict[int, tuple[int, int]] = {}
    alive = set(range(len(graph.edges)))
    steps: list[FoldStep] = []
    basepoint = graph.basepoint

    def root(v):
        while v in merged_at:
            v = merged_at[v][1]
        return v

    def execute(candidate):
        label, e1, e2, outgoing, far1, far2 = candidate
        kept, removed = e1, e2
        kept_far, removed_far = root(far1), root(far2)
        if kept_far == removed_far:
            merged = None
            detour = None
        else:
            merged = (kept_far, removed_far)
            if outgoing:
                detour = ((kept, -1), (removed, 1))
            else:
                detour = ((kept, 1), (removed, -1))
        steps.append(FoldStep(kept, removed, merged, detour))
        alive.discard(removed)
        removed_at[removed] = (len(steps) - 1, kept)
        if merged is not None:
            child, parent = _union_orientation(basepoint, *merged)
            merged_at[child] = (len(steps) - 1, parent)

    while True:
        candidates = _fold_candidates(graph, merged_at, alive)
        rp = [c for c in candidates if root(c[4]) != root(c[5])]
        if not rp:
            break
        execute(rng.choice(rp) if rng is not None else rp[0])
    while True:
        candidates = _fold_candidates(graph, merged_at, alive)
        if not candidates:
            break
        if any(root(c[4]) != root(c[5]) for c in candidates):
            raise GraphError("rank-preserving fold appeared after the first phase")
        execute(rng.choice(candidates) if rng is not None else candidates[0])

    trace = FoldingTrace(graph, steps)
    assert trace.final.is_folded
    return trace


def subgroup_graph(n: int, generators: Sequence[FreeWord]) -> LabeledGraph:
    """The pointed core graph of the subgroup the words generate.

    Wedge of circles, folded, with degree-1 vertices pruned away from
    everything but the basepoint.  The empty generator list gives the
    one-point graph of the trivial subgroup.
    """
    generators = [w.reduced() for w in generators if len(w.reduced()) > 0]
    wedge = wedge_of_words(n, generators)
    trace = fold(wedge)
    return pointed_core(trace.final)


def contains(subgroup: LabeledGraph, word: FreeWord) -> bool:
    """Membership test against a folded subgroup graph with basepoint."""
    if subgroup.basepoint is None or not subgroup.is_folded:
        raise GraphError("contains needs a folded based graph")
    path = subgroup.trace(word.reduced(), subgroup.basepoint)
    return path is not None and path.is_closed


def rank(subgroup: LabeledGraph) -> int:
    """Rank of the subgroup a folded core graph presents."""
    return subgroup.rank()
