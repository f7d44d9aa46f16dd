"""Graphs labeled over a free group basis, paths, and reduction processes.

A labeled graph has edges oriented and labeled by ambient generators, so it
is a partial automaton over F_n.  Vertices and edges carry dense integer ids
in creation order; deterministic constructions tie-break on (label, id).

A path is a sequence of steps ``(edge_id, +1|-1)``; ``+1`` traverses the edge
from source to target.  The signed label read by a step is the edge label
with the step's sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .words import Alphabet, FreeWord, WordError


class GraphError(ValueError):
    """Raised for malformed graphs, paths or processes."""


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    label: int


class LabeledGraph:
    """Immutable graph with F_n-labeled oriented edges and optional basepoint."""

    __slots__ = ("n", "num_vertices", "edges", "basepoint", "_ends")

    def __init__(
        self,
        n: int,
        num_vertices: int,
        edges: Iterable[tuple[int, int, int]],
        basepoint: Optional[int] = None,
    ):
        edge_list = []
        for source, target, label in edges:
            if not (0 <= source < num_vertices and 0 <= target < num_vertices):
                raise GraphError("edge endpoint out of range")
            if not 1 <= label <= n:
                raise GraphError("edge label %r exceeds rank %d" % (label, n))
            edge_list.append(Edge(source, target, label))
        if basepoint is not None and not 0 <= basepoint < num_vertices:
            raise GraphError("basepoint out of range")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "num_vertices", num_vertices)
        object.__setattr__(self, "edges", tuple(edge_list))
        object.__setattr__(self, "basepoint", basepoint)
        # per-vertex ends: vertex -> list of (signed_label, edge_id, far_vertex)
        ends: list[list[tuple[int, int, int]]] = [[] for _ in range(num_vertices)]
        for eid, e in enumerate(edge_list):
            ends[e.source].append((e.label, eid, e.target))
            ends[e.target].append((-e.label, eid, e.source))
        object.__setattr__(self, "_ends", tuple(tuple(sorted(v)) for v in ends))

    def __setattr__(self, name, value):
        raise AttributeError("LabeledGraph is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LabeledGraph)
            and self.n == other.n
            and self.num_vertices == other.num_vertices
            and self.edges == other.edges
            and self.basepoint == other.basepoint
        )

    def __hash__(self) -> int:
        return hash((self.n, self.num_vertices, self.edges, self.basepoint))

    def __repr__(self) -> str:
        return "LabeledGraph(n=%d, vertices=%d, edges=%d, basepoint=%r)" % (
            self.n,
            self.num_vertices,
            len(self.edges),
            self.basepoint,
        )

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet.ambient(self.n)

    def ends(self, vertex: int) -> tuple[tuple[int, int, int], ...]:
        """Edge ends at a vertex as (signed_label, edge_id, far_vertex)."""
        return self._ends[vertex]

    def valence(self, vertex: int) -> int:
        return len(self._ends[vertex])

    @property
    def is_folded(self) -> bool:
        """No two distinct edge ends at one vertex read the same signed label."""
        for ends in self._ends:
            seen = set()
            for signed, eid, _ in ends:
                if signed in seen:
                    return False
                seen.add(signed)
        return True

    @property
    def is_connected(self) -> bool:
        if self.num_vertices <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for _, _, far in self._ends[v]:
                if far not in seen:
                    seen.add(far)
                    stack.append(far)
        return len(seen) == self.num_vertices

    def rank(self) -> int:
        """Rank of the fundamental group: |E| - |V| + 1 (connected graphs)."""
        if not self.is_connected:
            raise GraphError("rank needs a connected graph")
        return len(self.edges) - self.num_vertices + 1

    def step_out(self, vertex: int, signed_label: int) -> Optional[tuple[int, int]]:
        """The unique step leaving ``vertex`` reading ``signed_label``.

        Only meaningful on folded graphs; returns None when no edge fits.
        """
        for signed, eid, _ in self._ends[vertex]:
            if signed == signed_label:
                return (eid, 1 if signed > 0 else -1)
        return None

    def trace(self, word: FreeWord, start: int) -> Optional["GraphPath"]:
        """Trace a reduced word from ``start``; None if it leaves the graph."""
        steps = []
        v = start
        for letter in word:
            nxt = None
            for signed, eid, far in self._ends[v]:
                if signed == letter:
                    direction = 1 if letter > 0 else -1
                    nxt = (eid, direction, far)
                    break
            if nxt is None:
                return None
            steps.append((nxt[0], nxt[1]))
            v = nxt[2]
        return GraphPath(self, steps, start=start)

    def canonical_form(self) -> tuple:
        """Canonical description of a connected folded based graph.

        Breadth-first relabeling from the basepoint in signed-label order;
        two such graphs are isomorphic (as based labeled graphs) exactly when
        their canonical forms are equal.
        """
        if self.basepoint is None:
            raise GraphError("canonical form needs a basepoint")
        if not self.is_folded:
            raise GraphError("canonical form is defined for folded graphs")
        if not self.is_connected:
            raise GraphError("canonical form needs a connected graph")
        order = {self.basepoint: 0}
        queue = [self.basepoint]
        edges = []
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for signed, eid, far in self._ends[v]:
                if far not in order:
                    order[far] = len(order)
                    queue.append(far)
        for e in self.edges:
            edges.append((order[e.source], order[e.target], e.label))
        return (self.n, self.num_vertices, tuple(sorted(edges)))

    def to_dot(self, name: str = "G") -> str:
        """Deterministic DOT rendering; the basepoint is double-circled."""
        lines = ["digraph %s {" % name, "  rankdir=LR;"]
        compact = self.n <= 26
        for v in range(self.num_vertices):
            shape = "doublecircle" if v == self.basepoint else "circle"
            lines.append('  v%d [shape=%s, label="%d"];' % (v, shape, v))
        for e in self.edges:
            label = self.alphabet.letter_str(e.label, compact)
            lines.append('  v%d -> v%d [label="%s"];' % (e.source, e.target, label))
        lines.append("}")
        return "\n".join(lines) + "\n"


class GraphBuilder:
    """Mutable helper for assembling a LabeledGraph."""

    def __init__(self, n: int):
        self.n = n
        self.num_vertices = 0
        self.edges: list[tuple[int, int, int]] = []
        self.basepoint: Optional[int] = None

    def add_vertex(self) -> int:
        self.num_vertices += 1
        return self.num_vertices - 1

    def add_edge(self, source: int, target: int, label: int) -> int:
        self.edges.append((source, target, label))
        return len(self.edges) - 1

    def build(self) -> LabeledGraph:
        return LabeledGraph(self.n, self.num_vertices, self.edges, self.basepoint)


class GraphPath:
    """A walk in a labeled graph given by steps ``(edge_id, direction)``."""

    __slots__ = ("graph", "steps", "_start")

    def __init__(
        self,
        graph: LabeledGraph,
        steps: Iterable[tuple[int, int]] = (),
        start: Optional[int] = None,
    ):
        steps = tuple((int(e), int(d)) for e, d in steps)
        for e, d in steps:
            if not 0 <= e < len(graph.edges) or d not in (1, -1):
                raise GraphError("step (%d, %d) is not an edge traversal" % (e, d))
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "steps", steps)
        if steps:
            first = self._step_start(steps[0])
            if start is not None and start != first:
                raise GraphError("start vertex does not match first step")
            start = first
            cur = first
            for step in steps:
                if self._step_start(step) != cur:
                    raise GraphError("steps are not endpoint-compatible")
                cur = self._step_end(step)
        elif start is None:
            raise GraphError("an empty path needs an explicit start vertex")
        object.__setattr__(self, "_start", start)

    def __setattr__(self, name, value):
        raise AttributeError("GraphPath is immutable")

    def _step_start(self, step: tuple[int, int]) -> int:
        e = self.graph.edges[step[0]]
        return e.source if step[1] > 0 else e.target

    def _step_end(self, step: tuple[int, int]) -> int:
        e = self.graph.edges[step[0]]
        return e.target if step[1] > 0 else e.source

    def signed_label(self, index: int) -> int:
        eid, d = self.steps[index]
        return self.graph.edges[eid].label * d

    def step_source(self, index: int) -> int:
        return self._step_start(self.steps[index])

    def step_target(self, index: int) -> int:
        return self._step_end(self.steps[index])

    @property
    def start(self) -> int:
        return self._start

    @property
    def end(self) -> int:
        return self._step_end(self.steps[-1]) if self.steps else self._start

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    def __len__(self) -> int:
        return len(self.steps)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GraphPath)
            and self.graph == other.graph
            and self.steps == other.steps
            and self._start == other._start
        )

    def __hash__(self) -> int:
        return hash((self.steps, self._start))

    def __mul__(self, other: "GraphPath") -> "GraphPath":
        if not isinstance(other, GraphPath):
            return NotImplemented
        if other.graph != self.graph:
            raise GraphError("cannot concatenate paths in different graphs")
        if self.end != other.start:
            raise GraphError("paths are not composable")
        return GraphPath(self.graph, self.steps + other.steps, start=self.start)

    def reverse(self) -> "GraphPath":
        steps = tuple((e, -d) for e, d in reversed(self.steps))
        return GraphPath(self.graph, steps, start=self.end)

    @property
    def is_reduced(self) -> bool:
        return all(
            self.steps[i][0] != self.steps[i + 1][0] or self.steps[i][1] == self.steps[i + 1][1]
            for i in range(len(self.steps) - 1)
        )

    @property
    def is_cyclically_reduced(self) -> bool:
        if not self.is_reduced or not self.is_closed:
            return False
        if len(self.steps) < 2:
            return True
        first, last = self.steps[0], self.steps[-1]
        return first[0] != last[0] or first[1] == last[1]

    def label_word(self) -> FreeWord:
        """The (unreduced) word read along the path."""
        return FreeWord.raw(
            self.graph.alphabet,
            tuple(self.signed_label(i) for i in range(len(self.steps))),
        )

    def __repr__(self) -> str:
        return "GraphPath(start=%d, steps=%r)" % (self._start, list(self.steps))


def label_word(path: GraphPath) -> FreeWord:
    return path.label_word()


@dataclass(frozen=True)
class ReductionProcess:
    """A sequence of cancelling index couples for the word read by a path.

    Couples ``(s, t)`` pair step indices whose signed labels are mutually
    inverse; collapsing them in order always removes an adjacent pair, which
    is checked on construction.  A process with ``2 * len(couples) == len(path)``
    is maximal and witnesses that the label word reduces to the trivial word.
    """

    path: GraphPath
    couples: tuple[tuple[int, int], ...]

    def __post_init__(self):
        length = len(self.path)
        seen: set[int] = set()
        for s, t in self.couples:
            if not (0 <= s < t < length):
                raise GraphError("couple (%d, %d) out of range" % (s, t))
            if s in seen or t in seen:
                raise GraphError("couple indices repeat")
            seen.add(s)
            seen.add(t)
            if self.path.signed_label(s) != -self.path.signed_label(t):
                raise GraphError("couple (%d, %d) labels are not mutually inverse" % (s, t))
        removed = [False] * length
        for s, t in self.couples:
            if not all(removed[i] for i in range(s + 1, t)):
                raise GraphError(
                    "couple (%d, %d) is not adjacent after earlier collapses" % (s, t)
                )
            removed[s] = removed[t] = True

    @property
    def is_maximal(self) -> bool:
        return 2 * len(self.couples) == len(self.path)

    def residual_indices(self) -> tuple[int, ...]:
        used = {i for c in self.couples for i in c}
        return tuple(i for i in range(len(self.path)) if i not in used)


def label_process(path: GraphPath) -> ReductionProcess:
    """Maximal reduction process for the label word, by one stack pass.

    Couples come out ordered by their right index, innermost first, which is
    a valid collapse order.  The residual indices spell the free reduction of
    the label word; the process is maximal in the sense that no further
    couples can be added to it.
    """
    stack: list[int] = []
    couples: list[tuple[int, int]] = []
    for i in range(len(path)):
        if stack and path.signed_label(stack[-1]) == -path.signed_label(i):
            couples.append((stack.pop(), i))
        else:
            stack.append(i)
    return ReductionProcess(path, tuple(couples))


def reduce_path(path: GraphPath) -> tuple[GraphPath, ReductionProcess]:
    """The unique reduced path homotopic to ``path`` rel endpoints.

    Cancellation here is at the level of steps (an edge followed immediately
    by the same edge backwards); the returned process records which steps
    collapsed.  A nullhomotopic path reduces to the empty path at its start.
    """
    stack: list[int] = []
    couples: list[tuple[int, int]] = []
    steps = path.steps
    for i in range(len(steps)):
        if stack and steps[stack[-1]][0] == steps[i][0] and steps[stack[-1]][1] == -steps[i][1]:
            couples.append((stack.pop(), i))
        else:
            stack.append(i)
    reduced = GraphPath(path.graph, tuple(steps[i] for i in stack), start=path.start)
    return reduced, ReductionProcess(path, tuple(couples))


def wedge_of_words(n: int, words: Sequence[FreeWord]) -> LabeledGraph:
    """Wedge of subdivided circles at a common basepoint, one per word.

    Each word must be nonempty and reduced; the i-th circle spells it.  An
    empty word list yields the one-point graph.
    """
    b = GraphBuilder(n)
    base = b.add_vertex()
    b.basepoint = base
    for w in words:
        if len(w) == 0:
            raise GraphError("wedge_of_words needs nonempty words")
        if not w.is_reduced:
            raise GraphError("wedge_of_words needs reduced words")
        cur = base
        for i, letter in enumerate(w.letters):
            nxt = base if i == len(w) - 1 else b.add_vertex()
            if letter > 0:
                b.add_edge(cur, nxt, letter)
            else:
                b.add_edge(nxt, cur, -letter)
            cur = nxt
    return b.build()


def _surviving_core(
    graph: LabeledGraph, protected: frozenset[int]
) -> tuple[set[int], set[int]]:
    """Vertices and edges left after iterated valence-1 pruning."""
    alive_v = set(range(graph.num_vertices))
    alive_e = set(range(len(graph.edges)))
    valence = {v: graph.valence(v) for v in alive_v}
    queue = [v for v in alive_v if valence[v] <= 1 and v not in protected]
    while queue:
        v = queue.pop()
        if v not in alive_v or valence[v] > 1:
            continue
        alive_v.discard(v)
        for signed, eid, far in graph.ends(v):
            if eid in alive_e:
                alive_e.discard(eid)
                if far in alive_v:
                    valence[far] -= 2 if far == v else 1
                    if valence[far] <= 1 and far not in protected:
                        queue.append(far)
    return alive_v, alive_e


def _subgraph(
    graph: LabeledGraph, vertices: set[int], edge_ids: set[int], basepoint: Optional[int]
) -> LabeledGraph:
    """Dense reindexing of a subgraph, preserving creation order."""
    vmap = {v: i for i, v in enumerate(sorted(vertices))}
    edges = [
        (vmap[graph.edges[e].source], vmap[graph.edges[e].target], graph.edges[e].label)
        for e in sorted(edge_ids)
    ]
    return LabeledGraph(
        graph.n,
        len(vmap),
        edges,
        vmap[basepoint] if basepoint is not None else None,
    )


def core(graph: LabeledGraph) -> LabeledGraph:
    """The core: the union of images of reduced loops (valence-1 pruning).

    Raises when the graph is a tree, whose core is empty.
    """
    if not graph.is_connected:
        raise GraphError("core needs a connected graph")
    if graph.rank() == 0:
        raise GraphError("a tree has empty core")
    vertices, edge_ids = _surviving_core(graph, frozenset())
    basepoint = graph.basepoint if graph.basepoint in vertices else None
    return _subgraph(graph, vertices, edge_ids, basepoint)


def pointed_core(graph: LabeledGraph) -> LabeledGraph:
    """Core together with the tether to the basepoint (never pruned)."""
    if graph.basepoint is None:
        raise GraphError("pointed_core needs a basepoint")
    if not graph.is_connected:
        raise GraphError("pointed_core needs a connected graph")
    vertices, edge_ids = _surviving_core(graph, frozenset([graph.basepoint]))
    return _subgraph(graph, vertices, edge_ids, graph.basepoint)


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree rooted at the basepoint, with parent steps toward it."""

    graph: LabeledGraph
    edge_ids: frozenset[int]
    parent_step: dict[int, tuple[int, int]] = field(compare=False)
    root: int = 0

    def path_from_root(self, vertex: int) -> GraphPath:
        steps = []
        v = vertex
        while v != self.root:
            eid, d = self.parent_step[v]
            steps.append((eid, d))
            e = self.graph.edges[eid]
            v = e.source if d > 0 else e.target
        steps.reverse()
        return GraphPath(self.graph, steps, start=self.root)

    def path(self, u: int, v: int) -> GraphPath:
        """The reduced tree path from u to v."""
        up = self.path_from_root(u).reverse()
        down = self.path_from_root(v)
        joined = GraphPath(self.graph, up.steps + down.steps, start=u)
        reduced, _ = reduce_path(joined)
        return reduced


def spanning_tree(graph: LabeledGraph) -> SpanningTree:
    """Breadth-first spanning tree from the basepoint, (label, id) order."""
    if graph.basepoint is None:
        raise GraphError("spanning_tree needs a basepoint")
    if not graph.is_connected:
        raise GraphError("spanning_tree needs a connected graph")
    root = graph.basepoint
    parent: dict[int, tuple[int, int]] = {}
    visited = {root}
    queue = [root]
    tree: set[int] = set()
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        ends = sorted(graph.ends(v), key=lambda t: (abs(t[0]), t[1]))
        for signed, eid, far in ends:
            if far not in visited:
                visited.add(far)
                tree.add(eid)
                # the parent step traverses the edge from v into far
                direction = 1 if signed > 0 else -1
                parent[far] = (eid, direction)
                queue.append(far)
    return SpanningTree(graph, frozenset(tree), parent, root)


def fundamental_basis(graph: LabeledGraph, tree: Optional[SpanningTree] = None) -> list[GraphPath]:
    """Free basis of the fundamental group at the basepoint.

    One loop per non-tree edge e, in edge creation order: the tree path to
    e's source, then e, then the tree path back.  The loops are reduced and
    pairwise distinct.
    """
    if tree is None:
        tree = spanning_tree(graph)
    loops = []
    for eid, e in enumerate(graph.edges):
        if eid in tree.edge_ids:
            continue
        out = tree.path_from_root(e.source)
        back = tree.path_from_root(e.target).reverse()
        loop = GraphPath(
            graph, out.steps + ((eid, 1),) + back.steps, start=graph.basepoint
        )
        loops.append(loop)
    return loops


def loop_basis_coordinates(
    graph: LabeledGraph, tree: SpanningTree, path: GraphPath
) -> list[int]:
    """Express a loop at the basepoint in the fundamental basis.

    Returns the signed crossing sequence of non-tree edges (1-based indices
    in edge creation order); for a reduced loop this sequence is already a
    reduced word in the basis.
    """
    nontree = [eid for eid in range(len(graph.edges)) if eid not in tree.edge_ids]
    index = {eid: i + 1 for i, eid in enumerate(nontree)}
    letters = []
    for eid, d in path.steps:
        if eid in index:
            letters.append(index[eid] * d)
    return letters
