"""Presentations of the ideal of equations of a target over a subgroup.

Given a finitely generated subgroup H of F_n and targets g_1..g_m, the
equations are the elements of H * <x_1..x_m> killed by substituting g_i for
x_i.  They form a normal subgroup (the ideal of the g's over H), and this
module computes a finite normal generating set:

* build the wedge G of the subgroup graph of H with one lollipop petal per
  target (``build_G``),
* fold G with the rank-preserving-first schedule,
* read a fundamental-group basis off the intermediate graph G^k, see which
  basis loops die or coincide in the fully folded graph, and pull the
  resulting relators back to G through the homotopy inverse of the
  rank-preserving part,
* translate loops at the wedge point into words in the h- and x-letters.

The subgroup letters h_1..h_r always refer to the basis read off the
subgroup graph of H (one loop per non-tree edge, in creation order), not to
the input generators, which may be redundant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .folding import FoldingTrace, fold, subgroup_graph
from .graphs import (
    GraphBuilder,
    GraphError,
    GraphPath,
    LabeledGraph,
    SpanningTree,
    _surviving_core,
    fundamental_basis,
    loop_basis_coordinates,
    reduce_path,
    spanning_tree,
)
from .words import Alphabet, FreeWord, WordError, cyclic_reduce, degree, evaluate


@dataclass(frozen=True)
class Problem:
    """A subgroup H of F_n given by generators, plus target words g_1..g_m."""

    n: int
    h_generators: tuple[FreeWord, ...]
    g_values: tuple[FreeWord, ...]

    def __post_init__(self):
        ambient = Alphabet.ambient(self.n)
        for w in self.h_generators + self.g_values:
            if w.alphabet != ambient:
                raise WordError("problem words must live in F_%d" % self.n)
        if len(self.g_values) < 1:
            raise WordError("a problem needs at least one target word")

    @property
    def m(self) -> int:
        return len(self.g_values)


def problem_from_strings(n: int, h_text: Sequence[str], g_text: Sequence[str]) -> Problem:
    from .words import ambient_word

    return Problem(
        n,
        tuple(ambient_word(t, n) for t in h_text),
        tuple(ambient_word(t, n) for t in g_text),
    )


@dataclass(frozen=True)
class Petal:
    """One lollipop in the wedge: tether to a cycle spelling the target."""

    variable: int                       # 1-based variable index
    edge_ids: frozenset[int]
    tether_steps: tuple[tuple[int, int], ...]
    cycle_steps: tuple[tuple[int, int], ...]

    @property
    def marker(self) -> tuple[int, int]:
        """A designated cycle edge; its crossing count is the degree."""
        return self.cycle_steps[0]


@dataclass(frozen=True)
class WedgeData:
    """The wedge G with its part structure and translation data."""

    problem: Problem
    graph: LabeledGraph
    hbar: LabeledGraph
    h_tree: SpanningTree
    h_basis: tuple[FreeWord, ...]
    h_basis_steps: tuple[tuple[tuple[int, int], ...], ...]
    h_edge_ids: frozenset[int]
    h_core_edge_ids: frozenset[int]
    petals: tuple[Petal, ...]

    @property
    def r(self) -> int:
        return len(self.h_basis)

    @property
    def m(self) -> int:
        return len(self.petals)

    @property
    def equation_alphabet(self) -> Alphabet:
        return Alphabet.equation(self.r, self.m)

    def petal_of_edge(self, eid: int) -> Optional[Petal]:
        for petal in self.petals:
            if eid in petal.edge_ids:
                return petal
        return None

    def variable_path_steps(self, variable: int, power: int) -> list[tuple[int, int]]:
        """Steps of the reduced path reading g_variable^power from the basepoint."""
        petal = self.petals[variable - 1]
        if power == 0:
            return []
        cycle = list(petal.cycle_steps)
        if power < 0:
            cycle = [(e, -d) for e, d in reversed(cycle)]
        body = cycle * abs(power)
        back = [(e, -d) for e, d in reversed(petal.tether_steps)]
        return list(petal.tether_steps) + body + back


def build_G(problem: Problem) -> WedgeData:
    """The wedge of the subgroup graph of H with one petal per target.

    Targets must be nontrivial; a trivial one has no petal (its variable is
    itself an equation) and is rejected here, the callers handle it first.
    """
    for g in problem.g_values:
        if len(g.reduced()) == 0:
            raise WordError("build_G needs nontrivial targets")
    hbar = subgroup_graph(problem.n, problem.h_generators)
    assert hbar.basepoint == 0
    h_tree = spanning_tree(hbar)
    basis_loops = fundamental_basis(hbar, h_tree)
    h_basis = tuple(w.reduced() for w in (l.label_word() for l in basis_loops))
    core_v, core_e = (set(), set())
    if hbar.rank() > 0:
        core_v, core_e = _surviving_core(hbar, frozenset())

    b = GraphBuilder(problem.n)
    for _ in range(hbar.num_vertices):
        b.add_vertex()
    b.basepoint = 0
    for e in hbar.edges:
        b.add_edge(e.source, e.target, e.label)
    h_edge_ids = frozenset(range(len(hbar.edges)))

    petals = []
    for i, g in enumerate(problem.g_values):
        core_word, conj = cyclic_reduce(g)
        first_edge = len(b.edges)
        tether_steps = []
        cur = 0
        for letter in conj.letters:
            nxt = b.add_vertex()
            if letter > 0:
                eid = b.add_edge(cur, nxt, letter)
                tether_steps.append((eid, 1))
            else:
                eid = b.add_edge(nxt, cur, -letter)
                tether_steps.append((eid, -1))
            cur = nxt
        junction = cur
        cycle_steps = []
        for j, letter in enumerate(core_word.letters):
            nxt = junction if j == len(core_word) - 1 else b.add_vertex()
            if letter > 0:
                eid = b.add_edge(cur, nxt, letter)
                cycle_steps.append((eid, 1))
            else:
                eid = b.add_edge(nxt, cur, -letter)
                cycle_steps.append((eid, -1))
            cur = nxt
        petals.append(
            Petal(
                variable=i + 1,
                edge_ids=frozenset(range(first_edge, len(b.edges))),
                tether_steps=tuple(tether_steps),
                cycle_steps=tuple(cycle_steps),
            )
        )

    graph = b.build()
    return WedgeData(
        problem=problem,
        graph=graph,
        hbar=hbar,
        h_tree=h_tree,
        h_basis=h_basis,
        h_basis_steps=tuple(tuple(l.steps) for l in basis_loops),
        h_edge_ids=h_edge_ids,
        h_core_edge_ids=frozenset(core_e),
        petals=tuple(petals),
    )


def ambient_to_subgroup_letters(wedge: WedgeData, word: FreeWord) -> list[int]:
    """Rewrite an element of H (ambient word) in the h-letters.

    Traces the reduced word through the subgroup graph and records signed
    crossings of non-tree edges.  Raises if the word is not in H.
    """
    path = wedge.hbar.trace(word.reduced(), wedge.hbar.basepoint)
    if path is None or not path.is_closed:
        raise WordError("%s is not an element of the subgroup" % word)
    return loop_basis_coordinates(wedge.hbar, wedge.h_tree, path)


def path_to_equation(wedge: WedgeData, path: GraphPath) -> FreeWord:
    """Translate a reduced loop at the wedge point into an equation word.

    Arcs inside the subgroup part become h-letter words (crossings of
    non-tree edges); a visit to petal i winding the cycle c times becomes
    x_i^{+-c}.
    """
    if path.graph != wedge.graph:
        raise GraphError("path does not live in this wedge")
    if not path.is_reduced or not path.is_closed or path.start != wedge.graph.basepoint:
        raise GraphError("translation needs a reduced loop at the basepoint")
    h_nontree = [eid for eid in range(len(wedge.hbar.edges)) if eid not in wedge.h_tree.edge_ids]
    h_index = {eid: i + 1 for i, eid in enumerate(h_nontree)}
    letters: list[int] = []
    i = 0
    steps = path.steps
    while i < len(steps):
        eid, d = steps[i]
        if eid in wedge.h_edge_ids:
            while i < len(steps) and steps[i][0] in wedge.h_edge_ids:
                e, dd = steps[i]
                if e in h_index:
                    letters.append(h_index[e] * dd)
                i += 1
        else:
            petal = wedge.petal_of_edge(eid)
            marker = petal.marker[0]
            winding = 0
            while i < len(steps) and steps[i][0] in petal.edge_ids:
                if steps[i][0] == marker:
                    winding += steps[i][1] * petal.marker[1]
                i += 1
            x = wedge.r + petal.variable
            letters.extend([x if winding > 0 else -x] * abs(winding))
    return FreeWord(wedge.equation_alphabet, letters)


def equation_to_path(wedge: WedgeData, equation: FreeWord) -> GraphPath:
    """Realize an equation as a reduced loop at the wedge point."""
    if equation.alphabet != wedge.equation_alphabet:
        raise WordError("equation alphabet does not match the wedge")
    steps: list[tuple[int, int]] = []
    letters = list(equation.letters)
    i = 0
    while i < len(letters):
        letter = letters[i]
        if abs(letter) <= wedge.r:
            loop = wedge.h_basis_steps[abs(letter) - 1]
            steps.extend(loop if letter > 0 else [(e, -d) for e, d in reversed(loop)])
            i += 1
        else:
            variable = abs(letter) - wedge.r
            power = 0
            while i < len(letters) and abs(letters[i]) == wedge.r + variable:
                power += 1 if letters[i] > 0 else -1
                i += 1
            steps.extend(wedge.variable_path_steps(variable, power))
    raw = GraphPath(wedge.graph, steps, start=wedge.graph.basepoint)
    reduced, _ = reduce_path(raw)
    return reduced


def loop_degree(wedge: WedgeData, path: GraphPath) -> int:
    """Degree of the equation a kernel loop carries, by marker crossings.

    Counts crossings of each petal's marker edge in the cyclic reduction of
    the loop, in either direction.
    """
    steps = list(path.steps)
    while len(steps) >= 2 and steps[0][0] == steps[-1][0] and steps[0][1] == -steps[-1][1]:
        steps = steps[1:-1]
    markers = {p.marker[0] for p in wedge.petals}
    return sum(1 for e, _ in steps if e in markers)


@dataclass(frozen=True)
class IdealPresentation:
    """Normal generators of the ideal, with the data used to compute them."""

    h_basis: tuple[FreeWord, ...]
    generators: tuple[FreeWord, ...]
    edge_count: int
    rank_h: int
    rank_hg: int
    wedge: Optional[WedgeData]
    generator_paths: tuple[GraphPath, ...]

    def to_json_dict(self) -> dict:
        return {
            "h_basis": [str(w) for w in self.h_basis],
            "generators": [str(w) for w in self.generators],
            "L": self.edge_count,
            "ranks": {"H": self.rank_h, "Hg": self.rank_hg},
        }


def depends(problem: Problem) -> bool:
    """True when the ideal is nontrivial.

    For one target this is the classical criterion rank<H, g> <= rank H; in
    general the ideal is nontrivial iff adjoining the targets gains fewer
    than m ranks.
    """
    if any(len(g.reduced()) == 0 for g in problem.g_values):
        return True
    hbar = subgroup_graph(problem.n, problem.h_generators)
    span = subgroup_graph(problem.n, problem.h_generators + problem.g_values)
    return span.rank() < hbar.rank() + problem.m


def normal_generators(problem: Problem) -> IdealPresentation:
    """Compute a normal generating set for the ideal of the targets over H."""
    trivial = [i for i, g in enumerate(problem.g_values) if len(g.reduced()) == 0]
    active = [i for i in range(problem.m) if i not in trivial]

    if not active:
        hbar = subgroup_graph(problem.n, problem.h_generators)
        tree = spanning_tree(hbar)
        h_basis = tuple(l.label_word().reduced() for l in fundamental_basis(hbar, tree))
        alphabet = Alphabet.equation(len(h_basis), problem.m)
        gens = tuple(FreeWord(alphabet, [len(h_basis) + i + 1]) for i in trivial)
        return IdealPresentation(
            h_basis=h_basis,
            generators=gens,
            edge_count=len(hbar.edges),
            rank_h=hbar.rank(),
            rank_hg=hbar.rank(),
            wedge=None,
            generator_paths=(),
        )

    sub = Problem(problem.n, problem.h_generators, tuple(problem.g_values[i] for i in active))
    wedge = build_G(sub)
    trace = fold(wedge.graph)
    sub_gens, paths = _pipeline_generators(wedge, trace)

    # re-index variables of the subproblem into the full variable list
    alphabet = Alphabet.equation(wedge.r, problem.m)
    remap = {wedge.r + j + 1: wedge.r + active[j] + 1 for j in range(len(active))}

    def relabel(w: FreeWord) -> FreeWord:
        letters = [
            l if abs(l) <= wedge.r else (1 if l > 0 else -1) * remap[abs(l)]
            for l in w.letters
        ]
        return FreeWord(alphabet, letters)

    generators = tuple(FreeWord(alphabet, [wedge.r + i + 1]) for i in trivial) + tuple(
        relabel(w) for w in sub_gens
    )

    rank_h = wedge.hbar.rank()
    rank_hg = trace.final.rank()
    presentation = IdealPresentation(
        h_basis=wedge.h_basis,
        generators=generators,
        edge_count=len(wedge.graph.edges),
        rank_h=rank_h,
        rank_hg=rank_hg,
        wedge=wedge,
        generator_paths=tuple(paths),
    )
    if len(generators) != rank_h + problem.m - rank_hg:
        raise GraphError("generator count does not match the rank bookkeeping")
    for eq in generators:
        value = evaluate(eq, list(presentation.h_basis), list(problem.g_values))
        if len(value) != 0:
            raise GraphError("computed generator does not evaluate to the identity")
    return presentation


def _pipeline_generators(
    wedge: WedgeData, trace: FoldingTrace
) -> tuple[list[FreeWord], list[GraphPath]]:
    """Basis loops of G^k that die (or coincide) in G^m, pulled back to G."""
    k = trace.k
    gk, emap, _ = trace.graph_at(k)
    inv_emap = {v: key for key, v in emap.items()}
    tree = spanning_tree(gk)
    loops = fundamental_basis(gk, tree)
    nontree = [eid for eid in range(len(gk.edges)) if eid not in tree.edge_ids]
    final_stage = len(trace.steps)

    def final_rep(dense_eid: int) -> int:
        return trace.edge_rep_at(inv_emap[dense_eid], final_stage)

    tree_reps = {final_rep(eid) for eid in tree.edge_ids}
    reps = [final_rep(eid) for eid in nontree]
    first_index: dict[int, int] = {}
    for i, rep in enumerate(reps):
        if rep not in tree_reps and rep not in first_index:
            first_index[rep] = i

    relator_loops: list[GraphPath] = []
    for i, rep in enumerate(reps):
        if rep in tree_reps:
            relator_loops.append(loops[i])
        elif first_index[rep] != i:
            relator_loops.append(loops[i] * loops[first_index[rep]].reverse())

    base = wedge.graph.basepoint
    equations: list[FreeWord] = []
    paths: list[GraphPath] = []
    for loop in relator_loops:
        persistent = [(inv_emap[e], d) for e, d in loop.steps]
        lifted = trace.lift_steps(persistent, base, base, k)
        path0 = GraphPath(wedge.graph, lifted, start=base)
        reduced, _ = reduce_path(path0)
        equations.append(path_to_equation(wedge, reduced))
        paths.append(reduced)
    return equations, paths


def parity_class(presentation: IdealPresentation) -> str:
    """"all-even" when every generator has even degree, else "has-odd"."""
    if not presentation.generators:
        raise WordError("the ideal is trivial; it has no parity class")
    degrees = [degree(g) for g in presentation.generators]
    return "all-even" if all(d % 2 == 0 for d in degrees) else "has-odd"


def cyclic_generator(m: int, k: int) -> FreeWord:
    """The single normal generator for H = <a^m>, g = a^k with gcd(m,k)=1.

    Defined by w(1,0) = ~x and the Euclidean recursion
    w(m,k) = w(m-k,k)(h~x, x) for m > k and w(m,k) = w(m,k-m)(h, x~h)
    otherwise.  The result has k h-letters and m ~x-letters.
    """
    if m < 1 or k < 0 or math.gcd(m, k) != 1:
        raise WordError("cyclic_generator needs coprime m >= 1, k >= 0")
    alphabet = Alphabet.equation(1, 1)
    H, X = 1, 2

    def rec(m: int, k: int) -> list[int]:
        if (m, k) == (1, 0):
            return [-X]
        if m > k:
            inner = rec(m - k, k)
            subst = {H: [H, -X], -H: [X, -H], X: [X], -X: [-X]}
        else:
            inner = rec(m, k - m)
            subst = {H: [H], -H: [-H], X: [X, -H], -X: [H, -X]}
        return [out for letter in inner for out in subst[letter]]

    return FreeWord(alphabet, rec(m, k))
