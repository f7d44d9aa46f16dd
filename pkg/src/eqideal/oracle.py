"""Exhaustive bounded search for kernel loops in the wedge graph.

Completely independent of the folding pipeline: walks reduced loops at the
wedge point whose label words freely reduce to the identity, which are
exactly the equations.  Used as ground truth in tests and as the bounded
fallback for degree queries.  Loops are collected up to rotation and
inversion of the equations they carry.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .graphs import GraphPath
from .ideal import WedgeData, path_to_equation
from .words import FreeWord, degree


@dataclass(frozen=True)
class KernelLoop:
    steps: tuple[tuple[int, int], ...]
    equation: FreeWord
    degree: int

    @property
    def length(self) -> int:
        return len(self.steps)


class SearchBudgetExceeded(Exception):
    """The DFS visited more nodes than the caller was willing to pay for."""


def cyclic_key(letters: tuple[int, ...]) -> tuple[int, ...]:
    """Least rotation of the letters or of the inverse letters."""
    if not letters:
        return ()
    best = None
    for cand in (letters, tuple(-l for l in reversed(letters))):
        for i in range(len(cand)):
            rot = cand[i:] + cand[:i]
            if best is None or rot < best:
                best = rot
    return best


def _search(wedge: WedgeData, max_len: int, first_steps, node_budget=None) -> dict:
    """DFS over reduced loops at the basepoint with a free-reduction stack.

    A partial path whose stack is deeper than the remaining step budget can
    never close up trivially, which prunes almost everything.
    """
    graph = wedge.graph
    base = graph.basepoint
    found: dict[tuple[int, ...], KernelLoop] = {}
    path: list[tuple[int, int]] = []
    stack: list[int] = []
    nodes = [0]

    def record() -> None:
        e0, d0 = path[0]
        e1, d1 = path[-1]
        if e0 == e1 and d0 == -d1:
            return
        # translating a closure costs far more than visiting a node
        nodes[0] += 25
        loop = GraphPath(graph, list(path), start=base)
        eq = path_to_equation(wedge, loop)
        key = cyclic_key(eq.letters)
        cand = KernelLoop(tuple(path), eq, degree(eq))
        prior = found.get(key)
        if prior is None or (cand.length, cand.steps) < (prior.length, prior.steps):
            found[key] = cand

    def rec(vertex: int, depth: int) -> None:
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise SearchBudgetExceeded(nodes[0])
        if vertex == base and not stack and depth >= 2:
            record()
        if depth == max_len:
            return
        last = path[-1] if path else None
        remaining = max_len - depth - 1
        for signed, eid, far in graph.ends(vertex):
            if last is not None and eid == last[0] and (1 if signed > 0 else -1) == -last[1]:
                continue
            if stack and stack[-1] == -signed:
                size = len(stack) - 1
            else:
                size = len(stack) + 1
            if size > remaining:
                continue
            path.append((eid, 1 if signed > 0 else -1))
            popped = None
            if stack and stack[-1] == -signed:
                popped = stack.pop()
            else:
                stack.append(signed)
            rec(far, depth + 1)
            if popped is not None:
                stack.append(popped)
            else:
                stack.pop()
            path.pop()

    if max_len < 2:
        return found
    for signed, eid, far in first_steps:
        path.append((eid, 1 if signed > 0 else -1))
        stack.append(signed)
        rec(far, 1)
        stack.pop()
        path.pop()
    return found


def enumerate_kernel_loops(
    wedge: WedgeData, max_len: int, jobs: int = 1, node_budget=None
) -> list[KernelLoop]:
    """All kernel loops of length <= max_len, up to rotation and inversion.

    Deterministic: results are sorted by (length, degree, canonical letters)
    regardless of how the search is split across workers.  ``node_budget``
    caps the DFS size; crossing it raises SearchBudgetExceeded instead of
    returning a silently incomplete answer.
    """
    graph = wedge.graph
    firsts = list(graph.ends(graph.basepoint))
    if jobs <= 1 or len(firsts) <= 1:
        found = _search(wedge, max_len, firsts, node_budget)
    else:
        buckets = [firsts[i::jobs] for i in range(min(jobs, len(firsts)))]
        found = {}
        with ThreadPoolExecutor(max_workers=len(buckets)) as pool:
            for part in pool.map(lambda b: _search(wedge, max_len, b, node_budget), buckets):
                for key, loop in part.items():
                    if key not in found or (loop.length, loop.steps) < (
                        found[key].length,
                        found[key].steps,
                    ):
                        found[key] = loop
    loops = sorted(found.values(), key=lambda l: (l.length, l.degree, cyclic_key(l.equation.letters)))
    return loops


def naive_min_degree(wedge: WedgeData, max_len: int, jobs: int = 1):
    """Smallest equation degree visible under the length cap, or None."""
    loops = enumerate_kernel_loops(wedge, max_len, jobs=jobs)
    if not loops:
        return None
    return min(l.degree for l in loops)
