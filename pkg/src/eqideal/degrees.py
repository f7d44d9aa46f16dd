"""Decision procedures for equation degrees.

A degree-d equation exists iff the identity lies in a product
C_1 g^{s_1} C_2 g^{s_2} ... C_d g^{s_d} where each C_i is H, or H minus the
identity whenever the neighbouring variable letters would otherwise cancel
(cyclically).  Instead of enumerating the 2^d sign patterns, the layered
sweep below tracks, per (current sign, first sign), the rational subset of
all products of i factors, unioned over histories; one pass then answers
every degree up to a bound, and backtracking through the layers recovers an
explicit witness.

All subset arithmetic happens inside the subgroup generated by H and the
targets; by default the ambient group is rebased onto a basis of that
subgroup first, which keeps the automata small when n is large.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .folding import subgroup_graph
from .graphs import spanning_tree, fundamental_basis, loop_basis_coordinates
from .ideal import IdealPresentation, Problem, build_G, normal_generators
from .rational import (
    CapExceeded,
    DEFAULT_STATE_CAP,
    Dfa,
    Nfa,
    concat_nfas,
    dfa_intersect,
    dfa_union,
    empty_dfa,
    nfa_chain,
    reduced_dfa,
    subgroup_nfa,
)
from .words import Alphabet, FreeWord, WordError, _free_reduce, degree, evaluate


def witness_length_bound(L: int, d: int) -> int:
    """Path-length bound under which a minimum-degree witness exists."""
    return 16 * L * L * d

def fixed_degree_length_bound(L: int, d: int) -> int:
    """Path-length bound for the bases of all degree-d equations."""
    return 32 * L**4 * d * d + 16 * L**3 * d


@dataclass(frozen=True)
class SignPattern:
    """Signs s_1..s_d of the variable letters of a degree-d equation."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not self.signs or any(s not in (1, -1) for s in self.signs):
            raise WordError("a sign pattern is a nonempty tuple over {+1,-1}")

    @property
    def degree(self) -> int:
        return len(self.signs)

    def constrained_slots(self) -> list[int]:
        """Slots whose H-constant must be nontrivial (cyclic adjacency)."""
        return [i for i in range(len(self.signs)) if self.signs[i - 1] != self.signs[i]]

    def canonical(self) -> tuple[int, ...]:
        best = None
        for signs in (self.signs, tuple(-s for s in self.signs)):
            for i in range(len(signs)):
                rot = signs[i:] + signs[:i]
                if best is None or rot < best:
                    best = rot
        return best

    @staticmethod
    def all_patterns(d: int) -> list["SignPattern"]:
        """One representative per class under rotation and global inversion."""
        seen = set()
        out = []
        for mask in range(2 ** d):
            signs = tuple(1 if mask & (1 << i) else -1 for i in range(d))
            key = SignPattern(signs).canonical()
            if key not in seen:
                seen.add(key)
                out.append(SignPattern(key))
        out.sort(key=lambda p: p.signs)
        return out


@dataclass(frozen=True)
class DegreeSetDescriptor:
    """D_g, presented as a base set minus a finite verified exceptional set.

    Membership below verified_up_to was decided explicitly; beyond it the
    closure lemma guarantees every base-compatible degree occurs.
    """

    case: str                    # "odd-present" or "even-only"
    base: str                    # "N" or "2N"
    exceptional: frozenset[int]
    verified_up_to: int

    def contains(self, d: int) -> bool:
        if d < 1:
            return False
        if self.base == "2N" and d % 2 == 1:
            return False
        if d <= self.verified_up_to:
            return d not in self.exceptional
        return True

    def to_json_dict(self) -> dict:
        return {
            "case": self.case,
            "base": self.base,
            "exceptional": sorted(self.exceptional),
            "verified_up_to": self.verified_up_to,
        }


def _rebase(problem: Problem):
    """Rewrite the problem over a basis of <H, targets> when that shrinks n.

    Returns the working problem plus, per working letter, its word in the
    original letters (None when no rebase happened).
    """
    gens = problem.h_generators + problem.g_values
    span = subgroup_graph(problem.n, gens)
    nprime = span.rank()
    if nprime == 0 or nprime >= problem.n:
        return problem, None
    tree = spanning_tree(span)
    back = tuple(l.label_word().reduced() for l in fundamental_basis(span, tree))
    ambient = Alphabet.ambient(nprime)

    def rewrite(w: FreeWord) -> FreeWord:
        path = span.trace(w.reduced(), span.basepoint)
        assert path is not None and path.is_closed
        return FreeWord(ambient, loop_basis_coordinates(span, tree, path))

    work = Problem(
        nprime,
        tuple(rewrite(h) for h in problem.h_generators),
        tuple(rewrite(g) for g in problem.g_values),
    )
    return work, back


def _work_to_ambient(back, n: int, letters: Sequence[int]) -> FreeWord:
    if back is None:
        return FreeWord(Alphabet.ambient(n), letters)
    out: list[int] = []
    for l in letters:
        w = back[abs(l) - 1]
        out.extend(w.letters if l > 0 else [-a for a in reversed(w.letters)])
    return FreeWord(Alphabet.ambient(n), out)


class _Sweep:
    """Layered subsets P_i^{(c, f)} for total degree, built incrementally.

    Keys c, f run over (variable, sign) pairs; P_i^{(c, f)} is the set of
    values of products of i constant-times-variable factors whose last
    factor is keyed c, assuming the slot before the first is keyed f (the
    wrap-around neighbour).  A degree-d equation exists iff the identity
    lies in some P_d^{(f, f)}.
    """

    def __init__(self, problem: Problem, relative_ambient: bool = True,
                 cap: int = DEFAULT_STATE_CAP):
        if any(len(g.reduced()) == 0 for g in problem.g_values):
            raise WordError("the sweep needs nontrivial targets")
        self.problem = problem
        self.cap = cap
        self.work, self.back = _rebase(problem) if relative_ambient else (problem, None)
        self.hbar_work = subgroup_graph(self.work.n, self.work.h_generators)
        self.h_plain = subgroup_nfa(self.hbar_work, nontrivial=False)
        self.h_star = subgroup_nfa(self.hbar_work, nontrivial=True)
        self.h_star_empty = self.hbar_work.rank() == 0
        self.keys = [(v, s) for v in range(1, self.work.m + 1) for s in (1, -1)]
        self.g_nfa: dict[tuple[int, int], Nfa] = {}
        for i, g in enumerate(self.work.g_values):
            letters = g.reduced().letters
            self.g_nfa[(i + 1, 1)] = nfa_chain(self.work.n, letters)
            self.g_nfa[(i + 1, -1)] = nfa_chain(self.work.n, [-l for l in reversed(letters)])
        self.levels: list[dict[tuple, Dfa]] = []

    def _constant(self, prev: tuple[int, int], cur: tuple[int, int]) -> Nfa:
        if prev[0] == cur[0] and prev[1] != cur[1]:
            return self.h_star
        return self.h_plain

    def _star_needed(self, prev, cur) -> bool:
        return prev[0] == cur[0] and prev[1] != cur[1]

    def _extend(self) -> None:
        n = self.work.n
        new: dict[tuple, Dfa] = {}
        if not self.levels:
            for f in self.keys:
                for c in self.keys:
                    if self._star_needed(f, c) and self.h_star_empty:
                        new[(c, f)] = empty_dfa(n)
                        continue
                    nfa = concat_nfas([self._constant(f, c), self.g_nfa[c]])
                    new[(c, f)] = reduced_dfa(nfa, self.cap)
            self.levels.append(new)
            return
        prev = self.levels[-1]
        for f in self.keys:
            for c in self.keys:
                bad = (c[0], -c[1])
                parts = []
                plain = [prev[(p, f)] for p in self.keys if p != bad and not prev[(p, f)].is_empty]
                if plain:
                    u = plain[0] if len(plain) == 1 else dfa_union(plain, self.cap)
                    parts.append(
                        reduced_dfa(concat_nfas([u.to_nfa(), self.h_plain, self.g_nfa[c]]), self.cap)
                    )
                star_prefix = prev[(bad, f)]
                if not star_prefix.is_empty and not self.h_star_empty:
                    parts.append(
                        reduced_dfa(
                            concat_nfas([star_prefix.to_nfa(), self.h_star, self.g_nfa[c]]),
                            self.cap,
                        )
                    )
                if not parts:
                    new[(c, f)] = empty_dfa(n)
                elif len(parts) == 1:
                    new[(c, f)] = parts[0]
                else:
                    new[(c, f)] = dfa_union(parts, self.cap)
        self.levels.append(new)

    def exists(self, d: int) -> bool:
        if d < 1:
            return False
        while len(self.levels) < d:
            self._extend()
        level = self.levels[d - 1]
        return any(level[(f, f)].contains_identity for f in self.keys)

    def witness_slots(self, d: int) -> list[tuple[list[int], int, int]]:
        """Backtrack one witness: per slot, (constant letters, variable, sign).

        Constants come out in working-ambient letters; the identity must be
        known to lie in some P_d^{(f, f)} (call exists(d) first).
        """
        assert self.exists(d)
        f = next(k for k in self.keys if self.levels[d - 1][(k, k)].contains_identity)
        n = self.work.n
        t: list[int] = []
        c = f
        slots_rev: list[tuple[list[int], int, int]] = []
        for i in range(d, 1, -1):
            g_letters = self.work.g_values[c[0] - 1].reduced().letters
            g_signed = list(g_letters) if c[1] > 0 else [-l for l in reversed(g_letters)]
            tg = _free_reduce(list(t) + [-l for l in reversed(g_signed)])
            chosen = None
            for p in self.keys:
                prefix = self.levels[i - 2][(p, f)]
                if prefix.is_empty:
                    continue
                if self._star_needed(p, c) and self.h_star_empty:
                    continue
                box = reduced_dfa(
                    concat_nfas([nfa_chain(n, tg), self._constant(p, c)]), self.cap
                )
                cross = dfa_intersect(prefix, box, self.cap)
                if not cross.is_empty:
                    u = cross.shortest_word()
                    const = _free_reduce([-l for l in reversed(u)] + list(tg))
                    chosen = (p, u, const)
                    break
            assert chosen is not None, "backtracking lost the witness"
            p, u, const = chosen
            self._check_constant(const, p, c)
            slots_rev.append((const, c[0], c[1]))
            t = u
            c = p
        g_letters = self.work.g_values[c[0] - 1].reduced().letters
        g_signed = list(g_letters) if c[1] > 0 else [-l for l in reversed(g_letters)]
        const = _free_reduce(list(t) + [-l for l in reversed(g_signed)])
        self._check_constant(const, f, c)
        slots_rev.append((const, c[0], c[1]))
        slots_rev.reverse()
        return slots_rev

    def _check_constant(self, letters: list[int], prev, cur) -> None:
        word = FreeWord(Alphabet.ambient(self.work.n), letters)
        path = self.hbar_work.trace(word, self.hbar_work.basepoint)
        assert path is not None and path.is_closed, "witness constant not in H"
        if self._star_needed(prev, cur):
            assert letters, "witness constant must be nontrivial here"


def _strip_check(problem: Problem) -> Optional[int]:
    """Index of the first trivial target, if any."""
    for i, g in enumerate(problem.g_values):
        if len(g.reduced()) == 0:
            return i
    return None


def degree_exists(
    problem: Problem,
    presentation: Optional[IdealPresentation],
    d: int,
    *,
    relative_ambient: bool = True,
    cap: int = DEFAULT_STATE_CAP,
    _sweep: Optional[_Sweep] = None,
) -> bool:
    """True iff the ideal contains an equation of (total) degree exactly d.

    Degree 0 is False by convention: the identity is not an equation.
    """
    if d < 1:
        return False
    if _strip_check(problem) is not None:
        return True
    sweep = _sweep if _sweep is not None else _Sweep(problem, relative_ambient, cap)
    return sweep.exists(d)


def _subgroup_letter_data(problem: Problem):
    hbar = subgroup_graph(problem.n, problem.h_generators)
    tree = spanning_tree(hbar)
    basis = tuple(l.label_word().reduced() for l in fundamental_basis(hbar, tree))
    return hbar, tree, basis


def _assemble_equation(problem: Problem, sweep: _Sweep, slots) -> FreeWord:
    hbar, tree, basis = _subgroup_letter_data(problem)
    r = len(basis)
    alphabet = Alphabet.equation(r, problem.m)
    letters: list[int] = []
    for const_letters, var, sign in slots:
        amb = _work_to_ambient(sweep.back, problem.n, const_letters)
        if len(amb) > 0:
            path = hbar.trace(amb, hbar.basepoint)
            assert path is not None and path.is_closed
            letters.extend(loop_basis_coordinates(hbar, tree, path))
        letters.append((r + var) * sign)
    return FreeWord(alphabet, letters)


def min_degree(
    problem: Problem,
    presentation: Optional[IdealPresentation] = None,
    *,
    relative_ambient: bool = True,
    cap: int = DEFAULT_STATE_CAP,
) -> tuple[int, FreeWord]:
    """Least degree of a nontrivial equation, with an explicit witness.

    Searches d = 1 .. min(generator degree); some generator realizes that
    bound, so the search always terminates with an answer.
    """
    if presentation is None:
        presentation = normal_generators(problem)
    if not presentation.generators:
        raise WordError("the ideal is trivial; no equation exists")
    j = _strip_check(problem)
    r = len(presentation.h_basis)
    if j is not None:
        witness = FreeWord(Alphabet.equation(r, problem.m), [r + j + 1])
        return 1, witness
    bound = min(degree(g) for g in presentation.generators)
    sweep = _Sweep(problem, relative_ambient, cap)
    for d in range(1, bound + 1):
        if sweep.exists(d):
            slots = sweep.witness_slots(d)
            eq = _assemble_equation(problem, sweep, slots)
            value = evaluate(eq, list(presentation.h_basis), list(problem.g_values))
            assert len(value) == 0, "witness does not evaluate to the identity"
            assert degree(eq) == d, "witness degree drifted"
            return d, eq
    raise RuntimeError("exhausted the search below a known equation degree")


def degree_set(
    problem: Problem,
    presentation: Optional[IdealPresentation] = None,
    *,
    relative_ambient: bool = True,
    cap: int = DEFAULT_STATE_CAP,
) -> DegreeSetDescriptor:
    """The full degree set of a single-target problem.

    Parity of the generators picks the base (N or 2N); membership is then
    decided explicitly on the finite window the structure theorem leaves
    open (up to 3d for the least odd generator degree d, resp. 2d for the
    least generator degree in the even case), and everything beyond the
    window belongs to the set.
    """
    if problem.m != 1:
        raise WordError("degree_set is defined for a single target")
    if presentation is None:
        presentation = normal_generators(problem)
    if not presentation.generators:
        raise WordError("the ideal is trivial; it has no degree set")
    gen_degrees = [degree(g) for g in presentation.generators]
    assert all(dd >= 1 for dd in gen_degrees)
    odd_degrees = [dd for dd in gen_degrees if dd % 2 == 1]

    sweep = None
    if _strip_check(problem) is None:
        sweep = _Sweep(problem, relative_ambient, cap)

    def exists(d: int) -> bool:
        return degree_exists(problem, presentation, d, relative_ambient=relative_ambient,
                             cap=cap, _sweep=sweep)

    if odd_degrees:
        d_i = min(odd_degrees)
        verified = 3 * d_i
        window = range(1, verified + 1)
        case, base = "odd-present", "N"
    else:
        d_e = min(gen_degrees)
        verified = 2 * d_e
        window = range(2, verified + 1, 2)
        case, base = "even-only", "2N"
    exceptional = frozenset(d for d in window if not exists(d))
    descriptor = DegreeSetDescriptor(case, base, exceptional, verified)
    for dd in gen_degrees:
        assert descriptor.contains(dd), "a generator degree fell outside D_g"
    return descriptor


@dataclass(frozen=True)
class EnumerationResult:
    """Degree-d equations found under a path-length cap.

    Every degree-d equation arises from some base of path length below the
    theoretical bound by insertion moves; `complete` records whether the cap
    actually reached that bound (it essentially never does, which is why the
    cap and the bound are both reported).
    """

    bases: tuple[FreeWord, ...]
    degree: int
    cap_len: int
    theoretical_bound: int

    @property
    def complete(self) -> bool:
        return self.cap_len >= self.theoretical_bound


def equations_of_degree(
    problem: Problem,
    presentation: Optional[IdealPresentation],
    d: int,
    *,
    cap_len: int = 16,
    jobs: int = 1,
) -> EnumerationResult:
    """Enumerate degree-d equations with witness paths of length <= cap_len."""
    from .oracle import enumerate_kernel_loops

    if d < 1:
        return EnumerationResult((), d, cap_len, 0)
    if _strip_check(problem) is not None:
        raise WordError("enumeration needs nontrivial targets")
    wedge = None
    if presentation is not None and presentation.wedge is not None:
        if presentation.wedge.problem == problem:
            wedge = presentation.wedge
    if wedge is None:
        wedge = build_G(problem)
    loops = enumerate_kernel_loops(wedge, cap_len, jobs=jobs)
    bases = tuple(l.equation for l in loops if l.degree == d)
    bound = fixed_degree_length_bound(len(wedge.graph.edges), d)
    return EnumerationResult(bases, d, cap_len, bound)


def multi_degree_exists(
    problem: Problem,
    dvec: Sequence[int],
    *,
    relative_ambient: bool = True,
    cap: int = DEFAULT_STATE_CAP,
) -> bool:
    """True iff an equation with exactly dvec[i] letters of x_{i+1} exists."""
    dvec = tuple(int(d) for d in dvec)
    if len(dvec) != problem.m:
        raise WordError("multi-degree vector length must match the target count")
    if any(d < 0 for d in dvec):
        raise WordError("multi-degrees are nonnegative")
    if all(d == 0 for d in dvec):
        return False

    trivial = [i for i, g in enumerate(problem.g_values) if len(g.reduced()) == 0]
    if trivial:
        keep = [i for i in range(problem.m) if i not in trivial]
        rest = tuple(dvec[i] for i in keep)
        if not keep or all(d == 0 for d in rest):
            return True
        sub = Problem(problem.n, problem.h_generators, tuple(problem.g_values[i] for i in keep))
        return multi_degree_exists(sub, rest, relative_ambient=relative_ambient, cap=cap)

    sweep = _Sweep(problem, relative_ambient, cap)
    keys = sweep.keys
    n = sweep.work.n

    def bump(counts: tuple[int, ...], var: int) -> tuple[int, ...]:
        return counts[: var - 1] + (counts[var - 1] + 1,) + counts[var:]

    zero = (0,) * problem.m
    frontier: dict[tuple, Dfa] = {}
    for f in keys:
        if dvec[f[0] - 1] == 0:
            continue
        for c in keys:
            if dvec[c[0] - 1] == 0:
                continue
            if sweep._star_needed(f, c) and sweep.h_star_empty:
                continue
            dfa = reduced_dfa(concat_nfas([sweep._constant(f, c), sweep.g_nfa[c]]), cap)
            if not dfa.is_empty:
                frontier[(bump(zero, c[0]), c, f)] = dfa

    total = sum(dvec)
    for _ in range(2, total + 1):
        groups: dict[tuple, dict[tuple, list[Dfa]]] = {}
        for (counts, p, f), dfa in frontier.items():
            for c in keys:
                if counts[c[0] - 1] >= dvec[c[0] - 1]:
                    continue
                star = sweep._star_needed(p, c)
                if star and sweep.h_star_empty:
                    continue
                key = (bump(counts, c[0]), c, f)
                groups.setdefault(key, {}).setdefault(("star" if star else "plain"), []).append(dfa)
        new_frontier: dict[tuple, Dfa] = {}
        for key, parts in groups.items():
            c = key[1]
            prods = []
            for kind, dfas in parts.items():
                u = dfas[0] if len(dfas) == 1 else dfa_union(dfas, cap)
                factor = sweep.h_star if kind == "star" else sweep.h_plain
                prods.append(reduced_dfa(concat_nfas([u.to_nfa(), factor, sweep.g_nfa[c]]), cap))
            dfa = prods[0] if len(prods) == 1 else dfa_union(prods, cap)
            if not dfa.is_empty:
                new_frontier[key] = dfa
        frontier = new_frontier

    for (counts, c, f), dfa in frontier.items():
        if counts == dvec and c == f and dfa.contains_identity:
            return True
    return False
