"""Right-angled Artin group combinatorics.

Elements are syllable sequences over a defining simplicial graph.  Rewriting
uses three moves: (1) drop a trivial syllable, (2) merge adjacent syllables of
the same generator, (3) swap adjacent syllables of commuting generators.  A
word is syllable-minimal iff no shuffle (move-3 sequence) enables (1) or (2);
the minimal forms of g constitute Min(g), a single move-(3) orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

from freefactor.errors import OrbitBudgetExceeded, TooLarge, TooLong, UnknownLetter

ORBIT_BUDGET = 10 ** 6
MAX_SYLLABLES = 12
MAX_CLIQUE_VERTICES = 40


@dataclass(frozen=True)
class SimplicialGraph:
    """Finite simple graph: vertex names plus unordered edges."""

    vertices: Tuple[str, ...]
    edges: FrozenSet[Tuple[str, str]]

    def __post_init__(self):
        assert len(set(self.vertices)) == len(self.vertices)
        norm = set()
        for a, b in self.edges:
            assert a != b, "no loops"
            assert a in self.vertices and b in self.vertices
            norm.add(tuple(sorted((a, b))))
        object.__setattr__(self, "edges", frozenset(norm))

    def adjacent(self, a: str, b: str) -> bool:
        return tuple(sorted((a, b))) in self.edges

    def complement(self) -> "SimplicialGraph":
        comp = {
            (a, b)
            for i, a in enumerate(self.vertices)
            for b in self.vertices[i + 1 :]
            if not self.adjacent(a, b)
        }
        return SimplicialGraph(self.vertices, frozenset(comp))


def simplicial_graph(vertices: Sequence[str], edges: Sequence[Tuple[str, str]]) -> SimplicialGraph:
    return SimplicialGraph(tuple(vertices), frozenset(tuple(sorted(e)) for e in edges))


def pentagon() -> SimplicialGraph:
    vs = [f"v{i}" for i in range(5)]
    return simplicial_graph(vs, [(vs[i], vs[(i + 1) % 5]) for i in range(5)])


@dataclass(frozen=True)
class Syllable:
    gen: str
    exp: int
    sid: int  # stable id, preserved across moves

    def __post_init__(self):
        assert self.exp != 0


@dataclass(frozen=True)
class RaagWord:
    graph: SimplicialGraph
    syllables: Tuple[Syllable, ...]

    def __post_init__(self):
        for s in self.syllables:
            if s.gen not in self.graph.vertices:
                raise UnknownLetter(f"unknown generator {s.gen!r}")

    def __len__(self) -> int:
        return len(self.syllables)

    def key(self) -> Tuple[Tuple[str, int], ...]:
        return tuple((s.gen, s.exp) for s in self.syllables)

    def __str__(self) -> str:
        return " ".join(
            s.gen if s.exp == 1 else f"{s.gen}^{s.exp}" for s in self.syllables
        ) or "1"


def raag_word(graph: SimplicialGraph, pairs: Sequence[Tuple[str, int]]) -> RaagWord:
    sylls = [Syllable(g, e, i) for i, (g, e) in enumerate(pairs) if e != 0]
    return RaagWord(graph, tuple(sylls))


def raag_word_from_str(graph: SimplicialGraph, s: str) -> RaagWord:
    pairs = []
    for tok in s.split():
        if "^" in tok:
            name, exp = tok.split("^", 1)
            pairs.append((name, int(exp)))
        else:
            pairs.append((tok, 1))
    return raag_word(graph, pairs)


def _shuffle_orbit(graph: SimplicialGraph, sylls: Tuple[Syllable, ...], budget: int = ORBIT_BUDGET):
    """Move-(3) orbit of a syllable sequence (states keyed by sid sequence)."""
    start = sylls
    seen: Dict[Tuple[int, ...], Tuple[Syllable, ...]] = {tuple(s.sid for s in start): start}
    queue = [start]
    while queue:
        cur = queue.pop()
        for i in range(len(cur) - 1):
            a, b = cur[i], cur[i + 1]
            if a.gen != b.gen and graph.adjacent(a.gen, b.gen):
                nxt = cur[:i] + (b, a) + cur[i + 2 :]
                k = tuple(s.sid for s in nxt)
                if k not in seen:
                    if len(seen) >= budget:
                        raise OrbitBudgetExceeded(f"move-(3) orbit exceeds {budget} words")
                    seen[k] = nxt
                    queue.append(nxt)
    return list(seen.values())


def _one_reduction(graph: SimplicialGraph, sylls: Tuple[Syllable, ...]):
    """A strictly shorter equivalent word found via the shuffle orbit, or None."""
    for member in _shuffle_orbit(graph, sylls):
        for i in range(len(member) - 1):
            a, b = member[i], member[i + 1]
            if a.gen == b.gen:
                e = a.exp + b.exp
                merged = () if e == 0 else (Syllable(a.gen, e, min(a.sid, b.sid)),)
                return member[:i] + merged + member[i + 2 :]
    return None


def normalize(graph: SimplicialGraph, w: RaagWord) -> RaagWord:
    """Canonical member of Min(g): lexicographically least minimal form."""
    sylls = w.syllables
    while True:
        shorter = _one_reduction(graph, sylls)
        if shorter is None:
            break
        sylls = shorter
    vorder = {v: i for i, v in enumerate(sorted(graph.vertices))}
    best = min(
        _shuffle_orbit(graph, sylls),
        key=lambda m: tuple((vorder[s.gen], s.exp) for s in m),
    )
    relabeled = tuple(Syllable(s.gen, s.exp, i) for i, s in enumerate(best))
    return RaagWord(graph, relabeled)


def min_set(graph: SimplicialGraph, g: RaagWord) -> List[RaagWord]:
    """Complete Min(g) as the move-(3) orbit of the normalized form."""
    if len(g) > MAX_SYLLABLES:
        raise TooLong(f"syllable length {len(g)} exceeds {MAX_SYLLABLES}")
    norm = normalize(graph, g)
    return [RaagWord(graph, m) for m in _shuffle_orbit(graph, norm.syllables)]


@dataclass(frozen=True)
class SyllableOrder:
    """The strict partial order on syl(g) and its adjacency subrelation.

    ``precedes`` holds (i, j) iff syllable i comes before j in every member of
    Min(g); ``precedes_adjacent`` additionally requires adjacency in some
    member.  The transitive closure of the latter equals the former.
    """

    sids: Tuple[int, ...]
    precedes: FrozenSet[Tuple[int, int]]
    precedes_adjacent: FrozenSet[Tuple[int, int]]

    def closure_of_adjacent(self) -> FrozenSet[Tuple[int, int]]:
        reach: Dict[int, Set[int]] = {i: set() for i in self.sids}
        for i, j in self.precedes_adjacent:
            reach[i].add(j)
        changed = True
        while changed:
            changed = False
            for i in self.sids:
                new = set()
                for j in reach[i]:
                    new |= reach[j]
                if not new <= reach[i]:
                    reach[i] |= new
                    changed = True
        return frozenset((i, j) for i in self.sids for j in reach[i])


def syllable_order(graph: SimplicialGraph, g: RaagWord) -> SyllableOrder:
    members = min_set(graph, g)
    if not members:
        return SyllableOrder((), frozenset(), frozenset())
    sids = tuple(s.sid for s in sorted(members[0].syllables, key=lambda s: s.sid))
    always_before: Dict[Tuple[int, int], bool] = {
        (i, j): True for i in sids for j in sids if i != j
    }
    adjacent_somewhere: Set[Tuple[int, int]] = set()
    for m in members:
        pos = {s.sid: k for k, s in enumerate(m.syllables)}
        for i in sids:
            for j in sids:
                if i != j and pos[i] > pos[j]:
                    always_before[(i, j)] = False
        for k in range(len(m.syllables) - 1):
            adjacent_somewhere.add((m.syllables[k].sid, m.syllables[k + 1].sid))
    precedes = frozenset(p for p, ok in always_before.items() if ok)
    padj = frozenset(p for p in precedes if p in adjacent_somewhere)
    order = SyllableOrder(sids, precedes, padj)
    # strictness: acyclic by construction (a cycle would force both orders)
    assert not any((j, i) in precedes for i, j in precedes)
    return order


def clique_number(graph: SimplicialGraph) -> int:
    """Exact maximum clique size by branch and bound."""
    n = len(graph.vertices)
    if n > MAX_CLIQUE_VERTICES:
        raise TooLarge(f"{n} vertices exceeds the bound {MAX_CLIQUE_VERTICES}")
    if n == 0:
        return 0
    idx = {v: i for i, v in enumerate(graph.vertices)}
    nbr = [0] * n
    for a, b in graph.edges:
        nbr[idx[a]] |= 1 << idx[b]
        nbr[idx[b]] |= 1 << idx[a]
    best = 0

    def bb(cand: int, size: int):
        nonlocal best
        if size + bin(cand).count("1") <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            if size + bin(cand).count("1") + 1 <= best:
                return
            bb(cand & nbr[v], size + 1)

    bb((1 << n) - 1, 0)
    return best
