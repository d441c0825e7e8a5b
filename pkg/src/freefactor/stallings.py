"""Stallings subgroup graphs: folding, membership, canonical cores, pullbacks.

A graph is stored as an adjacency list ``adj[v][s] = w`` where ``s`` is a
signed letter index; folded form means at most one outgoing edge per signed
letter at each vertex, and the two directions of an edge are always both
present (``adj[w][-s] = v``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from freefactor.errors import TrivialSubgroup
from freefactor.words import Alphabet, Word, identity, reduce_raw, std_alphabet


def _find(parent: List[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def fold(nv: int, raw_edges: Sequence[Tuple[int, int, int]], base: int):
    """Fold a raw edge list (u, s, v); returns (adjacency, base) on 0..m-1.

    Worklist of label conflicts with union-find vertex merging; the absorbed
    vertex's edges are re-queued, so the loop is near-linear in total edges.
    """
    parent = list(range(nv))
    adj: List[Dict[int, int]] = [dict() for _ in range(nv)]
    stack: List[Tuple[int, int, int]] = []
    for u, s, v in raw_edges:
        stack.append((u, s, v))
        stack.append((v, -s, u))
    while stack:
        u, s, v = stack.pop()
        u, v = _find(parent, u), _find(parent, v)
        cur = adj[u].get(s)
        if cur is None:
            adj[u][s] = v
            continue
        cur = _find(parent, cur)
        adj[u][s] = cur
        if cur != v:
            parent[v] = cur
            moved = adj[v]
            adj[v] = {}
            for sl, t in moved.items():
                stack.append((cur, sl, t))
    reps = sorted({_find(parent, v) for v in range(nv) if adj[_find(parent, v)] or _find(parent, v) == _find(parent, base)})
    index = {r: i for i, r in enumerate(reps)}
    out = [
        {s: index[_find(parent, t)] for s, t in adj[r].items()}
        for r in reps
    ]
    return out, index[_find(parent, base)]


def _trim(adj: List[Dict[int, int]], keep: Optional[int]):
    """Iteratively delete valence-1 vertices (except ``keep``); renumber."""
    alive = [True] * len(adj)
    degree = [len(d) for d in adj]
    queue = deque(v for v in range(len(adj)) if degree[v] <= 1 and v != keep)
    while queue:
        v = queue.popleft()
        if not alive[v] or degree[v] > 1:
            continue
        alive[v] = False
        for s, t in list(adj[v].items()):
            if alive[t]:
                del adj[t][-s]
                degree[t] -= 1
                if degree[t] <= 1 and t != keep:
                    queue.append(t)
        adj[v] = {}
    index = {}
    for v in range(len(adj)):
        if alive[v]:
            index[v] = len(index)
    out = [{s: index[t] for s, t in adj[v].items()} for v in range(len(adj)) if alive[v]]
    new_keep = index.get(keep) if keep is not None else None
    return out, new_keep


@dataclass(frozen=True)
class SubgroupGraph:
    """Folded based core graph of a finitely generated subgroup."""

    alphabet: Alphabet
    adj: Tuple[Dict[int, int], ...]
    base: int

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    @property
    def num_edges(self) -> int:
        n = sum(len(d) for d in self.adj)
        loops = sum(1 for v, d in enumerate(self.adj) for s, t in d.items() if t == v)
        # each non-loop edge contributes two directed entries; a loop also two
        assert n % 2 == 0
        return n // 2

    @property
    def rank(self) -> int:
        return self.num_edges - self.num_vertices + 1

    def trace(self, w: Word, start: Optional[int] = None) -> Optional[int]:
        """Endpoint of the path reading w, or None when the path dies."""
        v = self.base if start is None else start
        for s in w.letters:
            nxt = self.adj[v].get(s)
            if nxt is None:
                return None
            v = nxt
        return v

    def contains(self, w: Word) -> bool:
        return self.trace(w) == self.base

    def spanning_tree(self):
        """BFS tree from base: (order, parent_edge[v] = (u, s), tree edge set)."""
        parent_edge: Dict[int, Tuple[int, int]] = {}
        order = [self.base]
        seen = {self.base}
        qi = 0
        while qi < len(order):
            v = order[qi]
            qi += 1
            for s in sorted(self.adj[v], key=lambda s: (abs(s), s < 0)):
                t = self.adj[v][s]
                if t not in seen:
                    seen.add(t)
                    parent_edge[t] = (v, s)
                    order.append(t)
        assert len(order) == self.num_vertices, "graph must be connected"
        return order, parent_edge

    def path_word(self, v: int, parent_edge=None) -> Word:
        """Label word of the BFS-tree path base -> v."""
        if parent_edge is None:
            _, parent_edge = self.spanning_tree()
        letters: List[int] = []
        while v != self.base:
            u, s = parent_edge[v]
            letters.append(s)
            v = u
        return reduce_raw(self.alphabet, list(reversed(letters)))

    def basis_edges(self):
        """Non-tree directed edges (u, s, v) with a deterministic orientation."""
        order, parent_edge = self.spanning_tree()
        tree = set()
        for v, (u, s) in parent_edge.items():
            tree.add((u, s, v))
            tree.add((v, -s, u))
        out = []
        seen = set()
        for v in order:
            for s in sorted(self.adj[v], key=lambda s: (abs(s), s < 0)):
                t = self.adj[v][s]
                if (v, s, t) in tree or (v, s, t) in seen or (t, -s, v) in seen:
                    continue
                seen.add((v, s, t))
                # orient the recorded edge by its positive letter
                out.append((v, s, t) if s > 0 else (t, -s, v))
        return out, parent_edge

    def basis(self) -> List[Word]:
        """Spanning-tree free basis, as words in the ambient alphabet."""
        edges, parent_edge = self.basis_edges()
        out = []
        for u, s, v in edges:
            pu = self.path_word(u, parent_edge)
            pv = self.path_word(v, parent_edge)
            mid = Word(self.alphabet, (s,))
            out.append(pu * mid * pv.inverse())
        return out

    @property
    def basis_alphabet(self) -> Alphabet:
        return std_alphabet(max(self.rank, 1), prefix="g")


def from_generators(alphabet: Alphabet, gens: Sequence[Word]) -> SubgroupGraph:
    """Folded based core graph of <gens> (single vertex when gens is empty)."""
    nv = 1
    raw: List[Tuple[int, int, int]] = []
    for g in gens:
        assert g.alphabet == alphabet
        ls = g.letters
        if not ls:
            continue
        prev = 0
        for i, s in enumerate(ls):
            nxt = 0 if i == len(ls) - 1 else nv
            if nxt != 0:
                nv += 1
            raw.append((prev, s, nxt))
            prev = nxt
    adj, base = fold(nv, raw, 0)
    adj, base = _trim(adj, base)
    return SubgroupGraph(alphabet, tuple(adj), base)


def is_full_rose(g: SubgroupGraph) -> bool:
    n = g.alphabet.rank
    return (
        g.num_vertices == 1
        and all(g.adj[0].get(s) == 0 for i in range(1, n + 1) for s in (i, -i))
        and g.num_edges == n
    )


def membership_rewrite(H: SubgroupGraph, w: Word) -> Optional[Word]:
    """Expression of w in H's spanning-tree basis, or None when w is not in H."""
    assert w.alphabet == H.alphabet
    edges, parent_edge = H.basis_edges()
    index = {}
    for k, (u, s, v) in enumerate(edges):
        index[(u, s, v)] = k + 1
        index[(v, -s, u)] = -(k + 1)
    tree = set()
    for v, (u, s) in parent_edge.items():
        tree.add((u, s, v))
        tree.add((v, -s, u))
    out: List[int] = []
    v = H.base
    for s in w.letters:
        t = H.adj[v].get(s)
        if t is None:
            return None
        e = (v, s, t)
        if e not in tree:
            out.append(index[e])
        v = t
    if v != H.base:
        return None
    return reduce_raw(H.basis_alphabet, out)


def expand_basis_word(H: SubgroupGraph, expr: Word) -> Word:
    """Substitute H's basis words into an expression over the basis alphabet."""
    basis = H.basis()
    result = identity(H.alphabet)
    for s in expr.letters:
        b = basis[abs(s) - 1]
        result = result * (b if s > 0 else b.inverse())
    return result


# --- canonical conjugacy-class cores ---------------------------------------

def _unbased_core(H: SubgroupGraph) -> List[Dict[int, int]]:
    adj = [dict(d) for d in H.adj]
    adj, _ = _trim(adj, None)
    return adj


def _bfs_code(adj: List[Dict[int, int]], start: int) -> Tuple:
    order = [start]
    number = {start: 0}
    qi = 0
    code = []
    while qi < len(order):
        v = order[qi]
        qi += 1
        row = []
        for s in sorted(adj[v], key=lambda s: (abs(s), s < 0)):
            t = adj[v][s]
            if t not in number:
                number[t] = len(order)
                order.append(t)
            row.append((s, number[t]))
        code.append(tuple(row))
    return tuple(code)


def canonical_core(H: SubgroupGraph) -> str:
    """Stable conjugacy-class key: minimal BFS code of the unbased core.

    Folded cores are unique up to label-preserving isomorphism, and BFS from a
    fixed start with a fixed letter order is deterministic, so minimizing the
    code over start vertices canonicalizes the isomorphism class.
    """
    adj = _unbased_core(H)
    if not adj or not any(adj):
        raise TrivialSubgroup("trivial subgroup has no core")
    best = min(_bfs_code(adj, v) for v in range(len(adj)))
    return repr(best)


# --- fiber products ---------------------------------------------------------

@dataclass(frozen=True)
class PullbackComponent:
    """One rank >= 1 component of the fiber product of two subgroup graphs."""

    subgroup: SubgroupGraph          # representative of [A ∩ gBg⁻¹], in ambient letters
    gens_in_A: Tuple[Word, ...]      # the same generators rewritten in A's basis
    coset_tag: Word                  # g, a double-coset representative
    rank: int


def pullback_components(A: SubgroupGraph, B: SubgroupGraph) -> List[PullbackComponent]:
    """Rank >= 1 components of the product automaton, one per double coset."""
    assert A.alphabet == B.alphabet
    alphabet = A.alphabet
    # reachable product states and edges
    states: Dict[Tuple[int, int], int] = {}
    edges: List[Tuple[int, int, int]] = []
    for u in range(A.num_vertices):
        for v in range(B.num_vertices):
            states[(u, v)] = len(states)
    state_list = list(states)
    adj: List[Dict[int, int]] = [dict() for _ in states]
    for (u, v), i in states.items():
        for s, tu in A.adj[u].items():
            tv = B.adj[v].get(s)
            if tv is not None:
                adj[i][s] = states[(tu, tv)]
    # connected components (undirected; adj is already symmetric)
    comp = [-1] * len(adj)
    ncomp = 0
    for i in range(len(adj)):
        if comp[i] != -1:
            continue
        stack = [i]
        comp[i] = ncomp
        while stack:
            x = stack.pop()
            for t in adj[x].values():
                if comp[t] == -1:
                    comp[t] = ncomp
                    stack.append(t)
        ncomp += 1
    out = []
    _, parent_A = A.spanning_tree()
    _, parent_B = B.spanning_tree()
    for c in range(ncomp):
        verts = [i for i in range(len(adj)) if comp[i] == c]
        local = {i: k for k, i in enumerate(verts)}
        sub_adj = [{s: local[t] for s, t in adj[i].items()} for i in verts]
        survivors = _surviving_vertices(sub_adj)
        if not survivors:
            continue
        core_adj, core_index = _restrict(sub_adj, survivors)
        rank = sum(len(d) for d in core_adj) // 2 - len(core_adj) + 1
        if rank < 1:
            continue
        # deterministic base inside the core
        base_local = min(survivors, key=lambda k: state_list[verts[k]])
        u0, v0 = state_list[verts[base_local]]
        graph = SubgroupGraph(alphabet, tuple(core_adj), core_index[base_local])
        pA = A.path_word(u0, parent_A)
        pB = B.path_word(v0, parent_B)
        g = pA * pB.inverse()
        loops = graph.basis()
        gens_ambient = tuple(loop.conjugate_by(pA) for loop in loops)
        sub = from_generators(alphabet, list(gens_ambient))
        gens_in_A = []
        for w in gens_ambient:
            expr = membership_rewrite(A, w)
            assert expr is not None, "pullback generator must lie in A"
            gens_in_A.append(expr)
        out.append(PullbackComponent(sub, tuple(gens_in_A), g, rank))
    return out


def _surviving_vertices(adj: List[Dict[int, int]]) -> List[int]:
    alive = [True] * len(adj)
    degree = [len(d) for d in adj]
    work = [dict(d) for d in adj]
    queue = deque(v for v in range(len(adj)) if degree[v] <= 1)
    while queue:
        v = queue.popleft()
        if not alive[v] or degree[v] > 1:
            continue
        alive[v] = False
        for s, t in list(work[v].items()):
            if alive[t]:
                del work[t][-s]
                degree[t] -= 1
                if degree[t] <= 1:
                    queue.append(t)
        work[v] = {}
    return [v for v in range(len(adj)) if alive[v]]


def _restrict(adj: List[Dict[int, int]], survivors: List[int]):
    index = {v: i for i, v in enumerate(survivors)}
    out = [
        {s: index[t] for s, t in adj[v].items() if t in index}
        for v in survivors
    ]
    return out, index


def join(alphabet: Alphabet, *graphs_or_words) -> SubgroupGraph:
    """Subgroup generated by the union of subgroup graphs' bases and words."""
    gens: List[Word] = []
    for item in graphs_or_words:
        if isinstance(item, SubgroupGraph):
            gens.extend(item.basis())
        else:
            gens.append(item)
    return from_generators(alphabet, gens)


def subgroup_cover_core(T, A: SubgroupGraph) -> SubgroupGraph:
    """Core of the A-cover of a marked graph T, over T's edge alphabet.

    A's basis words are rewritten as edge-paths of T via its marking, then
    folded over the edge alphabet of T.  ``T`` is any object with
    ``edge_alphabet`` and ``to_edge_paths(words)`` (see projections.MarkedGraph).
    """
    paths = T.to_edge_paths(A.basis())
    return from_generators(T.edge_alphabet, paths)
