"""Marked graphs (spine points), the projection to rank-2 factor complexes,
projection distances, the Behrstock minimum, factor ordering, and activity
intervals along bounded-step paths."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from freefactor import factors as fa
from freefactor import farey, stallings
from freefactor.errors import (
    InvalidMarking,
    NotInOmega,
    NotOverlapping,
    ThresholdViolated,
    UndefinedProjection,
)
from freefactor.factors import FreeFactorClass
from freefactor.stallings import SubgroupGraph, from_generators, is_full_rose
from freefactor.words import (
    Alphabet,
    GroupMap,
    Word,
    group_map,
    identity,
    invert_automorphism,
    letter,
    reduce_raw,
    std_alphabet,
)

PROJECTION_DIAMETER_BOUND = 4


@dataclass(frozen=True)
class MarkedGraph:
    """Finite graph with reduced-word edge labels identifying π₁ with F_n."""

    alphabet: Alphabet                       # ambient F_n
    num_vertices: int
    edges: Tuple[Tuple[int, int, Word], ...]  # (u, v, label)
    base: int
    # optional compositional form of the marking; its inverse cache avoids a
    # fresh Nielsen reduction when the labels are long
    marking_hint: Optional[GroupMap] = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = self.alphabet.rank
        assert self.betti == n, "first Betti number must equal the ambient rank"
        deg = [0] * self.num_vertices
        for u, v, w in self.edges:
            assert w.alphabet == self.alphabet
            deg[u] += 1
            deg[v] += 1
        assert all(d >= 2 for d in deg), "no valence-1 vertices"
        if not is_full_rose(from_generators(self.alphabet, self.marking_words())):
            raise InvalidMarking("edge labels do not generate the ambient group")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def betti(self) -> int:
        return self.num_edges - self.num_vertices + 1

    @property
    def edge_alphabet(self) -> Alphabet:
        return std_alphabet(self.num_edges, prefix="e")

    # -- spanning tree / basis loops ---------------------------------------

    def _tree(self):
        """BFS tree: parent[v] = (u, edge_index, direction), discovery order."""
        adj: Dict[int, List[Tuple[int, int, int]]] = {v: [] for v in range(self.num_vertices)}
        for idx, (u, v, _w) in enumerate(self.edges):
            adj[u].append((v, idx, 1))
            adj[v].append((u, idx, -1))
        parent: Dict[int, Tuple[int, int, int]] = {}
        order = [self.base]
        seen = {self.base}
        qi = 0
        while qi < len(order):
            v = order[qi]
            qi += 1
            for t, idx, d in sorted(adj[v], key=lambda x: (x[1], x[2])):
                if t not in seen:
                    seen.add(t)
                    parent[t] = (v, idx, d)
                    order.append(t)
        assert len(order) == self.num_vertices, "marked graph must be connected"
        return parent, order

    def _tree_path_edges(self, v: int, parent) -> List[int]:
        """Signed edge indices (1-based) of the tree path base -> v."""
        out: List[int] = []
        while v != self.base:
            u, idx, d = parent[v]
            out.append(d * (idx + 1))
            v = u
        return list(reversed(out))

    def basis_loops(self) -> List[List[int]]:
        """Edge-paths (signed 1-based edge indices) of the non-tree basis loops."""
        parent, _ = self._tree()
        tree_edges = {idx for (_u, idx, _d) in parent.values()}
        loops = []
        for idx, (u, v, _w) in enumerate(self.edges):
            if idx in tree_edges:
                continue
            pu = self._tree_path_edges(u, parent)
            pv = self._tree_path_edges(v, parent)
            loop = pu + [idx + 1] + [-x for x in reversed(pv)]
            loops.append([x for x in reduce_raw(self.edge_alphabet, loop).letters])
        return loops

    def eval_edge_word(self, edge_word: Sequence[int]) -> Word:
        """Label-word of an edge path (signed 1-based edge indices)."""
        raw: List[int] = []
        for s in edge_word:
            ls = self.edges[abs(s) - 1][2].letters
            raw.extend(ls if s > 0 else tuple(-y for y in reversed(ls)))
        return reduce_raw(self.alphabet, raw)

    def marking_words(self) -> List[Word]:
        """Images in F_n of the basis loops under the marking."""
        return [self.eval_edge_word(loop) for loop in self.basis_loops()]

    def to_edge_paths(self, words: Sequence[Word]) -> List[Word]:
        """Rewrite ambient words as based edge-path loops (over edge letters)."""
        inv = _marking_inverse(self)
        loops = self.basis_loops()
        ea = self.edge_alphabet
        out = []
        for w in words:
            in_basis = inv(w)  # word in the basis loops t_1..t_n
            path: List[int] = []
            for s in in_basis.letters:
                loop = loops[abs(s) - 1]
                path.extend(loop if s > 0 else [-x for x in reversed(loop)])
            out.append(reduce_raw(ea, path))
        return out


@lru_cache(maxsize=4096)
def _marking_inverse(T: MarkedGraph) -> GroupMap:
    words = T.marking_words()
    marking = T.marking_hint
    if marking is not None and tuple(marking.images) == tuple(words):
        pass  # reuse the compositional form and its cached inverse
    else:
        marking = group_map(T.alphabet, T.alphabet, words)
    try:
        return invert_automorphism(marking)
    except Exception as exc:  # pragma: no cover - guarded by __post_init__
        raise InvalidMarking(str(exc))


def rose(alphabet: Alphabet) -> MarkedGraph:
    edges = tuple((0, 0, letter(alphabet, i)) for i in range(alphabet.rank))
    from freefactor.words import identity_map

    return MarkedGraph(alphabet, 1, edges, 0, identity_map(alphabet))


def transform_marked(f: GroupMap, T: MarkedGraph) -> MarkedGraph:
    """Relabel every edge word w by f(w)."""
    assert f.kind == "verified-automorphism"
    from freefactor.words import compose_map

    edges = tuple((u, v, f(w)) for u, v, w in T.edges)
    hint = compose_map(f, T.marking_hint) if T.marking_hint is not None else None
    return MarkedGraph(f.codomain, T.num_vertices, edges, T.base, hint)


# --- the projection ---------------------------------------------------------

@dataclass(frozen=True)
class ProjectionSet:
    """π_A(T): vertex-group classes of 1-edge collapses of the A-cover core."""

    factor: FreeFactorClass
    gens_in_A: Tuple[Word, ...]   # abelianized class representatives in A's basis
    vertices: FrozenSet[farey.FareyVertex]

    def __post_init__(self):
        assert self.vertices, "projection set must be nonempty"
        assert farey.diameter(self.vertices) <= PROJECTION_DIAMETER_BOUND


def _natural_edges(adj: List[Dict[int, int]]):
    """Maximal arcs through valence-2 vertices of an unbased core graph.

    Returns a list of arcs; an arc is a list of directed (u, s, v) steps.
    Each undirected natural edge appears once.
    """
    branch = [v for v in range(len(adj)) if len(adj[v]) != 2]
    arcs = []
    used = set()
    for b in branch:
        for s in sorted(adj[b], key=lambda s: (abs(s), s < 0)):
            if (b, s) in used:
                continue
            arc = []
            u, sl = b, s
            while True:
                v = adj[u][sl]
                arc.append((u, sl, v))
                used.add((u, sl))
                used.add((v, -sl))
                if len(adj[v]) != 2 or v in branch:
                    break
                nxts = [t for t in adj[v] if t != -sl]
                assert len(nxts) == 1
                u, sl = v, nxts[0]
            arcs.append(arc)
    assert arcs, "core of a rank >= 2 factor has a branch vertex"
    return arcs


def subgroup_cover_core(T: MarkedGraph, A: FreeFactorClass) -> SubgroupGraph:
    return stallings.subgroup_cover_core(T, A.graph)


@lru_cache(maxsize=4096)
def project_tree(A: FreeFactorClass, T: MarkedGraph) -> ProjectionSet:
    """π_A(T) via the A-cover core of T, per natural-edge 1-edge collapses."""
    assert A.rank == 2, "Farey projections are for rank-2 factors"
    assert A.ambient == T.alphabet
    basis_paths = T.to_edge_paths(A.graph.basis())
    cover = from_generators(T.edge_alphabet, basis_paths)
    # change of basis: columns = abelianized coordinates of A's basis images
    # in the cover's spanning-tree basis; unimodular since both are bases
    coords = []
    for p in basis_paths:
        expr = stallings.membership_rewrite(cover, p)
        assert expr is not None
        coords.append(_abelianize2(expr))
    (m00, m10), (m01, m11) = coords
    det = m00 * m11 - m01 * m10
    assert det in (1, -1), "basis change must be unimodular"
    # unbased core plus connecting stalk from the cover's base
    adj = [dict(d) for d in cover.adj]
    survivors = stallings._surviving_vertices(adj)
    assert survivors, "cover of a nontrivial factor has a core"
    core_adj, core_index = stallings._restrict(adj, survivors)
    in_core = set(survivors)
    # stalk: walk from base until the core is reached
    stalk: List[int] = []
    v = cover.base
    prev = 0
    while v not in in_core:
        options = [s for s in cover.adj[v] if s != -prev]
        assert len(options) == 1, "stalk must be a simple path"
        s = options[0]
        stalk.append(s)
        prev = s
        v = cover.adj[v][s]
    b0 = core_index[v]
    ea = T.edge_alphabet
    stalk_word = Word(ea, tuple(stalk))

    core = SubgroupGraph(ea, tuple(core_adj), b0)
    _, parent = core.spanning_tree()

    gens_in_A: List[Word] = []
    seen_vertices = set()
    vertices: List[farey.FareyVertex] = []
    for arc in _natural_edges(core_adj):
        removed_edges = set()
        interior = set()
        for u, s, v2 in arc:
            removed_edges.add((u, s))
            removed_edges.add((v2, -s))
        for step in arc[:-1]:
            interior.add(step[2])
        interior.discard(arc[0][0])
        remaining = [v for v in range(len(core_adj)) if v not in interior]
        rem_adj = {
            v: {s: t for s, t in core_adj[v].items() if (v, s) not in removed_edges and t not in interior}
            for v in remaining
        }
        # components of the complement of the open arc
        comp: Dict[int, int] = {}
        for v in remaining:
            if v in comp:
                continue
            cid = max(comp.values(), default=-1) + 1
            stack = [v]
            comp[v] = cid
            while stack:
                x = stack.pop()
                for t in rem_adj[x].values():
                    if t not in comp:
                        comp[t] = cid
                        stack.append(t)
        ncomp = max(comp.values()) + 1
        for cid in range(ncomp):
            verts = [v for v in remaining if comp[v] == cid]
            edges = []
            seen_e = set()
            for v in verts:
                for s, t in rem_adj[v].items():
                    if (v, s) in seen_e or (t, -s) in seen_e:
                        continue
                    seen_e.add((v, s))
                    edges.append((v, s, t))
            rank = len(edges) - len(verts) + 1
            if rank < 1:
                continue
            assert rank == 1, "rank-2 cover components have cyclic vertex groups"
            # fundamental loop: spanning tree of the component + one extra edge
            gen_word = _component_loop(ea, verts, edges, core, parent, stalk_word)
            expr_t = stallings.membership_rewrite(cover, gen_word)
            assert expr_t is not None, "vertex group must lie in the cover subgroup"
            pt, qt = _abelianize2(expr_t)
            # back to A's basis: apply the inverse of the unimodular matrix
            p = det * (m11 * pt - m01 * qt)
            q = det * (-m10 * pt + m00 * qt)
            v_f = farey.farey_vertex(p, q)
            if v_f not in seen_vertices:
                seen_vertices.add(v_f)
                vertices.append(v_f)
                ba = A.graph.basis_alphabet
                raw = [1] * p + [-1] * (-p) + [2] * q + [-2] * (-q)
                gens_in_A.append(Word(ba, tuple(raw)))
    return ProjectionSet(A, tuple(gens_in_A), frozenset(vertices))


def _abelianize2(w: Word) -> Tuple[int, int]:
    assert w.alphabet.rank == 2
    p = sum(1 if x == 1 else -1 for x in w.letters if abs(x) == 1)
    q = sum(1 if x == 2 else -1 for x in w.letters if abs(x) == 2)
    return p, q


def _component_loop(ea, verts, edges, core: SubgroupGraph, parent, stalk_word: Word) -> Word:
    """A generator of the cyclic π₁ of a complement component, as an edge word
    conjugated back to the original cover base."""
    k0 = min(verts)
    tree: Dict[int, Tuple[int, int]] = {}
    seen = {k0}
    adj: Dict[int, List[Tuple[int, int]]] = {v: [] for v in verts}
    for u, s, v in edges:
        adj[u].append((s, v))
        adj[v].append((-s, u))
    qi = 0
    order = [k0]
    while qi < len(order):
        v = order[qi]
        qi += 1
        for s, t in sorted(adj[v]):
            if t not in seen:
                seen.add(t)
                tree[t] = (v, s)
                order.append(t)
    tree_set = set()
    for t, (v, s) in tree.items():
        tree_set.add((v, s, t))
        tree_set.add((t, -s, v))

    def path_to(v):
        out = []
        while v != k0:
            u, s = tree[v]
            out.append(s)
            v = u
        return list(reversed(out))

    extra = None
    for u, s, v in edges:
        if (u, s, v) not in tree_set:
            extra = (u, s, v)
            break
    assert extra is not None
    u, s, v = extra
    loop = path_to(u) + [s] + [-x for x in reversed(path_to(v))]
    # conjugate: base --stalk--> b0 --tree--> k0 --loop--> k0 --back--
    pre = stalk_word * core.path_word(k0, parent)
    return pre * reduce_raw(ea, loop) * pre.inverse()


# --- distances --------------------------------------------------------------

def factor_projection_vertices(A: FreeFactorClass, B: FreeFactorClass) -> FrozenSet[farey.FareyVertex]:
    """π_A(B) as Farey vertices (A rank 2)."""
    assert A.rank == 2
    classes = fa.meet_projection(A, B)
    if not classes:
        raise UndefinedProjection("factors do not meet")
    verts = set()
    for mc in classes:
        assert mc.rank == 1
        verts.add(farey.farey_vertex_of(mc.gens_in_A[0]))
    assert farey.diameter(verts) <= PROJECTION_DIAMETER_BOUND
    return frozenset(verts)


def _vertices_of(A: FreeFactorClass, X) -> FrozenSet[farey.FareyVertex]:
    if isinstance(X, MarkedGraph):
        return project_tree(A, X).vertices
    if isinstance(X, FreeFactorClass):
        return factor_projection_vertices(A, X)
    if isinstance(X, ProjectionSet):
        return X.vertices
    raise UndefinedProjection(f"cannot project {type(X).__name__}")


def projection_distance(A: FreeFactorClass, X, Y) -> int:
    """d_A(X, Y): Farey diameter of π_A(X) ∪ π_A(Y)."""
    return farey.diameter(_vertices_of(A, X) | _vertices_of(A, Y))


def behrstock_min(A: FreeFactorClass, B: FreeFactorClass, T: MarkedGraph) -> int:
    """min{d_A(B, T), d_B(A, T)} for overlapping factors."""
    return min(projection_distance(A, B, T), projection_distance(B, A, T))


# --- factor order (the five diagnostic quantities) -------------------------

@dataclass(frozen=True)
class OrderVerdict:
    first_precedes_second: bool
    d_A_T_B: int
    d_B_T_A: int
    d_B_T2_A: int
    d_A_T2_B: int
    d_A_T_T2: int
    d_B_T_T2: int


def factor_order(
    A: FreeFactorClass,
    B: FreeFactorClass,
    T: MarkedGraph,
    T2: MarkedGraph,
    M: int,
    K: Optional[int] = None,
) -> OrderVerdict:
    """Order two overlapping factors far from both trees: A ≺ B iff
    d_A(T, B) >= M + 1.  Returns all diagnostic quantities for auditing."""
    if K is None:
        K = 2 * M + 1
    assert K >= 2 * M + 1, "order precondition: K >= 2M + 1"
    if not fa.meet_projection(A, B):
        raise NotOverlapping("factors do not meet")
    dA = projection_distance(A, T, T2)
    dB = projection_distance(B, T, T2)
    if dA < K or dB < K:
        raise NotInOmega(f"d_A(T,T')={dA}, d_B(T,T')={dB} below K={K}")
    pa_t, pa_t2 = project_tree(A, T), project_tree(A, T2)
    pb_t, pb_t2 = project_tree(B, T), project_tree(B, T2)
    pa_b = factor_projection_vertices(A, B)
    pb_a = factor_projection_vertices(B, A)
    d_A_T_B = farey.diameter(pa_t.vertices | pa_b)
    d_B_T_A = farey.diameter(pb_t.vertices | pb_a)
    d_B_T2_A = farey.diameter(pb_t2.vertices | pb_a)
    d_A_T2_B = farey.diameter(pa_t2.vertices | pa_b)
    return OrderVerdict(d_A_T_B >= M + 1, d_A_T_B, d_B_T_A, d_B_T2_A, d_A_T2_B, dA, dB)


# --- intervals along bounded-step paths ------------------------------------

@dataclass(frozen=True)
class TreePath:
    """A path of marked graphs standing in for a spine geodesic."""

    trees: Tuple[MarkedGraph, ...]

    def __post_init__(self):
        assert len(self.trees) >= 2

    @property
    def length(self) -> int:
        return len(self.trees) - 1

    def step_bound(self, A: FreeFactorClass) -> int:
        """L_path for this factor: max per-step projection displacement."""
        return max(
            projection_distance(A, self.trees[k], self.trees[k + 1])
            for k in range(self.length)
        )


@dataclass(frozen=True)
class IntervalRecord:
    factor_key: str
    a: int
    b: int
    M: int
    L: int
    d_ends: int


def interval_of(path: TreePath, A: FreeFactorClass, M: int, L: int) -> IntervalRecord:
    """I_A = [a_A, b_A] with thresholds 2M + L, under the Ω precondition."""
    K = 5 * M + 3 * L
    thresh = 2 * M + L
    sets = [project_tree(A, t).vertices for t in path.trees]
    N = path.length
    d0N = farey.diameter(sets[0] | sets[N])
    if d0N < K:
        raise ThresholdViolated(f"d_A(T_0, T_N) = {d0N} < K = {K}")
    a = max(k for k in range(N + 1) if farey.diameter(sets[0] | sets[k]) <= thresh)
    later = [k for k in range(a, N + 1) if farey.diameter(sets[k] | sets[N]) <= thresh]
    assert later, "interval endpoint must exist under the Ω precondition"
    b = min(later)
    assert 0 <= a < b <= N, "interval must be nondegenerate"
    return IntervalRecord(A.key, a, b, M, L, d0N)
