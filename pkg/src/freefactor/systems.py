"""Support graphs, their complexity, admissible factor collections, and the
generator systems that induce a homomorphism from a right-angled Artin group
into outer automorphisms of a free group."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from freefactor import factors as fa, farey
from freefactor.errors import (
    CommutationViolation,
    NotAdmissible,
    NotHyperbolicSeed,
    SupportViolation,
)
from freefactor.factors import FreeFactorClass, free_factor_class
from freefactor.raag import RaagWord, SimplicialGraph, simplicial_graph
from freefactor.words import (
    Alphabet,
    GroupMap,
    Word,
    compose_map,
    conjugacy_witness,
    group_map,
    identity_map,
    invert_automorphism,
    letter,
    map_power,
    std_alphabet,
    verify_automorphism,
)


# --- support graphs ---------------------------------------------------------

@dataclass(frozen=True)
class GraphOfGroups:
    """Graph of free groups with trivial edge groups realizing a collection.

    Vertex names: ``v|i`` for an original vertex i of the complement graph,
    ``e|i|j`` for the subdivision vertex of a complement edge (i < j).
    """

    gamma: SimplicialGraph
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    vertex_ranks: Tuple[int, ...]
    ambient: Alphabet
    vertex_words: Tuple[Tuple[Word, ...], ...]   # ambient gens per vertex group
    factor_words: Tuple[Tuple[Word, ...], ...]   # basis of G_i per Γ vertex
    complement_words: Tuple[Tuple[Word, ...], ...]  # completes G_i to a basis

    @property
    def ambient_rank(self) -> int:
        return self.ambient.rank

    def factor(self, i: int) -> FreeFactorClass:
        return free_factor_class(self.ambient, list(self.factor_words[i]), verified=True)


def _complement_components(gamma: SimplicialGraph) -> List[List[str]]:
    comp_adj = {v: set() for v in gamma.vertices}
    for u in gamma.vertices:
        for v in gamma.vertices:
            if u < v and not gamma.adjacent(u, v):
                comp_adj[u].add(v)
                comp_adj[v].add(u)
    seen = set()
    out = []
    for v in sorted(gamma.vertices):
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for t in sorted(comp_adj[x]):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        out.append(sorted(comp))
    return out, comp_adj


def complexity(gamma: SimplicialGraph) -> int:
    """Ambient rank of the support graph, from the complement-graph formula."""
    comps, comp_adj = _complement_components(gamma)
    total = 0
    for comp in comps:
        if len(comp) == 1:
            total += 2  # degenerate component: rank-2 free summand
            continue
        es = sum(len(comp_adj[v]) for v in comp) // 2
        val1 = sum(1 for v in comp if len(comp_adj[v]) == 1)
        total += 1 + 2 * es - len(comp) + val1
    return total


def build_support_graph(gamma: SimplicialGraph) -> GraphOfGroups:
    """Barycentric-subdivision construction of the support graph.

    Each complement-graph component is subdivided; subdivision vertices and
    valence-1 original vertices carry rank-1 groups; single-vertex components
    carry a rank-2 group; components are joined by a wedge of intervals, so
    the ambient rank is the underlying Betti number plus the vertex ranks.
    """
    assert len(gamma.vertices) >= 2
    comps, comp_adj = _complement_components(gamma)

    vertices: List[str] = []
    edges: List[Tuple[str, str]] = []
    ranks: Dict[str, int] = {}
    for comp in comps:
        if len(comp) == 1:
            name = f"v|{comp[0]}"
            vertices.append(name)
            ranks[name] = 2
            continue
        for v in comp:
            name = f"v|{v}"
            vertices.append(name)
            ranks[name] = 1 if len(comp_adj[v]) == 1 else 0
        for u in comp:
            for v in sorted(comp_adj[u]):
                if u < v:
                    name = f"e|{u}|{v}"
                    vertices.append(name)
                    ranks[name] = 1
                    edges.append((f"v|{u}", name))
                    edges.append((f"v|{v}", name))
    # wedge of intervals joining component basepoints
    for first, later in zip(comps, comps[1:]):
        edges.append((f"v|{first[0]}", f"v|{later[0]}"))

    # spanning tree of the whole underlying graph, to orient non-tree edges
    adj: Dict[str, List[Tuple[str, int]]] = {v: [] for v in vertices}
    for k, (u, v) in enumerate(edges):
        adj[u].append((v, k))
        adj[v].append((u, k))
    tree_edges = set()
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        x = stack.pop()
        for t, k in sorted(adj[x]):
            if t not in seen:
                seen.add(t)
                tree_edges.add(k)
                stack.append(t)
    assert seen == set(vertices), "support graph must be connected"
    nontree = [k for k in range(len(edges)) if k not in tree_edges]

    # ambient letters: vertex-group generators in vertex order, then loops
    n = sum(ranks[v] for v in vertices) + len(nontree)
    ambient = std_alphabet(n)
    assert n == complexity(gamma), "rank bookkeeping"
    idx = 0
    vertex_words: Dict[str, List[Word]] = {}
    for v in vertices:
        vertex_words[v] = [letter(ambient, idx + r) for r in range(ranks[v])]
        idx += ranks[v]
    loop_letters = {k: letter(ambient, idx + a) for a, k in enumerate(nontree)}

    # G_i = star of v_i: its own group plus adjacent subdivision groups, each
    # conjugated by the connecting edge's loop letter when that edge is untree
    factor_words: List[Tuple[Word, ...]] = []
    used: List[set] = []
    for gv in gamma.vertices:
        name = f"v|{gv}"
        gens: List[Word] = list(vertex_words[name])
        support_letters = {w.letters[0] for w in vertex_words[name]}
        for t, k in sorted(adj[name]):
            if not t.startswith("e|"):
                continue
            conj = loop_letters.get(k)
            for g in vertex_words[t]:
                support_letters.add(g.letters[0])
                gens.append(g if conj is None else g.conjugate_by(conj))
        factor_words.append(tuple(gens))
        used.append(support_letters)
    complement_words = tuple(
        tuple(
            letter(ambient, i)
            for i in range(n)
            if (i + 1) not in used[k]
        )
        for k in range(len(gamma.vertices))
    )

    return GraphOfGroups(
        gamma=gamma,
        vertices=tuple(vertices),
        edges=tuple(edges),
        vertex_ranks=tuple(ranks[v] for v in vertices),
        ambient=ambient,
        vertex_words=tuple(tuple(vertex_words[v]) for v in vertices),
        factor_words=tuple(factor_words),
        complement_words=complement_words,
    )


# --- admissible collections -------------------------------------------------

@dataclass(frozen=True)
class AdmissibleCollection:
    """Pairwise classified factors with their coincidence graph.

    The coincidence graph has an edge (i, j) exactly when A_i and A_j are
    disjoint (sit in a common splitting); overlapping pairs are non-edges.
    """

    names: Tuple[str, ...]
    factors: Tuple[FreeFactorClass, ...]
    gamma: SimplicialGraph
    classifications: Tuple[Tuple[int, int, str], ...]

    def index(self, name: str) -> int:
        return self.names.index(name)


def verify_admissible(
    factors: Sequence[FreeFactorClass], names: Optional[Sequence[str]] = None
) -> AdmissibleCollection:
    """Classify every pair; the verdict must be disjoint or overlap."""
    assert all(A.rank >= 2 for A in factors)
    if names is None:
        names = [f"v{i}" for i in range(len(factors))]
    names = list(names)
    edges = []
    classifications = []
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            verdict, detail = fa.classify_pair(factors[i], factors[j])[:2]
            if verdict == "none":
                raise NotAdmissible((names[i], names[j]), str(detail))
            classifications.append((i, j, verdict))
            if verdict == "disjoint":
                edges.append((names[i], names[j]))
    gamma = simplicial_graph(names, edges)
    return AdmissibleCollection(tuple(names), tuple(factors), gamma, tuple(classifications))


# --- generator systems ------------------------------------------------------

_INNER_SCAN_MARGIN = 2


def restricts_inner_trivially(f: GroupMap, A: FreeFactorClass) -> bool:
    """True when f agrees on A with conjugation by a single element."""
    basis = A.basis()
    b1 = basis[0]
    w0 = conjugacy_witness(b1, f(b1))
    if w0 is None:
        return False
    if len(basis) == 1:
        return True
    bound = max(len(f(b).letters) for b in basis) + _INNER_SCAN_MARGIN
    for t in range(-bound, bound + 1):
        u = w0 * (b1 ** t)
        if all(f(b) == b.conjugate_by(u) for b in basis[1:]):
            return True
    return False


@dataclass(frozen=True)
class AdmissibleSystem:
    collection: AdmissibleCollection
    maps: Tuple[GroupMap, ...]
    power: int
    restriction_hyperbolic: Tuple[bool, ...]

    def map_of(self, name: str) -> GroupMap:
        return self.maps[self.collection.index(name)]


def _extend_seed(
    ambient: Alphabet,
    basis_pair: Sequence[Word],
    complement: Sequence[Word],
    seed: GroupMap,
    power: int,
) -> GroupMap:
    """Automorphism acting by seed^power on the pair, fixing the complement.

    The pair plus complement must form a basis; the action is conjugated back
    to the standard letters through that basis change.
    """
    n = ambient.rank
    full = list(basis_pair) + list(complement)
    assert len(full) == n
    C = verify_automorphism(group_map(ambient, ambient, full))
    sp = map_power(seed, power)
    block = [Word(ambient, w.letters) for w in sp.images] + [
        letter(ambient, k) for k in range(2, n)
    ]
    # rewrite the block through the basis: x_k -> C(block_k(C^{-1} coords))
    S = group_map(ambient, ambient, block)
    out = compose_map(compose_map(C, S), invert_automorphism(C))
    return verify_automorphism(out)


def build_generators(
    collection: AdmissibleCollection,
    seeds: Sequence[GroupMap],
    power: int,
    complements: Sequence[Sequence[Word]],
) -> AdmissibleSystem:
    """Assemble and certify the generator system {f_i}.

    Each f_i is the i-th seed raised to ``power`` on A_i's basis, extended by
    the identity on the designated complement basis.  Certificates: every
    seed's abelianization is hyperbolic; f_i stabilizes each linked A_j with
    inner-trivial restriction; linked pairs commute up to inner.
    """
    factors = collection.factors
    assert len(seeds) == len(factors) == len(complements)
    maps: List[GroupMap] = []
    hyp: List[bool] = []
    for A, seed, comp in zip(factors, seeds, complements):
        assert A.rank == 2, "seed extension needs rank-2 factors"
        m = farey.matrix_of_out(seed)
        if not farey.is_fully_irreducible(m):
            raise NotHyperbolicSeed(f"seed abelianization has trace {m.trace}")
        f = _extend_seed(A.ambient, A.basis(), comp, seed, power)
        maps.append(f)
        hyp.append(power != 0)

    certify_support(collection, maps)
    return AdmissibleSystem(collection, tuple(maps), power, tuple(hyp))


def certify_support(collection: AdmissibleCollection, maps: Sequence[GroupMap]) -> None:
    """Check every support certificate, raising on the first failure."""
    from freefactor.words import is_inner

    factors = collection.factors
    gamma = collection.gamma
    for i, name_i in enumerate(collection.names):
        fi = maps[i]
        if fa.transport(fi, factors[i]) != factors[i]:
            raise SupportViolation(f"f_{name_i} does not stabilize its own factor")
        for j, name_j in enumerate(collection.names):
            if i == j or not gamma.adjacent(name_i, name_j):
                continue
            if fa.transport(fi, factors[j]) != factors[j]:
                raise SupportViolation(
                    f"f_{name_i} does not stabilize linked factor {name_j}"
                )
            if not restricts_inner_trivially(fi, factors[j]):
                raise SupportViolation(
                    f"f_{name_i} is not inner-trivial on linked factor {name_j}"
                )
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if not gamma.adjacent(collection.names[i], collection.names[j]):
                continue
            fi, fj = maps[i], maps[j]
            comm = compose_map(
                compose_map(fi, fj),
                compose_map(invert_automorphism(fi), invert_automorphism(fj)),
            )
            if is_inner(comm) is None:
                raise CommutationViolation(
                    f"[f_{collection.names[i]}, f_{collection.names[j]}] is not inner"
                )


# --- the homomorphism and active factors -----------------------------------

def apply_phi(system: AdmissibleSystem, g: RaagWord) -> GroupMap:
    """φ(g): left-to-right composition of the per-syllable generator powers."""
    out = identity_map(system.collection.factors[0].ambient)
    for syl in g.syllables:
        out = compose_map(out, map_power(system.map_of(syl.gen), syl.exp))
    return out


def active_factor(system: AdmissibleSystem, g: RaagWord, k: int) -> FreeFactorClass:
    """A^g(k): the k-th syllable's factor transported by the prefix map."""
    syls = g.syllables
    assert 0 <= k < len(syls)
    prefix = identity_map(system.collection.factors[0].ambient)
    for syl in syls[:k]:
        prefix = compose_map(prefix, map_power(system.map_of(syl.gen), syl.exp))
    A = system.collection.factors[system.collection.index(syls[k].gen)]
    return fa.transport(verify_automorphism(prefix), A)
