"""Free-factor predicates and projections: meet, overlap, disjoint,
Whitehead free-factor testing, and transport under automorphisms."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Set, Tuple

from freefactor import stallings
from freefactor.errors import AmbientTooLarge
from freefactor.stallings import SubgroupGraph, from_generators, pullback_components
from freefactor.words import Alphabet, GroupMap, Word, group_map, identity, letter, reduce_raw

MAX_WHITEHEAD_RANK = 6
DOUBLE_COSET_SEARCH_LENGTH = 3


@dataclass(frozen=True)
class FreeFactorClass:
    """Conjugacy class of a free factor, keyed by its canonical core."""

    ambient: Alphabet
    graph: SubgroupGraph
    key: str
    verified_free_factor: bool = False

    @property
    def rank(self) -> int:
        return self.graph.rank

    def basis(self) -> List[Word]:
        return self.graph.basis()

    def __eq__(self, other):
        return isinstance(other, FreeFactorClass) and self.key == other.key and self.ambient == other.ambient

    def __hash__(self):
        return hash((self.ambient, self.key))


def free_factor_class(alphabet: Alphabet, gens: Sequence[Word], verified: bool = False) -> FreeFactorClass:
    g = from_generators(alphabet, list(gens))
    assert g.rank >= 1, "factor classes have rank >= 1"
    return FreeFactorClass(alphabet, g, stallings.canonical_core(g), verified)


@dataclass(frozen=True)
class MeetClass:
    """A nontrivial proper intersection class [A ∩ gBg⁻¹], viewed inside A."""

    in_ambient: FreeFactorClass
    gens_in_A: Tuple[Word, ...]   # words over A's spanning-tree basis alphabet
    coset_tag: Word
    rank: int


def _meet_candidates(A: FreeFactorClass, B: FreeFactorClass) -> List[MeetClass]:
    out = []
    for comp in pullback_components(A.graph, B.graph):
        cls = FreeFactorClass(
            A.ambient, comp.subgroup, stallings.canonical_core(comp.subgroup)
        )
        out.append(MeetClass(cls, comp.gens_in_A, comp.coset_tag, comp.rank))
    return out


def meet_projection(A: FreeFactorClass, B: FreeFactorClass) -> Set[MeetClass]:
    """π_A(B): double-coset intersection classes, nontrivial and proper in both.

    Properness is tested by rank (1 <= r < min of the two ranks) together with
    canonical-key inequality against A and B.
    """
    assert A.rank >= 2
    keep = set()
    seen_keys = set()
    for mc in _meet_candidates(A, B):
        if not (1 <= mc.rank < min(A.rank, B.rank)):
            continue
        if mc.in_ambient.key in (A.key, B.key):
            continue
        if mc.in_ambient.key in seen_keys:
            continue
        seen_keys.add(mc.in_ambient.key)
        keep.add(mc)
    return keep


def overlap_check(A: FreeFactorClass, B: FreeFactorClass):
    """First (x, H) certificate with rank(H) = rank A + rank B - rank x, or None."""
    assert A.rank >= 2 and B.rank >= 2
    for mc in sorted(_meet_candidates(A, B), key=lambda m: (m.rank, m.in_ambient.key)):
        if not (1 <= mc.rank < min(A.rank, B.rank)):
            continue
        g = mc.coset_tag
        conj_b = [w.conjugate_by(g) for w in B.basis()]
        H = from_generators(A.ambient, A.basis() + conj_b)
        if H.rank == A.rank + B.rank - mc.rank:
            return mc, H
    return None


def _short_words(alphabet: Alphabet, max_len: int) -> List[Word]:
    out = [identity(alphabet)]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for t in frontier:
            for s in range(1, alphabet.rank + 1):
                for sg in (s, -s):
                    if t and t[-1] == -sg:
                        continue
                    u = t + (sg,)
                    nxt.append(u)
                    out.append(Word(alphabet, u))
        frontier = nxt
    return out


def disjoint_check(A: FreeFactorClass, B: FreeFactorClass) -> bool:
    """True iff A and B can be seen as vertex groups of a common splitting.

    Requires every double coset to intersect trivially, then searches short
    coset representatives g for a certificate: rank additivity of the join
    plus the join being a free factor.
    """
    assert A.rank >= 2 and B.rank >= 2
    if pullback_components(A.graph, B.graph):
        return False
    for g in _short_words(A.ambient, DOUBLE_COSET_SEARCH_LENGTH):
        conj_b = [w.conjugate_by(g) for w in B.basis()]
        # the pullback is empty, so A ∩ gBg⁻¹ = 1 for every g
        H = from_generators(A.ambient, A.basis() + conj_b)
        if H.rank != A.rank + B.rank:
            continue
        if is_free_factor(H):
            return True
    return False


def _whitehead_moves(alphabet: Alphabet):
    """All type-(ii) Whitehead automorphisms (Y, v): v in Y, -v not in Y."""
    n = alphabet.rank
    signed = [s for i in range(1, n + 1) for s in (i, -i)]
    for v in signed:
        others = [s for s in signed if s != v and s != -v]
        for mask in range(1 << len(others)):
            Y = {v}
            for k, s in enumerate(others):
                if mask >> k & 1:
                    Y.add(s)
            images = []
            for x in range(1, n + 1):
                if x == abs(v):
                    images.append(Word(alphabet, (abs(v),)))
                    continue
                pre = (-v,) if -x in Y else ()
                post = (v,) if x in Y else ()
                images.append(reduce_raw(alphabet, pre + (x,) + post))
            yield group_map(alphabet, alphabet, images)


def _core_size(alphabet: Alphabet, gens: Sequence[Word]) -> Tuple[int, SubgroupGraph]:
    g = from_generators(alphabet, list(gens))
    return g.num_edges, g


def _is_subrose(g: SubgroupGraph) -> bool:
    if g.num_vertices != 1:
        return False
    letters = set()
    for s in g.adj[0]:
        letters.add(abs(s))
    return g.num_edges == len(letters)


def is_free_factor(H: SubgroupGraph) -> bool:
    """Greedy Whitehead descent on the core edge count; free factor iff the
    local minimum is a subrose (single vertex, loops on distinct generators)."""
    alphabet = H.alphabet
    if alphabet.rank > MAX_WHITEHEAD_RANK:
        raise AmbientTooLarge(f"ambient rank {alphabet.rank} exceeds {MAX_WHITEHEAD_RANK}")
    gens = H.basis()
    size, graph = _core_size(alphabet, gens)
    improved = True
    while improved:
        improved = False
        for move in _whitehead_moves(alphabet):
            cand = [move(w) for w in gens]
            cand_size, cand_graph = _core_size(alphabet, cand)
            if cand_size < size:
                gens, size, graph = cand, cand_size, cand_graph
                improved = True
                break
    return _is_subrose(graph)


def transport(f: GroupMap, A: FreeFactorClass) -> FreeFactorClass:
    """Image class f(A); canonical key recomputed."""
    assert f.kind == "verified-automorphism", "transport requires a verified automorphism"
    assert f.domain == A.ambient
    return free_factor_class(f.codomain, [f(w) for w in A.basis()], verified=A.verified_free_factor)


def classify_pair(A: FreeFactorClass, B: FreeFactorClass):
    """Trichotomy verdict: ("disjoint" | "overlap", witness) or ("none", detail)."""
    if pullback_components(A.graph, B.graph):
        cert = overlap_check(A, B)
        if cert is not None:
            return "overlap", cert
        return "none", "nontrivial intersections but no amalgam rank certificate"
    if disjoint_check(A, B):
        return "disjoint", None
    return "none", "trivial intersections but no common-splitting certificate"
