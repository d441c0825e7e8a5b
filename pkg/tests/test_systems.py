import itertools

import pytest

from freefactor import factors as fc, raag, stallings, systems as sy
from freefactor.errors import NotAdmissible, NotHyperbolicSeed, SupportViolation
from freefactor.words import (
    abc_alphabet,
    compose_map,
    group_map,
    invert_automorphism,
    is_inner,
    letter,
    std_alphabet,
    word_from_str,
)

PENT = raag.pentagon()
F5 = std_alphabet(5)
A2 = std_alphabet(2)
SEED = group_map(A2, A2, [word_from_str(A2, "x0 x0 x1"), word_from_str(A2, "x0 x1")])


def pentagon_factors():
    return [
        fc.free_factor_class(F5, [letter(F5, i), letter(F5, (i + 1) % 5)], verified=True)
        for i in range(5)
    ]


def pentagon_complements():
    return [
        [letter(F5, (i + 2) % 5), letter(F5, (i + 3) % 5), letter(F5, (i + 4) % 5)]
        for i in range(5)
    ]


def pentagon_system(power=1):
    coll = sy.verify_admissible(pentagon_factors())
    return sy.build_generators(coll, [SEED] * 5, power, pentagon_complements())


class TestComplexity:
    def test_pentagon(self):
        assert sy.complexity(PENT) == 6

    def test_two_isolated_vertices(self):
        g = raag.simplicial_graph(["a", "b"], [])
        assert sy.complexity(g) == 3

    def test_single_edge(self):
        g = raag.simplicial_graph(["a", "b"], [("a", "b")])
        assert sy.complexity(g) == 4

    def test_matches_build_exhaustive_small(self):
        import networkx as nx

        for g in nx.graph_atlas_g():
            n = g.number_of_nodes()
            if n < 2 or n > 6:
                continue
            names = [f"u{i}" for i in range(n)]
            sg = raag.simplicial_graph(names, [(f"u{a}", f"u{b}") for a, b in g.edges()])
            built = sy.build_support_graph(sg)
            assert built.ambient_rank == sy.complexity(sg)


class TestSupportGraph:
    def test_pentagon_shape(self):
        G = sy.build_support_graph(PENT)
        assert G.ambient_rank == 6
        assert len(G.vertices) == 10
        assert len(G.edges) == 10
        assert sum(1 for r in G.vertex_ranks if r == 1) == 5
        assert all(G.factor(i).rank == 2 for i in range(5))

    def test_two_vertices_no_edge(self):
        g = raag.simplicial_graph(["a", "b"], [])
        G = sy.build_support_graph(g)
        assert G.ambient_rank == 3
        A, B = G.factor(0), G.factor(1)
        meets = fc.meet_projection(A, B)
        assert len(meets) == 1 and next(iter(meets)).rank == 1

    def test_single_edge_disjoint_summands(self):
        g = raag.simplicial_graph(["a", "b"], [("a", "b")])
        G = sy.build_support_graph(g)
        assert G.ambient_rank == 4
        A, B = G.factor(0), G.factor(1)
        assert not stallings.pullback_components(A.graph, B.graph)
        assert fc.disjoint_check(A, B)

    def test_coincidence_pattern_pentagon(self):
        G = sy.build_support_graph(PENT)
        facs = [G.factor(i) for i in range(5)]
        for i in range(5):
            for j in range(i + 1, 5):
                nonempty = bool(stallings.pullback_components(facs[i].graph, facs[j].graph))
                assert nonempty == (not PENT.adjacent(PENT.vertices[i], PENT.vertices[j]))

    def test_factor_plus_complement_is_basis(self):
        G = sy.build_support_graph(PENT)
        for i in range(5):
            gens = list(G.factor_words[i]) + list(G.complement_words[i])
            assert stallings.is_full_rose(stallings.from_generators(G.ambient, gens))


class TestVerifyAdmissible:
    def test_overlapping_family_edgeless(self):
        F3 = abc_alphabet(3)
        facs = [
            fc.free_factor_class(
                F3, [word_from_str(F3, "a"), word_from_str(F3, f"{'b ' * i}c")]
            )
            for i in range(4)
        ]
        coll = sy.verify_admissible(facs)
        assert not coll.gamma.edges
        assert all(v == "overlap" for _, _, v in coll.classifications)

    def test_disjoint_pair_one_edge(self):
        F4 = abc_alphabet(4)
        A = fc.free_factor_class(F4, [word_from_str(F4, "a"), word_from_str(F4, "b")])
        B = fc.free_factor_class(F4, [word_from_str(F4, "c"), word_from_str(F4, "d")])
        coll = sy.verify_admissible([A, B])
        assert len(coll.gamma.edges) == 1

    def test_duplicate_not_admissible(self):
        facs = pentagon_factors()
        with pytest.raises(NotAdmissible):
            sy.verify_admissible([facs[0], facs[0]])

    def test_example2_coincidence_is_pentagon_complement(self):
        coll = sy.verify_admissible(pentagon_factors())
        edges = set(map(frozenset, coll.gamma.edges))
        assert edges == {
            frozenset((f"v{i}", f"v{(i + 2) % 5}")) for i in range(5)
        }


class TestBuildGenerators:
    def test_certificates_pass(self):
        system = pentagon_system(power=2)
        assert all(system.restriction_hyperbolic)
        f0 = system.maps[0]
        # acts only on the first two letters
        for k in range(2, 5):
            assert f0(letter(F5, k)) == letter(F5, k)

    def test_power_zero_identity(self):
        system = pentagon_system(power=0)
        assert not any(system.restriction_hyperbolic)
        assert all(f.is_identity() for f in system.maps)

    def test_parabolic_seed_rejected(self):
        coll = sy.verify_admissible(pentagon_factors())
        parab = group_map(A2, A2, [word_from_str(A2, "x0 x1"), word_from_str(A2, "x1")])
        with pytest.raises(NotHyperbolicSeed):
            sy.build_generators(coll, [parab] * 5, 1, pentagon_complements())

    def test_nonlinked_commutator_not_inner(self):
        system = pentagon_system(power=1)
        f0, f1 = system.maps[0], system.maps[1]  # overlapping factors
        comm = compose_map(
            compose_map(f0, f1),
            compose_map(invert_automorphism(f0), invert_automorphism(f1)),
        )
        assert is_inner(comm) is None

    def test_linked_commutator_inner(self):
        system = pentagon_system(power=1)
        f0, f2 = system.maps[0], system.maps[2]  # disjoint factors
        comm = compose_map(
            compose_map(f0, f2),
            compose_map(invert_automorphism(f0), invert_automorphism(f2)),
        )
        assert is_inner(comm) is not None

    def test_support_graph_system(self):
        G = sy.build_support_graph(PENT)
        coll = sy.verify_admissible(
            [G.factor(i) for i in range(5)], names=list(PENT.vertices)
        )
        system = sy.build_generators(
            coll, [SEED] * 5, 1, [list(c) for c in G.complement_words]
        )
        assert all(system.restriction_hyperbolic)

    def test_bad_complement_raises(self):
        coll = sy.verify_admissible(pentagon_factors())
        from freefactor.errors import NotSurjective

        bad = pentagon_complements()
        bad[0] = [letter(F5, 0), letter(F5, 3), letter(F5, 4)]  # not a basis
        with pytest.raises((NotSurjective, AssertionError)):
            sy.build_generators(coll, [SEED] * 5, 1, bad)


class TestRestrictsInnerTrivially:
    def test_identity(self):
        from freefactor.words import identity_map

        A = pentagon_factors()[0]
        assert sy.restricts_inner_trivially(identity_map(F5), A)

    def test_conjugation(self):
        from freefactor.words import conjugation_by

        A = pentagon_factors()[0]
        assert sy.restricts_inner_trivially(conjugation_by(word_from_str(F5, "x2 x0")), A)

    def test_genuine_action(self):
        system = pentagon_system(power=1)
        facs = pentagon_factors()
        assert not sy.restricts_inner_trivially(system.maps[0], facs[0])
        assert not sy.restricts_inner_trivially(system.maps[0], facs[1])
        assert sy.restricts_inner_trivially(system.maps[0], facs[2])


class TestPhi:
    def test_single_syllable_active(self):
        system = pentagon_system(power=1)
        facs = pentagon_factors()
        gamma = system.collection.gamma
        g = raag.normalize(gamma, raag.raag_word_from_str(gamma, "v3^2"))
        assert sy.active_factor(system, g, 0) == facs[3]

    def test_linked_prefix_acts_trivially(self):
        system = pentagon_system(power=1)
        facs = pentagon_factors()
        gamma = system.collection.gamma
        g = raag.normalize(gamma, raag.raag_word_from_str(gamma, "v0 v2"))
        assert sy.active_factor(system, g, 1) == facs[2]

    def test_well_defined_across_min_set(self):
        system = pentagon_system(power=1)
        gamma = system.collection.gamma
        g = raag.normalize(gamma, raag.raag_word_from_str(gamma, "v0 v2 v4^-1 v1"))
        members = raag.min_set(gamma, g)
        reference = {
            (s.gen, s.exp): sy.active_factor(system, g, k).key
            for k, s in enumerate(g.syllables)
        }
        for m in members:
            got = {
                (s.gen, s.exp): sy.active_factor(system, m, k).key
                for k, s in enumerate(m.syllables)
            }
            assert got == reference

    def test_phi_homomorphism_on_commuting_pair(self):
        system = pentagon_system(power=1)
        gamma = system.collection.gamma
        g1 = raag.normalize(gamma, raag.raag_word_from_str(gamma, "v0 v2"))
        g2 = raag.normalize(gamma, raag.raag_word_from_str(gamma, "v2 v0"))
        p1, p2 = sy.apply_phi(system, g1), sy.apply_phi(system, g2)
        assert p1.images == p2.images  # disjoint supports commute exactly
