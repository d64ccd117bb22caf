import random
from itertools import combinations, product

import pytest

from rado_lab import (
    ArrowBudget,
    ArrowQuery,
    CopyColoring,
    PairColor,
    classify_on_set,
    complete_graph,
    cycle_graph,
    empty_graph,
    enumerate_copies,
    find_edge_nonedge_mono_copy,
    find_mono_copy,
    induced_pair_coloring,
    make_named,
    path_graph,
    verify_arrow,
)
from rado_lab.graphs import Graph


def edge_copies(g: Graph):
    return enumerate_copies(g, complete_graph(2))


def pentagon_witness() -> CopyColoring:
    """Cycle edges of K5 colored 0, diagonal edges colored 1."""
    k5 = complete_graph(5)
    cycle_edges = set(cycle_graph(5).edges())
    copies = tuple(edge_copies(k5))
    colors = tuple(0 if c in cycle_edges else 1 for c in copies)
    return CopyColoring(copies, colors, 2)


class TestCopies:
    def test_edges_of_k6(self):
        assert len(edge_copies(complete_graph(6))) == 15

    def test_triangles_of_k6(self):
        assert len(enumerate_copies(complete_graph(6), complete_graph(3))) == 20

    def test_order_is_sorted_lex(self):
        copies = edge_copies(complete_graph(4))
        assert copies == sorted(copies)

    def test_induced_only(self):
        # no induced path on three vertices inside a triangle
        assert enumerate_copies(complete_graph(3), path_graph(3)) == []

    def test_ordered_restriction(self):
        host = path_graph(3)
        plain = enumerate_copies(host, path_graph(2))
        ordered = enumerate_copies(host, path_graph(2), ordered=True)
        assert plain == ordered  # symmetric pattern: same sets either way


class TestFindMonoCopy:
    def test_single_color_trivial(self):
        k4 = complete_graph(4)
        copies = tuple(edge_copies(k4))
        chi = CopyColoring(copies, (0,) * len(copies), 1)
        emb = find_mono_copy(k4, complete_graph(3), complete_graph(2), chi)
        assert emb is not None
        assert emb.mapping == (0, 1, 2)

    def test_k6_always_finds_triangle(self):
        k6 = complete_graph(6)
        copies = tuple(edge_copies(k6))
        rng = random.Random(0)
        for _ in range(50):
            chi = CopyColoring(
                copies, tuple(rng.randrange(2) for _ in copies), 2
            )
            assert find_mono_copy(k6, complete_graph(3), complete_graph(2), chi) is not None

    def test_pentagon_split_has_no_mono_triangle(self):
        assert (
            find_mono_copy(
                complete_graph(5), complete_graph(3), complete_graph(2), pentagon_witness()
            )
            is None
        )

    def test_holds_soundness_spot_check(self):
        # a holding arrow means every random coloring admits a mono copy
        k6 = complete_graph(6)
        assert verify_arrow(ArrowQuery(k6, complete_graph(3), complete_graph(2), 2)).verdict == "holds"
        copies = tuple(edge_copies(k6))
        rng = random.Random(1)
        for _ in range(1000):
            chi = CopyColoring(copies, tuple(rng.randrange(2) for _ in copies), 2)
            assert find_mono_copy(k6, complete_graph(3), complete_graph(2), chi) is not None


class TestVerifyArrow:
    def test_k6_arrow_holds(self):
        result = verify_arrow(ArrowQuery(complete_graph(6), complete_graph(3), complete_graph(2), 2))
        assert result.verdict == "holds"
        assert result.stats["colorings_checked"] == 2**14

    def test_k5_arrow_fails_with_verified_witness(self):
        result = verify_arrow(ArrowQuery(complete_graph(5), complete_graph(3), complete_graph(2), 2))
        assert result.verdict == "fails"
        witness = result.witness
        assert find_mono_copy(
            complete_graph(5), complete_graph(3), complete_graph(2), witness
        ) is None
        # both color classes of the unique bad coloring are 5-cycles
        for color in (0, 1):
            class_edges = [c for c, col in zip(witness.copies, witness.colors) if col == color]
            assert len(class_edges) == 5
            degree = {v: 0 for v in range(5)}
            for u, v in class_edges:
                degree[u] += 1
                degree[v] += 1
            assert all(d == 2 for d in degree.values())

    def test_single_color_holds(self):
        g = cycle_graph(5)
        assert verify_arrow(ArrowQuery(g, g, complete_graph(2), 1)).verdict == "holds"

    def test_vacuous_query_flagged(self):
        q = ArrowQuery(complete_graph(4), complete_graph(2), complete_graph(3), 2)
        assert q.vacuous

    def test_antitone_witness_transport(self):
        # a failing coloring on K5 restricts to a failing coloring on K4
        k5_result = verify_arrow(ArrowQuery(complete_graph(5), complete_graph(3), complete_graph(2), 2))
        assert k5_result.verdict == "fails"
        k4 = complete_graph(4)
        restricted_copies = tuple(edge_copies(k4))
        restricted_colors = tuple(
            k5_result.witness.color_of(c) for c in restricted_copies
        )
        chi = CopyColoring(restricted_copies, restricted_colors, 2)
        assert find_mono_copy(k4, complete_graph(3), complete_graph(2), chi) is None
        assert verify_arrow(ArrowQuery(k4, complete_graph(3), complete_graph(2), 2)).verdict == "fails"

    def test_pruning_matches_unpruned_brute_force(self):
        # small instances: compare against enumeration over all k^m colorings
        instances = [
            (complete_graph(4), complete_graph(3), complete_graph(2), 2),
            (cycle_graph(5), path_graph(3), complete_graph(2), 2),
            (complete_graph(4), path_graph(3), complete_graph(2), 3),
        ]
        for s, h, p, k in instances:
            p_copies = enumerate_copies(s, p)
            h_copies = enumerate_copies(s, h)
            exists_bad = False
            for colors in product(range(k), repeat=len(p_copies)):
                chi = dict(zip(p_copies, colors))
                good = False
                for hc in h_copies:
                    inner = {chi[c] for c in p_copies if set(c) <= set(hc)}
                    if len(inner) <= 1:
                        good = True
                        break
                if not good:
                    exists_bad = True
                    break
            verdict = verify_arrow(ArrowQuery(s, h, p, k)).verdict
            assert verdict == ("fails" if exists_bad else "holds")

    def test_coloring_budget(self):
        q = ArrowQuery(complete_graph(6), complete_graph(3), complete_graph(2), 2)
        result = verify_arrow(q, ArrowBudget(colorings=100))
        assert result.verdict == "budget_exceeded"
        assert result.stats["colorings_total"] == 2**14

    def test_copy_budget(self):
        q = ArrowQuery(complete_graph(6), complete_graph(3), complete_graph(2), 2)
        result = verify_arrow(q, ArrowBudget(copies=5))
        assert result.verdict == "budget_exceeded"

    def test_partitioned_structures(self):
        from rado_lab import PartitionedGraph

        # part-respecting copies: coloring cross edges of a bipartite-ish host
        host = PartitionedGraph(
            complete_graph(6), (frozenset({0, 1, 2}), frozenset({3, 4, 5}))
        )
        pattern = PartitionedGraph(
            complete_graph(2), (frozenset({0}), frozenset({1}))
        )
        goal = PartitionedGraph(
            complete_graph(4), (frozenset({0, 1}), frozenset({2, 3}))
        )
        copies = enumerate_copies(host, pattern)
        assert len(copies) == 9  # only cross pairs
        result = verify_arrow(ArrowQuery(host, goal, pattern, 1))
        assert result.verdict == "holds"

    def test_constant_structures(self):
        from rado_lab import ConstantGraph

        host = ConstantGraph(complete_graph(5), (0,))
        pattern = ConstantGraph(complete_graph(2), (0,))
        copies = enumerate_copies(host, pattern)
        # the constant must map to the host constant
        assert copies == [(0, v) for v in range(1, 5)]

    def test_ordered_arrow(self):
        from rado_lab import Graph

        # ordered edge pattern: a directed-looking constraint on copies
        host = complete_graph(4)
        result = verify_arrow(
            ArrowQuery(host, complete_graph(3), complete_graph(2), 2, ordered=True)
        )
        assert result.verdict in ("holds", "fails")


class TestEdgeNonedgeSearch:
    def test_constant_colorings_least_copy(self, paley13):
        g = paley13.graph
        chi_e = {e: 0 for e in g.edges()}
        chi_n = {p: 0 for p in g.nonedges()}
        emb = find_edge_nonedge_mono_copy(g, path_graph(3), chi_e, chi_n)
        assert emb is not None
        from rado_lab import find_embeddings

        assert emb.mapping == find_embeddings(path_graph(3), g, 1)[0].mapping

    def test_single_edge_pattern(self, paley13):
        g = paley13.graph
        chi_e = {e: (e[0] + e[1]) % 2 for e in g.edges()}
        chi_n = {p: 0 for p in g.nonedges()}
        emb = find_edge_nonedge_mono_copy(g, complete_graph(2), chi_e, chi_n)
        assert emb is not None
        assert emb.mapping == (0, 1)  # vacuous non-edge condition, least copy

    def test_residue_coloring_on_paley13(self, paley13):
        g = paley13.graph
        chi_e = {e: (e[0] + e[1]) % 2 for e in g.edges()}
        chi_n = {p: (p[0] + p[1]) % 2 for p in g.nonedges()}
        emb = find_edge_nonedge_mono_copy(g, path_graph(3), chi_e, chi_n)
        assert emb is not None
        image = sorted(emb.mapping)
        e_colors = {
            chi_e[(u, v)]
            for u, v in combinations(image, 2)
            if g.has_edge(u, v)
        }
        n_colors = {
            chi_n[(u, v)]
            for u, v in combinations(image, 2)
            if not g.has_edge(u, v)
        }
        assert len(e_colors) == 1 and len(n_colors) == 1

    def test_missing_color_rejected(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            find_edge_nonedge_mono_copy(g, complete_graph(2), {}, {})


class TestInducedColoring:
    def test_identity(self, paley13):
        f = make_named("identity", paley13.graph)
        chi_e, chi_n = induced_pair_coloring(f)
        assert set(chi_e.values()) == {PairColor.EDGE}
        assert set(chi_n.values()) == {PairColor.NONEDGE}

    def test_const(self):
        f = make_named("const", cycle_graph(5), target=1)
        chi_e, chi_n = induced_pair_coloring(f)
        assert set(chi_e.values()) == {PairColor.COLLAPSED}
        assert set(chi_n.values()) == {PairColor.COLLAPSED}

    def test_minus(self, paley13):
        f = make_named("minus", paley13.graph)
        chi_e, chi_n = induced_pair_coloring(f)
        assert set(chi_e.values()) == {PairColor.NONEDGE}
        assert set(chi_n.values()) == {PairColor.EDGE}

    def test_partial_domain_rejected(self):
        f = make_named("identity", cycle_graph(5), dom=(0, 1))
        with pytest.raises(ValueError):
            induced_pair_coloring(f)

    def test_composition_with_copy_search_classifies(self, paley13):
        # the computational shape of the behavior-interpolation argument:
        # color pairs by what f does, find a copy both colorings are constant
        # on, classify f there; the class set is determined or a pair
        g = paley13.graph
        pattern = path_graph(3)
        gadgets = [
            make_named("identity", g),
            make_named("minus", g),
            make_named("eN", g, dst=empty_graph(13)),
            make_named("const", g, target=0),
        ]
        for f in gadgets:
            chi_e, chi_n = induced_pair_coloring(f)
            emb = find_edge_nonedge_mono_copy(g, pattern, chi_e, chi_n)
            assert emb is not None
            classes = classify_on_set(f, emb.image())
            assert 1 <= len(classes) <= 2
