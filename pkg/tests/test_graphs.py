from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rado_lab import (
    Graph,
    GraphFormatError,
    PairKind,
    PartialIso,
    build_ec,
    build_paley,
    check_extension,
    complement_graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    extend_partial_iso,
    find_embeddings,
    format_graph,
    pair_kind,
    parse_graph,
    path_graph,
    switch_graph,
)
from conftest import all_raw_graphs, random_graph


small_graphs = st.integers(min_value=0, max_value=2**15 - 1).map(
    lambda code: Graph.from_edges(
        6, [p for b, p in enumerate(combinations(range(6), 2)) if code >> b & 1]
    )
)


class TestGraphBasics:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 3)])

    def test_edges_sorted(self):
        g = Graph.from_edges(4, [(2, 3), (0, 1), (1, 3)])
        assert list(g.edges()) == [(0, 1), (1, 3), (2, 3)]

    def test_pair_kind(self):
        g = path_graph(3)
        assert pair_kind(g, 0, 0) is PairKind.EQUAL
        assert pair_kind(g, 0, 1) is PairKind.EDGE
        assert pair_kind(g, 0, 2) is PairKind.NONEDGE

    def test_induced(self):
        g = cycle_graph(5)
        sub = g.induced([0, 1, 3])
        assert list(sub.edges()) == [(0, 1)]

    def test_hashable_structural(self):
        assert complete_graph(3) == complete_graph(3)
        assert len({complete_graph(3), complete_graph(3), empty_graph(3)}) == 2


class TestPaley:
    def test_paley5_is_pentagon(self):
        result = build_paley(5)
        assert sorted(result.graph.edges()) == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
        assert result.complement_witness == (0, 2, 4, 1, 3)

    def test_paley5_witness_all_ten_pairs(self):
        result = build_paley(5)
        g, w = result.graph, result.complement_witness
        comp = complement_graph(g)
        for u, v in combinations(range(5), 2):
            assert g.has_edge(u, v) == comp.has_edge(w[u], w[v])

    @pytest.mark.parametrize("q", [13, 17, 29])
    def test_self_complementary_witness(self, q):
        result = build_paley(q)
        g, w = result.graph, result.complement_witness
        assert sorted(w) == list(range(q))
        for u, v in combinations(range(q), 2):
            assert g.has_edge(u, v) != g.has_edge(w[u], w[v])

    def test_paley13_two_extension(self, paley13):
        assert check_extension(paley13.graph, 2).passed

    def test_paley29_three_extension(self, paley29):
        assert check_extension(paley29.graph, 3).passed

    @pytest.mark.parametrize("q", [6, 7, 9, 15, 21])
    def test_rejects_bad_modulus(self, q):
        with pytest.raises(ValueError):
            build_paley(q)


class TestCheckExtension:
    def test_k3_fails_at_least_pair(self):
        # no vertex of a triangle has a non-neighbor
        result = check_extension(complete_graph(3), 1)
        assert not result.passed
        assert result.failing == ((), (0,))

    def test_paley5_fails_k2(self):
        assert not check_extension(build_paley(5).graph, 2).passed

    def test_k1_by_definition(self):
        g = build_ec(1, seed=3)
        for v in range(g.n):
            assert any(g.has_edge(v, w) for w in range(g.n) if w != v)
            assert any(not g.has_edge(v, w) for w in range(g.n) if w != v)

    @given(small_graphs, st.integers(min_value=2, max_value=3))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_k(self, g, k):
        if check_extension(g, k).passed:
            assert check_extension(g, k - 1).passed


class TestBuildEc:
    @pytest.mark.parametrize("k,seed", [(1, 0), (2, 0), (2, 5)])
    def test_passes_requested_level(self, k, seed):
        g = build_ec(k, seed)
        assert check_extension(g, k).passed

    def test_deterministic(self):
        assert build_ec(2, seed=4) == build_ec(2, seed=4)

    def test_budget_error_reports_partial(self):
        with pytest.raises(Exception) as info:
            build_ec(3, seed=0, max_vertices=20)
        assert info.value.partial.n >= 20 or info.value.partial.n <= 80
        assert info.value.failing is not None


class TestEmbeddings:
    def test_single_vertex_everywhere(self):
        host = cycle_graph(5)
        embs = find_embeddings(complete_graph(1), host, 10)
        assert [e.mapping for e in embs] == [(v,) for v in range(5)]

    def test_no_triangle_in_c5(self):
        assert find_embeddings(complete_graph(3), cycle_graph(5), 5) == []

    def test_no_induced_path_in_k3(self):
        assert find_embeddings(path_graph(3), complete_graph(3), 5) == []

    def test_lexicographic_order(self):
        embs = find_embeddings(complete_graph(2), complete_graph(3), 10)
        assert [e.mapping for e in embs] == [
            (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)
        ]

    def test_embeddings_verify(self, paley13):
        for emb in find_embeddings(path_graph(4), paley13.graph, 25):
            assert emb.verify()

    def test_limit_respected(self, paley13):
        assert len(find_embeddings(complete_graph(2), paley13.graph, 7)) == 7


class TestPartialIso:
    def test_empty_extends_to_zero(self, paley13):
        p = PartialIso(paley13.graph, ())
        q = extend_partial_iso(p, 5, 2)
        assert q.pairs == ((5, 0),)

    def test_extends_to_least_neighbor(self, paley13):
        g = paley13.graph
        p = PartialIso(g, ((0, 0),))
        neighbor = next(v for v in range(1, 13) if g.has_edge(0, v))
        q = extend_partial_iso(p, neighbor, 2)
        assert q is not None
        image = q.apply(neighbor)
        assert g.has_edge(0, image)
        assert image == min(v for v in range(13) if g.has_edge(0, v))

    def test_fail_when_no_witness(self):
        # one edge plus an isolated vertex: nothing is adjacent to vertex 2
        g = Graph.from_edges(3, [(0, 1)])
        p = PartialIso(g, ((0, 2),))
        assert extend_partial_iso(p, 1, 1) is None

    def test_property_extends_in_ec_host(self, paley13):
        g = paley13.graph
        for a in range(13):
            for b in range(13):
                p = PartialIso(g, ((a, b),))
                for v in range(13):
                    if v == a:
                        continue
                    q = extend_partial_iso(p, v, 2)
                    assert q is not None and q.verify()


class TestRewrites:
    def test_switch_k3_at_vertex(self):
        g = switch_graph(complete_graph(3), {0})
        assert list(g.edges()) == [(1, 2)]

    def test_switch_empty_makes_star(self):
        g = switch_graph(empty_graph(3), {0})
        assert list(g.edges()) == [(0, 1), (0, 2)]

    def test_switch_identity_cuts(self):
        g = cycle_graph(5)
        assert switch_graph(g, set()) == g
        assert switch_graph(g, range(5)) == g

    def test_complement_k3(self):
        assert complement_graph(complete_graph(3)) == empty_graph(3)

    def test_c5_self_complementary(self):
        g = cycle_graph(5)
        comp = complement_graph(g)
        w = [2 * x % 5 for x in range(5)]
        for u, v in combinations(range(5), 2):
            assert g.has_edge(u, v) == comp.has_edge(w[u], w[v])

    def test_involutions_exhaustive_small(self):
        for n in range(1, 5):
            for g in all_raw_graphs(n):
                assert complement_graph(complement_graph(g)) == g
                for v in range(n):
                    assert switch_graph(switch_graph(g, {v}), {v}) == g

    @given(small_graphs, st.sets(st.integers(min_value=0, max_value=5)))
    @settings(max_examples=60, deadline=None)
    def test_switch_involution(self, g, s):
        assert switch_graph(switch_graph(g, s), s) == g

    def test_involutions_random_8(self):
        for seed in range(10):
            g = random_graph(8, seed)
            assert complement_graph(complement_graph(g)) == g
            assert switch_graph(switch_graph(g, {1, 3}), {1, 3}) == g


class TestTextFormat:
    def test_round_trip(self, paley13):
        g = paley13.graph
        assert parse_graph(format_graph(g)) == g

    def test_format_shape(self):
        assert format_graph(path_graph(3)) == "n 3\n0 1\n1 2\n"

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "x 3\n",
            "n 3\n0 0\n",
            "n 3\n0 5\n",
            "n 3\n1 0\n",
            "n 3\n0 1\n0 1\n",
            "n 3\n0 1 2\n",
            "n 3\na b\n",
        ],
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(GraphFormatError):
            parse_graph(text)
