import dataclasses
import math

import networkx as nx
import numpy as np
import pytest

from edgetail import (DomainError, Graph, RegimeParams, check_event_A1,
                      check_event_A2, check_event_B, check_event_C,
                      check_event_D, check_event_T, check_trees_event,
                      degree_order_stats, degree_partition,
                      degree_ranked_vertices, derived_seed,
                      expected_tree_count_bound, log_expected_tree_count,
                      prune_and_center, read_graph_text, remove_cycles,
                      sample_gnp, star_decompose, star_forest_ok,
                      write_decomposition_bundle)
from edgetail import test_decreasing as decreasing_probe

RP = RegimeParams.compute(200, 0.02)


def _rp(**overrides):
    return dataclasses.replace(RP, **overrides)


def _union(*graphs):
    n = max(g.n for g in graphs)
    edges = sorted(set().union(*(g.edge_set() for g in graphs)))
    return Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def _shift(g, offset, n):
    e = g.edge_array + offset
    return Graph(n, e, _validated=True)


class TestDegreeOrder:
    def test_order_stats(self):
        g = Graph.star(3)
        assert list(degree_order_stats(g)) == [3, 1, 1, 1]

    def test_ranked_vertices(self):
        g = Graph(5, np.array([[0, 1], [1, 2], [1, 3], [2, 3]]))
        # degrees: 1, 3, 2, 2, 0; ties broken by label
        assert list(degree_ranked_vertices(g)) == [1, 2, 3, 0, 4]


class TestRemoveCycles:
    def test_cycle_plus_pendant(self):
        g = _union(Graph.cycle(4), Graph(5, np.array([[0, 4]])))
        reduced, removed, counts = remove_cycles(g)
        assert len(removed) == 1 and sorted(removed[0]) == [0, 1, 2, 3]
        assert reduced.m == 1 and reduced.has_edge(0, 4)
        assert list(counts) == [1, 1, 1, 1, 0]

    def test_bowtie(self):
        g = Graph(5, np.array([[0, 1], [0, 2], [1, 2], [0, 3], [0, 4], [3, 4]]))
        reduced, removed, counts = remove_cycles(g)
        assert len(removed) == 2 and reduced.m == 0
        assert counts[0] == 2

    def test_cap_respects_length(self):
        c6 = Graph.cycle(6)
        reduced, removed, _ = remove_cycles(c6, length_cap=5)
        assert removed == [] and reduced == c6
        reduced, removed, _ = remove_cycles(c6, length_cap=6)
        assert len(removed) == 1 and reduced.m == 0

    def test_edge_accounting_and_disjointness(self):
        for t in range(8):
            g = sample_gnp(60, 0.08, derived_seed(101, t))
            reduced, removed, counts = remove_cycles(g)
            cyc_edges = set()
            for cyc in removed:
                for i, u in enumerate(cyc):
                    v = cyc[(i + 1) % len(cyc)]
                    e = (min(u, v), max(u, v))
                    assert e not in cyc_edges  # edge-disjoint
                    cyc_edges.add(e)
            assert cyc_edges <= g.edge_set()
            assert reduced.edge_set() == g.edge_set() - cyc_edges
            assert sum(counts) == sum(len(c) for c in removed)
            # uncapped removal leaves a forest
            assert reduced.m == sum(len(c) - 1 for c in reduced.components())

    def test_capped_removal_kills_short_cycles(self):
        cap = 5
        for t in range(6):
            g = sample_gnp(50, 0.1, derived_seed(111, t))
            reduced, _, _ = remove_cycles(g, length_cap=cap)
            gx = nx.Graph(list(map(tuple, reduced.edge_array.tolist())))
            basis = nx.minimum_cycle_basis(gx)
            assert all(len(c) > cap for c in basis)

    def test_deterministic(self):
        g = sample_gnp(40, 0.1, 77)
        a = remove_cycles(g)
        b = remove_cycles(g)
        assert a[0] == b[0] and a[1] == b[1]


class TestDegreePartition:
    def test_star_and_triangle(self):
        # star center is high, triangle is moderate, leaves are low
        g = _union(Graph.star(4),
                   _shift(Graph.cycle(3), 5, 8))
        part = degree_partition(g, _rp(high_cut=3.0, moderate_cut=1.5))
        assert part.x1 == (0,)
        assert part.x2 == (5, 6, 7)
        assert part.y == (1, 2, 3, 4)
        assert part.t1 == (1, 2, 3, 4) and part.t2 == ()

    def test_cross_cycle_pruned(self):
        # the 4-cycle between high and low classes is deleted before the
        # degree-one test, so nothing survives into t1
        g = Graph(4, np.array([[0, 1], [0, 2], [0, 3], [1, 2], [1, 3]]))
        part = degree_partition(g, _rp(high_cut=3.0, moderate_cut=2.5))
        assert part.x1 == (0, 1)
        assert part.y == (2, 3)
        assert part.t1 == () and part.t2 == (2, 3)

    def test_classes_partition_vertices(self):
        g = sample_gnp(200, 0.02, 5)
        part = degree_partition(g, RP)
        all_classes = part.x1 + part.x2 + part.y
        assert sorted(all_classes) == list(range(200))
        assert sorted(part.t1 + part.t2) == sorted(part.y)


class TestStarDecompose:
    @pytest.mark.parametrize("seed", [1, 2, 3, 4])
    def test_invariants(self, seed):
        g = sample_gnp(200, 0.02, seed)
        d = star_decompose(g, RP)
        f1e, f2e = d.f1.edge_set(), d.f2.edge_set()
        assert f1e | f2e == g.edge_set()
        assert not (f1e & f2e)
        assert star_forest_ok(d.f1)
        assert set(d.provenance) == g.edge_set()
        tags = set(d.provenance.values())
        assert tags <= {"F1", "F2-G1", "F2-G2", "F2-G4", "F2-G32",
                        "H1", "H3", "H4"}
        assert d.h.edge_set() <= f2e
        for cyc in d.cycles:
            for i, u in enumerate(cyc):
                v = cyc[(i + 1) % len(cyc)]
                assert d.h.has_edge(min(u, v), max(u, v))
        f1_tagged = {e for e, t in d.provenance.items() if t == "F1"}
        assert f1_tagged == f1e

    def test_star_forest_ok(self):
        assert star_forest_ok(Graph.star(5))
        assert star_forest_ok(Graph(4))
        assert not star_forest_ok(Graph.path(4))  # two centers
        assert not star_forest_ok(Graph.cycle(3))

    def test_bundle_roundtrip(self, tmp_path):
        g = sample_gnp(120, 0.03, 9)
        d = star_decompose(g, RP)
        write_decomposition_bundle(d, tmp_path)
        assert read_graph_text(tmp_path / "f1.edges") == d.f1
        assert read_graph_text(tmp_path / "f2.edges") == d.f2
        rows = (tmp_path / "provenance.csv").read_text().strip().split("\n")
        assert rows[0] == "u,v,tag" and len(rows) == g.m + 1
        cyc_rows = (tmp_path / "cycles.txt").read_text().strip()
        want = len(d.cycles)
        assert (len(cyc_rows.split("\n")) if cyc_rows else 0) == want


def _pendant_cycle(k, decorated):
    """Cycle of length k with one extra leaf on each decorated vertex."""
    edges = [(i, (i + 1) % k) for i in range(k)]
    nxt = k
    for v in decorated:
        edges.append((v, nxt))
        nxt += 1
    arr = np.array([(min(e), max(e)) for e in edges])
    return Graph(nxt, arr)


class TestEvents:
    def test_a1_witnessed(self):
        g = _pendant_cycle(6, [0, 2, 4])
        rp = _rp(high_cut=3.0, moderate_cut=3.0, long_cycle_len=5)
        rep = check_event_A1(g, rp)
        assert rep.holds is True
        assert sorted(rep.witness) == [0, 1, 2, 3, 4, 5]
        assert rep.params_used["min_length"] == 5

    def test_a1_too_short(self):
        rep = check_event_A1(Graph.cycle(4), _rp(), min_length=5)
        assert rep.holds is False and rep.witness is None

    def test_a1_budget_exhausted(self):
        rep = check_event_A1(Graph.complete(6), _rp(), min_length=30,
                             budget=3)
        assert rep.holds is None

    def test_a2(self):
        g = Graph.complete(6)
        rp = _rp(high_cut=2.0, moderate_cut=2.0)
        assert check_event_A2(g, rp, threshold=4).holds is True
        # threshold comparison is strict
        assert check_event_A2(g, rp, threshold=5).holds is False
        rep = check_event_A2(g, _rp(high_cut=2.0, moderate_cut=2.0,
                                    delta_p=4))
        assert rep.holds is True
        assert rep.params_used["threshold"] == pytest.approx(4 ** 0.875)

    def test_b(self):
        def bouquet(k):
            edges = []
            nxt = 1
            for _ in range(k):
                edges += [(0, nxt), (0, nxt + 1), (nxt, nxt + 1)]
                nxt += 2
            return Graph(nxt, np.array(edges))

        assert RP.cycle_budget_m == 3
        rep = check_event_B(bouquet(4), RP)
        assert rep.holds is True and rep.witness[0] == 0
        assert len(rep.witness[1]) == 4
        assert check_event_B(bouquet(3), RP).holds is False
        assert RP.cycle_budget_m0 == 4
        assert check_event_B(bouquet(5), RP, use_m0=True).holds is True
        assert check_event_B(bouquet(4), RP, use_m0=True).holds is False

    def test_b_ignores_long_cycles(self):
        # capped variant must not count cycles beyond the long-cycle length
        g = Graph.cycle(40)
        rp = _rp(cycle_budget_m=0, long_cycle_len=10)
        assert check_event_B(g, rp).holds is False
        assert check_event_B(g, rp, use_m0=True).holds is True \
            or rp.cycle_budget_m0 >= 1

    def test_c(self):
        edges = [(0, 1), (0, 2)]
        nxt = 3
        for hub in (1, 2):
            for _ in range(4):
                edges.append((hub, nxt))
                nxt += 1
        g = Graph(nxt, np.array(edges))
        rep = check_event_C(g, RP, count_threshold=2, degree_threshold=3)
        assert rep.holds is True
        v, found = rep.witness
        assert set(found) == {1, 2}
        assert check_event_C(Graph.star(8), RP, count_threshold=2,
                             degree_threshold=3).holds is False

    def test_d(self):
        two_stars = _union(Graph.star(5), _shift(Graph.star(5), 6, 12))
        rp = _rp(high_cut=4.0, moderate_cut=4.0)
        rep = check_event_D(two_stars, rp, tau=0.5)
        assert rep.holds is True
        assert rep.params_used["f2_norm"] == 0.0
        noisy = _union(two_stars, _shift(Graph.cycle(3), 1, 12))
        rep2 = check_event_D(noisy, rp, tau=0.01)
        assert rep2.holds is False
        assert rep2.params_used["f2_norm"] >= 2.0 - 1e-9

    def test_t(self):
        rp = _rp(delta_p=8)
        forest = _union(Graph.path(4), _shift(Graph.path(3), 4, 7))
        assert check_event_T(forest, rp, tau=0.25).holds is True
        rep = check_event_T(Graph.cycle(4), rp, tau=0.25)
        assert rep.holds is False and rep.witness[0] == "cycle_in_component"
        rep = check_event_T(Graph.path(30), rp, tau=0.25)
        assert rep.holds is False and rep.witness[0] == "oversized_component"

    def test_trees(self):
        rp = _rp(lp=4.0)
        g = _union(Graph.path(10), _shift(Graph.path(5), 10, 15))
        rep = check_trees_event(g, rp, thetas=(2.0, 0.8))
        assert rep.holds is True
        assert [a[2] for a in rep.witness] == [9, 5]
        assert check_trees_event(g, rp, thetas=(2.5,)).holds is False
        assert check_trees_event(g, rp, thetas=(0.5, 0.5, 0.5)).holds is False

    def test_forest_excludes_neighbor_events(self):
        # component-size control forces both neighborhood events false:
        # a high-degree witness needs more vertices than any component has
        rp = _rp(delta_p=64, high_cut=64 ** 0.75, moderate_cut=64 ** 0.75)
        for t in range(10):
            g = sample_gnp(300, 1.2 / 300, derived_seed(121, t))
            g, _, _ = remove_cycles(g)
            rep_t = check_event_T(g, rp, tau=0.25)
            if not rep_t.holds:
                continue
            assert check_event_A2(g, rp).holds is False
            assert check_event_C(g, rp).holds is False
        big_star = Graph.star(70)
        assert check_event_T(big_star, rp, tau=0.25).holds is True
        assert check_event_A2(big_star, rp).holds is False
        assert check_event_C(big_star, rp).holds is False


class TestTreeCounts:
    def test_small_exact(self):
        # 4 labelled 3-vertex trees each with prob (1/2)^2: expected 3
        got = math.exp(log_expected_tree_count(4, 0.5, 3))
        assert got == pytest.approx(3.0, rel=1e-12)

    def test_oversized(self):
        assert log_expected_tree_count(4, 0.5, 5) == -math.inf
        with pytest.raises(DomainError):
            log_expected_tree_count(4, 0.5, 0)

    def test_bound_consistency(self):
        n, p, theta = 1000, 0.001, 1.0
        from edgetail import compute_lp
        t = math.ceil(theta * compute_lp(n, p)) + 1
        want = math.exp(log_expected_tree_count(n, p, t))
        assert expected_tree_count_bound(n, p, theta) == pytest.approx(
            want, rel=1e-12)

    def test_bound_zero_when_oversized(self):
        assert expected_tree_count_bound(1000, 0.001, 1e6) == 0.0


class TestPruneAndCenter:
    def test_removes_top_degree(self):
        g = Graph.star(5)
        pruned, norm = prune_and_center(g, RP, 0.0, 1)
        assert pruned.n == 5 and pruned.m == 0
        assert norm == 0.0

    def test_budget_cap(self):
        cap = math.ceil(10 / RP.p)
        g = sample_gnp(30, 0.1, 3)
        with pytest.raises(DomainError):
            prune_and_center(g, RP, 0.1, cap + 1)
        with pytest.raises(DomainError):
            prune_and_center(g, RP, 0.1, -1)

    def test_zero_budget_is_centered_norm(self):
        from edgetail import centered_norm
        g = sample_gnp(40, 0.1, 4)
        _, norm = prune_and_center(g, RP, 0.05, 0)
        assert norm == pytest.approx(centered_norm(g, 0.05), rel=1e-10)


class TestDecreasingProbe:
    def test_violation_found(self):
        # "has at least one edge" fails on the empty subsample
        rep = decreasing_probe(lambda g: g.m >= 1, Graph.cycle(3), 200, 5)
        assert rep.holds is True and rep.witness.m < 3

    def test_decreasing_event_never_violated(self):
        rep = decreasing_probe(lambda g: g.m <= 10, Graph.cycle(3), 200, 5)
        assert rep.holds is False and rep.witness is None

    def test_event_false_on_host(self):
        rep = decreasing_probe(lambda g: g.m >= 99, Graph.cycle(3), 10, 5)
        assert rep.holds is False
        assert rep.params_used.get("note") == "event false on g"
