import itertools
import random

import pytest

from digraphsub.core import (
    bioriented_clique,
    build_digraph,
    directed_cycle,
    directed_path,
    bfs_levels,
)
from digraphsub.errors import ArcPresent, EmptyGraph, SameVertex, VertexInSet
from digraphsub.menger import fan_to_set, strong_arc_connectivity, vertex_disjoint_paths

from .conftest import rand_digraph


def _all_dipaths(d, u, v):
    """Exhaustive simple-dipath listing, used as a tiny independent oracle."""
    out = []

    def grow(path):
        if path[-1] == v:
            out.append(tuple(path))
            return
        for w in d.out_nbrs(path[-1]):
            if w not in path:
                path.append(w)
                grow(path)
                path.pop()

    grow([u])
    return out


class TestVertexDisjointPaths:
    def test_bivec_k4_two_paths(self):
        d = bioriented_clique(4).without_arcs([(0, 1)])
        res = vertex_disjoint_paths(d, 0, 1, 2)
        assert res.found
        inner = sorted(p[1] for p in res.paths)
        assert inner == [2, 3]

    def test_dipath_cut(self):
        res = vertex_disjoint_paths(directed_path(2), 0, 2, 2)
        assert not res.found
        assert res.cut == frozenset({1})

    def test_c5_single_path_only(self):
        d = directed_cycle(5)
        assert len(_all_dipaths(d, 0, 2)) == 1
        res = vertex_disjoint_paths(d, 0, 2, 2)
        assert not res.found
        assert len(res.cut) == 1

    def test_same_vertex(self):
        with pytest.raises(SameVertex):
            vertex_disjoint_paths(directed_cycle(3), 1, 1, 1)

    def test_arc_present(self):
        with pytest.raises(ArcPresent):
            vertex_disjoint_paths(directed_cycle(3), 0, 1, 1)

    def test_k1_is_reachability(self, rng):
        for _ in range(200):
            d = rand_digraph(rng, 7, 0.25)
            u, v = rng.sample(range(7), 2)
            if d.has_arc(u, v):
                continue
            dist, _ = bfs_levels(d, u)
            assert vertex_disjoint_paths(d, u, v, 1).found == (v in dist)


class TestFanToSet:
    def test_star_fan(self):
        d = build_digraph(4, [(0, 1), (0, 2), (0, 3)])
        res = fan_to_set(d, 0, {1, 2, 3}, 3)
        assert res.found
        assert sorted(p[-1] for p in res.fan) == [1, 2, 3]
        assert all(len(p) == 2 for p in res.fan)

    def test_dipath_cut(self):
        res = fan_to_set(directed_path(2), 0, {2}, 2)
        assert not res.found
        assert res.cut == frozenset({1})

    def test_bivec_k3_fan(self):
        res = fan_to_set(bioriented_clique(3), 0, {1, 2}, 2)
        assert res.found
        assert sorted(p[-1] for p in res.fan) == [1, 2]

    def test_vertex_in_set(self):
        with pytest.raises(VertexInSet):
            fan_to_set(bioriented_clique(3), 0, {0, 1}, 1)

    def test_paths_clipped_at_first_target(self, rng):
        for _ in range(100):
            d = rand_digraph(rng, 8, 0.3)
            v = rng.randrange(8)
            targets = set(rng.sample([x for x in range(8) if x != v], 3))
            res = fan_to_set(d, v, targets, 2)
            if res.found:
                for p in res.fan:
                    assert p[-1] in targets
                    assert not (set(p[:-1]) & targets)


class TestArcConnectivity:
    def test_bivec_k3_by_brute_force(self):
        d = bioriented_clique(3)
        assert strong_arc_connectivity(d) == 2
        # independent cross-check: every single arc removal keeps it strong,
        # some pair disconnects it
        arcs = list(d.arcs())
        for a in arcs:
            assert strong_arc_connectivity(d.without_arcs([a])) >= 1
        assert any(
            strong_arc_connectivity(d.without_arcs(pair)) == 0
            for pair in itertools.combinations(arcs, 2)
        )

    def test_c5(self):
        assert strong_arc_connectivity(directed_cycle(5)) == 1

    def test_dipath(self):
        assert strong_arc_connectivity(directed_path(3)) == 0

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_bivec_clique_value(self, k):
        assert strong_arc_connectivity(bioriented_clique(k)) == k - 1

    def test_empty(self):
        with pytest.raises(EmptyGraph):
            strong_arc_connectivity(build_digraph(1, []))


class TestDuality:
    def test_random_instances(self):
        rng = random.Random(7)
        checked = 0
        for _ in range(400):
            n = rng.randrange(3, 9)
            d = rand_digraph(rng, n, rng.uniform(0.1, 0.5))
            u, v = rng.sample(range(n), 2)
            if d.has_arc(u, v):
                continue
            k = rng.randrange(1, 4)
            res = vertex_disjoint_paths(d, u, v, k)
            checked += 1
            if res.found:
                seen = set()
                for p in res.paths:
                    assert p[0] == u and p[-1] == v
                    inner = set(p[1:-1])
                    assert not (inner & seen)
                    seen |= inner
            else:
                dist, _ = bfs_levels(d, u, avoid=res.cut)
                assert v not in dist
        assert checked > 200
