from __future__ import annotations

import random

import pytest

from oracles import (
    brute_force_max_disjoint_paths,
    brute_force_min_separator,
    random_connected_graph,
)
from thickgrid.disjoint_paths import (
    InsufficientPaths,
    PathFamily,
    connecting_family,
    family_violations,
    max_vertex_disjoint_paths,
    min_vertex_separator,
)
from thickgrid.graph_core import (
    FiniteGraph,
    HexPrefixSpec,
    hex_prefix,
    lazy_graph,
    pair_coords,
    truncate,
)
from thickgrid.rays_ends import Ray


def complete_graph(n):
    return FiniteGraph.from_edges((u, v) for u in range(n) for v in range(u + 1, n))


def check_output(g, paths, A, B, forbidden=()):
    A, B, forbidden = set(A), set(B), set(forbidden)
    used = set()
    for p in paths:
        assert p[0] in A and p[-1] in B
        assert not set(p) & forbidden
        assert all(v not in A for v in p[1:])
        assert all(v not in B for v in p[:-1])
        for u, v in zip(p, p[1:]):
            assert g.has_edge(u, v)
        assert not used & set(p), "paths are not pairwise vertex-disjoint"
        used |= set(p)


def test_cut_vertex_path_graph():
    g = FiniteGraph.from_edges([(0, 1), (1, 2)])
    paths = max_vertex_disjoint_paths(g, {0}, {2})
    assert len(paths) == 1
    assert paths[0] == [0, 1, 2]
    assert min_vertex_separator(g, {0}, {2}) == [1]


def test_complete_graph_single_endpoints():
    # With fully disjoint paths every a-b path uses a, so the count is 1 and
    # the minimum separator has size 1.
    g = complete_graph(4)
    paths = max_vertex_disjoint_paths(g, {0}, {3})
    assert len(paths) == 1
    assert len(min_vertex_separator(g, {0}, {3})) == 1
    assert brute_force_max_disjoint_paths(g, {0}, {3}) == 1
    assert brute_force_min_separator(g, {0}, {3}) == 1


def test_complete_graph_set_sides():
    g = complete_graph(6)
    A, B = {0, 1, 2}, {3, 4, 5}
    paths = max_vertex_disjoint_paths(g, A, B)
    assert len(paths) == 3
    check_output(g, paths, A, B)


def test_shared_vertices_become_single_vertex_paths():
    g = FiniteGraph.from_edges([(0, 1), (1, 2), (2, 3)])
    paths = max_vertex_disjoint_paths(g, {0, 1}, {1, 3})
    assert [1] in paths
    check_output(g, paths, {0, 1}, {1, 3})


def test_disconnected_sides():
    g = FiniteGraph.from_edges([(0, 1), (2, 3)])
    assert max_vertex_disjoint_paths(g, {0}, {3}) == []
    assert min_vertex_separator(g, {0}, {3}) == []


def test_forbidden_blocks_everything():
    g = FiniteGraph.from_edges([(0, 1), (1, 2)])
    assert max_vertex_disjoint_paths(g, {0}, {2}, forbidden={1}) == []


def test_empty_side_is_domain_error():
    g = complete_graph(3)
    with pytest.raises(ValueError):
        max_vertex_disjoint_paths(g, set(), {0})
    with pytest.raises(ValueError):
        max_vertex_disjoint_paths(g, {0}, {1}, forbidden={0})


def test_deterministic_output():
    rng = random.Random(7)
    g = random_connected_graph(rng, 10)
    first = max_vertex_disjoint_paths(g, {0, 1}, {8, 9})
    for _ in range(3):
        assert max_vertex_disjoint_paths(g, {0, 1}, {8, 9}) == first


def test_menger_duality_random_sample():
    rng = random.Random(20250810)
    for _ in range(120):
        n = rng.randint(2, 10)
        g = random_connected_graph(rng, n, extra_edge_prob=0.3)
        a = rng.randrange(n)
        b = rng.randrange(n)
        A = {a, rng.randrange(n)}
        B = {b, rng.randrange(n)}
        forbidden = set()
        if rng.random() < 0.3:
            pool = [v for v in range(n) if v not in A | B]
            if pool:
                forbidden = {rng.choice(pool)}
        paths = max_vertex_disjoint_paths(g, A, B, forbidden)
        check_output(g, paths, A, B, forbidden)
        sep = min_vertex_separator(g, A, B, forbidden)
        assert len(sep) == len(paths)
        assert len(paths) == brute_force_min_separator(g, A, B, forbidden)


def test_separator_disconnects():
    rng = random.Random(99)
    for _ in range(40):
        n = rng.randint(3, 10)
        g = random_connected_graph(rng, n)
        A = {rng.randrange(n)}
        B = {rng.randrange(n)}
        sep = set(min_vertex_separator(g, A, B))
        remaining = [v for v in g.vertices if v not in sep]
        sub = g.induced(remaining)
        reach = set(v for v in A if v not in sep)
        stack = list(reach)
        while stack:
            for u in sub.neighbors(stack.pop()):
                if u not in reach:
                    reach.add(u)
                    stack.append(u)
        assert not reach & (B - sep)


def test_forbidden_monotonicity():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(4, 10)
        g = random_connected_graph(rng, n)
        A, B = {0}, {n - 1}
        pool = [v for v in range(1, n - 1)]
        rng.shuffle(pool)
        small = set(pool[:1])
        large = small | set(pool[1:2])
        base = len(max_vertex_disjoint_paths(g, A, B))
        with_small = len(max_vertex_disjoint_paths(g, A, B, small))
        with_large = len(max_vertex_disjoint_paths(g, A, B, large))
        assert base >= with_small >= with_large


def make_ray(vertices, frontier=True):
    return Ray(vertices=list(vertices), frontier=frontier)


def test_hex_column_rays_connected_by_rungs():
    fg = hex_prefix(HexPrefixSpec(2, 9))
    left = make_ray([pair_coords(0, j) for j in range(9)])
    right = make_ray([pair_coords(1, j) for j in range(9)])
    fam = connecting_family(fg, left, right, t=3)
    assert isinstance(fam, PathFamily)
    assert not family_violations(fam)
    # Rungs exist exactly at even rows; each is a single-edge path.
    rows = sorted(left.vertices.index(p[0]) for p in fam.paths)
    assert rows == [0, 2, 4, 6, 8]
    assert all(len(p) == 2 for p in fam.paths)


def test_ladder_rays_one_rung_per_level():
    g = lazy_graph("ladder")
    trunc = truncate(g, g.origin(), 6)
    left = make_ray([pair_coords(0, j) for j in range(7)])
    right = make_ray([pair_coords(1, j) for j in range(6)])
    fam = connecting_family(trunc.graph, left, right, t=3)
    assert isinstance(fam, PathFamily)
    assert len(fam.paths) >= 3


def test_binary_tree_rays_blocked_by_meeting_point():
    g = lazy_graph("binary_tree")
    trunc = truncate(g, g.origin(), 5)
    left = make_ray([pair_coords(d, 0) for d in range(1, 6)])
    right = make_ray([pair_coords(d, 2 ** d - 1) for d in range(1, 6)])
    root = g.origin()
    res = connecting_family(trunc.graph, left, right, t=1, forbidden={root})
    assert isinstance(res, InsufficientPaths)
    assert res.found == 0


def test_intersecting_rays_rejected():
    fg = hex_prefix(HexPrefixSpec(2, 4))
    a = make_ray([pair_coords(0, j) for j in range(4)])
    with pytest.raises(ValueError):
        connecting_family(fg, a, a, t=1)
