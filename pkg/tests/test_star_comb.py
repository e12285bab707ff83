from __future__ import annotations

import random

import pytest

from oracles import comb_exists_in_tree, random_connected_graph, random_tree, star_exists_in_tree
from thickgrid.graph_core import FiniteGraph
from thickgrid.star_comb import (
    Comb,
    Exhausted,
    Star,
    star_or_comb,
    verify_comb,
    verify_star,
)


def spider(legs: int, length: int) -> FiniteGraph:
    edges = []
    nid = 1
    tips = []
    for _ in range(legs):
        prev = 0
        for _ in range(length):
            edges.append((prev, nid))
            prev = nid
            nid += 1
        tips.append(prev)
    return FiniteGraph.from_edges(edges), tips


def test_spider_yields_star():
    g, tips = spider(5, 3)
    res = star_or_comb(g, set(tips), 5)
    assert isinstance(res, Star)
    assert res.center == 0
    assert sorted(res.leaves) == sorted(tips)
    assert verify_star(g, res) == []


def test_path_with_full_u_yields_comb():
    g = FiniteGraph.from_edges([(i, i + 1) for i in range(7)])
    res = star_or_comb(g, set(range(8)), 8)
    assert isinstance(res, Comb)
    assert res.spine == list(range(8))
    assert all(len(p) == 1 for p in res.attachments)
    assert verify_comb(g, res) == []


def test_exhausted_when_u_too_small():
    g = FiniteGraph.from_edges([(0, 1), (1, 2)])
    res = star_or_comb(g, {1}, 3)
    assert isinstance(res, Exhausted)


def test_disconnected_rejected():
    g = FiniteGraph.from_edges([(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        star_or_comb(g, {0, 3}, 1)


def test_star_verifier_catches_intersecting_spokes():
    g, tips = spider(3, 3)
    res = star_or_comb(g, set(tips), 3)
    bad = Star(center=res.center, leaves=list(res.leaves), spokes=[list(p) for p in res.spokes])
    bad.spokes[1] = list(bad.spokes[0][:2]) + list(bad.spokes[1][1:])
    assert any("spoke" in v or "intersect" in v for v in verify_star(g, bad))


def test_comb_verifier_catches_spine_touch():
    g = FiniteGraph.from_edges([(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 2)])
    comb = Comb(spine=[0, 1, 2, 3], teeth=[5], attachments=[[1, 4, 5, 2]])
    violations = verify_comb(g, comb)
    assert violations
    assert any("spine" in v for v in violations)


def test_determinism():
    rng = random.Random(3)
    g = random_connected_graph(rng, 15)
    U = {0, 3, 7, 11, 14}
    first = star_or_comb(g, U, 3)
    second = star_or_comb(g, U, 3)
    assert type(first) is type(second)
    if isinstance(first, Star):
        assert first.spokes == second.spokes
    elif isinstance(first, Comb):
        assert first.spine == second.spine
        assert first.attachments == second.attachments


def test_soundness_on_random_graphs():
    rng = random.Random(424242)
    for _ in range(250):
        n = rng.randint(2, 20)
        g = random_connected_graph(rng, n)
        u_size = rng.randint(1, n)
        U = set(rng.sample(range(n), u_size))
        k = rng.randint(1, max(1, len(U)))
        res = star_or_comb(g, U, k)
        if isinstance(res, Star):
            assert verify_star(g, res) == []
            assert len(res.leaves) == k
            assert set(res.leaves) <= U
        elif isinstance(res, Comb):
            assert verify_comb(g, res) == []
            assert len(res.teeth) == k
            assert set(res.teeth) <= U


def test_oracle_agreement_on_trees():
    rng = random.Random(777)
    for _ in range(80):
        n = rng.randint(2, 14)
        g = random_tree(rng, n)
        U = set(rng.sample(range(n), rng.randint(1, n)))
        k = rng.randint(1, len(U))
        res = star_or_comb(g, U, k)
        possible = star_exists_in_tree(g, U, k) or comb_exists_in_tree(g, U, k)
        if isinstance(res, Exhausted):
            assert not possible, f"missed certificate: n={n} U={sorted(U)} k={k}"
        else:
            assert possible
