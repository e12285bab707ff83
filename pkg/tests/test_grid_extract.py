from __future__ import annotations

import pytest

from thickgrid.disjoint_paths import PathFamily, family_violations
from thickgrid.embedding import Embedding
from thickgrid.graph_core import (
    FiniteGraph,
    HexPrefixSpec,
    hex_prefix,
    lazy_from_finite,
    lazy_graph,
    pair_coords,
    pattern_edges,
    pattern_vertices,
    rung_at,
    truncate,
)
from thickgrid.grid_extract import (
    ExtractionReport,
    Insufficient,
    build_ray_adjacency,
    comb_construct,
    halin_pipeline,
    lemma_construct,
    witness_from_embedding,
)
from thickgrid.rays_ends import EndWitness, Ray
from thickgrid.subdivision_check import verify_embedding


def path_graph_edges(ids):
    return list(zip(ids, ids[1:]))


def make_lemma_host(p0_positions=None, p1_positions=None):
    """Disjoint rays C, L0, L1 plus single-edge connectors along C.

    The default positions interleave the two families: L0 attaches at C
    positions 1, 5, 9, ... and L1 at 3, 7, 11, ...
    """
    p0_positions = p0_positions or [1 + 4 * m for m in range(6)]
    p1_positions = p1_positions or [3 + 4 * m for m in range(6)]
    C = list(range(1000, 1031))
    L0 = list(range(0, 25))
    L1 = list(range(100, 125))
    edges = path_graph_edges(C) + path_graph_edges(L0) + path_graph_edges(L1)
    p0_paths, p1_paths = [], []
    for m, pos in enumerate(p0_positions):
        edges.append((L0[2 * m], C[pos]))
        p0_paths.append([L0[2 * m], C[pos]])
    for m, pos in enumerate(p1_positions):
        edges.append((L1[2 * m], C[pos]))
        p1_paths.append([L1[2 * m], C[pos]])
    host = FiniteGraph.from_edges(edges)
    ray_c = Ray(C)
    ray_l0 = Ray(L0)
    ray_l1 = Ray(L1)
    fam0 = PathFamily(ray_l0, ray_c, p0_paths)
    fam1 = PathFamily(ray_l1, ray_c, p1_paths)
    return host, ray_c, [ray_l0, ray_l1], [fam0, fam1]


def test_lemma_construct_synthetic_success():
    host, C, L, P = make_lemma_host()
    spec = HexPrefixSpec(2, 6)
    emb = lemma_construct(host, C, L, P, spec)
    assert isinstance(emb, Embedding)
    assert verify_embedding(host, emb) == []
    # Base rung consumed the C-minimal attachment of family 0.
    rung0 = emb.edge_paths[((0, 0), (1, 0))]
    assert rung0[0] == 0 and rung0[1] == 1001


def test_lemma_construct_c_segments_strictly_increase():
    host, C, L, P = make_lemma_host()
    spec = HexPrefixSpec(2, 6)
    emb = lemma_construct(host, C, L, P, spec)
    c_pos = {v: i for i, v in enumerate(C.vertices)}
    previous_max = -1
    for j in range(spec.depth):
        for i in range(spec.cols - 1):
            if not rung_at(i, j):
                continue
            seg = sorted(c_pos[v] for v in emb.edge_paths[((i, j), (i + 1, j))] if v in c_pos)
            assert seg == list(range(seg[0], seg[-1] + 1))
            assert seg[0] > previous_max
            previous_max = seg[-1]


def test_lemma_construct_single_column_uses_base_anchor():
    host, C, L, P = make_lemma_host()
    spec = HexPrefixSpec(1, 5)
    emb = lemma_construct(host, C, L, P, spec)
    assert isinstance(emb, Embedding)
    assert verify_embedding(host, emb) == []
    # Column starts at the base path's ray endpoint and uses only L0 vertices.
    assert emb.branch[(0, 0)] == 0
    image = set(emb.branch.values()) | {v for p in emb.edge_paths.values() for v in p}
    assert image <= set(L[0].vertices)


def test_lemma_construct_family_below_base_is_insufficient():
    # All of family 1 attaches below the base attachment of family 0, so no
    # attachment strictly greater than the base exists.
    host, C, L, P = make_lemma_host(
        p0_positions=[10 + 3 * m for m in range(6)],
        p1_positions=list(range(6)),
    )
    c_pos = {v: i for i, v in enumerate(C.vertices)}
    base_c = min(c_pos[p[-1]] for p in P[0].paths)
    assert all(c_pos[p[-1]] < base_c for p in P[1].paths)
    res = lemma_construct(host, C, L, P, HexPrefixSpec(2, 6))
    assert isinstance(res, Insufficient)
    assert res.stage.startswith("rung (0,0)")


def test_lemma_construct_precondition_errors():
    host, C, L, P = make_lemma_host()
    with pytest.raises(ValueError):
        lemma_construct(host, C, [C], P, HexPrefixSpec(1, 3))
    with pytest.raises(ValueError):
        lemma_construct(host, C, L, P, HexPrefixSpec(3, 4))


def hex_column_rays_and_rung_families(cols, depth):
    rays = [Ray([pair_coords(i, j) for j in range(depth)]) for i in range(cols)]
    families = []
    for i in range(cols - 1):
        paths = [
            [pair_coords(i, j), pair_coords(i + 1, j)]
            for j in range(depth)
            if rung_at(i, j)
        ]
        families.append(PathFamily(rays[i], rays[i + 1], paths))
    return rays, families


def test_comb_construct_identity_extraction():
    host = hex_prefix(HexPrefixSpec(4, 24))
    chain, families = hex_column_rays_and_rung_families(4, 24)
    spec = HexPrefixSpec(4, 8)
    emb = comb_construct(host, chain, families, spec)
    assert isinstance(emb, Embedding)
    assert verify_embedding(host, emb) == []
    for edge in pattern_edges(spec):
        (i, j), (i2, j2) = edge
        if i2 == i + 1:
            assert len(emb.edge_paths[edge]) == 2


def test_comb_construct_rejects_short_chain():
    host = hex_prefix(HexPrefixSpec(4, 24))
    chain, families = hex_column_rays_and_rung_families(2, 24)
    with pytest.raises(ValueError):
        comb_construct(host, chain, families, HexPrefixSpec(3, 4))


def test_comb_construct_emptied_family_is_insufficient():
    host = hex_prefix(HexPrefixSpec(3, 24))
    chain, families = hex_column_rays_and_rung_families(3, 24)
    families[1] = PathFamily(chain[1], chain[2], [])
    res = comb_construct(host, chain, families, HexPrefixSpec(3, 6))
    assert isinstance(res, Insufficient)
    assert "column 1->2" in res.stage


def test_build_ray_adjacency_hex_columns_form_path():
    g = lazy_graph("hex_quarter_grid")
    depth = 20
    rays = [Ray([pair_coords(i, j) for j in range(i, depth)]) for i in range(3)]
    witness = EndWitness(rays=rays, radius=depth, equivalence_radius=2)
    adjacency = build_ray_adjacency(g, witness, t=3, R=2 * depth + 4)
    assert not adjacency.dropped
    assert set(adjacency.edges) == {(0, 1), (1, 2)}
    for fam in adjacency.edges.values():
        assert not family_violations(fam)


def test_build_ray_adjacency_two_rays_single_edge():
    g = lazy_graph("hex_quarter_grid")
    rays = [Ray([pair_coords(i, j) for j in range(i, 12)]) for i in range(2)]
    witness = EndWitness(rays=rays, radius=12, equivalence_radius=1)
    adjacency = build_ray_adjacency(g, witness, t=1, R=28)
    assert set(adjacency.edges) == {(0, 1)}


def make_crossing_host():
    """Three rays where every middle-to-right connection crosses the left ray."""
    R0 = list(range(0, 20))
    R1 = list(range(100, 120))
    R2 = list(range(200, 220))
    edges = path_graph_edges(R0) + path_graph_edges(R1) + path_graph_edges(R2)
    for j in range(0, 20, 2):
        edges.append((R1[j], R0[j]))
    for j in range(1, 20, 2):
        edges.append((R0[j], R2[j]))
    return FiniteGraph.from_edges(edges), [Ray(R0), Ray(R1), Ray(R2)]


def test_build_ray_adjacency_reroutes_to_earlier_ray():
    host, rays = make_crossing_host()
    g = lazy_from_finite(host)
    witness = EndWitness(rays=rays, radius=10, equivalence_radius=1)
    adjacency = build_ray_adjacency(g, witness, t=3, R=100)
    assert (0, 2) in adjacency.edges
    assert (1, 2) not in adjacency.edges
    fam = adjacency.edges[(0, 2)]
    r0 = set(rays[0].vertices)
    for p in fam.paths:
        assert p[0] in r0, "truncation point must lie on the earliest ray"
    assert not family_violations(fam)


def test_pipeline_hex_succeeds_with_comb():
    g = lazy_graph("hex_quarter_grid")
    report = halin_pipeline(g, k=4, r=3, R=24, t=4, spec=HexPrefixSpec(3, 8))
    assert report.success
    assert report.case_taken == "comb"
    host = truncate(g, None, 24, max_vertices=None).graph
    assert verify_embedding(host, report.embedding) == []
    assert "outcome: success" in report.to_text()


def test_pipeline_binary_tree_insufficient_at_witness():
    report = halin_pipeline(
        lazy_graph("binary_tree"), k=3, r=2, R=16, t=2, spec=HexPrefixSpec(2, 4)
    )
    assert not report.success
    assert report.stage == "witness"


def test_pipeline_ladder_insufficient_with_separator_diagnostic():
    report = halin_pipeline(
        lazy_graph("ladder"), k=3, r=2, R=16, t=2, spec=HexPrefixSpec(2, 4)
    )
    assert not report.success
    assert report.stage == "witness"
    assert "separator size 2" in report.diagnostic


def test_pipeline_monotone_in_spec():
    g = lazy_graph("hex_quarter_grid")
    base = dict(k=4, r=3, R=24, t=4)
    assert halin_pipeline(g, spec=HexPrefixSpec(3, 8), **base).success
    assert halin_pipeline(g, spec=HexPrefixSpec(3, 7), **base).success
    assert halin_pipeline(g, spec=HexPrefixSpec(2, 8), **base).success


def test_pipeline_rejects_bad_parameters():
    g = lazy_graph("hex_quarter_grid")
    with pytest.raises(ValueError):
        halin_pipeline(g, k=2, r=2, R=12, t=1, spec=HexPrefixSpec(3, 4))


def make_spider_host(H=60):
    """Central column with four satellites attached only to the center.

    Satellite i hooks its rows 0, 2, 4, ... to center rows i, i+4, i+8, ...;
    every satellite-to-satellite connection is forced through the center.
    """
    center = list(range(0, H))
    sats = [list(range(100 * (i + 1), 100 * (i + 1) + H)) for i in range(4)]
    edges = path_graph_edges(center)
    for s in sats:
        edges.extend(path_graph_edges(s))
    for i, s in enumerate(sats):
        m = 0
        while 4 * m + i < H and 2 * m < H:
            edges.append((s[2 * m], center[4 * m + i]))
            m += 1
    return FiniteGraph.from_edges(edges)


def test_pipeline_spider_takes_star_case():
    host = make_spider_host()
    g = lazy_from_finite(host)
    report = halin_pipeline(g, k=5, r=2, R=36, t=5, spec=HexPrefixSpec(3, 6))
    assert report.success, report.to_text()
    assert report.case_taken == "star"
    assert verify_embedding(host, report.embedding) == []


def identity_embedding(spec):
    branch = {pv: pair_coords(*pv) for pv in pattern_vertices(spec)}
    paths = {e: [branch[e[0]], branch[e[1]]] for e in pattern_edges(spec)}
    return Embedding(pattern=spec, branch=branch, edge_paths=paths)


def test_witness_from_embedding_identity():
    spec = HexPrefixSpec(4, 16)
    host = hex_prefix(spec)
    emb = identity_embedding(spec)
    witness = witness_from_embedding(host, emb, k=4, r=2)
    assert len(witness.rays) == 4
    used = set()
    for ray in witness.rays:
        assert not used & set(ray.vertices)
        used |= set(ray.vertices)


def test_witness_from_embedding_k_too_large():
    spec = HexPrefixSpec(3, 8)
    host = hex_prefix(spec)
    with pytest.raises(ValueError):
        witness_from_embedding(host, identity_embedding(spec), k=4, r=1)


def test_witness_from_embedding_rejects_invalid():
    spec = HexPrefixSpec(2, 4)
    host = hex_prefix(spec)
    emb = identity_embedding(spec)
    del emb.edge_paths[((0, 0), (1, 0))]
    with pytest.raises(ValueError):
        witness_from_embedding(host, emb, k=2, r=1)


def test_pipeline_round_trip_witness():
    g = lazy_graph("hex_quarter_grid")
    R = 24
    report = halin_pipeline(g, k=4, r=3, R=R, t=4, spec=HexPrefixSpec(3, 8))
    assert report.success
    host = truncate(g, None, R, max_vertices=None).graph
    witness = witness_from_embedding(host, report.embedding, k=3, r=3)
    assert len(witness.rays) == 3
