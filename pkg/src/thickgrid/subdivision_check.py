"""Independent verifier for claimed hex-prefix embeddings, plus a mutation fuzzer.

This module is the artifact's oracle: it re-checks the subdivision conditions
(injective branch map, host paths realizing every pattern edge, pairwise
internal disjointness, interiors clear of branch vertices) with its own path
walking and set logic, sharing no code with the extraction machinery.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .embedding import Embedding, PatternEdge
from .graph_core import FiniteGraph, pattern_edges, pattern_vertices

BRANCH_NOT_INJECTIVE = "branch_not_injective"
PATH_NOT_IN_HOST = "path_not_in_host"
ENDPOINT_MISMATCH = "endpoint_mismatch"
PATHS_INTERSECT = "paths_intersect"
INTERIOR_HITS_BRANCH = "interior_hits_branch"
PATTERN_EDGE_MISSING = "pattern_edge_missing"


@dataclass(frozen=True)
class Violation:
    kind: str
    location: str
    detail: str = ""


def _vloc(v) -> str:
    return f"({v[0]},{v[1]})"


def _eloc(e: PatternEdge) -> str:
    return f"{_vloc(e[0])}-{_vloc(e[1])}"


def verify_embedding(host: FiniteGraph, emb: Embedding) -> list[Violation]:
    """All subdivision violations of the certificate, canonically ordered.

    An empty list means the embedding is a valid topological-minor witness:
    the pattern is ``hex_prefix(emb.pattern)`` and every condition is checked
    against the host edge by edge.
    """
    violations: list[Violation] = []
    spec = emb.pattern
    p_vertices = pattern_vertices(spec)
    p_edges = pattern_edges(spec)
    p_edge_set = set(p_edges)
    p_vertex_set = set(p_vertices)

    image_of: dict[int, list] = {}
    for pv in sorted(emb.branch):
        if pv not in p_vertex_set:
            violations.append(
                Violation(BRANCH_NOT_INJECTIVE, _vloc(pv), "branch key outside the pattern")
            )
            continue
        image_of.setdefault(emb.branch[pv], []).append(pv)
    for host_v, pvs in sorted(image_of.items()):
        if len(pvs) > 1:
            locs = " ".join(_vloc(p) for p in pvs)
            violations.append(
                Violation(BRANCH_NOT_INJECTIVE, _vloc(pvs[0]), f"{locs} share host vertex {host_v}")
            )
        if not host.has_vertex(host_v):
            violations.append(
                Violation(PATH_NOT_IN_HOST, _vloc(pvs[0]), f"branch image {host_v} not a host vertex")
            )
    for pv in p_vertices:
        if pv not in emb.branch:
            violations.append(
                Violation(ENDPOINT_MISMATCH, _vloc(pv), "pattern vertex has no branch image")
            )

    branch_images = set(emb.branch.values())
    occupants: dict[int, list[PatternEdge]] = {}

    for edge in sorted(emb.edge_paths):
        if edge not in p_edge_set:
            violations.append(
                Violation(PATTERN_EDGE_MISSING, _eloc(edge), "path given for an edge not in the pattern")
            )
            continue
        path = emb.edge_paths[edge]
        walk_ok = True
        for v in path:
            if not host.has_vertex(v):
                violations.append(
                    Violation(PATH_NOT_IN_HOST, _eloc(edge), f"vertex {v} not in host")
                )
                walk_ok = False
                break
        if walk_ok:
            if len(set(path)) != len(path):
                violations.append(
                    Violation(PATH_NOT_IN_HOST, _eloc(edge), "path repeats a vertex")
                )
                walk_ok = False
            else:
                for u, v in zip(path, path[1:]):
                    if not host.has_edge(u, v):
                        violations.append(
                            Violation(PATH_NOT_IN_HOST, _eloc(edge), f"{u}-{v} is not a host edge")
                        )
                        walk_ok = False
                        break
        a, b = edge
        if a in emb.branch and b in emb.branch:
            want = {emb.branch[a], emb.branch[b]}
            if len(path) < 2 or {path[0], path[-1]} != want or len(want) != 2:
                violations.append(
                    Violation(
                        ENDPOINT_MISMATCH,
                        _eloc(edge),
                        "path endpoints do not match the mapped branch vertices",
                    )
                )
        for v in path[1:-1]:
            if v in branch_images:
                violations.append(
                    Violation(INTERIOR_HITS_BRANCH, _eloc(edge), f"interior vertex {v} is a branch vertex")
                )
                break
        for v in set(path):
            occupants.setdefault(v, []).append(edge)

    reported: set[tuple[PatternEdge, PatternEdge]] = set()
    for v, edges_here in sorted(occupants.items()):
        if len(edges_here) < 2:
            continue
        for i in range(len(edges_here)):
            for j in range(i + 1, len(edges_here)):
                e, f = edges_here[i], edges_here[j]
                shared_endpoints = set(e) & set(f)
                allowed = {emb.branch[pv] for pv in shared_endpoints if pv in emb.branch}
                if v in allowed:
                    continue
                key = (e, f) if e <= f else (f, e)
                if key not in reported:
                    reported.add(key)
                    violations.append(
                        Violation(
                            PATHS_INTERSECT,
                            f"{_eloc(key[0])} and {_eloc(key[1])}",
                            f"share host vertex {v}",
                        )
                    )

    for edge in p_edges:
        if edge not in emb.edge_paths:
            violations.append(Violation(PATTERN_EDGE_MISSING, _eloc(edge)))

    violations.sort(key=lambda w: (w.location, w.kind, w.detail))
    return violations


def _insertable_positions(host: FiniteGraph, path: list[int], w: int):
    for idx in range(len(path) - 1):
        if host.has_edge(path[idx], w) and host.has_edge(w, path[idx + 1]):
            yield idx + 1


def mutate_embedding(emb: Embedding, seed: int, host: FiniteGraph | None = None) -> Embedding:
    """Deterministic single-fault mutation of a valid embedding.

    The fault is drawn by ``seed`` from: drop a path vertex, swap two branch
    images, splice two paths through a shared vertex, or delete a pattern
    edge's path.  Passing the host lets the splice prefer a host-valid
    insertion point so the fault stays a pure intersection.
    """
    rng = random.Random(seed)
    out = Embedding(
        pattern=emb.pattern,
        branch=dict(emb.branch),
        edge_paths={e: list(p) for e, p in emb.edge_paths.items()},
    )
    edges = sorted(out.edge_paths)
    kinds = []
    if edges:
        kinds.extend(["drop", "delete"])
    if len(out.branch) >= 2:
        kinds.append("swap")
    if len(edges) >= 2:
        kinds.append("splice")
    if not kinds:
        raise ValueError("embedding has nothing to mutate")
    kind = rng.choice(kinds)

    if kind == "drop":
        edge = edges[rng.randrange(len(edges))]
        path = out.edge_paths[edge]
        if len(path) >= 3:
            del path[rng.randrange(1, len(path) - 1)]
        else:
            del path[1:]
    elif kind == "delete":
        edge = edges[rng.randrange(len(edges))]
        del out.edge_paths[edge]
    elif kind == "swap":
        keys = sorted(out.branch)
        a, b = rng.sample(keys, 2)
        out.branch[a], out.branch[b] = out.branch[b], out.branch[a]
    else:
        e, f = rng.sample(edges, 2)
        donor = out.edge_paths[f]
        w = donor[rng.randrange(1, len(donor) - 1)] if len(donor) >= 3 else donor[0]
        target = out.edge_paths[e]
        spots = list(_insertable_positions(host, target, w)) if host is not None else []
        if spots and w not in target:
            target.insert(spots[0], w)
        else:
            idx = max(1, len(target) // 2) if len(target) > 2 else 1
            target.insert(idx, w)
    return out
