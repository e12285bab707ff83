"""Rays with their natural order, finite-radius end equivalence, and
thick-end witness search.

A ray at finite scale is a frontier path: a repetition-free path inside a
truncation whose last vertex lies on the outer sphere, certifying that it
could be extended.  Two frontier rays are equivalent at radius r when their
tails beyond ball(root, r) lie in the same component of the truncation minus
that ball.  A thick-end witness is a set of k pairwise disjoint, pairwise
equivalent frontier rays.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .disjoint_paths import max_vertex_disjoint_paths, min_vertex_separator
from .graph_core import DEFAULT_VERTEX_BUDGET, LazyGraph, Truncation, truncate

log = logging.getLogger("thickgrid.rays_ends")


@dataclass
class Ray:
    """Ordered repetition-free vertex path; the natural order is list order."""

    vertices: list[int]
    frontier: bool = True


@dataclass
class NotFound:
    """Search failure report: the best size achieved plus the obstruction."""

    best: int
    separator_size: int | None = None
    separator: list[int] = field(default_factory=list)
    detail: str = ""


@dataclass
class EndWitness:
    """k pairwise disjoint frontier rays, pairwise equivalent at radius r."""

    rays: list[Ray]
    radius: int
    equivalence_radius: int


def _candidate_sources(trunc: Truncation, k: int):
    """Source spheres to try, innermost first.

    Spheres with fewer than k vertices cannot yield k disjoint rays; when no
    sphere is wide enough the widest one is still tried so that a separator
    diagnostic can be produced.
    """
    qualified = [s for s in range(trunc.radius) if len(trunc.sphere(s)) >= k]
    if qualified:
        return qualified
    if trunc.radius == 0:
        return []
    widest = max(range(trunc.radius), key=lambda s: (len(trunc.sphere(s)), -s))
    return [widest]


def _frontier_paths(trunc: Truncation, s: int, limit: int):
    return max_vertex_disjoint_paths(
        trunc.graph, trunc.sphere(s), trunc.sphere(trunc.radius), limit=limit
    )


def find_disjoint_rays(
    g: LazyGraph,
    k: int,
    R: int,
    root: int | None = None,
    max_vertices: int | None = DEFAULT_VERTEX_BUDGET,
) -> list[Ray] | NotFound:
    """k pairwise vertex-disjoint frontier rays inside ball(root, R).

    Disjoint path systems from an inner sphere to the outer sphere are tried
    at increasing inner radius; the count at each stage is the Menger value
    between the two spheres.  On failure the result carries the minimum
    separator certifying the bottleneck.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if R < 1:
        raise ValueError("R must be positive")
    trunc = truncate(g, root, R, max_vertices=max_vertices)
    if trunc.radius < 1:
        return NotFound(best=0, detail="truncation has radius 0")
    best = NotFound(best=-1)
    for s in _candidate_sources(trunc, k):
        paths = _frontier_paths(trunc, s, limit=k)
        if len(paths) >= k:
            return [Ray(vertices=p, frontier=True) for p in paths[:k]]
        if len(paths) > best.best:
            sep = min_vertex_separator(
                trunc.graph, trunc.sphere(s), trunc.sphere(trunc.radius)
            )
            best = NotFound(
                best=len(paths),
                separator_size=len(sep),
                separator=sep,
                detail=f"at most {len(paths)} disjoint rays from sphere {s}; "
                f"separator size {len(sep)}",
            )
    return best


def _complement_components(trunc: Truncation, r: int) -> dict[int, int]:
    """Component label for every vertex beyond ball(root, r), by lowest member id."""
    outside = [v for v in trunc.graph.vertices if trunc.dist[v] > r]
    label: dict[int, int] = {}
    for v in outside:
        if v in label:
            continue
        label[v] = v
        stack = [v]
        while stack:
            for u in trunc.graph.neighbors(stack.pop()):
                if trunc.dist[u] > r and u not in label:
                    label[u] = v
                    stack.append(u)
    return label


def _tail_head(ray: Ray, trunc: Truncation, r: int) -> int:
    """First vertex of the ray's tail beyond ball(root, r)."""
    last_inside = -1
    for idx, v in enumerate(ray.vertices):
        if trunc.dist[v] <= r:
            last_inside = idx
    return ray.vertices[last_inside + 1]


def _check_frontier(ray: Ray, trunc: Truncation, R: int) -> None:
    if not ray.frontier:
        raise ValueError("ray is not a frontier ray")
    for v in ray.vertices:
        if v not in trunc.dist:
            raise ValueError(f"ray vertex {v} outside ball(root, {R})")
    if trunc.dist[ray.vertices[-1]] != R:
        raise ValueError(f"ray does not end on sphere(root, {R})")


def same_end(
    g: LazyGraph,
    a: Ray,
    b: Ray,
    r: int,
    R: int,
    root: int | None = None,
    max_vertices: int | None = None,
) -> bool:
    """Whether the tails of two frontier rays beyond ball(root, r) share a
    component of ball(root, R) minus ball(root, r)."""
    if not 0 <= r < R:
        raise ValueError("need 0 <= r < R")
    trunc = truncate(g, root, R, max_vertices=max_vertices)
    if trunc.radius != R:
        raise ValueError(
            f"ball(root, {R}) exceeds the vertex budget; realized radius {trunc.radius}"
        )
    return _same_end_in_trunc(trunc, a, b, r)


def _same_end_in_trunc(trunc: Truncation, a: Ray, b: Ray, r: int) -> bool:
    _check_frontier(a, trunc, trunc.radius)
    _check_frontier(b, trunc, trunc.radius)
    label = _complement_components(trunc, r)
    return label[_tail_head(a, trunc, r)] == label[_tail_head(b, trunc, r)]


def thick_end_witness(
    g: LazyGraph,
    k: int,
    r: int,
    R: int,
    root: int | None = None,
    max_vertices: int | None = DEFAULT_VERTEX_BUDGET,
) -> EndWitness | NotFound:
    """Search for k disjoint frontier rays that are pairwise equivalent at radius r.

    A maximum disjoint frontier-path system is computed per source sphere, its
    rays are grouped by the component their tails occupy, and the first group
    of size k wins.  NotFound reports the best group achieved.
    """
    if k < 2:
        raise ValueError("thickness threshold k must be at least 2")
    if not 0 <= r < R:
        raise ValueError("need 0 <= r < R")
    trunc = truncate(g, root, R, max_vertices=max_vertices)
    return _witness_search(trunc, k, r)


def _witness_search(trunc: Truncation, k: int, r: int) -> EndWitness | NotFound:
    if trunc.radius <= r:
        return NotFound(
            best=0, detail=f"truncation radius {trunc.radius} does not exceed r={r}"
        )
    labels: dict[int, dict[int, int]] = {}
    best = NotFound(best=0, detail="no disjoint ray system found")
    for s in _candidate_sources(trunc, k):
        # Rays starting at distance s are grouped at radius max(r, s): a
        # separating ball must reach at least as deep as the ray starts,
        # otherwise deep starts would be trivially inseparable.  Equivalence
        # at the larger radius implies equivalence at r.
        r_grp = max(r, s)
        if r_grp >= trunc.radius:
            continue
        if r_grp not in labels:
            labels[r_grp] = _complement_components(trunc, r_grp)
        label = labels[r_grp]
        paths = _frontier_paths(trunc, s, limit=2 * k)
        rays = [Ray(vertices=p, frontier=True) for p in paths]
        groups: dict[int, list[Ray]] = {}
        for ray in rays:
            groups.setdefault(label[_tail_head(ray, trunc, r_grp)], []).append(ray)
        if not groups:
            continue
        size, comp = max((len(v), -c) for c, v in groups.items())
        log.debug("witness source sphere %d: %d rays, best group %d", s, len(rays), size)
        if size >= k:
            chosen = sorted(groups[-comp], key=lambda ray: ray.vertices[0])[:k]
            return EndWitness(rays=chosen, radius=trunc.radius, equivalence_radius=r)
        if size > best.best or (len(paths) < k and best.separator_size is None):
            detail = f"best same-end group {size} of {len(rays)} disjoint rays (k={k})"
            sep_size = None
            sep: list[int] = []
            if len(paths) < k:
                sep = min_vertex_separator(
                    trunc.graph, trunc.sphere(s), trunc.sphere(trunc.radius)
                )
                sep_size = len(sep)
                detail += f"; separator size {sep_size}"
            best = NotFound(
                best=max(size, best.best),
                separator_size=sep_size,
                separator=sep,
                detail=detail,
            )
    return best


def witness_violations(
    g: LazyGraph,
    witness: EndWitness,
    root: int | None = None,
    max_vertices: int | None = None,
) -> list[str]:
    """Re-validate an EndWitness from scratch; empty list means valid."""
    trunc = truncate(g, root, witness.radius, max_vertices=max_vertices)
    return _witness_violations_in_trunc(trunc, witness)


def _witness_violations_in_trunc(trunc: Truncation, witness: EndWitness) -> list[str]:
    out = []
    used: set[int] = set()
    for idx, ray in enumerate(witness.rays):
        if not ray.vertices:
            out.append(f"ray {idx} empty")
            continue
        if len(set(ray.vertices)) != len(ray.vertices):
            out.append(f"ray {idx} repeats a vertex")
        for u, v in zip(ray.vertices, ray.vertices[1:]):
            if not trunc.graph.has_edge(u, v):
                out.append(f"ray {idx} uses non-edge {u}-{v}")
                break
        if used & set(ray.vertices):
            out.append(f"ray {idx} shares a vertex with an earlier ray")
        used |= set(ray.vertices)
        try:
            _check_frontier(ray, trunc, witness.radius)
        except ValueError as err:
            out.append(f"ray {idx}: {err}")
    if not out:
        r = witness.equivalence_radius
        label = _complement_components(trunc, r)
        heads = [label[_tail_head(ray, trunc, r)] for ray in witness.rays]
        for idx, h in enumerate(heads[1:], start=1):
            if h != heads[0]:
                out.append(f"rays 0 and {idx} fail same-end at radius {r}")
    return out


def format_witness(witness: EndWitness) -> str:
    """Serialize: header line then one ray per line as space-separated ids."""
    lines = [
        f"witness k={len(witness.rays)} r={witness.equivalence_radius} R={witness.radius}\n"
    ]
    for ray in witness.rays:
        lines.append(" ".join(str(v) for v in ray.vertices) + "\n")
    return "".join(lines)


def parse_witness(text: str) -> EndWitness:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("witness "):
        raise ValueError("missing witness header")
    fields = dict(part.split("=") for part in lines[0].split()[1:])
    rays = [
        Ray(vertices=[int(tok) for tok in ln.split()], frontier=True)
        for ln in lines[1:]
    ]
    if len(rays) != int(fields["k"]):
        raise ValueError("ray count does not match header k")
    return EndWitness(
        rays=rays, radius=int(fields["R"]), equivalence_radius=int(fields["r"])
    )
