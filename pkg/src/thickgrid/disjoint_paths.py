"""Vertex-disjoint path computation between vertex sets and between rays.

Disjointness is realized by unit-capacity max flow on a vertex-split network:
every vertex becomes an in/out pair joined by a capacity-1 arc, original
edges become uncapacitated arcs in both directions.  The max-flow value then
equals the largest number of pairwise vertex-disjoint A-B paths, and the
min cut consists purely of split arcs, yielding a minimum vertex separator.

Augmentation order is deterministic (breadth-first, neighbors in sorted id
order), so outputs are reproducible and tests can pin exact paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .graph_core import FiniteGraph

if TYPE_CHECKING:  # pragma: no cover
    from .rays_ends import Ray

Path = list[int]


@dataclass
class PathFamily:
    """Paths from one ray to another, with disjointness metadata.

    Each path starts on the source ray, ends on the target ray and has no
    internal vertex on either ray.  When ``pairwise_disjoint`` is set, no two
    paths share any vertex.
    """

    source_ray: "Ray"
    target_ray: "Ray"
    paths: list[Path]
    pairwise_disjoint: bool = True


@dataclass
class InsufficientPaths:
    """Returned when a requested connection threshold cannot be met.

    ``separator`` certifies the obstruction: removing it disconnects the two
    sides, and its size equals the number of disjoint paths found.
    """

    found: int
    separator: list[int]


class _SplitFlowNetwork:
    """Vertex capacities via vertex splitting; arcs stored in reverse pairs."""

    def __init__(self, g: FiniteGraph, usable: set[int], split_cap=None):
        self.ids = sorted(usable)
        self.index = {v: i for i, v in enumerate(self.ids)}
        n = len(self.ids)
        self.n = n
        self.source = 2 * n
        self.sink = 2 * n + 1
        unit = split_cap is None
        self.inf = (n + 1) if unit else (n + 2) * (n + 1)
        self.adj: list[list[int]] = [[] for _ in range(2 * n + 2)]
        self.to: list[int] = []
        self.cap: list[int] = []
        for i, v in enumerate(self.ids):
            self._arc(2 * i, 2 * i + 1, 1 if unit else split_cap(v))
        for v in self.ids:
            for u in g.neighbors(v):
                if u in self.index:
                    self._arc(2 * self.index[v] + 1, 2 * self.index[u], self.inf)

    def _arc(self, a: int, b: int, c: int) -> None:
        self.adj[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(c)
        self.adj[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(0)

    def attach_terminals(self, sources, sinks) -> None:
        for a in sorted(sources):
            self._arc(self.source, 2 * self.index[a], self.inf)
        for b in sorted(sinks):
            self._arc(2 * self.index[b] + 1, self.sink, self.inf)

    def max_flow(self, limit: int | None = None) -> int:
        """Breadth-first augmentation; ``limit`` bounds augmentation rounds.

        On unit networks every round pushes exactly one unit, so ``limit``
        caps the number of paths found.
        """
        total = 0
        rounds = 0
        while limit is None or rounds < limit:
            parent = self._bfs()
            if parent is None:
                break
            bottleneck = self.inf
            node = self.sink
            while node != self.source:
                arc = parent[node]
                bottleneck = min(bottleneck, self.cap[arc])
                node = self.to[arc ^ 1]
            node = self.sink
            while node != self.source:
                arc = parent[node]
                self.cap[arc] -= bottleneck
                self.cap[arc ^ 1] += bottleneck
                node = self.to[arc ^ 1]
            total += bottleneck
            rounds += 1
        return total

    def _bfs(self):
        parent: dict[int, int] = {}
        seen = {self.source}
        frontier = [self.source]
        while frontier:
            nxt = []
            for node in frontier:
                for arc in self.adj[node]:
                    if self.cap[arc] <= 0:
                        continue
                    dst = self.to[arc]
                    if dst in seen:
                        continue
                    seen.add(dst)
                    parent[dst] = arc
                    if dst == self.sink:
                        return parent
                    nxt.append(dst)
            frontier = nxt
        return None

    def flowing_paths(self) -> list[list[int]]:
        """Decompose a unit flow into vertex sequences of the original graph."""
        paths = []
        for arc in self.adj[self.source]:
            if arc % 2 != 0:
                continue
            for _ in range(self.inf - self.cap[arc]):
                node = self.to[arc]
                path = []
                while node != self.sink:
                    if node % 2 == 0:
                        path.append(self.ids[node // 2])
                    out = None
                    for a in self.adj[node]:
                        if a % 2 == 0 and self.cap[a ^ 1] > 0 and self.to[a] != self.source:
                            out = a
                            break
                    assert out is not None, "flow conservation violated"
                    self.cap[out ^ 1] -= 1
                    node = self.to[out]
                paths.append(path)
        return paths

    def residual_separator(self) -> list[int]:
        """Vertices whose split arc crosses the source-side residual cut."""
        seen = {self.source}
        stack = [self.source]
        while stack:
            for arc in self.adj[stack.pop()]:
                if self.cap[arc] > 0 and self.to[arc] not in seen:
                    seen.add(self.to[arc])
                    stack.append(self.to[arc])
        return sorted(
            self.ids[i]
            for i in range(self.n)
            if 2 * i in seen and 2 * i + 1 not in seen
        )


def _validated_sides(g: FiniteGraph, A, B, forbidden):
    A, B, forbidden = set(A), set(B), set(forbidden)
    if not A or not B:
        raise ValueError("A and B must be non-empty")
    if A & forbidden or B & forbidden:
        raise ValueError("A and B must be disjoint from forbidden")
    for v in A | B | forbidden:
        if not g.has_vertex(v):
            raise ValueError(f"vertex {v} not in graph")
    return A, B, forbidden


def _trim(path: Path, A: set[int], B: set[int]) -> Path:
    start = max(i for i, v in enumerate(path) if v in A)
    end = next(i for i in range(start, len(path)) if path[i] in B)
    return path[start : end + 1]


def max_vertex_disjoint_paths(
    g: FiniteGraph, A, B, forbidden=(), limit: int | None = None
) -> list[Path]:
    """Maximum set of pairwise vertex-disjoint A-B paths avoiding ``forbidden``.

    Paths meet A exactly in their first vertex and B exactly in their last;
    a vertex in both A and B yields a single-vertex path.  ``limit`` stops the
    search early once that many paths are found.
    """
    A, B, forbidden = _validated_sides(g, A, B, forbidden)
    net = _SplitFlowNetwork(g, set(g.vertices) - forbidden)
    net.attach_terminals(A, B)
    net.max_flow(limit=limit)
    paths = [_trim(p, A, B) for p in net.flowing_paths()]
    paths.sort(key=lambda p: p[0])
    return paths


def min_vertex_separator(g: FiniteGraph, A, B, forbidden=()) -> list[int]:
    """A vertex set of minimum size whose removal disconnects A from B.

    Its size equals ``len(max_vertex_disjoint_paths(g, A, B, forbidden))``.
    The separator may contain vertices of A and B, but interior vertices are
    preferred when a cut of equal size exists through them (the A-B vertices
    carry a slightly higher cut weight).
    """
    A, B, forbidden = _validated_sides(g, A, B, forbidden)
    usable = set(g.vertices) - forbidden
    n = len(usable)
    endpoints = A | B
    net = _SplitFlowNetwork(
        g, usable, split_cap=lambda v: (n + 2) if v in endpoints else (n + 1)
    )
    net.attach_terminals(A, B)
    net.max_flow()
    return net.residual_separator()


def family_violations(fam: PathFamily) -> list[str]:
    """Re-check the PathFamily invariants; empty list means valid."""
    src = set(fam.source_ray.vertices)
    dst = set(fam.target_ray.vertices)
    out = []
    for idx, p in enumerate(fam.paths):
        if not p:
            out.append(f"path {idx} empty")
            continue
        if len(set(p)) != len(p):
            out.append(f"path {idx} repeats a vertex")
        if p[0] not in src:
            out.append(f"path {idx} does not start on the source ray")
        if p[-1] not in dst:
            out.append(f"path {idx} does not end on the target ray")
        if any(v in src or v in dst for v in p[1:-1]):
            out.append(f"path {idx} has an internal vertex on a ray")
    if fam.pairwise_disjoint:
        seen: dict[int, int] = {}
        for idx, p in enumerate(fam.paths):
            for v in p:
                if v in seen and seen[v] != idx:
                    out.append(f"paths {seen[v]} and {idx} share vertex {v}")
                    break
                seen[v] = idx
    return out


def connecting_family(
    g: FiniteGraph, src: "Ray", dst: "Ray", t: int, forbidden=()
) -> PathFamily | InsufficientPaths:
    """At least ``t`` pairwise disjoint src-dst ray paths, or the obstruction.

    Paths have no internal vertex on either ray.  On failure the returned
    ``InsufficientPaths`` carries the separator certificate.
    """
    if t < 1:
        raise ValueError("threshold t must be positive")
    src_set, dst_set = set(src.vertices), set(dst.vertices)
    if src_set & dst_set:
        raise ValueError("rays intersect; connecting family undefined")
    forbidden = set(forbidden)
    A = src_set - forbidden
    B = dst_set - forbidden
    if not A or not B:
        return InsufficientPaths(found=0, separator=[])
    paths = max_vertex_disjoint_paths(g, A, B, forbidden)
    if len(paths) < t:
        return InsufficientPaths(
            found=len(paths), separator=min_vertex_separator(g, A, B, forbidden)
        )
    attach = {v: i for i, v in enumerate(dst.vertices)}
    paths.sort(key=lambda p: attach[p[-1]])
    return PathFamily(source_ray=src, target_ray=dst, paths=paths, pairwise_disjoint=True)


def oriented_paths(fam: PathFamily, src: "Ray") -> list[Path]:
    """Family paths flipped as needed so each starts on ``src``."""
    src_set = set(src.vertices)
    return [list(p) if p[0] in src_set else list(reversed(p)) for p in fam.paths]
