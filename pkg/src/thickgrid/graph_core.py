"""Vertex-oracle graphs, built-in infinite families, finite truncations and file I/O.

Infinite graphs are represented by a pure neighbor oracle over integer vertex
ids.  Ids encode coordinate pairs through a fixed pairing function so that
every output (edge lists, DOT, certificates) is stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

FAMILIES = ("hex_quarter_grid", "grid2d", "binary_tree", "ladder", "file")

DEFAULT_VERTEX_BUDGET = 30_000


class EdgeListParseError(ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def pair_coords(i: int, j: int) -> int:
    """Map a coordinate pair to a single id (Cantor pairing, exact)."""
    if i < 0 or j < 0:
        raise ValueError(f"coordinates must be non-negative, got ({i}, {j})")
    s = i + j
    return s * (s + 1) // 2 + j


def unpair_id(v: int) -> tuple[int, int]:
    """Inverse of :func:`pair_coords`."""
    if v < 0:
        raise ValueError(f"vertex ids are non-negative, got {v}")
    w = (math.isqrt(8 * v + 1) - 1) // 2
    j = v - w * (w + 1) // 2
    return w - j, j


class FiniteGraph:
    """Simple undirected graph with sorted neighbor lists.

    Immutable by convention: all operations return new graphs.
    """

    __slots__ = ("vertices", "adj")

    def __init__(self, vertices: tuple[int, ...], adj: dict[int, tuple[int, ...]]):
        self.vertices = vertices
        self.adj = adj

    @classmethod
    def from_edges(cls, edges, extra_vertices=()) -> "FiniteGraph":
        adj: dict[int, set[int]] = {v: set() for v in extra_vertices}
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop edge {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        vertices = tuple(sorted(adj))
        return cls(vertices, {v: tuple(sorted(adj[v])) for v in vertices})

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_vertex(self, v: int) -> bool:
        return v in self.adj

    def has_edge(self, u: int, v: int) -> bool:
        return u in self.adj and v in self.adj[u]

    def edges(self):
        """Yield each edge once as (u, v) with u < v, in sorted order."""
        for u in self.vertices:
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj.values()) // 2

    def induced(self, keep) -> "FiniteGraph":
        keep = set(keep)
        vertices = tuple(v for v in self.vertices if v in keep)
        adj = {v: tuple(u for u in self.adj[v] if u in keep) for v in vertices}
        return FiniteGraph(vertices, adj)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for u in self.adj[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, FiniteGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.adj == other.adj

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self.adj.items()))))

    def __repr__(self):
        return f"FiniteGraph({len(self.vertices)} vertices, {self.num_edges()} edges)"


@dataclass(frozen=True)
class LazyGraph:
    """Deterministic neighbor oracle over a locally finite graph.

    ``rule`` names a built-in family; the ``file`` rule wraps a finite graph
    loaded from an edge list.  The oracle is pure: identical queries always
    return identical sorted neighbor lists, and adjacency is symmetric.
    """

    rule: str
    finite: FiniteGraph | None = None

    def __post_init__(self):
        if self.rule not in FAMILIES:
            raise ValueError(f"unknown family {self.rule!r}")
        if (self.rule == "file") != (self.finite is not None):
            raise ValueError("the 'file' rule and only it carries a finite graph")

    def origin(self) -> int:
        """Canonical root vertex (coordinate (0, 0); lowest id for files)."""
        if self.rule == "file":
            if not self.finite.vertices:
                raise ValueError("empty file-backed graph has no origin")
            return self.finite.vertices[0]
        return pair_coords(0, 0)

    def is_valid_vertex(self, v: int) -> bool:
        if self.rule == "file":
            return self.finite.has_vertex(v)
        if v < 0:
            return False
        i, j = unpair_id(v)
        if self.rule == "binary_tree":
            return j < (1 << i) if i < 64 else False
        if self.rule == "ladder":
            return i in (0, 1)
        return True

    def coords_known(self) -> bool:
        return self.rule != "file"

    def label(self, v: int) -> str | None:
        """Coordinate label "(i,j)" for DOT output, when ids carry coordinates."""
        if not self.coords_known():
            return None
        i, j = unpair_id(v)
        return f"({i},{j})"

    def neighbors(self, v: int) -> list[int]:
        if not self.is_valid_vertex(v):
            raise ValueError(f"vertex {v} is not valid under rule {self.rule!r}")
        if self.rule == "file":
            return list(self.finite.neighbors(v))
        i, j = unpair_id(v)
        coords: list[tuple[int, int]] = []
        if self.rule == "hex_quarter_grid":
            if j > 0:
                coords.append((i, j - 1))
            coords.append((i, j + 1))
            # Staggered rungs: at most one per vertex since the left-rung
            # parity (j - i odd) and right-rung parity (j - i even) differ.
            if i > 0 and j >= i - 1 and (j - (i - 1)) % 2 == 0:
                coords.append((i - 1, j))
            if j >= i and (j - i) % 2 == 0:
                coords.append((i + 1, j))
        elif self.rule == "grid2d":
            if i > 0:
                coords.append((i - 1, j))
            if j > 0:
                coords.append((i, j - 1))
            coords.append((i + 1, j))
            coords.append((i, j + 1))
        elif self.rule == "binary_tree":
            # Vertex (depth, position); children at (depth+1, 2p) and (depth+1, 2p+1).
            if i > 0:
                coords.append((i - 1, j // 2))
            coords.append((i + 1, 2 * j))
            coords.append((i + 1, 2 * j + 1))
        elif self.rule == "ladder":
            if j > 0:
                coords.append((i, j - 1))
            coords.append((i, j + 1))
            coords.append((1 - i, j))
        return sorted(pair_coords(a, b) for a, b in coords)


def lazy_graph(rule: str) -> LazyGraph:
    """Construct a built-in infinite family by name."""
    return LazyGraph(rule=rule)


def lazy_from_finite(fg: FiniteGraph) -> LazyGraph:
    """Wrap a finite graph so it can be used wherever an oracle is expected."""
    return LazyGraph(rule="file", finite=fg)


def neighbors(g: LazyGraph, v: int) -> list[int]:
    """Sorted, duplicate-free neighbor list of ``v`` under ``g``'s rule."""
    return g.neighbors(v)


@dataclass
class Truncation:
    """Finite ball of a lazy graph together with its BFS metadata.

    ``radius`` is the realized radius: it equals the requested one unless the
    vertex budget stopped the expansion earlier, in which case ``capped`` is
    set and ``radius`` is the last fully explored sphere.
    """

    graph: FiniteGraph
    root: int
    radius: int
    dist: dict[int, int]
    requested_radius: int
    capped: bool = False
    spheres: list[list[int]] = field(default_factory=list)

    def sphere(self, r: int) -> list[int]:
        if r < 0 or r > self.radius:
            return []
        return self.spheres[r]


def truncate(
    g: LazyGraph,
    root: int | None = None,
    radius: int = 0,
    max_vertices: int | None = DEFAULT_VERTEX_BUDGET,
) -> Truncation:
    """Breadth-first truncation of ``g`` to ``ball(root, radius)``.

    Expansion stops early when admitting the next full sphere would exceed
    ``max_vertices``; the result is then the largest complete ball within
    budget.  Pass ``max_vertices=None`` to disable the cap.
    """
    if root is None:
        root = g.origin()
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if not g.is_valid_vertex(root):
        raise ValueError(f"root {root} is not valid under rule {g.rule!r}")
    dist = {root: 0}
    spheres = [[root]]
    frontier = [root]
    realized = 0
    capped = False
    for r in range(1, radius + 1):
        nxt: list[int] = []
        seen_local = set()
        for v in frontier:
            for u in g.neighbors(v):
                if u not in dist and u not in seen_local:
                    seen_local.add(u)
                    nxt.append(u)
        if not nxt:
            break
        if max_vertices is not None and len(dist) + len(nxt) > max_vertices:
            capped = True
            break
        nxt.sort()
        for u in nxt:
            dist[u] = r
        spheres.append(nxt)
        frontier = nxt
        realized = r
    vertices = tuple(sorted(dist))
    adj = {
        v: tuple(u for u in g.neighbors(v) if u in dist) for v in vertices
    }
    return Truncation(
        graph=FiniteGraph(vertices, adj),
        root=root,
        radius=realized,
        dist=dist,
        requested_radius=radius,
        capped=capped,
        spheres=spheres,
    )


def ball(g: LazyGraph, root: int | None = None, r: int = 0) -> FiniteGraph:
    """Induced subgraph on all vertices at oracle-distance <= r from root."""
    return truncate(g, root, r, max_vertices=None).graph


def sphere(g: LazyGraph, root: int | None = None, r: int = 0) -> set[int]:
    """Vertices at exact oracle-distance r from root."""
    t = truncate(g, root, r, max_vertices=None)
    if r > t.radius:
        return set()
    return set(t.sphere(r))


@dataclass(frozen=True)
class HexPrefixSpec:
    """Finite prefix of the hexagonal quarter grid: ``cols`` columns, ``depth`` rows."""

    cols: int
    depth: int

    def __post_init__(self):
        if self.cols < 1 or self.depth < 1:
            raise ValueError("cols and depth must be positive")


def rung_at(i: int, j: int) -> bool:
    """Whether column i carries a rung to column i+1 at row j."""
    return j >= i and (j - i) % 2 == 0


def pattern_vertices(spec: HexPrefixSpec) -> list[tuple[int, int]]:
    return [(i, j) for i in range(spec.cols) for j in range(spec.depth)]


def pattern_edges(spec: HexPrefixSpec) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Edges of the hex prefix, each as a lexicographically ordered vertex pair."""
    out = []
    for i in range(spec.cols):
        for j in range(spec.depth):
            if j + 1 < spec.depth:
                out.append(((i, j), (i, j + 1)))
            if i + 1 < spec.cols and rung_at(i, j):
                out.append(((i, j), (i + 1, j)))
    out.sort()
    return out


def hex_prefix(spec: HexPrefixSpec) -> FiniteGraph:
    """Realize the hex prefix on coordinate ids (same ids as the lazy family)."""
    edges = [
        (pair_coords(*a), pair_coords(*b)) for a, b in pattern_edges(spec)
    ]
    vertices = [pair_coords(i, j) for i, j in pattern_vertices(spec)]
    return FiniteGraph.from_edges(edges, extra_vertices=vertices)


def load_edge_list(text: str) -> FiniteGraph:
    """Parse the edge-list format: one "u v" edge per line, '#' comments ignored."""
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(line_no, f"expected two integers, got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(line_no, f"expected two integers, got {raw!r}") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(line_no, "vertex ids must be non-negative")
        if u == v:
            raise EdgeListParseError(line_no, f"loop edge {u} {v}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListParseError(line_no, f"duplicate edge {u} {v}")
        seen.add(key)
        edges.append(key)
    return FiniteGraph.from_edges(edges)


def store_edge_list(fg: FiniteGraph) -> str:
    """Canonical edge-list text: smaller endpoint first, lines sorted lexicographically.

    Isolated vertices are not representable in this format.
    """
    lines = [f"{u} {v}\n" for u, v in fg.edges()]
    lines.sort()
    return "".join(lines)


def to_dot(fg: FiniteGraph, labels: dict[int, str] | None = None) -> str:
    """DOT text for an undirected graph, vertices labeled when labels are given."""
    out = ["graph G {\n"]
    for v in fg.vertices:
        if labels and v in labels:
            out.append(f'  {v} [label="{labels[v]}"];\n')
        else:
            out.append(f"  {v};\n")
    for u, v in sorted(fg.edges()):
        out.append(f"  {u} -- {v};\n")
    out.append("}\n")
    return "".join(out)
