"""Finite star-comb extraction on a connected graph with a marked vertex set.

Given a connected graph g, a target set U and a size k, the extractor returns
either a subdivided star with k leaves in U, or a comb: a spine path with k
pairwise disjoint attachment paths to distinct teeth in U.  Both searches run
on a breadth-first spanning tree and are exact on trees; on general graphs
``Exhausted`` is a legal answer and callers treat it as "raise parameters".

Certificates are re-checked edge by edge by independent verifiers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph_core import FiniteGraph

Path = list[int]


@dataclass
class Star:
    """Center plus k spokes that pairwise share exactly the center.

    A zero-length spoke (the center itself as a leaf) is permitted.
    """

    center: int
    leaves: list[int]
    spokes: list[Path]


@dataclass
class Comb:
    """Spine path plus k disjoint attachment paths to distinct teeth in U.

    Attachments meet the spine exactly at their own distinct spine vertices;
    a zero-length attachment (tooth on the spine) is permitted.
    """

    spine: Path
    teeth: list[int]
    attachments: list[Path]


@dataclass
class Exhausted:
    """Neither a size-k star nor a size-k comb was found."""

    k: int


class _SpanningTree:
    """BFS spanning tree with per-vertex U bookkeeping.

    In a tree, the components hanging off a path are child subtrees that the
    path does not enter plus, for the path's topmost vertex, the parent side;
    each carries a precomputed U count so availability checks are O(1).
    """

    def __init__(self, g: FiniteGraph, root: int, U: set[int]):
        self.g = g
        self.root = root
        self.U = U
        parent: dict[int, int | None] = {root: None}
        order = [root]
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for u in g.neighbors(v):
                    if u not in parent:
                        parent[u] = v
                        nxt.append(u)
            order.extend(nxt)
            frontier = nxt
        self.parent = parent
        self.children: dict[int, list[int]] = {v: [] for v in parent}
        for v, p in parent.items():
            if p is not None:
                self.children[p].append(v)
        for v in self.children:
            self.children[v].sort()
        self.u_count: dict[int, int] = {}
        for v in reversed(order):
            self.u_count[v] = (1 if v in U else 0) + sum(
                self.u_count[c] for c in self.children[v]
            )
        self.total_u = self.u_count[root]

    def down_u_path(self, top: int) -> Path | None:
        """Tree path from ``top`` down to the nearest U vertex of its subtree."""
        if self.u_count[top] == 0:
            return None
        walk = {top: None}
        frontier = [top]
        while frontier:
            nxt = []
            for w in frontier:
                if w in self.U:
                    path = [w]
                    while walk[path[-1]] is not None:
                        path.append(walk[path[-1]])
                    return path[::-1]
                for c in self.children[w]:
                    if self.u_count[c] > 0:
                        walk[c] = w
                        nxt.append(c)
            frontier = nxt
        return None

    def up_u_path(self, v: int) -> Path | None:
        """Tree path from v through its parent to the nearest U vertex outside
        v's subtree."""
        if self.parent[v] is None or self.total_u - self.u_count[v] == 0:
            return None
        prev: dict[int, int] = {self.parent[v]: v}
        frontier = [self.parent[v]]
        while frontier:
            nxt = []
            for w in frontier:
                if w in self.U:
                    path = [w]
                    while path[-1] != v:
                        path.append(prev[path[-1]])
                    return path[::-1]
                nbrs = list(self.children[w])
                if self.parent[w] is not None:
                    nbrs.append(self.parent[w])
                for u in sorted(nbrs):
                    if u not in prev and u != v:
                        prev[u] = w
                        nxt.append(u)
            frontier = nxt
        return None

    def tree_path(self, a: int, b: int) -> Path:
        anc = [a]
        while self.parent[anc[-1]] is not None:
            anc.append(self.parent[anc[-1]])
        index = {v: i for i, v in enumerate(anc)}
        walk = [b]
        while walk[-1] not in index:
            walk.append(self.parent[walk[-1]])
        return anc[: index[walk[-1]] + 1] + walk[-2::-1]


def _try_star(tree: _SpanningTree, k: int, center_leaf: bool) -> Star | None:
    for v in sorted(tree.parent):
        count = 1 if center_leaf and v in tree.U else 0
        count += sum(1 for c in tree.children[v] if tree.u_count[c] > 0)
        up = tree.parent[v] is not None and tree.total_u - tree.u_count[v] > 0
        if up:
            count += 1
        if count < k:
            continue
        spokes: list[Path] = []
        if center_leaf and v in tree.U:
            spokes.append([v])
        for c in tree.children[v]:
            if len(spokes) == k:
                break
            if tree.u_count[c] > 0:
                spokes.append([v] + tree.down_u_path(c))
        if len(spokes) < k and up:
            spokes.append(tree.up_u_path(v))
        return Star(center=v, leaves=[p[-1] for p in spokes], spokes=spokes)
    return None


def _spine_tooth_count(tree: _SpanningTree, spine: Path) -> int:
    neighbors_on_spine: dict[int, set[int]] = {}
    for a, b in zip(spine, spine[1:]):
        neighbors_on_spine.setdefault(a, set()).add(b)
        neighbors_on_spine.setdefault(b, set()).add(a)
    count = 0
    for s in spine:
        block = neighbors_on_spine.get(s, set())
        if s in tree.U:
            count += 1
        elif any(
            tree.u_count[c] > 0 for c in tree.children[s] if c not in block
        ):
            count += 1
        elif (
            tree.parent[s] is not None
            and tree.parent[s] not in block
            and tree.total_u - tree.u_count[s] > 0
        ):
            count += 1
    return count


def _spine_attachments(tree: _SpanningTree, spine: Path) -> list[Path]:
    neighbors_on_spine: dict[int, set[int]] = {}
    for a, b in zip(spine, spine[1:]):
        neighbors_on_spine.setdefault(a, set()).add(b)
        neighbors_on_spine.setdefault(b, set()).add(a)
    out = []
    for s in spine:
        block = neighbors_on_spine.get(s, set())
        if s in tree.U:
            out.append([s])
            continue
        attached = None
        for c in tree.children[s]:
            if c not in block and tree.u_count[c] > 0:
                attached = [s] + tree.down_u_path(c)
                break
        if (
            attached is None
            and tree.parent[s] is not None
            and tree.parent[s] not in block
            and tree.total_u - tree.u_count[s] > 0
        ):
            attached = tree.up_u_path(s)
        if attached is not None:
            out.append(attached)
    return out


def _try_comb(tree: _SpanningTree, k: int) -> Comb | None:
    verts = sorted(tree.parent)
    for i, a in enumerate(verts):
        for b in verts[i:]:
            spine = tree.tree_path(a, b)
            if _spine_tooth_count(tree, spine) >= k:
                attachments = _spine_attachments(tree, spine)[:k]
                return Comb(
                    spine=spine,
                    teeth=[p[-1] for p in attachments],
                    attachments=attachments,
                )
    return None


def star_or_comb(
    g: FiniteGraph, U, k: int, allow_center_leaf: bool = True
) -> Star | Comb | Exhausted:
    """Find a verifier-valid star or comb with k leaves/teeth in U.

    A breadth-first spanning tree is rooted at the lowest-id U vertex.  The
    star check looks for a vertex with k U-occupied tree directions; the comb
    check scans spine paths exhaustively.  Both searches are complete on
    trees; on general graphs Exhausted is a legal answer.

    ``allow_center_leaf=False`` forbids the degenerate zero-length spoke, for
    callers that need the center distinct from every leaf.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if not g.is_connected():
        raise ValueError("star_or_comb requires a connected graph")
    U = set(U)
    if not U <= set(g.vertices):
        raise ValueError("U must be a subset of the vertices")
    if not U:
        return Exhausted(k=k)
    tree = _SpanningTree(g, min(U), U)
    star = _try_star(tree, k, allow_center_leaf)
    if star is not None:
        return star
    comb = _try_comb(tree, k)
    if comb is not None:
        return comb
    return Exhausted(k=k)


def verify_star(g: FiniteGraph, star: Star) -> list[str]:
    """Re-check every Star invariant against g; empty list means valid."""
    out = []
    if len(star.leaves) != len(star.spokes):
        return ["leaf and spoke counts differ"]
    if len(set(star.leaves)) != len(star.leaves):
        out.append("leaves are not distinct")
    seen: set[int] = set()
    for idx, (leaf, spoke) in enumerate(zip(star.leaves, star.spokes)):
        if not spoke or spoke[0] != star.center:
            out.append(f"spoke {idx} does not start at the center")
            continue
        if spoke[-1] != leaf:
            out.append(f"spoke {idx} does not end at its leaf")
        if len(set(spoke)) != len(spoke):
            out.append(f"spoke {idx} repeats a vertex")
        for u, v in zip(spoke, spoke[1:]):
            if not g.has_edge(u, v):
                out.append(f"spoke {idx} uses non-edge {u}-{v}")
                break
        body = set(spoke) - {star.center}
        if seen & body:
            out.append(f"spokes intersect at {sorted(seen & body)}")
        seen |= body
    return out


def verify_comb(g: FiniteGraph, comb: Comb) -> list[str]:
    """Re-check every Comb invariant against g; empty list means valid."""
    out = []
    if len(comb.teeth) != len(comb.attachments):
        return ["tooth and attachment counts differ"]
    if len(set(comb.spine)) != len(comb.spine):
        out.append("spine repeats a vertex")
    for u, v in zip(comb.spine, comb.spine[1:]):
        if not g.has_edge(u, v):
            out.append(f"spine uses non-edge {u}-{v}")
            break
    if len(set(comb.teeth)) != len(comb.teeth):
        out.append("teeth are not distinct")
    on_spine = set(comb.spine)
    seen_roots: set[int] = set()
    seen_body: set[int] = set()
    for idx, (tooth, attach) in enumerate(zip(comb.teeth, comb.attachments)):
        if not attach:
            out.append(f"attachment {idx} empty")
            continue
        if attach[0] not in on_spine:
            out.append(f"attachment {idx} does not start on the spine")
            continue
        if attach[-1] != tooth:
            out.append(f"attachment {idx} does not end at its tooth")
        if len(set(attach)) != len(attach):
            out.append(f"attachment {idx} repeats a vertex")
        for u, v in zip(attach, attach[1:]):
            if not g.has_edge(u, v):
                out.append(f"attachment {idx} uses non-edge {u}-{v}")
                break
        if attach[0] in seen_roots:
            out.append(f"attachment {idx} shares its spine vertex with another")
        seen_roots.add(attach[0])
        body = set(attach[1:])
        if body & on_spine:
            out.append(f"attachment {idx} touches the spine twice")
        if body & seen_body:
            out.append(f"attachment {idx} intersects another attachment")
        seen_body |= body
    return out
