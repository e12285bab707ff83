"""Hex-prefix extraction: the inductive highway construction, the chained
construction, the ray-adjacency graph with rerouting, and the end-to-end
pipeline.

Two construction routes produce embeddings.  ``lemma_construct`` realizes grid
columns on leaf rays L_0, L_1, ... and routes every rung through a highway ray
C: each rung consumes one fresh path from each of the two column families plus
the C-segment between their attachment points, with all attachment points on C
chosen in strictly increasing order so the consumed segments are pairwise
disjoint.  ``comb_construct`` joins consecutive chain rays directly by family
paths.  Both are greedy with explicit disjointness filtering and report
``Insufficient`` with the failing stage instead of backtracking.

Success is never self-certified: every embedding is re-checked by the
independent subdivision verifier before it is returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .disjoint_paths import PathFamily, max_vertex_disjoint_paths
from .embedding import Embedding
from .graph_core import (
    DEFAULT_VERTEX_BUDGET,
    FiniteGraph,
    HexPrefixSpec,
    LazyGraph,
    Truncation,
    lazy_from_finite,
    rung_at,
    truncate,
)
from .rays_ends import (
    EndWitness,
    NotFound,
    Ray,
    _witness_search,
    _witness_violations_in_trunc,
)
from .star_comb import Comb, Exhausted, Star, star_or_comb
from .subdivision_check import verify_embedding

log = logging.getLogger("thickgrid.grid_extract")


@dataclass
class Insufficient:
    """A construction ran out of material; ``stage`` names where."""

    stage: str
    detail: str = ""


@dataclass
class RayAdjacency:
    """Finite graph whose vertices are rays and whose edges carry path families."""

    rays: list[Ray]
    edges: dict[tuple[int, int], PathFamily] = field(default_factory=dict)
    dropped: list[tuple[int, str]] = field(default_factory=list)

    def as_graph(self) -> FiniteGraph:
        alive = [i for i in range(len(self.rays)) if i not in {d for d, _ in self.dropped}]
        return FiniteGraph.from_edges(self.edges.keys(), extra_vertices=alive)


@dataclass
class ExtractionReport:
    """Outcome of the pipeline: a verified embedding or the failing stage."""

    outcome: str
    case_taken: str | None = None
    stage: str | None = None
    diagnostic: str = ""
    embedding: Embedding | None = None
    params: dict = field(default_factory=dict)
    stage_log: list[str] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.outcome == "success"

    def to_text(self) -> str:
        lines = ["extraction report"]
        params = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        if params:
            lines.append(params)
        lines.extend(self.stage_log)
        lines.append(f"outcome: {self.outcome}")
        if not self.success:
            lines.append(f"failed stage: {self.stage}")
            if self.diagnostic:
                lines.append(f"diagnostic: {self.diagnostic}")
        return "\n".join(lines) + "\n"


class _RayIndex:
    """Position lookup along a ray."""

    def __init__(self, ray: Ray):
        self.ray = ray
        self.pos = {v: i for i, v in enumerate(ray.vertices)}
        self.vertex_set = set(ray.vertices)

    def segment(self, a_idx: int, b_idx: int) -> list[int]:
        if a_idx <= b_idx:
            return self.ray.vertices[a_idx : b_idx + 1]
        return self.ray.vertices[b_idx : a_idx + 1][::-1]


def _usable_family_paths(fam: PathFamily, src: _RayIndex, dst: _RayIndex, reserved: set[int]):
    """Normalize family paths to run src -> dst and pre-filter static validity.

    Keeps repetition-free paths whose interior avoids every reserved ray
    vertex; yields (dst_index, src_index, path) sorted by attachment on the
    destination ray, lowest original path id first.
    """
    out = []
    for original_id, p in enumerate(fam.paths):
        if len(p) < 1 or len(set(p)) != len(p):
            continue
        if p[0] in src.pos and p[-1] in dst.pos:
            path = list(p)
        elif p[0] in dst.pos and p[-1] in src.pos:
            path = list(reversed(p))
        else:
            continue
        if any(v in reserved for v in path[1:-1]):
            continue
        out.append((dst.pos[path[-1]], src.pos[path[0]], original_id, path))
    out.sort(key=lambda item: (item[0], item[2]))
    return out


class _Weaver:
    """Shared row-major column bookkeeping for both constructions."""

    def __init__(self, host: FiniteGraph, columns: list[Ray], spec: HexPrefixSpec):
        self.host = host
        self.columns = [_RayIndex(r) for r in columns]
        self.spec = spec
        self.cursor = [-1] * spec.cols
        self.used: set[int] = set()
        self.branch: dict[tuple[int, int], int] = {}
        self.edge_paths: dict[tuple, list[int]] = {}

    def place_rung(self, i: int, j: int, path: list[int], src_idx: int, dst_idx: int) -> None:
        self.branch[(i, j)] = path[0]
        self.branch[(i + 1, j)] = path[-1]
        self.cursor[i] = src_idx
        self.cursor[i + 1] = dst_idx
        self.edge_paths[((i, j), (i + 1, j))] = path
        self.used |= set(path)

    def fill_plain_branch(self, i: int, j: int) -> Insufficient | None:
        nxt = self.cursor[i] + 1
        ray = self.columns[i].ray.vertices
        if nxt >= len(ray):
            return Insufficient(
                stage=f"column {i} at row {j}",
                detail=f"column ray exhausted after {len(ray)} vertices",
            )
        self.cursor[i] = nxt
        self.branch[(i, j)] = ray[nxt]
        return None

    def add_verticals(self, j: int) -> None:
        for i in range(self.spec.cols):
            a = self.columns[i].pos[self.branch[(i, j - 1)]]
            b = self.columns[i].pos[self.branch[(i, j)]]
            self.edge_paths[((i, j - 1), (i, j))] = self.columns[i].segment(a, b)

    def result(self) -> Embedding:
        return Embedding(pattern=self.spec, branch=self.branch, edge_paths=self.edge_paths)


def _validate_disjoint_rays(rays: list[Ray], what: str) -> None:
    seen: set[int] = set()
    for idx, ray in enumerate(rays):
        if not ray.vertices:
            raise ValueError(f"{what} {idx} is empty")
        if seen & set(ray.vertices):
            raise ValueError(f"{what}s are not pairwise disjoint (ray {idx})")
        seen |= set(ray.vertices)


def lemma_construct(
    host: FiniteGraph,
    C: Ray,
    L: list[Ray],
    P: list[PathFamily],
    spec: HexPrefixSpec,
) -> Embedding | Insufficient:
    """Embed the hex prefix using leaf rays as columns and C as the highway.

    The base rung consumes the P_0 path with the C-minimal attachment; every
    later attachment point on C is chosen strictly greater than all previous
    ones, so the C-segments used by rungs are pairwise disjoint and appear in
    increasing C-order.  Columns climb their rays as rows are processed;
    selection is greedy with full disjointness filtering, and exhaustion of a
    family, a column ray or C itself yields ``Insufficient``.
    """
    _validate_disjoint_rays([C] + L, "ray")
    if spec.cols > len(L):
        raise ValueError(f"spec needs {spec.cols} columns but only {len(L)} rays given")
    if len(P) < spec.cols:
        raise ValueError(f"spec needs {spec.cols} families but only {len(P)} given")
    c_index = _RayIndex(C)
    reserved = set(C.vertices)
    for ray in L:
        reserved |= set(ray.vertices)
    weaver = _Weaver(host, L[:spec.cols], spec)
    families = [
        _usable_family_paths(P[i], weaver.columns[i], c_index, reserved)
        for i in range(spec.cols)
    ]
    consumed = [set() for _ in range(spec.cols)]
    c_cursor = -1

    def pick(i: int, c_floor: int):
        for c_idx, l_idx, pid, path in families[i]:
            if pid in consumed[i] or c_idx <= c_floor or l_idx <= weaver.cursor[i]:
                continue
            if weaver.used & set(path):
                continue
            return c_idx, l_idx, pid, path
        return None

    if spec.cols == 1:
        base = pick(0, -1)
        if base is None:
            return Insufficient(stage="base", detail="no usable path in family 0")
        weaver.cursor[0] = base[1] - 1
    for j in range(spec.depth):
        for i in range(spec.cols - 1):
            if not rung_at(i, j):
                continue
            left = pick(i, c_cursor)
            if left is None:
                return Insufficient(
                    stage=f"rung ({i},{j})-({i + 1},{j})",
                    detail=f"family {i} has no usable path above C-position {c_cursor}",
                )
            right = pick(i + 1, left[0])
            if right is None:
                return Insufficient(
                    stage=f"rung ({i},{j})-({i + 1},{j})",
                    detail=f"family {i + 1} has no usable path above C-position {left[0]}",
                )
            c_lo, l_left, pid_left, p_left = left
            c_hi, l_right, pid_right, p_right = right
            rung_path = p_left + c_index.segment(c_lo, c_hi)[1:-1] + p_right[::-1]
            if len(set(rung_path)) != len(rung_path):
                return Insufficient(
                    stage=f"rung ({i},{j})-({i + 1},{j})",
                    detail="assembled rung self-intersects",
                )
            consumed[i].add(pid_left)
            consumed[i + 1].add(pid_right)
            weaver.place_rung(i, j, rung_path, l_left, l_right)
            c_cursor = c_hi
        for i in range(spec.cols):
            if (i, j) not in weaver.branch:
                failure = weaver.fill_plain_branch(i, j)
                if failure is not None:
                    return failure
        if j > 0:
            weaver.add_verticals(j)
    return weaver.result()


def comb_construct(
    host: FiniteGraph,
    chain: list[Ray],
    families: list[PathFamily],
    spec: HexPrefixSpec,
) -> Embedding | Insufficient:
    """Embed the hex prefix with column i on chain[i] and rungs from families[i].

    Rung rows follow the pattern's parity rule; paths are consumed greedily in
    increasing attachment order along each pair of rays, with disjointness
    filtering against everything already placed.
    """
    _validate_disjoint_rays(chain, "chain ray")
    if spec.cols > len(chain):
        raise ValueError(f"spec needs {spec.cols} columns but chain has {len(chain)}")
    if len(families) < spec.cols - 1:
        raise ValueError(
            f"spec needs {spec.cols - 1} families but only {len(families)} given"
        )
    reserved: set[int] = set()
    for ray in chain[: spec.cols]:
        reserved |= set(ray.vertices)
    weaver = _Weaver(host, chain[: spec.cols], spec)
    usable = [
        _usable_family_paths(
            families[i], weaver.columns[i], weaver.columns[i + 1], reserved
        )
        for i in range(spec.cols - 1)
    ]
    consumed = [set() for _ in range(max(spec.cols - 1, 0))]
    for j in range(spec.depth):
        for i in range(spec.cols - 1):
            if not rung_at(i, j):
                continue
            chosen = None
            for dst_idx, src_idx, pid, path in usable[i]:
                if pid in consumed[i]:
                    continue
                if src_idx <= weaver.cursor[i] or dst_idx <= weaver.cursor[i + 1]:
                    continue
                if weaver.used & set(path):
                    continue
                chosen = (dst_idx, src_idx, pid, path)
                break
            if chosen is None:
                return Insufficient(
                    stage=f"column {i}->{i + 1} rung at row {j}",
                    detail=f"family {i} exhausted",
                )
            dst_idx, src_idx, pid, path = chosen
            consumed[i].add(pid)
            weaver.place_rung(i, j, path, src_idx, dst_idx)
        for i in range(spec.cols):
            if (i, j) not in weaver.branch:
                failure = weaver.fill_plain_branch(i, j)
                if failure is not None:
                    return failure
        if j > 0:
            weaver.add_verticals(j)
    return weaver.result()


def build_ray_adjacency(
    g: LazyGraph,
    witness: EndWitness,
    t: int,
    R: int | None = None,
    root: int | None = None,
    max_vertices: int | None = DEFAULT_VERTEX_BUDGET,
) -> RayAdjacency:
    """Attach witness rays one at a time into a ray-adjacency graph.

    Each new ray first connects to the previously added ray by a family of at
    least t disjoint paths.  Paths crossing earlier rays are rerouted: each is
    truncated at its last vertex on any earlier ray, and the new ray attaches
    to whichever earlier ray collects at least t clean suffixes.  Rays with no
    viable attachment are dropped with a diagnostic.
    """
    trunc = truncate(g, root, R if R is not None else witness.radius, max_vertices)
    return _build_ray_adjacency(trunc, witness, t)


def _build_ray_adjacency(trunc: Truncation, witness: EndWitness, t: int) -> RayAdjacency:
    if t < 1:
        raise ValueError("threshold t must be positive")
    rays = witness.rays
    adjacency = RayAdjacency(rays=rays)
    dropped: set[int] = set()
    vertex_ray: dict[int, int] = {}
    for idx, ray in enumerate(rays):
        for v in ray.vertices:
            vertex_ray[v] = idx

    for n in range(1, len(rays)):
        attached = False
        reasons = []
        for cand in range(n - 1, -1, -1):
            if cand in dropped:
                continue
            paths = max_vertex_disjoint_paths(
                trunc.graph, set(rays[cand].vertices), set(rays[n].vertices)
            )
            if len(paths) < t:
                reasons.append(f"ray {cand}: only {len(paths)} disjoint paths")
                continue
            # Truncate each path at its last vertex on any other witness ray;
            # the suffix is then internally clear of every ray.  Only suffixes
            # starting on an already-admitted ray can carry the attachment.
            groups: dict[int, list[list[int]]] = {}
            for p in paths:
                cut = max(
                    idx
                    for idx, v in enumerate(p[:-1])
                    if v in vertex_ray and vertex_ray[v] != n and vertex_ray[v] not in dropped
                )
                owner = vertex_ray[p[cut]]
                if owner < n:
                    groups.setdefault(owner, []).append(p[cut:])
            count, owner = max(
                ((len(ps), -m) for m, ps in groups.items()), default=(0, 0)
            )
            owner = -owner
            if count < t:
                reasons.append(
                    f"ray {cand}: rerouting scattered paths (best {count} on ray {owner})"
                )
                continue
            suffixes = groups[owner]
            src_pos = {v: i for i, v in enumerate(rays[owner].vertices)}
            suffixes.sort(key=lambda p: src_pos[p[0]])
            key = (min(owner, n), max(owner, n))
            adjacency.edges[key] = PathFamily(
                source_ray=rays[owner],
                target_ray=rays[n],
                paths=suffixes,
                pairwise_disjoint=True,
            )
            log.debug("ray %d attached to ray %d with %d paths", n, owner, count)
            attached = True
            break
        if not attached:
            adjacency.dropped.append((n, "; ".join(reasons) or "no candidate"))
            dropped.add(n)
    return adjacency


def _ray_segment_on(ray: Ray, pos: dict[int, int], a: int, b: int) -> list[int]:
    ia, ib = pos[a], pos[b]
    if ia <= ib:
        return ray.vertices[ia : ib + 1]
    return ray.vertices[ib : ia + 1][::-1]


def _compose_spoke_family(
    adjacency: RayAdjacency, spoke: list[int]
) -> PathFamily:
    """Concatenate stored families along an F-path from center to leaf.

    The composition walks from the leaf toward the center, bridging between
    consecutive hop paths with a segment of the intermediate ray.  Compositions
    that self-intersect or touch the leaf or center rays internally are
    discarded.
    """
    rays = adjacency.rays
    center, leaf = spoke[0], spoke[-1]
    hops = []
    for a, b in zip(spoke, spoke[1:]):
        fam = adjacency.edges[(min(a, b), max(a, b))]
        inner_pos = {v: i for i, v in enumerate(rays[a].vertices)}
        oriented = []
        for p in fam.paths:
            q = list(p) if p[-1] in inner_pos else list(reversed(p))
            oriented.append(q)
        oriented.sort(key=lambda q: inner_pos[q[-1]])
        hops.append(oriented)
    count = min(len(h) for h in hops)
    leaf_set = set(rays[leaf].vertices)
    center_set = set(rays[center].vertices)
    composed = []
    for idx in range(count):
        # hops[s][idx] runs from rays[spoke[s+1]] (outer) to rays[spoke[s]]
        # (inner), so the walk starts with the outermost hop at the leaf.
        full = list(hops[-1][idx])
        ok = True
        for hop_pos in range(len(hops) - 2, -1, -1):
            nxt = hops[hop_pos][idx]
            inter = spoke[hop_pos + 1]
            pos = {v: i for i, v in enumerate(rays[inter].vertices)}
            bridge = _ray_segment_on(rays[inter], pos, full[-1], nxt[0])
            full.extend(bridge[1:])
            full.extend(nxt[1:])
        if len(set(full)) != len(full):
            ok = False
        if ok and (set(full[1:-1]) & (leaf_set | center_set)):
            ok = False
        if ok and (full[0] not in leaf_set or full[-1] not in center_set):
            ok = False
        if ok:
            composed.append(full)
    return PathFamily(
        source_ray=rays[leaf],
        target_ray=rays[center],
        paths=composed,
        pairwise_disjoint=False,
    )


def halin_pipeline(
    g: LazyGraph,
    root: int | None = None,
    *,
    k: int,
    r: int,
    R: int,
    t: int,
    spec: HexPrefixSpec,
    max_vertices: int | None = DEFAULT_VERTEX_BUDGET,
) -> ExtractionReport:
    """End-to-end extraction: witness, ray adjacency, star-comb split, build, verify.

    All failures are report outcomes, never exceptions: the report names the
    failing stage and carries the diagnostic.  A success report holds an
    embedding that has already passed the independent verifier.
    """
    if min(k, r + 1, R, t, spec.cols, spec.depth) < 1:
        raise ValueError("parameters must be positive")
    if spec.cols > k:
        raise ValueError("spec.cols cannot exceed k")
    params = {
        "family": g.rule,
        "k": k,
        "r": r,
        "R": R,
        "t": t,
        "cols": spec.cols,
        "depth": spec.depth,
    }
    report = ExtractionReport(outcome="insufficient", params=params)
    trunc = truncate(g, root, R, max_vertices)
    params["root"] = trunc.root
    report.stage_log.append(
        f"truncation: {len(trunc.graph.vertices)} vertices, radius {trunc.radius}"
        f" (requested {R})"
    )

    witness = _witness_search(trunc, k, r)
    if isinstance(witness, NotFound):
        report.stage = "witness"
        report.diagnostic = witness.detail
        report.stage_log.append(f"witness: not found ({witness.detail})")
        return report
    report.stage_log.append(f"witness: {k} disjoint rays, equivalent at radius {r}")

    adjacency = _build_ray_adjacency(trunc, witness, t)
    f_graph = adjacency.as_graph()
    report.stage_log.append(
        f"ray adjacency: {len(adjacency.edges)} edges, {len(adjacency.dropped)} rays dropped"
    )
    components = _components(f_graph)
    component = max(components, key=lambda c: (len(c), -min(c)))
    if len(component) < spec.cols:
        report.stage = "ray_adjacency"
        report.diagnostic = (
            f"largest connected ray-adjacency component has {len(component)} rays,"
            f" need {spec.cols}"
        )
        report.stage_log.append("ray adjacency: component too small")
        return report
    f_sub = f_graph.induced(component)

    # The center of a star becomes the highway ray, so it must stay distinct
    # from every leaf: degenerate zero-length spokes are disallowed here.
    outcome = star_or_comb(f_sub, set(component), spec.cols, allow_center_leaf=False)
    if isinstance(outcome, Exhausted):
        report.stage = "star_comb"
        report.diagnostic = f"no star or comb of size {spec.cols} in the ray adjacency"
        report.stage_log.append("star_comb: exhausted")
        return report

    if isinstance(outcome, Comb):
        report.case_taken = "comb"
        report.stage_log.append(f"star_comb: comb (spine length {len(outcome.spine)})")
        chain = [adjacency.rays[i] for i in outcome.spine]
        families = [
            adjacency.edges[(min(a, b), max(a, b))]
            for a, b in zip(outcome.spine, outcome.spine[1:])
        ]
        built = comb_construct(trunc.graph, chain, families, spec)
    else:
        assert isinstance(outcome, Star)
        report.case_taken = "star"
        report.stage_log.append(
            f"star_comb: star (center ray {outcome.center}, {len(outcome.leaves)} leaves)"
        )
        leaves = outcome.leaves
        spokes = outcome.spokes
        families = [_compose_spoke_family(adjacency, spoke) for spoke in spokes]
        built = lemma_construct(
            trunc.graph,
            adjacency.rays[outcome.center],
            [adjacency.rays[leaf] for leaf in leaves],
            families,
            spec,
        )

    if isinstance(built, Insufficient):
        report.stage = f"construct ({report.case_taken})"
        report.diagnostic = f"{built.stage}: {built.detail}"
        report.stage_log.append(f"construct: insufficient at {built.stage}")
        return report
    report.stage_log.append(f"construct: embedding built (case {report.case_taken})")

    violations = verify_embedding(trunc.graph, built)
    if violations:
        report.stage = "verify"
        report.diagnostic = "; ".join(
            f"{v.kind} at {v.location}" for v in violations[:5]
        )
        report.stage_log.append(f"verify: {len(violations)} violations")
        return report
    report.stage_log.append("verify: ok")
    report.outcome = "success"
    report.embedding = built
    return report


def _components(g: FiniteGraph) -> list[list[int]]:
    out = []
    seen: set[int] = set()
    for v in g.vertices:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            for u in g.neighbors(stack.pop()):
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    stack.append(u)
        out.append(sorted(comp))
    return out


def witness_from_embedding(
    host: FiniteGraph, emb: Embedding, k: int, r: int
) -> EndWitness:
    """Read k disjoint rays off an embedding's columns (the "if" direction).

    Columns are trimmed to end on a common sphere around the host's lowest-id
    vertex, making them frontier rays; the result is re-validated (pairwise
    disjointness plus same-end at radius r) before it is returned.
    """
    violations = verify_embedding(host, emb)
    if violations:
        raise ValueError(f"embedding is invalid: {violations[0].kind} at {violations[0].location}")
    if k > emb.pattern.cols:
        raise ValueError(f"k={k} exceeds the embedding's {emb.pattern.cols} columns")
    if k < 1:
        raise ValueError("k must be positive")
    root = host.vertices[0]
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for u in host.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    columns = []
    for i in range(k):
        col = [emb.branch[(i, 0)]]
        for j in range(1, emb.pattern.depth):
            seg = emb.edge_paths[((i, j - 1), (i, j))]
            if seg[0] != col[-1]:
                seg = list(reversed(seg))
            col.extend(seg[1:])
        if any(v not in dist for v in col):
            raise ValueError("host is not connected; cannot certify frontier rays")
        columns.append(col)
    radius = min(max(dist[v] for v in col) for col in columns)
    if r >= radius:
        raise ValueError(f"r={r} is not below the reachable column radius {radius}")
    rays = []
    for col in columns:
        end = next(idx for idx, v in enumerate(col) if dist[v] == radius)
        rays.append(Ray(vertices=col[: end + 1], frontier=True))
    witness = EndWitness(rays=rays, radius=radius, equivalence_radius=r)
    trunc = truncate(lazy_from_finite(host), root, radius, max_vertices=None)
    problems = _witness_violations_in_trunc(trunc, witness)
    if problems:
        raise ValueError(f"embedded columns do not form a witness: {problems[0]}")
    return witness
