"""Embedding certificates: branch-vertex map plus subdivided-edge paths.

The certificate text format is bit-exact under round-tripping:

    hexprefix cols=<n> depth=<d>
    b <i> <j> <hostId>
    p <i> <j> <i'> <j'> : <hostId> <hostId> ...

Branch lines are sorted by pattern vertex, path lines by pattern edge, and
each path is listed from the (i, j) side of its edge line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_core import HexPrefixSpec

PatternVertex = tuple[int, int]
PatternEdge = tuple[PatternVertex, PatternVertex]


class CertificateParseError(ValueError):
    """Malformed certificate text; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class Embedding:
    """Witness that a hex prefix embeds as a topological minor of a host graph."""

    pattern: HexPrefixSpec
    branch: dict[PatternVertex, int] = field(default_factory=dict)
    edge_paths: dict[PatternEdge, list[int]] = field(default_factory=dict)


def canonical_edge(a: PatternVertex, b: PatternVertex) -> PatternEdge:
    return (a, b) if a <= b else (b, a)


def format_certificate(emb: Embedding) -> str:
    lines = [f"hexprefix cols={emb.pattern.cols} depth={emb.pattern.depth}\n"]
    for (i, j) in sorted(emb.branch):
        lines.append(f"b {i} {j} {emb.branch[(i, j)]}\n")
    for edge in sorted(emb.edge_paths):
        (i, j), (i2, j2) = edge
        path = " ".join(str(v) for v in emb.edge_paths[edge])
        lines.append(f"p {i} {j} {i2} {j2} : {path}\n")
    return "".join(lines)


def parse_certificate(text: str) -> Embedding:
    lines = text.splitlines()
    if not lines:
        raise CertificateParseError(1, "empty certificate")
    header = lines[0].split()
    if (
        len(header) != 3
        or header[0] != "hexprefix"
        or not header[1].startswith("cols=")
        or not header[2].startswith("depth=")
    ):
        raise CertificateParseError(1, "expected 'hexprefix cols=<n> depth=<d>'")
    try:
        spec = HexPrefixSpec(int(header[1][5:]), int(header[2][6:]))
    except ValueError as err:
        raise CertificateParseError(1, str(err)) from None
    emb = Embedding(pattern=spec)
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "b" and len(parts) == 4:
                key = (int(parts[1]), int(parts[2]))
                if key in emb.branch:
                    raise CertificateParseError(line_no, f"duplicate branch line for {key}")
                emb.branch[key] = int(parts[3])
            elif parts[0] == "p" and len(parts) >= 6 and parts[5] == ":":
                edge = canonical_edge(
                    (int(parts[1]), int(parts[2])), (int(parts[3]), int(parts[4]))
                )
                if edge in emb.edge_paths:
                    raise CertificateParseError(line_no, f"duplicate path line for {edge}")
                path = [int(tok) for tok in parts[6:]]
                if (int(parts[1]), int(parts[2])) != edge[0]:
                    path.reverse()
                emb.edge_paths[edge] = path
            else:
                raise CertificateParseError(line_no, f"unrecognized line {raw!r}")
        except CertificateParseError:
            raise
        except ValueError:
            raise CertificateParseError(line_no, f"bad integer in {raw!r}") from None
    return emb
