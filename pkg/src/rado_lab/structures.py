"""Partitioned and constant graphs, their translation, and copy search
respecting the extra structure."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from .graphs import (
    Embedding,
    Graph,
    GraphFormatError,
    _parse_header,
    format_graph,
    iter_embedding_maps,
)


@dataclass(frozen=True)
class PartitionedGraph:
    """Graph plus an ordered partition of its vertex set.

    Parts are pairwise disjoint, cover every vertex, and may be empty.
    """

    graph: Graph
    parts: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen = 0
        for i, part in enumerate(self.parts):
            for v in part:
                if not 0 <= v < self.graph.n:
                    raise ValueError(f"part {i} contains out-of-range vertex {v}")
                if seen >> v & 1:
                    raise ValueError(f"vertex {v} appears in two parts")
                seen |= 1 << v
        if seen != self.graph.full_mask:
            raise ValueError("parts do not cover the vertex set")

    def part_of(self, v: int) -> int:
        for i, part in enumerate(self.parts):
            if v in part:
                return i
        raise KeyError(v)


@dataclass(frozen=True)
class ConstantGraph:
    """Graph with an ordered tuple of distinct distinguished vertices."""

    graph: Graph
    constants: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.constants)) != len(self.constants):
            raise ValueError("constants must be pairwise distinct")
        for c in self.constants:
            if not 0 <= c < self.graph.n:
                raise ValueError(f"constant {c} out of range")


def associate_partitioned(cg: ConstantGraph) -> PartitionedGraph:
    """The n + 2^n part translation of an n-constant graph.

    First one singleton per constant, in constant order.  Then one part per
    adjacency pattern toward the constants; the pattern is read as a binary
    number with constant 0 as the most significant bit and edge = 1, and the
    pattern parts are listed from the all-adjacent pattern downward.  Empty
    pattern parts are retained so indexing by pattern is stable.
    """
    n = len(cg.constants)
    const_set = set(cg.constants)
    buckets: dict[int, set[int]] = {p: set() for p in range(2**n)}
    for v in range(cg.graph.n):
        if v in const_set:
            continue
        p = 0
        for i, c in enumerate(cg.constants):
            if cg.graph.has_edge(v, c):
                p |= 1 << (n - 1 - i)
        buckets[p].add(v)
    parts = [frozenset({c}) for c in cg.constants]
    parts.extend(frozenset(buckets[p]) for p in range(2**n - 1, -1, -1))
    return PartitionedGraph(cg.graph, tuple(parts))


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def find_part_embeddings(
    pattern: PartitionedGraph, host: PartitionedGraph, limit: int
) -> list[Embedding]:
    """Embeddings sending part i of the pattern into part i of the host,
    lexicographic, up to ``limit``."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if len(pattern.parts) != len(host.parts):
        raise ValueError(
            f"part count mismatch: pattern has {len(pattern.parts)}, "
            f"host has {len(host.parts)}"
        )
    host_masks = [_mask(part) for part in host.parts]
    per_vertex = {}
    for i, part in enumerate(pattern.parts):
        for v in part:
            per_vertex[v] = host_masks[i]
    out = []
    for mapping in islice(
        iter_embedding_maps(pattern.graph, host.graph, per_vertex=per_vertex), limit
    ):
        emb = Embedding(pattern.graph, host.graph, mapping)
        assert emb.verify()
        for v in range(pattern.graph.n):
            assert mapping[v] in host.parts[pattern.part_of(v)]
        out.append(emb)
    return out


def find_const_embeddings(
    pattern: ConstantGraph, host: ConstantGraph, limit: int
) -> list[Embedding]:
    """Embeddings sending constant i to constant i, lexicographic, up to
    ``limit``."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if len(pattern.constants) != len(host.constants):
        raise ValueError(
            f"constant count mismatch: pattern has {len(pattern.constants)}, "
            f"host has {len(host.constants)}"
        )
    fixed = dict(zip(pattern.constants, host.constants))
    out = []
    for mapping in islice(
        iter_embedding_maps(pattern.graph, host.graph, fixed=fixed), limit
    ):
        emb = Embedding(pattern.graph, host.graph, mapping)
        assert emb.verify()
        for pc, hc in fixed.items():
            assert mapping[pc] == hc
        out.append(emb)
    return out


# ---------------------------------------------------------------------------
# text format: graph lines followed by "part <i>: ..." or "const: ..." lines


def format_partitioned(pg: PartitionedGraph) -> str:
    lines = [format_graph(pg.graph).rstrip("\n")]
    for i, part in enumerate(pg.parts):
        members = " ".join(str(v) for v in sorted(part))
        lines.append(f"part {i}: {members}".rstrip())
    return "\n".join(lines) + "\n"


def format_constant(cg: ConstantGraph) -> str:
    lines = [format_graph(cg.graph).rstrip("\n")]
    lines.append("const: " + " ".join(str(c) for c in cg.constants))
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> Graph | PartitionedGraph | ConstantGraph:
    """Parse the extended text format.

    Plain graphs, graphs with ``part i: ...`` lines, and graphs with a single
    ``const: ...`` line are recognized; mixing part and const lines is
    rejected.
    """
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError("empty input")
    n = _parse_header(lines[0], 1)
    graph_lines = [lines[0]]
    part_lines: list[tuple[int, str]] = []
    const_line: tuple[int, str] | None = None
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("part "):
            part_lines.append((lineno, line))
        elif line.startswith("const:"):
            if const_line is not None:
                raise GraphFormatError(f"line {lineno}: duplicate const line")
            const_line = (lineno, line)
        else:
            graph_lines.append(line)
    from .graphs import parse_graph

    g = parse_graph("\n".join(graph_lines) + "\n")
    assert g.n == n
    if part_lines and const_line:
        raise GraphFormatError("cannot mix part and const lines")
    if const_line is not None:
        lineno, line = const_line
        body = line[len("const:"):].split()
        try:
            constants = tuple(int(x) for x in body)
        except ValueError:
            raise GraphFormatError(f"line {lineno}: constants must be integers") from None
        try:
            return ConstantGraph(g, constants)
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from None
    if part_lines:
        indexed: dict[int, frozenset[int]] = {}
        for lineno, line in part_lines:
            head, _, body = line.partition(":")
            bits = head.split()
            if len(bits) != 2:
                raise GraphFormatError(f"line {lineno}: expected 'part <i>: ...'")
            try:
                idx = int(bits[1])
                members = frozenset(int(x) for x in body.split())
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed part line") from None
            if idx in indexed:
                raise GraphFormatError(f"line {lineno}: duplicate part index {idx}")
            indexed[idx] = members
        if sorted(indexed) != list(range(len(indexed))):
            raise GraphFormatError("part indices must be 0..m-1")
        try:
            return PartitionedGraph(g, tuple(indexed[i] for i in range(len(indexed))))
        except ValueError as exc:
            raise GraphFormatError(str(exc)) from None
    return g
