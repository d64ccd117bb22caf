"""Finite simple graphs with bit-packed adjacency, extension-property machinery
and embedding search.

Vertices are always the contiguous ids 0..n-1.  Adjacency is stored as one
integer bitmask per vertex, so every pair query and every candidate-set
refinement in the search kernels is a single integer operation.

Determinism conventions used throughout the package:

* vertex sets are handled as sorted tuples,
* search results come out in lexicographic order of the mapped tuple,
* "least witness" always means first in that order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, islice
from math import isqrt
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence


class GraphFormatError(ValueError):
    """Raised by the text-format reader on malformed input."""


class BuildBudgetError(RuntimeError):
    """Raised when the repair loop of :func:`build_ec` exceeds its size budget.

    Carries the partial graph and the least still-failing pair so callers can
    report progress.
    """

    def __init__(self, message: str, partial: "Graph", failing: tuple):
        super().__init__(message)
        self.partial = partial
        self.failing = failing


class PairKind(Enum):
    EQUAL = "equal"
    EDGE = "edge"
    NONEDGE = "nonedge"


class Graph:
    """Immutable simple graph on vertices 0..n-1.

    ``rows[u]`` is the neighbourhood of ``u`` as a bitmask.  Instances are
    hashable and compare structurally, so graphs can be used as dict keys and
    set members (orbit computations rely on this).
    """

    __slots__ = ("n", "_rows", "_hash")

    def __init__(self, n: int, rows: tuple[int, ...]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(rows) != n:
            raise ValueError("adjacency row count does not match vertex count")
        full = (1 << n) - 1
        for u, row in enumerate(rows):
            if row & ~full:
                raise ValueError(f"row {u} has out-of-range bits")
            if row >> u & 1:
                raise ValueError(f"self-loop at vertex {u}")
        for u in range(n):
            for_bits = rows[u]
            while for_bits:
                b = for_bits & -for_bits
                v = b.bit_length() - 1
                for_bits ^= b
                if not rows[v] >> u & 1:
                    raise ValueError(f"adjacency not symmetric at ({u}, {v})")
        self.n = n
        self._rows = rows
        self._hash = hash((n, rows))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._rows[u] >> v & 1)

    def row(self, u: int) -> int:
        return self._rows[u]

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, u: int) -> int:
        return self._rows[u].bit_count()

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as pairs (u, v) with u < v, lexicographic."""
        for u in range(self.n):
            bits = self._rows[u] >> (u + 1) << (u + 1)
            while bits:
                b = bits & -bits
                yield (u, b.bit_length() - 1)
                bits ^= b

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self._rows) // 2

    def nonedges(self) -> Iterator[tuple[int, int]]:
        for u, v in combinations(range(self.n), 2):
            if not self.has_edge(u, v):
                yield (u, v)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled to 0..len(vertices)-1 in given order."""
        vs = list(vertices)
        return Graph.from_edges(
            len(vs),
            [
                (i, j)
                for i, j in combinations(range(len(vs)), 2)
                if self.has_edge(vs[i], vs[j])
            ],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges())})"


def pair_kind(g: Graph, u: int, v: int) -> PairKind:
    if u == v:
        return PairKind.EQUAL
    return PairKind.EDGE if g.has_edge(u, v) else PairKind.NONEDGE


# ---------------------------------------------------------------------------
# small constructors used all over the test-bench


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << u) for u in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


# ---------------------------------------------------------------------------
# graph rewrites


def complement_graph(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.n, tuple(~g.row(u) & full & ~(1 << u) for u in range(g.n)))


def switch_graph(g: Graph, s: Iterable[int]) -> Graph:
    """Flip all pairs with exactly one endpoint in ``s``.

    Empty and full ``s`` act as the identity.  Involution for every ``s``.
    """
    smask = 0
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"switch set vertex {v} out of range")
        smask |= 1 << v
    full = g.full_mask
    out = []
    for u in range(g.n):
        if smask >> u & 1:
            flip = ~smask & full
        else:
            flip = smask
        out.append((g.row(u) ^ flip) & full & ~(1 << u))
    return Graph(g.n, tuple(out))


# ---------------------------------------------------------------------------
# Paley graphs


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for d in range(2, isqrt(q) + 1):
        if q % d == 0:
            return False
    return True


class SelfComplementaryGraph(NamedTuple):
    """A graph together with a permutation witnessing graph ~ complement."""

    graph: Graph
    complement_witness: tuple[int, ...]


def build_paley(q: int) -> SelfComplementaryGraph:
    """Paley graph on Z_q: a ~ b iff a-b is a nonzero quadratic residue.

    Requires q prime with q = 1 mod 4 (so -1 is a residue and the relation is
    symmetric).  The witness permutation is x -> g*x mod q for the least
    quadratic non-residue g; it maps edges onto non-edges and vice versa.
    """
    if not _is_prime(q):
        raise ValueError(f"q={q} is not prime")
    if q % 4 != 1:
        raise ValueError(f"q={q} is not congruent to 1 mod 4")
    squares = {pow(i, 2, q) for i in range(1, q)}
    edges = [(a, b) for a, b in combinations(range(q), 2) if (b - a) % q in squares]
    g0 = next(x for x in range(2, q) if x not in squares)
    witness = tuple(g0 * x % q for x in range(q))
    return SelfComplementaryGraph(Graph.from_edges(q, edges), witness)


# ---------------------------------------------------------------------------
# extension property


@dataclass(frozen=True)
class ExtensionResult:
    """Verdict of the k-extension check; ``failing`` is the least bad pair."""

    passed: bool
    failing: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def _has_witness(g: Graph, want_adjacent: Sequence[int], want_nonadjacent: Sequence[int]) -> bool:
    cand = g.full_mask
    block = 0
    for u in want_adjacent:
        cand &= g.row(u)
        block |= 1 << u
    for v in want_nonadjacent:
        cand &= ~g.row(v)
        block |= 1 << v
    return bool(cand & ~block & g.full_mask)


def _lex_subsets(n: int, max_size: int) -> Iterator[tuple[int, ...]]:
    # sorted tuples in lexicographic order: (), (0,), (0,1), (0,1,2), ...
    def rec(prefix: tuple[int, ...], start: int) -> Iterator[tuple[int, ...]]:
        yield prefix
        if len(prefix) < max_size:
            for v in range(start, n):
                yield from rec(prefix + (v,), v + 1)

    yield from rec((), 0)


def iter_extension_failures(g: Graph, k: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All failing (U, U') pairs with |U|+|U'| <= k, ordered by (size, U, U')."""
    if k < 1:
        raise ValueError("k must be at least 1")
    for t in range(k + 1):
        for u_set in _lex_subsets(g.n, t):
            need = t - len(u_set)
            taken = set(u_set)
            rest = [v for v in range(g.n) if v not in taken]
            for u2 in combinations(rest, need):
                if not _has_witness(g, u_set, u2):
                    yield (u_set, u2)


def check_extension(g: Graph, k: int) -> ExtensionResult:
    """Pass iff every disjoint (U, U') with |U|+|U'| <= k has an outside vertex
    adjacent to all of U and none of U'."""
    for failing in iter_extension_failures(g, k):
        return ExtensionResult(False, failing)
    return ExtensionResult(True)


def _iter_failures_touching(
    g: Graph, k: int, lo: int
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    # failing pairs whose support contains a vertex >= lo; adding vertices
    # never invalidates an existing witness, so after a repair round only
    # these pairs need rechecking
    for t in range(k + 1):
        if t == 0:
            if lo == 0 and not _has_witness(g, (), ()):
                yield ((), ())
            continue
        for support in combinations(range(g.n), t):
            if support[-1] < lo:
                continue
            for split in range(1 << t):
                u_set = tuple(support[i] for i in range(t) if not split >> i & 1)
                u2 = tuple(support[i] for i in range(t) if split >> i & 1)
                if not _has_witness(g, u_set, u2):
                    yield (u_set, u2)


def _ec_start_size(k: int) -> int:
    return max(6, k * k * 2**k)


def build_ec(k: int, seed: int = 0, *, max_vertices: int | None = None) -> Graph:
    """Build a graph passing ``check_extension(g, k)``, deterministically.

    Strategy: seeded random graph at a size heuristic, then repair rounds.  A
    round collects every failing (U, U') pair and adds new witness vertices;
    pairwise-compatible demands are packed greedily onto one new vertex, whose
    remaining adjacencies are random coin flips.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = random.Random(seed)
    n = _ec_start_size(k)
    if max_vertices is None:
        max_vertices = 4 * n + 32
    rows = [0] * n
    for u, v in combinations(range(n), 2):
        if rng.random() < 0.5:
            rows[u] |= 1 << v
            rows[v] |= 1 << u

    prev_n = 0
    for _round in range(64):
        g = Graph(n, tuple(rows))
        failures = list(_iter_failures_touching(g, k, prev_n))
        if not failures:
            final = check_extension(g, k)
            if final.passed:
                return g
            failures = list(iter_extension_failures(g, k))
        bundles: list[dict[int, bool]] = []
        for u_set, u2 in failures:
            demand = {u: True for u in u_set}
            demand.update({v: False for v in u2})
            for bundle in bundles:
                if all(bundle.get(x, want) == want for x, want in demand.items()):
                    bundle.update(demand)
                    break
            else:
                bundles.append(dict(demand))
        if n + len(bundles) > max_vertices:
            raise BuildBudgetError(
                f"size budget {max_vertices} exceeded at n={n} with "
                f"{len(failures)} failing pairs",
                partial=g,
                failing=failures[0],
            )
        prev_n = n
        for demand in bundles:
            new_row = 0
            for v in range(n):
                want = demand.get(v)
                if want is None:
                    want = rng.random() < 0.5
                if want:
                    new_row |= 1 << v
                    rows[v] |= 1 << n
            rows.append(new_row)
            n += 1
    raise BuildBudgetError(
        "repair loop did not converge within 64 rounds",
        partial=Graph(n, tuple(rows)),
        failing=next(iter_extension_failures(Graph(n, tuple(rows)), k)),
    )


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class Embedding:
    """Injective map realizing ``source`` as an induced subgraph of ``target``."""

    source: Graph
    target: Graph
    mapping: tuple[int, ...]

    def apply(self, v: int) -> int:
        return self.mapping[v]

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(self.mapping))

    def verify(self) -> bool:
        if len(set(self.mapping)) != self.source.n:
            return False
        for u, v in combinations(range(self.source.n), 2):
            if self.source.has_edge(u, v) != self.target.has_edge(
                self.mapping[u], self.mapping[v]
            ):
                return False
        return True


def iter_embedding_maps(
    pattern: Graph,
    host: Graph,
    *,
    allowed: int | None = None,
    per_vertex: Mapping[int, int] | None = None,
    fixed: Mapping[int, int] | None = None,
    monotone: bool = False,
) -> Iterator[tuple[int, ...]]:
    """Backtracking kernel: injective induced-subgraph maps, lexicographic.

    ``allowed`` is a global host bitmask, ``per_vertex`` bitmasks restrict
    individual pattern vertices, ``fixed`` pins pattern vertices to host
    vertices, ``monotone`` demands an order-preserving map (used for ordered
    structures).
    """
    m, full = pattern.n, host.full_mask
    masks = []
    for u in range(m):
        mk = full if allowed is None else allowed & full
        if per_vertex is not None and u in per_vertex:
            mk &= per_vertex[u]
        if fixed is not None and u in fixed:
            mk &= 1 << fixed[u]
        masks.append(mk)
    if m == 0:
        yield ()
        return

    im = [0] * m

    def rec(u: int, used: int) -> Iterator[tuple[int, ...]]:
        cand = masks[u] & ~used
        for w in range(u):
            rw = host.row(im[w])
            cand &= rw if pattern.has_edge(u, w) else ~rw & ~(1 << im[w])
        cand &= full
        if monotone and u > 0:
            cand &= full ^ ((1 << (im[u - 1] + 1)) - 1)
        while cand:
            b = cand & -cand
            cand ^= b
            im[u] = b.bit_length() - 1
            if u + 1 == m:
                yield tuple(im)
            else:
                yield from rec(u + 1, used | b)

    yield from rec(0, 0)


def find_embeddings(pattern: Graph, host: Graph, limit: int) -> list[Embedding]:
    """Up to ``limit`` induced embeddings in lexicographic order of the mapped
    tuple; empty list iff no copy exists."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    out = []
    for mapping in islice(iter_embedding_maps(pattern, host), limit):
        emb = Embedding(pattern, host, mapping)
        assert emb.verify()
        out.append(emb)
    return out


# ---------------------------------------------------------------------------
# partial isomorphisms


@dataclass(frozen=True)
class PartialIso:
    """Isomorphism between two induced subgraphs of ``host``, given as a
    sorted tuple of (domain vertex, image vertex) pairs."""

    host: Graph
    pairs: tuple[tuple[int, int], ...]

    @property
    def dom(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.pairs)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(y for _, y in self.pairs)

    def apply(self, v: int) -> int:
        for x, y in self.pairs:
            if x == v:
                return y
        raise KeyError(v)

    def verify(self) -> bool:
        if len(set(self.values)) != len(self.pairs):
            return False
        if list(self.pairs) != sorted(self.pairs):
            return False
        for (x1, y1), (x2, y2) in combinations(self.pairs, 2):
            if self.host.has_edge(x1, x2) != self.host.has_edge(y1, y2):
                return False
        return True


def extend_partial_iso(p: PartialIso, v: int, k: int) -> PartialIso | None:
    """Extend ``p`` to ``v``, choosing the least image vertex realizing v's
    adjacency pattern over the image of ``p``.

    ``k`` documents the claimed extension level of the host; when the host
    passes check_extension(., k) and len(p.pairs) <= k success is guaranteed.
    Returns None when no witness exists.
    """
    if any(x == v for x, _ in p.pairs):
        raise ValueError(f"vertex {v} already in domain")
    g = p.host
    cand = g.full_mask
    block = 0
    for x, y in p.pairs:
        cand &= g.row(y) if g.has_edge(v, x) else ~g.row(y)
        block |= 1 << y
    cand &= ~block & g.full_mask
    if not cand:
        return None
    w = (cand & -cand).bit_length() - 1
    return PartialIso(g, tuple(sorted(p.pairs + ((v, w),))))


# ---------------------------------------------------------------------------
# text format


def format_graph(g: Graph) -> str:
    """Serialize: first line ``n <count>``, then one ``u v`` line per edge
    with u < v, newline-terminated."""
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def _parse_header(line: str, lineno: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != "n":
        raise GraphFormatError(f"line {lineno}: expected header 'n <count>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise GraphFormatError(f"line {lineno}: vertex count is not an integer") from None
    if n < 0:
        raise GraphFormatError(f"line {lineno}: negative vertex count")
    return n


def parse_graph(text: str) -> Graph:
    """Strict reader for the text format; rejects loops, duplicate edges,
    out-of-range ids and lines with u >= v."""
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError("empty input")
    n = _parse_header(lines[0], 1)
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: edge endpoints must be integers") from None
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex id out of range")
        if u > v:
            raise GraphFormatError(f"line {lineno}: edges must be written with u < v")
        if (u, v) in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph.from_edges(n, edges)
