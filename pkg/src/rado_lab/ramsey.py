"""Desk-scale verification of arrow statements and monochromatic copy search.

Copies of a pattern in a structure are vertex subsets inducing an isomorphic
substructure; the canonical copy enumeration lists them as sorted tuples in
lexicographic order.  Coloring enumeration is exhaustive up to fixing the
first copy's color, the only symmetry reduction used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

from .gadgets import FunctionGadget, PairColor, pair_color
from .graphs import Embedding, Graph, iter_embedding_maps
from .structures import ConstantGraph, PartitionedGraph

Structure = Graph | PartitionedGraph | ConstantGraph

DEFAULT_COLORING_BUDGET = 2**24
DEFAULT_COPY_BUDGET = 10**5


def _graph_of(s: Structure) -> Graph:
    return s if isinstance(s, Graph) else s.graph


def _iter_copy_embeddings(
    big: Structure, small: Structure, *, ordered: bool = False
) -> Iterator[tuple[int, ...]]:
    if isinstance(small, Graph):
        if not isinstance(big, Graph):
            raise TypeError("plain pattern needs a plain host")
        yield from iter_embedding_maps(small, big, monotone=ordered)
        return
    if isinstance(small, PartitionedGraph):
        if not isinstance(big, PartitionedGraph):
            raise TypeError("partitioned pattern needs a partitioned host")
        if len(small.parts) != len(big.parts):
            raise ValueError("part count mismatch")
        masks = []
        for part in big.parts:
            m = 0
            for v in part:
                m |= 1 << v
            masks.append(m)
        per_vertex = {}
        for i, part in enumerate(small.parts):
            for v in part:
                per_vertex[v] = masks[i]
        yield from iter_embedding_maps(
            small.graph, big.graph, per_vertex=per_vertex, monotone=ordered
        )
        return
    if isinstance(small, ConstantGraph):
        if not isinstance(big, ConstantGraph):
            raise TypeError("constant pattern needs a constant host")
        if len(small.constants) != len(big.constants):
            raise ValueError("constant count mismatch")
        fixed = dict(zip(small.constants, big.constants))
        yield from iter_embedding_maps(
            small.graph, big.graph, fixed=fixed, monotone=ordered
        )
        return
    raise TypeError(f"unsupported structure type {type(small).__name__}")


def enumerate_copies(
    big: Structure, small: Structure, *, ordered: bool = False, budget: int | None = None
) -> list[tuple[int, ...]]:
    """Canonical copy enumeration: distinct image sets as sorted tuples,
    lexicographically ascending.  ``budget`` caps the number of copies."""
    seen: set[tuple[int, ...]] = set()
    for mapping in _iter_copy_embeddings(big, small, ordered=ordered):
        seen.add(tuple(sorted(mapping)))
        if budget is not None and len(seen) > budget:
            raise CopyBudgetExceeded(len(seen))
    return sorted(seen)


class CopyBudgetExceeded(RuntimeError):
    def __init__(self, count: int):
        super().__init__(f"more than {count - 1} copies of the pattern")
        self.count = count


@dataclass(frozen=True)
class CopyColoring:
    """Total assignment of colors 0..k-1 to the canonical copy enumeration."""

    copies: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    k: int

    def __post_init__(self):
        if len(self.copies) != len(self.colors):
            raise ValueError("coloring must be total on all copies")
        if any(not 0 <= c < self.k for c in self.colors):
            raise ValueError("color out of range")
        if self.k < 1:
            raise ValueError("need at least one color")

    def color_of(self, copy: tuple[int, ...]) -> int:
        key = tuple(sorted(copy))
        try:
            return self.colors[self.copies.index(key)]
        except ValueError:
            raise KeyError(f"{key} is not a copy in this coloring") from None


@dataclass(frozen=True)
class ArrowQuery:
    S: Structure
    H: Structure
    P: Structure
    k: int
    ordered: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one color")

    @property
    def vacuous(self) -> bool:
        """True when P has no copy in H, making the arrow trivially true."""
        return not enumerate_copies(self.H, self.P, ordered=self.ordered)


@dataclass(frozen=True)
class ArrowBudget:
    colorings: int = DEFAULT_COLORING_BUDGET
    copies: int = DEFAULT_COPY_BUDGET


@dataclass(frozen=True)
class ArrowResult:
    verdict: str  # "holds" | "fails" | "budget_exceeded"
    witness: CopyColoring | None = None
    stats: dict = field(default_factory=dict)


def find_mono_copy(
    S: Structure, H: Structure, P: Structure, coloring: CopyColoring
) -> Embedding | None:
    """Least embedding of H into S all of whose internal P-copies share one
    color; None when no copy of H works."""
    s_graph, h_graph = _graph_of(S), _graph_of(H)
    if set(coloring.copies) != set(enumerate_copies(S, P)):
        raise ValueError("coloring is not over the copies of P in S")
    copy_index = {c: i for i, c in enumerate(coloring.copies)}
    p_copies = coloring.copies
    for mapping in _iter_copy_embeddings(S, H):
        image = set(mapping)
        inside = [copy_index[c] for c in p_copies if set(c) <= image]
        palette = {coloring.colors[i] for i in inside}
        if len(palette) <= 1:
            emb = Embedding(h_graph, s_graph, mapping)
            assert emb.verify()
            return emb
    return None


def verify_arrow(q: ArrowQuery, budget: ArrowBudget | None = None) -> ArrowResult:
    """Exhaustively decide the arrow S -> (H)^P_k.

    Colorings are enumerated lexicographically with the first copy's color
    fixed to 0 (sound: any coloring is color-permutation equivalent to such a
    one, and relabeling colors does not change monochromaticity).  On failure
    the least witness coloring in that enumeration is returned.
    """
    if budget is None:
        budget = ArrowBudget()
    try:
        p_copies = enumerate_copies(q.S, q.P, ordered=q.ordered, budget=budget.copies)
    except CopyBudgetExceeded as exc:
        return ArrowResult("budget_exceeded", stats={"copies_seen": exc.count, "budget_copies": budget.copies})
    h_copies = enumerate_copies(q.S, q.H, ordered=q.ordered)
    m = len(p_copies)
    stats = {"p_copies": m, "h_copies": len(h_copies), "colorings_checked": 0}

    inside: list[list[int]] = []
    for h_copy in h_copies:
        h_set = set(h_copy)
        inside.append([i for i, c in enumerate(p_copies) if set(c) <= h_set])

    if m == 0:
        empty = CopyColoring((), (), q.k)
        if h_copies:
            return ArrowResult("holds", stats=stats)
        return ArrowResult("fails", witness=empty, stats=stats)

    total = q.k ** (m - 1)
    if total > budget.colorings:
        stats["colorings_total"] = total
        stats["budget_colorings"] = budget.colorings
        return ArrowResult("budget_exceeded", stats=stats)

    colors = [0] * m
    for rest in product(range(q.k), repeat=m - 1):
        stats["colorings_checked"] += 1
        colors[1:] = rest
        good = False
        for idxs in inside:
            if not idxs:
                good = True
                break
            first = colors[idxs[0]]
            if all(colors[i] == first for i in idxs[1:]):
                good = True
                break
        if not good:
            witness = CopyColoring(tuple(p_copies), tuple(colors), q.k)
            return ArrowResult("fails", witness=witness, stats=stats)
    return ArrowResult("holds", stats=stats)


def find_edge_nonedge_mono_copy(
    host: Graph,
    pattern: Graph,
    edge_coloring: Mapping[tuple[int, int], object],
    nonedge_coloring: Mapping[tuple[int, int], object],
) -> Embedding | None:
    """Least copy of ``pattern`` whose edges carry one edge-color and whose
    non-edges carry one non-edge-color.

    The colorings are keyed by host pairs (u, v) with u < v and must be total
    on the host's edges and non-edges respectively.
    """
    for u, v in host.edges():
        if (u, v) not in edge_coloring:
            raise ValueError(f"edge coloring missing pair ({u}, {v})")
    for u, v in host.nonedges():
        if (u, v) not in nonedge_coloring:
            raise ValueError(f"non-edge coloring missing pair ({u}, {v})")
    for mapping in _iter_copy_embeddings(host, pattern):
        edge_colors = set()
        nonedge_colors = set()
        ok = True
        image = sorted(mapping)
        for i in range(len(image)):
            for j in range(i + 1, len(image)):
                u, v = image[i], image[j]
                if host.has_edge(u, v):
                    edge_colors.add(edge_coloring[(u, v)])
                    if len(edge_colors) > 1:
                        ok = False
                        break
                else:
                    nonedge_colors.add(nonedge_coloring[(u, v)])
                    if len(nonedge_colors) > 1:
                        ok = False
                        break
            if not ok:
                break
        if ok:
            emb = Embedding(pattern, host, mapping)
            assert emb.verify()
            return emb
    return None


def induced_pair_coloring(
    f: FunctionGadget,
) -> tuple[dict[tuple[int, int], PairColor], dict[tuple[int, int], PairColor]]:
    """Color every source pair by what the gadget does to it (collapsed, edge
    or non-edge image), split into the edge and the non-edge coloring."""
    if len(f.dom) != f.src.n:
        raise ValueError("induced coloring needs a gadget defined on the whole source")
    chi_e: dict[tuple[int, int], PairColor] = {}
    chi_n: dict[tuple[int, int], PairColor] = {}
    for u in range(f.src.n):
        for v in range(u + 1, f.src.n):
            color = pair_color(f, u, v)
            if f.src.has_edge(u, v):
                chi_e[(u, v)] = color
            else:
                chi_n[(u, v)] = color
    return chi_e, chi_n
