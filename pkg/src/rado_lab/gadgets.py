"""Finite function gadgets: maps from a vertex subset of a source graph into a
target graph.

These are the finite stand-ins for operations on one infinite structure; the
central representational choice of the package is that source and target may
be different finite graphs, with the map tracking which graph each side lives
in.  Labeled gadgets verify their defining property at construction and can
never exist in a violating state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from .graphs import (
    Graph,
    PairKind,
    complete_graph,
    complement_graph,
    empty_graph,
    iter_embedding_maps,
    pair_kind,
    switch_graph,
)
from .relations import PreservationResult, Relation, preserved_by_map


class GadgetConstructionError(ValueError):
    """Raised when a labeled gadget's defining property fails, naming the
    deficit."""


class PairColor(Enum):
    COLLAPSED = "collapsed"
    EDGE = "edge"
    NONEDGE = "nonedge"


NAMED_KINDS = ("identity", "minus", "eE", "eN", "const", "switch")
_LABELS = NAMED_KINDS + ("custom",)


@dataclass(frozen=True)
class FunctionGadget:
    src: Graph
    dst: Graph
    mapping: tuple[tuple[int, int], ...]  # (domain vertex, image), sorted
    label: str = "custom"
    _lookup: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.label not in _LABELS:
            raise GadgetConstructionError(f"unknown label {self.label!r}")
        pairs = tuple(sorted(self.mapping))
        object.__setattr__(self, "mapping", pairs)
        lookup = {}
        for x, y in pairs:
            if not 0 <= x < self.src.n:
                raise GadgetConstructionError(f"domain vertex {x} out of range")
            if not 0 <= y < self.dst.n:
                raise GadgetConstructionError(f"image vertex {y} out of range")
            if x in lookup:
                raise GadgetConstructionError(f"duplicate domain vertex {x}")
            lookup[x] = y
        object.__setattr__(self, "_lookup", lookup)
        self._check_label()

    @property
    def dom(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.mapping)

    def dom_mask(self) -> int:
        m = 0
        for x in self.dom:
            m |= 1 << x
        return m

    def apply(self, v: int) -> int:
        try:
            return self._lookup[v]
        except KeyError:
            raise KeyError(f"vertex {v} not in gadget domain") from None

    def as_mapping(self) -> dict[int, int]:
        return dict(self.mapping)

    def image(self) -> tuple[int, ...]:
        return tuple(sorted({y for _, y in self.mapping}))

    def _check_label(self) -> None:
        label = self.label
        if label == "custom":
            return
        if label == "identity":
            if self.dst != self.src:
                raise GadgetConstructionError("identity gadget must map a graph to itself")
            for x, y in self.mapping:
                if x != y:
                    raise GadgetConstructionError(f"identity gadget moves {x} to {y}")
            return
        if label == "const":
            values = {y for _, y in self.mapping}
            if len(values) > 1:
                raise GadgetConstructionError(
                    f"const gadget has {len(values)} distinct image vertices"
                )
            return
        if label in ("eE", "eN"):
            want = PairKind.EDGE if label == "eE" else PairKind.NONEDGE
            for (x1, y1), (x2, y2) in combinations(self.mapping, 2):
                got = pair_kind(self.dst, y1, y2)
                if got is not want:
                    raise GadgetConstructionError(
                        f"{label} gadget images of ({x1}, {x2}) form a "
                        f"{got.value} pair, need {want.value}"
                    )
            return
        if label == "minus":
            flip = {PairKind.EDGE: PairKind.NONEDGE, PairKind.NONEDGE: PairKind.EDGE}
            for (x1, y1), (x2, y2) in combinations(self.mapping, 2):
                src_kind = pair_kind(self.src, x1, x2)
                got = pair_kind(self.dst, y1, y2)
                if got is not flip[src_kind]:
                    raise GadgetConstructionError(
                        f"minus gadget maps the {src_kind.value} pair "
                        f"({x1}, {x2}) to a {got.value} pair"
                    )
            return
        # switch: identity vertex map, dst equal to src switched at some cut
        for x, y in self.mapping:
            if x != y:
                raise GadgetConstructionError("switch gadget must be the identity vertex map")
        if self.dst.n != self.src.n:
            raise GadgetConstructionError("switch gadget endpoints differ in size")
        if self.src.n > 0 and not self._is_switch_pair():
            raise GadgetConstructionError(
                "destination graph is not a switching of the source graph"
            )

    def _is_switch_pair(self) -> bool:
        # recover one side of the cut from vertex 0 and recheck every pair
        side0 = 1
        for v in range(1, self.src.n):
            if self.src.has_edge(0, v) == self.dst.has_edge(0, v):
                side0 |= 1 << v
        return self.dst == switch_graph(self.src, (
            v for v in range(self.src.n) if not side0 >> v & 1
        ))


def make_named(kind: str, src: Graph, **params) -> FunctionGadget:
    """Construct a named gadget on ``src``; construction fails loudly when the
    requested behavior is unsatisfiable.

    Accepted parameters per kind:
      identity: dom
      minus:    dom, dst (complement of src), witness (self-complementing
                permutation; then dst is src)
      eE / eN:  dom, dst (defaults to a complete / empty graph of |dom|
                vertices); images are the least clique / independent set
      const:    dom, target, dst (defaults to src)
      switch:   dom, s (nonempty cut)
    """
    if kind not in NAMED_KINDS:
        raise GadgetConstructionError(f"unknown gadget kind {kind!r}")
    dom = tuple(sorted(params.pop("dom", range(src.n))))
    if kind == "identity":
        _no_extra(params)
        return FunctionGadget(src, src, tuple((x, x) for x in dom), "identity")
    if kind == "minus":
        witness = params.pop("witness", None)
        dst = params.pop("dst", None)
        _no_extra(params)
        if witness is not None:
            if dst is not None and dst != src:
                raise GadgetConstructionError(
                    "a witness permutation keeps the destination equal to the source"
                )
            return FunctionGadget(
                src, src, tuple((x, witness[x]) for x in dom), "minus"
            )
        if dst is None:
            dst = complement_graph(src)
        elif dst != complement_graph(src):
            raise GadgetConstructionError(
                "minus gadget needs dst equal to the complement of src"
            )
        return FunctionGadget(src, dst, tuple((x, x) for x in dom), "minus")
    if kind in ("eE", "eN"):
        dst = params.pop("dst", None)
        _no_extra(params)
        size = len(dom)
        if dst is None:
            dst = complete_graph(size) if kind == "eE" else empty_graph(size)
        shape = complete_graph(size) if kind == "eE" else empty_graph(size)
        try:
            target_tuple = next(iter_embedding_maps(shape, dst))
        except StopIteration:
            noun = "clique" if kind == "eE" else "independent set"
            raise GadgetConstructionError(
                f"destination graph has no {noun} of size {size}"
            ) from None
        return FunctionGadget(src, dst, tuple(zip(dom, target_tuple)), kind)
    if kind == "const":
        dst = params.pop("dst", src)
        if "target" not in params:
            raise GadgetConstructionError("const gadget needs a target vertex")
        target = params.pop("target")
        _no_extra(params)
        if not 0 <= target < dst.n:
            raise GadgetConstructionError(f"target vertex {target} out of range")
        return FunctionGadget(src, dst, tuple((x, target) for x in dom), "const")
    # switch
    if "s" not in params:
        raise GadgetConstructionError("switch gadget needs a cut s")
    s = frozenset(params.pop("s"))
    _no_extra(params)
    if not s:
        raise GadgetConstructionError("switch gadget needs a nonempty cut")
    dst = switch_graph(src, s)
    return FunctionGadget(src, dst, tuple((x, x) for x in dom), "switch")


def _no_extra(params: dict) -> None:
    if params:
        raise GadgetConstructionError(f"unexpected parameters: {sorted(params)}")


def compose(g2: FunctionGadget, g1: FunctionGadget) -> FunctionGadget:
    """Pointwise composition g2 after g1, defined on dom(g1)."""
    if g1.dst != g2.src:
        raise GadgetConstructionError(
            "intermediate graphs do not match: dst of the first gadget must "
            "equal src of the second"
        )
    dom2 = set(g2.dom)
    missing = [y for _, y in g1.mapping if y not in dom2]
    if missing:
        raise GadgetConstructionError(
            f"image vertices {sorted(set(missing))} are outside the second "
            f"gadget's domain"
        )
    return FunctionGadget(
        g1.src,
        g2.dst,
        tuple((x, g2.apply(y)) for x, y in g1.mapping),
        "custom",
    )


def pair_color(f: FunctionGadget, x: int, y: int) -> PairColor:
    if x == y:
        raise ValueError("pair_color needs two distinct vertices")
    fx, fy = f.apply(x), f.apply(y)
    if fx == fy:
        return PairColor.COLLAPSED
    return PairColor.EDGE if f.dst.has_edge(fx, fy) else PairColor.NONEDGE


def violates(f: FunctionGadget, r: Relation) -> PreservationResult:
    """Preservation of ``r`` under the gadget map, restricted to its domain;
    least witness."""
    return preserved_by_map(r, f.as_mapping(), f.src, f.dst)


# ---------------------------------------------------------------------------
# text format: header lines naming the src/dst graph files, then map lines


def format_gadget(f: FunctionGadget, src_name: str, dst_name: str) -> str:
    lines = [f"src {src_name}", f"dst {dst_name}", f"label {f.label}"]
    lines.extend(f"{x} -> {y}" for x, y in f.mapping)
    return "\n".join(lines) + "\n"


def parse_gadget(text: str, read_graph) -> FunctionGadget:
    """Parse the gadget format; ``read_graph(name)`` loads the named graphs.

    Validation of the label property happens in the constructor, so a gadget
    file claiming e.g. ``label minus`` for a non-flipping map is rejected.
    """
    src = dst = None
    label = "custom"
    mapping = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("src "):
            src = read_graph(line[4:].strip())
        elif line.startswith("dst "):
            dst = read_graph(line[4:].strip())
        elif line.startswith("label "):
            label = line[6:].strip()
        elif "->" in line:
            left, _, right = line.partition("->")
            try:
                mapping.append((int(left.strip()), int(right.strip())))
            except ValueError:
                raise GadgetConstructionError(
                    f"line {lineno}: malformed map line {line!r}"
                ) from None
        else:
            raise GadgetConstructionError(f"line {lineno}: unrecognized line {line!r}")
    if src is None or dst is None:
        raise GadgetConstructionError("gadget file must name src and dst graphs")
    return FunctionGadget(src, dst, tuple(mapping), label)
