"""Generation procedures at finite scale: interpolation witness search, the
edge-deletion and collapse loops, orbit closure on small graph types, and the
five-class relation classifier.

"Generates" is operationalized as bounded-depth interpolation witness search;
a missing witness is inconclusive, never a proof of non-generation.  Every
witness re-verifies through an evaluator that is independent of the search.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, islice, permutations

from .gadgets import FunctionGadget, NAMED_KINDS, make_named
from .graphs import (
    Graph,
    PairKind,
    check_extension,
    complete_graph,
    complement_graph,
    empty_graph,
    iter_embedding_maps,
    pair_kind,
    switch_graph,
)
from .relations import (
    EqualityDefinability,
    PreservationResult,
    Relation,
    definable_from_equality,
    invariant_under_complement,
    invariant_under_switch,
)
from .structures import ConstantGraph


# ---------------------------------------------------------------------------
# generator sets


@dataclass(frozen=True)
class GeneratorSet:
    """Named gadget constructors available to a search, plus explicit extra
    gadgets; the identity is always included.

    ``free_embeddings`` grants the search arbitrary repositioning embeddings
    between applications (the finite stand-in for conjugating with
    automorphisms); without it compositions must chain directly.
    """

    kinds: frozenset[str] = frozenset()
    extra: tuple[FunctionGadget, ...] = ()
    free_embeddings: bool = True

    def __post_init__(self):
        unknown = set(self.kinds) - set(NAMED_KINDS)
        if unknown:
            raise ValueError(f"unknown generator kinds: {sorted(unknown)}")
        object.__setattr__(self, "kinds", frozenset(self.kinds) | {"identity"})


# ---------------------------------------------------------------------------
# interpolation witnesses


@dataclass(frozen=True)
class InterpolationWitness:
    """Alternating chain of repositioning embeddings and generator gadgets
    whose composite agrees with ``target`` on ``target_set``.

    ``roles`` tags each step as ``reposition`` or ``generator``; step
    endpoints match (dst of each step equals src of the next).
    """

    target: FunctionGadget
    target_set: tuple[int, ...]
    steps: tuple[FunctionGadget, ...]
    roles: tuple[str, ...]
    transcript: tuple[str, ...] = ()

    @property
    def generator_steps(self) -> int:
        return sum(1 for r in self.roles if r == "generator")


def verify_witness(w: InterpolationWitness) -> bool:
    """Independent check: walk the chain pointwise and compare with the
    target; no search state is consulted."""
    if len(w.steps) != len(w.roles):
        return False
    graph = w.target.src
    for step in w.steps:
        if step.src != graph:
            return False
        graph = step.dst
    if graph != w.target.dst:
        return False
    for x in w.target_set:
        value = x
        for step in w.steps:
            if value not in set(step.dom):
                return False
            value = step.apply(value)
        if value != w.target.apply(x):
            return False
    return True


def _embedding_step(
    src: Graph, dst: Graph, assignment: dict[int, int]
) -> FunctionGadget:
    gadget = FunctionGadget(src, dst, tuple(sorted(assignment.items())), "custom")
    for (x1, y1), (x2, y2) in combinations(gadget.mapping, 2):
        assert pair_kind(src, x1, x2) is pair_kind(dst, y1, y2)
    return gadget


def _named_pool(kinds: frozenset[str], hosts: tuple[Graph, ...]) -> list[FunctionGadget]:
    pool = []
    for host in hosts:
        for kind in sorted(kinds):
            if kind == "identity":
                pool.append(make_named("identity", host))
            elif kind == "minus":
                pool.append(make_named("minus", host))
            elif kind == "switch":
                if host.n >= 1:
                    pool.append(make_named("switch", host, s={0}))
            elif kind == "eE":
                pool.append(make_named("eE", host, dst=complete_graph(host.n)))
            elif kind == "eN":
                pool.append(make_named("eN", host, dst=empty_graph(host.n)))
            elif kind == "const":
                if host.n >= 1:
                    pool.append(make_named("const", host, target=0))
    return pool


def interpolate(
    target: FunctionGadget,
    gens: GeneratorSet,
    depth: int,
    hosts: list[Graph],
    *,
    embed_limit: int = 4,
    max_nodes: int = 100_000,
) -> InterpolationWitness | None:
    """Bounded-depth search for a chain of generator gadgets, interleaved with
    repositioning embeddings, agreeing with ``target`` on its domain.

    ``depth`` bounds the number of generator applications, ``embed_limit`` the
    repositioning embeddings tried per application, ``max_nodes`` the total
    search nodes.  None means nothing was found within those bounds.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    pool = _named_pool(gens.kinds, tuple(hosts)) + list(gens.extra)
    f_dom = target.dom
    nodes = 0

    def goal(graph: Graph, values: tuple[int, ...]) -> bool:
        for i, x in enumerate(f_dom):
            for j in range(i + 1, len(f_dom)):
                y = f_dom[j]
                if pair_kind(graph, values[i], values[j]) is not pair_kind(
                    target.dst, target.apply(x), target.apply(y)
                ):
                    return False
        return True

    def final_step(graph: Graph, values: tuple[int, ...]) -> FunctionGadget:
        assignment = {values[i]: target.apply(x) for i, x in enumerate(f_dom)}
        return _embedding_step(graph, target.dst, assignment)

    def reposition_candidates(graph: Graph, values: tuple[int, ...], gadget: FunctionGadget):
        image = tuple(sorted(set(values)))
        pattern = graph.induced(image)
        index = {v: i for i, v in enumerate(image)}
        if gens.free_embeddings:
            maps = islice(
                iter_embedding_maps(pattern, gadget.src, allowed=gadget.dom_mask()),
                embed_limit,
            )
            for mapping in maps:
                yield {image[i]: mapping[i] for i in range(len(image))}
        else:
            if graph == gadget.src and all(
                gadget.dom_mask() >> v & 1 for v in image
            ):
                yield {v: v for v in image}

    def dfs(graph: Graph, values: tuple[int, ...], remaining: int, steps, roles, log, seen):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            return None
        if remaining == 0:
            return None
        state = (graph, values)
        if seen.get(state, -1) >= remaining:
            return None
        seen[state] = remaining
        for gadget in pool:
            for assignment in reposition_candidates(graph, values, gadget):
                emb_step = _embedding_step(graph, gadget.src, assignment)
                moved = tuple(assignment[v] for v in values)
                applied = tuple(gadget.apply(v) for v in moved)
                new_steps = steps + [emb_step, gadget]
                new_roles = roles + ["reposition", "generator"]
                new_log = log + [f"reposition into {gadget.label}", f"apply {gadget.label}"]
                if goal(gadget.dst, applied):
                    closing = final_step(gadget.dst, applied)
                    witness = InterpolationWitness(
                        target,
                        f_dom,
                        tuple(new_steps + [closing]),
                        tuple(new_roles + ["reposition"]),
                        tuple(new_log + ["align with target"]),
                    )
                    assert verify_witness(witness)
                    return witness
                found = dfs(
                    gadget.dst, applied, remaining - 1, new_steps, new_roles, new_log, seen
                )
                if found is not None:
                    return found
        return None

    start_values = f_dom
    for d in range(1, depth + 1):
        found = dfs(target.src, start_values, d, [], [], [], {})
        if found is not None:
            return found
    return None


# ---------------------------------------------------------------------------
# edge deletion and collapse procedures


class PatternNotFoundError(RuntimeError):
    """A required copy of a pattern does not exist in the host."""


def delete_edge_step(f_marked: ConstantGraph, host: Graph, k: int) -> FunctionGadget:
    """Gadget defined on a copy of the marked graph in ``host`` that keeps
    every pair pattern except the constant pair, which becomes a non-edge.

    Built by locating a copy of the graph and a copy of the graph with the
    marked edge removed, and mapping the first onto the second.  ``k`` is the
    host's claimed extension level, needed large enough for both copies to
    exist.
    """
    if len(f_marked.constants) != 2:
        raise ValueError("the marked graph needs exactly two constants")
    c0, c1 = f_marked.constants
    if not f_marked.graph.has_edge(c0, c1):
        raise ValueError("the two constants must be joined by an edge")
    source = f_marked.graph
    deleted = Graph.from_edges(
        source.n,
        [e for e in source.edges() if set(e) != {c0, c1}],
    )
    try:
        phi1 = next(iter_embedding_maps(source, host))
    except StopIteration:
        raise PatternNotFoundError(
            f"host has no copy of the marked {source.n}-vertex graph"
        ) from None
    try:
        phi2 = next(iter_embedding_maps(deleted, host))
    except StopIteration:
        raise PatternNotFoundError(
            f"host has no copy of the edge-deleted {source.n}-vertex graph"
        ) from None
    gadget = FunctionGadget(
        host, host, tuple((phi1[i], phi2[i]) for i in range(source.n)), "custom"
    )
    marked_pair = {phi1[c0], phi1[c1]}
    for (x1, _), (x2, _) in combinations(gadget.mapping, 2):
        want = (
            PairKind.NONEDGE
            if {x1, x2} == marked_pair
            else pair_kind(host, x1, x2)
        )
        got = pair_kind(host, gadget.apply(x1), gadget.apply(x2))
        assert got is want
    return gadget


def delete_all_edges(pattern: Graph, host: Graph, k: int) -> InterpolationWitness:
    """Iterate delete_edge_step over the least remaining edge until the image
    of ``pattern`` in ``host`` is edgeless; one generator step per edge.

    The witness target is an eN-labeled gadget built from the final map, so
    its construction-time check independently confirms the empty image.
    """
    try:
        placement = next(iter_embedding_maps(pattern, host))
    except StopIteration:
        raise PatternNotFoundError("host has no copy of the start pattern") from None
    steps: list[FunctionGadget] = [
        _embedding_step(pattern, host, {i: placement[i] for i in range(pattern.n)})
    ]
    roles = ["reposition"]
    log = ["place the pattern in the host"]
    current = pattern
    values = placement
    while True:
        edges = list(current.edges())
        if not edges:
            break
        i, j = edges[0]
        gadget = delete_edge_step(ConstantGraph(current, (i, j)), host, k)
        dom_sorted = gadget.dom
        dom_graph = host.induced(dom_sorted)
        # align the current copy with the gadget's domain so the deleted
        # pair lands on the pair the gadget actually flips
        flip_pair = next(
            (x1, x2)
            for x1, x2 in combinations(dom_sorted, 2)
            if pair_kind(host, x1, x2) is PairKind.EDGE
            and pair_kind(host, gadget.apply(x1), gadget.apply(x2)) is PairKind.NONEDGE
        )
        dom_index = {v: idx for idx, v in enumerate(dom_sorted)}
        alignment = None
        for pin in (flip_pair, flip_pair[::-1]):
            fixed = {i: dom_index[pin[0]], j: dom_index[pin[1]]}
            try:
                mapping = next(iter_embedding_maps(current, dom_graph, fixed=fixed))
            except StopIteration:
                continue
            alignment = {x: dom_sorted[mapping[x]] for x in range(current.n)}
            break
        if alignment is None:
            raise PatternNotFoundError("could not align the copy with the deletion gadget")
        emb_step = _embedding_step(
            host, host, {values[x]: alignment[x] for x in range(current.n)}
        )
        steps.extend([emb_step, gadget])
        roles.extend(["reposition", "generator"])
        log.extend(
            [f"move copy onto the deletion gadget for edge ({i}, {j})", "delete the edge"]
        )
        values = tuple(gadget.apply(alignment[x]) for x in range(current.n))
        current = Graph.from_edges(
            current.n, [e for e in current.edges() if e != (i, j)]
        )
    target = FunctionGadget(
        pattern, host, tuple((x, values[x]) for x in range(pattern.n)), "eN"
    )
    witness = InterpolationWitness(target, tuple(range(pattern.n)), tuple(steps), tuple(roles), tuple(log))
    assert verify_witness(witness)
    return witness


def _least_collapsing_pair(g: FunctionGadget, kind: PairKind) -> tuple[int, int] | None:
    for x1, x2 in combinations(g.dom, 2):
        if pair_kind(g.src, x1, x2) is kind and g.apply(x1) == g.apply(x2):
            return (x1, x2)
    return None


def collapse_all(
    f_set, host: Graph, g: FunctionGadget, h: FunctionGadget
) -> InterpolationWitness:
    """Drive the vertex set ``f_set`` to a single image by repeatedly
    repositioning and applying the edge-collapsing gadget ``g`` or the
    non-edge-collapsing gadget ``h``; at most |F| generator steps.
    """
    f_sorted = tuple(sorted(set(f_set)))
    for gadget, kind, name in ((g, PairKind.EDGE, "g"), (h, PairKind.NONEDGE, "h")):
        if gadget.src != host or gadget.dst != host:
            raise ValueError(f"gadget {name} must map the host to itself")
        if _least_collapsing_pair(gadget, kind) is None:
            noun = "edge" if kind is PairKind.EDGE else "non-edge"
            raise ValueError(f"gadget {name} does not collapse any {noun}")
    steps: list[FunctionGadget] = []
    roles: list[str] = []
    log: list[str] = []
    values = {x: x for x in f_sorted}
    for _ in range(len(f_sorted)):
        image = sorted(set(values.values()))
        if len(image) <= 1:
            break
        s0, s1 = image[0], image[1]
        kind = pair_kind(host, s0, s1)
        gadget = g if kind is PairKind.EDGE else h
        a, b = _least_collapsing_pair(gadget, kind)
        pattern = host.induced(image)
        index = {v: i for i, v in enumerate(image)}
        assignment = None
        for pin in ((a, b), (b, a)):
            fixed = {index[s0]: pin[0], index[s1]: pin[1]}
            try:
                mapping = next(
                    iter_embedding_maps(
                        pattern, host, allowed=gadget.dom_mask(), fixed=fixed
                    )
                )
            except StopIteration:
                continue
            assignment = {image[i]: mapping[i] for i in range(len(image))}
            break
        if assignment is None:
            raise PatternNotFoundError(
                f"no repositioning embedding pinning ({s0}, {s1}) onto ({a}, {b})"
            )
        steps.extend(
            [_embedding_step(host, host, assignment), gadget]
        )
        roles.extend(["reposition", "generator"])
        log.extend(
            [f"pin ({s0}, {s1}) onto the collapsing pair ({a}, {b})", "collapse"]
        )
        values = {x: gadget.apply(assignment[v]) for x, v in values.items()}
    image = sorted(set(values.values()))
    assert len(image) == 1, "collapse loop exceeded its step bound"
    target = make_named("const", host, dom=f_sorted, target=image[0])
    witness = InterpolationWitness(
        target, f_sorted, tuple(steps), tuple(roles), tuple(log)
    )
    assert verify_witness(witness)
    return witness


# ---------------------------------------------------------------------------
# orbit closure on small types


def canonical_form(g: Graph) -> Graph:
    """Least relabeling of ``g``: the edge encoding is minimized over all
    vertex permutations.  Intended for tiny graphs only."""
    if g.n > 8:
        raise ValueError("canonical_form is restricted to at most 8 vertices")
    pairs = list(combinations(range(g.n), 2))
    best = None
    for perm in permutations(range(g.n)):
        code = 0
        for bit, (i, j) in enumerate(pairs):
            if g.has_edge(perm[i], perm[j]):
                code |= 1 << bit
        if best is None or code < best:
            best = code
    edges = [pairs[bit] for bit in range(len(pairs)) if best >> bit & 1]
    return Graph.from_edges(g.n, edges)


@lru_cache(maxsize=None)
def all_graph_types(n: int) -> tuple[Graph, ...]:
    """Canonical representatives of all isomorphism types on n vertices, by
    exhaustive enumeration (1, 2, 4, 11, 34 types for n = 1..5)."""
    if n > 5:
        raise ValueError("type tables are precomputed only up to 5 vertices")
    pairs = list(combinations(range(n), 2))
    seen: set[Graph] = set()
    for code in range(1 << len(pairs)):
        g = Graph.from_edges(n, [pairs[b] for b in range(len(pairs)) if code >> b & 1])
        seen.add(canonical_form(g))
    return tuple(sorted(seen, key=lambda t: sorted(t.edges())))


def _type_images(t: Graph, gens: GeneratorSet):
    for kind in sorted(gens.kinds):
        if kind == "identity":
            continue
        if kind == "minus":
            yield complement_graph(t)
        elif kind == "switch":
            for size in range(t.n + 1):
                for subset in combinations(range(t.n), size):
                    yield switch_graph(t, subset)
        elif kind == "eE":
            yield complete_graph(t.n)
        elif kind == "eN":
            yield empty_graph(t.n)
        elif kind == "const":
            yield empty_graph(1)
    for gadget in gens.extra:
        dom_mask = gadget.dom_mask()
        for mapping in iter_embedding_maps(t, gadget.src, allowed=dom_mask):
            image = sorted({gadget.apply(v) for v in mapping})
            yield gadget.dst.induced(image)


def orbit_closure(start: Graph, gens: GeneratorSet) -> frozenset[Graph]:
    """Least fixed point of the generator actions on induced patterns of at
    most ``start.n`` vertices, as canonical representatives.

    Collapsing generators reduce to smaller types, so the closure may mix
    sizes.  Monotone in the generator set and idempotent.
    """
    if start.n > 5:
        raise ValueError("orbit closure is capped at 5-vertex start graphs")
    first = canonical_form(start)
    closed = {first}
    work = [first]
    while work:
        t = work.pop()
        for img in _type_images(t, gens):
            c = canonical_form(img)
            if c not in closed:
                closed.add(c)
                work.append(c)
    return frozenset(closed)


# ---------------------------------------------------------------------------
# five-class relation classification


class ReductClass(Enum):
    GRAPH = "graph"
    MINUS = "minus"
    SWITCH = "switch"
    MINUS_SWITCH = "minus-switch"
    EQUALITY = "equality"


_CLASS_GENS = {
    ReductClass.GRAPH: frozenset(),
    ReductClass.MINUS: frozenset({"minus"}),
    ReductClass.SWITCH: frozenset({"switch"}),
    ReductClass.MINUS_SWITCH: frozenset({"minus", "switch"}),
}


def join_classes(a: ReductClass, b: ReductClass) -> ReductClass:
    """Join in the five-class lattice: the class of the group generated by the
    two groups together (equality on top, graph at the bottom)."""
    if ReductClass.EQUALITY in (a, b):
        return ReductClass.EQUALITY
    merged = _CLASS_GENS[a] | _CLASS_GENS[b]
    for cls, gens in _CLASS_GENS.items():
        if gens == merged:
            return cls
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class RelationCertificate:
    """Per-relation evidence backing the classification verdict."""

    relation: str
    reduct_class: ReductClass
    equality: EqualityDefinability
    complement: PreservationResult | None
    switch_violations: tuple[tuple[int, tuple[int, ...]], ...]
    switches_checked: int
    switch_subsets_checked: int

    def to_json_dict(self) -> dict:
        out: dict = {
            "relation": self.relation,
            "class": self.reduct_class.value,
            "equality_definable": self.equality.definable,
        }
        if self.equality.witness is not None:
            member, nonmember = self.equality.witness
            out["equality_witness"] = {"in": list(member), "out": list(nonmember)}
        if self.complement is not None:
            out["complement_invariant"] = self.complement.preserved
            if self.complement.witness is not None:
                out["complement_witness"] = list(self.complement.witness)
            out["complement_checked"] = self.complement.checked
            out["switch_invariant"] = not self.switch_violations
            out["switch_violations"] = [
                {"vertex": v, "witness": list(t)} for v, t in self.switch_violations
            ]
            out["switches_checked"] = self.switches_checked
            out["switch_subsets_checked"] = self.switch_subsets_checked
        return out


@dataclass(frozen=True)
class ReductClassification:
    reduct_class: ReductClass
    certificates: tuple[RelationCertificate, ...]
    host_vertices: int
    k: int

    def to_json_dict(self) -> dict:
        return {
            "class": self.reduct_class.value,
            "host_vertices": self.host_vertices,
            "k": self.k,
            "relations": [c.to_json_dict() for c in self.certificates],
        }


def _classify_single(r: Relation, host: Graph) -> RelationCertificate:
    eq = definable_from_equality(r, host)
    if eq.definable:
        return RelationCertificate(r.name, ReductClass.EQUALITY, eq, None, (), 0, 0)
    comp = invariant_under_complement(r, host)
    violations = []
    subsets = 0
    for v in range(host.n):
        res = invariant_under_switch(r, host, v)
        subsets += res.checked
        if not res.preserved:
            violations.append((v, res.witness))
    switch_ok = not violations
    if comp.preserved and switch_ok:
        cls = ReductClass.MINUS_SWITCH
    elif comp.preserved:
        cls = ReductClass.MINUS
    elif switch_ok:
        cls = ReductClass.SWITCH
    else:
        cls = ReductClass.GRAPH
    return RelationCertificate(
        r.name, cls, eq, comp, tuple(violations), host.n, subsets
    )


def classify_reduct(
    relations, host: Graph, k: int, *, check_host: bool = True
) -> ReductClassification:
    """Decision tree on invariances: equality-definable relations land in the
    equality class; otherwise invariance under complement and under every
    single-vertex switch picks one of the remaining four classes.

    Several relations classify jointly as the lattice join of their individual
    classes (the class of the group generated by everything each relation
    allows).  ``k`` is the host's claimed extension level and is verified
    up front unless ``check_host`` is disabled.
    """
    rel_list = list(relations) if isinstance(relations, (list, tuple)) else [relations]
    if not rel_list:
        raise ValueError("need at least one relation")
    max_arity = max(r.arity for r in rel_list)
    if host.n < max_arity:
        raise ValueError(
            f"host has {host.n} vertices, too small for arity {max_arity}"
        )
    if check_host:
        result = check_extension(host, k)
        if not result.passed:
            raise ValueError(
                f"host fails the {k}-extension check at {result.failing}"
            )
    certificates = tuple(_classify_single(r, host) for r in rel_list)
    overall = certificates[0].reduct_class
    for cert in certificates[1:]:
        overall = join_classes(overall, cert.reduct_class)
    return ReductClassification(overall, certificates, host.n, k)
