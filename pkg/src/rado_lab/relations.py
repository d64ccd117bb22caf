"""Finite-arity relations over a graph (parity relations, explicit tuple sets,
quantifier-free formulas) and preservation checking.

Preservation across a graph rewrite is read cross-structure: the identity
vertex map from g to the rewritten graph must preserve the relation computed
by the same defining spec on each side, in both directions.  Least witnesses
are reported in lexicographic order over ordered tuples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Mapping

from .graphs import Graph, complement_graph, switch_graph


class RelationSpecError(ValueError):
    """Raised by the relation mini-language parser."""


class Relation:
    """Base class; subclasses provide ``holds`` and a stable ``name``."""

    arity: int
    name: str

    def holds(self, t: tuple[int, ...], g: Graph) -> bool:
        raise NotImplementedError

    def induced_pair_determined(self) -> bool:
        """True when membership of a tuple depends only on the equalities and
        pair kinds among its entries (used to localize switch scans)."""
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<Relation {self.name}>"


class ParityRelation(Relation):
    """R(k): entries pairwise distinct and an odd number of edges among them."""

    def __init__(self, arity: int):
        if arity < 2:
            raise ValueError("parity relations need arity at least 2")
        self.arity = arity
        self.name = f"parity:{arity}"

    def holds(self, t: tuple[int, ...], g: Graph) -> bool:
        if len(set(t)) != len(t):
            return False
        count = 0
        for x, y in combinations(t, 2):
            if g.has_edge(x, y):
                count += 1
        return count % 2 == 1

    def induced_pair_determined(self) -> bool:
        return True


class TupleSetRelation(Relation):
    """Explicit tuple set; membership does not consult the graph."""

    def __init__(self, arity: int, tuples, graph_name: str | None = None):
        self.arity = arity
        self.tuples = frozenset(tuple(t) for t in tuples)
        for t in self.tuples:
            if len(t) != arity:
                raise ValueError(f"tuple {t} does not have arity {arity}")
        self.graph_name = graph_name
        self.name = f"tuples:{graph_name or '<anon>'}[{len(self.tuples)}]"

    def holds(self, t: tuple[int, ...], g: Graph) -> bool:
        return t in self.tuples

    def induced_pair_determined(self) -> bool:
        # graph-independent, hence trivially local
        return True


# formula AST nodes are plain tuples: ("E", i, j), ("eq", i, j),
# ("not", a), ("and", a, b), ("or", a, b)


class FormulaRelation(Relation):
    """Boolean combination of E(i,j) and xi=xj atoms over tuple positions."""

    def __init__(self, root, arity: int | None = None, name: str | None = None):
        self.root = root
        max_idx = _max_index(root)
        self.arity = arity if arity is not None else max_idx + 1
        if max_idx >= self.arity:
            raise ValueError("formula mentions a position beyond the arity")
        self.name = name or f"formula:{format_formula(root)}"

    def holds(self, t: tuple[int, ...], g: Graph) -> bool:
        return _eval_node(self.root, t, g)

    def induced_pair_determined(self) -> bool:
        return True


def _max_index(node) -> int:
    op = node[0]
    if op in ("E", "eq"):
        return max(node[1], node[2])
    if op == "not":
        return _max_index(node[1])
    return max(_max_index(node[1]), _max_index(node[2]))


def _eval_node(node, t: tuple[int, ...], g: Graph) -> bool:
    op = node[0]
    if op == "E":
        x, y = t[node[1]], t[node[2]]
        return x != y and g.has_edge(x, y)
    if op == "eq":
        return t[node[1]] == t[node[2]]
    if op == "not":
        return not _eval_node(node[1], t, g)
    if op == "and":
        return _eval_node(node[1], t, g) and _eval_node(node[2], t, g)
    if op == "or":
        return _eval_node(node[1], t, g) or _eval_node(node[2], t, g)
    raise ValueError(f"unknown formula node {op!r}")


def format_formula(node) -> str:
    op = node[0]
    if op == "E":
        return f"E({node[1]},{node[2]})"
    if op == "eq":
        return f"x{node[1]}=x{node[2]}"
    if op == "not":
        return f"!{format_formula(node[1])}"
    sym = "&" if op == "and" else "|"
    return f"({format_formula(node[1])} {sym} {format_formula(node[2])})"


# ---------------------------------------------------------------------------
# convenience constructors


def parity_relation(k: int) -> ParityRelation:
    return ParityRelation(k)


def edge_relation() -> FormulaRelation:
    return FormulaRelation(("E", 0, 1), name="E")


def nonedge_relation() -> FormulaRelation:
    return FormulaRelation(
        ("and", ("not", ("E", 0, 1)), ("not", ("eq", 0, 1))), name="N"
    )


def distinct_relation(arity: int = 2) -> FormulaRelation:
    node = None
    for i, j in combinations(range(arity), 2):
        atom = ("not", ("eq", i, j))
        node = atom if node is None else ("and", node, atom)
    return FormulaRelation(node, arity=arity, name=f"distinct:{arity}")


# ---------------------------------------------------------------------------
# evaluation and preservation


def eval_relation(r: Relation, t: tuple[int, ...], g: Graph) -> bool:
    if len(t) != r.arity:
        raise ValueError(f"tuple has length {len(t)}, relation arity is {r.arity}")
    for x in t:
        if not 0 <= x < g.n:
            raise ValueError(f"tuple entry {x} is not a vertex of the graph")
    return r.holds(tuple(t), g)


@dataclass(frozen=True)
class PreservationResult:
    """``preserved`` or the least violating tuple; ``checked`` counts the
    tuples (or vertex subsets, on the parity fast path) examined."""

    preserved: bool
    witness: tuple[int, ...] | None = None
    checked: int = 0


def _identity_total(mapping: Mapping[int, int], src: Graph) -> bool:
    return len(mapping) == src.n and all(mapping.get(v) == v for v in range(src.n))


def _parity_bitparallel(arity: int, src: Graph, dst: Graph) -> PreservationResult:
    """Identity-map parity scan over one host.

    Enumerates sorted (arity-1)-subsets; the last coordinate is handled for
    all candidates at once: xor of adjacency rows over the base gives, per
    candidate bit, the parity of its edge count into the base.  First
    violating sorted tuple is the least ordered witness because parity
    relations are symmetric and empty on non-distinct tuples.
    """
    n = src.n
    full = src.full_mask
    checked = 0
    for base in combinations(range(n), arity - 1):
        checked += 1
        k_src = sum(1 for x, y in combinations(base, 2) if src.has_edge(x, y))
        k_dst = sum(1 for x, y in combinations(base, 2) if dst.has_edge(x, y))
        p_src = 0
        p_dst = 0
        for x in base:
            p_src ^= src.row(x)
            p_dst ^= dst.row(x)
        member_src = p_src if k_src % 2 == 0 else ~p_src & full
        member_dst = p_dst if k_dst % 2 == 0 else ~p_dst & full
        above = full ^ ((1 << (base[-1] + 1)) - 1)
        violations = member_src & ~member_dst & above
        if violations:
            d = (violations & -violations).bit_length() - 1
            return PreservationResult(False, base + (d,), checked)
    return PreservationResult(True, None, checked)


def _parity_mapped(
    arity: int, mapping: Mapping[int, int], src: Graph, dst: Graph
) -> PreservationResult:
    """Parity scan for an arbitrary (possibly partial, possibly collapsing)
    vertex map: sorted subsets of the domain, directly evaluated."""
    dom = sorted(mapping)
    checked = 0
    for subset in combinations(dom, arity):
        checked += 1
        edges = sum(1 for x, y in combinations(subset, 2) if src.has_edge(x, y))
        if edges % 2 == 0:
            continue
        images = tuple(mapping[x] for x in subset)
        if len(set(images)) != arity:
            return PreservationResult(False, subset, checked)
        img_edges = sum(1 for x, y in combinations(images, 2) if dst.has_edge(x, y))
        if img_edges % 2 == 0:
            return PreservationResult(False, subset, checked)
    return PreservationResult(True, None, checked)


def preserved_by_map(
    r: Relation, mapping: Mapping[int, int], src: Graph, dst: Graph
) -> PreservationResult:
    """Least tuple t with t in r(src) and mapping(t) not in r(dst), if any.

    Tuples with an entry outside the mapping's domain are skipped.
    """
    for x, y in mapping.items():
        if not 0 <= x < src.n:
            raise ValueError(f"domain vertex {x} out of range")
        if not 0 <= y < dst.n:
            raise ValueError(f"image vertex {y} out of range")
    if isinstance(r, ParityRelation):
        if src.n == dst.n and _identity_total(mapping, src):
            return _parity_bitparallel(r.arity, src, dst)
        return _parity_mapped(r.arity, mapping, src, dst)
    dom = sorted(mapping)
    checked = 0
    for t in product(dom, repeat=r.arity):
        checked += 1
        if not r.holds(t, src):
            continue
        image = tuple(mapping[x] for x in t)
        if not r.holds(image, dst):
            return PreservationResult(False, t, checked)
    return PreservationResult(True, None, checked)


def _identity_mapping(g: Graph) -> dict[int, int]:
    return {v: v for v in range(g.n)}


def invariant_under_complement(r: Relation, g: Graph) -> PreservationResult:
    """Identity-map preservation from g to its complement, both directions;
    the witness of the first failing direction is reported."""
    comp = complement_graph(g)
    forward = preserved_by_map(r, _identity_mapping(g), g, comp)
    if not forward.preserved:
        return forward
    backward = preserved_by_map(r, _identity_mapping(g), comp, g)
    return PreservationResult(
        backward.preserved, backward.witness, forward.checked + backward.checked
    )


def _switch_scan_parity(
    arity: int, src: Graph, dst: Graph, v: int
) -> PreservationResult:
    # only subsets containing v can change membership, and the map
    # B -> sorted(B + {v}) is lexicographically monotone, so the first
    # violation found here is the global least witness
    n = src.n
    others = [x for x in range(n) if x != v]
    checked = 0
    for rest in combinations(others, arity - 1):
        checked += 1
        subset = tuple(sorted(rest + (v,)))
        src_edges = sum(1 for x, y in combinations(subset, 2) if src.has_edge(x, y))
        if src_edges % 2 == 0:
            continue
        dst_edges = sum(1 for x, y in combinations(subset, 2) if dst.has_edge(x, y))
        if dst_edges % 2 == 0:
            return PreservationResult(False, subset, checked)
    return PreservationResult(True, None, checked)


def _tuples_containing(n: int, arity: int, v: int) -> Iterator[tuple[int, ...]]:
    # ordered tuples over range(n) containing v, in lexicographic order,
    # generated without visiting the tuples that avoid v
    def rec(prefix: tuple[int, ...], has_v: bool) -> Iterator[tuple[int, ...]]:
        if len(prefix) == arity:
            yield prefix
            return
        if not has_v and len(prefix) == arity - 1:
            yield prefix + (v,)
            return
        for x in range(n):
            yield from rec(prefix + (x,), has_v or x == v)

    yield from rec((), False)


def _switch_scan_generic(
    r: Relation, src: Graph, dst: Graph, v: int
) -> PreservationResult:
    checked = 0
    for t in _tuples_containing(src.n, r.arity, v):
        checked += 1
        if r.holds(t, src) and not r.holds(t, dst):
            return PreservationResult(False, t, checked)
    return PreservationResult(True, None, checked)


def invariant_under_switch(r: Relation, g: Graph, v: int) -> PreservationResult:
    """Identity-map preservation between g and switch_graph(g, {v}), both
    directions.

    For pair-kind-determined relations only tuples containing v can witness a
    violation, so the scan is restricted accordingly; the restricted least
    witness equals the global one.
    """
    if not 0 <= v < g.n:
        raise ValueError(f"switch vertex {v} out of range")
    sw = switch_graph(g, {v})
    if isinstance(r, TupleSetRelation):
        # graph-independent membership: identity map always preserves
        return PreservationResult(True, None, 0)
    if not r.induced_pair_determined():
        forward = preserved_by_map(r, _identity_mapping(g), g, sw)
        if not forward.preserved:
            return forward
        backward = preserved_by_map(r, _identity_mapping(g), sw, g)
        return PreservationResult(
            backward.preserved, backward.witness, forward.checked + backward.checked
        )
    if isinstance(r, ParityRelation):
        forward = _switch_scan_parity(r.arity, g, sw, v)
        if not forward.preserved:
            return forward
        backward = _switch_scan_parity(r.arity, sw, g, v)
    else:
        forward = _switch_scan_generic(r, g, sw, v)
        if not forward.preserved:
            return forward
        backward = _switch_scan_generic(r, sw, g, v)
    return PreservationResult(
        backward.preserved, backward.witness, forward.checked + backward.checked
    )


@dataclass(frozen=True)
class EqualityDefinability:
    """Whether membership depends only on the equality pattern of the tuple.

    On a negative answer ``witness`` is (member tuple, non-member tuple) with
    the same pattern, found first in the lexicographic scan.
    """

    definable: bool
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    checked: int = 0


def _equality_pattern(t: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(t.index(x) for x in t)


def definable_from_equality(r: Relation, g: Graph) -> EqualityDefinability:
    first_in: dict[tuple[int, ...], tuple[int, ...]] = {}
    first_out: dict[tuple[int, ...], tuple[int, ...]] = {}
    checked = 0
    for t in product(range(g.n), repeat=r.arity):
        checked += 1
        pattern = _equality_pattern(t)
        if r.holds(t, g):
            if pattern in first_out:
                return EqualityDefinability(False, (t, first_out[pattern]), checked)
            first_in.setdefault(pattern, t)
        else:
            if pattern in first_in:
                return EqualityDefinability(False, (first_in[pattern], t), checked)
            first_out.setdefault(pattern, t)
    return EqualityDefinability(True, None, checked)


# ---------------------------------------------------------------------------
# relation spec mini-language:  parity:K | tuples:@file | formula:"..."


_TOKEN = re.compile(r"\s*(E\(\d+,\d+\)|x\d+\s*!?=\s*x\d+|[!&|()])")


def _tokenize_formula(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise RelationSpecError(
                    f"unknown atom near position {pos}: {text[pos:pos + 12]!r}"
                )
            break
        tokens.append(m.group(1).replace(" ", ""))
        pos = m.end()
    return tokens


def _parse_formula(text: str):
    tokens = _tokenize_formula(text)
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else None

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def parse_or():
        node = parse_and()
        while peek() == "|":
            take()
            node = ("or", node, parse_and())
        return node

    def parse_and():
        node = parse_unary()
        while peek() == "&":
            take()
            node = ("and", node, parse_unary())
        return node

    def parse_unary():
        tok = peek()
        if tok is None:
            raise RelationSpecError("unexpected end of formula")
        if tok == "!":
            take()
            return ("not", parse_unary())
        if tok == "(":
            take()
            node = parse_or()
            if peek() != ")":
                raise RelationSpecError("missing closing parenthesis")
            take()
            return node
        take()
        if tok.startswith("E("):
            i, j = tok[2:-1].split(",")
            return ("E", int(i), int(j))
        m = re.fullmatch(r"x(\d+)(!?=)x(\d+)", tok)
        if m:
            atom = ("eq", int(m.group(1)), int(m.group(3)))
            return ("not", atom) if m.group(2) == "!=" else atom
        raise RelationSpecError(f"unknown token {tok!r}")

    node = parse_or()
    if idx != len(tokens):
        raise RelationSpecError(f"trailing tokens from {tokens[idx]!r}")
    return node


def parse_tuple_file(text: str, graph_name: str | None = None) -> TupleSetRelation:
    """Tuple file: header line ``arity <m>``, then one tuple of m vertex ids
    per line."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("arity "):
        raise RelationSpecError("tuple file must start with 'arity <m>'")
    try:
        arity = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise RelationSpecError("malformed arity header") from None
    tuples = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != arity:
            raise RelationSpecError(f"line {lineno}: expected {arity} entries")
        try:
            tuples.append(tuple(int(x) for x in parts))
        except ValueError:
            raise RelationSpecError(f"line {lineno}: entries must be integers") from None
    return TupleSetRelation(arity, tuples, graph_name)


def parse_relation_spec(spec: str, *, read_file=None) -> Relation:
    """Parse ``parity:K``, ``tuples:@file`` or ``formula:...`` specs.

    ``read_file`` resolves the ``@file`` reference for tuple sets and defaults
    to reading from the filesystem.
    """
    if spec.startswith("parity:"):
        body = spec[len("parity:"):]
        try:
            k = int(body)
        except ValueError:
            raise RelationSpecError(f"parity arity must be an integer, got {body!r}") from None
        if k < 2:
            raise RelationSpecError("parity arity must be at least 2")
        return ParityRelation(k)
    if spec.startswith("tuples:@"):
        path = spec[len("tuples:@"):]
        if read_file is None:
            with open(path, "r", encoding="ascii") as fh:
                text = fh.read()
        else:
            text = read_file(path)
        return parse_tuple_file(text, graph_name=path)
    if spec.startswith("formula:"):
        body = spec[len("formula:"):].strip()
        if len(body) >= 2 and body[0] == body[-1] == '"':
            body = body[1:-1]
        if not body:
            raise RelationSpecError("empty formula")
        return FormulaRelation(_parse_formula(body))
    raise RelationSpecError(
        f"unknown relation spec {spec!r}; expected parity:K, tuples:@file or formula:..."
    )
